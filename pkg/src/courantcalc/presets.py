"""Bundled algebroid corpus and JSON (de)serialization, schema format 1.

Structure schema::

    {"format": 1, "name": "...", "n": 2, "r": 4,
     "pairing": [["0", "1"], ...],          # rationals as strings or ints
     "anchor": [["1", "0"], ...],           # r x n polynomial strings
     "c": [[["0", ...], ...], ...]}         # r x r x r polynomial strings

or, equivalently, ``{"format": 1, "preset": "standard", "args": {"n": 2}}``;
bare preset names such as ``"standard2"`` are also accepted wherever a
structure is expected.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Callable

from .courant import CourantStructure, StructureError
from .linalg import Mat
from .poly import Poly, coords, parse_rat

FORMAT_VERSION = 1


def _zero_c(r: int):
    return [[[0 for _ in range(r)] for _ in range(r)] for _ in range(r)]


def standard(n: int) -> CourantStructure:
    """TM + T*M over R^n with the untwisted Dorfman bracket, in the frame
    (d/dx1..d/dxn, dx1..dxn)."""
    return standard_twisted(n, {})


def standard_twisted(n: int, h: dict[tuple[int, int, int], object]) -> CourantStructure:
    """H-twisted standard structure; ``h`` maps increasing 0-based triples
    (i, j, k) to the coefficient of dx^{i+1} dx^{j+1} dx^{k+1}.  The 3-form
    must be closed."""
    r = 2 * n
    if n < 1:
        raise StructureError("standard structure needs n >= 1")
    universe = coords(n)
    full: dict[tuple[int, int, int], Poly] = {}
    for (i, j, k), value in h.items():
        if not 0 <= i < j < k < n:
            raise StructureError(f"H component key {(i, j, k)} not an increasing triple")
        value = value if isinstance(value, Poly) else (
            Poly.parse(value, vars=universe) if isinstance(value, str)
            else Poly.const(value, universe))
        for perm, sign in (((i, j, k), 1), ((j, k, i), 1), ((k, i, j), 1),
                           ((j, i, k), -1), ((i, k, j), -1), ((k, j, i), -1)):
            full[perm] = sign * value
    _check_closed(full, n)

    pairing = [[0] * r for _ in range(r)]
    for i in range(n):
        pairing[i][n + i] = 1
        pairing[n + i][i] = 1
    anchor = [[1 if j == i else 0 for j in range(n)] for i in range(n)]
    anchor += [[0] * n for _ in range(n)]
    c = _zero_c(r)
    zero = Poly.zero(universe)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                # [[d_i, d_j]] = iota_{d_i} iota_{d_j} H = H(d_j, d_i, .)
                coeff = full.get((j, i, k), zero)
                if coeff:
                    c[i][j][n + k] = coeff
    name = f"standard{n}" if not h else f"standard_twisted{n}"
    return CourantStructure(n, r, Mat(pairing), anchor, c, name=name)


def _check_closed(full: dict[tuple[int, int, int], Poly], n: int):
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                for l in range(k + 1, n):
                    zero = Poly.zero(coords(n))
                    term = (
                        full.get((j, k, l), zero).partial(f"x{i + 1}")
                        - full.get((i, k, l), zero).partial(f"x{j + 1}")
                        + full.get((i, j, l), zero).partial(f"x{k + 1}")
                        - full.get((i, j, k), zero).partial(f"x{l + 1}"))
                    if not term.is_zero:
                        raise StructureError("twisting 3-form is not closed")


def silent(n: int, r: int, pairing: Mat | None = None) -> CourantStructure:
    """Zero anchor, zero bracket; the differential vanishes identically."""
    g = pairing if pairing is not None else Mat.identity(r)
    anchor = [[0] * n for _ in range(r)]
    return CourantStructure(n, r, g, anchor, _zero_c(r), name=f"silent_{n}_{r}")


def quadratic_lie(name: str, c: list[list[list]], pairing: Mat) -> CourantStructure:
    """Point-base structure: a Lie algebra with an invariant pairing."""
    r = len(c)
    anchor = [[] for _ in range(r)]
    return CourantStructure(0, r, pairing, anchor, c, name=name)


def so3_killing() -> CourantStructure:
    c = _zero_c(3)
    eps = {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1,
           (1, 0, 2): -1, (2, 1, 0): -1, (0, 2, 1): -1}
    for (i, j, k), sign in eps.items():
        c[i][j][k] = sign
    return quadratic_lie("so3_killing", c, Mat([[-2, 0, 0], [0, -2, 0], [0, 0, -2]]))


def sl2_killing() -> CourantStructure:
    # basis (h, e, f): [h,e] = 2e, [h,f] = -2f, [e,f] = h
    c = _zero_c(3)
    c[0][1][1] = 2
    c[1][0][1] = -2
    c[0][2][2] = -2
    c[2][0][2] = 2
    c[1][2][0] = 1
    c[2][1][0] = -1
    return quadratic_lie("sl2_killing", c, Mat([[8, 0, 0], [0, 0, 4], [0, 4, 0]]))


def abelian(d: int = 3) -> CourantStructure:
    return quadratic_lie(f"abelian{d}", _zero_c(d), Mat.identity(d))


def double_aff1() -> CourantStructure:
    """Double of the two-dimensional nonabelian Lie bialgebra with zero
    cobracket: the semidirect product aff(1) x aff(1)* with the canonical
    pairing.  Basis order (H, X, H*, X*)."""
    c = _zero_c(4)
    c[0][1][1] = 1    # [H, X] = X
    c[1][0][1] = -1
    c[0][3][3] = -1   # [H, X*] = -X*
    c[3][0][3] = 1
    c[1][3][2] = 1    # [X, X*] = H*
    c[3][1][2] = -1
    pairing = [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]
    return quadratic_lie("double_aff1", c, Mat(pairing))


def negative_control() -> CourantStructure:
    """standard(2) with one structure-function slot bumped by +1; fails C3."""
    E = standard(2)
    return perturb_structure_function(E, 0, 1, 2, 1)


def perturb_structure_function(E: CourantStructure, a: int, b: int, k: int,
                               delta) -> CourantStructure:
    c = [[[E.c[i][j][l] for l in range(E.r)] for j in range(E.r)] for i in range(E.r)]
    c[a][b][k] = c[a][b][k] + Poly.const(Fraction(delta), E.coords)
    return CourantStructure(E.n, E.r, E.pairing, E.anchor, c,
                            name=f"{E.name or 'structure'}_perturbed")


PRESETS: dict[str, Callable[[], CourantStructure]] = {
    "standard1": lambda: standard(1),
    "standard2": lambda: standard(2),
    "standard3": lambda: standard(3),
    "standard_twisted3": lambda: standard_twisted(3, {(0, 1, 2): 1}),
    "silent_1_2": lambda: silent(1, 2),
    "so3_killing": so3_killing,
    "sl2_killing": sl2_killing,
    "abelian3": abelian,
    "double_aff1": double_aff1,
}

PARAMETRIC_PRESETS: dict[str, Callable[..., CourantStructure]] = {
    "standard": standard,
    "standard_twisted": lambda n, h: standard_twisted(
        int(n), {tuple(int(v) for v in key.split(",")): value
                 for key, value in h.items()}),
    "silent": silent,
    "quadratic_lie": lambda name, c, pairing: quadratic_lie(
        name, c, Mat(pairing)),
}

CORPUS: tuple[str, ...] = tuple(PRESETS)


def corpus() -> list[CourantStructure]:
    return [PRESETS[name]() for name in CORPUS]


# -- JSON ---------------------------------------------------------------------


def structure_to_json(E: CourantStructure) -> dict:
    return {
        "format": FORMAT_VERSION,
        "name": E.name,
        "n": E.n,
        "r": E.r,
        "pairing": E.pairing.to_json(),
        "anchor": [[str(p) for p in row] for row in E.anchor],
        "c": [[[str(p) for p in row] for row in plane] for plane in E.c],
    }


def structure_from_json(data) -> CourantStructure:
    if isinstance(data, str):
        if data in PRESETS:
            return PRESETS[data]()
        raise StructureError(f"unknown preset {data!r}")
    if not isinstance(data, dict):
        raise StructureError("structure description must be an object or preset name")
    if data.get("format", FORMAT_VERSION) != FORMAT_VERSION:
        raise StructureError(f"unsupported format {data.get('format')!r}")
    if "preset" in data:
        name = data["preset"]
        args = data.get("args", {})
        if name in PRESETS and not args:
            return PRESETS[name]()
        if name in PARAMETRIC_PRESETS:
            return PARAMETRIC_PRESETS[name](**args)
        raise StructureError(f"unknown preset {name!r}")
    try:
        n, r = int(data["n"]), int(data["r"])
        pairing = Mat(data["pairing"])
        anchor = data["anchor"]
        c = data["c"]
    except (KeyError, TypeError, ValueError) as exc:
        raise StructureError(f"malformed structure description: {exc}") from exc
    return CourantStructure(n, r, pairing, anchor, c, name=data.get("name", ""))


def load_structure(source: str | Path | dict) -> CourantStructure:
    """Accept a preset name, a path to a JSON file, or a parsed dict."""
    if isinstance(source, dict):
        return structure_from_json(source)
    text = str(source)
    if text in PRESETS:
        return PRESETS[text]()
    path = Path(text)
    if not path.exists():
        raise StructureError(f"no such preset or file: {text!r}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise StructureError(f"invalid JSON in {text!r}: {exc}") from exc
    return structure_from_json(data)


def write_preset_files(directory: str | Path) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name in CORPUS:
        path = directory / f"{name}.json"
        payload = structure_to_json(PRESETS[name]())
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        written.append(path)
    return written
