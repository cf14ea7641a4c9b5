"""Dirac structures: verification, restriction of cochains, the induced
Lie algebroid differential, and relative modular classes.

A candidate is a globally framed half-rank subbundle given by polynomial
sections.  Checking runs: rank (generic, by fraction-free elimination over
the polynomial ring), isotropy (half-rank isotropic forces L-perp = L), and
bracket closure, where the closure coefficients are solved exactly with a
bounded-degree polynomial ansatz and give the induced Lie algebroid
structure functions.

Restricted cochains are totally skew (the symbol terms die on isotropic
tuples), and the induced differential d_L is the classical Cartan sum — the
same alternating-sum code path used to cross-check the ambient differential,
with brackets expanded through the closure coefficients.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .cochains import Cochain, cartan_d_value
from .cohomology import x_monomials
from .courant import CourantStructure, Section, StructureError, VectorField
from .linalg import Mat, poly_mat_rank, solve_linear
from .poly import NEG_INF, Poly


class DiracError(ValueError):
    pass


@dataclass
class DiracReport:
    ok: bool
    rank_ok: bool
    isotropic: bool
    involutive: bool
    witness: dict | None = None
    closure: list[list[list[Poly]]] | None = None  # f[i][j][k]

    def to_json(self) -> dict:
        out = {"ok": self.ok, "rank_ok": self.rank_ok,
               "isotropic": self.isotropic, "involutive": self.involutive}
        if self.witness:
            out["witness"] = self.witness
        if self.closure is not None:
            out["closure"] = [[[str(p) for p in row] for row in plane]
                              for plane in self.closure]
        return out


@dataclass(frozen=True)
class DiracSubbundle:
    """A verified Dirac structure with its induced Lie algebroid data."""

    structure: CourantStructure
    frame: tuple[Section, ...]
    closure: tuple  # f[i][j][k] with [[l_i, l_j]] = f[i][j][k] l_k

    @property
    def q(self) -> int:
        return len(self.frame)

    def anchor_apply(self, coeffs: tuple[Poly, ...], f: Poly) -> Poly:
        """rho_L(u)(f) for u given by L-frame coefficients."""
        E = self.structure
        section = _combine(E, self.frame, coeffs)
        return E.anchor_apply(section, f)

    def induced_bracket(self, u: tuple[Poly, ...], v: tuple[Poly, ...]) -> tuple[Poly, ...]:
        """Lie algebroid bracket on L-frame coefficient vectors."""
        E = self.structure
        out = [Poly.zero(E.coords) for _ in range(self.q)]
        for k in range(self.q):
            out[k] = out[k] + self.anchor_apply(u, v[k]) - self.anchor_apply(v, u[k])
            for i in range(self.q):
                for j in range(self.q):
                    fij = self.closure[i][j][k]
                    if not fij.is_zero and not u[i].is_zero and not v[j].is_zero:
                        out[k] = out[k] + u[i] * v[j] * fij
        return tuple(out)

    def coefficient_frame(self, i: int) -> tuple[Poly, ...]:
        E = self.structure
        return tuple(Poly.const(1 if j == i else 0, E.coords) for j in range(self.q))


def _combine(E: CourantStructure, frame, coeffs) -> Section:
    comps = [Poly.zero(E.coords) for _ in range(E.r)]
    for c, ell in zip(coeffs, frame):
        if c.is_zero:
            continue
        for a in range(E.r):
            if not ell.comps[a].is_zero:
                comps[a] = comps[a] + c * ell.comps[a]
    return Section(tuple(comps))


def check_dirac(E: CourantStructure, frame_sections, degree_bound: int | None = None) -> DiracReport:
    """Verify half rank, isotropy, and involutivity; on success the report
    carries the induced structure functions."""
    frame = tuple(E.section(s) if not isinstance(s, Section) else s
                  for s in frame_sections)
    if E.r % 2 != 0:
        raise DiracError("ambient rank must be even for a Dirac structure")
    q = E.r // 2
    if len(frame) != q:
        raise DiracError(f"frame must have {q} sections, got {len(frame)}")
    coeff_matrix = [[ell.comps[a] for a in range(E.r)] for ell in frame]
    rank_ok = poly_mat_rank(coeff_matrix) == q
    if not rank_ok:
        return DiracReport(ok=False, rank_ok=False, isotropic=False,
                           involutive=False,
                           witness={"reason": "frame is rank-deficient"})

    for i in range(q):
        for j in range(i, q):
            pairing = E.pair(frame[i], frame[j])
            if not pairing.is_zero:
                return DiracReport(
                    ok=False, rank_ok=True, isotropic=False, involutive=False,
                    witness={"reason": "isotropy fails",
                             "i": i, "j": j, "pairing": str(pairing)})

    closure: list[list[list[Poly]]] = [[None] * q for _ in range(q)]
    for i in range(q):
        for j in range(q):
            bracket = E.bracket(frame[i], frame[j])
            coeffs = _solve_in_span(E, frame, bracket, degree_bound)
            if coeffs is None:
                return DiracReport(
                    ok=False, rank_ok=True, isotropic=True, involutive=False,
                    witness={"reason": "bracket leaves the span",
                             "i": i, "j": j,
                             "bracket": bracket.to_json()})
            closure[i][j] = list(coeffs)
    return DiracReport(ok=True, rank_ok=True, isotropic=True, involutive=True,
                       closure=closure)


def _solve_in_span(E: CourantStructure, frame, target: Section,
                   degree_bound: int | None):
    """Solve target = sum_k f_k * frame_k with polynomial coefficients of
    bounded degree, by exact linear algebra on coefficients."""
    if degree_bound is None:
        frame_deg = max((0, *(int(p.degree()) for ell in frame
                              for p in ell.comps if p.degree() != NEG_INF)))
        target_deg = max((0, *(int(p.degree()) for p in target.comps
                               if p.degree() != NEG_INF)))
        degree_bound = target_deg + frame_deg + 1
    monos = x_monomials(E.n, degree_bound)
    unknowns = [(k, exp) for k in range(len(frame)) for exp in monos]
    row_index: dict[tuple[int, tuple[int, ...]], int] = {}
    rows: list[list[Fraction]] = []

    def row_for(key):
        if key not in row_index:
            row_index[key] = len(rows)
            rows.append([Fraction(0)] * len(unknowns))
        return row_index[key]

    for col, (k, exp) in enumerate(unknowns):
        mono = Poly(E.coords, {exp: Fraction(1)})
        for a in range(E.r):
            contrib = mono * frame[k].comps[a]
            for e2, c in contrib.terms.items():
                rows[row_for((a, e2))][col] = rows[row_for((a, e2))][col] + c
    rhs_entries: dict[tuple[int, tuple[int, ...]], Fraction] = {}
    for a in range(E.r):
        for e2, c in target.comps[a].terms.items():
            rhs_entries[(a, e2)] = c
    for key in rhs_entries:
        row_for(key)
    rhs = [Fraction(0)] * len(rows)
    for key, c in rhs_entries.items():
        rhs[row_index[key]] = c
    solution = solve_linear(Mat(rows), rhs)
    if solution is None:
        return None
    out = []
    for k in range(len(frame)):
        acc = Poly.zero(E.coords)
        for col, (kk, exp) in enumerate(unknowns):
            if kk == k and solution[col]:
                acc = acc + Poly(E.coords, {exp: solution[col]})
        out.append(acc)
    # exactness is verified, not assumed
    recombined = _combine(E, frame, out)
    if recombined != target:
        return None
    return tuple(out)


def dirac_subbundle(E: CourantStructure, frame_sections,
                    degree_bound: int | None = None) -> DiracSubbundle:
    report = check_dirac(E, frame_sections, degree_bound)
    if not report.ok:
        raise DiracError(f"not a Dirac structure: {report.witness}")
    frame = tuple(E.section(s) if not isinstance(s, Section) else s
                  for s in frame_sections)
    closure = tuple(tuple(tuple(row) for row in plane) for plane in report.closure)
    return DiracSubbundle(structure=E, frame=frame, closure=closure)


# -- restriction and the induced differential -----------------------------------


@dataclass(frozen=True)
class LForm:
    """Totally skew multilinear form on the L-frame with polynomial values."""

    subbundle: DiracSubbundle
    degree: int
    comps: tuple  # mapping increasing index tuples -> Poly, as sorted items

    @classmethod
    def build(cls, L: DiracSubbundle, degree: int, values: dict) -> "LForm":
        E = L.structure
        clean = {}
        for key, value in values.items():
            key = tuple(key)
            if list(key) != sorted(set(key)) or len(key) != degree:
                raise DiracError(f"component key {key!r} must be strictly increasing")
            value = E.function(value)
            if not value.is_zero:
                clean[key] = value
        return cls(L, degree, tuple(sorted(clean.items())))

    def component(self, key: tuple[int, ...]) -> Poly:
        for k, v in self.comps:
            if k == key:
                return v
        return Poly.zero(self.subbundle.structure.coords)

    def evaluate_indices(self, indices: tuple[int, ...]) -> Poly:
        """Skew evaluation on a frame index tuple (repeats give zero)."""
        if len(set(indices)) != len(indices):
            return Poly.zero(self.subbundle.structure.coords)
        order = tuple(sorted(indices))
        sign = _sort_sign(indices)
        return sign * self.component(order)

    def evaluate(self, *coeff_vectors) -> Poly:
        """Multilinear skew evaluation on L-coefficient vectors."""
        E = self.subbundle.structure
        if len(coeff_vectors) != self.degree:
            raise DiracError("wrong arity for L-form evaluation")
        total = Poly.zero(E.coords)
        q = self.subbundle.q
        for indices in itertools.product(range(q), repeat=self.degree):
            base = self.evaluate_indices(indices)
            if base.is_zero:
                continue
            factor = Poly.const(1, E.coords)
            for vec, idx in zip(coeff_vectors, indices):
                factor = factor * vec[idx]
                if factor.is_zero:
                    break
            if not factor.is_zero:
                total = total + factor * base
        return total

    @property
    def is_zero(self) -> bool:
        return not self.comps

    def __eq__(self, other) -> bool:
        if not isinstance(other, LForm):
            return NotImplemented
        if not self.comps and not other.comps:
            return True
        return self.degree == other.degree and self.comps == other.comps

    def to_json(self) -> dict:
        return {"degree": self.degree,
                "components": {",".join(str(i + 1) for i in k): str(v)
                               for k, v in self.comps}}


def _sort_sign(indices) -> int:
    arr = list(indices)
    sign = 1
    for i in range(1, len(arr)):
        j = i
        while j > 0 and arr[j - 1] > arr[j]:
            arr[j - 1], arr[j] = arr[j], arr[j - 1]
            sign = -sign
            j -= 1
    return sign


def restrict(omega: Cochain, L: DiracSubbundle) -> LForm:
    """Evaluate a cochain on L-frame tuples; the result is totally skew."""
    k = omega.degree
    values = {}
    for key in itertools.combinations(range(L.q), k):
        value = omega.evaluate(*(L.frame[i] for i in key))
        if not value.is_zero:
            values[key] = value
    return LForm.build(L, k, values)


def d_l(form: LForm) -> LForm:
    """Induced Lie algebroid differential, via the same Cartan alternating
    sum used for the ambient complex (symbols vanish on the frame)."""
    L = form.subbundle
    values = {}
    for key in itertools.combinations(range(L.q), form.degree + 1):
        args = [L.coefficient_frame(i) for i in key]
        value = cartan_d_value(form.evaluate, L.anchor_apply, L.induced_bracket, args)
        if not value.is_zero:
            values[key] = value
    return LForm.build(L, form.degree + 1, values)


def lie_algebroid_jacobi_defect(L: DiracSubbundle) -> Poly | None:
    """First nonzero Jacobi defect of the induced bracket, or None."""
    for i in range(L.q):
        for j in range(L.q):
            for k in range(L.q):
                u, v, w = (L.coefficient_frame(x) for x in (i, j, k))
                lhs = L.induced_bracket(L.induced_bracket(u, v), w)
                mid = L.induced_bracket(u, L.induced_bracket(v, w))
                rhs = L.induced_bracket(v, L.induced_bracket(u, w))
                for a in range(L.q):
                    defect = lhs[a] - mid[a] + rhs[a]
                    if not defect.is_zero:
                        return defect
    return None


def relative_modular_class(E: CourantStructure, L: DiracSubbundle) -> tuple[LForm, bool]:
    """Degree-1 cocycle of L relative to the (vanishing) ambient class: the
    Lie algebroid modular cocycle of L for the trivialized volume on
    top(L) tensor top(T*M); returns (cocycle, d_L-closedness)."""
    values = {}
    for i in range(L.q):
        acc = Poly.zero(E.coords)
        for j in range(L.q):
            acc = acc + L.closure[i][j][j]
        rho_i = E.rho(L.frame[i])
        for k in range(E.n):
            acc = acc + rho_i.comps[k].partial(f"x{k + 1}")
        if not acc.is_zero:
            values[(i,)] = acc
    form = LForm.build(L, 1, values)
    closed = d_l(form).is_zero
    return form, closed
