"""Cochains on a Courant structure and the full Cartan calculus.

The canonical representation of a k-cochain is its homogeneous degree-k
body in the graded model; the multilinear evaluation is the derived view

    omega(e_1, ..., e_k) = {e_k, {e_{k-1}, ..., {e_1, body} ... }

which is C^infty-linear in the last slot and whose failure of
skew-symmetry in adjacent slots is controlled by the vector-field symbol

    sigma(e_1, ..., e_{k-2})(f) = {f, {e_{k-2}, ..., {e_1, body} ... }.

Contraction, Lie derivative, and the differential are the bracket
operators i_e = {e, .}, L_e = {{e, theta}, .}, d = {theta, .}; the cup
product is the graded product of bodies, whose evaluation satisfies the
shuffle-sum formula (no extra (-1)^{km} factor).

This module also hosts the evaluation-level Cartan alternating sums used
as independent oracles in the test suite and reused by the Dirac module
for the induced Lie algebroid differential.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .courant import CourantStructure, Section, VectorField
from .graded import GradedElem, pbracket
from .linalg import Mat
from .poly import Poly, Scalar


class CochainError(ValueError):
    pass


@dataclass(frozen=True)
class Cochain:
    """Homogeneous cochain, held as its graded body."""

    structure: CourantStructure
    body: GradedElem

    def __post_init__(self):
        if self.body.ctx != self.structure.ctx:
            raise CochainError("body context does not match the structure")
        if not self.body.is_homogeneous():
            raise CochainError("cochain body must be homogeneous")

    @property
    def degree(self) -> int:
        d = self.body.degree()
        return 0 if d == float("-inf") else int(d)

    @property
    def is_zero(self) -> bool:
        return self.body.is_zero

    # -- algebra -------------------------------------------------------------

    def _like(self, body: GradedElem) -> "Cochain":
        return Cochain(self.structure, body)

    def __add__(self, other: "Cochain") -> "Cochain":
        self._compat(other)
        return self._like(self.body + other.body)

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._compat(other)
        return self._like(self.body - other.body)

    def __neg__(self) -> "Cochain":
        return self._like(-self.body)

    def scale(self, f: Poly | Scalar) -> "Cochain":
        return self._like(self.body.scale(f))

    def cup(self, other: "Cochain") -> "Cochain":
        """Graded product; evaluation obeys the shuffle formula."""
        self._compat(other)
        return self._like(self.body * other.body)

    def poisson(self, other: "Cochain") -> "Cochain":
        """Transferred degree -2 bracket (defined through bodies)."""
        self._compat(other)
        out = pbracket(self.body, other.body)
        return self._like(out)

    def _compat(self, other: "Cochain"):
        if self.structure != other.structure:
            raise CochainError("cochains belong to different structures")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.structure == other.structure and self.body == other.body

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, *sections: Section) -> Poly:
        if len(sections) != self.degree and not self.body.is_zero:
            raise CochainError(
                f"degree-{self.degree} cochain takes {self.degree} arguments, "
                f"got {len(sections)}")
        acc = self.body
        for e in sections:
            acc = pbracket(self.structure.lift(e), acc)
        return acc.body_poly()

    def symbol(self, *sections: Section, validate: bool = False) -> VectorField:
        k = self.degree
        if self.body.is_zero:
            return VectorField(tuple(Poly.zero(self.structure.coords)
                                     for _ in range(self.structure.n)))
        if k < 2:
            raise CochainError("symbol needs cochain degree >= 2")
        if len(sections) != k - 2:
            raise CochainError(f"symbol of a degree-{k} cochain takes {k - 2} arguments")
        acc = self.body
        for e in sections:
            acc = pbracket(self.structure.lift(e), acc)
        ctx = self.structure.ctx
        comps = []
        for i in range(self.structure.n):
            coord = GradedElem.from_poly(
                ctx, Poly.variable(f"x{i + 1}", self.structure.coords))
            comps.append(pbracket(coord, acc).body_poly())
        sigma = VectorField(tuple(comps))
        if validate:
            _validate_symbol_defect(self, sections, sigma)
        return sigma

    def contract(self, e: Section) -> "Cochain":
        return self._like(pbracket(self.structure.lift(e), self.body))

    def lie(self, e: Section) -> "Cochain":
        ham = pbracket(self.structure.lift(e), self.structure.theta)
        return self._like(pbracket(ham, self.body))

    def d(self) -> "Cochain":
        return self._like(pbracket(self.structure.theta, self.body))

    def __str__(self) -> str:
        return str(self.body)

    def to_json(self) -> str:
        return str(self.body)


def _validate_symbol_defect(omega: Cochain, sections, sigma: VectorField):
    """Check the adjacent-swap defect identity for probe completions."""
    E = omega.structure
    probes = [E.frame(a) for a in range(E.r)]
    for e1 in probes:
        for e2 in probes:
            lhs = (omega.evaluate(*sections, e1, e2)
                   + omega.evaluate(*sections, e2, e1))
            if lhs != sigma.apply(E.pair(e1, e2)):
                raise CochainError("symbol defect identity failed")


# -- constructors --------------------------------------------------------------


def from_function(E: CourantStructure, f) -> Cochain:
    return Cochain(E, GradedElem.from_poly(E.ctx, E.function(f)))


def from_section(E: CourantStructure, e: Section) -> Cochain:
    """Degree-1 cochain via the pairing: evaluates to <e, .>."""
    return Cochain(E, E.lift(e))


def from_cdo(E: CourantStructure, symbol: VectorField, matrix: Sequence[Sequence]) -> Cochain:
    """Degree-2 cochain from a covariant differential operator.

    ``matrix`` is the frame action Phi with op(e_a) = Phi[a][b] e_b; it must
    be skew-compatible with the pairing (Phi g skew, g constant), and
    ``symbol`` becomes the symbol of the resulting operator.
    """
    r, n = E.r, E.n
    phi = [[E.function(p) for p in row] for row in matrix]
    if len(phi) != r or any(len(row) != r for row in phi):
        raise CochainError(f"matrix must be {r} x {r}")
    # skew-compatibility: (Phi g) + (Phi g)^T = sigma(g) = 0 for constant g
    for a in range(r):
        for b in range(r):
            acc = Poly.zero(E.coords)
            for k in range(r):
                acc = acc + phi[a][k] * E.pairing[k, b] + phi[b][k] * E.pairing[k, a]
            if not acc.is_zero:
                raise CochainError("matrix is not skew-compatible with the pairing")
    terms: dict = {}
    for i in range(n):
        exp = [0] * n
        exp[i] = 1
        coeff = -symbol.comps[i]
        if not coeff.is_zero:
            terms[((), tuple(exp))] = coeff
    return Cochain(E, GradedElem(E.ctx, terms) + _cdo_xi_part(E, phi))


def _cdo_xi_part(E: CourantStructure, phi) -> GradedElem:
    # (1/2) W_ab xi_a xi_b with W = g^{-1} Phi
    r = E.r
    ginv = E.ctx.pairing_inv
    half = Fraction(1, 2)
    terms: dict = {}
    p0 = (0,) * E.n
    for a in range(r):
        for b in range(r):
            if a == b:
                continue
            w = Poly.zero(E.coords)
            for k in range(r):
                gak = ginv[a, k]
                if gak != 0 and not phi[k][b].is_zero:
                    w = w + gak * phi[k][b]
            if w.is_zero:
                continue
            key = ((a, b), p0) if a < b else ((b, a), p0)
            signed = w if a < b else -w
            terms[key] = terms.get(key, Poly.zero(E.coords)) + half * signed
    return GradedElem(E.ctx, terms)


def from_skew_tensor(E: CourantStructure, k: int, components: dict) -> Cochain:
    """Totally antisymmetric C^infty-linear k-cochain from its values on
    increasing frame tuples.

    ``components`` maps increasing 0-based index tuples to coefficients; the
    body is solved for exactly so that evaluation reproduces the inputs.
    """
    r = E.r
    tuples = list(itertools.combinations(range(r), k))
    comp_map: dict[tuple, Poly] = {t: Poly.zero(E.coords) for t in tuples}
    for key, value in components.items():
        key = tuple(key)
        if len(key) != k or list(key) != sorted(set(key)):
            raise CochainError(f"component key {key!r} must be a strictly "
                               f"increasing {k}-tuple")
        comp_map[key] = E.function(value)
    # candidate bodies xi_{a_1..a_k}; solve the evaluation system
    basis = [GradedElem(E.ctx, {(t, (0,) * E.n): Poly.const(1, E.coords)})
             for t in tuples]
    rows = []
    for t in tuples:
        frame_sections = [E.frame(a) for a in t]
        row = []
        for cand in basis:
            acc = cand
            for e in frame_sections:
                acc = pbracket(E.lift(e), acc)
            row.append(acc.body_poly().as_constant())
        rows.append(row)
    mat = Mat(rows)
    inv = mat.inverse()
    body = GradedElem.zero(E.ctx)
    for j, t in enumerate(tuples):
        coeff = Poly.zero(E.coords)
        for i, t_i in enumerate(tuples):
            c = inv[j, i]
            if c != 0 and not comp_map[t_i].is_zero:
                coeff = coeff + c * comp_map[t_i]
        if not coeff.is_zero:
            body = body + basis[j].scale(coeff)
    return Cochain(E, body)


def tee_cochain(E: CourantStructure) -> Cochain:
    """The canonical 3-cocycle: T(e1, e2, e3) = <[[e1, e2]], e3>.

    The body is -theta: the generator theta is pinned by the derived-bracket
    round-trips {{e,theta},f} = rho(e)(f) and {{e1,theta},e2} = [[e1,e2]],
    and under the Koszul sign of the iterated evaluation the cochain whose
    values are <[[e1,e2]],e3> is then the opposite body.  Both are cocycles.
    """
    return Cochain(E, -E.theta)


def coordinate_cochain(E: CourantStructure, i: int) -> Cochain:
    return from_function(E, Poly.variable(f"x{i + 1}", E.coords))


# -- evaluation-level Cartan sums (independent oracles; also reused by Dirac) --


def cartan_d_value(evaluate: Callable[..., Poly],
                   anchor_apply: Callable[[object, Poly], Poly],
                   bracket: Callable[[object, object], object],
                   args: Sequence) -> Poly:
    """(d omega)(e_0..e_k) as the alternating Cartan sum."""
    k = len(args) - 1
    total = Poly.zero()
    for i in range(k + 1):
        rest = args[:i] + args[i + 1:]
        term = anchor_apply(args[i], evaluate(*rest))
        total = total + (term if i % 2 == 0 else -term)
    for i in range(k + 1):
        for j in range(i + 1, k + 1):
            slot = list(args[:i] + args[i + 1:])
            slot[j - 1] = bracket(args[i], args[j])
            term = evaluate(*slot)
            total = total - (term if i % 2 == 0 else -term)
    return total


def cartan_lie_value(evaluate: Callable[..., Poly],
                     anchor_apply: Callable[[object, Poly], Poly],
                     bracket: Callable[[object, object], object],
                     e, args: Sequence) -> Poly:
    """(L_e omega)(e_1..e_k) as the Cartan sum."""
    total = anchor_apply(e, evaluate(*args))
    for i in range(len(args)):
        slot = list(args)
        slot[i] = bracket(e, args[i])
        total = total - evaluate(*slot)
    return total


def shuffle_cup_value(E: CourantStructure, omega: Cochain, tau: Cochain,
                      sections: Sequence[Section]) -> Poly:
    """Shuffle-sum evaluation of (omega cup tau)(e_1..e_{k+m})."""
    k, m = omega.degree, tau.degree
    if len(sections) != k + m:
        raise CochainError("wrong number of arguments for the shuffle sum")
    total = Poly.zero(E.coords)
    for left in itertools.combinations(range(k + m), k):
        right = tuple(i for i in range(k + m) if i not in left)
        inversions = sum(1 for a in left for b in right if a > b)
        sign = -1 if inversions % 2 else 1
        term = omega.evaluate(*(sections[i] for i in left)) * \
            tau.evaluate(*(sections[i] for i in right))
        total = total + sign * term
    return total
