"""Cohomology of the standard complex: exact answers at a point, bounded
cocycle/coboundary certification over a positive-dimensional base.

Over a point the complex is finite dimensional and ranks decide everything.
Over R^n the complex is infinite dimensional, so exactness is only ever
certified *within a polynomial-degree truncation*: a failed search returns
``undecided``, never a nonvanishing claim.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .cochains import Cochain
from .courant import CourantStructure, StructureError
from .graded import GradedElem
from .linalg import Mat, kernel_basis, rank, solve_linear
from .poly import Poly
from .randgen import graded_monomials


class CohomologyError(ValueError):
    pass


def x_monomials(n: int, bound: int) -> list[tuple[int, ...]]:
    """All exponent tuples of total degree <= bound in n variables."""
    out = []
    for total in range(bound + 1):
        for exp in _fixed_total(total, n):
            out.append(exp)
    return out


def _fixed_total(total: int, slots: int):
    if slots == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _fixed_total(total - first, slots - 1):
            yield (first,) + rest


BasisIndex = tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]


def cochain_basis(E: CourantStructure, degree: int, bound: int) -> list[BasisIndex]:
    """Monomial basis (xi word, p exponents, x exponents) of the degree-k
    cochains with polynomial coefficient degree <= bound."""
    return [(xi, p, xexp)
            for (xi, p) in graded_monomials(E.ctx, degree)
            for xexp in x_monomials(E.n, bound)]


def basis_element(E: CourantStructure, index: BasisIndex) -> GradedElem:
    xi, p, xexp = index
    coeff = Poly(E.coords, {tuple(xexp): Fraction(1)})
    return GradedElem(E.ctx, {(xi, tuple(p)): coeff})


def _expand(body: GradedElem) -> dict[BasisIndex, Fraction]:
    out: dict[BasisIndex, Fraction] = {}
    for (xi, p), coeff in body.terms.items():
        for xexp, c in coeff.terms.items():
            out[(xi, tuple(p), tuple(xexp))] = c
    return out


@dataclass
class TruncatedComplex:
    """The map d_E from degree-k cochains with coefficient degree <= bound
    into its target span, as an exact rational matrix."""

    structure: CourantStructure
    k: int
    bound: int
    basis: list[BasisIndex] = field(default_factory=list)
    target: list[BasisIndex] = field(default_factory=list)
    matrix: Mat = None  # columns indexed by basis, rows by target

    @classmethod
    def build(cls, E: CourantStructure, k: int, bound: int) -> "TruncatedComplex":
        basis = cochain_basis(E, k, bound)
        columns = []
        target_index: dict[BasisIndex, int] = {}
        target: list[BasisIndex] = []
        for idx in basis:
            image = _expand(
                Cochain(E, basis_element(E, idx)).d().body)
            for key in image:
                if key not in target_index:
                    target_index[key] = len(target)
                    target.append(key)
            columns.append(image)
        rows = [[Fraction(0)] * len(basis) for _ in range(len(target))]
        for j, image in enumerate(columns):
            for key, value in image.items():
                rows[target_index[key]][j] = value
        matrix = Mat(rows) if target else Mat([[Fraction(0)] * len(basis)]) \
            if basis else Mat([])
        return cls(structure=E, k=k, bound=bound, basis=basis,
                   target=target, matrix=matrix)

    def rank(self) -> int:
        return rank(self.matrix) if self.basis else 0

    def kernel_dimension(self) -> int:
        return len(self.basis) - self.rank()


def certify_closed(omega: Cochain) -> bool:
    """Exact check: d omega = 0 identically."""
    return omega.d().is_zero


def certify_exact(omega: Cochain, bound: int) -> Cochain | None:
    """Search for eta with d eta = omega and coefficient degree <= bound.

    Returns the witness or None (undecided at this bound; never a
    nonvanishing-class claim).
    """
    E = omega.structure
    if omega.is_zero:
        return Cochain(E, GradedElem.zero(E.ctx))
    k = omega.degree
    if k == 0:
        return None
    basis = cochain_basis(E, k - 1, bound)
    if not basis:
        return None
    target_index: dict[BasisIndex, int] = {}
    target: list[BasisIndex] = []
    columns = []
    for idx in basis:
        image = _expand(Cochain(E, basis_element(E, idx)).d().body)
        for key in image:
            if key not in target_index:
                target_index[key] = len(target)
                target.append(key)
        columns.append(image)
    rhs_map = _expand(omega.body)
    for key in rhs_map:
        if key not in target_index:
            # omega has support outside the truncated image span
            return None
    rows = [[Fraction(0)] * len(basis) for _ in range(len(target))]
    for j, image in enumerate(columns):
        for key, value in image.items():
            rows[target_index[key]][j] = value
    rhs = [rhs_map.get(key, Fraction(0)) for key in target]
    solution = solve_linear(Mat(rows), rhs)
    if solution is None:
        return None
    body = GradedElem.zero(E.ctx)
    for coeff, idx in zip(solution, basis):
        if coeff:
            body = body + basis_element(E, idx).scale(coeff)
    witness = Cochain(E, body)
    if witness.d() != omega:  # exactness is verified, not assumed
        raise CohomologyError("witness verification failed")
    return witness


@dataclass
class PointCohomology:
    k: int
    dimension: int
    representatives: list[Cochain]

    def to_json(self) -> dict:
        return {"k": self.k, "dim": self.dimension,
                "representatives": [str(c) for c in self.representatives]}


def cohomology_point(E: CourantStructure, k: int) -> PointCohomology:
    """Exact cohomology of a point-base structure (a quadratic Lie algebra)."""
    if E.n != 0:
        raise StructureError(
            "exact cohomology needs a point base; use certify_closed / "
            "certify_exact for bounded certification over R^n")
    if k < 0 or k > E.r:
        return PointCohomology(k, 0, [])
    down = TruncatedComplex.build(E, k, 0)
    image_rank = TruncatedComplex.build(E, k - 1, 0).rank() if k >= 1 else 0
    cocycle_dim = down.kernel_dimension()
    dim = cocycle_dim - image_rank
    reps = _representatives(E, k, dim)
    return PointCohomology(k, dim, reps)


def _representatives(E: CourantStructure, k: int, dim: int) -> list[Cochain]:
    if dim == 0:
        return []
    down = TruncatedComplex.build(E, k, 0)
    kernel = kernel_basis(down.matrix) if down.basis else []
    # image columns of the incoming differential, expressed in down.basis
    image_vectors = []
    if k >= 1:
        prev = cochain_basis(E, k - 1, 0)
        pos = {idx: i for i, idx in enumerate(down.basis)}
        for idx in prev:
            image = _expand(Cochain(E, basis_element(E, idx)).d().body)
            vec = [Fraction(0)] * len(down.basis)
            for key, value in image.items():
                vec[pos[key]] = value
            image_vectors.append(tuple(vec))
    chosen: list[tuple[Fraction, ...]] = []
    span = list(image_vectors)
    base_rank = rank(Mat(span)) if span else 0
    for vec in kernel:
        trial = span + [vec]
        if rank(Mat(trial)) > base_rank + len(chosen):
            chosen.append(vec)
            span = trial
            if len(chosen) == dim:
                break
    reps = []
    for vec in chosen:
        body = GradedElem.zero(E.ctx)
        for coeff, idx in zip(vec, down.basis):
            if coeff:
                body = body + basis_element(E, idx).scale(coeff)
        reps.append(Cochain(E, body))
    return reps


def d_square_is_zero(E: CourantStructure, k: int, bound: int) -> bool:
    """Matrix-level check that consecutive truncated differentials compose
    to zero (the second truncation is widened to contain the image)."""
    first = TruncatedComplex.build(E, k, bound)
    if not first.basis:
        return True
    theta_degree = _theta_coefficient_degree(E)
    second = TruncatedComplex.build(E, k + 1, bound + max(theta_degree, 1))
    pos = {idx: i for i, idx in enumerate(second.basis)}
    for j, idx in enumerate(first.basis):
        # express d(basis_j) in the second basis and apply d again
        image = _expand(Cochain(E, basis_element(E, idx)).d().body)
        vec = [Fraction(0)] * len(second.basis)
        for key, value in image.items():
            if key not in pos:
                return False
            vec[pos[key]] = value
        out = [Fraction(0)] * second.matrix.rows
        for col, value in enumerate(vec):
            if value:
                for row in range(second.matrix.rows):
                    out[row] += second.matrix[row, col] * value
        if any(out):
            return False
    return True


def _theta_coefficient_degree(E: CourantStructure) -> int:
    deg = 0
    for _, coeff in E.theta.terms.items():
        d = coeff.degree()
        if d != float("-inf"):
            deg = max(deg, int(d))
    return deg
