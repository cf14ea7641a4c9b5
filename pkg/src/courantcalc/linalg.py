"""Exact linear algebra over Q and over the polynomial ring.

Rational systems are solved by fraction-free (Bareiss) elimination on
denominator-cleared integer rows; solutions are verified by substitution
before being returned.  Polynomial matrices get a generic-rank computation
via Bareiss elimination in the polynomial ring, where the divisions are
exact by the Sylvester identity.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .poly import Poly, parse_rat


class LinAlgError(ValueError):
    pass


class Mat:
    """Immutable dense matrix with Fraction entries."""

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[Iterable]):
        rows = tuple(tuple(parse_rat(e) for e in row) for row in entries)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise LinAlgError("ragged matrix")
        object.__setattr__(self, "entries", rows)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("Mat is immutable")

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r: int, c: int) -> "Mat":
        return cls([[0] * c for _ in range(r)])

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def transpose(self) -> "Mat":
        return Mat(zip(*self.entries)) if self.entries else Mat([])

    def __add__(self, other: "Mat") -> "Mat":
        self._shape_check(other, same=True)
        return Mat([[a + b for a, b in zip(r1, r2)]
                    for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other: "Mat") -> "Mat":
        self._shape_check(other, same=True)
        return Mat([[a - b for a, b in zip(r1, r2)]
                    for r1, r2 in zip(self.entries, other.entries)])

    def __mul__(self, other):
        if isinstance(other, Mat):
            if self.cols != other.rows:
                raise LinAlgError(f"shape mismatch {self.shape} x {other.shape}")
            cols = other.transpose().entries
            return Mat([[sum(a * b for a, b in zip(row, col)) for col in cols]
                        for row in self.entries])
        return Mat([[e * Fraction(other) for e in row] for row in self.entries])

    __rmul__ = __mul__

    def apply(self, vec: Sequence) -> tuple[Fraction, ...]:
        v = [parse_rat(x) for x in vec]
        if len(v) != self.cols:
            raise LinAlgError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_symmetric(self) -> bool:
        return self.entries == self.transpose().entries

    def is_positive_definite(self) -> bool:
        """Sylvester's criterion on leading principal minors."""
        if self.rows != self.cols or not self.is_symmetric():
            return False
        for k in range(1, self.rows + 1):
            minor = Mat([row[:k] for row in self.entries[:k]])
            if minor.det() <= 0:
                return False
        return True

    def det(self) -> Fraction:
        if self.rows != self.cols:
            raise LinAlgError("determinant of non-square matrix")
        n = self.rows
        m = [list(r) for r in self.entries]
        sign = 1
        prev = Fraction(1)
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return Fraction(0)
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
                m[i][k] = Fraction(0)
            prev = m[k][k]
        return sign * m[n - 1][n - 1] if n else Fraction(1)

    def inverse(self) -> "Mat":
        if self.rows != self.cols:
            raise LinAlgError("inverse of non-square matrix")
        n = self.rows
        aug = [list(r) + [Fraction(int(i == j)) for j in range(n)]
               for i, r in enumerate(self.entries)]
        for col in range(n):
            pivot = next((i for i in range(col, n) if aug[i][col] != 0), None)
            if pivot is None:
                raise LinAlgError("singular matrix")
            aug[col], aug[pivot] = aug[pivot], aug[col]
            p = aug[col][col]
            aug[col] = [e / p for e in aug[col]]
            for i in range(n):
                if i != col and aug[i][col] != 0:
                    f = aug[i][col]
                    aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
        return Mat([row[n:] for row in aug])

    def to_json(self) -> list[list[str]]:
        return [[str(e) for e in row] for row in self.entries]

    def __eq__(self, other) -> bool:
        return isinstance(other, Mat) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self) -> str:
        return f"Mat({[[str(e) for e in row] for row in self.entries]})"


def _cleared_int_rows(rows: list[list[Fraction]]) -> list[list[int]]:
    out = []
    for row in rows:
        denom = lcm(*(f.denominator for f in row)) if row else 1
        out.append([int(f * denom) for f in row])
    return out


def _bareiss_echelon(m: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form; returns (matrix, pivot column list)."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    piv_cols: list[int] = []
    prev = 1
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                m[i][j] = (m[i][j] * m[r][c] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        piv_cols.append(c)
        r += 1
        if r == rows:
            break
    return m, piv_cols


def solve_linear(a: Mat, b: Sequence) -> tuple[Fraction, ...] | None:
    """Solve A x = b exactly; returns None when the system is inconsistent.

    The returned solution is substituted back and verified before return.
    """
    bvec = [parse_rat(x) for x in b]
    if len(bvec) != a.rows:
        raise LinAlgError(f"rhs length {len(bvec)} != row count {a.rows}")
    aug = _cleared_int_rows([list(row) + [bv] for row, bv in zip(a.entries, bvec)])
    if not aug:
        return (Fraction(0),) * a.cols
    ech, piv = _bareiss_echelon(aug)
    ncols = a.cols
    # inconsistent iff a pivot lands in the rhs column
    if piv and piv[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for k in range(len(piv) - 1, -1, -1):
        c = piv[k]
        row = ech[k]
        acc = Fraction(row[ncols])
        for j in range(c + 1, ncols):
            acc -= row[j] * x[j]
        x[c] = acc / row[c]
    if a.apply(x) != tuple(bvec):
        return None
    return tuple(x)


def kernel_basis(a: Mat) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel of A over Q."""
    if a.rows == 0 or a.cols == 0:
        return [tuple(Fraction(int(i == j)) for j in range(a.cols))
                for i in range(a.cols)]
    ech, piv = _bareiss_echelon(_cleared_int_rows([list(r) for r in a.entries]))
    free = [c for c in range(a.cols) if c not in piv]
    basis = []
    for fc in free:
        x = [Fraction(0)] * a.cols
        x[fc] = Fraction(1)
        for k in range(len(piv) - 1, -1, -1):
            c = piv[k]
            row = ech[k]
            acc = Fraction(0)
            for j in range(c + 1, a.cols):
                if x[j]:
                    acc -= row[j] * x[j]
            x[c] = acc / row[c]
        basis.append(tuple(x))
    return basis


def rank(a: Mat) -> int:
    if a.rows == 0 or a.cols == 0:
        return 0
    _, piv = _bareiss_echelon(_cleared_int_rows([list(r) for r in a.entries]))
    return len(piv)


# -- polynomial matrices ----------------------------------------------------

PolyMat = list[list[Poly]]


def poly_mat(entries: Iterable[Iterable[Poly]]) -> PolyMat:
    return [list(row) for row in entries]


def poly_mat_mul(a: PolyMat, b: PolyMat) -> PolyMat:
    if not a or not b:
        return []
    if len(a[0]) != len(b):
        raise LinAlgError("polynomial matrix shape mismatch")
    out = []
    for row in a:
        new_row = []
        for j in range(len(b[0])):
            acc = Poly.zero()
            for k, entry in enumerate(row):
                acc = acc + entry * b[k][j]
            new_row.append(acc)
        out.append(new_row)
    return out


def poly_mat_rank(a: PolyMat) -> int:
    """Generic rank (over the rational function field) by fraction-free
    elimination; divisions by the previous pivot are exact."""
    m = [[p for p in row] for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    prev: Poly | None = None
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if not m[i][c].is_zero), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                num = m[i][j] * m[r][c] - m[i][c] * m[r][j]
                m[i][j] = num if prev is None else num.divide_exact(prev)
            m[i][c] = Poly.zero()
        prev = m[r][c]
        r += 1
        if r == rows:
            break
    return r


def poly_mat_identity(n: int) -> PolyMat:
    return [[Poly.const(1 if i == j else 0) for j in range(n)] for i in range(n)]


def poly_mat_is_zero(a: PolyMat) -> bool:
    return all(p.is_zero for row in a for p in row)


def poly_mat_unipotent_inverse(u: PolyMat) -> PolyMat:
    """Inverse of u = id + N with N nilpotent (entries polynomial).

    Raises LinAlgError when u - id is not nilpotent; the result is verified
    by multiplying back.
    """
    n = len(u)
    ident = poly_mat_identity(n)
    nil = [[u[i][j] - ident[i][j] for j in range(n)] for i in range(n)]
    inv = poly_mat_identity(n)
    power = ident
    sign = -1
    for _ in range(n):
        power = poly_mat_mul(power, nil)
        if poly_mat_is_zero(power):
            break
        inv = [[inv[i][j] + sign * power[i][j] for j in range(n)] for i in range(n)]
        sign = -sign
    else:
        if not poly_mat_is_zero(poly_mat_mul(power, nil)):
            raise LinAlgError("matrix is not unipotent")
    check = poly_mat_mul(u, inv)
    for i in range(n):
        for j in range(n):
            if check[i][j] != (1 if i == j else 0):
                raise LinAlgError("matrix is not unipotent")
    return inv
