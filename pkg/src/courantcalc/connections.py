"""E-connections on trivial bundles, covariant derivatives, curvature.

A connection on a rank-m bundle B is the coefficient tensor
``gamma[a][mu][nu]`` with nabla_{e_a} b_mu = gamma[a][mu][nu] b_nu,
extended to arbitrary arguments by

    nabla_{f e} b = f nabla_e b,      nabla_e (f b) = f nabla_e b + rho(e)(f) b.

B-valued and End(B)-valued cochains are vectors/matrices of scalar
cochains; the covariant derivative is d + A where A is the End-valued
connection 1-cochain, so the curvature is F = dA + A cup A, which the test
suite cross-checks against the commutator formula

    F(e1, e2) b = nabla_{e1} nabla_{e2} b - nabla_{e2} nabla_{e1} b
                  - nabla_{[[e1, e2]]} b.

Also here: the adjoint connection for a constant fiber pairing, the induced
End(B) connection, the Bott-type connections on E / TM / T*M induced by a
linear connection, the canonical top-power connection, and a Levi-Civita
helper for polynomial metrics with polynomial inverse.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cochains import Cochain, from_function, from_section
from .courant import CourantStructure, Section
from .linalg import Mat
from .poly import Poly, Scalar

PolyTensor3 = tuple[tuple[tuple[Poly, ...], ...], ...]


class ConnectionError(ValueError):
    pass


def _tensor3(structure: CourantStructure, data, d0: int, d1: int, d2: int) -> PolyTensor3:
    out = tuple(
        tuple(tuple(structure._poly(p, structure.coords) for p in row)
              for row in plane)
        for plane in data)
    if len(out) != d0 or any(len(pl) != d1 for pl in out) or \
            any(len(row) != d2 for pl in out for row in pl):
        raise ConnectionError(f"coefficient tensor must be {d0}x{d1}x{d2}")
    return out


@dataclass(frozen=True)
class Connection:
    """E-connection on a trivial rank-m bundle."""

    structure: CourantStructure
    m: int
    gamma: PolyTensor3
    fiber_pairing: Mat | None = None

    def __post_init__(self):
        object.__setattr__(
            self, "gamma",
            _tensor3(self.structure, self.gamma, self.structure.r, self.m, self.m))
        if self.fiber_pairing is not None:
            if self.fiber_pairing.shape != (self.m, self.m) or \
                    not self.fiber_pairing.is_symmetric() or \
                    self.fiber_pairing.det() == 0:
                raise ConnectionError("fiber pairing must be symmetric invertible")

    def operator_matrix(self, a: int) -> list[list[Poly]]:
        """Omega_a with (nabla_a b)^nu = rho_a(b^nu) + Omega_a[nu][mu] b^mu."""
        return [[self.gamma[a][mu][nu] for mu in range(self.m)]
                for nu in range(self.m)]

    def apply(self, e: Section, b: Sequence[Poly]) -> tuple[Poly, ...]:
        """nabla_e b for a polynomial section of B."""
        E = self.structure
        b = [E._poly(p, E.coords) for p in b]
        if len(b) != self.m:
            raise ConnectionError(f"needs {self.m} fiber components")
        out = []
        for nu in range(self.m):
            acc = E.anchor_apply(e, b[nu])
            for a in range(E.r):
                ea = e.comps[a]
                if ea.is_zero:
                    continue
                for mu in range(self.m):
                    g = self.gamma[a][mu][nu]
                    if not g.is_zero and not b[mu].is_zero:
                        acc = acc + ea * g * b[mu]
            out.append(acc)
        return tuple(out)

    def one_form(self) -> "EndValuedCochain":
        """The End(B)-valued 1-cochain A with A(e_a) = Omega_a."""
        E = self.structure
        entries = []
        for nu in range(self.m):
            row = []
            for mu in range(self.m):
                covector = [self.gamma[a][mu][nu] for a in range(E.r)]
                # 1-cochain evaluating to sum_a e^a gamma[a][mu][nu]
                ginv = E.ctx.pairing_inv
                comps = []
                for b in range(E.r):
                    acc = Poly.zero(E.coords)
                    for a in range(E.r):
                        g = ginv[b, a]
                        if g != 0 and not covector[a].is_zero:
                            acc = acc + g * covector[a]
                    comps.append(acc)
                row.append(from_section(E, Section(tuple(comps))))
            entries.append(tuple(row))
        return EndValuedCochain(self.structure, self.m, tuple(entries))

    def basis_section(self, mu: int) -> "BValuedCochain":
        E = self.structure
        comps = tuple(
            from_function(E, 1 if nu == mu else 0) for nu in range(self.m))
        return BValuedCochain(E, self.m, comps)


@dataclass(frozen=True)
class BValuedCochain:
    """Vector of cochains of one common degree."""

    structure: CourantStructure
    m: int
    comps: tuple[Cochain, ...]

    def __post_init__(self):
        if len(self.comps) != self.m:
            raise ConnectionError("component count mismatch")
        degs = {c.degree for c in self.comps if not c.is_zero}
        if len(degs) > 1:
            raise ConnectionError("components must share a degree")

    @property
    def degree(self) -> int:
        for c in self.comps:
            if not c.is_zero:
                return c.degree
        return 0

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.comps)

    def __add__(self, other: "BValuedCochain") -> "BValuedCochain":
        return BValuedCochain(self.structure, self.m, tuple(
            a + b for a, b in zip(self.comps, other.comps)))

    def __sub__(self, other: "BValuedCochain") -> "BValuedCochain":
        return BValuedCochain(self.structure, self.m, tuple(
            a - b for a, b in zip(self.comps, other.comps)))

    def cup_left(self, omega: Cochain) -> "BValuedCochain":
        return BValuedCochain(self.structure, self.m, tuple(
            omega.cup(c) for c in self.comps))

    def evaluate(self, *sections: Section) -> tuple[Poly, ...]:
        return tuple(c.evaluate(*sections) for c in self.comps)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BValuedCochain):
            return NotImplemented
        return self.comps == other.comps


@dataclass(frozen=True)
class EndValuedCochain:
    """m x m matrix of cochains of one common degree; entry [nu][mu] sends
    the mu-th basis coefficient to the nu-th."""

    structure: CourantStructure
    m: int
    entries: tuple[tuple[Cochain, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.m or any(len(r) != self.m for r in self.entries):
            raise ConnectionError("entry grid mismatch")
        degs = {c.degree for row in self.entries for c in row if not c.is_zero}
        if len(degs) > 1:
            raise ConnectionError("entries must share a degree")

    @classmethod
    def zero(cls, E: CourantStructure, m: int) -> "EndValuedCochain":
        z = from_function(E, 0)
        return cls(E, m, tuple(tuple(z for _ in range(m)) for _ in range(m)))

    @classmethod
    def from_matrix(cls, E: CourantStructure, mat: Sequence[Sequence]) -> "EndValuedCochain":
        """Degree-0 End-valued cochain from a polynomial operator matrix
        (rows index output, columns input)."""
        m = len(mat)
        entries = tuple(
            tuple(from_function(E, mat[nu][mu]) for mu in range(m))
            for nu in range(m))
        return cls(E, m, entries)

    @property
    def degree(self) -> int:
        for row in self.entries:
            for c in row:
                if not c.is_zero:
                    return c.degree
        return 0

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for row in self.entries for c in row)

    def __add__(self, other: "EndValuedCochain") -> "EndValuedCochain":
        return EndValuedCochain(self.structure, self.m, tuple(
            tuple(a + b for a, b in zip(r1, r2))
            for r1, r2 in zip(self.entries, other.entries)))

    def __sub__(self, other: "EndValuedCochain") -> "EndValuedCochain":
        return EndValuedCochain(self.structure, self.m, tuple(
            tuple(a - b for a, b in zip(r1, r2))
            for r1, r2 in zip(self.entries, other.entries)))

    def __neg__(self) -> "EndValuedCochain":
        return EndValuedCochain(self.structure, self.m, tuple(
            tuple(-a for a in row) for row in self.entries))

    def scale(self, f: Poly | Scalar) -> "EndValuedCochain":
        return EndValuedCochain(self.structure, self.m, tuple(
            tuple(a.scale(f) for a in row) for row in self.entries))

    def matmul(self, other: "EndValuedCochain") -> "EndValuedCochain":
        zero = from_function(self.structure, 0)
        out = []
        for nu in range(self.m):
            row = []
            for mu in range(self.m):
                acc = zero
                for sigma in range(self.m):
                    left = self.entries[nu][sigma]
                    right = other.entries[sigma][mu]
                    if left.is_zero or right.is_zero:
                        continue
                    acc = acc + left.cup(right)
                row.append(acc)
            out.append(tuple(row))
        return EndValuedCochain(self.structure, self.m, tuple(out))

    def power(self, k: int) -> "EndValuedCochain":
        if k < 1:
            raise ConnectionError("power needs k >= 1")
        out = self
        for _ in range(k - 1):
            out = out.matmul(self)
        return out

    def act(self, tau: BValuedCochain) -> BValuedCochain:
        comps = []
        zero = from_function(self.structure, 0)
        for nu in range(self.m):
            acc = zero
            for mu in range(self.m):
                if self.entries[nu][mu].is_zero or tau.comps[mu].is_zero:
                    continue
                acc = acc + self.entries[nu][mu].cup(tau.comps[mu])
            comps.append(acc)
        return BValuedCochain(self.structure, self.m, tuple(comps))

    def trace(self) -> Cochain:
        acc = from_function(self.structure, 0)
        for mu in range(self.m):
            acc = acc + self.entries[mu][mu]
        return acc

    def d(self) -> "EndValuedCochain":
        return EndValuedCochain(self.structure, self.m, tuple(
            tuple(c.d() for c in row) for row in self.entries))

    def evaluate_matrix(self, *sections: Section) -> list[list[Poly]]:
        return [[c.evaluate(*sections) for c in row] for row in self.entries]

    def transpose_pairing(self, pairing: Mat) -> "EndValuedCochain":
        """Adjoint with respect to a constant fiber pairing: h^{-1} F^T h."""
        hinv = pairing.inverse()
        zero = from_function(self.structure, 0)
        out = []
        for nu in range(self.m):
            row = []
            for mu in range(self.m):
                acc = zero
                for i in range(self.m):
                    for j in range(self.m):
                        c = hinv[nu, i] * pairing[j, mu]
                        if c != 0 and not self.entries[j][i].is_zero:
                            acc = acc + self.entries[j][i].scale(c)
                row.append(acc)
            out.append(tuple(row))
        return EndValuedCochain(self.structure, self.m, tuple(out))

    def __eq__(self, other) -> bool:
        if not isinstance(other, EndValuedCochain):
            return NotImplemented
        return self.entries == other.entries


# -- covariant derivative and curvature ----------------------------------------


def covariant_derivative(conn: Connection, tau: BValuedCochain) -> BValuedCochain:
    """D tau = d tau + A tau; degree +1."""
    if tau.structure != conn.structure:
        raise ConnectionError("structure mismatch")
    d_part = BValuedCochain(tau.structure, tau.m, tuple(c.d() for c in tau.comps))
    return d_part + conn.one_form().act(tau)


def covariant_derivative_end(conn: Connection, phi: EndValuedCochain) -> EndValuedCochain:
    """Commutator derivative on End(B)-valued cochains:
    D phi = d phi + A phi - (-1)^{deg phi} phi A."""
    a_form = conn.one_form()
    sign = -1 if phi.degree % 2 else 1
    return phi.d() + a_form.matmul(phi) - phi.matmul(a_form).scale(sign)


def curvature(conn: Connection) -> EndValuedCochain:
    """F = dA + A cup A, an End(B)-valued 2-cochain."""
    a_form = conn.one_form()
    return a_form.d() + a_form.matmul(a_form)


def curvature_commutator_value(conn: Connection, e1: Section, e2: Section,
                               b: Sequence[Poly]) -> tuple[Poly, ...]:
    """Independent curvature route: the bracket-commutator formula."""
    E = conn.structure
    first = conn.apply(e1, conn.apply(e2, b))
    second = conn.apply(e2, conn.apply(e1, b))
    third = conn.apply(E.bracket(e1, e2), b)
    return tuple(a - s - t for a, s, t in zip(first, second, third))


def adjoint(conn: Connection, pairing: Mat | None = None) -> Connection:
    """Adjoint connection with respect to a constant fiber pairing."""
    h = pairing if pairing is not None else conn.fiber_pairing
    if h is None:
        raise ConnectionError("adjoint needs a fiber pairing")
    if h.shape != (conn.m, conn.m) or not h.is_symmetric() or h.det() == 0:
        raise ConnectionError("fiber pairing must be symmetric invertible")
    hinv = h.inverse()
    gamma = []
    for a in range(conn.structure.r):
        # M_dagger = -h M^T h^{-1} with (M_a)_{mu nu} = gamma[a][mu][nu]
        mat = [[conn.gamma[a][mu][nu] for nu in range(conn.m)] for mu in range(conn.m)]
        out = [[Poly.zero(conn.structure.coords) for _ in range(conn.m)]
               for _ in range(conn.m)]
        for mu in range(conn.m):
            for nu in range(conn.m):
                acc = Poly.zero(conn.structure.coords)
                for i in range(conn.m):
                    for j in range(conn.m):
                        c = h[mu, i] * hinv[j, nu]
                        if c != 0 and not mat[j][i].is_zero:
                            acc = acc - c * mat[j][i]
                out[mu][nu] = acc
        gamma.append(tuple(tuple(row) for row in out))
    return Connection(conn.structure, conn.m, tuple(gamma), fiber_pairing=h)


def end_connection(conn: Connection) -> Connection:
    """Induced connection on End(B) (rank m^2, basis E_{sigma tau} flattened
    as sigma*m + tau in the operator picture)."""
    m = conn.m
    E = conn.structure
    zero = Poly.zero(E.coords)
    gamma = []
    for a in range(E.r):
        omega = conn.operator_matrix(a)
        plane = [[zero for _ in range(m * m)] for _ in range(m * m)]
        for sigma in range(m):
            for tau in range(m):
                src = sigma * m + tau
                for p in range(m):
                    if not omega[p][sigma].is_zero:
                        plane[src][p * m + tau] = plane[src][p * m + tau] + omega[p][sigma]
                for q in range(m):
                    if not omega[tau][q].is_zero:
                        plane[src][sigma * m + q] = plane[src][sigma * m + q] - omega[tau][q]
        gamma.append(tuple(tuple(row) for row in plane))
    return Connection(E, m * m, tuple(gamma))


# -- induced connections from a linear connection -------------------------------


@dataclass(frozen=True)
class BottConnections:
    on_e: Connection
    on_tm: Connection
    on_tstar: Connection


def bott_connections(E: CourantStructure, gamma_lin) -> BottConnections:
    """E-connections induced by a linear connection nabla_{d/dx_i} e_a =
    gamma_lin[i][a][b] e_b on E."""
    n, r = E.n, E.r
    gl = _tensor3(E, gamma_lin, n, r, r)
    ginv = E.ctx.pairing_inv
    zero = Poly.zero(E.coords)

    # on E: [[e_a, e_b]] + nabla_{rho(e_b)} e_a - rho*(<D_nabla e_a, e_b>)
    gamma_e = []
    for a in range(r):
        plane = []
        for b in range(r):
            row = [E.c[a][b][c] for c in range(r)]
            for i in range(n):
                rb = E.anchor[b][i]
                if not rb.is_zero:
                    for c in range(r):
                        if not gl[i][a][c].is_zero:
                            row[c] = row[c] + rb * gl[i][a][c]
            # rho* of the covector i -> <nabla_i e_a, e_b>
            cov = []
            for i in range(n):
                acc = zero
                for c in range(r):
                    g = E.pairing[c, b]
                    if g != 0 and not gl[i][a][c].is_zero:
                        acc = acc + g * gl[i][a][c]
                cov.append(acc)
            for c in range(r):
                acc = zero
                for d in range(r):
                    g = ginv[c, d]
                    if g == 0:
                        continue
                    for i in range(n):
                        if not E.anchor[d][i].is_zero and not cov[i].is_zero:
                            acc = acc + g * E.anchor[d][i] * cov[i]
                row[c] = row[c] - acc
            plane.append(tuple(row))
        gamma_e.append(tuple(plane))

    # on TM: [rho(e_a), d/dx_i] + rho(nabla_i e_a)
    gamma_tm = []
    for a in range(r):
        plane = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = -E.anchor[a][j].partial(f"x{i + 1}")
                for b in range(r):
                    if not gl[i][a][b].is_zero and not E.anchor[b][j].is_zero:
                        acc = acc + gl[i][a][b] * E.anchor[b][j]
                row.append(acc)
            plane.append(tuple(row))
        gamma_tm.append(tuple(plane))

    # on T*M: Lie_{rho(e_a)} dx_i - <D_nabla e_a, rho*(dx_i)>
    gamma_tstar = []
    for a in range(r):
        plane = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = E.anchor[a][i].partial(f"x{j + 1}")
                for c in range(r):
                    if not gl[j][a][c].is_zero and not E.anchor[c][i].is_zero:
                        acc = acc - gl[j][a][c] * E.anchor[c][i]
                row.append(acc)
            plane.append(tuple(row))
        gamma_tstar.append(tuple(plane))

    pairing_tm_tstar = Mat.identity(n)
    return BottConnections(
        on_e=Connection(E, r, tuple(gamma_e), fiber_pairing=None),
        on_tm=Connection(E, n, tuple(gamma_tm), fiber_pairing=pairing_tm_tstar),
        on_tstar=Connection(E, n, tuple(gamma_tstar), fiber_pairing=pairing_tm_tstar),
    )


def top_connection(E: CourantStructure) -> Connection:
    """Canonical representation on the top exterior power: the frame volume
    is scaled by the trace of the bracket action."""
    gamma = []
    for a in range(E.r):
        acc = Poly.zero(E.coords)
        for b in range(E.r):
            acc = acc + E.c[a][b][b]
        gamma.append(((acc,),))
    return Connection(E, 1, tuple(gamma), fiber_pairing=Mat.identity(1))


def top_extension_coefficient(conn: Connection, a: int) -> Poly:
    """Coefficient of the rank-1 extension of a rank-m connection on the
    frame volume: the trace of its coefficient matrix."""
    acc = Poly.zero(conn.structure.coords)
    for mu in range(conn.m):
        acc = acc + conn.gamma[a][mu][mu]
    return acc


def levi_civita(metric: Sequence[Sequence]) -> list[list[list[Poly]]]:
    """Christoffel symbols of a polynomial metric whose inverse is
    polynomial; gamma[i][j][k] is the dx_k-coefficient of nabla_{d/dx_i} d/dx_j."""
    n = len(metric)
    universe = tuple(f"x{i + 1}" for i in range(n))
    g = [[Poly.parse(str(e), vars=universe) if not isinstance(e, Poly) else e.in_vars(universe)
          for e in row] for row in metric]
    det = _poly_det(g)
    if det.degree() > 0 or det.as_constant() == 0:
        raise ConnectionError("metric must have constant nonzero determinant "
                              "for a polynomial inverse")
    ginv = _poly_adjugate(g)
    scale = Fraction(1) / det.as_constant()
    half = Fraction(1, 2)
    gamma = [[[Poly.zero(universe) for _ in range(n)] for _ in range(n)]
             for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                acc = Poly.zero(universe)
                for l in range(n):
                    gi = ginv[k][l]
                    if gi.is_zero:
                        continue
                    term = (g[j][l].partial(f"x{i + 1}")
                            + g[i][l].partial(f"x{j + 1}")
                            - g[i][j].partial(f"x{l + 1}"))
                    if not term.is_zero:
                        acc = acc + gi * term
                gamma[i][j][k] = half * scale * acc
    return gamma


def _poly_det(g: list[list[Poly]]) -> Poly:
    n = len(g)
    if n == 1:
        return g[0][0]
    acc = Poly.zero()
    for j in range(n):
        minor = [[g[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = g[0][j] * _poly_det(minor)
        acc = acc + (term if j % 2 == 0 else -term)
    return acc


def _poly_adjugate(g: list[list[Poly]]) -> list[list[Poly]]:
    n = len(g)
    out = [[Poly.zero() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[g[a][b] for b in range(n) if b != j]
                     for a in range(n) if a != i]
            cof = _poly_det(minor) if minor else Poly.const(1)
            out[j][i] = cof if (i + j) % 2 == 0 else -cof
    return out


def dual_tm_connection(gamma_tm) -> list[list[list[Poly]]]:
    """Coefficients of the dual connection on T*M: nabla_i dx^j = -gamma[i][k][j] dx^k."""
    n = len(gamma_tm)
    return [[[-gamma_tm[i][k][j] for k in range(n)] for j in range(n)]
            for i in range(n)]


def half_twist_linear_connection(E: CourantStructure, gamma_tm,
                                 h: dict[tuple[int, int, int], object]):
    """Linear connection on TM + T*M from a torsion-free TM connection and
    the half-correction by a closed 3-form: X, Y+beta ->
    nabla_X Y + nabla*_X beta + (1/2) i_X i_Y H."""
    n = E.n
    if E.r != 2 * n:
        raise ConnectionError("needs the standard frame of rank 2n")
    universe = E.coords
    full: dict[tuple[int, int, int], Poly] = {}
    for (i, j, k), value in h.items():
        value = E._poly(value, universe)
        for perm, sign in (((i, j, k), 1), ((j, k, i), 1), ((k, i, j), 1),
                           ((j, i, k), -1), ((i, k, j), -1), ((k, j, i), -1)):
            full[perm] = sign * value
    zero = Poly.zero(universe)
    half = Fraction(1, 2)
    gtm = [[[E._poly(gamma_tm[i][j][k], universe) for k in range(n)]
            for j in range(n)] for i in range(n)]
    dual = dual_tm_connection(gtm)
    gamma = [[[zero for _ in range(E.r)] for _ in range(E.r)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                gamma[i][j][k] = gtm[i][j][k]
                # (1/2) i_{d/dx_i} i_{d/dx_j} H = (1/2) H(d_j, d_i, .)
                coeff = full.get((j, i, k), zero)
                if coeff:
                    gamma[i][j][n + k] = half * coeff
                gamma[i][n + j][n + k] = dual[i][j][k]
    return gamma
