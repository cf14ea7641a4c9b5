"""Chern forms, exactly integrated Chern-Simons forms, gauge transgression,
modular cocycles, and the intrinsic secondary classes.

Transgression integrals are over a path parameter t in [0, 1] (and s for
path homotopies); since every coefficient is polynomial, the integrals are
evaluated exactly and the transgression identity

    d cs_k(path) = ch_k(endpoint 1) - ch_k(endpoint 0)

is an identical-polynomial statement.  Class-level claims (triangle
identity, path independence, gauge invariance) are certified by explicit
exactness witnesses, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cochains import Cochain, from_function, from_section
from .cohomology import certify_closed, certify_exact
from .connections import (
    Connection,
    ConnectionError,
    EndValuedCochain,
    adjoint,
    bott_connections,
    curvature,
    top_connection,
    _tensor3,
)
from .courant import CourantStructure, Section
from .graded import GradedElem
from .linalg import Mat, poly_mat_mul, poly_mat_unipotent_inverse
from .poly import Poly, Scalar, parse_rat


class CharClassError(ValueError):
    pass


@dataclass(frozen=True)
class ConnectionPath:
    """Connection coefficients polynomial in the path parameter t."""

    structure: CourantStructure
    m: int
    gamma_t: tuple
    fiber_pairing: Mat | None = None

    def __post_init__(self):
        object.__setattr__(
            self, "gamma_t",
            _tensor3(self.structure, self.gamma_t, self.structure.r, self.m, self.m))

    def at(self, value: Scalar) -> Connection:
        gamma = tuple(
            tuple(tuple(p.subst("t", parse_rat(value)) for p in row) for row in plane)
            for plane in self.gamma_t)
        return Connection(self.structure, self.m, gamma,
                          fiber_pairing=self.fiber_pairing)

    def as_connection(self) -> Connection:
        """The path as a single connection with t-dependent coefficients."""
        return Connection(self.structure, self.m, self.gamma_t,
                          fiber_pairing=self.fiber_pairing)

    def velocity(self) -> EndValuedCochain:
        """d/dt of the path, an End(B)-valued 1-cochain (t-dependent)."""
        E = self.structure
        deriv = tuple(
            tuple(tuple(p.in_vars(("t",)).partial("t") for p in row) for row in plane)
            for plane in self.gamma_t)
        return Connection(E, self.m, deriv).one_form()

    def adjoint_path(self, pairing: Mat | None = None) -> "ConnectionPath":
        h = pairing if pairing is not None else self.fiber_pairing
        if h is None:
            raise CharClassError("adjoint path needs a fiber pairing")
        adj = adjoint(self.as_connection(), h)
        return ConnectionPath(self.structure, self.m, adj.gamma, fiber_pairing=h)


def straight_path(c0: Connection, c1: Connection) -> ConnectionPath:
    if c0.structure != c1.structure or c0.m != c1.m:
        raise CharClassError("endpoints live on different bundles")
    t = Poly.variable("t")
    gamma = tuple(
        tuple(tuple(g0 + t * (g1 - g0) for g0, g1 in zip(r0, r1))
              for r0, r1 in zip(p0, p1))
        for p0, p1 in zip(c0.gamma, c1.gamma))
    return ConnectionPath(c0.structure, c0.m, gamma,
                          fiber_pairing=c0.fiber_pairing or c1.fiber_pairing)


def constant_path(conn: Connection) -> ConnectionPath:
    return ConnectionPath(conn.structure, conn.m, conn.gamma,
                          fiber_pairing=conn.fiber_pairing)


def _integrate_cochain(omega: Cochain, param: str = "t") -> Cochain:
    body = omega.body
    terms = {}
    for key, coeff in body.terms.items():
        integrated = coeff.in_vars((param,)).integrate(param, 0, 1)
        if not integrated.is_zero:
            terms[key] = integrated
    return Cochain(omega.structure, GradedElem(omega.structure.ctx, terms))


def chern(conn: Connection, k: int) -> Cochain:
    """ch_k = tr(F^k), a closed 2k-cochain."""
    if k < 1:
        raise CharClassError("chern needs k >= 1")
    return curvature(conn).power(k).trace()


def chern_simons(path: ConnectionPath, k: int) -> Cochain:
    """cs_k = k * int_0^1 tr(d/dt[path] cup F_t^{k-1}) dt, degree 2k-1."""
    if k < 1:
        raise CharClassError("chern_simons needs k >= 1")
    velocity = path.velocity()
    if k == 1:
        integrand = velocity.trace()
    else:
        f_t = curvature(path.as_connection())
        integrand = velocity.matmul(f_t.power(k - 1)).trace()
    return _integrate_cochain(integrand.scale(k))


def cs_between(c0: Connection, c1: Connection, k: int) -> Cochain:
    """Straight-line convention for the relative Chern-Simons form."""
    return chern_simons(straight_path(c0, c1), k)


def homotopy_primitive(path_a: ConnectionPath, path_b: ConnectionPath, k: int) -> Cochain:
    """The double-integral primitive for two paths with equal endpoints:
    d(primitive) = cs_k(path_b) - cs_k(path_a)."""
    E = path_a.structure
    m = path_a.m
    s = Poly.variable("s")
    gamma_st = tuple(
        tuple(tuple(a + s * (b - a) for a, b in zip(ra, rb))
              for ra, rb in zip(pa, pb))
        for pa, pb in zip(path_a.gamma_t, path_b.gamma_t))
    family = Connection(E, m, gamma_st)
    dt = Connection(E, m, tuple(
        tuple(tuple(p.in_vars(("t",)).partial("t") for p in row) for row in plane)
        for plane in gamma_st)).one_form()
    ds = Connection(E, m, tuple(
        tuple(tuple(p.in_vars(("s",)).partial("s") for p in row) for row in plane)
        for plane in gamma_st)).one_form()
    total = from_function(E, 0)
    if k >= 2:
        f_st = curvature(family)
        for i in range(k - 1):
            term = ds
            if i:
                term = term.matmul(f_st.power(i))
            term = term.matmul(dt)
            if k - 2 - i:
                term = term.matmul(f_st.power(k - 2 - i))
            total = total + term.trace()
    integrated = _integrate_cochain(_integrate_cochain(total, "t"), "s")
    return integrated.scale(k)


def gauge_transform(conn: Connection, u) -> Connection:
    """Conjugated connection u nabla u^{-1} for a unipotent polynomial u."""
    E = conn.structure
    m = conn.m
    u = [[E._poly(p, E.coords) for p in row] for row in u]
    if len(u) != m or any(len(row) != m for row in u):
        raise CharClassError(f"gauge matrix must be {m} x {m}")
    uinv = poly_mat_unipotent_inverse(u)
    gamma = []
    for a in range(E.r):
        omega = conn.operator_matrix(a)
        conj = poly_mat_mul(poly_mat_mul(u, omega), uinv)
        rho_uinv = [[E.anchor_apply(E.frame(a), entry) for entry in row]
                    for row in uinv]
        extra = poly_mat_mul(u, rho_uinv)
        plane = [[conj[nu][mu] + extra[nu][mu] for nu in range(m)]
                 for mu in range(m)]
        gamma.append(tuple(tuple(row) for row in plane))
    return Connection(E, m, tuple(gamma), fiber_pairing=conn.fiber_pairing)


def gauge_path(conn: Connection, u_t) -> ConnectionPath:
    """Path t -> u_t(conn) for a polynomial-in-t unipotent family u_t."""
    E = conn.structure
    transformed = gauge_transform(conn, u_t)
    return ConnectionPath(E, conn.m, transformed.gamma,
                          fiber_pairing=conn.fiber_pairing)


def gauge_transgression(conn: Connection, u_t, k: int) -> tuple[Cochain, Cochain]:
    """cs_k along a unipotent gauge path u_t (u_0 = id), together with the
    primitive making it exact: cs = d(primitive)."""
    E = conn.structure
    m = conn.m
    u = [[E._poly(p, E.coords) for p in row] for row in u_t]
    at_zero = [[p.subst("t", 0) for p in row] for row in u]
    for i in range(m):
        for j in range(m):
            expected = Poly.const(1 if i == j else 0, E.coords)
            if at_zero[i][j] != expected:
                raise CharClassError("gauge family must start at the identity")
    cs = chern_simons(gauge_path(conn, u), k)
    uinv = poly_mat_unipotent_inverse(u)
    udot = [[p.in_vars(("t",)).partial("t") for p in row] for row in u]
    winding = poly_mat_mul(uinv, udot)
    integrand = EndValuedCochain.from_matrix(E, winding)
    if k >= 2:
        integrand = integrand.matmul(curvature(conn).power(k - 1))
    primitive = _integrate_cochain(integrand.trace().scale(-k))
    return cs, primitive


# -- modular classes -------------------------------------------------------------


@dataclass(frozen=True)
class ModularCocycle:
    xi: Cochain
    scale: Fraction

    @property
    def is_zero(self) -> bool:
        return self.xi.is_zero


def modular_cocycle(conn: Connection, scale: Scalar = 1) -> ModularCocycle:
    """Degree-1 cocycle of a flat line-bundle connection: <xi, e> is the
    logarithmic derivative of the chosen trivializing section.

    Rescaling the section by a nonzero constant leaves xi unchanged.
    """
    if conn.m != 1:
        raise CharClassError("modular cocycle needs a line bundle")
    scale = parse_rat(scale)
    if scale == 0:
        raise CharClassError("trivializing scale must be nonzero")
    if not curvature(conn).is_zero:
        raise CharClassError("connection is not flat; not a representation")
    E = conn.structure
    covector = [conn.gamma[a][0][0] for a in range(E.r)]
    ginv = E.ctx.pairing_inv
    comps = []
    for a in range(E.r):
        acc = Poly.zero(E.coords)
        for b in range(E.r):
            g = ginv[a, b]
            if g != 0 and not covector[b].is_zero:
                acc = acc + g * covector[b]
        comps.append(acc)
    xi = from_section(E, Section(tuple(comps)))
    if not certify_closed(xi):
        raise CharClassError("flat connection produced a non-closed cocycle")
    return ModularCocycle(xi=xi, scale=scale)


def intrinsic_modular(E: CourantStructure) -> ModularCocycle:
    """Modular cocycle of the canonical top-power representation."""
    return modular_cocycle(top_connection(E))


@dataclass(frozen=True)
class UnimodularityCertificate:
    xi: Cochain
    witness: Cochain | None
    bound: int

    @property
    def decided(self) -> bool:
        return self.witness is not None

    def to_json(self) -> dict:
        return {
            "xi": str(self.xi),
            "bound": self.bound,
            "status": "exact" if self.decided else "undecided",
            **({"witness": str(self.witness)} if self.witness is not None else {}),
        }


def unimodularity_certificate(E: CourantStructure, bound: int = 2) -> UnimodularityCertificate:
    """Search for f with d f = xi_top within the coefficient-degree bound.

    Exhausting the bound returns an undecided certificate, never a
    nonvanishing-class claim.
    """
    xi = intrinsic_modular(E).xi
    witness = certify_exact(xi, bound)
    return UnimodularityCertificate(xi=xi, witness=witness, bound=bound)


# -- secondary classes -------------------------------------------------------------


def secondary_class(E: CourantStructure, gamma_lin, metric: Mat, k: int) -> Cochain:
    """Representative of the degree (4k-3) intrinsic class:
    cs_{2k-1} between the induced connection on E and its metric adjoint.

    The metric must be symmetric positive definite (leading principal
    minors); no compatibility with the bracket is required.
    """
    if k < 1:
        raise CharClassError("secondary class needs k >= 1")
    if not metric.is_positive_definite():
        raise CharClassError("metric must be symmetric positive definite")
    bott = bott_connections(E, gamma_lin)
    nabla_e = bott.on_e
    nabla_eg = adjoint(nabla_e, metric)
    return cs_between(nabla_e, nabla_eg, 2 * k - 1)


def chern_classes_vanish_odd(conn: Connection, pairing: Mat, up_to: int = 3) -> bool:
    """tr(F^k) = 0 for odd k when F is skew for the pairing; checked, not
    assumed."""
    F = curvature(conn)
    skew = (F.transpose_pairing(pairing) + F).is_zero
    if not skew:
        return False
    for k in range(1, up_to + 1, 2):
        if not chern(conn, k).is_zero:
            return False
    return True
