"""Deterministic invariant suite over the bundled corpus.

Used by the ``selftest`` CLI subcommand and the service endpoint; identical
inputs and seed produce identical reports.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import presets
from .charclasses import (
    chern,
    chern_simons,
    cs_between,
    intrinsic_modular,
    secondary_class,
    straight_path,
    unimodularity_certificate,
)
from .cochains import from_function, shuffle_cup_value, tee_cochain
from .cohomology import certify_closed, cohomology_point
from .connections import (
    Connection,
    adjoint,
    bott_connections,
    covariant_derivative_end,
    curvature,
    curvature_commutator_value,
    half_twist_linear_connection,
    top_connection,
)
from .courant import replay_witness
from .dirac import check_dirac, d_l, dirac_subbundle, relative_modular_class, restrict
from .linalg import Mat
from .poly import Poly
from .randgen import rand_cochain, rand_connection, rand_function, rand_section

DEFAULT_SEED = 20240401


@dataclass
class SelfTestCheck:
    name: str
    passed: bool
    details: str = ""


@dataclass
class SelfTestReport:
    seed: int
    checks: list[SelfTestCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, details: str = ""):
        self.checks.append(SelfTestCheck(name, bool(passed), details))

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed,
                 **({"details": c.details} if c.details else {})}
                for c in self.checks
            ],
        }


def run_selftest(seed: int = DEFAULT_SEED) -> SelfTestReport:
    report = SelfTestReport(seed=seed)
    corpus = presets.corpus()

    for E in corpus:
        axioms = E.check_axioms(seed=seed)
        report.add(f"axioms[{E.name}]", axioms.passed,
                   "" if axioms.passed else str(axioms.failing()[0].witness))

    for E in corpus:
        try:
            _ = E.theta  # construction verifies the master equation
            report.add(f"master-equation[{E.name}]", True)
        except Exception as exc:  # pragma: no cover
            report.add(f"master-equation[{E.name}]", False, str(exc))

    bad = presets.negative_control()
    bad_report = bad.check_axioms(seed=seed)
    c3 = next(c for c in bad_report.checks if c.axiom == "C3")
    replayed = (not c3.passed) and replay_witness(bad, c3.witness)
    report.add("negative-control-C3", replayed)

    rng = random.Random(seed)
    E = presets.standard(2)
    omega = rand_cochain(rng, E, 3)
    e, ep = rand_section(rng, E), rand_section(rng, E)
    ok = (omega.d().d().is_zero
          and omega.d().contract(e) + omega.contract(e).d() == omega.lie(e)
          and omega.lie(ep).lie(e) - omega.lie(e).lie(ep) == omega.lie(E.bracket(e, ep)))
    report.add("cartan-relations[standard2]", ok)

    a, b = rand_cochain(rng, E, 1), rand_cochain(rng, E, 2)
    sections = [rand_section(rng, E) for _ in range(3)]
    report.add("cup-shuffle[standard2]",
               a.cup(b).evaluate(*sections) == shuffle_cup_value(E, a, b, sections))

    conn = rand_connection(rng, E, 2)
    F = curvature(conn)
    e1, e2 = rand_section(rng, E), rand_section(rng, E)
    fn = [rand_function(rng, E) for _ in range(2)]
    direct = curvature_commutator_value(conn, e1, e2, fn)
    via = tuple(
        sum((F.entries[nu][mu].evaluate(e1, e2) * fn[mu] for mu in range(2)),
            Poly.zero(E.coords))
        for nu in range(2))
    report.add("curvature-dual-route[standard2]", direct == via)
    report.add("bianchi[standard2]", covariant_derivative_end(conn, F).is_zero)

    c0 = rand_connection(rng, E, 2, max_degree=0)
    c1 = rand_connection(rng, E, 2, max_degree=0)
    cs2 = chern_simons(straight_path(c0, c1), 2)
    report.add("transgression[standard2]",
               cs2.d() == chern(c1, 2) - chern(c0, 2))

    for E2 in corpus:
        cert = unimodularity_certificate(E2, bound=2)
        report.add(f"unimodular[{E2.name}]",
                   certify_closed(cert.xi) and cert.decided)

    so3 = presets.so3_killing()
    dims = [cohomology_point(so3, k).dimension for k in range(4)]
    report.add("cohomology[so3]", dims == [1, 0, 0, 1], f"dims={dims}")
    report.add("modular-zero[so3]", intrinsic_modular(so3).is_zero)

    std2 = presets.standard(2)
    tm = [std2.frame(i) for i in range(std2.n)]
    report.add("dirac[TM,untwisted]", check_dirac(std2, tm).ok)
    tw3 = presets.PRESETS["standard_twisted3"]()
    tw_report = check_dirac(tw3, [tw3.frame(i) for i in range(tw3.n)])
    report.add("dirac[TM,twisted-fails]",
               (not tw_report.ok) and tw_report.witness["reason"] == "bracket leaves the span")
    L = dirac_subbundle(std2, tm)
    form, closed = relative_modular_class(std2, L)
    report.add("relative-modular[TM]", closed and form.is_zero)
    omega2 = rand_cochain(rng, std2, 1)
    report.add("dirac-differential-compat",
               restrict(omega2.d(), L) == d_l(restrict(omega2, L)))
    report.add("restrict-T-vanishes", restrict(tee_cochain(std2), L).is_zero)

    flat = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    lin = half_twist_linear_connection(tw3, flat, {(0, 1, 2): 1})
    report.add("secondary[twisted-euclidean]",
               secondary_class(tw3, lin, Mat.identity(6), 1).is_zero)
    sl2 = presets.sl2_killing()
    reps = []
    for Eq in (so3, sl2):
        gamma = tuple(
            tuple(tuple(Eq.c[x][y][z] for z in range(Eq.r)) for y in range(Eq.r))
            for x in range(Eq.r))
        ad = Connection(Eq, Eq.r, gamma)
        reps.append(cs_between(ad, adjoint(ad, Mat.identity(Eq.r)), 2))
    report.add("secondary[quadratic-constant]",
               all(rep.is_zero for rep in reps),
               "straight-line integral constant = 0")

    for E3 in corpus:
        report.add(f"top-flat[{E3.name}]", curvature(top_connection(E3)).is_zero)

    return report
