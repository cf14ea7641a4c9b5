import random

import pytest

from courantcalc import presets
from courantcalc.cochains import from_function, tee_cochain
from courantcalc.dirac import (
    DiracError,
    LForm,
    check_dirac,
    d_l,
    dirac_subbundle,
    lie_algebroid_jacobi_defect,
    relative_modular_class,
    restrict,
)
from courantcalc.poly import Poly
from courantcalc.randgen import rand_cochain

STD2 = presets.standard(2)
TW3 = presets.standard_twisted(3, {(0, 1, 2): 1})


def tm_frame(E):
    return [E.frame(i) for i in range(E.n)]


def graph_frame(E, omega):
    """L = { X + i_X omega } for a constant skew matrix omega."""
    out = []
    for i in range(E.n):
        comps = [0] * E.r
        comps[i] = 1
        for j in range(E.n):
            comps[E.n + j] = omega[i][j]
        out.append(E.section(comps))
    return out


def test_tm_is_dirac_untwisted():
    report = check_dirac(STD2, tm_frame(STD2))
    assert report.ok
    # coordinate frame has vanishing closure coefficients
    assert all(p.is_zero for plane in report.closure for row in plane for p in row)


def test_tm_fails_when_twisted():
    report = check_dirac(TW3, tm_frame(TW3))
    assert not report.ok
    assert report.rank_ok and report.isotropic and not report.involutive
    assert report.witness["reason"] == "bracket leaves the span"
    # the witness bracket has a genuine covector component
    bracket = TW3.section(report.witness["bracket"])
    assert any(not c.is_zero for c in bracket.comps[TW3.n:])


def test_graph_of_constant_two_form_is_dirac():
    omega = [[0, 2], [-2, 0]]
    L = dirac_subbundle(STD2, graph_frame(STD2, omega))
    assert all(p.is_zero for plane in L.closure for row in plane for p in row)


def test_graph_with_polynomial_coefficients():
    # L spanned by x-dependent combinations still checks exactly:
    # the graph of omega = x1 dx1 ^ dx2 (closed since n = 2)
    E = STD2
    frame = [E.section(["1", "0", "0", "x1"]), E.section(["0", "1", "-x1", "0"])]
    report = check_dirac(E, frame)
    assert report.ok


def test_rank_deficient_frame_rejected():
    E = STD2
    frame = [E.section(["1", "0", "0", "0"]), E.section(["x1", "0", "0", "0"])]
    report = check_dirac(E, frame)
    assert not report.ok and not report.rank_ok


def test_non_isotropic_frame_rejected():
    E = STD2
    frame = [E.section(["1", "0", "1", "0"]), E.section(["0", "1", "0", "0"])]
    report = check_dirac(E, frame)
    assert not report.ok and not report.isotropic
    assert report.witness["reason"] == "isotropy fails"


def test_odd_rank_and_wrong_count_errors():
    with pytest.raises(DiracError):
        check_dirac(presets.so3_killing(), [presets.so3_killing().frame(0)])
    with pytest.raises(DiracError):
        check_dirac(STD2, tm_frame(STD2)[:1])


def test_restrict_function_and_skewness():
    L = dirac_subbundle(STD2, tm_frame(STD2))
    f = STD2.function("x1^2 - x2")
    restricted = restrict(from_function(STD2, f), L)
    assert restricted.degree == 0
    assert restricted.component(()) == f
    rng = random.Random(601)
    omega = rand_cochain(rng, STD2, 2)
    restricted2 = restrict(omega, L)
    # adjacent-swap defect vanishes on isotropic tuples
    assert restricted2.evaluate_indices((0, 1)) == -restricted2.evaluate_indices((1, 0))
    assert restricted2.evaluate_indices((0, 0)).is_zero
    direct = omega.evaluate(L.frame[0], L.frame[1])
    assert restricted2.component((0, 1)) == direct
    assert omega.evaluate(L.frame[1], L.frame[0]) == -direct


def test_restrict_tee_vanishes_by_closure():
    for E, frame in ((STD2, tm_frame(STD2)),
                     (STD2, graph_frame(STD2, [[0, 3], [-3, 0]]))):
        L = dirac_subbundle(E, frame)
        assert restrict(tee_cochain(E), L).is_zero


def test_restriction_is_algebra_map():
    rng = random.Random(602)
    L = dirac_subbundle(STD2, graph_frame(STD2, [[0, 1], [-1, 0]]))
    omega = rand_cochain(rng, STD2, 1)
    tau = rand_cochain(rng, STD2, 1)
    cup = restrict(omega.cup(tau), L)
    a, b = restrict(omega, L), restrict(tau, L)
    # wedge of two 1-forms on the frame
    expected = a.component((0,)) * b.component((1,)) - a.component((1,)) * b.component((0,))
    assert cup.component((0, 1)) == expected


def test_differential_compatibility():
    rng = random.Random(603)
    for frame in (tm_frame(STD2), graph_frame(STD2, [[0, 1], [-1, 0]])):
        L = dirac_subbundle(STD2, frame)
        for k in (0, 1):
            for _ in range(3):
                omega = rand_cochain(rng, STD2, k)
                lhs = restrict(omega.d(), L)
                rhs = d_l(restrict(omega, L))
                assert lhs == rhs


def test_d_l_squares_to_zero():
    L = dirac_subbundle(STD2, tm_frame(STD2))
    f = LForm.build(L, 0, {(): "x1*x2"})
    assert d_l(d_l(f)).is_zero
    one_form = LForm.build(L, 1, {(0,): "x2", (1,): "x1^2"})
    assert d_l(d_l(one_form)).is_zero


def test_closure_jacobi():
    for frame in (tm_frame(STD2), graph_frame(STD2, [[0, 1], [-1, 0]])):
        L = dirac_subbundle(STD2, frame)
        assert lie_algebroid_jacobi_defect(L) is None


def test_relative_modular_class_tm_vanishes():
    for E in (STD2, presets.standard(3)):
        L = dirac_subbundle(E, tm_frame(E))
        form, closed = relative_modular_class(E, L)
        assert closed and form.is_zero


def test_relative_modular_class_point_lagrangian():
    # the aff(1) summand inside its double: tr(ad) = (1, 0) on (H, X)
    E = presets.double_aff1()
    L = dirac_subbundle(E, [E.frame(0), E.frame(1)])
    form, closed = relative_modular_class(E, L)
    assert closed
    assert form.component((0,)) == Poly.const(1)
    assert form.component((1,)).is_zero


def test_relative_modular_class_abelian_lagrangian():
    # a Lagrangian plane in the abelian quadratic algebra of rank 4
    from courantcalc.linalg import Mat

    E = presets.quadratic_lie(
        "abelian4_hyperbolic",
        [[[0] * 4 for _ in range(4)] for _ in range(4)],
        Mat([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]))
    L = dirac_subbundle(E, [E.frame(0), E.frame(1)])
    form, closed = relative_modular_class(E, L)
    assert closed and form.is_zero
