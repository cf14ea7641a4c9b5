import random

import pytest

from courantcalc import presets
from courantcalc.courant import Section, StructureError, replay_witness
from courantcalc.graded import GradedElem, pbracket
from courantcalc.poly import Poly
from courantcalc.randgen import rand_function, rand_poly, rand_section

CORPUS = presets.corpus()


def P(text, vars=None):
    return Poly.parse(text, vars=vars)


# -- independent oracle for the (twisted) standard bracket --------------------

def oracle_standard_bracket(E, a: Section, b: Section, h):
    """[[X+alpha, Y+beta]] = [X,Y] + L_X beta - i_Y d alpha + i_X i_Y H,
    computed directly with de Rham operations on components."""
    n = E.n
    X, alpha = a.comps[:n], a.comps[n:]
    Y, beta = b.comps[:n], b.comps[n:]

    def d(i, f):
        return f.in_vars(E.coords).partial(f"x{i + 1}")

    lie_xy = [sum((X[i] * d(i, Y[j]) - Y[i] * d(i, X[j]) for i in range(n)),
                  Poly.zero(E.coords)) for j in range(n)]
    lie_x_beta = [sum((X[i] * d(i, beta[j]) + beta[i] * d(j, X[i]) for i in range(n)),
                      Poly.zero(E.coords)) for j in range(n)]
    iota_y_dalpha = [sum((Y[i] * (d(i, alpha[j]) - d(j, alpha[i])) for i in range(n)),
                         Poly.zero(E.coords)) for j in range(n)]
    h_term = [Poly.zero(E.coords) for _ in range(n)]
    for (i, j, k), coeff in h.items():
        # full antisymmetric extension of the increasing-triple data
        for perm, sign in (((i, j, k), 1), ((j, k, i), 1), ((k, i, j), 1),
                           ((j, i, k), -1), ((i, k, j), -1), ((k, j, i), -1)):
            pi, pj, pk = perm
            h_term[pk] = h_term[pk] + sign * coeff * Y[pi] * X[pj]
    cov = [lie_x_beta[j] - iota_y_dalpha[j] + h_term[j] for j in range(n)]
    return Section(tuple(lie_xy + cov))


def test_bracket_standard_r1_example():
    E = presets.standard(1)
    # [[d/dx, x dx]] = dx
    a = E.section(["1", "0"])
    b = E.section(["0", "x1"])
    got = E.bracket(a, b)
    assert got == E.section(["0", "1"])
    assert got == oracle_standard_bracket(E, a, b, {})


def test_bracket_matches_oracle_randomized():
    rng = random.Random(101)
    for E, h in ((presets.standard(2), {}),
                 (presets.standard_twisted(3, {(0, 1, 2): 1}),
                  {(0, 1, 2): Poly.const(1, ("x1", "x2", "x3"))})):
        for _ in range(6):
            a, b = rand_section(rng, E), rand_section(rng, E)
            assert E.bracket(a, b) == oracle_standard_bracket(E, a, b, h)


def test_bracket_frame_is_structure_functions():
    for E in (presets.so3_killing(), presets.double_aff1(), presets.standard(2)):
        for a in range(E.r):
            for b in range(E.r):
                got = E.bracket(E.frame(a), E.frame(b))
                expected = Section(tuple(E.c[a][b][k] for k in range(E.r)))
                assert got == expected


def test_bracket_silent_vanishes():
    rng = random.Random(102)
    E = presets.silent(1, 2)
    for _ in range(5):
        assert E.bracket(rand_section(rng, E), rand_section(rng, E)).is_zero


def test_dee_standard_is_exterior_derivative():
    E = presets.standard(2)
    f = P("x1^2*x2")
    df = E.dee(f)
    assert df == E.section(["0", "0", "2*x1*x2", "x1^2"])
    assert E.dee(P("5", vars=E.coords)).is_zero
    assert presets.silent(2, 3).dee(f).is_zero


def test_dee_defining_property():
    rng = random.Random(103)
    for E in (presets.standard(2), presets.standard_twisted(3, {(0, 1, 2): 1}),
              presets.double_aff1()):
        for _ in range(5):
            f = rand_function(rng, E)
            e = rand_section(rng, E)
            assert E.pair(E.dee(f), e) == E.anchor_apply(e, f)


def test_first_slot_rule_rederived():
    rng = random.Random(104)
    for E in (presets.standard(2), presets.standard_twisted(3, {(0, 1, 2): 1})):
        for _ in range(5):
            a, b = rand_section(rng, E), rand_section(rng, E)
            f = rand_function(rng, E)
            lhs = E.bracket(a.scale(f), b)
            rhs = (E.bracket(a, b).scale(f)
                   - a.scale(E.anchor_apply(b, f))
                   + E.dee(f).scale(E.pair(a, b)))
            assert lhs == rhs


def test_axioms_pass_on_corpus():
    for E in CORPUS:
        report = E.check_axioms()
        assert report.passed, f"{E.name}: {report.failing()}"


def test_negative_control_fails_c3_with_replayable_witness():
    bad = presets.negative_control()
    report = bad.check_axioms()
    assert not report.passed
    c3 = next(c for c in report.checks if c.axiom == "C3")
    assert not c3.passed and c3.witness is not None
    assert replay_witness(bad, c3.witness)


def test_perturbed_structure_rejects_theta():
    bad = presets.negative_control()
    with pytest.raises(StructureError):
        _ = bad.theta


def test_theta_master_equation_on_corpus():
    for E in CORPUS:
        theta = E.theta  # construction verifies round-trips
        assert pbracket(theta, theta).is_zero


def test_theta_silent_is_zero():
    assert presets.silent(1, 2).theta.is_zero
    assert presets.abelian().theta.is_zero


def test_theta_quadratic_lie_is_cubic():
    E = presets.so3_killing()
    theta = E.theta
    assert not theta.is_zero
    assert theta.degrees() == {3}
    assert all(len(xi) == 3 for xi, _ in theta.terms)


def test_t_tensor_total_antisymmetry():
    for E in (presets.so3_killing(), presets.sl2_killing(),
              presets.standard_twisted(3, {(0, 1, 2): 1}), presets.double_aff1()):
        T = E._t_tensor()
        for a in range(E.r):
            for b in range(E.r):
                for c in range(E.r):
                    assert T[a][b][c] == -T[b][a][c]
                    assert T[a][b][c] == -T[a][c][b]


def test_derived_brackets_roundtrip():
    rng = random.Random(105)
    for E in CORPUS:
        theta = E.theta
        for _ in range(3):
            a, b = rand_section(rng, E), rand_section(rng, E)
            f = rand_function(rng, E)
            ham = pbracket(E.lift(a), theta)
            assert E.unlift(pbracket(ham, E.lift(b))) == E.bracket(a, b)
            got = pbracket(ham, GradedElem.from_poly(E.ctx, f)).body_poly()
            assert got == E.anchor_apply(a, f)


def test_lift_pairing_consistency():
    rng = random.Random(106)
    E = presets.standard(2)
    for _ in range(5):
        a, b = rand_section(rng, E), rand_section(rng, E)
        assert pbracket(E.lift(a), E.lift(b)).body_poly() == E.pair(a, b)


def test_structure_json_roundtrip():
    for E in CORPUS:
        data = presets.structure_to_json(E)
        back = presets.structure_from_json(data)
        assert back == E


def test_structure_json_errors():
    with pytest.raises(StructureError):
        presets.structure_from_json({"format": 99})
    with pytest.raises(StructureError):
        presets.structure_from_json("no_such_preset")
    with pytest.raises(StructureError):
        presets.load_structure("missing_file.json")


def test_twisted_closedness_check():
    with pytest.raises(StructureError):
        presets.standard_twisted(4, {(0, 1, 2): "x4"})
    # closed non-constant twist is accepted
    E = presets.standard_twisted(4, {(0, 1, 2): "x1"})
    assert E.check_axioms(samples=2).passed


def test_invalid_inputs():
    from courantcalc.linalg import Mat

    with pytest.raises(StructureError):
        presets.quadratic_lie("bad", [[[0]]], Mat([[0]]))
    with pytest.raises(StructureError):
        presets.standard(0)
