import random
from fractions import Fraction

import pytest

from courantcalc.graded import GradedContext, GradedElem, GradedError, pbracket
from courantcalc.linalg import Mat
from courantcalc.poly import Poly
from courantcalc.randgen import rand_graded


def ctx_std(n=2, r=3, g=None):
    return GradedContext(n, r, g if g is not None else Mat.identity(r))


HYPER2 = Mat([[0, 1], [1, 0]])


def test_koszul_sign_on_generators():
    ctx = ctx_std()
    xi1, xi2 = GradedElem.xi(ctx, 0), GradedElem.xi(ctx, 1)
    assert xi1 * xi2 == -(xi2 * xi1)
    assert (xi1 * xi1).is_zero
    p1, p2 = GradedElem.p(ctx, 0), GradedElem.p(ctx, 1)
    assert (p1 * p2 - p2 * p1).is_zero


def test_graded_commutativity_randomized():
    rng = random.Random(42)
    ctx = ctx_std()
    for _ in range(25):
        ka, kb = rng.randint(0, 4), rng.randint(0, 4)
        a, b = rand_graded(rng, ctx, ka), rand_graded(rng, ctx, kb)
        sign = -1 if (ka * kb) % 2 else 1
        assert a * b == (b * a).scale(sign)


def test_associativity_randomized():
    rng = random.Random(43)
    ctx = ctx_std(n=1, r=4)
    for _ in range(15):
        a = rand_graded(rng, ctx, rng.randint(0, 3))
        b = rand_graded(rng, ctx, rng.randint(0, 3))
        c = rand_graded(rng, ctx, rng.randint(0, 3))
        assert (a * b) * c == a * (b * c)


def test_bracket_generator_table():
    ctx = ctx_std(n=2, r=2, g=HYPER2)
    xi = [GradedElem.xi(ctx, a) for a in range(2)]
    p = [GradedElem.p(ctx, i) for i in range(2)]
    x1sq = GradedElem.from_poly(ctx, Poly.parse("x1^2", vars=ctx.coords))
    # {xi_a, xi_b} = g_ab
    for a in range(2):
        for b in range(2):
            expected = GradedElem.from_poly(ctx, ctx.pairing[a, b])
            assert pbracket(xi[a], xi[b]) == expected
    # {p_1, x1^2} = 2 x1
    assert pbracket(p[0], x1sq) == GradedElem.from_poly(ctx, Poly.parse("2*x1"))
    # {x1, xi_a} = 0 by degree
    x1 = GradedElem.from_poly(ctx, Poly.variable("x1"))
    assert pbracket(x1, xi[0]).is_zero
    # {p_i, xi_a} = 0 and {p_i, p_j} = 0
    assert pbracket(p[0], xi[1]).is_zero
    assert pbracket(p[0], p[1]).is_zero
    assert pbracket(p[0], p[0]).is_zero


def test_bracket_degree_drop():
    rng = random.Random(44)
    ctx = ctx_std()
    for _ in range(20):
        ka, kb = rng.randint(0, 4), rng.randint(0, 4)
        a, b = rand_graded(rng, ctx, ka), rand_graded(rng, ctx, kb)
        br = pbracket(a, b)
        if br.is_zero:
            continue
        assert br.degrees() == {ka + kb - 2}


def test_bracket_graded_antisymmetry():
    rng = random.Random(45)
    ctx = ctx_std()
    for _ in range(25):
        ka, kb = rng.randint(0, 4), rng.randint(0, 4)
        a, b = rand_graded(rng, ctx, ka), rand_graded(rng, ctx, kb)
        sign = -1 if ((ka - 2) * (kb - 2)) % 2 == 0 else 1
        assert pbracket(a, b) == pbracket(b, a).scale(sign)


def test_bracket_leibniz():
    rng = random.Random(46)
    ctx = ctx_std(n=1, r=4, g=Mat([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 2, 0], [0, 0, 0, 1]]))
    for _ in range(20):
        ka, kb, kc = rng.randint(0, 3), rng.randint(0, 3), rng.randint(0, 3)
        a, b, c = (rand_graded(rng, ctx, k, max_terms=2) for k in (ka, kb, kc))
        sign = -1 if ((ka - 2) * kb) % 2 else 1
        lhs = pbracket(a, b * c)
        rhs = pbracket(a, b) * c + (b * pbracket(a, c)).scale(sign)
        assert lhs == rhs


def test_bracket_graded_jacobi():
    rng = random.Random(47)
    ctx = ctx_std(n=2, r=3, g=Mat([[1, 1, 0], [1, 0, 0], [0, 0, -1]]))
    for _ in range(20):
        ka, kb, kc = rng.randint(1, 4), rng.randint(1, 4), rng.randint(1, 4)
        a, b, c = (rand_graded(rng, ctx, k, max_terms=2) for k in (ka, kb, kc))
        sign = -1 if ((ka - 2) * (kb - 2)) % 2 else 1
        lhs = pbracket(a, pbracket(b, c))
        rhs = pbracket(pbracket(a, b), c) + pbracket(b, pbracket(a, c)).scale(sign)
        assert lhs == rhs


def test_degree_part():
    ctx = ctx_std()
    elem = GradedElem.xi(ctx, 0) + GradedElem.p(ctx, 0)
    assert elem.degree_part(2) == GradedElem.p(ctx, 0)
    five = GradedElem.from_poly(ctx, 5)
    assert five.degree_part(0) == five
    xi12 = GradedElem.xi(ctx, 0) * GradedElem.xi(ctx, 1)
    assert xi12.degree_part(3).is_zero


def test_context_mismatch():
    a = GradedElem.xi(ctx_std(), 0)
    b = GradedElem.xi(ctx_std(n=1, r=3), 0)
    with pytest.raises(GradedError):
        a * b


def test_parse_and_print_roundtrip():
    ctx = ctx_std(n=2, r=4)
    text = "1/2*x1*xi{1,3}*p2^2 - xi{2} + 3"
    elem = GradedElem.parse(ctx, text)
    assert GradedElem.parse(ctx, str(elem)) == elem
    # unsorted xi word normalizes with a Koszul sign
    assert GradedElem.parse(ctx, "xi{3,1}") == -GradedElem.parse(ctx, "xi{1,3}")
    assert GradedElem.parse(ctx, "xi{1,1}").is_zero
    rng = random.Random(48)
    for _ in range(15):
        elem = rand_graded(rng, ctx, rng.randint(0, 4))
        assert GradedElem.parse(ctx, str(elem)) == elem


def test_scalar_coefficients_stay_rational():
    ctx = ctx_std(n=1, r=2)
    elem = GradedElem.xi(ctx, 0).scale(Fraction(2, 3))
    assert str(elem) == "2/3*xi{1}"
