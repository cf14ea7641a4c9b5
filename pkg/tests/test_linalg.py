import random
from fractions import Fraction

import pytest

from courantcalc.linalg import (
    LinAlgError,
    Mat,
    kernel_basis,
    poly_mat_mul,
    poly_mat_rank,
    poly_mat_unipotent_inverse,
    rank,
    solve_linear,
)
from courantcalc.poly import Poly


def test_identity_solve():
    assert solve_linear(Mat.identity(2), [1, 2]) == (1, 2)


def test_inconsistent_system():
    a = Mat([[1, 1], [2, 2]])
    assert solve_linear(a, [1, 3]) is None


def test_kernel_one_dimensional():
    basis = kernel_basis(Mat([[1, 1]]))
    assert len(basis) == 1
    v = basis[0]
    assert v[0] + v[1] == 0 and v != (0, 0)


def test_solution_verifies_randomized():
    rng = random.Random(13)
    for _ in range(25):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        a = Mat([[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(c)]
                 for _ in range(r)])
        x = [Fraction(rng.randint(-3, 3)) for _ in range(c)]
        b = a.apply(x)
        sol = solve_linear(a, b)
        assert sol is not None
        assert a.apply(sol) == tuple(b)


def test_kernel_vectors_annihilate():
    rng = random.Random(31)
    for _ in range(20):
        r, c = rng.randint(1, 4), rng.randint(1, 6)
        a = Mat([[rng.randint(-2, 2) for _ in range(c)] for _ in range(r)])
        basis = kernel_basis(a)
        assert len(basis) == c - rank(a)
        for v in basis:
            assert all(e == 0 for e in a.apply(v))


def test_dimension_mismatch():
    with pytest.raises(LinAlgError):
        solve_linear(Mat.identity(2), [1, 2, 3])


def test_inverse_and_det():
    g = Mat([[0, 1], [1, 0]])
    assert g.inverse() == g
    assert g.det() == -1
    assert Mat([[2, 0], [0, 3]]).inverse() == Mat([["1/2", 0], [0, "1/3"]])
    with pytest.raises(LinAlgError):
        Mat([[1, 1], [1, 1]]).inverse()


def test_positive_definite():
    assert Mat([[2, 1], [1, 2]]).is_positive_definite()
    assert not Mat([[0, 1], [1, 0]]).is_positive_definite()
    assert not Mat([[1, 2], [2, 1]]).is_positive_definite()


def test_poly_mat_rank():
    x1 = Poly.variable("x1")
    one = Poly.const(1)
    zero = Poly.zero()
    # rows [1, x1], [x1, x1^2] are proportional
    assert poly_mat_rank([[one, x1], [x1, x1 * x1]]) == 1
    assert poly_mat_rank([[one, zero], [x1, one]]) == 2


def test_unipotent_inverse():
    t = Poly.variable("t")
    zero, one = Poly.zero(), Poly.const(1)
    u = [[one, t], [zero, one]]
    inv = poly_mat_unipotent_inverse(u)
    assert inv[0][1] == -t
    prod = poly_mat_mul(u, inv)
    assert prod[0][0] == 1 and prod[0][1] == 0
    with pytest.raises(LinAlgError):
        poly_mat_unipotent_inverse([[one + t, zero], [zero, one]])
