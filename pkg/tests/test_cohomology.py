import math
import random

import pytest

from courantcalc import presets
from courantcalc.cochains import from_section, tee_cochain
from courantcalc.cohomology import (
    TruncatedComplex,
    certify_closed,
    certify_exact,
    cohomology_point,
    d_square_is_zero,
)
from courantcalc.courant import StructureError
from courantcalc.randgen import rand_cochain

SO3 = presets.so3_killing()
STD2 = presets.standard(2)


def test_so3_betti_numbers():
    dims = [cohomology_point(SO3, k).dimension for k in range(4)]
    assert dims == [1, 0, 0, 1]


def test_sl2_betti_numbers():
    E = presets.sl2_killing()
    dims = [cohomology_point(E, k).dimension for k in range(4)]
    assert dims == [1, 0, 0, 1]


def test_abelian_betti_numbers_are_binomials():
    E = presets.abelian(3)
    for k in range(5):
        expected = math.comb(3, k) if k <= 3 else 0
        assert cohomology_point(E, k).dimension == expected


def test_vanishes_above_top_degree():
    assert cohomology_point(SO3, 4).dimension == 0
    assert cohomology_point(SO3, 17).dimension == 0


def test_representatives_are_nontrivial_cocycles():
    coh = cohomology_point(SO3, 3)
    assert len(coh.representatives) == 1
    rep = coh.representatives[0]
    assert certify_closed(rep)
    assert certify_exact(rep, 0) is None  # genuinely not a coboundary


def test_point_cohomology_rejects_positive_dimension():
    with pytest.raises(StructureError):
        cohomology_point(STD2, 1)


def test_certify_closed_tee():
    for E in (STD2, SO3, presets.standard_twisted(3, {(0, 1, 2): 1})):
        assert certify_closed(tee_cochain(E))


def test_certify_exact_tautological():
    rng = random.Random(401)
    for E in (STD2, SO3):
        for k in (1, 2):
            eta = rand_cochain(rng, E, k)
            omega = eta.d()
            if omega.is_zero:
                continue
            witness = certify_exact(omega, bound=4)
            assert witness is not None
            assert witness.d() == omega


def test_silent_structure_closed_but_undecided():
    E = presets.silent(1, 2)
    omega = from_section(E, E.frame(0))
    assert certify_closed(omega)
    for bound in (0, 2, 4):
        assert certify_exact(omega, bound) is None


def test_exact_witness_over_positive_dimension():
    # D(x1) is exact by construction on the standard structure
    E = STD2
    omega = from_section(E, E.dee(E.function("x1^2")))
    witness = certify_exact(omega, bound=3)
    assert witness is not None and witness.d() == omega


def test_d_square_zero_matrix_level():
    for E in (STD2, SO3, presets.standard_twisted(3, {(0, 1, 2): 1})):
        for k in (0, 1, 2):
            assert d_square_is_zero(E, k, bound=2)


def test_truncated_complex_shapes():
    tc = TruncatedComplex.build(STD2, 1, 1)
    assert len(tc.basis) > 0
    assert tc.matrix.cols == len(tc.basis)
