import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from toroidal.cyclotomic import RootOfUnity, valuation_cyc
from toroidal.lfun_model import (
    BranchMeta,
    SpecialPoint,
    enum_discriminants,
    is_central,
    is_fundamental,
    kronecker,
    self_dual_indices,
    to_coordinates,
)
from toroidal.padic import ValInfo


def trivial(p, m=0):
    return RootOfUnity(p, m, 0)


def test_origin_is_weight_two_center():
    meta = BranchMeta(3, 5, 0, 0)
    x, y = to_coordinates(SpecialPoint(2, trivial(3), 1, trivial(3)), meta, 1)
    assert x.is_zero() and y.is_zero()


def test_primitive_nebentype():
    meta = BranchMeta(3, 5, 0, 0)
    x, y = to_coordinates(SpecialPoint(2, RootOfUnity(3, 1, 1), 1, trivial(3)), meta, 1)
    assert valuation_cyc(x) == ValInfo.exact(Fraction(1, 2)) and y.is_zero()


def test_weight_four():
    meta = BranchMeta(3, 5, 0, 0)
    x, y = to_coordinates(SpecialPoint(4, trivial(3), 2, trivial(3)), meta, 0)
    assert x.coeffs[0] == 2 * 3 + 9 and y.coeffs[0] == 3
    assert valuation_cyc(x) == valuation_cyc(y) == ValInfo.exact(1)


def test_level_too_small():
    with pytest.raises(ValueError):
        to_coordinates(SpecialPoint(2, RootOfUnity(3, 2, 1), 1, trivial(3)), BranchMeta(3, 5, 0, 0), 1)


@given(st.sampled_from([3, 5]), st.integers(2, 12), st.data())
def test_special_points_in_open_polydisk(p, k, data):
    j = data.draw(st.integers(1, k - 1))
    m = data.draw(st.integers(1, 2))
    pt = SpecialPoint(k, RootOfUnity(p, m, data.draw(st.integers(0, p**m - 1))), j,
                      RootOfUnity(p, m, data.draw(st.integers(0, p**m - 1))))
    for c in to_coordinates(pt, BranchMeta(p, 7, 0, 0), m):
        assert valuation_cyc(c).value > 0


def test_special_point_validation():
    with pytest.raises(ValueError):
        SpecialPoint(2, trivial(3), 2, trivial(3))
    with pytest.raises(ValueError):
        SpecialPoint(3, trivial(3), 1, trivial(3), tame_parity=1)
    SpecialPoint(3, trivial(3), 1, trivial(3), tame_parity=-1)


def test_is_central():
    assert is_central(SpecialPoint(2, trivial(3), 1, trivial(3)))
    assert not is_central(SpecialPoint(4, trivial(3), 1, trivial(3)))
    assert is_central(SpecialPoint(6, trivial(3), 3, trivial(3)))


def test_self_dual_indices():
    assert self_dual_indices(0, 5) == {0, 2}
    assert self_dual_indices(0, 11) == {0, 5}
    assert self_dual_indices(1, 3) == set()
    for p in (5, 7, 11, 13):
        for r in range(p - 1):
            assert len(self_dual_indices(r, p)) == (2 if r % 2 == 0 else 0)


def test_meta_validation():
    with pytest.raises(ValueError):
        BranchMeta(3, 5, 0, 0, twist_discriminant=-3)
    with pytest.raises(ValueError):
        BranchMeta(2, 5, 0, 0)
    assert BranchMeta(5, 7, 0, 2).self_dual
    assert not BranchMeta(5, 7, 0, 1).self_dual


def reciprocity_kronecker(D, n):
    """(D|n) for odd prime n via Euler's criterion, for n = 2 via the mod 8 rule."""
    if n == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    r = pow(D % n, (n - 1) // 2, n)
    return -1 if r == n - 1 else r


def test_kronecker_examples():
    assert all(kronecker(1, n) == 1 for n in range(1, 30))
    assert kronecker(29, 2) == -1 == kronecker(2, 29)
    for D in (-4, 5, -7, 8, 29, 41, -23):
        for n in (2, 3, 5, 7, 11, 13, 29, 41):
            assert kronecker(D, n) == reciprocity_kronecker(D, n)


def test_kronecker_multiplicative_and_periodic():
    rng = random.Random(0)
    for _ in range(100):
        D = rng.choice([d for d in range(-60, 61) if is_fundamental(d)])
        a, b = rng.randrange(1, 400), rng.randrange(1, 400)
        assert kronecker(D, a * b) == kronecker(D, a) * kronecker(D, b)
        assert kronecker(D, a) == kronecker(D, a + abs(D))


def brute_fundamental(D):
    if D % 4 == 1:
        return D != 1 and all(D % (q * q) for q in range(2, abs(D) + 1))
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and all(m % (q * q) for q in range(2, abs(m) + 1))
    return False


def test_enum_discriminants():
    assert enum_discriminants(6, 3, 5) == [-4]
    assert enum_discriminants(1, 3, 5) == []
    ds = enum_discriminants(50, 3, 5)
    assert 29 in ds and 41 in ds
    assert [abs(d) for d in ds] == sorted(abs(d) for d in ds)
    brute = [D for D in range(-349, 350) if brute_fundamental(D) and math.gcd(D, 15) == 1]
    assert sorted(enum_discriminants(350, 3, 5)) == sorted(brute)
