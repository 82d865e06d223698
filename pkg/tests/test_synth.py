import random
from collections import Counter

import pytest

from toroidal.cyclotomic import RootOfUnity
from toroidal.padic import PadicInt, ValInfo, valuation
from toroidal.powerseries import substitute_torus
from toroidal.rigidity import (
    ToroidalFactor,
    exclude_by_quadratic,
    expand_toroidal,
    fe_factor,
    in_square_of_maximal_ideal,
    modp_sweep,
    vanishes_on_translate,
)
from toroidal.synth import (
    PlantSpec,
    factor_series,
    grid_class,
    grid_precision,
    oracle_scan,
    plant,
    random_series,
)

from helpers import series


def test_random_series_deterministic():
    a = random_series(4, 5, 4, 6)
    b = random_series(4, 5, 4, 6)
    assert a.coeffs == b.coeffs and a.content_hash() == b.content_hash()
    assert random_series(5, 5, 4, 6).coeffs != a.coeffs


def test_constraints():
    u = random_series(1, 3, 4, 5, "Unit")
    assert valuation(u.coefficient(0, 0)) == ValInfo.exact(0)
    assert random_series(1, 3, 4, 5, "InMaximalIdeal").residue(0, 0) == 0
    assert in_square_of_maximal_ideal(random_series(1, 3, 4, 5, "InSquareOfMaximalIdeal"))


def test_uniform_mod_p():
    p = 5
    counts = Counter()
    for seed in range(700):
        f = random_series(seed, p, 3, 4, "Free")
        counts.update(f.residue(a, d - a) % p for d in range(4) for a in range(d + 1))
    total = sum(counts.values())
    chi2 = sum((counts[r] - total / p) ** 2 / (total / p) for r in range(p))
    assert total >= 7000 and chi2 < 30


def test_plant_fe_with_unit_cofactor_is_the_factor():
    p = 3
    spec = PlantSpec(0, fe_factor(p), "Unit", 5, (8,) * 6)
    f = plant(spec)
    assert vanishes_on_translate(f, fe_factor(p)).status == "ZeroAtPrecision"
    one = series({(0, 0): 1}, p, 5, 8, f.gamma)
    assert (factor_series(fe_factor(p), 5, 8, f.gamma) * one).congruent(
        expand_toroidal(fe_factor(p), 5, 8, f.gamma))


def test_plant_spec_json_round_trip():
    F = ToroidalFactor.of("PowerOnT", 7, 2, 5, RootOfUnity(5, 2, 3))
    spec = PlantSpec(3, F, "Unit", 4, (6,) * 5)
    again = PlantSpec.from_json(spec.to_json())
    assert again == spec and plant(again).coeffs == plant(spec).coeffs


@pytest.mark.parametrize("seed", range(10))
def test_plants_vanish_and_are_detected(seed):
    rng = random.Random(seed)
    p = rng.choice([3, 5])
    xi = RootOfUnity(p, 1, rng.randrange(1, p))
    F = ToroidalFactor.of(rng.choice(["PowerOnW", "PowerOnT"]), rng.randrange(1, 2 * p), rng.randrange(2), p, xi)
    f = plant(PlantSpec(seed, F, "Unit", 6, (9,) * 7))
    assert substitute_torus(f, F).is_zero()
    assert modp_sweep(f, 1).outcome != "AllBelowOne"


def test_oracle_examples():
    p, D, M = 3, 6, 8
    t = grid_precision(p, D)
    f = plant(PlantSpec(2, fe_factor(p), "Unit", D, (M,) * (D + 1)))
    found = oracle_scan(f, 1, t, [0, 1])
    assert ("PowerOnT", 0, 0, 2, 0) in {grid_class(F, t) for F in found}
    bare = oracle_scan(factor_series(fe_factor(p), D, M, f.gamma), 1, t, [0, 1])
    assert {grid_class(F, t) for F in found} == {grid_class(F, t) for F in bare}
    assert oracle_scan(series({(0, 0): 1, (1, 0): 1}, p, D, M), 1, t, [0, 1]) == []


def test_oracle_requires_enough_digits_of_N():
    with pytest.raises(Exception):
        oracle_scan(series({}, 3, 6, 8), 1, grid_precision(3, 6) - 1)


@pytest.mark.parametrize("seed", range(5))
def test_oracle_hits_are_consistent(seed):
    p, D, M = 3, 5, 8
    F = ToroidalFactor.of("PowerOnW", 1 + seed, seed % 2, p, RootOfUnity(p, 1, seed % 3))
    f = plant(PlantSpec(seed, F, "Unit", D, (M,) * (D + 1)))
    for G in oracle_scan(f, 1, grid_precision(p, D), [0, 1]):
        assert vanishes_on_translate(f, G).status == "ZeroAtPrecision"


def test_quadratic_pass_implies_empty_unit_one_scan():
    p, D = 3, 5
    passes = 0
    for seed in range(40):
        f = random_series(seed, p, D, 6, "InSquareOfMaximalIdeal")
        if exclude_by_quadratic(f).passed:
            passes += 1
            assert oracle_scan(f, 0, grid_precision(p, D), [0, 1, 2], unit_one_only=True) == []
    assert passes > 5
