from __future__ import annotations

import numpy as np
import pytest

from slicequat.deform import (
    FamilyParams,
    closed_fiber_iterate,
    dimension_scan,
    family_commutation_check,
    family_iterate,
    family_map,
    fiber,
)
from slicequat.hopf import HopfCase, apply_generator, classify
from slicequat.quat_core import I, J, K, Quaternion, random_quaternions


def test_family_validation():
    with pytest.raises(ValueError):
        FamilyParams("other", alpha=0.5)
    with pytest.raises(ValueError):
        FamilyParams("A21_to_B", p=1, beta=0.5)
    with pytest.raises(ValueError):
        FamilyParams("A21_to_B", p=2, beta=J * 0.5)
    with pytest.raises(ValueError):
        FamilyParams("A1_to_A3", alpha=1.5)


def test_fibers_classify():
    k1 = FamilyParams("A1_to_A3", alpha=0.5)
    assert classify(fiber(k1, 0)).case is HopfCase.A1
    assert classify(fiber(k1, J)).case is HopfCase.A3
    k2 = FamilyParams("A21_to_B", p=2, beta=0.5)
    f0 = fiber(k2, 0)
    assert classify(f0).case is HopfCase.A21
    assert f0.alpha == Quaternion(0.25) and f0.p == 1
    assert classify(fiber(k2, J)).case is HopfCase.B


def test_slice_regular_flag():
    assert FamilyParams("A1_to_A3", alpha=0.5).slice_regular_family
    assert not FamilyParams("A1_to_A3", alpha=I * 0.5).slice_regular_family
    assert FamilyParams("A21_to_B", p=3, beta=0.5).slice_regular_family


@pytest.mark.parametrize(
    "family", [FamilyParams("A1_to_A3", alpha=0.5), FamilyParams("A1_to_A3", alpha=I * 0.5), FamilyParams("A21_to_B", p=2, beta=0.5)]
)
def test_fiber_consistency(family):
    rng = np.random.default_rng(4)
    z, w, lam = (random_quaternions(rng, 100, 0.2, 1.5) for _ in range(3))
    Fz, Fw, Fl = family_map(family, z, w, lam)
    assert np.allclose(Fl, lam)
    for n in range(100):
        gz, gw = apply_generator(fiber(family, Quaternion.from_array(lam[n])), z[n], w[n])
        assert np.linalg.norm(gz - Fz[n]) < 1e-11 and np.linalg.norm(gw - Fw[n]) < 1e-11


def test_commutation_check_kind2():
    family = FamilyParams("A21_to_B", p=2, beta=0.5)
    assert family_commutation_check(family, range(-2, 4), samples=50) < 1e-10


def test_kind1_iterate_matches_closed_a3():
    family = FamilyParams("A1_to_A3", alpha=I * 0.5)
    lam = J + K
    rng = np.random.default_rng(5)
    z, w = random_quaternions(rng, 20, 0.5, 1.5), random_quaternions(rng, 20, 0.5, 1.5)
    Fz, Fw, _ = family_iterate(family, 2, z, w, np.broadcast_to(lam.array, z.shape))
    cz, cw = closed_fiber_iterate(family, lam, 2)(z, w)
    assert np.allclose(Fz, cz, atol=1e-12) and np.allclose(Fw, cw, atol=1e-12)


def test_kind1_scan_jump():
    rows = dimension_scan(FamilyParams("A1_to_A3", alpha=0.5), [0, J, I + K])
    assert [r.nullity for r in rows] == [16, 8, 8]
    assert all(r.passed and r.asserted for r in rows)
    assert rows[0].nullity > max(r.nullity for r in rows[1:])


def test_kind1_nonreal_alpha_not_asserted():
    rows = dimension_scan(FamilyParams("A1_to_A3", alpha=I * 0.5), [0, J])
    assert not any(r.asserted for r in rows)
    assert rows[0].nullity == 8 and rows[1].nullity in (4, 8)


def test_kind2_scan_nonzero_lambda():
    rows = dimension_scan(FamilyParams("A21_to_B", p=2, beta=0.5), [J, I + K])
    assert [r.nullity for r in rows] == [5, 5]


def test_kind2_jump_is_strict():
    rows = dimension_scan(FamilyParams("A21_to_B", p=2, beta=0.5), [0, J])
    assert rows[0].nullity > rows[1].nullity


def test_empty_scan_rejected():
    with pytest.raises(ValueError):
        dimension_scan(FamilyParams("A1_to_A3", alpha=0.5), [])
