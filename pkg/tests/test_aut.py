from __future__ import annotations

import numpy as np
import pytest

from slicequat import aut
from slicequat.hopf import HopfParams
from slicequat.quat_core import I, J, K, ONE, Quaternion
from slicequat.series import OrderedSeries, SeriesMap

P1_CASES = [
    HopfParams(1, 0.5, 0.5),
    HopfParams(1, I * 0.5, I * 0.5),
    HopfParams(1, I * 0.25, J * 0.5),
    HopfParams(1, 0.25, J * 0.5),
    HopfParams(1, 0.25, 0.5),
    HopfParams(1, I * 0.5, J * 0.5),
    HopfParams(1, I * 0.5, I * -0.5),
    HopfParams(1, 0.5, 0.5, J),
    HopfParams(1, I * 0.5, I * 0.5, 1.0),
    HopfParams(1, I * 0.5, I * 0.5, J),
]


def test_layout_roundtrip():
    rng = np.random.default_rng(0)
    v = rng.standard_normal(aut.coefficient_dim(3))
    assert np.allclose(aut.map_to_vector(aut.vector_to_map(v, 3)), v)
    assert len(aut.monomials(3)) * 8 == aut.coefficient_dim(3)
    assert (0, 0) not in aut.monomials(3)


@pytest.mark.parametrize("params", P1_CASES, ids=lambda p: f"{p.alpha}-{p.beta}-{p.lam}")
def test_direct_and_linearized_agree(params):
    d = aut.aut_dimension(params, method="direct")
    l = aut.aut_dimension(params, method="linearized")
    assert d.nullity == l.nullity
    assert d.sv_gap > 1e6 and l.sv_gap > 1e6


def test_direct_method_needs_p1():
    with pytest.raises(aut.MethodError):
        aut.aut_dimension(HopfParams(2, 0.25, 0.5, J), method="direct")
    with pytest.raises(ValueError):
        aut.aut_dimension(HopfParams(1, 0.5, 0.5), method="bogus")


def test_invalid_params_raise():
    with pytest.raises(ValueError):
        aut.aut_dimension(HopfParams(1, 0.25, 0.5, 1.0))


@pytest.mark.parametrize(
    "params",
    [HopfParams(1, 0.5, 0.5, J), HopfParams(1, I * 0.5, I * 0.5, 1.0), HopfParams(1, I * 0.5, I * 0.5, J),
     HopfParams(1, I * 0.5, I * 0.5, I + J)],
)
def test_a3_closed_equations_match_nullity(params):
    # two independent routes to the same dimension
    assert len(aut.a3_solution_basis(params)) == aut.aut_dimension(params).nullity


def test_mixed_a3_is_in_expected_set():
    params = HopfParams(1, I * 0.5, I * 0.5, I + J)
    rep = aut.aut_dimension(params)
    assert aut.expected_dimension(params) == frozenset({4, 8})
    assert rep.passed


def test_resonant_a21_has_extra_automorphisms():
    # alpha = beta^2: (z + w^2 c, w) commutes with (z alpha, w beta)
    params = HopfParams(1, 0.25, 0.5)
    c = Quaternion(0.2, -0.3, 0.7, 0.1)
    phi = SeriesMap(OrderedSeries(2, {(1, 0): ONE, (0, 2): c}), OrderedSeries(2, {(0, 1): ONE}))
    assert aut.commutator_residual(params, phi) < 1e-12
    rep = aut.aut_dimension(params)
    assert rep.nullity == 12
    # the quadratic block carries exactly the four extra directions
    quad = [n for n, (h, k) in enumerate(aut.monomials(rep.degree)) if h + k >= 2]
    ns = rep.nullspace.reshape(rep.nullity, 2, -1, 4)
    assert np.linalg.matrix_rank(ns[:, :, quad, :].reshape(rep.nullity, -1), tol=1e-8) == 4


def test_similar_pair_a22_has_cross_terms():
    # j X = X i has the solutions X in span{1 + k, i - j}
    params = HopfParams(1, I * 0.5, J * 0.5)
    a01 = (ONE + K) * 0.3
    b10 = (ONE - K) * 0.3
    assert (J * a01 - a01 * I).norm() < 1e-15
    phi = aut.make_automorphism(params, a10=ONE, a01=a01, b10=b10, b01=ONE)
    assert aut.commutator_residual(params, phi) < 1e-12
    assert aut.fixed_space_dimension(J, I) == 2
    assert aut.aut_dimension(params).nullity == 8


def test_expected_dimension_table():
    assert aut.expected_dimension(HopfParams(1, 0.5, 0.5)) == {16}
    assert aut.expected_dimension(HopfParams(1, 0.25, 0.5)) == {8}
    assert aut.expected_dimension(HopfParams(1, 0.5, J * 0.5)) == {6, 8}
    assert aut.expected_dimension(HopfParams(2, 0.25, 0.5, J)) == {5}


def test_case_b_dimension_stable_in_degree():
    params = HopfParams(2, 0.25, 0.5, J)
    assert {aut.aut_dimension(params, degree=n).nullity for n in (3, 4, 5)} == {5}


def test_make_automorphism_validation():
    params = HopfParams(1, I * 0.5, I * 0.5)
    with pytest.raises(ValueError):
        aut.make_automorphism(params, a10=J, a01=0, b10=0, b01=1)
    with pytest.raises(ValueError):
        aut.make_automorphism(params, a10=1, b01=1)
    with pytest.raises(ValueError):
        aut.make_automorphism(HopfParams(2, 0.25, 0.5, J), b01=I, a0p=1)
    with pytest.raises(ValueError):
        aut.make_automorphism(HopfParams(1, 0.5, 0.5), a10=1, a01=1, b10=1, b01=1)


def test_invertibility_test():
    assert aut.is_invertible_linear(ONE, 0, 0, ONE)
    assert aut.is_invertible_linear(0, ONE, ONE, 0)
    assert not aut.is_invertible_linear(ONE, ONE, ONE, ONE)
    # noncommutative: the determinant-style test must respect order
    assert aut.is_invertible_linear(I, J, K, ONE)


def test_fixed_sets():
    fs = aut.rotation_translation_fixed_set(I, 2 * J)
    assert fs.kind is aut.FixedSetKind.PLANE and fs.contains(Quaternion(3, -1, 1, 0))
    assert aut.rotation_translation_fixed_set(Quaternion(2.0)).kind is aut.FixedSetKind.ALL
    # q real with a translation: X = X + c has no solution
    assert aut.rotation_translation_fixed_set(ONE, J).kind is aut.FixedSetKind.EMPTY
    pt = aut.rotation_translation_fixed_set(Quaternion(0.3, 0, 0.4, 0), 0.0, q2=I * 0.5)
    assert pt.kind is aut.FixedSetKind.POINT and pt.point.norm() < 1e-12


def test_report_json_keys():
    rep = aut.aut_dimension(HopfParams(1, 0.5, 0.5), degree=2)
    data = rep.to_json()
    for key in ("params", "case", "method", "degree", "samples", "seed", "singular_values", "nullity", "expected", "pass"):
        assert key in data
    assert data["pass"] is True
