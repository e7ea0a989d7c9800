from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slicequat.quat_core import (
    I,
    J,
    K,
    ONE,
    Quaternion,
    complexify,
    from_complex_pair,
    in_slice,
    int_pow,
    left_matrix,
    qinv,
    qmul,
    qpow,
    right_matrix,
    rotation_matrix,
    sandwich_matrix,
    slice_projection,
    split,
)

coord = st.floats(-10, 10, allow_nan=False)
quats = st.builds(Quaternion, coord, coord, coord, coord)


def test_unit_table():
    assert I * J == K and J * K == I and K * I == J
    assert J * I == -K
    for u in (I, J, K):
        assert u * u == -ONE
    assert I * J * K == -ONE


@given(quats, quats, quats)
def test_associative(a, b, c):
    assert ((a * b) * c).isclose(a * (b * c), atol=1e-9)


@given(quats, quats)
def test_norm_multiplicative_and_conj_reverses(a, b):
    assert np.isclose((a * b).norm(), a.norm() * b.norm(), rtol=1e-12, atol=1e-12)
    assert (a * b).conj().isclose(b.conj() * a.conj(), atol=1e-9)


@given(quats)
def test_inverse(a):
    if a.norm() < 1e-3:
        return
    assert (a * a.inverse()).isclose(ONE, atol=1e-12)
    assert np.allclose(qinv(a.array), a.inverse().array)


def test_zero_inverse_raises():
    with pytest.raises(ZeroDivisionError):
        Quaternion().inverse()
    with pytest.raises(ZeroDivisionError):
        int_pow(Quaternion(), -1)


def test_quaternion_division_only_by_scalars():
    assert (Quaternion(2, 4) / 2) == Quaternion(1, 2)
    with pytest.raises(TypeError):
        Quaternion(1) / I


@pytest.mark.parametrize("n", [-3, -1, 0, 1, 2, 5])
def test_powers(n):
    q = Quaternion(0.3, -0.2, 0.5, 0.1)
    acc = ONE
    step = q if n >= 0 else q.inverse()
    for _ in range(abs(n)):
        acc = acc * step
    assert int_pow(q, n).isclose(acc, atol=1e-12)
    assert np.allclose(qpow(q.array, n), acc.array)


def test_batched_qmul_matches_scalar():
    rng = np.random.default_rng(0)
    a, b = rng.standard_normal((2, 7, 4))
    out = qmul(a, b)
    for n in range(7):
        assert np.allclose(out[n], (Quaternion.from_array(a[n]) * Quaternion.from_array(b[n])).array)


@given(quats)
def test_split_reconstructs(q):
    s = split(q)
    back = Quaternion(s.alpha) + s.unit * s.beta
    assert back.isclose(q, atol=1e-9)
    assert s.beta >= 0.0
    assert (s.unit * s.unit).isclose(-ONE, atol=1e-12)


def test_split_real_uses_i():
    s = split(Quaternion(2.0))
    assert s.is_real and s.unit == I and s.beta == 0.0


def test_in_slice_and_projection():
    q = Quaternion(1, 2, 3, 0)
    u = Quaternion(0, 2, 3, 0) / np.sqrt(13)
    assert in_slice(q, u)
    assert not in_slice(q, K)
    with pytest.raises(ValueError):
        in_slice(q, Quaternion(0, 2, 0, 0))
    along, perp = slice_projection(Quaternion(1, 1, 1, 1), I)
    assert along == Quaternion(1, 1) and perp == Quaternion(0, 0, 1, 1)


@given(quats, quats)
@settings(max_examples=50)
def test_matrix_models(q, x):
    assert np.allclose(left_matrix(q) @ x.array, (q * x).array, atol=1e-9)
    assert np.allclose(right_matrix(q) @ x.array, (x * q).array, atol=1e-9)


def test_rotation_and_sandwich():
    q = Quaternion(0.3, 0.1, -0.7, 0.2)
    R = rotation_matrix(q)
    assert np.allclose(R @ R.T, np.eye(4), atol=1e-12)
    x = Quaternion(1, 2, 3, 4)
    assert np.allclose(sandwich_matrix(q, J) @ x.array, (q * x * J.inverse()).array)


def test_complexify_roundtrip():
    q = Quaternion(1, 2, 3, 4)
    z, w = complexify(q)
    assert (z, w) == (1 + 2j, 3 + 4j)
    assert from_complex_pair(z, w) == q
    # q = z + w j
    assert (Quaternion(z.real, z.imag) + Quaternion(w.real, w.imag) * J) == q
