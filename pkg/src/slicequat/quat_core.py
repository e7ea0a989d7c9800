"""Floating-point quaternion algebra.

Quaternions are stored as ``(w, x, y, z)`` with ``q = w + x i + y j + z k``.
The :class:`Quaternion` value type is convenient for single values; the
``q*`` array helpers operate on arrays whose trailing axis has length 4 and
are what the series and automorphism code uses for batched evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np

ATOL = 1e-12
RTOL = 1e-10

QuatLike = Union["Quaternion", Sequence[float], np.ndarray, float, int]


# ---------------------------------------------------------------------------
# batched array helpers


def qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product of quaternion arrays, broadcasting over leading axes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    aw, ax, ay, az = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    bw, bx, by, bz = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ],
        axis=-1,
    )


def qconj(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return a * np.array([1.0, -1.0, -1.0, -1.0])


def qnorm(a: np.ndarray) -> np.ndarray:
    return np.linalg.norm(np.asarray(a, dtype=float), axis=-1)


def qinv(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    n2 = np.sum(a * a, axis=-1, keepdims=True)
    if np.any(n2 == 0.0):
        raise ZeroDivisionError("inverse of the zero quaternion")
    return qconj(a) / n2


def qpow(a: np.ndarray, n: int) -> np.ndarray:
    """Integer power by repeated squaring; ``a**0`` is 1."""
    a = np.asarray(a, dtype=float)
    if n < 0:
        a = qinv(a)
        n = -n
    result = np.zeros_like(a)
    result[..., 0] = 1.0
    base = a
    while n:
        if n & 1:
            result = qmul(result, base)
        n >>= 1
        if n:
            base = qmul(base, base)
    return result


def qpowers(a: np.ndarray, nmax: int) -> list[np.ndarray]:
    """``[a**0, a**1, ..., a**nmax]`` by successive multiplication."""
    a = np.asarray(a, dtype=float)
    one = np.zeros_like(a)
    one[..., 0] = 1.0
    out = [one]
    for _ in range(nmax):
        out.append(qmul(out[-1], a))
    return out


def as_qarray(q: QuatLike) -> np.ndarray:
    """Coerce a Quaternion, real scalar or 4-sequence/array to a float array."""
    if isinstance(q, Quaternion):
        return q.array
    if isinstance(q, (int, float, np.floating, np.integer)):
        return np.array([float(q), 0.0, 0.0, 0.0])
    arr = np.asarray(q, dtype=float)
    if arr.shape[-1:] != (4,):
        raise ValueError(f"expected trailing axis of length 4, got shape {arr.shape}")
    return arr


# ---------------------------------------------------------------------------
# value type


@dataclass(frozen=True)
class Quaternion:
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, arr: Iterable[float]) -> Quaternion:
        w, x, y, z = (float(c) for c in arr)
        return cls(w, x, y, z)

    @classmethod
    def coerce(cls, q: QuatLike) -> Quaternion:
        if isinstance(q, Quaternion):
            return q
        return cls.from_array(as_qarray(q))

    @property
    def array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def to_list(self) -> list[float]:
        return [self.w, self.x, self.y, self.z]

    @property
    def real(self) -> float:
        return self.w

    @property
    def imag(self) -> Quaternion:
        return Quaternion(0.0, self.x, self.y, self.z)

    def norm(self) -> float:
        return math.sqrt(self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z)

    def conj(self) -> Quaternion:
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def inverse(self) -> Quaternion:
        n2 = self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
        if n2 == 0.0:
            raise ZeroDivisionError("inverse of the zero quaternion")
        return Quaternion(self.w / n2, -self.x / n2, -self.y / n2, -self.z / n2)

    def is_real(self, atol: float = ATOL) -> bool:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z) <= atol

    def isclose(self, other: QuatLike, atol: float = ATOL, rtol: float = RTOL) -> bool:
        other = Quaternion.coerce(other)
        scale = max(self.norm(), other.norm())
        return (self - other).norm() <= atol + rtol * scale

    def __add__(self, other: QuatLike) -> Quaternion:
        return Quaternion.from_array(self.array + as_qarray(other))

    __radd__ = __add__

    def __sub__(self, other: QuatLike) -> Quaternion:
        return Quaternion.from_array(self.array - as_qarray(other))

    def __rsub__(self, other: QuatLike) -> Quaternion:
        return Quaternion.from_array(as_qarray(other) - self.array)

    def __neg__(self) -> Quaternion:
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other: QuatLike) -> Quaternion:
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)
        return Quaternion.from_array(qmul(self.array, as_qarray(other)))

    def __rmul__(self, other: QuatLike) -> Quaternion:
        if isinstance(other, (int, float)):
            return self * other
        return Quaternion.from_array(qmul(as_qarray(other), self.array))

    def __truediv__(self, other: float) -> Quaternion:
        if not isinstance(other, (int, float)):
            raise TypeError("quaternion division is ambiguous; multiply by .inverse()")
        return self * (1.0 / other)

    def __pow__(self, n: int) -> Quaternion:
        return int_pow(self, n)

    def __repr__(self) -> str:
        return f"Quaternion({self.w!r}, {self.x!r}, {self.y!r}, {self.z!r})"


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)
ZERO = Quaternion()


def mul(q: QuatLike, r: QuatLike) -> Quaternion:
    return Quaternion.coerce(q) * Quaternion.coerce(r)


def int_pow(q: QuatLike, n: int) -> Quaternion:
    q = Quaternion.coerce(q)
    if n < 0 and q.norm() == 0.0:
        raise ZeroDivisionError("zero quaternion raised to a negative power")
    return Quaternion.from_array(qpow(q.array, n))


# ---------------------------------------------------------------------------
# slices


class SliceDecomposition(NamedTuple):
    alpha: float
    beta: float
    unit: Quaternion
    is_real: bool


def split(q: QuatLike, atol: float = 0.0) -> SliceDecomposition:
    """Write ``q = alpha + beta * unit`` with ``beta >= 0`` and ``unit**2 = -1``.

    For real ``q`` (imaginary part of norm ``<= atol``) the unit is the
    conventional ``i`` and ``is_real`` is set, since every slice contains ``q``.
    """
    q = Quaternion.coerce(q)
    v = np.array([q.x, q.y, q.z])
    beta = float(np.linalg.norm(v))
    if beta <= atol:
        return SliceDecomposition(q.w, 0.0, I, True)
    u = v / beta
    return SliceDecomposition(q.w, beta, Quaternion(0.0, *u), False)


def imaginary_unit(q: QuatLike, atol: float = ATOL) -> Quaternion | None:
    """The unit ``I_q`` of a non-real quaternion, or ``None`` for reals."""
    s = split(q, atol=atol)
    return None if s.is_real else s.unit


def _check_unit(unit: Quaternion, tol: float) -> None:
    sq = unit * unit
    if (sq + ONE).norm() > tol:
        raise ValueError(f"{unit!r} is not an imaginary unit (square is {sq!r})")


def in_slice(q: QuatLike, unit: QuatLike, tol: float = ATOL) -> bool:
    """True iff ``q`` lies within ``tol`` of the plane ``R + R*unit``."""
    q = Quaternion.coerce(q)
    unit = Quaternion.coerce(unit)
    _check_unit(unit, max(tol, 1e-12))
    v = np.array([q.x, q.y, q.z])
    u = np.array([unit.x, unit.y, unit.z])
    return float(np.linalg.norm(v - np.dot(v, u) * u)) < tol


def slice_projection(q: QuatLike, unit: QuatLike) -> tuple[Quaternion, Quaternion]:
    """Split ``q`` into its components along ``L_unit`` and the orthogonal plane."""
    q = Quaternion.coerce(q)
    unit = Quaternion.coerce(unit)
    along = Quaternion(q.w) + unit * float(np.dot(q.imag.array, unit.array))
    return along, q - along


# ---------------------------------------------------------------------------
# matrix models


def left_matrix(q: QuatLike) -> np.ndarray:
    """Real 4x4 matrix of ``X -> q X``."""
    w, x, y, z = as_qarray(q)
    return np.array(
        [
            [w, -x, -y, -z],
            [x, w, -z, y],
            [y, z, w, -x],
            [z, -y, x, w],
        ]
    )


def right_matrix(q: QuatLike) -> np.ndarray:
    """Real 4x4 matrix of ``X -> X q``."""
    w, x, y, z = as_qarray(q)
    return np.array(
        [
            [w, -x, -y, -z],
            [x, w, z, -y],
            [y, -z, w, x],
            [z, y, -x, w],
        ]
    )


def rotation_matrix(q: QuatLike) -> np.ndarray:
    """Matrix of the conjugation ``X -> q X q^-1``."""
    q = Quaternion.coerce(q)
    if q.norm() == 0.0:
        raise ZeroDivisionError("rotation by the zero quaternion")
    return left_matrix(q) @ right_matrix(q.inverse())


def sandwich_matrix(q1: QuatLike, q2: QuatLike) -> np.ndarray:
    """Matrix of ``X -> q1 X q2^-1``."""
    q2 = Quaternion.coerce(q2)
    if q2.norm() == 0.0:
        raise ZeroDivisionError("q2 must be invertible")
    return left_matrix(q1) @ right_matrix(q2.inverse())


def complexify(q: QuatLike) -> tuple[complex, complex]:
    """``(z, w)`` with ``q = z + w j`` and ``z, w`` in ``R + R i``."""
    w0, x, y, z = as_qarray(q)
    return complex(w0, x), complex(y, z)


def from_complex_pair(z: complex, w: complex) -> Quaternion:
    return Quaternion(z.real, z.imag, w.real, w.imag)


def right_mult_complex_matrix(a: QuatLike) -> np.ndarray:
    """2x2 complex matrix ``A`` with ``complexify(q a) = complexify(q) @ A``.

    Writing ``a = alpha + beta j``, the matrix is ``[[alpha, beta], [-conj(beta), conj(alpha)]]``
    acting on row vectors.
    """
    alpha, beta = complexify(a)
    return np.array([[alpha, beta], [-beta.conjugate(), alpha.conjugate()]], dtype=complex)


# ---------------------------------------------------------------------------
# sampling


def random_quaternions(rng: np.random.Generator, n: int, rmin: float = 0.0, rmax: float = 1.0) -> np.ndarray:
    """``n`` quaternions with uniform direction and norm uniform in ``[rmin, rmax]``."""
    v = rng.standard_normal((n, 4))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    r = rng.uniform(rmin, rmax, size=(n, 1))
    return v * r
