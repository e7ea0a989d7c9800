"""Stem functions valued in H (x) R_2 and the slice functions they induce.

A stem function ``F = F0 + e1 F1 + e2 F2 + e12 F12`` lives on a box ``D`` of
``C^2`` symmetric under conjugation of each variable. Quaternion coefficients
commute with the Clifford units ``e1, e2`` (``e1^2 = e2^2 = -1``, ``e12 = e1 e2``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .quat_core import ATOL, ONE, Quaternion, QuatLike, split
from .series import OrderedSeries


@dataclass(frozen=True)
class CliffordQuat:
    f0: Quaternion = Quaternion()
    f1: Quaternion = Quaternion()
    f2: Quaternion = Quaternion()
    f12: Quaternion = Quaternion()

    def __post_init__(self):
        for name in ("f0", "f1", "f2", "f12"):
            object.__setattr__(self, name, Quaternion.coerce(getattr(self, name)))

    def components(self) -> tuple[Quaternion, Quaternion, Quaternion, Quaternion]:
        return self.f0, self.f1, self.f2, self.f12

    def __add__(self, other: CliffordQuat) -> CliffordQuat:
        return CliffordQuat(*(a + b for a, b in zip(self.components(), other.components())))

    def __sub__(self, other: CliffordQuat) -> CliffordQuat:
        return CliffordQuat(*(a - b for a, b in zip(self.components(), other.components())))

    def __neg__(self) -> CliffordQuat:
        return CliffordQuat(*(-a for a in self.components()))

    def __mul__(self, t: float) -> CliffordQuat:
        return CliffordQuat(*(a * float(t) for a in self.components()))

    __rmul__ = __mul__

    def norm(self) -> float:
        return math.sqrt(sum(c.norm() ** 2 for c in self.components()))


def e1_left_mul(F: CliffordQuat) -> CliffordQuat:
    return CliffordQuat(-F.f1, F.f0, -F.f12, F.f2)


def e2_right_mul(F: CliffordQuat) -> CliffordQuat:
    return CliffordQuat(-F.f2, -F.f12, F.f0, F.f1)


# ---------------------------------------------------------------------------
# domains and stems


@dataclass(frozen=True)
class Box:
    """``{a1_lo < Re z1 < a1_hi, |Im z1| < b1, a2_lo < Re z2 < a2_hi, |Im z2| < b2}``."""

    a1: tuple[float, float] = (-2.0, 2.0)
    b1: float = 2.0
    a2: tuple[float, float] = (-2.0, 2.0)
    b2: float = 2.0

    def contains(self, z1: complex, z2: complex, margin: float = 0.0) -> bool:
        return (
            self.a1[0] + margin < z1.real < self.a1[1] - margin
            and abs(z1.imag) < self.b1 - margin
            and self.a2[0] + margin < z2.real < self.a2[1] - margin
            and abs(z2.imag) < self.b2 - margin
        )

    def sample(self, rng: np.random.Generator, n: int) -> list[tuple[complex, complex]]:
        pts = []
        for _ in range(n):
            z1 = complex(rng.uniform(*self.a1), rng.uniform(-self.b1, self.b1))
            z2 = complex(rng.uniform(*self.a2), rng.uniform(-self.b2, self.b2))
            pts.append((z1, z2))
        return pts


@dataclass(frozen=True)
class StemOracle:
    func: Callable[[complex, complex], CliffordQuat]
    box: Box = Box()
    poly: OrderedSeries | None = None

    def __call__(self, z1: complex, z2: complex) -> CliffordQuat:
        if not self.box.contains(z1, z2):
            raise ValueError(f"({z1}, {z2}) lies outside the stem's domain")
        return self.func(z1, z2)


def stem_from_series(S: OrderedSeries, box: Box = Box()) -> StemOracle:
    """Stem of ``sum x1^h x2^k c``: with ``z1^h = A1 + i B1`` and ``z2^k = A2 + i B2``,
    ``F = A1 A2 c + e1 B1 A2 c + e2 A1 B2 c + e12 B1 B2 c``."""
    terms = [(h, k, Quaternion.from_array(c)) for (h, k), c in S.coeffs.items()]

    def func(z1: complex, z2: complex) -> CliffordQuat:
        out = [np.zeros(4) for _ in range(4)]
        for h, k, c in terms:
            p1, p2 = z1**h, z2**k
            c = c.array
            out[0] += p1.real * p2.real * c
            out[1] += p1.imag * p2.real * c
            out[2] += p1.real * p2.imag * c
            out[3] += p1.imag * p2.imag * c
        return CliffordQuat(*(Quaternion.from_array(o) for o in out))

    return StemOracle(func, box, S)


def stem_from_components(
    f0: Callable | None = None,
    f1: Callable | None = None,
    f2: Callable | None = None,
    f12: Callable | None = None,
    box: Box = Box(),
) -> StemOracle:
    """Stem from per-component callables ``(z1, z2) -> quaternion`` (missing ones are zero)."""
    parts = [f0, f1, f2, f12]

    def func(z1: complex, z2: complex) -> CliffordQuat:
        return CliffordQuat(*(Quaternion.coerce(g(z1, z2)) if g else Quaternion() for g in parts))

    return StemOracle(func, box)


def parity_residual(F: StemOracle, samples: int = 100, seed: int = 0) -> float:
    """Largest violation of the even/odd symmetries under conjugating ``z1`` or ``z2``."""
    if samples < 1:
        raise ValueError("samples must be positive")
    rng = np.random.default_rng(seed)
    # sign of each component under conjugation of z1, resp. z2
    sign1 = (1, -1, 1, -1)
    sign2 = (1, 1, -1, -1)
    worst = 0.0
    for z1, z2 in F.box.sample(rng, samples):
        base = F(z1, z2).components()
        for signs, other in ((sign1, F(z1.conjugate(), z2)), (sign2, F(z1, z2.conjugate()))):
            for s, a, b in zip(signs, other.components(), base):
                worst = max(worst, (a - b * s).norm())
    return worst


# ---------------------------------------------------------------------------
# slice functions


class SlicePoint(NamedTuple):
    x1: Quaternion
    x2: Quaternion

    @classmethod
    def of(cls, x1: QuatLike, x2: QuatLike) -> SlicePoint:
        return cls(Quaternion.coerce(x1), Quaternion.coerce(x2))

    def complexified(self) -> tuple[complex, complex]:
        s1, s2 = split(self.x1), split(self.x2)
        return complex(s1.alpha, s1.beta), complex(s2.alpha, s2.beta)

    def units(self) -> tuple[Quaternion, Quaternion]:
        return split(self.x1).unit, split(self.x2).unit


def slice_eval(F: StemOracle, x: SlicePoint) -> Quaternion:
    """``F0 + J1 F1 + J2 F2 + J1 J2 F12`` at the complexified point of ``x``."""
    z1, z2 = x.complexified()
    J1, J2 = x.units()
    v = F(z1, z2)
    return v.f0 + J1 * v.f1 + J2 * v.f2 + J1 * J2 * v.f12


def dbar_residual(F: StemOracle, z1: complex, z2: complex, h_step: float = 1e-4) -> tuple[float, float]:
    """Norms of ``dbar_1 F = (dF/da1 + e1 dF/db1)/2`` and ``dbar_2 F = (dF/da2 + (dF/db2) e2)/2``.

    Central differences of half-width ``h_step``; second-order accurate.
    """
    if not F.box.contains(z1, z2, margin=h_step):
        raise ValueError("finite-difference stencil leaves the domain")

    def d(dz1: complex, dz2: complex) -> CliffordQuat:
        return (F(z1 + dz1, z2 + dz2) - F(z1 - dz1, z2 - dz2)) * (1.0 / (2.0 * h_step))

    da1, db1 = d(h_step, 0), d(1j * h_step, 0)
    da2, db2 = d(0, h_step), d(0, 1j * h_step)
    dbar1 = (da1 + e1_left_mul(db1)) * 0.5
    dbar2 = (da2 + e2_right_mul(db2)) * 0.5
    return dbar1.norm(), dbar2.norm()


# ---------------------------------------------------------------------------
# representation formula


def _check_unit(I: Quaternion, name: str) -> None:
    if (I * I + ONE).norm() > 1e-10:
        raise ValueError(f"{name} is not an imaginary unit")


def represent_extend(
    f: Callable[[Quaternion, Quaternion], tuple[Quaternion, Quaternion]],
    I1: QuatLike,
    I2: QuatLike,
    x: SlicePoint,
) -> tuple[Quaternion, Quaternion]:
    """Value at ``x`` of the slice-regular extension of ``f`` from ``L_I1 x L_I2``.

    ``f`` is only evaluated at ``(y1, y2)``, ``(y1^c, y2)``, ``(y1, y2^c)`` and
    ``(y1^c, y2^c)`` with ``y_h = a_h + I_h b_h``. Real coordinates of ``x`` take
    ``J_h = I_h``.
    """
    I1, I2 = Quaternion.coerce(I1), Quaternion.coerce(I2)
    _check_unit(I1, "I1")
    _check_unit(I2, "I2")
    x = SlicePoint.of(*x)
    s1, s2 = split(x.x1, atol=ATOL), split(x.x2, atol=ATOL)
    J1 = I1 if s1.is_real else s1.unit
    J2 = I2 if s2.is_real else s2.unit
    y1, y1c = s1.alpha + I1 * s1.beta, s1.alpha - I1 * s1.beta
    y2, y2c = s2.alpha + I2 * s2.beta, s2.alpha - I2 * s2.beta

    vals = {
        (0, 0): f(y1, y2),
        (1, 0): f(y1c, y2),
        (0, 1): f(y1, y2c),
        (1, 1): f(y1c, y2c),
    }
    m1 = J1 * I1
    m2 = J2 * I2
    m12 = J1 * J2 * I2 * I1
    # signs of the 1, J1I1, J2I2 and J1J2I2I1 rows for each conjugation pattern
    signs = {
        (0, 0): (1, -1, -1, 1),
        (1, 0): (1, 1, -1, -1),
        (0, 1): (1, -1, 1, -1),
        (1, 1): (1, 1, 1, 1),
    }
    out = []
    for comp in range(2):
        acc = Quaternion()
        for key, (s0, s1_, s2_, s12) in signs.items():
            v = Quaternion.coerce(vals[key][comp])
            acc = acc + v * s0 + (m1 * v) * s1_ + (m2 * v) * s2_ + (m12 * v) * s12
        out.append(acc * 0.25)
    return out[0], out[1]
