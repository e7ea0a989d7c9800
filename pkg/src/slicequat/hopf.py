"""Hopf contractions ``f(z, w) = (z alpha + w**p lambda, w beta)`` and their iterates."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping, NamedTuple

import numpy as np

from .quat_core import (
    ATOL,
    Quaternion,
    as_qarray,
    int_pow,
    qinv,
    qmul,
    qnorm,
    qpow,
    random_quaternions,
)
from .series import OrderedSeries, SeriesMap


class HopfCase(enum.Enum):
    A1 = "A1"
    A21 = "A21"
    A22 = "A22"
    A3 = "A3"
    B = "B"
    INVALID = "Invalid"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class HopfParams:
    p: int
    alpha: Quaternion
    beta: Quaternion
    lam: Quaternion = Quaternion()

    def __post_init__(self):
        object.__setattr__(self, "alpha", Quaternion.coerce(self.alpha))
        object.__setattr__(self, "beta", Quaternion.coerce(self.beta))
        object.__setattr__(self, "lam", Quaternion.coerce(self.lam))

    def to_json(self) -> dict:
        return {
            "p": int(self.p),
            "alpha": self.alpha.to_list(),
            "beta": self.beta.to_list(),
            "lambda": self.lam.to_list(),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> HopfParams:
        return cls(int(data["p"]), data["alpha"], data["beta"], data.get("lambda", 0.0))


class Classification(NamedTuple):
    case: HopfCase
    reason: str = ""

    def __str__(self) -> str:
        return str(self.case)


def classify(params: HopfParams, atol: float = ATOL) -> Classification:
    """Sort parameters into the cases A.1, A.2.1, A.2.2, A.3, B or Invalid."""
    p, alpha, beta, lam = params.p, params.alpha, params.beta, params.lam
    if not isinstance(p, (int, np.integer)) or p < 1:
        return Classification(HopfCase.INVALID, f"p must be a positive integer, got {p!r}")
    na, nb = alpha.norm(), beta.norm()
    if not (na > 0.0 and na <= nb + atol and nb < 1.0):
        return Classification(HopfCase.INVALID, f"need 0 < |alpha| <= |beta| < 1, got |alpha|={na}, |beta|={nb}")
    defect = ((alpha - int_pow(beta, p)) * lam).norm()
    if defect > atol:
        return Classification(HopfCase.INVALID, f"(alpha - beta^p) * lambda = 0 violated (norm {defect:.3e})")
    if lam.norm() <= atol:
        if (alpha - beta).norm() <= atol:
            return Classification(HopfCase.A1)
        if na < nb - atol:
            return Classification(HopfCase.A21)
        return Classification(HopfCase.A22)
    if p == 1:
        return Classification(HopfCase.A3)
    if not beta.is_real(atol):
        return Classification(
            HopfCase.INVALID,
            "beta non-real with lambda != 0 and p > 1: the extended iterates do not form a group",
        )
    return Classification(HopfCase.B)


def _require_valid(params: HopfParams) -> HopfCase:
    c = classify(params)
    if c.case is HopfCase.INVALID:
        raise ValueError(f"invalid Hopf parameters: {c.reason}")
    return c.case


def generator(params: HopfParams) -> SeriesMap:
    _require_valid(params)
    n = max(1, params.p)
    return SeriesMap(
        OrderedSeries(n, {(1, 0): params.alpha, (0, params.p): params.lam}),
        OrderedSeries(n, {(0, 1): params.beta}),
    )


def apply_generator(params: HopfParams, z, w):
    """One application of ``f``, vectorised over quaternion arrays."""
    z, w = as_qarray(z), as_qarray(w)
    a, b, lam = params.alpha.array, params.beta.array, params.lam.array
    return qmul(z, a) + qmul(qpow(w, params.p), lam), qmul(w, b)


def apply_inverse(params: HopfParams, z, w):
    """Exact inverse ``((z - (w beta^-1)**p lambda) alpha^-1, w beta^-1)``."""
    z, w = as_qarray(z), as_qarray(w)
    ainv, binv = qinv(params.alpha.array), qinv(params.beta.array)
    w1 = qmul(w, binv)
    return qmul(z - qmul(qpow(w1, params.p), params.lam.array), ainv), w1


def middle_coefficient(params: HopfParams, k: int) -> Quaternion:
    """Coefficient of ``w**p`` in the first component of ``f**k``.

    For ``k >= 0`` this is ``sum_{l+m=k-1, l,m>=0} b^l lambda b^m`` with ``b = beta**p``;
    for ``k < 0`` the sum runs over ``l, m < 0`` and carries a minus sign.
    """
    bp = int_pow(params.beta, params.p)
    lam = params.lam
    total = Quaternion()
    if k > 0:
        for ell in range(k):
            total = total + int_pow(bp, ell) * lam * int_pow(bp, k - 1 - ell)
    elif k < 0:
        # l + m = k - 1 with both negative
        for ell in range(k, 0):
            total = total - int_pow(bp, ell) * lam * int_pow(bp, k - 1 - ell)
    return total


def iterate_closed(params: HopfParams, k: int) -> SeriesMap:
    """Closed-form ``f**k`` as a series map (``k`` may be negative)."""
    case = _require_valid(params)
    n = max(1, params.p)
    if case in (HopfCase.A1, HopfCase.A21, HopfCase.A22):
        return SeriesMap(
            OrderedSeries(n, {(1, 0): int_pow(params.alpha, k)}),
            OrderedSeries(n, {(0, 1): int_pow(params.beta, k)}),
        )
    first = {(1, 0): int_pow(params.beta, k * params.p)}
    if k != 0:
        first[(0, params.p)] = middle_coefficient(params, k)
    return SeriesMap(OrderedSeries(n, first), OrderedSeries(n, {(0, 1): int_pow(params.beta, k)}))


def iterate_pointwise(params: HopfParams, k: int, z, w):
    """``f**k(z, w)`` by repeated application of ``f`` or its exact inverse."""
    _require_valid(params)
    scalar = isinstance(z, Quaternion) and isinstance(w, Quaternion)
    za, wa = as_qarray(z).copy(), as_qarray(w).copy()
    if np.any((qnorm(za) == 0.0) & (qnorm(wa) == 0.0)):
        raise ValueError("the origin is not in the domain of the group action")
    step = apply_generator if k >= 0 else apply_inverse
    for _ in range(abs(k)):
        za, wa = step(params, za, wa)
    if scalar:
        return Quaternion.from_array(za), Quaternion.from_array(wa)
    return za, wa


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class FixedPointCertificate:
    k: int
    gaps: tuple[float, float]
    min_displacement: float
    samples: int
    tol: float

    @property
    def passed(self) -> bool:
        return min(self.gaps) > 0.0 and self.min_displacement > self.tol


def fixed_point_certificate(
    params: HopfParams, k: int, samples: int = 100, seed: int = 0, tol: float = 1e-9
) -> FixedPointCertificate:
    """Certify that ``f**k`` (``k != 0``) has no fixed point off the origin.

    A fixed point needs ``|w| = |w| |beta|**k`` and ``|z| = |z| |alpha|**k``, so both
    gaps ``|1 - |beta|**k|`` and ``|1 - |alpha|**k|`` being positive forces ``(z, w) = 0``.
    The sampled minimum displacement is a numerical spot check of the same fact.
    """
    if k == 0:
        raise ValueError("k must be non-zero")
    _require_valid(params)
    nb, na = params.beta.norm(), params.alpha.norm()
    gaps = (abs(1.0 - nb**k), abs(1.0 - na**k))
    rng = np.random.default_rng(seed)
    z = random_quaternions(rng, samples, 0.5, 1.5)
    w = random_quaternions(rng, samples, 0.5, 1.5)
    fz, fw = iterate_pointwise(params, k, z, w)
    disp = np.sqrt(qnorm(fz - z) ** 2 + qnorm(fw - w) ** 2)
    return FixedPointCertificate(k, gaps, float(disp.min()), samples, tol)


class DiscontinuityResult(NamedTuple):
    k_star: int
    verified: bool


def discontinuity_threshold(beta_norm: float, R1: float, r2: float) -> int:
    """Smallest safe ``k`` with ``R1 |beta|**k < r2``, rounded conservatively."""
    x = max(math.log(R1 / r2), 0.0) / -math.log(beta_norm)
    return int(math.ceil(x)) + 1


def log_ratio_threshold(beta_norm: float, r1: float, r2: float) -> float:
    """``lg(r2/r1) / lg|beta|``; sign-sensitive, kept only for comparison with ``discontinuity_threshold``."""
    return math.log(r2 / r1) / math.log(beta_norm)


def discontinuity_check(
    params: HopfParams,
    r1: float,
    R1: float,
    r2: float,
    R2: float,
    samples: int = 1000,
    seed: int = 0,
    window: int = 5,
) -> DiscontinuityResult:
    """Threshold past which ``f**k`` moves the shell ``r1 < |w| < R1`` off ``r2 < |w| < R2``.

    The threshold comes from ``|w beta**k| <= R1 |beta|**k < r2``; sampled points of
    the first shell are pushed forward for every ``k`` in ``[k_star, k_star + window]``
    and must land with second-component norm below ``r2``.
    """
    if not (0 < r1 < R1 and 0 < r2 < R2):
        raise ValueError("need 0 < r1 < R1 and 0 < r2 < R2")
    _require_valid(params)
    k_star = discontinuity_threshold(params.beta.norm(), R1, r2)
    rng = np.random.default_rng(seed)
    # open shell: keep radii strictly inside (r1, R1)
    w = random_quaternions(rng, samples, r1, R1)
    z = random_quaternions(rng, samples, 0.0, R1)
    verified = True
    for k in range(k_star, k_star + window + 1):
        _, fw = iterate_pointwise(params, k, z, w)
        if np.any(qnorm(fw) >= r2):
            verified = False
            break
    return DiscontinuityResult(k_star, verified)


def orbit_equivalent(params: HopfParams, a, b, k_max: int = 10, tol: float = 1e-9) -> int | None:
    """Smallest ``|k| <= k_max`` with ``f**k(a)`` within ``tol`` of ``b``, else ``None``.

    ``a`` and ``b`` are pairs of quaternions. Ties in ``|k|`` favour positive ``k``.
    """
    az, aw = (as_qarray(c) for c in a)
    bz, bw = (as_qarray(c) for c in b)
    for n in range(k_max + 1):
        for k in ((0,) if n == 0 else (n, -n)):
            fz, fw = iterate_pointwise(params, k, az, aw)
            dist = math.sqrt(float(qnorm(fz - bz)) ** 2 + float(qnorm(fw - bw)) ** 2)
            if dist < tol:
                return k
    return None
