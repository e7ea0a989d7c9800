"""One-parameter families of Hopf quotients and their automorphism jumps.

Two families over the parameter ``lambda`` in H:

* ``A1_to_A3``: ``F(z, w, lambda) = (z alpha + w lambda, w alpha, lambda)``
* ``A21_to_B``: ``F(z, w, lambda) = (z beta^p + w^p lambda, w beta, lambda)`` with real ``beta``, ``p > 1``
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .aut import DEFAULT_SV_TOL, AutReport, aut_dimension
from .hopf import HopfCase, HopfParams, iterate_closed, iterate_pointwise
from .quat_core import ATOL, Quaternion, QuatLike, as_qarray, int_pow, qinv, qmul, qnorm, qpow, random_quaternions

KINDS = ("A1_to_A3", "A21_to_B")


@dataclass(frozen=True)
class FamilyParams:
    kind: str
    alpha: Quaternion | None = None
    p: int | None = None
    beta: Quaternion | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "A1_to_A3":
            if self.alpha is None:
                raise ValueError("the A1_to_A3 family needs alpha")
            a = Quaternion.coerce(self.alpha)
            if not 0.0 < a.norm() < 1.0:
                raise ValueError("need 0 < |alpha| < 1")
            object.__setattr__(self, "alpha", a)
        else:
            if self.p is None or self.beta is None:
                raise ValueError("the A21_to_B family needs p and beta")
            b = Quaternion.coerce(self.beta)
            if int(self.p) <= 1:
                raise ValueError("the A21_to_B family needs p > 1")
            if not b.is_real() or not 0.0 < b.norm() < 1.0:
                raise ValueError("the A21_to_B family needs real beta with 0 < |beta| < 1")
            object.__setattr__(self, "beta", b)
            object.__setattr__(self, "p", int(self.p))

    @property
    def slice_regular_family(self) -> bool:
        """Whether every iterate of the total map is slice regular (kind 1 needs real alpha)."""
        return self.kind == "A21_to_B" or self.alpha.is_real()

    def total_coefficients(self) -> tuple[int, Quaternion, Quaternion]:
        """``(p, alpha, beta)`` of the generator on each fibre."""
        if self.kind == "A1_to_A3":
            return 1, self.alpha, self.alpha
        return self.p, int_pow(self.beta, self.p), self.beta


def fiber(family: FamilyParams, lam: QuatLike) -> HopfParams:
    lam = Quaternion.coerce(lam)
    p, alpha, beta = family.total_coefficients()
    if family.kind == "A21_to_B" and lam.norm() <= ATOL:
        # with lambda = 0 the exponent is irrelevant; p = 1 keeps the direct solver applicable
        return HopfParams(1, alpha, beta, Quaternion())
    return HopfParams(p, alpha, beta, lam)


def family_map(family: FamilyParams, z, w, lam):
    """One application of the total map ``F``; returns ``(z', w', lambda)``."""
    p, alpha, beta = family.total_coefficients()
    z, w, lam = as_qarray(z), as_qarray(w), as_qarray(lam)
    return qmul(z, alpha.array) + qmul(qpow(w, p), lam), qmul(w, beta.array), lam


def family_inverse(family: FamilyParams, z, w, lam):
    p, alpha, beta = family.total_coefficients()
    z, w, lam = as_qarray(z), as_qarray(w), as_qarray(lam)
    w1 = qmul(w, qinv(beta.array))
    return qmul(z - qmul(qpow(w1, p), lam), qinv(alpha.array)), w1, lam


def family_iterate(family: FamilyParams, k: int, z, w, lam):
    step = family_map if k >= 0 else family_inverse
    for _ in range(abs(k)):
        z, w, lam = step(family, z, w, lam)
    return as_qarray(z), as_qarray(w), as_qarray(lam)


def family_commutation_check(
    family: FamilyParams, k_range: Iterable[int], samples: int = 100, seed: int = 0
) -> float:
    """Largest deviation of ``F**k`` from (fibre iterate, ``lambda``) over random ``(z, w, lambda)``."""
    rng = np.random.default_rng(seed)
    z = random_quaternions(rng, samples, 0.5, 1.5)
    w = random_quaternions(rng, samples, 0.5, 1.5)
    lams = random_quaternions(rng, samples, 0.0, 1.5)
    worst = 0.0
    for k in k_range:
        Fz, Fw, Fl = family_iterate(family, k, z, w, lams)
        worst = max(worst, float(np.max(qnorm(Fl - lams))))
        for n in range(samples):
            params = fiber(family, Quaternion.from_array(lams[n]))
            gz, gw = iterate_pointwise(params, k, z[n], w[n])
            worst = max(worst, float(np.hypot(qnorm(Fz[n] - gz), qnorm(Fw[n] - gw))))
    return worst


@dataclass
class ScanRow:
    lam: Quaternion
    case: HopfCase
    nullity: int
    expected: frozenset[int]
    slice_regular_family: bool
    report: AutReport
    asserted: bool = True

    @property
    def passed(self) -> bool:
        return self.nullity in self.expected

    def to_json(self) -> dict:
        return {
            "lambda": self.lam.to_list(),
            "case": str(self.case),
            "nullity": self.nullity,
            "expected": sorted(self.expected),
            "pass": self.passed,
            "asserted": self.asserted,
            "slice_regular_family": self.slice_regular_family,
        }


def dimension_scan(
    family: FamilyParams,
    lambdas: Sequence[QuatLike],
    degree: int | None = None,
    samples: int | None = None,
    seed: int = 0,
    sv_tol: float = DEFAULT_SV_TOL,
) -> list[ScanRow]:
    """Automorphism dimension of every fibre ``pi^-1(lambda)``.

    Rows of the kind-1 family with non-real ``alpha`` are computed but flagged
    ``asserted=False``: only real ``alpha`` carries a stated jump.
    """
    lambdas = [Quaternion.coerce(l) for l in lambdas]
    if not lambdas:
        raise ValueError("need at least one lambda")
    asserted = family.kind == "A21_to_B" or family.alpha.is_real()
    rows = []
    for lam in lambdas:
        params = fiber(family, lam)
        rep = aut_dimension(params, degree=degree, samples=samples, seed=seed, sv_tol=sv_tol)
        rows.append(
            ScanRow(lam, rep.case, rep.nullity, rep.expected, family.slice_regular_family, rep, asserted)
        )
    return rows


def closed_fiber_iterate(family: FamilyParams, lam: QuatLike, k: int):
    """Closed-form ``f**k`` of the fibre over ``lam`` as a series map."""
    return iterate_closed(fiber(family, lam), k)
