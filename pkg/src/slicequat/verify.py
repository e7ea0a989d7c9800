"""Verification grid: automorphism dimensions plus group-action checks per parameter set."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .aut import DEFAULT_SV_TOL, aut_dimension
from .hopf import HopfCase, HopfParams, classify, fixed_point_certificate, iterate_closed, iterate_pointwise
from .quat_core import I, J, K, qnorm, random_quaternions

GAP_MIN = 1e6
ITERATE_RTOL = 1e-10


@dataclass(frozen=True)
class GridRow:
    label: str
    params: HopfParams
    expected: frozenset[int] | None = None


def _row(label, p, alpha, beta, lam, expected):
    return GridRow(label, HopfParams(p, alpha, beta, lam), frozenset({expected}))


ACCEPTANCE_GRID: tuple[GridRow, ...] = (
    _row("A1 alpha=beta=0.5", 1, 0.5, 0.5, 0.0, 16),
    _row("A1 alpha=beta=i/2", 1, I * 0.5, I * 0.5, 0.0, 8),
    _row("A21 alpha=i/4 beta=j/2", 1, I * 0.25, J * 0.5, 0.0, 4),
    _row("A21 alpha=0.25 beta=j/2", 1, 0.25, J * 0.5, 0.0, 6),
    _row("A21 alpha=0.25 beta=0.5", 1, 0.25, 0.5, 0.0, 8),
    _row("A22 alpha=i/2 beta=-i/2", 1, I * 0.5, I * -0.5, 0.0, 8),
    _row("A22 alpha=i/2 beta=j/2", 1, I * 0.5, J * 0.5, 0.0, 4),
    _row("A3 alpha=0.5 lambda=j", 1, 0.5, 0.5, J, 8),
    _row("A3 alpha=i/2 lambda=1", 1, I * 0.5, I * 0.5, 1.0, 4),
    _row("A3 alpha=i/2 lambda=j", 1, I * 0.5, I * 0.5, J, 8),
    _row("B p=2 beta=0.5 lambda=j", 2, 0.25, 0.5, J, 5),
    _row("B p=3 beta=0.5 lambda=i+k", 3, 0.125, 0.5, I + K, 5),
)


def iterate_agreement(params: HopfParams, k_values: Iterable[int] = range(-5, 6), samples: int = 50, seed: int = 0) -> float:
    """Largest relative gap between closed-form and pointwise iterates."""
    rng = np.random.default_rng(seed)
    z = random_quaternions(rng, samples, 0.5, 1.5)
    w = random_quaternions(rng, samples, 0.5, 1.5)
    worst = 0.0
    for k in k_values:
        cz, cw = iterate_closed(params, k)(z, w)
        pz, pw = iterate_pointwise(params, k, z, w)
        scale = np.maximum(np.hypot(qnorm(pz), qnorm(pw)), 1.0)
        err = np.hypot(qnorm(cz - pz), qnorm(cw - pw)) / scale
        worst = max(worst, float(err.max()))
    return worst


@dataclass
class RowResult:
    label: str
    params: HopfParams
    case: HopfCase
    expected: frozenset[int]
    nullities: list[int] = field(default_factory=list)
    min_gap: float = np.inf
    fixed_point_free: bool = True
    iterate_error: float = 0.0

    @property
    def nullity(self) -> int:
        return self.nullities[0] if self.nullities else -1

    @property
    def passed(self) -> bool:
        return (
            bool(self.nullities)
            and all(n in self.expected for n in self.nullities)
            and self.min_gap >= GAP_MIN
            and self.fixed_point_free
            and self.iterate_error <= ITERATE_RTOL
        )

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "params": self.params.to_json(),
            "case": str(self.case),
            "nullities": self.nullities,
            "expected": sorted(self.expected),
            "min_gap": float(self.min_gap),
            "fixed_point_free": self.fixed_point_free,
            "iterate_error": self.iterate_error,
            "pass": self.passed,
        }


def verify_row(row: GridRow, seed: int = 0, sv_tol: float = DEFAULT_SV_TOL, degree: int | None = None) -> RowResult:
    params = row.params
    case = classify(params).case
    first = aut_dimension(params, seed=seed, sv_tol=sv_tol, degree=degree)
    expected = row.expected if row.expected is not None else first.expected
    result = RowResult(row.label, params, case, expected)
    n0 = first.degree
    for n in (n0, n0 + 1):
        for s in (seed, seed + 1):
            rep = first if (n, s) == (n0, seed) else aut_dimension(params, degree=n, seed=s, sv_tol=sv_tol)
            result.nullities.append(rep.nullity)
            result.min_gap = min(result.min_gap, rep.sv_gap)
    for k in (1, 2, 3, 4, 5, -1, -2, -3, -4, -5):
        if not fixed_point_certificate(params, k, seed=seed).passed:
            result.fixed_point_free = False
    result.iterate_error = iterate_agreement(params, seed=seed)
    return result


def verify_grid(rows: Iterable[GridRow] = ACCEPTANCE_GRID, seed: int = 0, sv_tol: float = DEFAULT_SV_TOL) -> list[RowResult]:
    return [verify_row(r, seed=seed, sv_tol=sv_tol) for r in rows]
