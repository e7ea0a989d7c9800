"""Truncated ordered power series in two quaternionic variables.

A series is ``sum z**h * w**k * a[h, k]`` over ``h + k <= degree``, with the
variables always multiplied on the left of the coefficient in that order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .quat_core import Quaternion, QuatLike, as_qarray, qmul, qpowers


def _coerce_coeffs(coeffs: Mapping[tuple[int, int], QuatLike], degree: int) -> dict[tuple[int, int], np.ndarray]:
    out = {}
    for (h, k), c in coeffs.items():
        h, k = int(h), int(k)
        if h < 0 or k < 0:
            raise ValueError(f"negative exponent in monomial {(h, k)}")
        if h + k > degree:
            raise ValueError(f"monomial {(h, k)} exceeds degree bound {degree}")
        arr = np.array(as_qarray(c), dtype=float)
        arr.setflags(write=False)
        out[(h, k)] = arr
    return out


@dataclass(frozen=True)
class OrderedSeries:
    degree: int
    coeffs: Mapping[tuple[int, int], np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree bound must be non-negative")
        object.__setattr__(self, "coeffs", _coerce_coeffs(self.coeffs, self.degree))

    @classmethod
    def zero(cls, degree: int) -> OrderedSeries:
        return cls(degree, {})

    def coeff(self, h: int, k: int) -> Quaternion:
        c = self.coeffs.get((h, k))
        return Quaternion() if c is None else Quaternion.from_array(c)

    def __call__(self, z, w):
        return eval_series(self, z, w)

    def with_degree(self, degree: int) -> OrderedSeries:
        return OrderedSeries(degree, dict(self.coeffs))

    def to_json(self) -> list[dict]:
        return [
            {"h": h, "k": k, "coeff": [float(c) for c in self.coeffs[(h, k)]]}
            for (h, k) in sorted(self.coeffs)
        ]

    @classmethod
    def from_json(cls, degree: int, terms: Iterable[Mapping]) -> OrderedSeries:
        coeffs: dict[tuple[int, int], np.ndarray] = {}
        for t in terms:
            key = (int(t["h"]), int(t["k"]))
            coeffs[key] = coeffs.get(key, np.zeros(4)) + as_qarray(t["coeff"])
        return cls(degree, coeffs)


@dataclass(frozen=True)
class SeriesMap:
    first: OrderedSeries
    second: OrderedSeries

    def __post_init__(self):
        if self.first.degree != self.second.degree:
            raise ValueError("components of a series map must share the degree bound")

    @property
    def degree(self) -> int:
        return self.first.degree

    def __call__(self, z, w):
        return eval_series(self.first, z, w), eval_series(self.second, z, w)

    def with_degree(self, degree: int) -> SeriesMap:
        return SeriesMap(self.first.with_degree(degree), self.second.with_degree(degree))

    def to_json(self) -> dict:
        return {"degree": self.degree, "first": self.first.to_json(), "second": self.second.to_json()}

    @classmethod
    def from_json(cls, data: Mapping) -> SeriesMap:
        n = int(data["degree"])
        return cls(OrderedSeries.from_json(n, data["first"]), OrderedSeries.from_json(n, data["second"]))


def identity_map(degree: int = 1) -> SeriesMap:
    return SeriesMap(
        OrderedSeries(degree, {(1, 0): 1.0}),
        OrderedSeries(degree, {(0, 1): 1.0}),
    )


def eval_series(S: OrderedSeries, z, w):
    """Evaluate ``S`` at ``(z, w)``.

    Accepts Quaternion values (returns a Quaternion) or quaternion arrays with
    matching leading shapes (returns an array).
    """
    scalar = isinstance(z, Quaternion) and isinstance(w, Quaternion)
    za = as_qarray(z)
    wa = as_qarray(w)
    za, wa = np.broadcast_arrays(za, wa)
    out = np.zeros(za.shape)
    if S.coeffs:
        hmax = max(h for h, _ in S.coeffs)
        kmax = max(k for _, k in S.coeffs)
        zp = qpowers(za, hmax)
        wp = qpowers(wa, kmax)
        for (h, k), c in S.coeffs.items():
            out += qmul(qmul(zp[h], wp[k]), c)
    return Quaternion.from_array(out) if scalar else out


def linear_combine(terms: Iterable[tuple[float, OrderedSeries]]) -> OrderedSeries:
    """Real-weighted coefficientwise sum of series with a common degree bound."""
    terms = list(terms)
    if not terms:
        raise ValueError("need at least one term")
    degree = terms[0][1].degree
    acc: dict[tuple[int, int], np.ndarray] = {}
    for scalar, S in terms:
        if S.degree != degree:
            raise ValueError(f"mismatched degree bounds {S.degree} != {degree}")
        for key, c in S.coeffs.items():
            acc[key] = acc.get(key, np.zeros(4)) + float(scalar) * c
    return OrderedSeries(degree, {key: c for key, c in acc.items() if np.any(c != 0.0)})


def compose_eval(outer: SeriesMap, inner: SeriesMap, z, w):
    """Pointwise ``outer(inner(z, w))``; composites are never formed symbolically."""
    u, v = inner(z, w)
    return outer(u, v)
