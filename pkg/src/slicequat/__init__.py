"""Quaternionic Hopf surfaces: slice-regular maps, iterates and automorphism dimensions."""

from __future__ import annotations

from .quat_core import I, J, K, ONE, ZERO, Quaternion, split
from .series import OrderedSeries, SeriesMap, eval_series
from .hopf import HopfCase, HopfParams, classify, iterate_closed, iterate_pointwise
from .aut import AutReport, MethodError, aut_dimension, expected_dimension, make_automorphism
from .deform import FamilyParams, dimension_scan, fiber

__all__ = [
    "I", "J", "K", "ONE", "ZERO", "Quaternion", "split",
    "OrderedSeries", "SeriesMap", "eval_series",
    "HopfCase", "HopfParams", "classify", "iterate_closed", "iterate_pointwise",
    "AutReport", "MethodError", "aut_dimension", "expected_dimension", "make_automorphism",
    "FamilyParams", "dimension_scan", "fiber",
]
