"""Small argument checks shared by the public functions and estimators."""

from __future__ import annotations

import numbers

import numpy as np


def check_site(site, L: int) -> int:
    if not isinstance(site, numbers.Integral) or not 1 <= site <= L:
        raise ValueError(f"site must be an integer in [1, {L}], got {site!r}")
    return int(site)


def check_positive(value, name: str) -> float:
    value = float(value)
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def check_steps(steps, minimum: int = 1) -> int:
    if not isinstance(steps, numbers.Integral) or steps < minimum:
        raise ValueError(f"steps must be an integer >= {minimum}, got {steps!r}")
    return int(steps)


def check_1d(values, name: str, ascending: bool = False) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 0:
        arr = arr[None]
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    if ascending and np.any(np.diff(arr) <= 0):
        raise ValueError(f"{name} must be strictly ascending")
    return arr
