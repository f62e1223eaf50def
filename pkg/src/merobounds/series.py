"""Truncated complex power-series arithmetic.

A series is a fixed-order array of complex coefficients, coefficient k
multiplying z**k. Everything downstream (Schur functions, family members,
bound checks) is built on the half-dozen operations here. All operations
are pure; series never mutate after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DEFAULT_ORDER = 32
MAX_CONFIG_ORDER = 256  # cap for user-facing configuration, not a type limit

RECIPROCAL_EPS = 1e-12


class SingularSeriesError(ValueError):
    """Constant term too close to zero for the series to be inverted."""


@dataclass(frozen=True)
class PowerSeries:
    """Truncated Taylor expansion; ``coeffs[k]`` is the coefficient of z**k."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=np.complex128)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("coefficients must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficients must be finite")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k: int) -> complex:
        return complex(self.coeffs[k])

    def __len__(self) -> int:
        return len(self.coeffs)


def make_series(values: Iterable[complex], order: int | None = None) -> PowerSeries:
    """Series from a coefficient sequence, zero-padded to ``order`` if given."""
    arr = np.asarray(list(values), dtype=np.complex128)
    if order is not None:
        if order < len(arr):
            arr = arr[:order]
        else:
            arr = np.concatenate([arr, np.zeros(order - len(arr), np.complex128)])
    return PowerSeries(arr)


def _check_orders(a: PowerSeries, b: PowerSeries) -> None:
    if a.order != b.order:
        raise ValueError(f"order mismatch: {a.order} != {b.order}")


def ps_add(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    _check_orders(a, b)
    return PowerSeries(a.coeffs + b.coeffs)


def ps_mul(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Cauchy product truncated at the common order."""
    _check_orders(a, b)
    return PowerSeries(mul_coeffs(a.coeffs, b.coeffs))


def ps_reciprocal(a: PowerSeries) -> PowerSeries:
    """Multiplicative inverse: b0 = 1/a0, b_n = -(1/a0) sum_{k=1..n} a_k b_{n-k}.

    In exact arithmetic ps_mul(a, ps_reciprocal(a)) is (1, 0, ..., 0); in
    doubles the residual scales with sum_j |a_j||b_{n-j}|, which grows
    geometrically when the series polynomial has a root inside the unit disc.
    """
    return PowerSeries(reciprocal_coeffs(a.coeffs))


def ps_derivative(a: PowerSeries) -> PowerSeries:
    """Termwise derivative, zero-padded at the top (order is preserved)."""
    b = np.zeros(a.order, np.complex128)
    b[:-1] = a.coeffs[1:] * np.arange(1, a.order)
    return PowerSeries(b)


def ps_antiderivative(a: PowerSeries) -> PowerSeries:
    """Termwise antiderivative with value 0 at 0, truncated at the same order."""
    b = np.zeros(a.order, np.complex128)
    b[1:] = a.coeffs[:-1] / np.arange(1, a.order)
    return PowerSeries(b)


def ps_eval(a: PowerSeries, z):
    """Horner evaluation at z (scalar or array). Meaningful for |z| < 1."""
    return np.polyval(a.coeffs[::-1], z)


# Raw-array kernels. The search objective calls these a few hundred thousand
# times per grid cell; the PowerSeries wrappers above delegate to them so the
# hot path and the public API share one implementation.

def mul_coeffs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.convolve(a, b)[: len(a)]


def reciprocal_coeffs(a: np.ndarray) -> np.ndarray:
    if abs(a[0]) <= RECIPROCAL_EPS:
        raise SingularSeriesError(
            f"cannot invert series with |constant term| = {abs(a[0]):.3e} <= {RECIPROCAL_EPS}"
        )
    n = len(a)
    b = np.zeros(n, np.complex128)
    inv0 = 1.0 / a[0]
    b[0] = inv0
    for k in range(1, n):
        b[k] = -inv0 * (a[1 : k + 1] @ b[k - 1 :: -1])
    return b


def geometric_coeffs(ratio: complex, order: int) -> np.ndarray:
    """Coefficients of 1/(1 - ratio*z): 1, ratio, ratio**2, ..."""
    return np.power(complex(ratio), np.arange(order))


def unit_coeffs(order: int) -> np.ndarray:
    e = np.zeros(order, np.complex128)
    e[0] = 1.0
    return e


def circle_points(radius: float, count: int) -> np.ndarray:
    """count equally spaced points on |z| = radius, starting at angle 0."""
    angles = 2.0 * np.pi * np.arange(count) / count
    return radius * np.exp(1j * angles)


def grid_max_modulus(a: PowerSeries, radii: Sequence[float], angles_per_radius: int) -> float:
    """Max of |a(z)| over the sampled circles |z| = r, r in radii."""
    best = 0.0
    for r in radii:
        vals = np.abs(ps_eval(a, circle_points(float(r), angles_per_radius)))
        best = max(best, float(vals.max()))
    return best
