"""Schur-class functions built exactly from finite parameter sequences.

A parameter sequence (g_0, ..., g_m) in the closed unit polydisc generates
an analytic function with |w| <= 1 on the unit disc through the backward
Moebius recursion

    f_m = g_m,    f_k = (g_k + z f_{k+1}) / (1 + conj(g_k) z f_{k+1}).

Every parameter choice yields a genuine bounded-by-one function, so the
closed polydisc is a box-shaped search space with no side conditions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .series import (
    DEFAULT_ORDER,
    PowerSeries,
    grid_max_modulus,
    mul_coeffs,
    reciprocal_coeffs,
)

GAMMA_TOL = 1e-12
COEFF_INEQ_TOL = 1e-12


@dataclass(frozen=True)
class SchurParams:
    """Finite sequence of closed-unit-disc parameters."""

    gammas: tuple[complex, ...]

    def __post_init__(self):
        gs = tuple(complex(g) for g in self.gammas)
        if not gs:
            raise ValueError("at least one parameter is required")
        for k, g in enumerate(gs):
            if abs(g) > 1.0 + GAMMA_TOL:
                raise ValueError(f"parameter {k} has modulus {abs(g):.6g} > 1")
        object.__setattr__(self, "gammas", gs)

    def __len__(self) -> int:
        return len(self.gammas)


def schur_coeffs(gammas: Sequence[complex], order: int) -> np.ndarray:
    """Taylor coefficients of the generated function, truncated to ``order``.

    The recursion is resolved in numerator/denominator polynomial form
    (N_k = g_k D_{k+1} + z N_{k+1}, D_k = D_{k+1} + conj(g_k) z N_{k+1},
    starting from N = g_m, D = 1), then one series reciprocal produces the
    expansion. D always has constant term 1, so the reciprocal is regular.
    """
    num = np.array([gammas[-1]], np.complex128)
    den = np.array([1.0], np.complex128)
    for g in gammas[-2::-1]:
        width = min(len(num) + 1, order)
        z_num = np.zeros(width, np.complex128)
        z_num[1:] = num[: width - 1]
        den_pad = np.zeros(width, np.complex128)
        den_pad[: len(den)] = den[:width]
        num = g * den_pad + z_num
        den = den_pad + np.conj(g) * z_num
    n = np.zeros(order, np.complex128)
    n[: len(num)] = num[:order]
    d = np.zeros(order, np.complex128)
    d[: len(den)] = den[:order]
    return mul_coeffs(n, reciprocal_coeffs(d))


def schur_to_series(params: SchurParams, order: int = DEFAULT_ORDER) -> PowerSeries:
    """Truncated Taylor expansion of the function generated by ``params``.

    The constant term equals gammas[0] exactly.
    """
    return PowerSeries(schur_coeffs(params.gammas, order))


def schur_validate(w: PowerSeries, radii: Sequence[float], angles_per_radius: int) -> float:
    """Max modulus of the truncated series over sampled circles |z| = r.

    The caller compares against 1 plus a truncation allowance; the series of
    a genuine Schur function can overshoot 1 on a circle of radius r by at
    most r**order / (1 - r) since every coefficient has modulus <= 1.
    """
    return grid_max_modulus(w, radii, angles_per_radius)


def schur_coeff_inequality_check(w: PowerSeries, tol: float = COEFF_INEQ_TOL) -> list[bool]:
    """Per-index verdicts for |c0| <= 1 and |c_n| <= 1 - |c0|^2 (n >= 1).

    These hold for every series produced by schur_to_series; a hand-built
    series violating them is certified non-Schur data.
    """
    c = w.coeffs
    c0 = float(abs(c[0]))
    verdicts = [c0 <= 1.0 + tol]
    cap = 1.0 - c0 * c0
    verdicts.extend(bool(abs(cn) <= cap + tol) for cn in c[1:])
    return verdicts


def disc_uniform(rng: np.random.Generator, size: int) -> np.ndarray:
    """Area-uniform samples from the closed unit disc (radius = sqrt of uniform)."""
    radius = np.sqrt(rng.random(size))
    angle = 2.0 * np.pi * rng.random(size)
    return radius * np.exp(1j * angle)


def random_schur(m: int, rng_seed: int) -> SchurParams:
    """m + 1 independent area-uniform disc parameters; deterministic in the seed."""
    if m < 0:
        raise ValueError("m must be >= 0")
    rng = np.random.default_rng(rng_seed)
    return SchurParams(tuple(disc_uniform(rng, m + 1)))
