"""Sharp-bound verification machinery and the conjecture stress-test search.

Two independent attacks on the coefficient bound live here. The analytic
one (``verify_bound_argument``) checks the triangle-inequality majorant
argument that proves the bound for n in {3, 4, 5} on restricted pole
ranges: the majorant polynomial in x = |c0| is increasing on [0, 1] there,
its value at 1 is exactly the conjectured bound, and a constrained random
sweep of generator coefficients never exceeds it. The empirical one
(``search_max_coeff``) hunts for counterexamples by derivative-free
maximization of |a_n| over Schur parameter space.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass

import numpy as np

from .family import (
    FROM_W,
    FROM_W1,
    MEMBER,
    ClassParams,
    MemberFunction,
    MembershipVerdict,
    build_from_w,
    build_from_w1,
    closed_form_a3,
    closed_form_a4,
    closed_form_a5,
    conjectured_bound,
    member_order,
    membership_check,
)
from .schur import SchurParams, disc_uniform, schur_coeffs
from .series import DEFAULT_ORDER, mul_coeffs, reciprocal_coeffs

logger = logging.getLogger(__name__)

VIOLATION_TOL = 1e-9
MONOTONE_TOL = 1e-12
MAJORANT_MATCH_RTOL = 1e-12

PASS = "PASS"
FAIL = "FAIL"
OUT_OF_PROVEN_RANGE = "OUT_OF_PROVEN_RANGE"

_THRESHOLDS = {
    3: 0.5,
    4: (math.sqrt(3.0) - 1.0) / 2.0,
    5: (math.sqrt(5.0) - 1.0) / 4.0,
}


@dataclass(frozen=True)
class MajorantCase:
    """Coefficient index n in {3,4,5} and the maximal pole location for which
    the monotonicity argument is proved."""

    n: int
    threshold: float


def majorant_case(n: int) -> MajorantCase:
    if n not in _THRESHOLDS:
        raise ValueError(f"majorant argument covers n in {{3, 4, 5}}, got {n}")
    return MajorantCase(n=n, threshold=_THRESHOLDS[n])


def coeff_majorant(n: int, cp: ClassParams, x):
    """Triangle-inequality majorant of |a_n| as a polynomial in x = |c0|.

    Obtained from the closed coefficient forms by |c_k| <= 1 - |c0|^2 for
    k >= 1; its value at x = 1 is the conjectured bound.
    """
    p, lam = cp.p, cp.lam
    if n == 3:
        return lam * p * (1.0 - x**2) + lam * x + lam**2 * p**2 * x**2 + 1.0 / p**2
    if n == 4:
        return ((lam**3 * p**3 - 2.0 * lam**2 * p**2) * x**3
                + (-lam * p - lam + lam**2 * p) * x**2
                + (2.0 * lam**2 * p**2 + lam / p) * x
                + lam * p + lam + 1.0 / p**3)
    if n == 5:
        return ((lam**4 * p**4 + lam**2 * p**2 - 3.0 * lam**3 * p**3) * x**4
                + (lam**3 * p**2 - 2.0 * lam**2 * p**2 - 2.0 * lam**2 * p) * x**3
                + (3.0 * lam**3 * p**3 - lam * p - 2.0 * lam**2 * p**2
                   - lam + lam**2 - lam / p) * x**2
                + (2.0 * lam**2 * p**2 + 2.0 * lam**2 * p + lam / p**2) * x
                + lam * p + lam**2 * p**2 + lam + lam / p + 1.0 / p**4)
    raise ValueError(f"majorant defined for n in {{3, 4, 5}}, got {n}")


def coeff_majorant_deriv(n: int, cp: ClassParams, x):
    p, lam = cp.p, cp.lam
    if n == 3:
        return lam * (1.0 - 2.0 * p * x) + 2.0 * lam**2 * p**2 * x
    if n == 4:
        return (3.0 * (lam**3 * p**3 - 2.0 * lam**2 * p**2) * x**2
                + 2.0 * (-lam * p - lam + lam**2 * p) * x
                + 2.0 * lam**2 * p**2 + lam / p)
    if n == 5:
        return (4.0 * (lam**4 * p**4 + lam**2 * p**2 - 3.0 * lam**3 * p**3) * x**3
                + 3.0 * (lam**3 * p**2 - 2.0 * lam**2 * p**2 - 2.0 * lam**2 * p) * x**2
                + 2.0 * (3.0 * lam**3 * p**3 - lam * p - 2.0 * lam**2 * p**2
                         - lam + lam**2 - lam / p) * x
                + 2.0 * lam**2 * p**2 + 2.0 * lam**2 * p + lam / p**2)
    raise ValueError(f"majorant defined for n in {{3, 4, 5}}, got {n}")


@dataclass(frozen=True)
class MonotoneResult:
    min_derivative: float
    in_proven_range: bool


def monotone_check(case: MajorantCase, cp: ClassParams, grid_size: int = 1000) -> MonotoneResult:
    """Minimum of the majorant derivative over a uniform grid on [0, 1].

    Nonnegative (to 1e-12) whenever cp.p <= case.threshold; outside that
    range the value is still computed and reported, since the argument is
    sufficient rather than necessary.
    """
    x = np.linspace(0.0, 1.0, grid_size)
    d = coeff_majorant_deriv(case.n, cp, x)
    return MonotoneResult(min_derivative=float(np.min(d)),
                          in_proven_range=cp.p <= case.threshold)


def sample_admissible_coeffs(rng: np.random.Generator, count: int, n: int) -> list[np.ndarray]:
    """count generator-coefficient tuples (c0, ..., c_{n-2}) with c0 in the
    unit disc and every later coefficient in the disc of radius 1 - |c0|^2."""
    c0 = disc_uniform(rng, count)
    cap = 1.0 - np.abs(c0) ** 2
    return [c0] + [cap * disc_uniform(rng, count) for _ in range(n - 2)]


_CLOSED_FORMS = {3: closed_form_a3, 4: closed_form_a4, 5: closed_form_a5}


@dataclass(frozen=True)
class BoundArgumentVerdict:
    n: int
    cp: ClassParams
    status: str
    in_proven_range: bool
    min_derivative: float
    majorant_gap: float
    bound: float
    sweep_max_ratio: float
    samples: int


def verify_bound_argument(cp: ClassParams, n: int, samples: int = 10_000,
                          seed: int = 0, grid_size: int = 1000) -> BoundArgumentVerdict:
    """Run all three majorant checks for one (p, lambda, n) cell.

    Inside the proven pole range the verdict is PASS only if the derivative
    grid minimum is >= -1e-12, the majorant value at 1 matches the bound to
    1e-12 relative, and the constrained sweep stays within 1 + 1e-9 of the
    bound. Outside the range the monotonicity requirement is dropped and a
    clean run is tagged OUT_OF_PROVEN_RANGE instead of PASS.
    """
    case = majorant_case(n)
    mono = monotone_check(case, cp, grid_size)
    bound = conjectured_bound(cp, n)
    gap = abs(float(coeff_majorant(n, cp, 1.0)) - bound) / max(1.0, bound)

    rng = np.random.default_rng(seed)
    coeffs = sample_admissible_coeffs(rng, samples, n)
    values = _CLOSED_FORMS[n](cp, *coeffs)
    sweep_max_ratio = float(np.max(np.abs(values))) / bound

    ok = gap <= MAJORANT_MATCH_RTOL and sweep_max_ratio <= 1.0 + VIOLATION_TOL
    if mono.in_proven_range:
        ok = ok and mono.min_derivative >= -MONOTONE_TOL
        status = PASS if ok else FAIL
    else:
        status = OUT_OF_PROVEN_RANGE if ok else FAIL
    return BoundArgumentVerdict(n=n, cp=cp, status=status,
                                in_proven_range=mono.in_proven_range,
                                min_derivative=mono.min_derivative,
                                majorant_gap=gap, bound=bound,
                                sweep_max_ratio=sweep_max_ratio, samples=samples)


# ---------------------------------------------------------------------------
# derivative-free conjecture stress test


@dataclass(frozen=True)
class SearchReport:
    n: int
    cp: ClassParams
    parameterization: str
    best_abs_coeff: float
    witness: SchurParams
    bound: float
    ratio: float
    membership: MembershipVerdict
    evals: int
    seed: int
    order: int
    param_count: int
    discarded: int

    @property
    def is_violation(self) -> bool:
        """Flagged only for a validated member beating the bound beyond 1e-9."""
        return self.ratio > 1.0 + VIOLATION_TOL and self.membership.status == MEMBER


def gammas_key(gammas) -> str:
    """Canonical serialization of a parameter tuple, used for tie-breaking."""
    return json.dumps([[float(g.real), float(g.imag)] for g in gammas])


def witness_payload(report: SearchReport) -> dict:
    """Witness file content: everything needed to reconstruct the member."""
    return {
        "p": report.cp.p,
        "lambda": report.cp.lam,
        "n": report.n,
        "parameterization": report.parameterization,
        "gammas": [[float(g.real), float(g.imag)] for g in report.witness.gammas],
        "order": report.order,
        "seed": report.seed,
    }


def member_from_witness(payload: dict) -> MemberFunction:
    """Rebuild the witnessed member from a witness-file payload."""
    cp = ClassParams(p=float(payload["p"]), lam=float(payload["lambda"]))
    gammas = SchurParams(tuple(complex(re, im) for re, im in payload["gammas"]))
    order = int(payload["order"])
    builder = {FROM_W: build_from_w, FROM_W1: build_from_w1}[payload["parameterization"]]
    return builder(cp, gammas, order)


def _clamp_to_disc(x: np.ndarray) -> np.ndarray:
    """Interpret interleaved re/im coordinates as parameters, radially clamped."""
    g = x[0::2] + 1j * x[1::2]
    return g / np.maximum(np.abs(g), 1.0)


def _objective(cp: ClassParams, n: int, order: int, parameterization: str):
    """|a_n| of the member generated by a parameter vector, via the lean
    coefficient pipeline (identical arithmetic to the full builders)."""
    p, lam = cp.p, cp.lam
    if parameterization == FROM_W1:
        n_eff = member_order(p, order)
        ks = np.arange(1, n_eff - 1)

        def value(gammas: np.ndarray) -> float:
            w1 = schur_coeffs(gammas, n_eff)
            anti = np.zeros(n_eff - 1, np.complex128)
            anti[1:] = w1[: n_eff - 2] / ks
            i_p = np.polyval(anti[::-1], p)
            g = np.zeros(n, np.complex128)
            g[0] = 1.0
            g[1] = -(1.0 + lam * p * i_p) / p
            g[2:] = lam * anti[1 : n - 1]
            return float(abs(reciprocal_coeffs(g)[n - 1]))

        return value

    if parameterization == FROM_W:
        lin = np.zeros(n, np.complex128)
        lin[0] = 1.0
        lin[1] = -1.0 / p

        def value(gammas: np.ndarray) -> float:
            w = schur_coeffs(gammas, n)
            s = np.zeros(n, np.complex128)
            s[0] = 1.0
            s[1:] = -lam * p * w[: n - 1]
            return float(abs(reciprocal_coeffs(mul_coeffs(lin, s))[n - 1]))

        return value

    raise ValueError(f"unknown parameterization {parameterization!r}")


def _simplex_maximize(fn, x0: np.ndarray, max_evals: int,
                      step: float = 0.25) -> tuple[np.ndarray, float, int]:
    """Budget-capped Nelder-Mead ascent (reflection, expansion, contraction,
    shrink) started from x0 with coordinate steps of size ``step``.

    Returns (best point, best value, evaluations used). Deterministic.
    """
    d = len(x0)
    pts = np.tile(x0, (d + 1, 1))
    for i in range(d):
        pts[i + 1, i] += step
    vals = np.full(d + 1, -np.inf)
    used = 0
    for i in range(min(d + 1, max_evals)):
        vals[i] = fn(pts[i])
        used += 1

    while used < max_evals:
        ranking = np.argsort(-vals, kind="stable")
        pts, vals = pts[ranking], vals[ranking]
        centroid = pts[:-1].mean(axis=0)
        worst_x, worst_v = pts[-1], vals[-1]

        xr = centroid + (centroid - worst_x)
        fr = fn(xr)
        used += 1
        if fr > vals[0]:
            if used < max_evals:
                xe = centroid + 2.0 * (xr - centroid)
                fe = fn(xe)
                used += 1
                if fe > fr:
                    xr, fr = xe, fe
            pts[-1], vals[-1] = xr, fr
        elif fr > vals[-2]:
            pts[-1], vals[-1] = xr, fr
        else:
            if used >= max_evals:
                break
            if fr > worst_v:
                xc = centroid + 0.5 * (xr - centroid)
            else:
                xc = centroid - 0.5 * (centroid - worst_x)
            fc = fn(xc)
            used += 1
            if fc > max(fr, worst_v):
                pts[-1], vals[-1] = xc, fc
            else:
                for i in range(1, d + 1):
                    pts[i] = pts[0] + 0.5 * (pts[i] - pts[0])
                    if used < max_evals:
                        vals[i] = fn(pts[i])
                        used += 1
                    else:
                        vals[i] = -np.inf  # unevaluated after shrink: rank last

    best = int(np.argmax(vals))
    return pts[best], float(vals[best]), used


def search_max_coeff(cp: ClassParams, n: int, param_count: int,
                     restarts: int = 64, budget: int = 10_000, seed: int = 0,
                     parameterization: str = FROM_W1,
                     order: int = DEFAULT_ORDER) -> SearchReport:
    """Multi-start simplex maximization of |a_n| over Schur parameter space.

    The budget is function evaluations for the whole cell, split across
    restarts. Restart 0 starts at the unimodular constant generator (the
    known saturating point); restart i >= 1 draws its start from the RNG
    stream seed + i. Candidates are validated best-first: integral-route
    members only need the single-pole condition (the defining inequality
    holds by construction), product-route members need full membership.
    Infeasible candidates are discarded and logged. Deterministic in
    (seed, budget, restarts).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if param_count < 1:
        raise ValueError("param_count must be >= 1")
    if order < n + 1:
        raise ValueError(f"order {order} cannot hold coefficient {n}")
    if restarts < 1 or budget < 1:
        raise ValueError("restarts and budget must be positive")

    fn = _objective(cp, n, order, parameterization)
    dim = 2 * param_count
    quota, rem = divmod(budget, restarts)

    candidates: list[tuple[float, str, SchurParams]] = []
    total_evals = 0
    for i in range(restarts):
        this_quota = quota + (1 if i < rem else 0)
        if this_quota <= 0:
            continue
        if i == 0:
            x0 = np.zeros(dim)
            x0[0] = 1.0
        else:
            rng = np.random.default_rng(seed + i)
            start = disc_uniform(rng, param_count)
            x0 = np.empty(dim)
            x0[0::2] = start.real
            x0[1::2] = start.imag
        x_best, v_best, used = _simplex_maximize(
            lambda x: fn(_clamp_to_disc(x)), x0, this_quota)
        total_evals += used
        gammas = _clamp_to_disc(x_best)
        candidates.append((v_best, gammas_key(gammas), SchurParams(tuple(gammas))))

    candidates.sort(key=lambda c: (-c[0], c[1]))

    builder = build_from_w1 if parameterization == FROM_W1 else build_from_w
    discarded = 0
    for _, _, params in candidates:
        member = builder(cp, params, order)
        verdict = membership_check(member)
        if parameterization == FROM_W1:
            feasible = verdict.pole_count == 1
        else:
            feasible = verdict.status == MEMBER
        if feasible:
            break
        discarded += 1
        logger.info("discarding infeasible witness (status %s) at p=%g lam=%g n=%d",
                    verdict.status, cp.p, cp.lam, n)
    else:
        raise RuntimeError(
            f"all {len(candidates)} search candidates were infeasible "
            f"(p={cp.p}, lambda={cp.lam}, n={n})")

    best = float(abs(member.f[n]))
    bound = conjectured_bound(cp, n)
    return SearchReport(n=n, cp=cp, parameterization=parameterization,
                        best_abs_coeff=best, witness=params, bound=bound,
                        ratio=best / bound, membership=verdict,
                        evals=total_evals, seed=seed, order=order,
                        param_count=param_count, discarded=discarded)
