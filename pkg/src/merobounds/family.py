"""Members of the pole-bearing univalent family and their coefficient bounds.

The family under study consists of functions f on the unit disc, analytic
except for one simple pole at p in (0, 1), normalized by f(0) = 0 and
f'(0) = 1, whose univalence residual (z/f)^2 f' - 1 stays below lambda in
modulus. Members are constructed from Schur-class generators through two
equivalent routes and carried as the series pair (G, f) with G = z/f.

Route one (``build_from_w``): G = (1 - z/p) * (1 - lambda*p*z*w(z)) for a
Schur function w. This is a necessary form for membership, so the result
is a candidate until ``membership_check`` passes.

Route two (``build_from_w1``): G = 1 - (z/p)(1 + lambda*p*I) +
lambda*z*int_0^z w1(t) dt with I = int_0^p w1. Here the residual equals
-lambda * z^2 * w1(z) identically, so the defining inequality holds by
construction and only the single-pole condition needs checking.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .schur import SchurParams, schur_coeffs
from .series import (
    DEFAULT_ORDER,
    PowerSeries,
    grid_max_modulus,
    mul_coeffs,
    ps_eval,
    reciprocal_coeffs,
)

FROM_W = "from_w"
FROM_W1 = "from_w1"
EXTREMAL = "extremal"

MEMBER = "MEMBER"
BOUNDARY = "BOUNDARY"
NON_MEMBER = "NON_MEMBER"
EXTRA_POLE = "EXTRA_POLE"

EPS_MEMBER = 1e-9
WINDING_SAMPLES = 4096
WINDING_INTEGRALITY_TOL = 0.1
INTEGRAL_TAIL_TOL = 1e-12
P_MAX_INTEGRAL = 0.95
MIN_MEMBER_ORDER = 4


class ContourError(RuntimeError):
    """Winding-number phase sum did not land near an integer."""


@dataclass(frozen=True)
class ClassParams:
    """Pole location p in (0,1) and inequality level lambda in (0,1]."""

    p: float
    lam: float

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"pole location must lie in (0,1), got {self.p}")
        if not 0.0 < self.lam <= 1.0:
            raise ValueError(f"inequality level must lie in (0,1], got {self.lam}")
        # consequence: lam * p**2 < 1, so the sharp-bound denominator never vanishes


@dataclass(frozen=True)
class MemberFunction:
    """A constructed candidate member.

    ``G`` is the series of z/f (constant term 1), ``f`` the Taylor series of
    f on |z| < p (f[0] = 0, f[1] = 1), ``a2`` the second Taylor coefficient.
    """

    cp: ClassParams
    source: str
    generator: SchurParams
    G: PowerSeries
    f: PowerSeries
    a2: complex


@dataclass(frozen=True)
class MembershipVerdict:
    sup_u: float
    margin: float
    pole_count: int
    status: str


@functools.lru_cache(maxsize=None)
def member_order(p: float, order: int) -> int:
    """Order actually used by the integral route for a requested ``order``.

    For p > 0.8 the whole member is built at a raised order with
    p**N <= 1e-12, keeping the truncated-antiderivative tail at p (at most
    p**N / (N(1-p))) negligible; below that the requested order already
    keeps the member faithful to its generator.
    """
    if p > 0.8:
        return max(order, math.ceil(math.log(INTEGRAL_TAIL_TOL) / math.log(p)))
    return order


def _member_from_g(cp: ClassParams, source: str, generator: SchurParams,
                   g: np.ndarray) -> MemberFunction:
    rec = reciprocal_coeffs(g)
    f = np.zeros(len(g), np.complex128)
    f[1:] = rec[:-1]
    return MemberFunction(cp, source, generator, PowerSeries(g), PowerSeries(f),
                          complex(f[2]))


def _denominator_factor(cp: ClassParams, w: np.ndarray) -> np.ndarray:
    """Coefficients of 1 - lambda*p*z*w(z) at the order of w."""
    s = np.zeros(len(w), np.complex128)
    s[0] = 1.0
    s[1:] = -cp.lam * cp.p * w[:-1]
    return s


def build_from_w(cp: ClassParams, w: SchurParams, order: int = DEFAULT_ORDER) -> MemberFunction:
    """Candidate member with z/f = (1 - z/p)(1 - lambda*p*z*w(z)).

    The form is necessary for membership but not proven sufficient, so the
    result is a candidate until membership_check passes.
    """
    if order < MIN_MEMBER_ORDER:
        raise ValueError(f"order must be >= {MIN_MEMBER_ORDER}")
    wc = schur_coeffs(w.gammas, order)
    s = _denominator_factor(cp, wc)
    lin = np.zeros(order, np.complex128)
    lin[0] = 1.0
    lin[1] = -1.0 / cp.p
    return _member_from_g(cp, FROM_W, w, mul_coeffs(lin, s))


def build_from_w1(cp: ClassParams, w1: SchurParams, order: int = DEFAULT_ORDER) -> MemberFunction:
    """Member from the integral route; the defining inequality holds by construction.

    z/f = 1 - (z/p)(1 + lambda*p*I) + lambda*z*int_0^z w1, with I the
    integral of w1 over [0, p] read off the member's own truncated
    antiderivative, so z/f vanishes at p identically (to rounding) and
    a2 = (1 + lambda*p*I)/p. For p > 0.8 the member is built at a raised
    order (see member_order) so the dropped integral tail stays below 1e-12.
    """
    if order < MIN_MEMBER_ORDER:
        raise ValueError(f"order must be >= {MIN_MEMBER_ORDER}")
    if cp.p > P_MAX_INTEGRAL:
        raise ValueError(
            f"pole at {cp.p} exceeds {P_MAX_INTEGRAL}; the truncated antiderivative "
            "cannot be evaluated reliably that close to the boundary"
        )
    n_eff = member_order(cp.p, order)
    w1c = schur_coeffs(w1.gammas, n_eff)
    # antiderivative truncated to the terms that enter G, so that the value
    # of G at p cancels exactly rather than to truncation accuracy
    anti = np.zeros(n_eff - 1, np.complex128)
    anti[1:] = w1c[: n_eff - 2] / np.arange(1, n_eff - 1)
    # numpy arithmetic throughout: its complex division rounds differently
    # from CPython's at the last ulp, and the search objective must be able
    # to reproduce these coefficients bit for bit
    i_p = np.polyval(anti[::-1], cp.p)
    a2 = (1.0 + cp.lam * cp.p * i_p) / cp.p

    g = np.zeros(n_eff, np.complex128)
    g[0] = 1.0
    g[1] = -a2
    g[2:] = cp.lam * anti[1:]
    member = _member_from_g(cp, FROM_W1, w1, g)
    # independent derivations of a2 must agree; a mismatch means assembly is broken
    if abs(member.a2 - a2) > 1e-10:
        raise ArithmeticError(
            f"a2 cross-check failed: series {member.a2} vs integral formula {a2}"
        )
    return member


def extremal_member(cp: ClassParams, order: int = DEFAULT_ORDER) -> MemberFunction:
    """The boundary member -pz/((z-p)(1-lambda*p*z)), i.e. route one with w = 1."""
    m = build_from_w(cp, SchurParams((1.0 + 0.0j,)), order)
    return MemberFunction(cp, EXTREMAL, m.generator, m.G, m.f, m.a2)


def univalence_residual(m: MemberFunction) -> PowerSeries:
    """Series of (z/f)^2 f' - 1.

    For f = z/G the residual equals G - z*G' - 1, which is (1-k)*g_k
    termwise (with g_0 - 1 at k = 0). The reduction is cross-checked against
    direct pointwise evaluation in the test suite.
    """
    g = m.G.coeffs
    u = (1.0 - np.arange(len(g))) * g
    u[0] = g[0] - 1.0
    return PowerSeries(u)


def winding_number(series: PowerSeries, radius: float,
                   samples: int = WINDING_SAMPLES) -> int:
    """Zeros of the series inside |z| < radius, by trapezoidal phase accumulation.

    Raises ContourError when the accumulated phase misses an integer multiple
    of 2*pi by more than 0.1, or when the contour passes too close to a zero.
    """
    angles = 2.0 * np.pi * np.arange(samples) / samples
    vals = ps_eval(series, radius * np.exp(1j * angles))
    if np.min(np.abs(vals)) < 1e-12:
        raise ContourError(f"contour |z| = {radius} passes through a zero")
    steps = np.angle(np.roll(vals, -1) / vals)
    total = float(np.sum(steps)) / (2.0 * np.pi)
    nearest = round(total)
    if abs(total - nearest) > WINDING_INTEGRALITY_TOL:
        raise ContourError(
            f"winding sum {total:.6f} is not within {WINDING_INTEGRALITY_TOL} of an integer; "
            "increase sampling or shrink the contour"
        )
    return int(nearest)


def default_contour_radius(p: float) -> float:
    """Contour strictly between the pole and the boundary: (1+p)/2, capped at 0.99."""
    return min(0.99, 0.5 * (1.0 + p))


def membership_check(m: MemberFunction, r_max: float | None = None,
                     angles: int = 720) -> MembershipVerdict:
    """Numerical membership classification of a candidate.

    sup_u is the max of the residual modulus over the circles
    {r_max, 0.9*r_max, 0.5}; pole_count counts zeros of G inside |z| < r_max
    (zeros of G are poles of f). Statuses: MEMBER iff margin > 1e-9 with a
    single pole, BOUNDARY when |margin| <= 1e-9, NON_MEMBER when the residual
    exceeds the level, EXTRA_POLE whenever the pole count is not one. The
    defining inequality is strict, so a numerical tie cannot be resolved and
    is reported as BOUNDARY rather than forced to either side.
    """
    p = m.cp.p
    if r_max is None:
        r_max = default_contour_radius(p)
    if not p < r_max < 1.0:
        raise ValueError(f"contour radius must satisfy p < r_max < 1, got {r_max}")
    u = univalence_residual(m)
    sup_u = grid_max_modulus(u, (r_max, 0.9 * r_max, 0.5), angles)
    pole_count = winding_number(m.G, r_max)
    margin = m.cp.lam - sup_u
    if pole_count != 1:
        status = EXTRA_POLE
    elif margin > EPS_MEMBER:
        status = MEMBER
    elif abs(margin) <= EPS_MEMBER:
        status = BOUNDARY
    else:
        status = NON_MEMBER
    return MembershipVerdict(sup_u=sup_u, margin=margin, pole_count=pole_count,
                             status=status)


def pole_condition_residual(m: MemberFunction) -> float:
    """|G(p)|; zero for a genuine member since f has its pole at p."""
    return float(abs(ps_eval(m.G, m.cp.p)))


def roundtrip_residual(m: MemberFunction) -> float:
    """Conditioned residual of G*f against the series z.

    The raw residual of coefficient k scales with sum_j |g_j||f_{k-j}| (f's
    coefficients grow like p^(1-k)), so the error is normalized by that
    magnitude before taking the max.
    """
    prod = mul_coeffs(m.G.coeffs, m.f.coeffs)
    prod[1] -= 1.0
    cond = np.convolve(np.abs(m.G.coeffs), np.abs(m.f.coeffs))[: m.G.order]
    return float(np.max(np.abs(prod) / np.maximum(cond, 1.0)))


# ---------------------------------------------------------------------------
# closed-form coefficients and bounds


def extremal_coeffs(cp: ClassParams, n: int) -> float:
    """n-th Taylor coefficient of the boundary member: (1-(lam p^2)^n)/(p^(n-1)(1-lam p^2))."""
    if n < 1:
        raise ValueError("n must be >= 1")
    q = cp.lam * cp.p * cp.p
    return (1.0 - q**n) / (cp.p ** (n - 1) * (1.0 - q))


def conjectured_bound(cp: ClassParams, n: int) -> float:
    """Sharp bound candidate for |a_n|; the boundary member saturates it.

    Same formula as extremal_coeffs, kept as a distinct named operation so
    reports can reference the bound independently of the witness.
    """
    return extremal_coeffs(cp, n)


def nonsharp_bound(cp: ClassParams, n: int) -> float:
    """Cauchy-Schwarz coefficient bound, valid for every member, n >= 3."""
    if n < 3:
        raise ValueError("the non-sharp bound applies for n >= 3")
    p, lam = cp.p, cp.lam
    k = np.arange(1, n)
    left = float(np.sum((lam * p) ** (2 * k)))
    right = float(np.sum(p ** (-2.0 * (n - k - 1))))
    return p ** (1 - n) + math.sqrt(left) * math.sqrt(right)


def closed_form_a3(cp: ClassParams, c0, c1):
    """Third coefficient of a route-one member from generator coefficients c0, c1."""
    p, lam = cp.p, cp.lam
    return lam * p * c1 + lam**2 * p**2 * c0**2 + lam * c0 + 1.0 / p**2


def closed_form_a4(cp: ClassParams, c0, c1, c2):
    p, lam = cp.p, cp.lam
    return (lam * p * c2 + 2.0 * lam**2 * p**2 * c0 * c1 + lam**3 * p**3 * c0**3
            + lam * c1 + lam**2 * p * c0**2 + lam * c0 / p + 1.0 / p**3)


def closed_form_a5(cp: ClassParams, c0, c1, c2, c3):
    p, lam = cp.p, cp.lam
    return (lam * p * c3 + lam**2 * p**2 * c1**2 + 2.0 * lam**2 * p**2 * c0 * c2
            + 3.0 * lam**3 * p**3 * c0**2 * c1 + lam**4 * p**4 * c0**4
            + lam * c2 + 2.0 * lam**2 * p * c0 * c1 + lam**3 * p**2 * c0**3
            + lam * c1 / p + lam**2 * c0**2 + lam * c0 / p**2 + 1.0 / p**4)


def diff_bound_check(m: MemberFunction, n_max: int) -> float:
    """max over 2 <= n <= n_max of |a_{n+1} - a_n/p| / (lambda*p).

    At most 1 for genuine members; the boundary member gives exactly
    (lambda*p)^(n-1) at each n, so its worst ratio is lambda*p.
    """
    if n_max + 1 >= m.f.order:
        raise ValueError(f"n_max + 1 = {n_max + 1} must be below the order {m.f.order}")
    f = m.f.coeffs
    n = np.arange(2, n_max + 1)
    diffs = np.abs(f[n + 1] - f[n] / m.cp.p)
    return float(np.max(diffs)) / (m.cp.lam * m.cp.p)


def rogosinski_l2_check(cp: ClassParams, w: SchurParams, n: int) -> tuple[float, float]:
    """Coefficient l2 test for 1/(1 - lambda*p*z*w(z)).

    That function is subordinate to 1/(1 - lambda*p*z), so by Rogosinski's
    theorem sum_{k=1}^{n-1} |B_k|^2 <= sum_{k=1}^{n-1} (lambda*p)^(2k).
    Returns (lhs, rhs); w = 1 gives equality.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    wc = schur_coeffs(w.gammas, n)
    b = reciprocal_coeffs(_denominator_factor(cp, wc))
    lhs = float(np.sum(np.abs(b[1:n]) ** 2))
    k = np.arange(1, n)
    rhs = float(np.sum((cp.lam * cp.p) ** (2 * k)))
    return lhs, rhs


def a2_region_check(m: MemberFunction) -> float:
    """Margin of the second-coefficient disc |a2 - 1/p| <= lambda*p (negative = outside)."""
    return m.cp.lam * m.cp.p - abs(m.a2 - 1.0 / m.cp.p)


def normalized_form(cp: ClassParams, w: SchurParams, order: int = DEFAULT_ORDER) -> PowerSeries:
    """Unit-bounded factor (1 - lambda*p) / (1 - lambda*p*z*w(z)).

    Consistency form only: its value at 0 is 1 - lambda*p and multiplying it
    by the denominator factor returns the constant 1 - lambda*p. No member
    construction goes through it.
    """
    wc = schur_coeffs(w.gammas, order)
    u = (1.0 - cp.lam * cp.p) * reciprocal_coeffs(_denominator_factor(cp, wc))
    return PowerSeries(u)
