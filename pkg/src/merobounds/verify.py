"""Named invariant suites behind the ``verify`` command.

Each check runs one library invariant at configurable sizes and reports a
margin: the effective tolerance minus the worst observed error, so a
positive margin means the property held with room to spare. ``tol_scale``
multiplies every tolerance; setting it to 0 turns near-zero margins into
failures, which is the negative-test harness for the suite itself.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import family, search
from .family import (
    MEMBER,
    ClassParams,
    build_from_w,
    build_from_w1,
    conjectured_bound,
    extremal_member,
    nonsharp_bound,
)
from .schur import SchurParams, disc_uniform, schur_coeffs, schur_to_series
from .series import (
    PowerSeries,
    grid_max_modulus,
    mul_coeffs,
    ps_antiderivative,
    ps_derivative,
    ps_eval,
    reciprocal_coeffs,
)

DEFAULT_P_GRID = (0.1, 0.3, 0.5, 0.7, 0.9)
DEFAULT_LAMBDA_GRID = (0.2, 0.4, 0.6, 0.8, 1.0)


@dataclass(frozen=True)
class VerifySettings:
    order: int = 32
    seed: int = 0
    n_max: int = 20
    p_grid: tuple[float, ...] = DEFAULT_P_GRID
    lambda_grid: tuple[float, ...] = DEFAULT_LAMBDA_GRID
    restarts: int = 16
    budget: int = 4000
    param_count: int = 6
    tol_scale: float = 1.0
    series_samples: int = 200
    schur_samples: int = 500
    pipeline_samples: int = 500
    member_samples: int = 200
    rogosinski_samples: int = 200
    diff_members: int = 100
    sweep_samples: int = 10_000
    grid_size: int = 1000


@dataclass(frozen=True)
class InvariantResult:
    name: str
    passed: bool
    margin: float
    detail: str


@dataclass
class VerificationReport:
    results: list[InvariantResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def as_payload(self) -> dict:
        return {
            "passed": self.passed,
            "failures": sum(not r.passed for r in self.results),
            "invariants": [
                {"name": r.name, "passed": r.passed, "margin": r.margin, "detail": r.detail}
                for r in self.results
            ],
        }


def _result(name: str, err: float, tol: float, scale: float, detail: str) -> InvariantResult:
    tol_eff = tol * scale
    return InvariantResult(name=name, passed=bool(err <= tol_eff),
                           margin=float(tol_eff - err), detail=detail)


def _random_member_params(rng, p_lo=0.05, p_hi=0.95, m_max=4):
    p = float(rng.uniform(p_lo, p_hi))
    lam = float(rng.uniform(0.1, 1.0))
    m = int(rng.integers(0, m_max + 1))
    gammas = SchurParams(tuple(disc_uniform(rng, m + 1)))
    return ClassParams(p=p, lam=lam), gammas


# -- series ------------------------------------------------------------------

def _series_checks(s: VerifySettings) -> list[InvariantResult]:
    rng = np.random.default_rng(s.seed)
    out = []

    worst = 0.0
    for _ in range(s.series_samples):
        order = int(rng.integers(2, 65))
        a = 10.0 * disc_uniform(rng, order)
        if abs(a[0]) < 1e-6:
            a[0] = 1.0
        b = reciprocal_coeffs(a)
        res = np.convolve(a, b)[:order]
        res[0] -= 1.0
        cond = np.maximum(np.convolve(np.abs(a), np.abs(b))[:order], 1.0)
        worst = max(worst, float(np.max(np.abs(res) / cond)))
    out.append(_result("series.reciprocal_roundtrip", worst, 1e-12, s.tol_scale,
                       f"conditioned residual of a * recip(a) over {s.series_samples} draws"))

    worst_c = worst_a = 0.0
    for _ in range(s.series_samples):
        order = int(rng.integers(2, 65))
        a, b, c = (disc_uniform(rng, order) for _ in range(3))
        ab, ba = mul_coeffs(a, b), mul_coeffs(b, a)
        worst_c = max(worst_c, float(np.max(np.abs(ab - ba))))
        abc = mul_coeffs(ab, c)
        acb = mul_coeffs(a, mul_coeffs(b, c))
        worst_a = max(worst_a, float(np.max(np.abs(abc - acb))))
    out.append(_result("series.mul_commutative", worst_c, 1e-12, s.tol_scale,
                       "a*b vs b*a, unit-disc coefficients"))
    out.append(_result("series.mul_associative", worst_a, 1e-12, s.tol_scale,
                       "(a*b)*c vs a*(b*c), unit-disc coefficients"))

    worst = 0.0
    for _ in range(s.series_samples):
        order = int(rng.integers(2, 65))
        a = PowerSeries(disc_uniform(rng, order))
        back = ps_derivative(ps_antiderivative(a))
        diff = np.abs(back.coeffs[:-1] - a.coeffs[:-1])  # top coefficient is lost
        if len(diff):
            worst = max(worst, float(np.max(diff)))
    out.append(_result("series.derivative_antiderivative", worst, 1e-13, s.tol_scale,
                       "roundtrip reproduces all but the top coefficient"))
    return out


# -- schur -------------------------------------------------------------------

def _schur_checks(s: VerifySettings) -> list[InvariantResult]:
    rng = np.random.default_rng(s.seed + 1)
    out = []

    sup09 = sup05 = 0.0
    for _ in range(100):
        m = int(rng.integers(0, 7))
        params = SchurParams(tuple(disc_uniform(rng, m + 1)))
        w = schur_to_series(params, 64)
        sup09 = max(sup09, grid_max_modulus(w, (0.9,), 256))
        sup05 = max(sup05, grid_max_modulus(w, (0.5,), 256))
    out.append(_result("schur.grid_bound_r090", sup09 - 1.0, 1e-2, s.tol_scale,
                       "max modulus at radius 0.9, order 64"))
    out.append(_result("schur.grid_bound_r050", sup05 - 1.0, 1e-8, s.tol_scale,
                       "max modulus at radius 0.5, order 64"))

    worst = 0.0
    worst_c0 = 0.0
    for _ in range(s.schur_samples):
        m = int(rng.integers(0, 7))
        gammas = tuple(disc_uniform(rng, m + 1))
        c = schur_coeffs(gammas, s.order)
        c0 = abs(c[0])
        worst = max(worst, c0 - 1.0)
        if len(c) > 1:
            worst = max(worst, float(np.max(np.abs(c[1:]) - (1.0 - c0 * c0))))
        worst_c0 = max(worst_c0, abs(c[0] - gammas[0]))
    out.append(_result("schur.coeff_inequality", worst, 1e-10, s.tol_scale,
                       f"|c0|<=1 and |c_n|<=1-|c0|^2 over {s.schur_samples} generated series"))
    out.append(_result("schur.constant_term", worst_c0, 0.0, s.tol_scale,
                       "c0 equals the leading parameter exactly"))
    return out


# -- family ------------------------------------------------------------------

def _pipeline_check(s: VerifySettings) -> InvariantResult:
    rng = np.random.default_rng(s.seed + 2)
    closed = {3: family.closed_form_a3, 4: family.closed_form_a4, 5: family.closed_form_a5}
    top = min(5, s.order - 1)
    worst = 0.0
    for _ in range(s.pipeline_samples):
        cp, gammas = _random_member_params(rng)
        member = build_from_w(cp, gammas, s.order)
        c = schur_coeffs(gammas.gammas, s.order)
        for n in range(3, top + 1):
            want = closed[n](cp, *c[: n - 1])
            got = member.f[n]
            worst = max(worst, abs(got - want) / max(1.0, abs(want)))
    return _result("family.pipeline_closed_forms", worst, 1e-10, s.tol_scale,
                   f"series route vs closed coefficient forms a3..a{top}, "
                   f"{s.pipeline_samples} draws")


def _from_w1_checks(s: VerifySettings) -> list[InvariantResult]:
    rng = np.random.default_rng(s.seed + 3)
    worst_u = worst_pole = worst_round = worst_a2 = 0.0
    for _ in range(s.member_samples):
        cp, gammas = _random_member_params(rng)
        member = build_from_w1(cp, gammas, s.order)
        n_eff = member.G.order  # the integral route raises the order when p > 0.8
        w1 = schur_coeffs(gammas.gammas, n_eff)
        u = family.univalence_residual(member).coeffs
        expect = np.zeros(n_eff, np.complex128)
        expect[2:] = -cp.lam * w1[: n_eff - 2]
        worst_u = max(worst_u, float(np.max(np.abs(u - expect))))
        worst_pole = max(worst_pole, family.pole_condition_residual(member))
        worst_round = max(worst_round, family.roundtrip_residual(member))
        worst_a2 = max(worst_a2, -family.a2_region_check(member))
    return [
        _result("family.u_identity", worst_u, 1e-12, s.tol_scale,
                f"residual equals -lambda*z^2*w1 coefficientwise, {s.member_samples} members"),
        _result("family.pole_condition", worst_pole, 1e-10, s.tol_scale,
                "|G(p)| at the pole for every integral-route member"),
        _result("family.product_roundtrip", worst_round, 1e-10, s.tol_scale,
                "conditioned residual of G*f against z"),
        _result("family.a2_region", worst_a2, 1e-9, s.tol_scale,
                "|a2 - 1/p| <= lambda*p for every integral-route member"),
    ]


def _extremal_checks(s: VerifySettings) -> list[InvariantResult]:
    n_top = max(2, min(s.n_max, s.order - 2))
    worst = 0.0
    worst_membership = -np.inf
    all_member = True
    for p in s.p_grid:
        for lam in s.lambda_grid:
            cp = ClassParams(p=p, lam=lam)
            member = extremal_member(cp, s.order)
            for n in range(1, n_top + 1):
                ratio = abs(member.f[n]) / conjectured_bound(cp, n)
                worst = max(worst, abs(ratio - 1.0))
            verdict = family.membership_check(member)
            all_member = all_member and verdict.status == MEMBER
            worst_membership = max(worst_membership, -verdict.margin)
    out = [
        _result("family.extremal_saturation", worst, 1e-12, s.tol_scale,
                f"|a_n|/bound = 1 for the boundary member, n <= {n_top}, "
                f"{len(s.p_grid)}x{len(s.lambda_grid)} grid"),
        _result("family.extremal_membership",
                worst_membership if all_member else 1.0, 0.0, s.tol_scale,
                "boundary member classified MEMBER over the grid"),
    ]
    return out


def _residual_pointwise_check(s: VerifySettings) -> InvariantResult:
    """The termwise reduction of (z/f)^2 f' - 1 against direct evaluation."""
    rng = np.random.default_rng(s.seed + 4)
    order = max(s.order, 48)
    worst = 0.0
    for _ in range(20):
        cp, gammas = _random_member_params(rng, p_lo=0.2, p_hi=0.9)
        member = build_from_w(cp, gammas, order)
        u = family.univalence_residual(member)
        z = 0.5 * cp.p * np.exp(1j * 2.0 * np.pi * rng.random(40))
        fz = ps_eval(member.f, z)
        dfz = ps_eval(ps_derivative(member.f), z)
        direct = (z / fz) ** 2 * dfz - 1.0
        worst = max(worst, float(np.max(np.abs(direct - ps_eval(u, z)))))
    return _result("family.residual_pointwise", worst, 1e-8, s.tol_scale,
                   "series identity vs direct evaluation at |z| = p/2")


def _normalized_form_checks(s: VerifySettings) -> list[InvariantResult]:
    rng = np.random.default_rng(s.seed + 5)
    worst_v = worst_p = 0.0
    for _ in range(50):
        cp, gammas = _random_member_params(rng)
        u = family.normalized_form(cp, gammas, s.order)
        worst_v = max(worst_v, abs(u[0] - (1.0 - cp.lam * cp.p)))
        w = schur_coeffs(gammas.gammas, s.order)
        denom = family._denominator_factor(cp, w)
        prod = mul_coeffs(u.coeffs, denom)
        prod[0] -= 1.0 - cp.lam * cp.p
        worst_p = max(worst_p, float(np.max(np.abs(prod))))
    return [
        _result("family.normalized_form_value", worst_v, 1e-14, s.tol_scale,
                "value at 0 equals 1 - lambda*p"),
        _result("family.normalized_form_product", worst_p, 1e-12, s.tol_scale,
                "normalized factor times denominator factor is constant"),
    ]


def _rogosinski_checks(s: VerifySettings) -> list[InvariantResult]:
    rng = np.random.default_rng(s.seed + 6)
    worst = 0.0
    for _ in range(s.rogosinski_samples):
        cp, gammas = _random_member_params(rng)
        n = int(rng.integers(2, 13))
        lhs, rhs = family.rogosinski_l2_check(cp, gammas, n)
        worst = max(worst, lhs - rhs)
    worst_eq = 0.0
    one = SchurParams((1.0 + 0.0j,))
    for p in s.p_grid:
        for lam in s.lambda_grid:
            lhs, rhs = family.rogosinski_l2_check(ClassParams(p=p, lam=lam), one, 10)
            worst_eq = max(worst_eq, abs(lhs - rhs))
    return [
        _result("family.rogosinski_l2", worst, 1e-10, s.tol_scale,
                f"coefficient l2 subordination bound, {s.rogosinski_samples} draws"),
        _result("family.rogosinski_equality", worst_eq, 1e-12, s.tol_scale,
                "equality at the constant generator w = 1"),
    ]


def _diff_bound_check(s: VerifySettings) -> InvariantResult:
    rng = np.random.default_rng(s.seed + 7)
    n_max = max(2, min(10, s.order - 2))
    worst = -np.inf
    for _ in range(s.diff_members):
        cp, gammas = _random_member_params(rng)
        member = build_from_w1(cp, gammas, s.order)
        worst = max(worst, family.diff_bound_check(member, n_max) - 1.0)
    return _result("family.diff_bound", worst, 1e-9, s.tol_scale,
                   f"|a_(n+1) - a_n/p| <= lambda*p for {s.diff_members} members, n <= {n_max}")


def _remark_limit_check(s: VerifySettings) -> InvariantResult:
    """Near-boundary consistency: as p -> 1 the bounds match their pole-free limits.

    The sharp-bound limits (geometric lambda sum; n itself at lambda = 1) are
    taken at p = 0.9999; the non-sharp limit comparison is pinned at p = 0.999,
    where the gap peaks just under 1e-2 for lambda = 0.5, n = 8.
    """
    worst = 0.0
    for lam in (0.5, 1.0):
        near = ClassParams(p=0.9999, lam=lam)
        for n in range(3, 9):
            geom = sum(lam**k for k in range(n))
            worst = max(worst, abs(conjectured_bound(near, n) - geom))
            limit = 1.0 + lam * np.sqrt(n - 1.0) * np.sqrt(sum(lam ** (2 * k) for k in range(n - 1)))
            worst = max(worst, abs(nonsharp_bound(ClassParams(p=0.999, lam=lam), n) - limit))
    near1 = ClassParams(p=0.9999, lam=1.0)
    for n in range(3, 9):
        worst = max(worst, abs(conjectured_bound(near1, n) - n))
    return _result("family.remark_limits", worst, 1e-2, s.tol_scale,
                   "bounds near p = 1 against their pole-free limit expressions")


# -- bounds ------------------------------------------------------------------

def _majorant_checks(s: VerifySettings) -> list[InvariantResult]:
    worst_gap = 0.0
    worst_mono = 0.0
    for n in (3, 4, 5):
        case = search.majorant_case(n)
        for lam in s.lambda_grid:
            for p in s.p_grid:
                cp = ClassParams(p=p, lam=lam)
                bound = conjectured_bound(cp, n)
                gap = abs(float(search.coeff_majorant(n, cp, 1.0)) - bound) / max(1.0, bound)
                worst_gap = max(worst_gap, gap)
            for frac in (0.2, 0.4, 0.6, 0.8, 1.0):
                cp = ClassParams(p=frac * case.threshold, lam=lam)
                mono = search.monotone_check(case, cp, s.grid_size)
                worst_mono = max(worst_mono, -mono.min_derivative)
    return [
        _result("bounds.majorant_at_one", worst_gap, 1e-12, s.tol_scale,
                "majorant value at x = 1 equals the conjectured bound (relative)"),
        _result("bounds.monotone_range", worst_mono, 1e-12, s.tol_scale,
                "majorant derivative nonnegative on [0,1] within proven pole ranges"),
    ]


def _sweep_checks(s: VerifySettings) -> list[InvariantResult]:
    rng = np.random.default_rng(s.seed + 8)
    worst_ratio = -np.inf
    worst_admissible = 0.0
    for n in (3, 4, 5):
        case = search.majorant_case(n)
        coeffs = search.sample_admissible_coeffs(rng, s.sweep_samples, n)
        cap = 1.0 - np.abs(coeffs[0]) ** 2
        for c in coeffs[1:]:
            worst_admissible = max(worst_admissible, float(np.max(np.abs(c) - cap)))
        for frac in (0.5, 1.0):
            for lam in (0.5, 1.0):
                cp = ClassParams(p=frac * case.threshold, lam=lam)
                verdict = search.verify_bound_argument(cp, n, samples=s.sweep_samples,
                                                       seed=s.seed, grid_size=s.grid_size)
                worst_ratio = max(worst_ratio, verdict.sweep_max_ratio - 1.0)
    return [
        _result("bounds.admissible_sampling", worst_admissible, 1e-12, s.tol_scale,
                "sweep tuples respect |c_k| <= 1 - |c0|^2"),
        _result("bounds.sweep_within_bound", worst_ratio, 1e-9, s.tol_scale,
                f"constrained sweeps of {s.sweep_samples} tuples stay within the bound"),
    ]


def _search_checks(s: VerifySettings) -> list[InvariantResult]:
    out = []
    cells = [(3, 0.4), (4, 0.3), (5, 0.25)]
    worst = -np.inf
    for n, p in cells:
        if n + 1 >= s.order:
            continue
        report = search.search_max_coeff(
            ClassParams(p=p, lam=1.0), n, param_count=s.param_count,
            restarts=s.restarts, budget=s.budget, seed=s.seed, order=s.order)
        worst = max(worst, report.ratio - 1.0)
        if report.is_violation:
            worst = max(worst, 1.0)
    out.append(_result("bounds.search_proven_range", worst, 1e-9, s.tol_scale,
                       "stress-test ratio within proven pole ranges"))

    runs = []
    for _ in range(2):
        rep = search.search_max_coeff(ClassParams(p=0.3, lam=1.0), 3,
                                      param_count=s.param_count, restarts=4,
                                      budget=400, seed=s.seed, order=s.order)
        runs.append(json.dumps({
            "best": rep.best_abs_coeff, "ratio": rep.ratio,
            "witness": search.gammas_key(rep.witness.gammas), "evals": rep.evals,
        }))
    out.append(_result("bounds.search_determinism", 0.0 if runs[0] == runs[1] else 1.0,
                       0.0, s.tol_scale,
                       "identical seed and budget give identical serialized reports"))
    return out


def _order_guard(s: VerifySettings) -> InvariantResult:
    needed = s.n_max + 2
    err = float(max(0, needed - s.order))
    return _result("config.order_sufficient", err, 0.0, 1.0,
                   f"truncation order {s.order} must be >= n_max + 2 = {needed}; "
                   "coefficients beyond the order are lost to truncation")


def run_verification(settings: VerifySettings | None = None) -> VerificationReport:
    """Execute every named invariant and collect the report."""
    s = settings or VerifySettings()
    report = VerificationReport()
    report.results.append(_order_guard(s))
    report.results.extend(_series_checks(s))
    report.results.extend(_schur_checks(s))
    report.results.append(_pipeline_check(s))
    report.results.extend(_from_w1_checks(s))
    report.results.extend(_extremal_checks(s))
    report.results.append(_residual_pointwise_check(s))
    report.results.extend(_normalized_form_checks(s))
    report.results.extend(_rogosinski_checks(s))
    report.results.append(_diff_bound_check(s))
    report.results.append(_remark_limit_check(s))
    report.results.extend(_majorant_checks(s))
    report.results.extend(_sweep_checks(s))
    report.results.extend(_search_checks(s))
    return report
