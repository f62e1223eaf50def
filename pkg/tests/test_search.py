import json
import math

import numpy as np
import pytest

from merobounds.family import FROM_W, FROM_W1, MEMBER, ClassParams, conjectured_bound
from merobounds.search import (
    OUT_OF_PROVEN_RANGE,
    PASS,
    SearchReport,
    _simplex_maximize,
    coeff_majorant,
    coeff_majorant_deriv,
    gammas_key,
    majorant_case,
    member_from_witness,
    monotone_check,
    sample_admissible_coeffs,
    search_max_coeff,
    verify_bound_argument,
    witness_payload,
)

THR4 = (math.sqrt(3) - 1) / 2
THR5 = (math.sqrt(5) - 1) / 4


def test_case_thresholds():
    assert majorant_case(3).threshold == 0.5
    assert majorant_case(4).threshold == THR4
    assert majorant_case(5).threshold == THR5
    with pytest.raises(ValueError):
        majorant_case(6)


@pytest.mark.parametrize("lam", [0.1, 0.5, 1.0])
@pytest.mark.parametrize("p", [0.1, 0.25, 0.45])
def test_majorant_value_at_one_is_the_bound(p, lam):
    cp = ClassParams(p=p, lam=lam)
    for n in (3, 4, 5):
        bound = conjectured_bound(cp, n)
        assert abs(coeff_majorant(n, cp, 1.0) - bound) <= 1e-12 * max(1.0, bound)


def test_majorant_closed_values():
    p, lam = 0.3, 0.7
    cp = ClassParams(p=p, lam=lam)
    assert abs(coeff_majorant(3, cp, 1.0) - (lam + lam**2 * p**2 + 1 / p**2)) <= 1e-13
    g1 = (1 + lam * p**2 + lam**2 * p**4 + lam**3 * p**6) / p**3
    assert abs(coeff_majorant(4, cp, 1.0) - g1) <= 1e-12
    q1 = (1 + lam * p**2 + lam**2 * p**4 + lam**3 * p**6 + lam**4 * p**8) / p**4
    assert abs(coeff_majorant(5, cp, 1.0) - q1) <= 1e-12


def test_majorant_derivative_n3_shape():
    # at p = 1/2, lam = 1 the derivative is 1 - x/2: minimum 1/2 at x = 1
    cp = ClassParams(p=0.5, lam=1.0)
    x = np.linspace(0, 1, 101)
    d = coeff_majorant_deriv(3, cp, x)
    assert np.allclose(d, 1 - 0.5 * x, atol=1e-15)
    res = monotone_check(majorant_case(3), cp, 1001)
    assert res.in_proven_range
    assert abs(res.min_derivative - 0.5) <= 1e-12


def test_majorant_derivative_matches_finite_differences():
    rng = np.random.default_rng(0)
    x = np.linspace(0.05, 0.95, 19)
    h = 1e-6
    for _ in range(20):
        cp = ClassParams(p=float(rng.uniform(0.05, 0.95)), lam=float(rng.uniform(0.1, 1.0)))
        for n in (3, 4, 5):
            fd = (coeff_majorant(n, cp, x + h) - coeff_majorant(n, cp, x - h)) / (2 * h)
            assert np.max(np.abs(fd - coeff_majorant_deriv(n, cp, x))) <= 1e-6 * max(
                1.0, float(np.max(np.abs(fd))))


def test_majorant_equals_closed_form_on_aligned_tuples():
    """With c0 = x real and every later coefficient equal to 1 - x^2, the
    triangle inequality is an equality, so the majorant must reproduce the
    closed coefficient forms term for term."""
    from merobounds.family import closed_form_a3, closed_form_a4, closed_form_a5
    rng = np.random.default_rng(21)
    forms = {3: closed_form_a3, 4: closed_form_a4, 5: closed_form_a5}
    for _ in range(50):
        cp = ClassParams(p=float(rng.uniform(0.05, 0.95)), lam=float(rng.uniform(0.05, 1.0)))
        x = float(rng.uniform(0.0, 1.0))
        cap = 1 - x * x
        for n, form in forms.items():
            aligned = form(cp, x, *([cap] * (n - 2)))
            maj = coeff_majorant(n, cp, x)
            assert abs(aligned - maj) <= 1e-12 * max(1.0, abs(maj))


def test_objective_agrees_with_builders():
    """The lean search objective and the full member builders run the same
    arithmetic, so the coefficient they report is identical."""
    from merobounds.family import build_from_w, build_from_w1
    from merobounds.schur import SchurParams, disc_uniform
    from merobounds.search import _objective

    rng = np.random.default_rng(22)
    for parameterization, builder in ((FROM_W1, build_from_w1), (FROM_W, build_from_w)):
        for _ in range(25):
            cp = ClassParams(p=float(rng.uniform(0.05, 0.9)),
                             lam=float(rng.uniform(0.1, 1.0)))
            n = int(rng.integers(2, 9))
            gammas = disc_uniform(rng, int(rng.integers(1, 7)))
            fn = _objective(cp, n, 32, parameterization)
            member = builder(cp, SchurParams(tuple(gammas)), 32)
            assert fn(gammas) == abs(member.f[n])


@pytest.mark.parametrize("n,thr", [(3, 0.5), (4, THR4), (5, THR5)])
def test_monotone_at_threshold(n, thr):
    for lam in (0.1, 0.4, 0.7, 1.0):
        res = monotone_check(majorant_case(n), ClassParams(p=thr, lam=lam), 1000)
        assert res.in_proven_range
        assert res.min_derivative >= -1e-12


def test_monotone_out_of_range_is_tagged_not_asserted():
    # past the threshold the derivative can go negative at small lambda
    # (at x = 1 it is lam*(1 - 2p + 2*lam*p^2)); the result is tagged, not raised
    res = monotone_check(majorant_case(3), ClassParams(p=0.6, lam=0.1), 1000)
    assert not res.in_proven_range
    assert res.min_derivative < 0
    res2 = monotone_check(majorant_case(3), ClassParams(p=0.6, lam=1.0), 1000)
    assert not res2.in_proven_range
    assert res2.min_derivative > 0  # sufficient, not necessary: still increasing here


def test_admissible_sampling_respects_constraint():
    rng = np.random.default_rng(3)
    coeffs = sample_admissible_coeffs(rng, 5000, 5)
    assert len(coeffs) == 4
    cap = 1 - np.abs(coeffs[0]) ** 2
    assert np.max(np.abs(coeffs[0])) <= 1.0
    for c in coeffs[1:]:
        assert np.max(np.abs(c) - cap) <= 1e-12


def test_verify_bound_argument_cases():
    verdict = verify_bound_argument(ClassParams(p=0.3, lam=0.7), 4, samples=10_000, seed=1)
    assert verdict.status == PASS
    assert verdict.sweep_max_ratio <= 1 + 1e-9

    verdict = verify_bound_argument(ClassParams(p=0.5, lam=1.0), 3, samples=10_000, seed=2)
    assert verdict.status == PASS
    assert abs(verdict.bound - 5.25) <= 1e-12

    verdict = verify_bound_argument(ClassParams(p=0.6, lam=1.0), 3, samples=10_000, seed=3)
    assert verdict.status == OUT_OF_PROVEN_RANGE  # sweep still executed and reported
    assert verdict.sweep_max_ratio > 0
    assert not verdict.in_proven_range


def test_simplex_respects_budget_and_improves():
    calls = 0

    def f(x):
        nonlocal calls
        calls += 1
        return -float(np.sum((x - 1.5) ** 2))

    x, v, used = _simplex_maximize(f, np.zeros(4), 200)
    assert used == calls == 200
    assert v > -1e-3  # near the maximum at (1.5, ..., 1.5)


def test_search_attains_a2_disc_radius():
    cp = ClassParams(p=0.25, lam=0.6)
    r = search_max_coeff(cp, 2, param_count=3, restarts=16, budget=3000, seed=11)
    assert abs(r.best_abs_coeff - (1 / cp.p + cp.lam * cp.p)) <= 1e-6
    # the witness approaches the unimodular constant generator
    assert abs(abs(r.witness.gammas[0]) - 1.0) <= 1e-6


def test_search_within_proven_range_respects_bound():
    r = search_max_coeff(ClassParams(p=0.4, lam=1.0), 3, param_count=4,
                         restarts=16, budget=4000, seed=5)
    assert r.ratio <= 1 + 1e-9
    assert r.membership.status == MEMBER
    assert not r.is_violation
    assert r.evals <= 4000


def test_search_beyond_proven_range_reports_only():
    r = search_max_coeff(ClassParams(p=0.2, lam=1.0), 6, param_count=6,
                         restarts=8, budget=1500, seed=6)
    assert r.n == 6 and r.bound == conjectured_bound(ClassParams(p=0.2, lam=1.0), 6)
    assert not r.is_violation  # expected empirically, logged rather than proved


def test_search_is_deterministic():
    kw = dict(param_count=4, restarts=8, budget=800, seed=42)
    a = search_max_coeff(ClassParams(p=0.3, lam=0.8), 3, **kw)
    b = search_max_coeff(ClassParams(p=0.3, lam=0.8), 3, **kw)
    assert a == b
    assert gammas_key(a.witness.gammas) == gammas_key(b.witness.gammas)


def test_search_product_route():
    r = search_max_coeff(ClassParams(p=0.3, lam=1.0), 3, param_count=3,
                         restarts=8, budget=1200, seed=9, parameterization=FROM_W)
    assert r.parameterization == FROM_W
    assert r.membership.status == MEMBER
    assert r.ratio <= 1 + 1e-9


def test_search_preconditions():
    cp = ClassParams(p=0.3, lam=1.0)
    with pytest.raises(ValueError):
        search_max_coeff(cp, 1, param_count=2, seed=0)
    with pytest.raises(ValueError):
        search_max_coeff(cp, 3, param_count=0, seed=0)
    with pytest.raises(ValueError):
        search_max_coeff(cp, 3, param_count=2, order=3, seed=0)


def test_witness_roundtrip():
    cp = ClassParams(p=0.35, lam=0.9)
    r = search_max_coeff(cp, 3, param_count=3, restarts=8, budget=800, seed=3)
    payload = json.loads(json.dumps(witness_payload(r)))
    assert set(payload) == {"p", "lambda", "n", "parameterization", "gammas", "order", "seed"}
    member = member_from_witness(payload)
    assert abs(abs(member.f[r.n]) - r.best_abs_coeff) <= 1e-12 * max(1.0, r.best_abs_coeff)


def test_violation_flag_requires_membership():
    cp = ClassParams(p=0.3, lam=1.0)
    base = search_max_coeff(cp, 3, param_count=2, restarts=4, budget=400, seed=1)
    bad = SearchReport(n=base.n, cp=base.cp, parameterization=base.parameterization,
                       best_abs_coeff=2 * base.bound, witness=base.witness,
                       bound=base.bound, ratio=2.0, membership=base.membership,
                       evals=base.evals, seed=base.seed, order=base.order,
                       param_count=base.param_count, discarded=0)
    assert bad.is_violation
    not_member = SearchReport(**{**bad.__dict__, "membership": base.membership.__class__(
        sup_u=2.0, margin=-1.0, pole_count=2, status="EXTRA_POLE")})
    assert not not_member.is_violation
