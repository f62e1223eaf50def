import numpy as np
import pytest

from merobounds.schur import (
    SchurParams,
    disc_uniform,
    random_schur,
    schur_coeff_inequality_check,
    schur_to_series,
    schur_validate,
)
from merobounds.series import PowerSeries, make_series, ps_add, ps_eval, ps_mul, ps_reciprocal


def test_param_validation():
    SchurParams((0.5, -1.0, 1j))  # all on or inside the closed disc
    with pytest.raises(ValueError):
        SchurParams((1.001,))
    with pytest.raises(ValueError):
        SchurParams(())


def test_constant_generator():
    w = schur_to_series(SchurParams((0.3 - 0.4j,)), 8)
    assert w[0] == 0.3 - 0.4j
    assert np.all(w.coeffs[1:] == 0)


def test_zero_leading_parameter_shifts():
    # gamma_0 = 0 gives w(z) = z * gamma_1
    w = schur_to_series(SchurParams((0.0, 0.25j)), 6)
    assert np.allclose(w.coeffs, [0, 0.25j, 0, 0, 0, 0], atol=1e-15)


def test_two_parameter_coefficients():
    # c0 = gamma_0 and c1 = gamma_1 * (1 - |gamma_0|^2)
    w = schur_to_series(SchurParams((0.5, 0.5)), 8)
    assert w[0] == 0.5
    assert abs(w[1] - 0.375) <= 1e-15


def test_two_parameter_rational_closed_form():
    # the 2-parameter recursion resolves to (g0 + g1 z)/(1 + conj(g0) g1 z)
    g0, g1 = 0.5, 0.5
    w = schur_to_series(SchurParams((g0, g1)), 48)
    rng = np.random.default_rng(1)
    for r in (0.5, 0.9, 0.99):
        z = r * np.exp(2j * np.pi * rng.random(16))
        exact = (g0 + g1 * z) / (1 + np.conj(g0) * g1 * z)
        tail = r**48 / (1 - r)
        assert np.max(np.abs(ps_eval(w, z) - exact)) <= tail + 1e-13


def _mobius_series_oracle(gammas, order):
    """Literal backward recursion through series operations only."""
    f = make_series([gammas[-1]], order)
    one = make_series([1], order)
    for g in gammas[-2::-1]:
        zf = PowerSeries(np.concatenate([[0.0], f.coeffs[:-1]]))
        num = ps_add(make_series([g], order), zf)
        den = ps_add(one, PowerSeries(np.conj(g) * zf.coeffs))
        f = ps_mul(num, ps_reciprocal(den))
    return f


def test_transfer_form_matches_literal_recursion():
    rng = np.random.default_rng(5)
    for _ in range(40):
        m = int(rng.integers(0, 7))
        gammas = tuple(disc_uniform(rng, m + 1))
        fast = schur_to_series(SchurParams(gammas), 24)
        slow = _mobius_series_oracle(gammas, 24)
        assert np.max(np.abs(fast.coeffs - slow.coeffs)) <= 1e-12


def test_validate_examples():
    const = make_series([1], order=16)
    assert schur_validate(const, [0.3, 0.8], 64) == 1.0
    ident = make_series([0, 1], order=16)
    assert abs(schur_validate(ident, [0.9], 64) - 0.9) <= 1e-15
    w = schur_to_series(SchurParams((0.5, 0.5)), 64)
    assert schur_validate(w, [0.5, 0.9, 0.99], 128) <= 1.0 + 0.99**64 / (1 - 0.99)


def test_coeff_inequality_check_examples():
    assert all(schur_coeff_inequality_check(make_series([1, 0, 0])))
    assert all(schur_coeff_inequality_check(make_series([0, 1, 0])))  # boundary case
    verdicts = schur_coeff_inequality_check(make_series([0.9, 0.5, 0.0]))
    assert verdicts[0] is True
    assert verdicts[1] is False  # 0.5 > 1 - 0.81: certified non-Schur data


def test_random_schur_contracts():
    params = random_schur(4, rng_seed=123)
    assert len(params) == 5
    assert all(abs(g) <= 1.0 for g in params.gammas)
    assert random_schur(4, rng_seed=123) == random_schur(4, rng_seed=123)
    assert random_schur(4, rng_seed=123) != random_schur(4, rng_seed=124)
    # area-uniform sampling has E|gamma|^2 = 1/2
    big = random_schur(9999, rng_seed=0)
    mean_sq = float(np.mean(np.abs(big.gammas) ** 2))
    assert abs(mean_sq - 0.5) <= 0.02
    with pytest.raises(ValueError):
        random_schur(-1, rng_seed=0)


# -- invariants ----------------------------------------------------------------

def test_generated_series_satisfy_coefficient_inequality():
    """|c0| <= 1 and |c_n| <= 1 - |c0|^2 with 1e-10 slack, 500 random params."""
    rng = np.random.default_rng(99)
    worst = 0.0
    for _ in range(500):
        m = int(rng.integers(0, 7))
        w = schur_to_series(SchurParams(tuple(disc_uniform(rng, m + 1))), 32)
        c0 = abs(w[0])
        worst = max(worst, c0 - 1.0)
        worst = max(worst, float(np.max(np.abs(w.coeffs[1:]) - (1 - c0 * c0))))
    assert worst <= 1e-10


def test_grid_modulus_bounds():
    rng = np.random.default_rng(100)
    for _ in range(100):
        m = int(rng.integers(0, 7))
        w = schur_to_series(SchurParams(tuple(disc_uniform(rng, m + 1))), 64)
        assert schur_validate(w, [0.9], 128) <= 1.0 + 1e-2
        assert schur_validate(w, [0.5], 128) <= 1.0 + 1e-8


def test_constant_term_is_leading_parameter_exactly():
    rng = np.random.default_rng(101)
    for _ in range(100):
        gammas = tuple(disc_uniform(rng, int(rng.integers(1, 8))))
        w = schur_to_series(SchurParams(gammas), 16)
        assert w[0] == complex(gammas[0])
