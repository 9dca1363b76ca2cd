import math

import pytest

import bernwf


GENIC = '{"lambda0": 1.0, "selection": {"kappa": 2, "beta": [1.0], "p": [[0.0, 1.0, 1.0]]}}'
THETA = '{"lambda0": 1.0, "theta_a": 0.3, "theta_A": 0.5}'


def test_model_roundtrip():
    params = bernwf.ModelParams.from_json(GENIC)
    again = bernwf.ModelParams.from_json(params.to_json())
    assert again.to_json() == params.to_json()
    assert not params.has_mutations
    assert bernwf.ModelParams.from_json(THETA).has_mutations


def test_rates_and_assumption():
    params = bernwf.ModelParams.from_json(GENIC)
    assert bernwf.lambda_rate(params, 5, 2) == 1.0
    assert bernwf.lambda_rate(params, 5, 3) == 0.0
    assert bernwf.total_dual_rate(params, 4) == pytest.approx(6.0 + 4.0)
    report = bernwf.check_assumption(params)
    assert report["verdict"]
    assert math.isinf(report["c"])


def test_d_poly_genic():
    params = bernwf.ModelParams.from_json(GENIC)
    for x in (0.0, 0.3, 1.0):
        assert params.d_poly(x) == pytest.approx(x * (1 - x), abs=1e-13)


def test_operators_and_functional():
    assert bernwf.coalesce([0.1, 0.5, 0.9], 2) == pytest.approx([0.1, 0.9])
    assert bernwf.mut_a([0.1, 0.5, 0.9], 1) == pytest.approx([0.5, 0.9])
    assert bernwf.env_a([0.0, 1.0], 1) == pytest.approx([0.0, 1.0, 1.0])
    assert bernwf.bernstein_eval(0.5, [0.0, 0.0, 1.0]) == pytest.approx(0.25)
    params = bernwf.ModelParams.from_json(GENIC)
    assert bernwf.select_branch([0.0, 1.0], 2, params) == pytest.approx([0.0, 1.0, 1.0])


def test_distributions():
    assert bernwf.binom_pmf(2, 0.5) == pytest.approx([0.25, 0.5, 0.25])
    assert bernwf.hyp_pmf(4, 2, 2)[1] == pytest.approx(2 / 3)
    assert bernwf.hp_pmf(4, 1, 2) == pytest.approx([0.0, 1 / 6, 5 / 6, 0.0])
    with pytest.raises(ValueError):
        bernwf.hp_pmf(14, 3, 5)


def test_duality_gap_t0_and_generator():
    params = bernwf.ModelParams.from_json(GENIC)
    gap = bernwf.duality_gap(params, 0.4, [0.0, 1.0], 0.0, reps=100, seed=3)
    assert gap["z"] == 0.0
    assert gap["lhs"]["mean"] == gap["rhs"]["mean"]
    assert bernwf.generator_residual(params, 0.5, [0.2, 0.8, 0.4]) < 1e-10


def test_dual_simulation_absorbs():
    params = bernwf.ModelParams.from_json(THETA)
    out = bernwf.simulate_dual(params, [0.0, 1.0], 1e9, seed=5)
    assert out["absorbed"]
    assert out["value"] in (0.0, 1.0)


def test_stationary_moments_match_beta_mean():
    params = bernwf.ModelParams.from_json(THETA)
    rho = bernwf.stationary_moments(params, 1, reps=4000, seed=9)
    mean, se = rho[1]
    assert abs(mean - 0.3 / 0.8) < 4 * se
    res = bernwf.recursion_residual(params, 1, bernwf.stationary_moments(params, 2, reps=4000, seed=10))
    assert res["ci_scaled"] < 4.0


def test_forward_moment_t0_exact():
    params = bernwf.ModelParams.from_json(GENIC)
    est = bernwf.forward_moment(params, 0.3, 0.0, 2, reps=50, seed=2)
    assert est["mean"] == pytest.approx(0.09)
