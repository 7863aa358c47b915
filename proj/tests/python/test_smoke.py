"""Smoke tests for the Python bindings: thin checks that the compiled module
loads, the closed forms come through intact, and the simulation pipeline is
deterministic. Heavy statistical verification lives in the C++ suites."""

import json
import math

import levysv


def test_closed_form_law():
    assert levysv.q_star(1.0, 3.0) == 6.0
    assert levysv.blowup_q(1.0, 1.5) == 4.0
    assert math.isinf(levysv.blowup_q(1.0, 3.0))
    assert levysv.stationary_tail_exponent(1.0, 3.0) == 3.0

    low = levysv.theoretical_exponent(1.0, 3.0, 2.0)
    assert low["branch"] == "diffusive"
    assert low["value"] == 1.0
    high = levysv.theoretical_exponent(1.0, 3.0, 8.0)
    assert high["branch"] == "multiscaling"
    assert abs(high["value"] - 3.5) < 1e-12
    gone = levysv.theoretical_exponent(1.0, 1.5, 5.0)
    assert gone["branch"] == "divergent"
    assert gone["value"] == -math.inf

    linear = levysv.theoretical_exponent(3.0, 1.0, 4.0)
    assert linear["branch"] == "diffusive"
    assert linear["value"] == 2.0


def test_flow_spot_values():
    assert abs(levysv.flow(1.0, 1.0, gamma=2.0) - 0.5) < 1e-14
    assert abs(levysv.integrated_flow(1.0, 1.0, gamma=3.0)
               - (math.sqrt(3.0) - 1.0)) < 1e-14
    assert abs(levysv.integrated_flow(1.0, 1.0, gamma=2.0)
               - math.log(2.0)) < 1e-14


def test_laplace_exponent():
    # Reference value computed with 30-digit quadrature.
    got = levysv.laplace_exponent(1.0, drift=1.0, jump_rate=1.0,
                                  x_min=1.0, alpha=2.0)
    assert abs(got - 1.78061606560447973) < 1e-6
    assert levysv.laplace_exponent(0.0) == 0.0


def test_simulation_is_deterministic():
    kwargs = dict(alpha=1.0, gamma=3.0, n_paths=200, burn_in=20.0,
                  seed=20260818, workers=2)
    a = levysv.simulate_increments(**kwargs)
    b = levysv.simulate_increments(**kwargs)
    assert a["lags"] == b["lags"]
    assert a["dx"] == b["dx"]
    assert a["integrated_variance"] == b["integrated_variance"]

    assert len(a["lags"]) == 10  # default dyadic grid
    assert len(a["dx"]) == 10
    assert all(len(col) == 200 for col in a["dx"])
    for r in range(200):
        ivars = [a["integrated_variance"][k][r] for k in range(10)]
        assert ivars == sorted(ivars)

    c = levysv.simulate_increments(**{**kwargs, "seed": 1})
    assert c["dx"] != a["dx"]


def test_stationary_samples_positive():
    vs = levysv.stationary_samples(alpha=1.0, gamma=3.0, n=100,
                                   burn_in=30.0, seed=7)
    assert len(vs) == 100
    assert all(v >= 0.0 for v in vs)
    assert any(v > 0.0 for v in vs)


def test_estimators():
    m = levysv.empirical_moment([1.0, -2.0, 3.0, -4.0], 1.0)
    assert m["value"] == 2.5
    assert m["single_batch"] is True

    n = 20000
    pareto = [(1.0 - (i + 0.5) / n) ** -0.5 for i in range(n)]
    hill = levysv.hill_estimator(pareto)
    assert abs(hill["tail_index"] - 2.0) < 0.2
    assert not hill["degenerate"]

    flag = levysv.divergence_diagnostic([1.0 + (i % 7) * 0.1
                                         for i in range(20000)], 2.0)
    assert flag == "stable"


def test_run_experiment_pipeline():
    config = levysv.default_config()
    config = config.replace("n_paths = 100000", "n_paths = 300")
    config = config.replace("n_tail_samples = 200000",
                            "n_tail_samples = 2000")
    config = config.replace("burn_in = 200", "burn_in = 20")
    report = json.loads(levysv.run_experiment(config))
    assert len(report["config_hash"]) == 16
    assert len(report["scaling"]) == 4
    assert len(report["moments"]) == 40
    assert "hill" in report["stationary_tail"]
    assert report["config"]["experiment.n_paths"] == 300
