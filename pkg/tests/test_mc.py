"""Tests for the Monte Carlo experiment harness."""

import json

import numpy as np
import pytest

from tmatest import (
    ExperimentConfig,
    ModelOrders,
    ValidationError,
    power_curve,
    run_experiment,
)
from tmatest.mc import config_from_dict, load_experiment_file

ORDERS = ModelOrders(1, 1, 2)


def _config(**overrides):
    base = dict(
        design="null-ma",
        orders=ORDERS,
        n=100,
        replications=20,
        phi=(0.5,),
        alphas=(0.05, 0.10),
        base_seed=3,
        grid_max_points=20,
        bridge_replications=2000,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


class TestExperimentConfig:
    def test_design_validation(self):
        with pytest.raises(ValidationError):
            _config(design="bogus")

    def test_replications_validation(self):
        with pytest.raises(ValidationError):
            _config(replications=0)

    def test_n_validation(self):
        with pytest.raises(ValidationError):
            _config(n=40)

    def test_phi_length(self):
        with pytest.raises(ValidationError):
            _config(phi=(0.5, 0.1))

    def test_alternative_needs_psi(self):
        with pytest.raises(ValidationError):
            _config(design="tma-alternative", psi=())


class TestRunExperiment:
    def test_deterministic_and_rates_in_range(self):
        cfg = _config()
        a = run_experiment(cfg)
        b = run_experiment(cfg)
        assert a.rejection_rates == b.rejection_rates
        for rate in a.rejection_rates.values():
            assert 0.0 <= rate <= 1.0
        assert a.failures == 0

    def test_stderr_formula(self):
        rep = run_experiment(_config(replications=25))
        for alpha, rate in rep.rejection_rates.items():
            expected = np.sqrt(rate * (1 - rate) / 25)
            assert rep.mc_stderr[alpha] == pytest.approx(expected)

    def test_local_alternative_design(self):
        cfg = _config(design="local-alternative", h=(-5.0,), r0=0.0, replications=10)
        rep = run_experiment(cfg)
        assert rep.failures == 0

    def test_threads_do_not_change_results(self):
        cfg = _config(replications=12)
        serial = run_experiment(cfg, threads=1)
        parallel = run_experiment(cfg, threads=2)
        assert serial.rejection_rates == parallel.rejection_rates

    def test_failure_policy(self, monkeypatch):
        import tmatest.mc as mc_module
        from tmatest.exceptions import ExperimentError, NumericalError

        original = mc_module._one_replication

        def flaky(config, k, shared):
            if k % 4 == 0:  # 25% failures, way past the 1% cap
                raise NumericalError("synthetic failure")
            return original(config, k, shared)

        monkeypatch.setattr(mc_module, "_one_replication", flaky)
        with pytest.raises(ExperimentError):
            run_experiment(_config(replications=20))


class TestPowerCurve:
    def test_orders_match_configs(self):
        configs = [_config(replications=8), _config(replications=8, base_seed=4)]
        reports = power_curve(configs)
        assert [r.config.base_seed for r in reports] == [3, 4]

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            power_curve([])


class TestConfigFile:
    def test_round_trip(self, tmp_path):
        payload = {
            "replications": 8,
            "alphas": [0.05, 0.10],
            "base_seed": 9,
            "grid_max_points": 15,
            "bridge_replications": 1500,
            "experiments": [
                {"design": "null-ma", "p": 1, "q": 1, "d": 2, "n": 100, "phi": [0.5]},
                {
                    "design": "tma-alternative",
                    "p": 1,
                    "q": 1,
                    "d": 2,
                    "n": 100,
                    "phi": [0.5],
                    "psi": [-0.5],
                    "r0": 0.0,
                },
            ],
        }
        path = tmp_path / "exp.json"
        path.write_text(json.dumps(payload))
        configs = load_experiment_file(path)
        assert len(configs) == 2
        assert configs[0].design == "null-ma"
        assert configs[0].replications == 8
        assert configs[1].psi == (-0.5,)
        assert configs[1].base_seed == 9

    def test_unknown_key_rejected(self):
        with pytest.raises(ValidationError):
            config_from_dict(
                {"design": "null-ma", "p": 1, "q": 1, "d": 2, "n": 100,
                 "replications": 5, "phi": [0.5], "bogus": 1}
            )

    def test_missing_key_rejected(self):
        with pytest.raises(ValidationError):
            config_from_dict({"design": "null-ma", "p": 1, "q": 1, "d": 2})

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ValidationError):
            load_experiment_file(path)
