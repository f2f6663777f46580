"""End-to-end tests of the convergence studies."""

import json

import numpy as np
import pytest

from experiments import EXPERIMENTS, OdeExperiment, run_experiment
from pfbounds.core import DomainError, ExperimentStageError
from pfbounds.utils import RunConfig, load_config


@pytest.fixture(scope="module")
def config(repo_root):
    return load_config(str(repo_root / "config.yaml"))


def run(config, experiment, tmp_path, **overrides):
    run_config = RunConfig.from_config(config, experiment, results_dir=tmp_path, **overrides)
    return run_experiment(run_config, verbose=False)


class TestRegistry:
    def test_every_experiment_has_a_config(self, config):
        assert set(EXPERIMENTS) == set(config["experiments"])

    def test_unknown_experiment(self, config):
        with pytest.raises(ValueError):
            RunConfig.from_config(config, "bvp3d")


class TestOdeStudy:
    def test_explicit_euler_orders(self, config, tmp_path):
        table = run(config, "ode", tmp_path)
        assert [row.level for row in table.rows] == list(range(0, 10))
        assert table.reference.p_f == pytest.approx(1.125e-4, rel=1e-2)
        assert table.orders.s_est == pytest.approx(1.0, abs=0.15)
        assert table.orders.s_est_mlfp == pytest.approx(1.0, abs=0.15)
        assert table.orders.s_est_bound == pytest.approx(1.0, abs=0.3)

    def test_crank_nicolson_orders(self, config, tmp_path):
        table = run(config, "ode", tmp_path, scheme="crank-nicolson", levels=(2, 9))
        assert table.orders.s_est == pytest.approx(2.0, abs=0.2)
        assert table.orders.s_est_mlfp == pytest.approx(2.0, abs=0.2)

    def test_bound_dominates_error(self, config, tmp_path):
        table = run(config, "ode", tmp_path)
        for row in table.rows:
            if row.level >= 4:
                assert row.bound_abs >= abs(row.p_fh - table.reference.p_f)

    def test_coarse_level_has_no_bound(self, config, tmp_path):
        table = run(config, "ode", tmp_path, levels=(0, 1))
        assert np.isnan(table.rows[0].bound_abs)

    def test_exact_reference_form(self, config, tmp_path):
        table = run(config, "ode", tmp_path, levels=(5, 6))
        # The failure domain is a half-line, so FORM is exact
        assert table.reference.p_form == pytest.approx(table.reference.p_f, rel=1e-6)
        assert table.reference.beta == pytest.approx(np.log(40.0), rel=1e-8)

    def test_symmetric_difference_diagnostic(self, config, tmp_path):
        table = run(config, "ode", tmp_path, levels=(3, 4), sym_diff_samples=100_000, seed=1)
        for row in table.rows:
            assert row.p_sym_diff is not None
            assert row.p_sym_diff >= 0.0

    def test_csv_is_reproducible(self, config, tmp_path):
        run(config, "ode", tmp_path, levels=(2, 6), out=tmp_path / "a.csv")
        run(config, "ode", tmp_path, levels=(2, 6), out=tmp_path / "b.csv")
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_default_report_and_checkpoint(self, config, tmp_path):
        run(config, "ode", tmp_path, levels=(2, 4))
        assert (tmp_path / "ode" / "table.csv").exists()
        with open(tmp_path / "ode" / "checkpoint.json") as f:
            checkpoint = json.load(f)
        assert checkpoint["experiment"] == "ode"
        assert [row["level"] for row in checkpoint["rows"]] == [2, 3, 4]

    def test_json_report(self, config, tmp_path):
        out = tmp_path / "table.json"
        run(config, "ode", tmp_path, levels=(3, 6), tail=4, format="json", out=out)
        with open(out) as f:
            data = json.load(f)
        assert data["orders"]["tail"] == 4
        assert data["config"]["scheme"] == "explicit-euler"
        assert set(data["reference"]) >= {"p_f", "p_form", "beta"}


class TestBvp2dStudy:
    def test_linear_elements(self, config, tmp_path):
        table = run(config, "bvp2d", tmp_path)
        assert table.reference.p_f == pytest.approx(1.71e-4, rel=1e-2)
        assert table.reference.p_form == pytest.approx(2.08e-4, rel=2e-2)
        assert table.orders.s_est == pytest.approx(2.0, abs=0.3)
        assert table.orders.s_est_form == pytest.approx(2.0, abs=0.3)
        assert table.orders.s_est_mlfp == pytest.approx(2.0, abs=0.3)
        assert table.orders.s_est_bound == pytest.approx(2.0, abs=0.3)

    def test_quadratic_elements(self, config, tmp_path):
        table = run(config, "bvp2d", tmp_path, degree=2, levels=(1, 7))
        assert table.orders.s_est == pytest.approx(3.0, abs=0.4)
        assert table.orders.s_est_form == pytest.approx(3.0, abs=0.4)
        assert table.orders.s_est_bound == pytest.approx(3.0, abs=0.3)

    def test_mlfp_order_skips_tolerance_floor(self, config, tmp_path):
        out = tmp_path / "table.json"
        table = run(config, "bvp2d", tmp_path, degree=2, levels=(1, 9), format="json", out=out)
        assert table.orders.mlfp_floor == pytest.approx(1e-6)
        s_mlfp = table.orders.s_est_mlfp
        assert np.isnan(s_mlfp) or s_mlfp == pytest.approx(3.0, abs=0.6)
        with open(out) as f:
            assert json.load(f)["orders"]["mlfp_floor"] == pytest.approx(1e-6)

    def test_form_overestimates(self, config, tmp_path):
        table = run(config, "bvp2d", tmp_path, levels=(3, 7))
        for row in table.rows:
            assert row.p_form_h >= row.p_fh
            assert row.form_converged


class _FailingOde(OdeExperiment):
    def build_level(self, level):
        if level == 3:
            raise DomainError("broken mesh")
        return super().build_level(level)


class TestStageErrors:
    def test_level_and_stage_are_reported(self, config, tmp_path):
        run_config = RunConfig.from_config(config, "ode", results_dir=tmp_path, levels=(2, 4))
        experiment = _FailingOde(run_config, verbose=False)
        with pytest.raises(ExperimentStageError) as info:
            experiment.run()
        assert info.value.level == 3
        assert info.value.stage == "build"
        assert isinstance(info.value.cause, DomainError)
        assert "level=3 stage=build" in str(info.value)
        # Rows before the failure were checkpointed
        with open(tmp_path / "ode" / "checkpoint.json") as f:
            assert len(json.load(f)["rows"]) == 1

    def test_reference_failure(self, config, tmp_path):
        with pytest.raises(ExperimentStageError, match="level=reference stage=build"):
            run(config, "bvp2d", tmp_path, x_hat=1.5)


@pytest.mark.slow
def test_highdim_smoke(config, tmp_path):
    table = run(
        config, "highdim10", tmp_path,
        levels=(1, 2), reference_level=3, samples=500, replicates=2, tail=2,
    )
    assert len(table.rows) == 2
    assert table.reference.replicate_cov >= 0.0
    assert table.reference.mean_cov == pytest.approx(table.reference.replicate_cov / np.sqrt(2))
    assert all(0.0 < row.p_fh < 1.0 for row in table.rows)


@pytest.fixture(scope="module")
def highdim10_table(config, tmp_path_factory):
    return run(config, "highdim10", tmp_path_factory.mktemp("highdim10"), levels=(7, 11), replicates=20)


@pytest.fixture(scope="module")
def highdim50_table(config, tmp_path_factory):
    return run(config, "highdim50", tmp_path_factory.mktemp("highdim50"), levels=(7, 11), replicates=20)


@pytest.mark.slow
class TestHighDimStudy:
    """Acceptance runs with 20 replicates; probability tolerances are 15%."""

    def test_ten_terms_reference(self, highdim10_table):
        reference = highdim10_table.reference
        assert reference.p_f == pytest.approx(3.38e-4, rel=0.15)
        assert reference.p_form == pytest.approx(4.66e-4, rel=0.1)
        assert reference.mean_cov <= 0.03

    def test_ten_terms_orders(self, highdim10_table):
        orders = highdim10_table.orders
        assert orders.tail == 5
        assert orders.s_est == pytest.approx(1.0, abs=0.3)
        assert orders.s_est_form == pytest.approx(1.0, abs=0.3)
        assert orders.s_est_bound == pytest.approx(1.0, abs=0.3)

    def test_fifty_terms_reference(self, highdim50_table):
        reference = highdim50_table.reference
        assert reference.p_f == pytest.approx(7.18e-5, rel=0.15)
        assert reference.p_form == pytest.approx(1.52e-4, rel=0.15)

    def test_fifty_terms_orders(self, highdim50_table):
        orders = highdim50_table.orders
        assert orders.tail == 4
        assert orders.s_est == pytest.approx(1.0, abs=0.3)
        assert orders.s_est_form == pytest.approx(1.0, abs=0.3)
        assert orders.s_est_bound == pytest.approx(1.0, abs=0.3)

    @pytest.mark.parametrize("name", ["highdim10_table", "highdim50_table"])
    def test_form_overestimates(self, name, request):
        table = request.getfixturevalue(name)
        for row in table.rows:
            assert row.p_form_h >= row.p_fh
