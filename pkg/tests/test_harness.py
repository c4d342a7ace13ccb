import json
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from dyckfp.harness.cli import main
from dyckfp.harness.config import ExperimentConfig, TestResult, results_to_json
from dyckfp.harness.experiments import (
    baseline_uniform,
    compare_123_location,
    mc_fp_mean_231,
    mc_fp_profile_123,
    mc_joint_231,
    run_enumeration_suite,
    trial_rng,
)
from dyckfp.harness.stats import (
    chi_squared_uniform_pvalue,
    ks_statistic,
    mean_with_se,
    proportion_with_se,
)


class TestKS:
    def test_sample_vs_itself(self):
        xs = [0.3, 1.2, 5.0, 2.2]
        assert ks_statistic(xs, xs) == 0.0

    def test_disjoint_supports(self):
        assert ks_statistic([0.0] * 5, np.ones(7)) == 1.0

    def test_interleaved_thirds(self):
        assert ks_statistic([1, 2, 3], [1.5, 2.5, 3.5]) == pytest.approx(1 / 3)

    def test_against_callable_cdf(self):
        xs = np.linspace(0.01, 0.99, 99)
        d = ks_statistic(xs, lambda x: np.asarray(x))
        assert d < 0.02

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            ks_statistic([], [1.0])
        with pytest.raises(ValueError):
            ks_statistic([1.0], [])


class TestChiSquared:
    def test_uniform_counts(self):
        assert chi_squared_uniform_pvalue([100, 100, 100]) == pytest.approx(1.0)

    def test_skewed_counts(self):
        assert chi_squared_uniform_pvalue([1000, 10, 10]) < 1e-6


class TestSeeding:
    def test_replicates_disjoint_and_deterministic(self):
        a0 = trial_rng(5, 0).integers(0, 2 ** 32, 8)
        a1 = trial_rng(5, 1).integers(0, 2 ** 32, 8)
        b0 = trial_rng(5, 0).integers(0, 2 ** 32, 8)
        assert np.array_equal(a0, b0)
        assert not np.array_equal(a0, a1)

    def test_jobs_do_not_change_results(self):
        r1 = mc_fp_mean_231(200, 40, seed=77, jobs=1)
        r2 = mc_fp_mean_231(200, 40, seed=77, jobs=3)
        assert np.array_equal(r1.counts, r2.counts)


class TestEnumerationSuite:
    def test_all_exact_identities_hold(self):
        results = run_enumeration_suite(7)
        assert results and all(r.passed for r in results)

    def test_known_fractions(self):
        results = {r.name: r for r in run_enumeration_suite(7)}
        r6 = results["lower_fixed_point_fraction_n6"]
        assert r6.value == Fraction(42, 132)
        r7 = results["lower_fixed_point_fraction_n7"]
        assert r7.value == Fraction(107, 429)
        assert r7.threshold == Fraction(132 - 25, 429)

    def test_values_exact_types(self):
        for r in run_enumeration_suite(5):
            assert not isinstance(r.value, float)

    def test_cap(self):
        with pytest.raises(ValueError):
            run_enumeration_suite(12)


class TestExperimentsSmall:
    def test_fp_mean_small_n_matches_enumeration(self):
        # exact mean over all C_8 permutations, versus a long Monte Carlo run
        from dyckfp.dyck import enumerate_paths
        from dyckfp.fixedpoints import fixed_points
        from dyckfp.permutations import to_231

        n = 8
        total = 0
        count = 0
        for path in enumerate_paths(n):
            total += fixed_points(to_231(path)).size
            count += 1
        exact_mean = total / count
        run = mc_fp_mean_231(n, 4000, seed=3)
        se = run.scaled_se * n ** 0.25
        assert abs(run.scaled_mean * n ** 0.25 - exact_mean) < 4 * se

    def test_profile_rates_small_n_match_enumeration(self):
        n = 6
        run = mc_fp_profile_123(n, 6000, seed=4)
        p_a, se_a = proportion_with_se(int(run.lower_flags.sum()), run.trials)
        assert abs(p_a - 42 / 132) < 4 * se_a

    def test_joint_result_shapes(self):
        run = mc_joint_231(400, 30, 0.2, 0.8, seed=5, K=1.0, alpha=0.3)
        assert run.theta_scaled.shape == (30,)
        assert run.functional.shape == (30,)
        assert run.theta_almost_scaled.shape == (30,)
        assert 0.0 <= run.exceed_fraction() <= 1.0

    def test_joint_exceed_monotone_in_epsilon(self):
        run = mc_joint_231(400, 40, 0.2, 0.8, seed=6)
        diff = np.abs(run.theta_scaled - run.functional)
        frac_03 = float(np.mean(~(diff <= 0.3)))
        frac_06 = float(np.mean(~(diff <= 0.6)))
        assert frac_06 <= frac_03

    def test_baseline_n1(self):
        run = baseline_uniform(1, 50, seed=7)
        assert run.mean == 1.0 and run.histogram[1] == 50

    def test_location_gate_inconclusive_on_few_trials(self):
        results = compare_123_location(100, 10, seed=8)
        assert results[0].passed is None


class TestOutputs(object):
    def test_results_json_deterministic(self):
        cfg = ExperimentConfig(experiment="x", n=10, trials=2, seed=1)
        rs = [TestResult("t", Fraction(1, 3), 0.5, True, 2)]
        assert results_to_json(rs, cfg) == results_to_json(rs, cfg)
        payload = json.loads(results_to_json(rs, cfg))
        assert payload["results"][0]["value"] == "1/3"

    def test_cli_byte_identical_reruns(self, tmp_path, monkeypatch):
        monkeypatch.setenv("DYCKFP_OUTDIR", str(tmp_path / "a"))
        assert main(["compare", "--experiment", "baseline", "--n", "50",
                     "--trials", "200", "--seed", "9"]) == 0
        monkeypatch.setenv("DYCKFP_OUTDIR", str(tmp_path / "b"))
        assert main(["compare", "--experiment", "baseline", "--n", "50",
                     "--trials", "200", "--seed", "9"]) == 0
        csv_a = (tmp_path / "a" / "compare_baseline_n50.csv").read_bytes()
        csv_b = (tmp_path / "b" / "compare_baseline_n50.csv").read_bytes()
        assert csv_a == csv_b
        json_a = (tmp_path / "a" / "compare_baseline_n50.json").read_bytes()
        json_b = (tmp_path / "b" / "compare_baseline_n50.json").read_bytes()
        assert json_a == json_b

    def test_compare_json_format_rows(self, tmp_path, monkeypatch):
        monkeypatch.setenv("DYCKFP_OUTDIR", str(tmp_path))
        assert main(["compare", "--experiment", "baseline", "--n", "40",
                     "--trials", "50", "--seed", "13", "--format", "json"]) == 0
        rows = json.loads((tmp_path / "compare_baseline_n40_rows.json").read_text())
        assert rows["header"] == ["fixed_points", "trials"]
        assert sum(r[1] for r in rows["rows"]) == 50

    def test_cli_jobs_flag_does_not_change_output(self, tmp_path, monkeypatch):
        monkeypatch.setenv("DYCKFP_OUTDIR", str(tmp_path / "j1"))
        main(["compare", "--experiment", "profile123", "--n", "60",
              "--trials", "120", "--seed", "11"])
        monkeypatch.setenv("DYCKFP_OUTDIR", str(tmp_path / "j2"))
        main(["compare", "--experiment", "profile123", "--n", "60",
              "--trials", "120", "--seed", "11", "--jobs", "2"])
        a = (tmp_path / "j1" / "compare_profile123_n60.csv").read_text()
        b = (tmp_path / "j2" / "compare_profile123_n60.csv").read_text()
        # the config echo records the jobs flag; data rows must be identical
        assert a.splitlines()[2:] == b.splitlines()[2:]


class TestCLI:
    def test_enumerate_verify_exit_zero(self, tmp_path, monkeypatch):
        monkeypatch.setenv("DYCKFP_OUTDIR", str(tmp_path))
        assert main(["enumerate-verify", "--n-max", "4"]) == 0
        payload = json.loads((tmp_path / "enumerate_verify_nmax4.json").read_text())
        assert payload["all_passed"] is True
        assert payload["config"]["experiment"] == "enumerate-verify"

    def test_sample_classes(self, capsys):
        for klass in ("dyck", "231", "123", "321", "uniform"):
            assert main(["sample", "--class", klass, "--n", "9",
                         "--count", "2", "--seed", "1"]) == 0
            out = capsys.readouterr().out.strip().splitlines()
            assert len(out) == 2

    def test_sample_dyck_lines_are_valid(self, capsys):
        main(["sample", "--class", "dyck", "--n", "12", "--count", "4", "--seed", "3"])
        from dyckfp.dyck import DyckPath

        for line in capsys.readouterr().out.strip().splitlines():
            assert DyckPath.from_text(line).n == 12

    def test_fp_stats_writes_csv(self, tmp_path, monkeypatch):
        monkeypatch.setenv("DYCKFP_OUTDIR", str(tmp_path))
        assert main(["fp-stats", "--class", "231", "--n", "100", "--trials", "20",
                     "--a", "0.1", "--b", "0.9", "--seed", "2"]) == 0
        lines = (tmp_path / "fp_stats_231_n100.csv").read_text().splitlines()
        assert lines[2] == "trial,count"
        assert len(lines) == 23

    def test_fp_stats_json_format(self, tmp_path, monkeypatch):
        monkeypatch.setenv("DYCKFP_OUTDIR", str(tmp_path))
        assert main(["fp-stats", "--class", "uniform", "--n", "50", "--trials", "10",
                     "--seed", "2", "--format", "json"]) == 0
        payload = json.loads((tmp_path / "fp_stats_uniform_n50.json").read_text())
        assert payload["trials"] == 10 and len(payload["counts"]) == 10

    def test_excursion_command(self, tmp_path, monkeypatch):
        monkeypatch.setenv("DYCKFP_OUTDIR", str(tmp_path))
        assert main(["excursion", "--grid", "64", "--trials", "16", "--seed", "5"]) == 0
        lines = (tmp_path / "excursion_g64.csv").read_text().splitlines()
        assert lines[2] == "trial,midpoint,functional"
        assert len(lines) == 19

    def test_usage_error_exit_two(self):
        with pytest.raises(SystemExit) as err:
            main(["compare", "--experiment", "nope", "--n", "5", "--trials", "1"])
        assert err.value.code == 2

    def test_invalid_window_exit_two(self):
        with pytest.raises(SystemExit) as err:
            main(["compare", "--experiment", "joint231", "--n", "50", "--trials", "2",
                  "--a", "0.9", "--b", "0.1"])
        assert err.value.code == 2

    def test_console_script_installed(self):
        proc = subprocess.run(
            [sys.executable, "-m", "dyckfp.harness.cli", "--version"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "dyckfp" in proc.stdout
