import json
import math

import pytest

from adafd import (
    ExperimentConfig,
    InsufficientData,
    TraceRecord,
    ValidationError,
    emit_csv,
    emit_plot,
    estimate_rate,
    rank_trace_files,
    read_csv,
    run_experiment,
)
from adafd.cli import main, parse_config_file
from adafd.trace import records_equal


def _synthetic_trace(values, taus=None):
    taus = taus or [0.0] * len(values)
    return [
        TraceRecord(iter=i + 1, evals=3 * (i + 1), f_current=v, f_best=min(values[: i + 1]),
                    grad_norm_approx=1.0, delta=0.1, C=1.0, tau=taus[i],
                    step_status="accepted")
        for i, v in enumerate(values)
    ]


class TestCsv:
    def test_single_record_two_lines(self, tmp_path):
        path = tmp_path / "one.csv"
        emit_csv(_synthetic_trace([1.5]), path)
        assert path.read_text().count("\n") == 2

    def test_reemission_is_byte_identical(self, tmp_path):
        trace = _synthetic_trace([3.0, 1.0, 0.5])
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        emit_csv(trace, p1)
        emit_csv(trace, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_round_trip_exact_including_awkward_floats(self, tmp_path):
        trace = [
            TraceRecord(iter=1, evals=4, f_current=0.1 + 0.2, f_best=1e-300,
                        grad_norm_approx=float("nan"), delta=2.0**-52, C=1e308,
                        tau=0.0, step_status="null"),
            TraceRecord(iter=2, evals=8, f_current=-1.0 / 3.0, f_best=-1.0 / 3.0,
                        grad_norm_approx=5.5, delta=0.1, C=float("nan"),
                        tau=math.pi, step_status="accepted"),
        ]
        path = tmp_path / "t.csv"
        emit_csv(trace, path)
        loaded = read_csv(path)
        assert len(loaded) == 2
        assert all(records_equal(a, b) for a, b in zip(trace, loaded))

    def test_empty_trace_refused(self, tmp_path):
        with pytest.raises(ValueError):
            emit_csv([], tmp_path / "x.csv")

    def test_malformed_file_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("not,a,trace\n1,2,3\n")
        with pytest.raises(ValueError):
            read_csv(path)


class TestPlot:
    def test_two_traces_two_curves_two_legend_entries(self, tmp_path):
        path = tmp_path / "plot.svg"
        emit_plot({"alpha": _synthetic_trace([4.0, 2.0]),
                   "beta": _synthetic_trace([3.0, 1.0])}, path)
        svg = path.read_text()
        assert svg.count("<polyline") == 2
        assert svg.count('class="legend"') == 2
        assert "alpha" in svg and "beta" in svg

    def test_log_axis_when_all_positive(self, tmp_path):
        path = tmp_path / "log.svg"
        emit_plot({"run": _synthetic_trace([1.0, 0.1, 0.01])}, path)
        assert "log scale" in path.read_text()

    def test_linear_axis_when_zero_present(self, tmp_path):
        path = tmp_path / "lin.svg"
        emit_plot({"run": _synthetic_trace([1.0, 0.0])}, path)
        assert "log scale" not in path.read_text()

    def test_single_point_trace_renders(self, tmp_path):
        path = tmp_path / "dot.svg"
        emit_plot({"run": _synthetic_trace([2.0])}, path)
        svg = path.read_text()
        assert "<circle" in svg and "<polyline" in svg


class TestRateEstimate:
    def test_geometric_sequence_is_linear(self):
        trace = _synthetic_trace([0.5**k for k in range(1, 61)])
        est = estimate_rate(trace, 0.0)
        assert est.kind == "linear"
        assert est.factor == pytest.approx(0.5, abs=0.01)

    def test_power_law_is_sublinear(self):
        trace = _synthetic_trace([float(k) ** -2 for k in range(1, 61)])
        est = estimate_rate(trace, 0.0)
        assert est.kind == "sublinear"
        assert est.exponent == pytest.approx(-2.0, abs=0.1)

    def test_flat_tail_is_none(self):
        trace = _synthetic_trace([1.0 + 0.01 * ((-1) ** k) for k in range(40)])
        assert estimate_rate(trace, 0.0).kind == "none"

    def test_insufficient_data(self):
        with pytest.raises(InsufficientData):
            estimate_rate(_synthetic_trace([1.0] * 10), 0.0)
        # records at or below the target do not qualify
        with pytest.raises(InsufficientData):
            estimate_rate(_synthetic_trace([0.0] * 40), 0.0)


class TestRunExperiment:
    def test_comparison_report_and_disk_ranking_agree(self, tmp_path):
        cfg = ExperimentConfig(
            family="least_squares", n=6, solvers=["dfc-cendif", "nelder-mead",
                                                  "imfil-fordif"],
            budget_multiplier=60, instance_seed=7, run_seed=1,
            output_dir=tmp_path,
        )
        report = run_experiment(cfg)
        assert set(report.results) == {"dfc-cendif", "nelder-mead", "imfil-fordif"}
        paths = {sid: res.trace_path for sid, res in report.results.items()}
        assert rank_trace_files(paths) == report.ranking
        # identical budget for every solver; overshoot at most one call batch
        for res in report.results.values():
            assert res.evals <= cfg.budget + 2 * cfg.n
        for rep in report.reports.values():
            evals = [r.evals for r in rep.trace]
            assert all(b > a for a, b in zip(evals, evals[1:]))
            fb = [r.f_best for r in rep.trace]
            assert all(b <= a for a, b in zip(fb, fb[1:]))
        manifest = json.loads((tmp_path / "report.json").read_text())["manifest"]
        assert manifest["budget"] == 360
        assert "solvers" in manifest and "dfc-cendif" in manifest["solvers"]

    def test_zero_budget_multiplier_rejected(self):
        with pytest.raises(ValidationError):
            ExperimentConfig(family="least_squares", n=4, solvers=["dfc-fordif"],
                             budget_multiplier=0)

    def test_unknown_solver_rejected(self):
        with pytest.raises(ValidationError):
            ExperimentConfig(family="least_squares", n=4, solvers=["bfgs"])

    def test_rg_on_rosenbrock_rejected_for_missing_constant(self, tmp_path):
        cfg = ExperimentConfig(family="rosenbrock", n=4, solvers=["rg"],
                               budget_multiplier=10, output_dir=tmp_path)
        with pytest.raises(ValidationError):
            run_experiment(cfg)

    def test_rosenbrock_both_presets(self, tmp_path):
        for preset in ("zeros", "halves"):
            out = tmp_path / preset
            cfg = ExperimentConfig(family="rosenbrock", n=2,
                                   solvers=["dfb-fordif", "nelder-mead"],
                                   budget_multiplier=100, run_seed=3,
                                   initial_point=preset, output_dir=out)
            report = run_experiment(cfg)
            assert (out / "report.json").exists()
            assert len(report.ranking) == 2
            for sid, final in report.ranking:
                assert final == report.results[sid].final_f_best

    def test_noise_makes_runs_reproducible_per_seed(self, tmp_path):
        cfg = dict(family="image_restoration", n=5, solvers=["dfc-fordif"],
                   budget_multiplier=40, noise_level=1e-4, instance_seed=2,
                   run_seed=9)
        r1 = run_experiment(ExperimentConfig(**cfg, output_dir=tmp_path / "a"))
        r2 = run_experiment(ExperimentConfig(**cfg, output_dir=tmp_path / "b"))
        assert r1.ranking == r2.ranking
        t1 = (tmp_path / "a" / "trace_dfc-fordif.csv").read_bytes()
        t2 = (tmp_path / "b" / "trace_dfc-fordif.csv").read_bytes()
        assert t1 == t2


class TestCli:
    def test_run_plot_rate_pipeline(self, tmp_path, capsys):
        out = tmp_path / "exp"
        rc = main(["run", "--problem", "leastsquares", "--n", "6",
                   "--noise", "0", "--solver", "dfc-cendif,nelder-mead",
                   "--budget-mult", "80", "--seed", "4", "--x0", "zeros",
                   "--out", str(out)])
        assert rc == 0
        assert (out / "report.json").exists()
        trace = out / "trace_dfc-cendif.csv"
        svg = tmp_path / "fig.svg"
        assert main(["plot", "--traces", str(trace), "--out", str(svg)]) == 0
        assert svg.exists()
        rc = main(["rate", "--trace", str(trace), "--target", "0"])
        captured = capsys.readouterr()
        assert rc == 0
        assert "rate:" in captured.out

    def test_exit_codes(self, tmp_path):
        # validation problems -> 1
        assert main(["run", "--problem", "leastsquares", "--n", "4",
                     "--solver", "nosuch", "--out", str(tmp_path)]) == 1
        assert main(["run", "--problem", "leastsquares"]) == 1  # missing flags
        assert main(["nosuchcommand"]) == 1
        # i/o problems -> 2
        assert main(["plot", "--traces", str(tmp_path / "missing.csv"),
                     "--out", str(tmp_path / "o.svg")]) == 2
        # rate on too-short trace -> 1
        short = tmp_path / "short.csv"
        emit_csv(_synthetic_trace([1.0, 0.5]), short)
        assert main(["rate", "--trace", str(short), "--target", "0"]) == 1

    def test_config_file_with_flag_override(self, tmp_path):
        cfg_file = tmp_path / "exp.cfg"
        cfg_file.write_text(
            "# experiment recipe\n"
            "problem = leastsquares\n"
            "n = 5\n"
            "solver = dfc-fordif\n"
            "budget_mult = 40\n"
            "seed = 2\n"
            f"out = {tmp_path / 'from_file'}\n"
        )
        assert parse_config_file(cfg_file)["n"] == "5"
        rc = main(["run", "--config", str(cfg_file), "--out",
                   str(tmp_path / "overridden")])
        assert rc == 0
        assert (tmp_path / "overridden" / "report.json").exists()
        assert not (tmp_path / "from_file").exists()

    def test_config_file_unknown_key_rejected(self, tmp_path):
        bad = tmp_path / "bad.cfg"
        bad.write_text("frobnicate = 1\n")
        assert main(["run", "--config", str(bad)]) == 1

    def test_x0_from_file(self, tmp_path):
        x0 = tmp_path / "x0.txt"
        x0.write_text("0.5, 0.5, 0.5\n")
        rc = main(["run", "--problem", "imagerestore", "--n", "3",
                   "--solver", "dfb-cendif", "--budget-mult", "50",
                   "--x0", str(x0), "--out", str(tmp_path / "o")])
        assert rc == 0
