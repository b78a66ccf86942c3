import json
from pathlib import Path

import numpy as np
import pytest

from barstress import cli, core, ingest, spectral, synth

ALPHA = core.DEFAULT_BANDS["alpha"]
BETA = core.DEFAULT_BANDS["beta"]


def run(*argv):
    return cli.main(list(argv))


@pytest.fixture(scope="session")
def montage_30():
    return ingest.load_montage("standard-30")


@pytest.fixture(scope="session")
def rest_csv(tmp_path_factory, montage_30):
    """10 s resting recording hitting the published band powers."""
    rec = synth.synth_eeg(
        synth.SynthSpec(
            duration=10.0, sampling_rate=500.0, montage=montage_30,
            band_targets=((ALPHA, 4.329), (BETA, 3.034)), seed=101,
        )
    )
    path = tmp_path_factory.mktemp("data") / "rest.csv"
    path.write_bytes(ingest.write_csv(rec))
    return path


@pytest.fixture(scope="session")
def session_csv(tmp_path_factory, montage_30):
    """40 s recording with four analyzable epochs."""
    rec = synth.synth_eeg(
        synth.SynthSpec(
            duration=40.0, sampling_rate=500.0, montage=montage_30,
            band_targets=((ALPHA, 4.329), (BETA, 3.034)), seed=102,
        )
    )
    path = tmp_path_factory.mktemp("data") / "session.csv"
    path.write_bytes(ingest.write_csv(rec))
    return path


def write_config(tmp_path, doc):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


class TestExitCodes:
    def test_missing_recording_file_is_io_error(self, tmp_path):
        rc = run("bar", "--input", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "o"))
        assert rc == cli.EXIT_IO

    def test_unknown_config_key_is_validation_error(self, tmp_path, rest_csv):
        cfg = write_config(tmp_path, {"inputt": {}})
        rc = run("bar", "--config", str(cfg), "--input", str(rest_csv))
        assert rc == cli.EXIT_VALIDATION

    def test_unsupported_schema_version(self, tmp_path, rest_csv):
        cfg = write_config(tmp_path, {"schema_version": 99})
        rc = run("bar", "--config", str(cfg), "--input", str(rest_csv))
        assert rc == cli.EXIT_VALIDATION

    def test_flag_without_dotted_path_rejected(self, tmp_path, rest_csv):
        rc = run("bar", "--input", str(rest_csv), "--out", str(tmp_path), "--bogus", "1")
        assert rc == cli.EXIT_VALIDATION

    def test_unknown_format_rejected(self, tmp_path, rest_csv):
        rc = run("bar", "--input", str(rest_csv), "--out", str(tmp_path), "--format", "xml")
        assert rc == cli.EXIT_VALIDATION

    def test_empty_points_file(self, tmp_path):
        pts = tmp_path / "points.csv"
        pts.write_text("x_minutes,y_ratio\n")
        rc = run("fit", "--points", str(pts), "--out", str(tmp_path / "o"))
        assert rc == cli.EXIT_VALIDATION

    def test_report_without_artifacts(self, tmp_path):
        (tmp_path / "empty").mkdir()
        rc = run("report", "--out", str(tmp_path / "empty"))
        assert rc == cli.EXIT_VALIDATION

    def test_zero_duration_synth_spec(self, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({"duration_s": 0.0, "bands": []}))
        rc = run("synth", "--spec", str(spec), "--out", str(tmp_path / "o"))
        assert rc == cli.EXIT_VALIDATION

    def test_ridge_fit_reports_divergence_with_output(self, tmp_path):
        # near-linear growth drives the sigmoid parameters to the bound;
        # the command flags it but still writes what it found
        pts = tmp_path / "points.csv"
        rows = [(0.0, 0.701), (15.0, 1.084), (30.0, 1.295), (45.0, 1.742), (60.0, 2.149)]
        pts.write_text("\n".join(f"{x},{y}" for x, y in rows) + "\n")
        out = tmp_path / "o"
        rc = run("fit", "--points", str(pts), "--model", "4pl", "--out", str(out), "--quiet")
        assert rc == cli.EXIT_DIVERGED
        doc = json.loads((out / "fit_4pl.json").read_text())
        assert doc["converged"] is False
        assert doc["r_squared"] > 0.99


class TestSynthCommand:
    def spec_doc(self, seed=None):
        doc = {
            "duration_s": 10.0,
            "sampling_rate": 500.0,
            "bands": [
                {"name": "alpha", "f_low": 8.0, "f_high": 13.0, "power": 4.329},
                {"name": "beta", "f_low": 13.0, "f_high": 30.0, "power": 3.034},
            ],
            "outputs": ["csv", "edf"],
        }
        if seed is not None:
            doc["seed"] = seed
        return doc

    def test_writes_both_formats_and_metadata(self, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps(self.spec_doc(seed=5)))
        out = tmp_path / "o"
        assert run("synth", "--spec", str(spec), "--out", str(out), "--quiet") == 0
        assert (out / "synthetic.csv").is_file()
        assert (out / "synthetic.edf").is_file()
        meta = json.loads((out / "synth_meta.json").read_text())
        assert meta["seed"] == 5
        assert "PCG64" in meta["rng"]
        assert meta["files"] == ["synthetic.csv", "synthetic.edf"]
        assert json.loads((out / "run_meta.json").read_text())["command"] == "synth"

    def test_same_seed_same_bytes(self, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps(self.spec_doc(seed=5)))
        a, b = tmp_path / "a", tmp_path / "b"
        assert run("synth", "--spec", str(spec), "--out", str(a), "--quiet") == 0
        assert run("synth", "--spec", str(spec), "--out", str(b), "--quiet") == 0
        assert (a / "synthetic.csv").read_bytes() == (b / "synthetic.csv").read_bytes()
        assert (a / "synthetic.edf").read_bytes() == (b / "synthetic.edf").read_bytes()

    def test_seed_flag_feeds_unseeded_spec(self, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps(self.spec_doc()))
        a, b = tmp_path / "a", tmp_path / "b"
        assert run("synth", "--spec", str(spec), "--out", str(a), "--seed", "1", "--quiet") == 0
        assert run("synth", "--spec", str(spec), "--out", str(b), "--seed", "2", "--quiet") == 0
        assert json.loads((a / "synth_meta.json").read_text())["seed"] == 1
        assert (a / "synthetic.csv").read_bytes() != (b / "synthetic.csv").read_bytes()

    def test_output_is_ingestible_near_target(self, tmp_path, montage_30):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps(self.spec_doc(seed=5)))
        out = tmp_path / "o"
        assert run("synth", "--spec", str(spec), "--out", str(out), "--quiet") == 0
        rec = ingest.read_csv(
            (out / "synthetic.csv").read_bytes(), ingest.CsvLayout(), 500.0, montage_30
        )
        proto = core.SessionProtocol(phase="baseline", epoch_times=(0.0,))
        est = spectral.welch_psd(core.slice_epochs(rec, proto)[0])
        assert spectral.band_ratio(est, BETA, ALPHA) == pytest.approx(0.701, rel=0.05)


class TestBarCommand:
    def test_baseline_phase_series(self, tmp_path, rest_csv):
        out = tmp_path / "o"
        cfg = write_config(tmp_path, {"protocol": {"phase": "baseline", "epoch_times": [0.0]}})
        rc = run("bar", "--config", str(cfg), "--input", str(rest_csv), "--out", str(out), "--quiet")
        assert rc == 0
        doc = json.loads((out / "bar_series.json").read_text())
        assert doc["phase"] == "baseline"
        assert doc["baseline"] is None
        assert len(doc["points"]) == 1
        assert doc["points"][0]["bar"] == pytest.approx(0.701, rel=0.05)
        assert doc["points"][0]["relative_increase"] is None
        lines = (out / "bar_points.csv").read_text().splitlines()
        assert lines[0] == "x_minutes,y_ratio"
        assert len(lines) == 2

    def test_during_phase_prepends_baseline_point(self, tmp_path, session_csv):
        out = tmp_path / "o"
        cfg = write_config(
            tmp_path,
            {
                "baseline_bar": 0.701,
                "protocol": {
                    "phase": "during_gameplay",
                    "game_type": "puzzle",
                    "gamer_type": "gamer",
                    "epoch_times": [0.0, 10.0, 20.0, 30.0],
                },
            },
        )
        rc = run("bar", "--config", str(cfg), "--input", str(session_csv), "--out", str(out), "--quiet")
        assert rc == 0
        lines = (out / "bar_points.csv").read_text().splitlines()
        assert len(lines) == 6
        x0, y0 = lines[1].split(",")
        assert (float(x0), float(y0)) == (0.0, 0.701)
        head = (out / "bar_series.csv").read_text().splitlines()[0]
        assert head.split(",")[:4] == ["time_s", "bar", "baseline", "relative_increase"]
        doc = json.loads((out / "bar_series.json").read_text())
        assert doc["game_type"] == "puzzle"
        assert all(p["relative_increase"] is not None for p in doc["points"])

    def test_baseline_recording_measured(self, tmp_path, rest_csv, session_csv):
        out = tmp_path / "o"
        cfg = write_config(
            tmp_path,
            {
                "input": {"baseline_recording": str(rest_csv)},
                "protocol": {"phase": "during_gameplay", "epoch_times": [0.0]},
            },
        )
        rc = run("bar", "--config", str(cfg), "--input", str(session_csv), "--out", str(out), "--quiet")
        assert rc == 0
        doc = json.loads((out / "bar_series.json").read_text())
        assert doc["baseline"] == pytest.approx(0.701, rel=0.05)

    def test_format_filter(self, tmp_path, rest_csv):
        out = tmp_path / "o"
        cfg = write_config(tmp_path, {"protocol": {"epoch_times": [0.0]}})
        rc = run("bar", "--config", str(cfg), "--input", str(rest_csv), "--out", str(out),
                 "--format", "json", "--quiet")
        assert rc == 0
        assert (out / "bar_series.json").is_file()
        assert not (out / "bar_series.csv").exists()

    def test_quiet_suppresses_chatter(self, tmp_path, rest_csv, capsys):
        cfg = write_config(tmp_path, {"protocol": {"epoch_times": [0.0]}})
        run("bar", "--config", str(cfg), "--input", str(rest_csv),
            "--out", str(tmp_path / "q"), "--quiet")
        assert capsys.readouterr().out == ""
        run("bar", "--config", str(cfg), "--input", str(rest_csv),
            "--out", str(tmp_path / "v"))
        assert "BAR series" in capsys.readouterr().out

    def test_dotted_override_changes_estimate(self, tmp_path, rest_csv):
        cfg = write_config(tmp_path, {"protocol": {"epoch_times": [0.0]}})
        a, b = tmp_path / "a", tmp_path / "b"
        assert run("bar", "--config", str(cfg), "--input", str(rest_csv),
                   "--out", str(a), "--quiet") == 0
        assert run("bar", "--config", str(cfg), "--input", str(rest_csv),
                   "--out", str(b), "--quiet", "--welch.taper", "hann") == 0
        va = json.loads((a / "bar_series.json").read_text())["points"][0]["bar"]
        vb = json.loads((b / "bar_series.json").read_text())["points"][0]["bar"]
        assert va != vb
        assert va == pytest.approx(vb, rel=0.05)

    def test_bad_taper_override(self, tmp_path, rest_csv):
        rc = run("bar", "--input", str(rest_csv), "--out", str(tmp_path / "o"),
                 "--quiet", "--welch.taper", "blackman")
        assert rc == cli.EXIT_VALIDATION


class TestFitCommand:
    def trajectory_file(self, tmp_path):
        pts = tmp_path / "traj.csv"
        model = cli.regress.FourPLModel(a=0.7, b=2.2, c=30.0, d=2.4)
        xs = np.linspace(0.0, 60.0, 9)
        rng = np.random.default_rng(50)
        rows = [
            (float(x), float(cli.regress.eval_4pl(model, x)) + 0.01 * float(e))
            for x, e in zip(xs, rng.normal(size=9))
        ]
        pts.write_text("x_minutes,y_ratio\n" + "\n".join(f"{x},{y}" for x, y in rows) + "\n")
        return pts

    def test_both_models_with_ranking(self, tmp_path):
        pts = self.trajectory_file(tmp_path)
        out = tmp_path / "o"
        assert run("fit", "--points", str(pts), "--out", str(out), "--quiet") == 0
        four = json.loads((out / "fit_4pl.json").read_text())
        quart = json.loads((out / "fit_quartic.json").read_text())
        assert four["model_type"] == "4pl" and four["converged"]
        assert quart["model_type"] == "quartic"
        assert four["r_squared"] > 0.999
        ranking = json.loads((out / "comparison.json").read_text())["ranking"]
        assert [r["rank"] for r in ranking] == [0, 1]
        assert ranking[0]["model_type"] == "4pl"
        curve = (out / "fit_4pl_curve.csv").read_text().splitlines()
        assert curve[0] == "x_minutes,y_observed,y_fitted"
        assert len(curve) == 10

    def test_single_model_skips_ranking(self, tmp_path):
        pts = self.trajectory_file(tmp_path)
        out = tmp_path / "o"
        assert run("fit", "--points", str(pts), "--model", "quartic", "--out", str(out), "--quiet") == 0
        assert (out / "fit_quartic.json").is_file()
        assert not (out / "fit_4pl.json").exists()
        assert not (out / "comparison.json").exists()

    def test_five_point_run_flags_interpolation(self, tmp_path):
        pts = tmp_path / "five.csv"
        rows = [(0.0, 0.701), (15.0, 0.729), (30.0, 0.874), (45.0, 1.297), (60.0, 1.541)]
        pts.write_text("\n".join(f"{x},{y}" for x, y in rows) + "\n")
        out = tmp_path / "o"
        assert run("fit", "--points", str(pts), "--out", str(out), "--quiet") == 0
        ranking = json.loads((out / "comparison.json").read_text())["ranking"]
        assert ranking[0]["model_type"] == "quartic"
        assert ranking[0]["aic"] is None
        assert ranking[0]["overfit_warning"] is True
        quart = json.loads((out / "fit_quartic.json").read_text())
        assert quart["exact_fit"] is True

    def test_composes_with_bar_output(self, tmp_path, session_csv):
        out = tmp_path / "o"
        cfg = write_config(
            tmp_path,
            {
                "baseline_bar": 0.701,
                "protocol": {"phase": "during_gameplay", "epoch_times": [0.0, 10.0, 20.0, 30.0]},
            },
        )
        assert run("bar", "--config", str(cfg), "--input", str(session_csv),
                   "--out", str(out), "--quiet") == 0
        rc = run("fit", "--model", "quartic", "--out", str(out), "--quiet")
        assert rc == 0
        doc = json.loads((out / "fit_quartic.json").read_text())
        assert doc["n"] == 5


class TestPsdCommand:
    def test_per_channel_files(self, tmp_path, rest_csv):
        out = tmp_path / "o"
        cfg = write_config(tmp_path, {"protocol": {"epoch_times": [0.0]}})
        assert run("psd", "--config", str(cfg), "--input", str(rest_csv),
                   "--out", str(out), "--quiet") == 0
        per_channel = sorted(out.glob("psd_*.csv"))
        assert len(per_channel) == 30
        lines = per_channel[0].read_text().splitlines()
        assert lines[0] == "frequency_hz,epoch_0s"
        assert len(lines) == 1002
        doc = json.loads((out / "psd.json").read_text())
        freqs = doc["frequencies_hz"]
        assert freqs[0] == 0.0 and freqs[-1] == 250.0 and len(freqs) == 1001
        assert len(doc["epochs"][0]["power"]) == 30


class TestTopoCommand:
    def test_single_epoch_outputs(self, tmp_path, rest_csv):
        out = tmp_path / "o"
        cfg = write_config(tmp_path, {"protocol": {"epoch_times": [0.0]}})
        assert run("topo", "--config", str(cfg), "--input", str(rest_csv),
                   "--out", str(out), "--quiet") == 0
        ppm = (out / "topo_00_0s.ppm").read_bytes()
        assert ppm.startswith(b"P6\n64 64\n255\n")
        assert (out / "topo_00_0s.csv").is_file()
        sim = json.loads((out / "similarity.json").read_text())
        assert sim["similarity"] == [[1.0]]
        assert sim["scalar"] == "bar"
        assert (out / "similarity.csv").read_text().strip() == "1.0"

    def test_periodic_epochs_fully_similar(self, tmp_path, montage_30):
        # the oscillator bank repeats every 4 s, so epochs 4 s apart carry
        # identical samples and their maps must agree
        rec = synth.synth_eeg(
            synth.SynthSpec(
                duration=14.0, sampling_rate=500.0, montage=montage_30,
                band_targets=((ALPHA, 4.329), (BETA, 3.034)), seed=103,
            )
        )
        src = tmp_path / "periodic.csv"
        src.write_bytes(ingest.write_csv(rec))
        out = tmp_path / "o"
        cfg = write_config(tmp_path, {"protocol": {"epoch_times": [0.0, 4.0]}})
        assert run("topo", "--config", str(cfg), "--input", str(src),
                   "--out", str(out), "--quiet") == 0
        sim = json.loads((out / "similarity.json").read_text())["similarity"]
        assert sim[0][1] == pytest.approx(1.0, abs=1e-9)
        assert sorted(p.name for p in out.glob("topo_*.ppm")) == [
            "topo_00_0s.ppm", "topo_01_4s.ppm",
        ]

    def test_band_scalar_hotspot_localizes(self, tmp_path, montage_30):
        # one frontal channel gets 25x beta power; the hottest grid cell
        # must land on that electrode
        rng = np.random.default_rng(104)
        fs, n = 500.0, 5000
        t = np.arange(n) / fs
        hot_label = "Fp1"
        rows = []
        for i, ch in enumerate(montage_30.electrodes):
            beta_amp = 5.0 if ch.label == hot_label else 1.0
            sig = beta_amp * np.sin(2 * np.pi * 20.0 * t + rng.uniform(0, 2 * np.pi))
            sig += np.sin(2 * np.pi * 10.0 * t + rng.uniform(0, 2 * np.pi))
            rows.append(sig)
        rec = core.Recording(
            channels=montage_30.electrodes, samples=np.array(rows), sampling_rate=fs
        )
        src = tmp_path / "hot.csv"
        src.write_bytes(ingest.write_csv(rec))
        out = tmp_path / "o"
        cfg = write_config(tmp_path, {"protocol": {"epoch_times": [0.0]}})
        assert run("topo", "--config", str(cfg), "--input", str(src), "--out", str(out),
                   "--scalar", "band:beta", "--quiet") == 0
        cells = [
            [float(c) if c else np.nan for c in line.split(",")]
            for line in (out / "topo_00_0s.csv").read_text().splitlines()
        ]
        grid = np.array(cells)
        row, col = np.unravel_index(np.nanargmax(grid), grid.shape)
        hot = next(e for e in montage_30.electrodes if e.label == hot_label)
        want_col = round((hot.position[0] + 1.0) / 2.0 * 63)
        want_row = round((1.0 - hot.position[1]) / 2.0 * 63)
        assert abs(row - want_row) <= 2 and abs(col - want_col) <= 2

    def test_bad_scalar_rejected(self, tmp_path, rest_csv):
        cfg = write_config(tmp_path, {"protocol": {"epoch_times": [0.0]}})
        rc = run("topo", "--config", str(cfg), "--input", str(rest_csv),
                 "--out", str(tmp_path / "o"), "--scalar", "gamma", "--quiet")
        assert rc == cli.EXIT_VALIDATION


class TestReportCommand:
    def populate(self, tmp_path, session_csv):
        out = tmp_path / "o"
        cfg = write_config(
            tmp_path,
            {
                "baseline_bar": 0.701,
                "protocol": {"phase": "during_gameplay", "epoch_times": [0.0, 10.0, 20.0, 30.0]},
            },
        )
        assert run("bar", "--config", str(cfg), "--input", str(session_csv),
                   "--out", str(out), "--quiet") == 0
        assert run("fit", "--model", "quartic", "--out", str(out), "--quiet") == 0
        return out

    def test_aggregates_sections(self, tmp_path, session_csv):
        out = self.populate(tmp_path, session_csv)
        assert run("report", "--out", str(out), "--quiet") == 0
        doc = json.loads((out / "report.json").read_text())
        assert doc["bar"]["phase"] == "during_gameplay"
        assert "quartic" in doc["fits"]
        assert doc["topography"] is None
        md = (out / "report.md").read_text()
        assert md.startswith("# Session report")
        assert "## Beta/alpha ratio" in md
        assert "## Model fits" in md

    def test_byte_deterministic_rerun(self, tmp_path, session_csv):
        out = self.populate(tmp_path, session_csv)
        assert run("report", "--out", str(out), "--quiet") == 0
        first = (out / "report.json").read_bytes()
        assert run("report", "--out", str(out), "--quiet") == 0
        assert (out / "report.json").read_bytes() == first

    def test_bar_only_report(self, tmp_path, rest_csv):
        out = tmp_path / "o"
        cfg = write_config(tmp_path, {"protocol": {"epoch_times": [0.0]}})
        assert run("bar", "--config", str(cfg), "--input", str(rest_csv),
                   "--out", str(out), "--quiet") == 0
        assert run("report", "--out", str(out), "--quiet") == 0
        doc = json.loads((out / "report.json").read_text())
        assert doc["fits"] is None
        assert doc["ranking"] is None
