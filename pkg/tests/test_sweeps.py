import json

import numpy as np
import pytest

from thermotele.averaging import QuadratureGrid
from thermotele.sweeps import (
    SweepRecord,
    SweepSpec,
    evaluate_point,
    reproduce_figure,
    run_sweep,
    write_sweep_csv,
)


class TestSweepSpec:
    def test_validates_range(self):
        with pytest.raises(ValueError):
            SweepSpec("ising", {"lam": 0.7}, "kt", 2.0, 1.0, 10)

    def test_validates_steps(self):
        with pytest.raises(ValueError):
            SweepSpec("ising", {"lam": 0.7}, "kt", 0.1, 1.0, 1)

    def test_validates_positive_kt(self):
        with pytest.raises(ValueError):
            SweepSpec("ising", {"lam": 0.7}, "kt", -0.1, 1.0, 5)
        with pytest.raises(ValueError):
            SweepSpec("ising", {"lam": 0.7, "kt": 0.0}, "lambda", 0.1, 1.0, 5)

    def test_validates_names(self):
        with pytest.raises(ValueError):
            SweepSpec("heisenberg3d", {}, "kt", 0.1, 1.0, 5)
        with pytest.raises(ValueError):
            SweepSpec("ising", {"lam": 1.0}, "kt", 0.1, 1.0, 5, engine="magic")

    def test_alias_normalization(self):
        spec = SweepSpec("xy", {"lambda": 0.9, "kT": 0.5}, "delta", 0.0, 1.0, 5)
        assert spec.fixed == {"lam": 0.9, "kt": 0.5}


class TestRunSweep:
    def test_ising_kt_sweep_shape(self):
        spec = SweepSpec("ising", {"lam": 0.7}, "kt", 0.05, 3.0, 40, engine="closed")
        records = run_sweep(spec)
        assert len(records) == 40
        kts = [r.kt for r in records]
        assert kts == sorted(kts)
        det = np.array([r.det_value for r in records])
        prob = np.array([r.prob_value for r in records])
        # deterministic efficiency decreases monotonically with kT
        assert np.all(np.diff(det) < 1e-12)
        # near-perfect probabilistic teleportation below kT = 0.2
        for r in records:
            if r.kt < 0.2:
                assert r.prob_value >= 0.99
        assert np.all(prob >= det - 1e-10)

    def test_xx_probabilistic_advantage(self):
        spec = SweepSpec("xx", {"lam": 0.7}, "kt", 0.05, 3.0, 40, engine="closed")
        records = run_sweep(spec)
        assert not any(r.above_classical_det for r in records)
        assert any(r.above_classical_prob for r in records)
        prob = np.array([r.prob_value for r in records])
        assert np.any(np.diff(prob) > 1e-9)  # grows with kT somewhere

    def test_infinite_temperature_point(self):
        for engine in ("closed", "oracle"):
            r = evaluate_point(
                "xxz",
                {"bigj": 1.0, "delta": 0.5, "field": 4.0},
                1e6,
                engine=engine,
                grid=QuadratureGrid(16, 16),
            )
            assert abs(r.det_value - 0.5) < 1e-5
            assert abs(r.prob_value - 0.5) < 1e-5

    def test_engine_both_agreement(self):
        spec = SweepSpec(
            "xy",
            {"lam": 0.8, "zeta": 0.5},
            "kt",
            0.1,
            2.0,
            8,
            engine="both",
            grid=QuadratureGrid(32, 32),
        )
        for r in run_sweep(spec):
            assert r.engine_disagreement is not None
            assert r.engine_disagreement <= 1e-8

    def test_raw_model(self):
        r = evaluate_point(
            "raw", {"jx": 1.0, "jy": -0.5, "jz": 0.3, "ha": 1.0, "hb": -0.2}, 0.5
        )
        assert isinstance(r, SweepRecord)
        assert 1.0 / 3.0 <= r.det_value <= 1.0
        assert r.prob_value >= r.det_value - 1e-10


class TestCsvOutput:
    def test_byte_stable(self, tmp_path):
        spec = SweepSpec("ising", {"lam": 1.3}, "kt", 0.1, 1.0, 6, engine="closed")
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_sweep_csv(run_sweep(spec), p1)
        write_sweep_csv(run_sweep(spec), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_format(self, tmp_path):
        spec = SweepSpec("xxx", {"bigj": 1.5, "field": 8.0}, "kt", 0.5, 2.0, 3)
        path = tmp_path / "out.csv"
        write_sweep_csv(run_sweep(spec), path)
        text = path.read_text(encoding="utf-8")
        assert "\r" not in text
        lines = text.splitlines()
        header = lines[0].split(",")
        assert header[0] == "schema_version"
        assert len(lines) == 4
        row = lines[1].split(",")
        assert len(row) == len(header)
        assert row[0] == "1"
        # lam/zeta columns empty for the xxz family
        assert row[header.index("lam")] == ""
        assert row[header.index("engine_disagreement")] == ""


class TestFigures:
    def test_fig2_outputs(self, tmp_path):
        written = reproduce_figure("fig2", tmp_path, steps=8)
        names = {p.name for p in written}
        assert {
            "ising_det.csv", "ising_prob.csv", "ising_success.csv",
            "fig2.gp", "fig2_meta.json",
        } <= names
        det_lines = (tmp_path / "ising_det.csv").read_text().splitlines()
        assert det_lines[0] == "schema_version,curve,x_name,x,value,branch,phi"
        assert len(det_lines) == 1 + 2 * 8  # two lambda curves
        meta = json.loads((tmp_path / "fig2_meta.json").read_text())
        assert meta["figure"] == "fig2"
        assert "implementer_chosen" in meta and "stated_by_source" in meta
        script = (tmp_path / "fig2.gp").read_text()
        assert "ising_det.csv" in script and "2.0/3.0" in script

    def test_fig6_probabilistic_only_crossing(self, tmp_path):
        reproduce_figure("fig6", tmp_path, steps=16)
        lines = (tmp_path / "xxz_det.csv").read_text().splitlines()[1:]
        plines = (tmp_path / "xxz_prob.csv").read_text().splitlines()[1:]
        limit = 2.0 / 3.0
        neg_det = [
            float(l.split(",")[4]) for l in lines if l.split(",")[1] == "delta=-0.1"
        ]
        neg_prob = [
            float(l.split(",")[4]) for l in plines if l.split(",")[1] == "delta=-0.1"
        ]
        assert max(neg_det) <= limit
        assert max(neg_prob) > limit

    def test_fig7_branch_switch_cusps(self, tmp_path):
        reproduce_figure("fig7", tmp_path, steps=24)
        lines = (tmp_path / "xy_lambda_det.csv").read_text().splitlines()[1:]
        branches = {
            l.split(",")[5] for l in lines if l.split(",")[1] == "kt=0.1"
        }
        assert len(branches) > 1  # optimal branch switches along the sweep

    def test_unknown_figure(self, tmp_path):
        with pytest.raises(ValueError):
            reproduce_figure("fig99", tmp_path)
