import csv
import io
import json

import numpy as np
import pytest

from qdiscord import sweep
from qdiscord.aligned import THETA_C2, aligned_discord
from qdiscord.cli import main
from qdiscord.errors import ConfigError
from qdiscord.sweep import (
    COLUMNS,
    SweepConfig,
    evaluate_measures,
    load_config,
    parse_grid,
    run_factorize,
    run_sweep,
    write_records,
)
from qdiscord.aligned import AlignedMixtureParams, aligned_state


def _read_csv(text):
    lines = text.splitlines()
    assert lines[0] == "# schema=1"
    return list(csv.DictReader(lines[1:]))


def _run(argv, capsys):
    code = main(["-q"] + argv)
    out = capsys.readouterr()
    return code, out.out, out.err


NUMERIC = ("D", "I1", "I2", "I3", "C", "E_plus", "E_minus")


class TestConfig:
    def test_parse_grid(self):
        assert parse_grid("0:1:5") == (0.0, 1.0, 5)
        assert parse_grid([0, 2, 3]) == (0.0, 2.0, 3)
        with pytest.raises(ConfigError):
            parse_grid("0:1")
        with pytest.raises(ConfigError):
            parse_grid("a:1:2")

    def test_aliases_and_defaults(self):
        cfg = load_config(None, {"model": "chain", "n": 8})
        assert cfg.model == "cyclic_nn"
        assert cfg.solver == "jw"
        assert cfg.separation_list == [1, 2, 3, 4]
        assert load_config(None, {"model": "lipkin", "n": 8}).solver == "block"

    def test_file_and_override(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"model": "cyclic_nn", "n": 6, "chi": 0.3, "grid": "0:1:3"}))
        cfg = load_config(str(path), {"chi": 0.7, "n": None})
        assert cfg.chi == 0.7
        assert cfg.n == 6
        assert cfg.grid == (0.0, 1.0, 3)

    @pytest.mark.parametrize("overrides", [
        {"model": "ising"},
        {"model": "aligned", "grid": "1:0:5"},
        {"model": "aligned", "grid": "0:2:5"},
        {"model": "aligned", "measures": "D,Q"},
        {"model": "aligned", "measures": "Iq(1)"},
        {"model": "aligned", "measures": "Iq(-2)"},
        {"model": "aligned", "format": "xml"},
        {"model": "cyclic_nn"},
        {"model": "cyclic_nn", "n": 8, "separations": "0,2"},
        {"model": "cyclic_nn", "n": 8, "separations": "5"},
        {"model": "cyclic_nn", "n": 8, "solver": "block"},
        {"model": "cyclic_nn", "n": 8, "jx": -1.0},
        {"model": "aligned", "colour": "red"},
        {},
    ])
    def test_invalid(self, overrides):
        with pytest.raises(ConfigError):
            load_config(None, overrides)

    def test_bad_file(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            load_config(str(path))
        path.write_text("[1, 2]")
        with pytest.raises(ConfigError):
            load_config(str(path))
        with pytest.raises(ConfigError):
            load_config(str(tmp_path / "missing.json"))


class TestEvaluate:
    def test_direction_and_values(self):
        b = aligned_state(AlignedMixtureParams(np.pi / 4))
        values, direction, _, diffs = evaluate_measures(b, ("I2", "D"), ())
        assert values["I2"] == pytest.approx(1 / 8)
        assert values["D"] == pytest.approx(aligned_discord(np.pi / 4), abs=1e-8)
        # direction of the first measure evaluated (D)
        assert abs(direction[0]) == pytest.approx(1.0)
        assert abs(diffs["I2"]) < 1e-8

    def test_tsallis_column(self):
        b = aligned_state(AlignedMixtureParams(np.pi / 4))
        values, _, _, _ = evaluate_measures(b, ("I2",), (2.0,))
        assert values["Iq(2)"] == pytest.approx(1 / 8, abs=1e-10)


class TestAlignedSweep:
    def test_records(self):
        recs = run_sweep(SweepConfig("aligned", grid=(0.0, np.pi / 2, 21)))
        assert len(recs) == 21
        assert list(recs[0])[:len(COLUMNS)] == list(COLUMNS)
        for m in ("D", "I2", "I3"):
            assert recs[0][m] == pytest.approx(0, abs=1e-10)
            assert recs[-1][m] == pytest.approx(0, abs=1e-10)
            assert max(abs(r[f"{m}_diff"]) for r in recs) < 1e-8
        assert all(r["C"] == pytest.approx(0, abs=1e-10) for r in recs)
        branches = [r["branch_I2"] for r in recs]
        assert branches == ["z" if r["B_or_theta"] < THETA_C2 else "x" for r in recs]

    def test_unrequested_measures_empty(self):
        recs = run_sweep(SweepConfig("aligned", grid=(0.1, 0.2, 2), measures=("I2",)))
        assert recs[0]["D"] is None
        assert recs[0]["I2"] is not None

    def test_consistency_failure(self, monkeypatch):
        monkeypatch.setattr(sweep, "CONSISTENCY_TOL", -1.0)
        with pytest.raises(sweep.ConsistencyError):
            run_sweep(SweepConfig("aligned", grid=(0.3, 0.3, 1)))


class TestChainSweeps:
    @staticmethod
    def _compare(a, b):
        assert len(a) == len(b)
        for ra, rb in zip(a, b):
            assert (ra["B_or_theta"], ra["L"], ra["parity"]) == (rb["B_or_theta"], rb["L"], rb["parity"])
            for m in NUMERIC:
                assert ra[m] == pytest.approx(rb[m], abs=1e-9)

    def test_jw_matches_dense(self):
        base = dict(model="cyclic_nn", n=8, chi=0.5, grid=(0.0, 1.5, 6))
        self._compare(run_sweep(SweepConfig(**base)), run_sweep(SweepConfig(**base, solver="dense")))

    def test_block_matches_dense(self):
        base = dict(model="fully_connected", n=8, chi=0.5, grid=(0.0, 1.5, 6))
        self._compare(run_sweep(SweepConfig(**base)), run_sweep(SweepConfig(**base, solver="dense")))

    def test_reference_columns(self):
        recs = run_sweep(SweepConfig("fully_connected", n=6, grid=(0.5, 1.5, 3)))
        assert recs[0]["D_ref"] == pytest.approx(aligned_discord(np.arccos(0.5)))
        assert recs[1]["D_ref"] == pytest.approx(0, abs=1e-15)
        assert recs[2]["D_ref"] is None
        assert all(r["L"] == "all" for r in recs)

    def test_order_and_degeneracy(self):
        b_s = np.sqrt(0.5)
        recs = run_sweep(SweepConfig("cyclic_nn", n=10, grid=(b_s, 1.0, 2), separations=(3, 1)))
        assert [(r["B_or_theta"], r["L"]) for r in recs] == [(b_s, 1), (b_s, 3), (1.0, 1), (1.0, 3)]
        assert "degenerate" in recs[0]["flags"]
        assert "degenerate" not in recs[2]["flags"]

    def test_values_nonnegative(self):
        recs = run_sweep(SweepConfig("cyclic_nn", n=10, grid=(0.0, 2.0, 5)))
        for r in recs:
            for m in ("D", "I1", "I2", "I3", "C"):
                assert r[m] >= -1e-10

    def test_workers(self):
        cfg = SweepConfig("cyclic_nn", n=8, grid=(0.0, 1.0, 4))
        a, b = io.StringIO(), io.StringIO()
        write_records(run_sweep(cfg, workers=1), a)
        write_records(run_sweep(cfg, workers=3), b)
        assert a.getvalue() == b.getvalue()


class TestFactorize:
    def test_cyclic(self):
        rep = run_factorize(6, 1.0, 0.5)
        assert rep["B_s"] == pytest.approx(np.sqrt(0.5))
        assert rep["max_pair_residual"] < 1e-10
        assert rep["max_site_residual"] < 1e-10
        assert rep["dense_residual"] < 1e-10

    def test_open_border(self):
        rep = run_factorize(6, 1.0, 0.5, geometry="open")
        assert rep["B_first"] == pytest.approx(rep["B_s"] / 2)
        assert rep["B_last"] == pytest.approx(rep["B_s"] / 2)

    def test_large_chain_skips_dense(self):
        rep = run_factorize(30, 1.0, 0.5)
        assert rep["dense_residual"] is None
        assert rep["max_site_residual"] < 1e-10

    def test_bad_geometry(self):
        with pytest.raises(ConfigError):
            run_factorize(4, geometry="ring")


class TestCli:
    def test_aligned_stdout(self, capsys):
        code, out, _ = _run(["aligned", "--grid", "0:1.5:4", "--out", "-"], capsys)
        assert code == 0
        rows = _read_csv(out)
        assert len(rows) == 4
        assert list(rows[0])[:len(COLUMNS)] == list(COLUMNS)
        assert rows[0]["chi"] == ""

    def test_json(self, capsys):
        code, out, _ = _run(["aligned", "--grid", "0:1.5:3", "--format", "json"], capsys)
        assert code == 0
        data = json.loads(out)
        assert len(data) == 3
        assert data[1]["I2"] == pytest.approx(0.5 * np.sin(0.75) ** 4)

    def test_file_output_deterministic(self, tmp_path, capsys):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for p in paths:
            assert main(["-q", "chain", "--n", "8", "--grid", "0:1:3", "--out", str(p)]) == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()
        rows = _read_csv(paths[0].read_text())
        assert len(rows) == 3 * 4
        assert capsys.readouterr().out == ""

    def test_progress_off_stdout(self, capsys):
        code = main(["lipkin", "--n", "6", "--grid", "0:1:2", "--measures", "I2"])
        out = capsys.readouterr()
        assert code == 0
        assert out.out.startswith("# schema=1")
        assert "point" not in out.out

    def test_tsallis_measure(self, capsys):
        code, out, _ = _run(["lipkin", "--n", "6", "--grid", "0:1:2", "--measures", "I2,Iq(2)"], capsys)
        assert code == 0
        rows = _read_csv(out)
        assert float(rows[0]["Iq(2)"]) == pytest.approx(float(rows[0]["I2"]), abs=1e-9)

    def test_factorize(self, capsys):
        code, out, _ = _run(["factorize", "--n", "6", "--chi", "0.5", "--geometry", "open"], capsys)
        assert code == 0
        row = _read_csv(out)[0]
        assert float(row["B_s"]) == pytest.approx(np.sqrt(0.5))
        assert float(row["B_first"]) == pytest.approx(np.sqrt(0.5) / 2)

    def test_factorize_config(self, tmp_path, capsys):
        path = tmp_path / "f.json"
        path.write_text(json.dumps({"n": 5, "jy": 2.0}))
        code, out, _ = _run(["factorize", "--config", str(path), "--format", "json"], capsys)
        assert code == 0
        rep = json.loads(out)[0]
        assert rep["swapped_xy"] is True
        assert rep["chi"] == pytest.approx(0.5)

    @pytest.mark.parametrize("argv", [
        ["aligned", "--grid", "0:1"],
        ["aligned", "--measures", "Z"],
        ["chain", "--grid", "0:1:3"],
        ["chain", "--n", "8", "--separations", "9"],
        ["lipkin", "--n", "abc"],
        ["bogus"],
        [],
        ["factorize"],
        ["factorize", "--n", "4", "--config", "/nonexistent.json"],
        ["aligned", "--config", "/nonexistent.json"],
    ])
    def test_config_errors(self, argv, capsys):
        code, _, err = _run(argv, capsys)
        assert code == 2
        assert err

    @pytest.mark.parametrize("argv", [
        ["chain", "--n", "15", "--solver", "dense", "--grid", "0:1:2"],
        ["factorize", "--n", "4", "--chi", "-0.5"],
        ["factorize", "--n", "4", "--jx", "0.5", "--jz", "0.5"],
    ])
    def test_unsupported(self, argv, capsys):
        code, _, err = _run(argv, capsys)
        assert code == 3
        assert "unsupported" in err

    def test_consistency_exit(self, monkeypatch, capsys):
        monkeypatch.setattr(sweep, "CONSISTENCY_TOL", -1.0)
        code, _, err = _run(["aligned", "--grid", "0.3:0.4:2"], capsys)
        assert code == 4
        assert "consistency" in err
