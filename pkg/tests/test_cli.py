"""Command-line interface: commands, formats, exit codes, determinism."""

import json
import math

import pytest

from reachvol.cli import main
from reachvol.zonotope import determinant_count


@pytest.fixture
def diag_model(tmp_path):
    path = tmp_path / "diag05_08.json"
    path.write_text('{"A": [[0.5, 0.0], [0.0, 0.8]], "B": [[1.0], [1.0]]}')
    return str(path)


@pytest.fixture
def spectral_model(tmp_path):
    path = tmp_path / "spectral.json"
    path.write_text('{"lambda": [0.5, 0.8], "beta": [1.0, 1.0]}')
    return str(path)


@pytest.fixture
def mixed_model(tmp_path):
    path = tmp_path / "mixed.json"
    path.write_text('{"lambda": [-0.5, 0.5], "beta": [1.0, 1.0]}')
    return str(path)


@pytest.fixture
def narrow_model(tmp_path):
    path = tmp_path / "narrow.json"
    path.write_text('{"lambda": [1.25, 2.0], "beta": [1.0, 1.0]}')
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestVolumeCommand:
    def test_known_volume(self, capsys, diag_model):
        code, out, _ = run(capsys, "volume", "--model", diag_model, "--N", "2")
        assert code == 0
        doc = json.loads(out)
        assert doc["volume"] == pytest.approx(1.2, rel=1e-12)
        assert doc["route"] == "analytic"
        assert doc["spectrum"] == "AllPositiveDistinct"
        assert len(doc["terms"]) == 4

    def test_direct_and_analytic_agree(self, capsys, diag_model):
        code_a, out_a, _ = run(capsys, "volume", "--model", diag_model,
                               "--N", "6", "--route", "analytic")
        code_d, out_d, _ = run(capsys, "volume", "--model", diag_model,
                               "--N", "6", "--route", "direct")
        assert code_a == 0 and code_d == 0
        va = json.loads(out_a)["volume"]
        vd = json.loads(out_d)["volume"]
        assert va == pytest.approx(vd, rel=1e-9)

    def test_mixed_sign_analytic_domain_error(self, capsys, mixed_model):
        code, _, err = run(capsys, "volume", "--model", mixed_model,
                           "--N", "4", "--route", "analytic")
        assert code == 2
        assert "MixedSign" in err

    def test_malformed_json_exit_1(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"A": [[0.5,]]}')
        code, _, err = run(capsys, "volume", "--model", str(bad), "--N", "2")
        assert code == 1
        assert "line" in err

    def test_infinite_horizon_without_N(self, capsys, spectral_model):
        code, out, _ = run(capsys, "volume", "--model", spectral_model)
        assert code == 0
        doc = json.loads(out)
        assert doc["route"] == "infinite"
        assert doc["volume"] == pytest.approx(20.0, rel=1e-12)

    def test_narrow_mode_routes_agree(self, capsys, narrow_model):
        vols = {}
        for route in ("analytic", "direct", "recursive"):
            code, out, _ = run(capsys, "volume", "--model", narrow_model,
                               "--N", "4", "--mode", "narrow", "--route", route)
            assert code == 0
            vols[route] = json.loads(out)["volume"]
        assert vols["direct"] == pytest.approx(vols["analytic"], rel=1e-9)
        assert vols["recursive"] == pytest.approx(vols["analytic"], rel=1e-9)

    def test_negative_mode(self, capsys, tmp_path):
        path = tmp_path / "neg.json"
        path.write_text('{"lambda": [-0.8, -0.3], "beta": [1.0, 1.0]}')
        vols = {}
        for route in ("analytic", "direct"):
            code, out, _ = run(capsys, "volume", "--model", str(path),
                               "--N", "5", "--mode", "negative", "--route", route)
            assert code == 0
            vols[route] = json.loads(out)["volume"]
        assert vols["direct"] == pytest.approx(vols["analytic"], rel=1e-9)

    def test_continuous_mode(self, capsys, tmp_path):
        path = tmp_path / "ct.json"
        path.write_text('{"lambda": [-1.0], "beta": [1.0]}')
        code, out, _ = run(capsys, "volume", "--model", str(path),
                           "--T", "1.0", "--mode", "continuous")
        assert code == 0
        assert json.loads(out)["volume"] == pytest.approx(
            2 * (1 - math.exp(-1.0)), rel=1e-12)
        # direct continuous needs --dt
        code, _, err = run(capsys, "volume", "--model", str(path),
                           "--T", "1.0", "--mode", "continuous", "--route", "direct")
        assert code == 1
        code, out, _ = run(capsys, "volume", "--model", str(path), "--T", "1.0",
                           "--mode", "continuous", "--route", "direct", "--dt", "0.001")
        assert code == 0
        assert json.loads(out)["volume"] == pytest.approx(
            2 * (1 - math.exp(-1.0)), rel=1e-2)

    def test_csv_format(self, capsys, diag_model):
        code, out, _ = run(capsys, "volume", "--model", diag_model, "--N", "2",
                           "--format", "csv")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "volume,normalized_sum"
        vol = float(lines[1].split(",")[0])
        assert vol == pytest.approx(1.2, rel=1e-12)

    def test_deterministic_output(self, capsys, diag_model):
        _, out1, _ = run(capsys, "volume", "--model", diag_model, "--N", "7")
        _, out2, _ = run(capsys, "volume", "--model", diag_model, "--N", "7")
        assert out1 == out2


class TestFactorsCommand:
    def test_infinite_factor_report(self, capsys, spectral_model):
        code, out, _ = run(capsys, "factors", "--model", spectral_model)
        assert code == 0
        doc = json.loads(out)
        assert doc["F1"] == pytest.approx(0.3 / 0.6)
        assert doc["F2"] == pytest.approx([2.0, 5.0])
        assert doc["F3"] == pytest.approx([1.0, 1.0])
        assert doc["p_minus"] == [1, 2]

    def test_finite_factor_report(self, capsys, spectral_model):
        code, out, _ = run(capsys, "factors", "--model", spectral_model, "--N", "3")
        assert code == 0
        doc = json.loads(out)
        assert doc["F2"][0] == pytest.approx(1.75)
        assert doc["horizon_kind"] == "finite"

    def test_csv_rows(self, capsys, spectral_model):
        code, out, _ = run(capsys, "factors", "--model", spectral_model,
                           "--format", "csv")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "i,lambda,side_length,modal,shape_factor"
        assert len(lines) == 3


class TestSweepCommand:
    def test_monotone_volume_and_limit(self, capsys, diag_model):
        code, out, _ = run(capsys, "sweep", "--model", diag_model, "--N", "20")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "N,V_N,volume,phi_inf,tail"
        rows = [list(map(float, ln.split(","))) for ln in lines[1:]]
        assert [int(r[0]) for r in rows] == list(range(2, 21))
        vn = [r[1] for r in rows]
        assert all(b >= a for a, b in zip(vn, vn[1:]))
        # final row close to the infinite-horizon value 5 (term-magnitude bound)
        assert abs(vn[-1] - 5.0) <= 25 * 0.8 ** 20
        assert rows[-1][3] == pytest.approx(5.0, rel=1e-12)

    def test_narrow_sweep_bounded(self, capsys, narrow_model):
        code, out, _ = run(capsys, "sweep", "--model", narrow_model, "--N", "30",
                           "--mode", "narrow")
        assert code == 0
        lines = out.strip().split("\n")
        rows = [list(map(float, ln.split(","))) for ln in lines[1:]]
        vols = [r[2] for r in rows]
        assert all(v <= 8.0 + 1e-9 for v in vols)
        assert vols[-1] == pytest.approx(8.0, abs=0.05)

    def test_empty_range_exit_1(self, capsys, diag_model):
        code, _, err = run(capsys, "sweep", "--model", diag_model, "--N", "1")
        assert code == 1

    def test_deterministic(self, capsys, diag_model):
        _, out1, _ = run(capsys, "sweep", "--model", diag_model, "--N", "12")
        _, out2, _ = run(capsys, "sweep", "--model", diag_model, "--N", "12")
        assert out1 == out2


class TestBenchCommand:
    def test_ladder_counts(self, capsys, tmp_path):
        path = tmp_path / "bench.json"
        path.write_text('{"lambda": [0.2, 0.5, 0.8], "beta": [1.0, 1.0, 1.0]}')
        code, out, _ = run(capsys, "bench", "--model", str(path), "--N", "32",
                           "--trials", "1")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "N,det_count,direct_ms,recursive_ms,analytic_ms"
        rows = [ln.split(",") for ln in lines[1:]]
        assert [int(r[0]) for r in rows] == [8, 16, 32]
        assert [int(float(r[1])) for r in rows] == [
            determinant_count(8, 3), determinant_count(16, 3),
            determinant_count(32, 3)]
        assert [int(float(r[1])) for r in rows] == [56, 560, 4960]
        assert all(float(r[4]) > 0 for r in rows)

    def test_direct_route_skipped_over_budget(self, capsys, tmp_path):
        path = tmp_path / "bench.json"
        path.write_text('{"lambda": [0.2, 0.5, 0.8], "beta": [1.0, 1.0, 1.0]}')
        code, out, _ = run(capsys, "bench", "--model", str(path), "--N", "2048",
                           "--trials", "1")
        assert code == 0
        last = out.strip().split("\n")[-1].split(",")
        assert int(last[0]) == 2048
        assert last[2] == "nan"  # direct column skipped, not an error
        assert float(last[3]) > 0 and float(last[4]) > 0


class TestCheckCommand:
    def test_default_suite_passes(self, capsys):
        code, out, err = run(capsys, "check", "--trials", "25", "--seed", "0")
        assert code == 0, err
        doc = json.loads(out)
        assert doc["all_pass"] is True
        props = doc["properties"]
        for name in ("vandermonde_positivity", "deletion_identity",
                     "substitution_identities", "three_route_equivalence",
                     "form_equivalence", "narrow_broad_duality",
                     "singular_fallback"):
            assert props[name]["passes"] == props[name]["total"]

    def test_zero_trials_exit_1(self, capsys):
        code, _, _ = run(capsys, "check", "--trials", "0")
        assert code == 1

    def test_deterministic(self, capsys):
        _, out1, _ = run(capsys, "check", "--trials", "5", "--seed", "3")
        _, out2, _ = run(capsys, "check", "--trials", "5", "--seed", "3")
        assert out1 == out2

    def test_csv_format(self, capsys):
        code, out, _ = run(capsys, "check", "--trials", "3", "--format", "csv")
        assert code == 0
        assert out.startswith("property,passes,total")


class TestUsageErrors:
    def test_unknown_route_exit_1(self, capsys, diag_model):
        code = main(["volume", "--model", diag_model, "--N", "2",
                     "--route", "bogus"])
        capsys.readouterr()
        assert code == 1

    def test_missing_model_exit_1(self, capsys):
        code = main(["volume", "--N", "2"])
        capsys.readouterr()
        assert code == 1

    def test_nonexistent_model_file(self, capsys):
        code, _, err = run(capsys, "volume", "--model", "/nonexistent.json",
                           "--N", "2")
        assert code == 1
