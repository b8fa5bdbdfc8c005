import json

import pytest

from contactcurv.cli import catalog_listing, fuzz, load_scenario, main, run_scenario, SchemaError


def write_scenario(tmp_path, data, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def sphere_scenario(**overrides):
    data = {
        "schema": 1,
        "ambient": {"m": 2, "c": 0.0, "f": 0.0, "f_prime": 0.0},
        "submanifold": {
            "kind": "immersion",
            "name": "sphere_cylinder",
            "params": {"r": 1.0},
            "chart_point": [0.3, 0.8, 0.1],
        },
        "k": [2, 3],
        "search": {"restarts": 4, "net_size": 64},
    }
    data.update(overrides)
    return data


def algebraic_scenario():
    frame = [[0.0] * 4 + [1.0], [1.0] + [0.0] * 4, [0.0, 0.0, 1.0, 0.0, 0.0]]
    zero = [[0.0] * 3 for _ in range(3)]
    return {
        "schema": 1,
        "ambient": {"m": 2, "c": 4.0, "f": 0.0, "f_prime": 0.0},
        "submanifold": {"kind": "algebraic_point", "frame": frame, "sigma": [zero, zero]},
        "checks": ["structure", "identity_tau", "scalar", "ricci", "classify"],
    }


class TestLoadScenario:
    def test_valid(self, tmp_path):
        path = write_scenario(tmp_path, sphere_scenario())
        assert load_scenario(path)["schema"] == 1

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(SchemaError, match="invalid JSON"):
            load_scenario(str(path))

    def test_missing_ambient_field(self, tmp_path):
        data = sphere_scenario()
        del data["ambient"]["f_prime"]
        with pytest.raises(SchemaError, match="ambient.f_prime"):
            load_scenario(write_scenario(tmp_path, data))

    def test_wrong_schema_version(self, tmp_path):
        with pytest.raises(SchemaError, match="schema"):
            load_scenario(write_scenario(tmp_path, sphere_scenario(schema=99)))

    def test_unknown_check(self, tmp_path):
        with pytest.raises(SchemaError, match="unknown check"):
            load_scenario(write_scenario(tmp_path, sphere_scenario(checks=["bogus"])))

    def test_unknown_immersion(self, tmp_path):
        data = sphere_scenario()
        data["submanifold"]["name"] = "moebius"
        with pytest.raises(SchemaError, match="unknown immersion"):
            load_scenario(write_scenario(tmp_path, data))


class TestRunScenario:
    def test_sphere_all_checks_pass(self, tmp_path):
        path = write_scenario(tmp_path, sphere_scenario())
        out = tmp_path / "report.json"
        report, code = run_scenario(path, out=str(out))
        assert code == 0
        assert report["verdict"] is True
        names = {entry["check"] for entry in report["checks"]}
        assert {"structure", "identity_tau", "scalar", "ricci", "k_ricci", "gauss_oracle"} <= names
        on_disk = json.loads(out.read_text())
        assert on_disk == json.loads(json.dumps(report))

    def test_algebraic_point(self, tmp_path):
        path = write_scenario(tmp_path, algebraic_scenario())
        report, code = run_scenario(path, out=str(tmp_path / "r.json"))
        assert code == 0
        assert report["classification"]["kind"] == "invariant"

    def test_failing_tolerance_exit_1(self, tmp_path):
        data = sphere_scenario(checks=["gauss_oracle"], tolerances={"gauss_oracle": 1e-12})
        report, code = run_scenario(write_scenario(tmp_path, data), out=str(tmp_path / "r.json"))
        assert code == 1
        assert report["verdict"] is False

    def test_k_out_of_range_exit_2(self, tmp_path):
        data = sphere_scenario(k=[7])
        report, code = run_scenario(write_scenario(tmp_path, data), out=str(tmp_path / "r.json"))
        assert code == 2
        assert "k out of range" in report["error"]

    def test_missing_file_exit_2(self, tmp_path):
        report, code = run_scenario(str(tmp_path / "nope.json"), out=str(tmp_path / "r.json"))
        assert code == 2
        assert "error" in report

    def test_gauss_oracle_needs_immersion(self, tmp_path):
        data = algebraic_scenario()
        data["checks"] = ["gauss_oracle"]
        report, code = run_scenario(write_scenario(tmp_path, data), out=str(tmp_path / "r.json"))
        assert code == 2
        assert "gauss_oracle" in report["error"]


class TestFuzz:
    def test_small_run_clean(self):
        summary, code = fuzz(n=3, m=2, trials=20, seed=7)
        assert code == 0
        assert summary["violations"] == 0
        assert summary["max_identity_residual_tau"] < 1e-9
        assert all(v >= -1e-9 for v in summary["min_normalized_slack"].values())

    def test_sigma_scale_zero_forces_equalities(self):
        summary, code = fuzz(n=3, m=2, trials=10, seed=3, sigma_scale=0.0)
        assert code == 0
        assert summary["equality_all_trials"]["scalar-lc"] is True

    def test_generic_draws_break_equalities(self):
        summary, _ = fuzz(n=3, m=2, trials=10, seed=3, sigma_scale=1.0)
        assert summary["equality_all_trials"]["scalar-lc"] is False

    def test_bad_dimensions_rejected(self):
        with pytest.raises(SchemaError):
            fuzz(n=9, m=2, trials=1, seed=0)
        with pytest.raises(SchemaError):
            fuzz(n=3, m=2, trials=0, seed=0)

    def test_deterministic_across_jobs(self, tmp_path):
        out1 = tmp_path / "jobs1.json"
        out2 = tmp_path / "jobs2.json"
        assert main(["fuzz", "--n", "3", "--m", "2", "--trials", "40", "--seed", "42",
                     "--jobs", "1", "--out", str(out1)]) == 0
        assert main(["fuzz", "--n", "3", "--m", "2", "--trials", "40", "--seed", "42",
                     "--jobs", "2", "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()


class TestMain:
    def test_verify_exit_code(self, tmp_path):
        path = write_scenario(tmp_path, sphere_scenario())
        assert main(["verify", "--scenario", path, "--out", str(tmp_path / "r.json")]) == 0

    def test_catalog(self, capsys):
        assert main(["catalog"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert "sphere_cylinder" in out["catalog"]
        assert set(catalog_listing()) == set(out["catalog"])

    def test_fuzz_bad_args_exit_2(self, capsys):
        assert main(["fuzz", "--n", "9", "--m", "2", "--trials", "1"]) == 2
        assert "error" in capsys.readouterr().err
