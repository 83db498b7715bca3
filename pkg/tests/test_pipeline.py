import csv
import json

import pytest
from pydantic import ValidationError

from app.core.errors import EXIT_CONFIG_ERROR, EXIT_OK, EXIT_TOLERANCE_FAILURE, ConfigError
from app.db.report_repo import ReportRepo
from app.langgraph.nodes.load_config import read_config
from app.logical.catalog import TABLE_GATES, GateKind
from app.main import main, run_experiment
from app.schemas.common import Check, GateRecord, SweepResult
from app.schemas.config import ExperimentConfig, NoiseParameters


def write_config(tmp_path, document, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(document), encoding="utf-8")
    return str(path)


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as handle:
        return list(csv.reader(handle))


class TestVerifyGates:
    def test_default_catalog_passes(self, tmp_path):
        out = tmp_path / "gates.json"
        assert main(["verify-gates", "--out", str(out)]) == EXIT_OK
        report = json.loads(out.read_text())
        assert report["passed"] is True
        assert report["exit_code"] == EXIT_OK
        names = [r["name"] for r in report["records"]]
        assert names == sorted(g.value for g in TABLE_GATES)
        assert all(r["metrics"]["phase_aware_distance"] < 1e-9 for r in report["records"])

    def test_impossible_tolerance_fails(self, tmp_path):
        out = tmp_path / "strict.json"
        assert main(["verify-gates", "--gates", "CZ", "--tolerance", "1e-18", "--out", str(out)]) == EXIT_TOLERANCE_FAILURE
        report = json.loads(out.read_text())
        assert report["records"][0]["checks"][0]["passed"] is False

    def test_gate_selection(self, tmp_path):
        out = tmp_path / "st.json"
        assert main(["verify-gates", "--gates", "t,S", "--out", str(out)]) == EXIT_OK
        assert [r["name"] for r in json.loads(out.read_text())["records"]] == ["S", "T"]

    def test_default_report_location(self, report_dir):
        assert main(["verify-gates", "--gates", "X"]) == EXIT_OK
        (written,) = report_dir.glob("verify-gates-*.json")
        report = json.loads(written.read_text())
        assert written.name == f"verify-gates-{report['experiment_id'][:12]}.json"


class TestConfigErrors:
    def test_unknown_key(self, tmp_path):
        path = write_config(tmp_path, {"spin": {"omega": 1.0, "bogus": 2}})
        assert main(["verify-gates", "--config", path]) == EXIT_CONFIG_ERROR

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        assert main(["verify-gates", "--config", str(path)]) == EXIT_CONFIG_ERROR

    def test_missing_file_writes_nothing(self, tmp_path):
        state = run_experiment("verify-gates", str(tmp_path / "absent.json"))
        assert state["exit_code"] == EXIT_CONFIG_ERROR
        assert "report" not in state

    def test_unknown_gate(self, tmp_path):
        assert main(["verify-gates", "--gates", "SWAP", "--out", str(tmp_path / "x.json")]) == EXIT_CONFIG_ERROR

    def test_read_config_raises_config_error(self, tmp_path):
        path = write_config(tmp_path, {"trials": 0})
        with pytest.raises(ConfigError) as excinfo:
            read_config("verify-gates", path)
        assert excinfo.value.exit_code == EXIT_CONFIG_ERROR
        assert isinstance(excinfo.value.__cause__, ValidationError)

    def test_overrides_layer_over_file(self, tmp_path):
        path = write_config(tmp_path, {"seed": 3, "noise": {"cycles": 2}})
        config = read_config("noise-sweep", path, {"noise": {"with_dd": True}})
        assert config.seed == 3
        assert config.noise.cycles == 2 and config.noise.with_dd

    def test_defaults_round_trip(self, capsys):
        assert main(["defaults"]) == EXIT_OK
        printed = capsys.readouterr().out
        assert ExperimentConfig.model_validate_json(printed) == ExperimentConfig()


class TestVerifyProtection:
    def test_clean_certificates_pass(self, tmp_path):
        out = tmp_path / "protection.json"
        path = write_config(tmp_path, {"protection": {"samples": 20}})
        assert main(["verify-protection", "--config", path, "--out", str(out)]) == EXIT_OK
        names = {r["name"] for r in json.loads(out.read_text())["records"]}
        assert {"identity", "dd_commutators", "dd_suppression", "dfs:single", "dfs:two", "holonomy:CZ"} <= names

    def test_injected_detuning_fails(self, tmp_path):
        out = tmp_path / "detuned.json"
        path = write_config(tmp_path, {"protection": {"samples": 20, "inject_detuning": 0.01}})
        assert main(["verify-protection", "--config", path, "--gates", "X", "--out", str(out)]) == EXIT_TOLERANCE_FAILURE
        records = {r["name"]: r for r in json.loads(out.read_text())["records"]}
        assert records["holonomy:X"]["passed"] is False
        assert records["identity"]["passed"] is True


class TestNoiseSweep:
    def test_collective_sweep_csv(self, tmp_path):
        out = tmp_path / "collective.json"
        path = write_config(tmp_path, {"noise": {"kind": "collective_z"}})
        assert main(["noise-sweep", "--config", path, "--trials", "3", "--out", str(out)]) == EXIT_OK
        rows = read_csv(tmp_path / "collective.csv")
        assert rows[0] == ["magnitude", "mean_fidelity", "min_fidelity"]
        assert len(rows) == 5
        assert all(abs(float(row[1]) - 1.0) < 1e-10 for row in rows[1:])

    def test_decoupled_sweep_header(self, tmp_path):
        out = tmp_path / "dd.json"
        path = write_config(tmp_path, {"noise": {"kind": "independent_z", "gate": "Z", "with_dd": True, "cycles": 2}})
        assert main(["noise-sweep", "--config", path, "--trials", "2", "--out", str(out)]) == EXIT_OK
        header = read_csv(tmp_path / "dd.csv")[0]
        assert header[-2:] == ["mean_fidelity_dd", "min_fidelity_dd"]
        assert "sweep" in json.loads(out.read_text())

    def test_unsorted_grid_written_in_ascending_order(self, tmp_path):
        out = tmp_path / "unsorted.json"
        path = write_config(tmp_path, {"noise": {"kind": "static_detuning", "magnitudes": [0.03, 0.0, 0.01, 0.003]}})
        assert main(["noise-sweep", "--config", path, "--trials", "8", "--out", str(out)]) == EXIT_OK
        axis = [float(row[0]) for row in read_csv(tmp_path / "unsorted.csv")[1:]]
        assert axis == sorted(axis)
        (record,) = json.loads(out.read_text())["records"]
        assert record["metrics"]["monotone_infidelity"] == 1.0

    def test_same_seed_same_report(self, tmp_path):
        out = tmp_path / "repeat.json"
        argv = ["noise-sweep", "--trials", "3", "--seed", "11", "--out", str(out)]
        reports = []
        for _ in range(2):
            assert main(argv) == EXIT_OK
            reports.append(json.loads(out.read_text()))
        first, second = reports
        assert first["experiment_id"] == second["experiment_id"]
        assert first["records"] == second["records"]
        assert first["sweep"] == second["sweep"]


@pytest.mark.slow
def test_simulate_qrm_z_gate(tmp_path):
    out = tmp_path / "qrm.json"
    assert main(["simulate-qrm", "--gates", "Z", "--trials", "2", "--out", str(out)]) == EXIT_OK
    (record,) = json.loads(out.read_text())["records"]
    assert record["metrics"]["mean_fidelity"] >= 0.999


class TestSchemas:
    def test_check_directions(self):
        assert Check(metric="m", value=1e-12, tolerance=1e-9).passed
        assert not Check(metric="m", value=0.99, tolerance=0.999, comparison="min").passed

    def test_errored_record_fails(self):
        record = GateRecord(name="X", error="LeakageDetected: boom")
        assert not record.passed
        assert record.report_dict()["passed"] is False

    def test_sweep_columns_must_align(self):
        with pytest.raises(ValidationError):
            SweepResult(channel="c", gate="S", axis=[0.0, 1.0], fidelities=[1.0], min_fidelities=[1.0])

    def test_gate_list_normalized(self):
        config = ExperimentConfig(gates=" t, s,T ")
        assert config.gates == [GateKind.S, GateKind.T]

    def test_empty_gate_list_rejected(self):
        with pytest.raises(ValidationError):
            ExperimentConfig(gates=[])

    def test_unknown_section_rejected(self):
        with pytest.raises(ValidationError):
            ExperimentConfig.model_validate({"extras": {}})

    def test_csv_keeps_full_precision(self, tmp_path):
        sweep = SweepResult(channel="c", gate="S", axis=[0.1], fidelities=[1.0 - 1e-13], min_fidelities=[0.5])
        path = ReportRepo(str(tmp_path)).save_sweep_csv(tmp_path / "s.csv", sweep)
        assert float(read_csv(path)[1][1]) == 1.0 - 1e-13

    def test_noise_grid_sorted_and_deduplicated(self):
        assert NoiseParameters(magnitudes=[0.1, 0.0, 0.01, 0.1]).magnitudes == [0.0, 0.01, 0.1]

    @pytest.mark.parametrize("magnitudes", [[], [0.0, -0.01], [0.0, float("inf")]])
    def test_noise_grid_rejects_bad_values(self, magnitudes):
        with pytest.raises(ValidationError):
            NoiseParameters(magnitudes=magnitudes)

    def test_bad_noise_grid_is_a_config_error(self, tmp_path):
        path = write_config(tmp_path, {"noise": {"magnitudes": [-1.0]}})
        assert main(["noise-sweep", "--config", path, "--out", str(tmp_path / "n.json")]) == EXIT_CONFIG_ERROR
