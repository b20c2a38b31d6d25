import json
import pathlib

import pandas as pd
import pytest
import yaml

from rtspectra.errors import ConfigurationError
from rtspectra.run.cli import THREADS_ENV, main, resolve_threads
from rtspectra.run.commands import run_command
from rtspectra.run.config import RunConfig, load_config

from .conftest import reference_physics

CONFIGS = pathlib.Path(__file__).resolve().parents[1] / "configs"


def _config(**sections):
    d = {"physics": reference_physics(), "numerics": {"elements_per_layer": 8}}
    d.update(sections)
    return d


def _write(tmp_path, d, name="run.json"):
    path = tmp_path / name
    if name.endswith(".json"):
        path.write_text(json.dumps(d))
    else:
        path.write_text(yaml.safe_dump(d))
    return str(path)


def test_minimal_config_fills_defaults():
    cfg = RunConfig.from_dict({"physics": reference_physics()})
    assert cfg.numerics.elements_per_layer == 64
    assert cfg.numerics.tol == 1e-10
    assert cfg.numerics.profile_nodes == 65
    assert cfg.scan.kind == "ray"
    assert cfg.cutoff.ns == (8.0, 16.0, 32.0)
    assert cfg.outputs.formats == ("csv", "json")
    assert cfg.to_dict()["physics"]["theta"] == 0.2


def test_physics_errors_carry_the_path():
    physics = reference_physics()
    physics["mu_plus"] = -1.0
    with pytest.raises(ConfigurationError) as info:
        RunConfig.from_dict({"physics": physics})
    assert info.value.field == "physics.mu_plus"
    assert info.value.exit_code == 2


def test_missing_physics_key():
    physics = reference_physics()
    del physics["g"]
    with pytest.raises(ConfigurationError, match="missing"):
        RunConfig.from_dict({"physics": physics})


def test_unknown_key_suggests_a_match():
    with pytest.raises(ConfigurationError, match="did you mean 'numerics'"):
        RunConfig.from_dict({"physics": reference_physics(), "numercs": {}})
    with pytest.raises(ConfigurationError) as info:
        RunConfig.from_dict(_config(scan={"n_sample": 4}))
    assert info.value.field == "scan.n_sample"


@pytest.mark.parametrize(
    "section, values, field",
    [
        ("evolve", {"dt": 0.0}, "evolve.dt"),
        ("numerics", {"elements_per_layer": 2}, "numerics.elements_per_layer"),
        ("escape", {"delta": 2.0}, "escape.delta"),
        ("scan", {"xi_min": 1.0, "xi_max": 0.5}, "scan.xi_max"),
        ("outputs", {"formats": ["xml"]}, "outputs.formats"),
    ],
)
def test_section_validation(section, values, field):
    with pytest.raises(ConfigurationError) as info:
        RunConfig.from_dict({"physics": reference_physics(), section: values})
    assert info.value.field == field


def test_yaml_and_json_agree(tmp_path):
    d = _config(scan={"periods": [1.0, 2.0]})
    from_json = load_config(_write(tmp_path, d, "run.json"))
    from_yaml = load_config(_write(tmp_path, d, "run.yaml"))
    assert from_json == from_yaml
    assert from_yaml.scan.periods == (1.0, 2.0)


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigurationError):
        load_config(str(tmp_path / "absent.json"))


def test_equilibrium_command(tmp_path):
    cfg = RunConfig.from_dict(_config())
    assert run_command("equilibrium", cfg, str(tmp_path)) == 0
    table = pd.read_csv(tmp_path / "equilibrium.csv")
    assert list(table.columns) == ["y3", "layer", "rho_bar", "pressure", "pprime_rho"]
    assert set(table["layer"]) == {"lower", "upper"}
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["command"] == "equilibrium"
    assert (tmp_path / "effective_config.json").is_file()


def test_all_stable_dispersion(tmp_path):
    cfg = RunConfig.from_dict(
        _config(scan={"xi_min": 2.5, "xi_max": 4.0, "n_samples": 4})
    )
    assert run_command("dispersion", cfg, str(tmp_path)) == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["verdict"] == "stable"
    assert summary["xi1"] == []
    assert summary["Lambda"] == 0.0
    assert summary["T_delta"] is None


def test_periodic_dispersion_summary(tmp_path):
    cfg = RunConfig.from_dict(
        _config(scan={"n_samples": 4, "periods": [0.2236, 0.2236]})
    )
    assert run_command("dispersion", cfg, str(tmp_path)) == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["verdict"] == "stable"
    assert summary["R"] == pytest.approx(4.0, rel=1e-3)


def test_dispersion_is_deterministic(tmp_path):
    cfg = RunConfig.from_dict(_config(scan={"n_samples": 6}))
    outputs = []
    for run in ("a", "b"):
        out = tmp_path / run
        assert run_command("dispersion", cfg, str(out)) == 0
        outputs.append(
            [(out / name).read_bytes() for name in ("dispersion.csv", "summary.json")]
        )
    assert outputs[0] == outputs[1]


def test_mode_without_growth_fails(tmp_path):
    cfg = RunConfig.from_dict(_config(mode={"xi": [3.0, 0.0]}))
    assert run_command("mode", cfg, str(tmp_path)) == 2


def test_unknown_command(tmp_path):
    cfg = RunConfig.from_dict(_config())
    assert run_command("plot", cfg, str(tmp_path)) == 2


def test_json_only_outputs(tmp_path):
    cfg = RunConfig.from_dict(_config(outputs={"formats": ["json"]}))
    assert run_command("equilibrium", cfg, str(tmp_path)) == 0
    assert not (tmp_path / "equilibrium.csv").exists()
    assert (tmp_path / "summary.json").is_file()


def test_cli_missing_config(tmp_path):
    assert main(["dispersion", "--config", str(tmp_path / "absent.json")]) == 2


def test_cli_runs_a_command(tmp_path):
    path = _write(tmp_path, _config())
    out = tmp_path / "out"
    assert main(["equilibrium", "--config", path, "--out", str(out)]) == 0
    assert (out / "equilibrium.csv").is_file()


def test_threads_environment_takes_precedence(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "3")
    assert resolve_threads(1) == 3
    monkeypatch.setenv(THREADS_ENV, "zero")
    with pytest.raises(ConfigurationError):
        resolve_threads(None)
    monkeypatch.delenv(THREADS_ENV)
    assert resolve_threads(2) == 2
    assert resolve_threads(None) is None
    with pytest.raises(ConfigurationError):
        resolve_threads(0)


def test_verify_subset(tmp_path):
    cfg = RunConfig.from_dict(
        _config(
            numerics={"elements_per_layer": 32},
            scan={"n_samples": 6},
            verify={
                "properties": [
                    "equilibrium_residual",
                    "pressure_mismatch",
                    "alpha_monotone",
                    "periodic_threshold",
                ]
            },
        )
    )
    assert run_command("verify", cfg, str(tmp_path)) == 0
    table = pd.read_csv(tmp_path / "verify.csv")
    assert len(table) == 4
    assert table["passed"].all()
    report = json.loads((tmp_path / "verify.json").read_text())
    assert report["all_passed"]


def test_verify_unknown_property(tmp_path):
    cfg = RunConfig.from_dict(
        _config(scan={"n_samples": 4}, verify={"properties": ["speed"]})
    )
    assert run_command("verify", cfg, str(tmp_path)) == 2


@pytest.mark.slow
def test_reference_verification(tmp_path):
    cfg = load_config(str(CONFIGS / "reference.json"))
    assert run_command("verify", cfg, str(tmp_path)) == 0
    report = json.loads((tmp_path / "verify.json").read_text())
    assert report["all_passed"]


def test_misspelled_physics_key():
    physics = reference_physics()
    physics["viscocity"] = 0.1
    with pytest.raises(ConfigurationError, match="unknown key 'viscocity'") as info:
        RunConfig.from_dict({"physics": physics})
    assert info.value.field == "physics.viscocity"


@pytest.mark.parametrize(
    "section, values, field",
    [
        ("numerics", {"tol": "1e-10"}, "numerics.tol"),
        ("numerics", {"elements_per_layer": 32.5}, "numerics.elements_per_layer"),
        ("numerics", {"elements_per_layer": True}, "numerics.elements_per_layer"),
        ("scan", {"densify": "yes"}, "scan.densify"),
        ("scan", {"direction": [1.0]}, "scan.direction"),
        ("cutoff", {"ns": 8}, "cutoff.ns"),
    ],
)
def test_wrongly_typed_values_are_rejected(section, values, field):
    with pytest.raises(ConfigurationError) as info:
        RunConfig.from_dict({"physics": reference_physics(), section: values})
    assert info.value.field == field


def test_integral_float_is_accepted_as_int():
    cfg = RunConfig.from_dict(
        _config(numerics={"elements_per_layer": 32.0}, threads=2.0)
    )
    assert cfg.numerics.elements_per_layer == 32
    assert isinstance(cfg.numerics.elements_per_layer, int)
    assert cfg.threads == 2


def test_cli_string_tolerance_exits_2(tmp_path):
    path = _write(tmp_path, _config(numerics={"tol": "1e-10"}))
    assert main(["dispersion", "--config", path, "--out", str(tmp_path)]) == 2


def test_reference_config_densifies():
    assert load_config(str(CONFIGS / "reference.json")).scan.densify
    assert not RunConfig.from_dict(_config()).scan.densify


def test_densified_dispersion_reports_refinement(tmp_path):
    cfg = RunConfig.from_dict(_config(scan={"n_samples": 4, "densify": True}))
    assert run_command("dispersion", cfg, str(tmp_path)) == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert isinstance(summary["refinement_stable"], bool)
