from pathlib import Path

import orjson
import pandas as pd
import pytest

from apps.metapop_cli.cli import main
from apps.metapop_cli.sweep import apply_point, parse_sweep
from packages.core.errors import DocumentError

MODELS = Path(__file__).resolve().parent.parent / "config" / "models"
TWO_PATCH = str(MODELS / "two_patch.json")


def _write(path: Path, document) -> str:
    path.write_bytes(orjson.dumps(document))
    return str(path)


def test_analyze_writes_reports(tmp_path):
    out = tmp_path / "out"
    assert main(["analyze", "--model", TWO_PATCH, "--out", str(out)]) == 0
    report = orjson.loads((out / "report.json").read_bytes())
    assert report["rho_spectral"] == pytest.approx(1.25)
    assert (out / "report.csv").read_text().startswith("quantity,value,route,tolerance,status")


def test_malformed_model_is_an_input_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"builder": {"family": "two_patch",\n "M": 2,,}}')
    assert main(["analyze", "--model", str(bad), "--out", str(tmp_path / "out")]) == 1
    assert "line 2" in capsys.readouterr().err


def test_invalid_graph_is_an_input_error(tmp_path):
    model = _write(
        tmp_path / "m.json",
        {"patches": [1, 2], "dispersal": [[1.0, 0.0], [0.5, 0.5]], "mean_offspring": {"1": 2, "2": 0.5}},
    )
    assert main(["analyze", "--model", model, "--out", str(tmp_path / "out")]) == 1


def test_forced_inconsistency_exits_2(tmp_path, monkeypatch):
    monkeypatch.setenv("METAPOP_TEST_FAULT", "variational")
    assert main(["analyze", "--model", TWO_PATCH, "--out", str(tmp_path / "out")]) == 2
    report = orjson.loads((tmp_path / "out" / "report.json").read_bytes())
    failed = {c["name"] for c in report["cross_checks"] if c["status"] == "fail"}
    assert "log_rho_spectral_vs_variational" in failed


def test_simulate_needs_seed(tmp_path):
    assert main(["simulate", "--model", TWO_PATCH, "--out", str(tmp_path / "out")]) == 1


def test_simulate_is_reproducible(tmp_path):
    outputs = []
    for name in ("a", "b"):
        out = tmp_path / name
        args = ["simulate", "--model", TWO_PATCH, "--generations", "40", "--replicates", "50"]
        assert main(args + ["--seed", "42", "--out", str(out)]) == 0
        outputs.append(out)
    for filename in ("trajectories.csv", "lineage.csv", "summary.json"):
        assert (outputs[0] / filename).read_bytes() == (outputs[1] / filename).read_bytes()
    frame = pd.read_csv(outputs[0] / "trajectories.csv")
    assert list(frame.columns) == ["generation", "patch", "count", "replicate"]
    summary = orjson.loads((outputs[0] / "summary.json").read_bytes())
    assert summary["rho"] == pytest.approx(1.25)
    assert len(summary["normalized_final"]) == summary["summary"]["survivors"]


def test_sweep_finds_the_persistence_flip(tmp_path):
    model = _write(
        tmp_path / "model.json",
        {"builder": {"family": "two_patch", "M": 1.0, "m": 1.0, "p": 0.5, "q": 0.5}},
    )
    env = _write(
        tmp_path / "env.json",
        {"kind": "periodic", "means": [{"1": 3.0, "2": 0.5}, {"1": 0.5, "2": 0.5}]},
    )
    out = tmp_path / "out"
    code = main(
        [
            "sweep", "--model", model, "--env", env, "--out", str(out),
            "--sweep", "env.means.0.2,env.means.1.2=0.5:1.0:6",
        ]
    )
    assert code == 0
    frame = pd.read_csv(out / "sweep.csv")
    assert list(frame["persists"]) == ["no", "no", "yes", "yes", "yes", "yes"]
    # M1 M2 + m (M1 + M2) + m^2 = 4 at m ~ 0.6085
    assert frame["value"].tolist() == pytest.approx([0.5, 0.6, 0.7, 0.8, 0.9, 1.0])


def test_sweep_paths():
    spec = parse_sweep("builder.m=0.1:0.3:3")
    assert spec.grid() == pytest.approx([0.1, 0.2, 0.3])
    model, _ = apply_point({"builder": {"m": 0.0}}, None, spec, 0.2)
    assert model == {"builder": {"m": 0.2}}
    with pytest.raises(DocumentError):
        apply_point({"builder": {}}, None, spec, 0.2)
    with pytest.raises(DocumentError):
        parse_sweep("builder.m")


def test_slowly_mixing_pipeline_passes_every_check(tmp_path):
    model = _write(
        tmp_path / "pipeline.json",
        {
            "builder": {
                "family": "cycle_pipeline", "n": 7, "p": 0.1, "L": 0.5, "R": 0.5,
                "s": 0.8, "l": 0.1, "r": 0.1, "M": 1.3, "m": 0.9,
            }
        },
    )
    out = tmp_path / "out"
    assert main(["analyze", "--model", model, "--out", str(out)]) == 0
    report = orjson.loads((out / "report.json").read_bytes())
    assert all(c["status"] != "fail" for c in report["cross_checks"])
