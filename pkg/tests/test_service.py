import csv
import json
from pathlib import Path

import pytest
from sqlalchemy import create_engine
from sqlalchemy.orm import Session, sessionmaker

from yoked_sim.db.base import Base
from yoked_sim.errors import (
    DistributionMismatchError,
    DivisibilityError,
    NotFoundError,
    ParameterError,
)
from yoked_sim.gapstore import save_distribution
from yoked_sim.planner import DEFAULT_FITS, predict_rate
from yoked_sim.schemas.gaps import GapBin, GapDistribution
from yoked_sim.service import ToolkitService, file_digest, load_validation_config


def _build_sessionmaker() -> sessionmaker[Session]:
    engine = create_engine("sqlite:///:memory:", future=True)
    Base.metadata.create_all(engine)
    return sessionmaker(bind=engine, expire_on_commit=False)


def _service(out_dir: Path, session_factory: sessionmaker[Session] | None = None) -> ToolkitService:
    return ToolkitService(out_dir=out_dir, seed=7, workers=1, session_factory=session_factory)


def _validation_file(directory: Path) -> Path:
    path = directory / "validate.json"
    path.write_text(json.dumps({"d": 3, "shape": [4], "inner_rounds": 2, "p": 0.0, "shots": 5}))
    return path


def test_build_code_writes_export_and_manifest(tmp_path: Path) -> None:
    session_factory = _build_sessionmaker()
    service = _service(tmp_path, session_factory)

    summary = service.build_code((8, 8))
    manifest = service.finish("code build", {"sides": (8, 8)})

    assert summary["n"] == 64
    assert summary["k"] == 34
    assert summary["dependent_checks"] == {"X": 1, "Z": 1}
    assert summary["commuting"] is True
    exported = json.loads((tmp_path / "code.json").read_text())
    assert len(exported["x_checks_sparse"]) == 16
    assert exported["rate"] == "0.53125"
    assert manifest.outputs == ["code.json"]
    assert manifest.params == {"sides": [8, 8]}
    assert json.loads((tmp_path / "manifest.json").read_text())["command"] == "code build"

    runs = service.list_runs()
    assert [run.command for run in runs] == ["code build"]
    assert service.show_run(str(runs[0].run_id)).manifest == manifest


def test_build_code_rejects_bad_sides(tmp_path: Path) -> None:
    with pytest.raises(DivisibilityError):
        _service(tmp_path).build_code((6, 6))


def test_code_params_for_zero_logical_code(tmp_path: Path) -> None:
    payload = _service(tmp_path).code_params((2,), 2)

    assert (payload["n"], payload["k"], payload["distance"]) == (2, 0, "2")


def test_validate_records_input_digest(tmp_path: Path) -> None:
    config_path = _validation_file(tmp_path)
    service = _service(tmp_path / "out")

    report = service.validate(config_path)
    manifest = service.finish("validate", {"config": config_path})

    assert report.passed
    assert report.ratio == 1.0
    assert manifest.inputs == {str(config_path): file_digest(config_path)}
    assert (tmp_path / "out" / "validation.json").exists()


def test_load_validation_config_formats(tmp_path: Path) -> None:
    toml_path = tmp_path / "validate.toml"
    toml_path.write_text('d = 3\nshape = [8]\ninner_rounds = 30\np = 0.001\nshots = 100\n')
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    invalid = tmp_path / "invalid.json"
    invalid.write_text(json.dumps({"d": 1, "shape": [8], "inner_rounds": 1, "p": 0, "shots": 1}))

    config = load_validation_config(toml_path)

    assert config.shape == (8,)
    assert config.ratio_bound == 2.0
    with pytest.raises(NotFoundError):
        load_validation_config(tmp_path / "missing.toml")
    with pytest.raises(ParameterError):
        load_validation_config(broken)
    with pytest.raises(ParameterError):
        load_validation_config(invalid)


def test_fit_from_csv(tmp_path: Path) -> None:
    path = tmp_path / "rates.csv"
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["d", "r_i", "r_o", "n", "rate"])
        for d in (3, 5, 7):
            writer.writerow([d, 30, 1, 8, predict_rate(DEFAULT_FITS[1], d, 30, 1, 8)])

    payload = _service(tmp_path / "out").fit(path, 1)

    assert payload["lam"] == pytest.approx(8.0, rel=1e-6)


def test_fit_rejects_malformed_table(tmp_path: Path) -> None:
    path = tmp_path / "rates.csv"
    path.write_text("d,rate\n3,0.1\n")

    with pytest.raises(ParameterError):
        _service(tmp_path / "out").fit(path, 1)


def test_plan_optimize_writes_csv(tmp_path: Path) -> None:
    service = _service(tmp_path)

    payload = service.plan_optimize(1e-14, 2, "cold")

    assert payload["d"] == 13
    rows = list(csv.DictReader((tmp_path / "plan.csv").read_text().splitlines()))
    assert rows[0]["block"] == "12x12"
    assert rows[0]["qubits_per_logical"] == "676"


def test_savings_plot(tmp_path: Path) -> None:
    result = _service(tmp_path).plot("savings", targets=[1e-12, 1e-14])

    assert len(result["ratios"]) == 2
    assert (tmp_path / "savings.svg").read_text().startswith("<?xml")
    assert (tmp_path / "savings.csv").read_text().splitlines()[0] == "target,ratio"


def test_plot_needs_input_for_gap_kinds(tmp_path: Path) -> None:
    with pytest.raises(ParameterError):
        _service(tmp_path).plot("gaps")


def test_ledger_must_be_configured(tmp_path: Path) -> None:
    service = _service(tmp_path)

    with pytest.raises(ParameterError):
        service.list_runs()
    with pytest.raises(ParameterError):
        _service(tmp_path, _build_sessionmaker()).show_run("not-a-uuid")


def test_missing_input_file(tmp_path: Path) -> None:
    with pytest.raises(NotFoundError):
        _service(tmp_path).smooth_gaps(tmp_path / "missing.json", 3)


def _stored_point_mass(directory: Path, d: int, base_rounds: int) -> Path:
    dist = GapDistribution(
        base_rounds=base_rounds,
        d=d,
        noise_label="si1000p0.001",
        bins=[GapBin(db=14, count=100, failures=0)],
        total=100,
    )
    return save_distribution(dist, directory)


def test_extrapolation_against_reference(tmp_path: Path) -> None:
    source = _stored_point_mass(tmp_path, 3, 30)
    reference = _stored_point_mass(tmp_path, 3, 60)
    service = _service(tmp_path / "out")

    dist, ks = service.extrapolate_gaps(source, 2, reference)
    alone, none = service.extrapolate_gaps(source, 2)

    assert dist.extrapolated_m == pytest.approx(2)
    assert ks == pytest.approx(0.0, abs=1e-12)
    assert none is None
    assert alone == dist
    assert (tmp_path / "out" / "extrapolated_m2.json").exists()


def test_extrapolation_reference_must_match_distance(tmp_path: Path) -> None:
    source = _stored_point_mass(tmp_path, 3, 30)
    reference = _stored_point_mass(tmp_path, 5, 60)

    with pytest.raises(DistributionMismatchError):
        _service(tmp_path / "out").extrapolate_gaps(source, 2, reference)
