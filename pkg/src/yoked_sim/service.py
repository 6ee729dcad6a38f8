"""Service layer behind the command line.

Each command computes its result through the library packages, writes data files into
the run's output directory and finishes with a manifest. When a ledger database is
configured, the manifest is recorded there as well.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import sys
import time
import uuid
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

import structlog
from pydantic import ValidationError as PydanticValidationError
from sqlalchemy.orm import Session, sessionmaker

from yoked_sim import __version__
from yoked_sim.core.config import get_settings
from yoked_sim.core.serialization import dumps, to_wire
from yoked_sim.db.repositories import RunDTO, get_run, list_runs, record_run
from yoked_sim.errors import DistributionMismatchError, NotFoundError, ParameterError
from yoked_sim.gapstore import (
    calibration_table,
    collect_gaps,
    extrapolate_min_of_m,
    ks_distance,
    load_distribution,
    save_distribution,
    smooth,
)
from yoked_sim.outersim import (
    failure_stats,
    memory_experiment,
    run_gap_simulation,
    simulate_concatenated_single_round,
)
from yoked_sim.planner import (
    CSV_COLUMNS,
    estimate_footprint,
    fit_scaling,
    optimize_layout,
    plan_row,
    savings_ratio,
    savings_table,
)
from yoked_sim.plots import plot_calibration, plot_gaps, plot_savings
from yoked_sim.qpcc import (
    PauliType,
    build_qpcc,
    code_parameters,
    rank_k,
    rate_table,
    verify_commutation,
)
from yoked_sim.qpcc.export import sparse_lines
from yoked_sim.schemas.gaps import CalibrationModel, GapDistribution
from yoked_sim.schemas.noise import NoiseParams
from yoked_sim.schemas.outer import FailureStats, SimConfig
from yoked_sim.schemas.plan import StorageMode
from yoked_sim.schemas.run import RunManifest, ValidationConfig, ValidationReport
from yoked_sim.stabsim import apply_si1000, extract_error_graph, generate_surface_memory_circuit

logger = structlog.get_logger(__name__)

DEFAULT_SAVINGS_TARGETS = (1e-9, 1e-10, 1e-11, 1e-12, 1e-13, 1e-14, 1e-15, 1e-16, 1e-17, 1e-18)


def file_digest(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def load_validation_config(path: Path) -> ValidationConfig:
    """Parse a TOML or JSON validation config."""

    path = Path(path)
    if not path.exists():
        raise NotFoundError(f"no validation config at {path}")
    text = path.read_text(encoding="utf-8")
    try:
        raw = tomllib.loads(text) if path.suffix == ".toml" else json.loads(text)
        return ValidationConfig.model_validate(raw)
    except (tomllib.TOMLDecodeError, json.JSONDecodeError) as exc:
        raise ParameterError(f"cannot parse {path}: {exc}") from exc
    except PydanticValidationError as exc:
        raise ParameterError(f"invalid validation config {path}: {exc}") from exc


def _x_rate(stats: FailureStats) -> float:
    return stats.failures_x / (stats.shots * stats.patches * stats.inner_rounds_total)


def validate_pipeline(config: ValidationConfig, *, workers: int | None = None) -> ValidationReport:
    """Gap simulation and full concatenated simulation on matched parameters."""

    settings = get_settings()
    full = simulate_concatenated_single_round(
        config.d,
        config.shape,
        config.inner_rounds,
        config.p,
        config.shots,
        config.seed,
        workers=workers,
    )
    sim_config = SimConfig(
        d=config.d,
        inner_rounds=config.inner_rounds,
        outer_rounds=1,
        shape=config.shape,
        seed=config.seed,
        shots=config.shots,
    )
    code = build_qpcc(config.shape)
    if config.p == 0:
        logger.info("validate.noiseless", detail="gap sampling skipped, no failures possible")
        gap = failure_stats(
            shots=config.shots,
            failures_x=0,
            failures_z=0,
            failures_any=0,
            patches=code.n,
            inner_rounds_total=config.inner_rounds,
            config=sim_config.model_dump(mode="json"),
        )
    else:
        dist = collect_gaps(
            config.d,
            10 * config.d,
            config.p,
            config.gap_shots or config.shots,
            config.seed,
            workers=workers,
        )
        model = CalibrationModel(rescale=settings.calibration_rescale)
        gap = run_gap_simulation(sim_config, code, dist, model, workers=workers)

    full_rate, gap_rate = _x_rate(full), _x_rate(gap)
    if full_rate == gap_rate:
        ratio = 1.0
    elif min(full_rate, gap_rate) == 0:
        ratio = float("inf")
    else:
        ratio = max(full_rate, gap_rate) / min(full_rate, gap_rate)
    report = ValidationReport(
        config=config, full=full, gap=gap, ratio=ratio, passed=ratio <= config.ratio_bound
    )
    logger.info("validate.done", ratio=ratio, passed=report.passed)
    return report


class ToolkitService:
    """Run commands into one output directory and keep their manifest."""

    def __init__(
        self,
        *,
        out_dir: Path,
        seed: int,
        workers: int,
        session_factory: sessionmaker[Session] | None = None,
    ) -> None:
        self.out_dir = Path(out_dir)
        self.seed = seed
        self.workers = workers
        self._session_factory = session_factory
        self._outputs: list[Path] = []
        self._inputs: list[Path] = []
        self._started = time.perf_counter()

    # artifacts

    def _path(self, name: str) -> Path:
        path = self.out_dir / Path(name).name
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    def _track(self, path: Path) -> Path:
        if path not in self._outputs:
            self._outputs.append(path)
        return path

    def write_json(self, name: str, payload: Any) -> Path:
        path = self._path(name)
        path.write_text(dumps(payload), encoding="utf-8")
        return self._track(path)

    def write_text(self, name: str, text: str) -> Path:
        path = self._path(name)
        path.write_text(text, encoding="utf-8")
        return self._track(path)

    def write_csv(self, name: str, rows: Iterable[dict[str, Any]], columns: Sequence[str]) -> Path:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=list(columns), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
        return self.write_text(name, buffer.getvalue())

    def read_input(self, path: Path) -> Path:
        path = Path(path)
        if not path.exists():
            raise NotFoundError(f"input file {path} does not exist")
        self._inputs.append(path)
        return path

    def finish(self, command: str, params: dict[str, Any]) -> RunManifest:
        """Write manifest.json and record it in the ledger when one is configured."""

        manifest = RunManifest(
            command=command,
            params=to_wire(params),
            seed=self.seed,
            version=__version__,
            inputs={str(p): file_digest(p) for p in self._inputs},
            wall_seconds=time.perf_counter() - self._started,
            outputs=[p.name for p in self._outputs],
        )
        path = self._path("manifest.json")
        path.write_text(dumps(manifest), encoding="utf-8")
        if self._session_factory is not None:
            with self._session_factory() as session:
                record_run(session, run_id=uuid.uuid4(), manifest=manifest)
        logger.info("run.finished", command=command, outputs=manifest.outputs)
        return manifest

    # code

    def build_code(self, sides: Sequence[int], out: str = "code.json") -> dict[str, Any]:
        code = build_qpcc(tuple(sides))
        lines = sparse_lines(code)
        payload = {
            "sides": list(code.side_lengths),
            "r": code.dimension,
            "n": code.n,
            "k": code.k,
            "d": code.d,
            "rate": code.rate,
            "dependent_checks": {
                p.value: int(code.checks(p).shape[0]) - code.check_rank(p) for p in PauliType
            },
            "commuting": not verify_commutation(code),
            "permutation": code.permutation.forward.tolist(),
            "x_checks_sparse": [line for line in lines if line.startswith("X")],
            "z_checks_sparse": [line for line in lines if line.startswith("Z")],
        }
        self.write_json(out, payload)
        summary = ("sides", "r", "n", "k", "d", "rate", "dependent_checks", "commuting")
        return {key: payload[key] for key in summary}

    def verify_code(self, sides: Sequence[int]) -> dict[str, Any]:
        code = build_qpcc(tuple(sides))
        anticommuting = verify_commutation(code)
        payload = {
            "sides": list(code.side_lengths),
            "commuting": not anticommuting,
            "anticommuting_pairs": [list(pair) for pair in anticommuting],
            "k_formula": code.k,
            "k_rank": rank_k(code),
            "consistent": code.k == rank_k(code),
        }
        self.write_json("verify.json", payload)
        return payload

    def code_params(
        self, sides: Sequence[int], cap: int, path: str | None = None
    ) -> dict[str, Any]:
        code = build_qpcc(tuple(sides))
        budget = get_settings().enumeration_budget
        params = code_parameters(code, cap, path=path, budget=budget)
        payload = {
            "sides": list(code.side_lengths),
            "n": params.n,
            "k": params.k,
            "distance": params.distance_label,
            "search_path": params.search_path.value,
        }
        self.write_json("params.json", payload)
        return payload

    def code_rates(self, max_patches: int) -> list[dict[str, Any]]:
        rows = rate_table(max_patches)
        self.write_csv("rates.csv", rows, ("dimension", "block", "n", "k", "rate"))
        return rows

    # circuits and gaps

    def generate_circuit(
        self, d: int, rounds: int, p: float, schedule: str, opposite_observable: bool = False
    ) -> dict[str, Any]:
        circuit = generate_surface_memory_circuit(
            d, rounds, schedule=schedule, opposite_observable=opposite_observable
        )
        noisy = apply_si1000(circuit, NoiseParams(p=p))
        self.write_text("circuit.txt", noisy.to_text())
        payload: dict[str, Any] = {
            "d": d,
            "rounds": rounds,
            "p": p,
            "schedule": schedule,
            "qubits": noisy.num_qubits,
            "detectors": noisy.num_detectors,
            "observables": noisy.num_observables,
        }
        if p > 0:
            graph = extract_error_graph(noisy)
            self.write_text("graph.txt", graph.to_text())
            payload["edges"] = len(graph.edges)
        self.write_json("circuit.json", payload)
        return payload

    def collect(self, d: int, rounds: int, p: float, shots: int) -> GapDistribution:
        dist = collect_gaps(d, rounds, p, shots, self.seed, workers=self.workers)
        self._track(save_distribution(dist, self.out_dir))
        return dist

    def smooth_gaps(self, path: Path, halfwidth: int) -> GapDistribution:
        dist = load_distribution(self.read_input(path))
        curve = smooth(dist, halfwidth)
        smoothed = dist.model_copy(update={"smoothed": curve.as_pairs()})
        self.write_json("smoothed.json", smoothed.model_dump(exclude_none=True))
        self.write_csv(
            "smoothed.csv",
            ({"db": db, "mass": f"{m:.12g}"} for db, m in curve.as_pairs()),
            ("db", "mass"),
        )
        return smoothed

    def extrapolate_gaps(
        self, path: Path, m: float, reference: Path | None = None
    ) -> tuple[GapDistribution, float | None]:
        """Extrapolate a stored distribution; optionally measure it against a direct sample.

        The reference must be a distribution collected at m times the input's
        base rounds. The returned KS distance records the extrapolation bias.
        """

        dist = load_distribution(self.read_input(path))
        model = CalibrationModel(rescale=get_settings().calibration_rescale)
        out = extrapolate_min_of_m(dist, m, model)
        self.write_json(f"extrapolated_m{m:g}.json", out.model_dump(exclude_none=True))
        if reference is None:
            return out, None
        direct = load_distribution(self.read_input(reference))
        if direct.d != dist.d:
            raise DistributionMismatchError(
                f"reference distance {direct.d} differs from input distance {dist.d}"
            )
        if direct.base_rounds != round(dist.base_rounds * m):
            logger.warning(
                "gaps.reference_rounds",
                expected=dist.base_rounds * m,
                actual=direct.base_rounds,
            )
        distance = ks_distance(out, direct)
        logger.info("gaps.extrapolation_bias", ks=distance, m=m)
        return out, distance

    # simulations

    def simulate_full(
        self, d: int, sides: Sequence[int], inner_rounds: int, p: float, shots: int
    ) -> FailureStats:
        stats = simulate_concatenated_single_round(
            d, tuple(sides), inner_rounds, p, shots, self.seed, workers=self.workers
        )
        self.write_json("full.json", stats.model_dump(exclude={"wall_seconds"}))
        return stats

    def simulate_outer(
        self,
        gaps: Path,
        sides: Sequence[int],
        inner_rounds: int,
        outer_rounds: int,
        shots: int,
        timelike_rounds: int | None = None,
    ) -> FailureStats:
        dist = load_distribution(self.read_input(gaps))
        config = SimConfig(
            d=dist.d,
            inner_rounds=inner_rounds,
            outer_rounds=outer_rounds,
            shape=tuple(sides),
            timelike_rounds=timelike_rounds,
            seed=self.seed,
            shots=shots,
        )
        model = CalibrationModel(rescale=get_settings().calibration_rescale)
        code = build_qpcc(config.shape)
        stats = run_gap_simulation(config, code, dist, model, workers=self.workers)
        self.write_json("outer.json", stats.model_dump(exclude={"wall_seconds"}))
        return stats

    def simulate_memory(self, d: int, rounds: int, p: float, shots: int) -> FailureStats:
        stats = memory_experiment(d, rounds, p, shots, self.seed, workers=self.workers)
        self.write_json("memory.json", stats.model_dump(exclude={"wall_seconds"}))
        return stats

    # fits and plans

    def fit(self, path: Path, dimension: int) -> dict[str, Any]:
        """Fit rows (d, r_i, r_o, n, rate[, weight]) from a CSV file with a header."""

        with self.read_input(path).open(encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle)
            try:
                rows = [
                    (
                        float(r["d"]),
                        float(r["r_i"]),
                        float(r["r_o"]),
                        float(r["n"]),
                        float(r["rate"]),
                        float(r.get("weight") or 1.0),
                    )
                    for r in reader
                ]
            except (KeyError, ValueError) as exc:
                raise ParameterError(f"{path} is not a d,r_i,r_o,n,rate[,weight] table") from exc
        fit = fit_scaling(rows, dimension)
        payload = fit.model_dump()
        self.write_json("fit.json", payload)
        return payload

    def plan_estimate(
        self, dimension: int, mode: str, d: int, sides: Sequence[int], blocks: int
    ) -> dict[str, Any]:
        plan = estimate_footprint(dimension, mode, d, tuple(sides), blocks)
        payload = plan.model_dump() | {"qubits_per_logical": plan.qubits_per_logical}
        self.write_json("plan.json", payload)
        return payload

    def plan_optimize(self, target: float, dimension: int, mode: str) -> dict[str, Any]:
        plan = optimize_layout(target, dimension, StorageMode(mode))
        payload = plan.model_dump() | {
            "qubits_per_logical": plan.qubits_per_logical,
            "target": target,
        }
        self.write_json("plan.json", payload)
        self.write_csv("plan.csv", [plan_row(target, plan)], CSV_COLUMNS)
        return payload

    def plan_table(self, targets: Sequence[float]) -> list[dict[str, Any]]:
        rows = savings_table(targets)
        self.write_csv("plans.csv", rows, CSV_COLUMNS)
        return rows

    # validation and plots

    def validate(self, path: Path) -> ValidationReport:
        config = load_validation_config(self.read_input(path))
        report = validate_pipeline(config, workers=self.workers)
        payload = report.model_dump(
            exclude={"full": {"wall_seconds"}, "gap": {"wall_seconds"}}
        )
        self.write_json("validation.json", payload)
        return report

    def plot(
        self, kind: str, path: Path | None = None, targets: Sequence[float] | None = None
    ) -> dict[str, Any]:
        if kind == "savings":
            targets = list(targets or DEFAULT_SAVINGS_TARGETS)
            ratios = [savings_ratio(t) for t in targets]
            self.write_csv(
                "savings.csv",
                (
                    {"target": f"{t:.12g}", "ratio": f"{r:.12g}"}
                    for t, r in zip(targets, ratios, strict=True)
                ),
                ("target", "ratio"),
            )
            self._track(plot_savings(targets, ratios, self._path("savings.svg")))
            return {"kind": kind, "targets": targets, "ratios": ratios}

        if path is None:
            raise ParameterError(f"plot kind {kind!r} needs --input")
        dist = load_distribution(self.read_input(path))
        if kind == "gaps":
            curve = smooth(dist, 3)
            self.write_csv(
                "gaps.csv",
                ({"db": db, "mass": f"{m:.12g}"} for db, m in curve.as_pairs()),
                ("db", "mass"),
            )
            self._track(plot_gaps(dist, curve, self._path("gaps.svg")))
            return {"kind": kind, "bins": len(dist.bins)}
        if kind == "calibration":
            model = CalibrationModel(rescale=get_settings().calibration_rescale)
            rows = calibration_table(dist, model)
            self.write_csv(
                "calibration.csv",
                (
                    {
                        "magnitude": r.magnitude,
                        "samples": f"{r.samples:.12g}",
                        "failures": f"{r.failures:.12g}",
                        "empirical": f"{r.empirical:.12g}",
                        "predicted": f"{r.predicted:.12g}",
                    }
                    for r in rows
                ),
                ("magnitude", "samples", "failures", "empirical", "predicted"),
            )
            self._track(plot_calibration(rows, self._path("calibration.svg")))
            return {"kind": kind, "bins": len(rows)}
        raise ParameterError(f"unknown plot kind {kind!r}")

    # ledger

    def _ledger(self) -> sessionmaker[Session]:
        if self._session_factory is None:
            raise ParameterError("run ledger is disabled; set YOKED_DATABASE_URL")
        return self._session_factory

    def list_runs(self, limit: int = 50) -> list[RunDTO]:
        with self._ledger()() as session:
            return list_runs(session, limit=limit)

    def show_run(self, run_id: str) -> RunDTO:
        try:
            key = uuid.UUID(run_id)
        except ValueError as exc:
            raise ParameterError(f"{run_id!r} is not a run id") from exc
        with self._ledger()() as session:
            found = get_run(session, key)
        if found is None:
            raise NotFoundError(f"run {run_id} not found")
        return found
