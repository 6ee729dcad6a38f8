"""Command-line entry point: argparse dispatch onto ToolkitService."""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any

import structlog
from pydantic import ValidationError as PydanticValidationError
from sqlalchemy.orm import Session, sessionmaker

from yoked_sim.core.config import get_settings
from yoked_sim.core.logging import setup_logging
from yoked_sim.core.serialization import dumps
from yoked_sim.db import get_sessionmaker
from yoked_sim.db.repositories import RunDTO
from yoked_sim.errors import ParameterError, YokedSimError
from yoked_sim.qpcc import SearchPath
from yoked_sim.schemas.plan import StorageMode
from yoked_sim.service import DEFAULT_SAVINGS_TARGETS, ToolkitService
from yoked_sim.stabsim import SCHEDULES

logger = structlog.get_logger(__name__)

Handler = Callable[[ToolkitService, argparse.Namespace], Any]


def _sides(text: str) -> tuple[int, ...]:
    try:
        sides = tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc
    if not 1 <= len(sides) <= 3:
        raise argparse.ArgumentTypeError("between one and three side lengths are supported")
    return sides


def _targets(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats, got {text!r}") from exc


def _global_flags() -> argparse.ArgumentParser:
    """Flags accepted before or after the subcommand."""

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="root RNG seed")
    common.add_argument(
        "--workers", type=int, default=argparse.SUPPRESS, help="worker processes for shots"
    )
    common.add_argument("--out-dir", type=Path, default=argparse.SUPPRESS, help="output directory")
    common.add_argument(
        "--json", action="store_true", default=argparse.SUPPRESS, help="print results as JSON"
    )
    common.add_argument("--log-level", default=argparse.SUPPRESS, help="structlog level")
    return common


def _dto_payload(dto: RunDTO) -> dict[str, Any]:
    return {
        "run_id": str(dto.run_id),
        "command": dto.command,
        "created_at": dto.created_at.isoformat(),
        "status": dto.status.value,
        "manifest": dto.manifest,
    }


# handlers


def _code_build(service: ToolkitService, args: argparse.Namespace) -> Any:
    return service.build_code(args.sides, args.out)


def _code_verify(service: ToolkitService, args: argparse.Namespace) -> Any:
    return service.verify_code(args.sides)


def _code_params(service: ToolkitService, args: argparse.Namespace) -> Any:
    return service.code_params(args.sides, args.cap, args.path)


def _code_rates(service: ToolkitService, args: argparse.Namespace) -> Any:
    return service.code_rates(args.max_patches)


def _circuit_gen(service: ToolkitService, args: argparse.Namespace) -> Any:
    return service.generate_circuit(
        args.d, args.rounds, args.p, args.schedule, args.opposite_observable
    )


def _gaps_collect(service: ToolkitService, args: argparse.Namespace) -> Any:
    dist = service.collect(args.d, args.rounds, args.p, args.shots)
    return {"d": dist.d, "rounds": dist.base_rounds, "bins": len(dist.bins), "total": dist.total}


def _gaps_smooth(service: ToolkitService, args: argparse.Namespace) -> Any:
    smoothed = service.smooth_gaps(args.input, args.halfwidth)
    return {"points": len(smoothed.smoothed or [])}


def _gaps_extrapolate(service: ToolkitService, args: argparse.Namespace) -> Any:
    dist, ks = service.extrapolate_gaps(args.input, args.m, args.reference)
    payload: dict[str, Any] = {
        "extrapolated_m": dist.extrapolated_m,
        "failure_rate": dist.failure_rate,
    }
    if ks is not None:
        payload["ks_distance"] = ks
    return payload


def _sim_full(service: ToolkitService, args: argparse.Namespace) -> Any:
    return service.simulate_full(args.d, args.sides, args.inner_rounds, args.p, args.shots)


def _sim_outer(service: ToolkitService, args: argparse.Namespace) -> Any:
    return service.simulate_outer(
        args.gaps,
        args.sides,
        args.inner_rounds,
        args.outer_rounds,
        args.shots,
        args.timelike_rounds,
    )


def _sim_memory(service: ToolkitService, args: argparse.Namespace) -> Any:
    return service.simulate_memory(args.d, args.rounds, args.p, args.shots)


def _fit(service: ToolkitService, args: argparse.Namespace) -> Any:
    return service.fit(args.input, args.dimension)


def _plan_estimate(service: ToolkitService, args: argparse.Namespace) -> Any:
    return service.plan_estimate(args.dimension, args.mode, args.d, args.sides, args.blocks)


def _plan_optimize(service: ToolkitService, args: argparse.Namespace) -> Any:
    if args.table:
        return service.plan_table(args.targets or DEFAULT_SAVINGS_TARGETS)
    if args.target is None:
        raise ParameterError("plan optimize needs --target unless --table is given")
    return service.plan_optimize(args.target, args.dimension, args.mode)


def _validate(service: ToolkitService, args: argparse.Namespace) -> Any:
    return service.validate(args.config)


def _plot(service: ToolkitService, args: argparse.Namespace) -> Any:
    return service.plot(args.kind, args.input, args.targets)


def _runs_list(service: ToolkitService, args: argparse.Namespace) -> Any:
    return [_dto_payload(dto) for dto in service.list_runs(args.limit)]


def _runs_show(service: ToolkitService, args: argparse.Namespace) -> Any:
    return _dto_payload(service.show_run(args.run_id))


# Commands that only read the ledger write no manifest.
_READ_ONLY = frozenset({"runs list", "runs show"})


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = argparse.ArgumentParser(
        prog="yoked-sim",
        description="Simulation and planning toolkit for yoked surface-code memories.",
        parents=[common],
    )
    groups = parser.add_subparsers(dest="group", required=True)

    def command(
        group: argparse._SubParsersAction[argparse.ArgumentParser],
        name: str,
        handler: Handler,
        label: str,
        help_text: str,
    ) -> argparse.ArgumentParser:
        sub = group.add_parser(name, parents=[common], help=help_text)
        sub.set_defaults(handler=handler, command=label)
        return sub

    code = groups.add_parser("code", help="quantum parity check codes").add_subparsers(
        dest="action", required=True
    )
    sub = command(code, "build", _code_build, "code build", "build a code and export its checks")
    sub.add_argument("--sides", type=_sides, required=True)
    sub.add_argument("--out", default="code.json")
    sub = command(code, "verify", _code_verify, "code verify", "check commutation and k")
    sub.add_argument("--sides", type=_sides, required=True)
    sub = command(code, "params", _code_params, "code params", "measure (n, k, d)")
    sub.add_argument("--sides", type=_sides, required=True)
    sub.add_argument("--cap", type=int, default=8)
    sub.add_argument("--path", type=SearchPath, choices=list(SearchPath), default=None)
    sub = command(code, "rates", _code_rates, "code rates", "rate table of cube-like codes")
    sub.add_argument("--max-patches", type=int, default=256)

    circuit = groups.add_parser("circuit", help="surface-code circuits").add_subparsers(
        dest="action", required=True
    )
    sub = command(circuit, "gen", _circuit_gen, "circuit gen", "generate a noisy memory circuit")
    sub.add_argument("--d", type=int, required=True)
    sub.add_argument("--rounds", type=int, required=True)
    sub.add_argument("--p", type=float, default=1e-3)
    sub.add_argument("--schedule", choices=sorted(SCHEDULES), default=get_settings().schedule)
    sub.add_argument("--opposite-observable", action="store_true")

    gaps = groups.add_parser("gaps", help="gap distributions").add_subparsers(
        dest="action", required=True
    )
    sub = command(gaps, "collect", _gaps_collect, "gaps collect", "sample a gap distribution")
    sub.add_argument("--d", type=int, required=True)
    sub.add_argument("--rounds", type=int, required=True)
    sub.add_argument("--p", type=float, required=True)
    sub.add_argument("--shots", type=int, required=True)
    sub = command(gaps, "smooth", _gaps_smooth, "gaps smooth", "raised-cosine smoothing")
    sub.add_argument("--input", type=Path, required=True)
    sub.add_argument("--halfwidth", type=int, default=3)
    sub = command(
        gaps, "extrapolate", _gaps_extrapolate, "gaps extrapolate", "min-of-m extrapolation"
    )
    sub.add_argument("--input", type=Path, required=True)
    sub.add_argument("--m", type=float, required=True)
    sub.add_argument("--reference", type=Path, default=None)

    sim = groups.add_parser("sim", help="logical error simulations").add_subparsers(
        dest="action", required=True
    )
    sub = command(sim, "full", _sim_full, "sim full", "circuit-level single yoke round")
    sub.add_argument("--d", type=int, required=True)
    sub.add_argument("--sides", type=_sides, required=True)
    sub.add_argument("--inner-rounds", type=int, required=True)
    sub.add_argument("--p", type=float, required=True)
    sub.add_argument("--shots", type=int, required=True)
    sub = command(sim, "outer", _sim_outer, "sim outer", "gap simulation of the outer code")
    sub.add_argument("--gaps", type=Path, required=True)
    sub.add_argument("--sides", type=_sides, required=True)
    sub.add_argument("--inner-rounds", type=int, required=True)
    sub.add_argument("--outer-rounds", type=int, default=10)
    sub.add_argument("--timelike-rounds", type=int, default=None)
    sub.add_argument("--shots", type=int, required=True)
    sub = command(sim, "memory", _sim_memory, "sim memory", "unyoked memory experiment")
    sub.add_argument("--d", type=int, required=True)
    sub.add_argument("--rounds", type=int, required=True)
    sub.add_argument("--p", type=float, required=True)
    sub.add_argument("--shots", type=int, required=True)

    sub = command(groups, "fit", _fit, "fit", "fit the yoked scaling law")
    sub.add_argument("--input", type=Path, required=True)
    sub.add_argument("--dimension", type=int, choices=(0, 1, 2), required=True)

    plan = groups.add_parser("plan", help="footprint planning").add_subparsers(
        dest="action", required=True
    )
    sub = command(plan, "estimate", _plan_estimate, "plan estimate", "footprint of one layout")
    sub.add_argument("--dimension", type=int, choices=(0, 1, 2), required=True)
    sub.add_argument("--mode", choices=[m.value for m in StorageMode], default="cold")
    sub.add_argument("--d", type=int, required=True)
    sub.add_argument("--sides", type=_sides, default=(1,))
    sub.add_argument("--blocks", type=int, default=1)
    sub = command(plan, "optimize", _plan_optimize, "plan optimize", "cheapest layout")
    sub.add_argument("--target", type=float, default=None)
    sub.add_argument("--dimension", type=int, choices=(0, 1, 2), default=2)
    sub.add_argument("--mode", choices=[m.value for m in StorageMode], default="cold")
    sub.add_argument("--table", action="store_true", help="every family over --targets")
    sub.add_argument("--targets", type=_targets, default=None)

    sub = command(groups, "validate", _validate, "validate", "gap versus full simulation")
    sub.add_argument("--config", type=Path, required=True)

    sub = command(groups, "plot", _plot, "plot", "SVG plot plus CSV data")
    sub.add_argument("--kind", choices=("gaps", "calibration", "savings"), required=True)
    sub.add_argument("--input", type=Path, default=None)
    sub.add_argument("--targets", type=_targets, default=None)

    runs = groups.add_parser("runs", help="run ledger").add_subparsers(
        dest="action", required=True
    )
    sub = command(runs, "list", _runs_list, "runs list", "recent runs")
    sub.add_argument("--limit", type=int, default=50)
    sub = command(runs, "show", _runs_show, "runs show", "one run manifest")
    sub.add_argument("run_id")

    return parser


def _session_factory() -> sessionmaker[Session] | None:
    return get_sessionmaker() if get_settings().database_url else None


def _params(args: argparse.Namespace) -> dict[str, Any]:
    skip = {"handler", "command", "group", "action", "json", "log_level", "out_dir", "workers"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _emit_error(error: YokedSimError) -> int:
    sys.stderr.write(json.dumps(error.to_payload(), sort_keys=True) + "\n")
    return 1


def main(argv: Sequence[str] | None = None) -> int:
    settings = get_settings()
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    setup_logging(getattr(args, "log_level", settings.log_level), settings.log_format)
    service = ToolkitService(
        out_dir=getattr(args, "out_dir", Path(settings.out_dir)),
        seed=getattr(args, "seed", settings.seed),
        workers=getattr(args, "workers", settings.workers),
        session_factory=_session_factory(),
    )
    try:
        result = args.handler(service, args)
        if args.command not in _READ_ONLY:
            service.finish(args.command, _params(args))
    except YokedSimError as exc:
        logger.warning("cli.failed", command=args.command, error=exc.code)
        return _emit_error(exc)
    except PydanticValidationError as exc:
        return _emit_error(ParameterError(str(exc)))

    if getattr(args, "json", False):
        sys.stdout.write(dumps(result))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
