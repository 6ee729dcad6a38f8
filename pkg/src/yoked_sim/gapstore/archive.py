"""On-disk archive of gap distributions, one JSON file per (d, rounds, noise)."""

from __future__ import annotations

from pathlib import Path

import structlog

from yoked_sim.core.serialization import dumps
from yoked_sim.errors import NotFoundError
from yoked_sim.schemas.gaps import GapDistribution

logger = structlog.get_logger(__name__)


def archive_path(directory: Path, d: int, rounds: int, noise: str) -> Path:
    return Path(directory) / f"gaps_d{d}_r{rounds}_{noise}.json"


def save_distribution(dist: GapDistribution, directory: Path) -> Path:
    path = archive_path(directory, dist.d, dist.base_rounds, dist.noise_label)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(dist.model_dump(exclude_none=True)), encoding="utf-8")
    logger.info("gapstore.saved", path=str(path), total=dist.total)
    return path


def load_distribution(path: Path) -> GapDistribution:
    path = Path(path)
    if not path.exists():
        raise NotFoundError(f"no gap distribution at {path}")
    return GapDistribution.model_validate_json(path.read_text(encoding="utf-8"))
