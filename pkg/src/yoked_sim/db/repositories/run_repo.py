"""Persistence helpers for the run ledger."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from typing import List, Optional
from uuid import UUID

from sqlalchemy import select
from sqlalchemy.orm import Session

from yoked_sim.db.models import RunRecord, RunStatus
from yoked_sim.schemas.run import RunManifest


@dataclass(frozen=True)
class RunDTO:
    """Lightweight DTO exposing a hydrated ledger entry."""

    run_id: UUID
    command: str
    created_at: datetime
    status: RunStatus
    manifest: RunManifest


def _hydrate(record: RunRecord) -> RunDTO:
    return RunDTO(
        run_id=UUID(record.run_id),
        command=record.command,
        created_at=record.created_at,
        status=record.status,
        manifest=RunManifest.model_validate_json(record.manifest_json),
    )


def record_run(
    session: Session,
    *,
    run_id: UUID,
    manifest: RunManifest,
    status: RunStatus = RunStatus.COMPLETED,
) -> RunDTO:
    """Store a manifest under a new run id."""

    record = RunRecord(
        run_id=str(run_id),
        command=manifest.command,
        status=status,
        manifest_json=manifest.model_dump_json(),
    )
    session.add(record)
    session.commit()
    session.refresh(record)

    created = get_run(session, run_id)
    if created is None:
        msg = f"Failed to reload run {run_id}"
        raise RuntimeError(msg)
    return created


def get_run(session: Session, run_id: UUID) -> Optional[RunDTO]:
    record = session.get(RunRecord, str(run_id))
    return _hydrate(record) if record else None


def list_runs(session: Session, *, limit: int = 50) -> List[RunDTO]:
    """Most recent runs first."""

    result = session.execute(
        select(RunRecord).order_by(RunRecord.created_at.desc(), RunRecord.run_id).limit(limit)
    )
    return [_hydrate(record) for record in result.scalars().all()]
