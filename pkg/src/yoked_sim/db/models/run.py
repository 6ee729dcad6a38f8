"""Run ledger ORM models."""

from __future__ import annotations

import sys
from datetime import datetime

if sys.version_info >= (3, 11):
    from enum import StrEnum
else:  # pragma: no cover
    import enum

    class StrEnum(str, enum.Enum):
        """Backport of :class:`enum.StrEnum` for Python 3.10."""

        __str__ = str.__str__
        __format__ = str.__format__

from sqlalchemy import DateTime, Enum, String, Text, func
from sqlalchemy.orm import Mapped, mapped_column

from yoked_sim.db.base import Base


class RunStatus(StrEnum):
    """Outcome of a CLI run."""

    COMPLETED = "completed"
    FAILED = "failed"


class RunRecord(Base):
    """One CLI invocation and its manifest."""

    __tablename__ = "runs"

    run_id: Mapped[str] = mapped_column(String(36), primary_key=True)
    command: Mapped[str] = mapped_column(String(100), nullable=False)
    created_at: Mapped[datetime] = mapped_column(
        DateTime(timezone=True), nullable=False, server_default=func.now()
    )
    status: Mapped[RunStatus] = mapped_column(
        Enum(RunStatus, native_enum=False), nullable=False, default=RunStatus.COMPLETED
    )
    manifest_json: Mapped[str] = mapped_column(Text, nullable=False)
