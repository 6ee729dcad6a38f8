"""ORM models live here."""

from yoked_sim.db.base import Base
from yoked_sim.db.models.run import RunRecord, RunStatus

__all__ = ["Base", "RunRecord", "RunStatus"]
