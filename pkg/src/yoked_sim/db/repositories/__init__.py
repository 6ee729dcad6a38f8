"""Repository access points for the run ledger."""

from yoked_sim.db.repositories.run_repo import RunDTO, get_run, list_runs, record_run

__all__ = ["RunDTO", "get_run", "list_runs", "record_run"]
