from collections.abc import Generator
from functools import lru_cache

from sqlalchemy import Engine, create_engine, text
from sqlalchemy.orm import Session, sessionmaker

from yoked_sim.core.config import get_settings
from yoked_sim.db.base import Base
from yoked_sim.errors import ParameterError


@lru_cache
def get_engine() -> Engine:
    """Create the ledger engine and its tables."""

    settings = get_settings()
    if not settings.database_url:
        raise ParameterError("run ledger is disabled; set YOKED_DATABASE_URL")
    engine = create_engine(settings.database_url, echo=False, future=True)
    Base.metadata.create_all(engine)
    return engine


@lru_cache
def get_sessionmaker() -> sessionmaker[Session]:
    """Return a shared session factory."""

    return sessionmaker(bind=get_engine(), expire_on_commit=False, autoflush=False)


def get_session() -> Generator[Session, None, None]:
    """Provide a scoped session."""

    session_factory = get_sessionmaker()
    with session_factory() as session:
        yield session


def verify_database_connection(engine: Engine | None = None) -> None:
    """Ensure the ledger database is reachable."""

    active_engine = engine or get_engine()
    with active_engine.connect() as connection:
        connection.execute(text("SELECT 1"))
