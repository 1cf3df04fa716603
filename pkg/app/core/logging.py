import logging

from app.core.config import settings


def configure_logging(level: str | None = None) -> None:
    """Configures root logging once for the API and the CLI."""
    logging.basicConfig(
        level=getattr(logging, (level or settings.LOG_LEVEL), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
