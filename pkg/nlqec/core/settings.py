"""Process-wide settings read from the environment or a ``.env`` file."""

from decouple import Choices, config

LOG_LEVELS = {
    "error": "ERROR",
    "warning": "WARNING",
    "info": "INFO",
    "debug": "DEBUG",
}

NLQEC_LOG: str = config(
    "NLQEC_LOG",
    default="info",
    cast=Choices(list(LOG_LEVELS), cast=str.lower),
)
NLQEC_LOG_FORMAT: str = config(
    "NLQEC_LOG_FORMAT",
    default="text",
    cast=Choices(["text", "json"], cast=str.lower),
)
NLQEC_JOBS: int = config("NLQEC_JOBS", default=1, cast=int)
