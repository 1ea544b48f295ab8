from .errors import ConfigError, NLQECError, NumericalError
from .logs import get_logger

__all__ = ["ConfigError", "NLQECError", "NumericalError", "get_logger"]
