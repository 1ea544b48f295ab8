import logging

from pythonjsonlogger import jsonlogger

from . import settings

LOG_FORMAT = "[%(name)s] [%(levelname)s] %(asctime)s - %(message)s"


def get_logger(name: str, level: str | None = None) -> logging.Logger:
    """
    Configure and return a named logger.

    The handler is attached once per name; the level follows ``NLQEC_LOG``
    unless ``level`` is given.

    :param name: logger name, usually the component class or module
    :type name: str
    :param level: one of ``error``, ``warning``, ``info``, ``debug``, defaults to None
    :type level: str | None, optional
    :return: logger object
    :rtype: logging.Logger
    """
    logger = logging.getLogger(name)
    logger.setLevel(settings.LOG_LEVELS[(level or settings.NLQEC_LOG).lower()])

    if not logger.handlers:
        handler = logging.StreamHandler()
        if settings.NLQEC_LOG_FORMAT == "json":
            formatter = jsonlogger.JsonFormatter(
                "%(name)s %(levelname)s %(asctime)s %(message)s"
            )
        else:
            formatter = logging.Formatter(LOG_FORMAT)
        handler.setFormatter(formatter)
        logger.addHandler(handler)
        logger.propagate = False

    return logger


def set_level(level: str) -> None:
    """Re-level every nlqec logger, used by the CLI ``--log`` option."""
    value = settings.LOG_LEVELS[level.lower()]
    for name, logger in logging.Logger.manager.loggerDict.items():
        if isinstance(logger, logging.Logger) and name.startswith("nlqec"):
            logger.setLevel(value)
