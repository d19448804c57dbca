# Run logging for the workbench
from .logger import Logger, logger
from .config import LoggerConfig

__all__ = ['Logger', 'logger', 'LoggerConfig']
