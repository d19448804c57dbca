"""
Logger Configuration
Contains all static variables and settings for the logging system
"""

import os


class LoggerConfig:
    """Configuration class for logging system"""

    # Log directory and file names
    LOG_DIR = os.getenv("WORKBENCH_LOG_DIR", "logs")
    SYSTEM_LOG_FILE = "system.log"
    CHECKS_LOG_FILE = "checks.log"
    EXCEPTIONS_LOG_FILE = "exceptions.log"

    # Log levels
    DEFAULT_LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
    CONSOLE_LOG_LEVEL = "ERROR"

    # Log formatters
    DEFAULT_FORMATTER = "%(asctime)s | %(levelname)s | %(message)s"
    DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

    # Logger names
    SYSTEM_LOGGER_NAME = "WorkbenchSystem"
    CHECKS_LOGGER_NAME = "WorkbenchChecks"
    EXCEPTIONS_LOGGER_NAME = "WorkbenchExceptions"

    # Session markers
    SESSION_START_MARKER = "=== NEW WORKBENCH RUN STARTED ==="
    SESSION_END_MARKER = "=== WORKBENCH RUN ENDED ==="
