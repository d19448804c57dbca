import logging
import os
import time
from typing import Optional
from .config import LoggerConfig

class Logger:
    """Run logger for the workbench with separate system, check and exception log files"""

    def __init__(self, log_dir=None, system_log_file=None, checks_log_file=None, exceptions_log_file=None):
        # Use config defaults if not provided
        log_dir = log_dir or LoggerConfig.LOG_DIR
        os.makedirs(log_dir, exist_ok=True)
        system_log_file = os.path.join(log_dir, system_log_file or LoggerConfig.SYSTEM_LOG_FILE)
        checks_log_file = os.path.join(log_dir, checks_log_file or LoggerConfig.CHECKS_LOG_FILE)
        exceptions_log_file = os.path.join(log_dir, exceptions_log_file or LoggerConfig.EXCEPTIONS_LOG_FILE)
        level = getattr(logging, LoggerConfig.DEFAULT_LOG_LEVEL.upper(), logging.INFO)

        # System logger for pipeline events, transforms and constants
        self.system_logger = logging.getLogger(LoggerConfig.SYSTEM_LOGGER_NAME)
        self.system_logger.setLevel(level)

        # Checks logger for verification outcomes
        self.checks_logger = logging.getLogger(LoggerConfig.CHECKS_LOGGER_NAME)
        self.checks_logger.setLevel(level)

        # Exceptions logger for errors and exceptions
        self.exceptions_logger = logging.getLogger(LoggerConfig.EXCEPTIONS_LOGGER_NAME)
        self.exceptions_logger.setLevel(level)

        formatter = logging.Formatter(
            LoggerConfig.DEFAULT_FORMATTER,
            datefmt=LoggerConfig.DATE_FORMAT
        )

        # Handlers are attached once per process even if Logger is built again
        if not self.system_logger.handlers:
            system_handler = logging.FileHandler(system_log_file, delay=True)
            system_handler.setFormatter(formatter)
            self.system_logger.addHandler(system_handler)

        if not self.checks_logger.handlers:
            checks_handler = logging.FileHandler(checks_log_file, delay=True)
            checks_handler.setFormatter(formatter)
            self.checks_logger.addHandler(checks_handler)

        if not self.exceptions_logger.handlers:
            exceptions_handler = logging.FileHandler(exceptions_log_file, delay=True)
            exceptions_handler.setFormatter(formatter)
            # Console handler for errors only, on stderr so artifacts on stdout stay clean
            console_handler = logging.StreamHandler()
            console_handler.setLevel(getattr(logging, LoggerConfig.CONSOLE_LOG_LEVEL))
            console_handler.setFormatter(formatter)
            self.exceptions_logger.addHandler(exceptions_handler)
            self.exceptions_logger.addHandler(console_handler)

        self.session_start = time.time()
        self.system_logger.info(LoggerConfig.SESSION_START_MARKER)

    def log_transform(self, kind: str, n_max: int, seconds: float):
        """Log a sequence transform (forward, inverse, oracle) to system log"""
        self.system_logger.info(
            f"TRANSFORM | Kind: {kind} | N_max: {n_max} | Time: {seconds:.3f}s"
        )

    def log_constant(self, name: str, value, bound=None):
        """Log a computed constant with its truncation bound to system log"""
        log_entry = f"CONSTANT | Name: {name} | Value: {value}"
        if bound is not None:
            log_entry += f" | Bound: {bound}"
        self.system_logger.info(log_entry)

    def log_check_result(self, name: str, statistic, tolerance, passed: bool):
        """Log a verification check to checks log; failures also reach the warning level"""
        message = (
            f"CHECK | Name: {name} | Statistic: {statistic} | "
            f"Tolerance: {tolerance} | Pass: {passed}"
        )
        if passed:
            self.checks_logger.info(message)
        else:
            self.checks_logger.warning(message)

    def log_run_metrics(self, command: str, exit_code: int):
        """Log run duration and outcome to system log"""
        session_duration = time.time() - self.session_start
        self.system_logger.info(
            f"RUN_METRICS | Command: {command} | Exit: {exit_code} | Duration: {session_duration:.1f}s"
        )
        self.system_logger.info(LoggerConfig.SESSION_END_MARKER)

    def log_error(self, error_type: str, error_message: str, context: str = ""):
        """Log errors with context to exceptions log"""
        log_entry = f"ERROR | Type: {error_type} | Message: {error_message}"
        if context:
            log_entry += f" | Context: {context}"
        self.exceptions_logger.error(log_entry)

    def log_exception(self, exception_type: str, exception_message: str, context: Optional[str] = ""):
        """Log exceptions with context to exceptions log"""
        log_entry = f"EXCEPTION | Type: {exception_type} | Message: {exception_message}"
        if context:
            log_entry += f" | Context: {context}"
        self.exceptions_logger.error(log_entry)

    def log_system_event(self, event_type: str, details: str):
        """Log system events to system log"""
        self.system_logger.info(f"SYSTEM_EVENT | Type: {event_type} | Details: {details}")

# Global logger instance
logger = Logger()
