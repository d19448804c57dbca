import sys
from typing import Optional, Sequence

from mpmath import mp

from commands.command_handler import CommandHandler
from config import config
from logger import logger
from semigroup.errors import WorkbenchError
from utils.input_handler import InputHandler


class Orchestrator:
    """Parse the command line, run one command and map its outcome to an exit code"""

    def __init__(self, input_handler: Optional[InputHandler] = None):
        self.input_handler = input_handler or InputHandler()

    def run(self, argv: Sequence[str]) -> int:
        command = argv[0] if argv else "none"
        try:
            run_config = self.input_handler.parse_config(argv)
            command = run_config.command
            # run-level settings become the process defaults for nested operations
            config.precision.bits = run_config.precision_bits
            config.output.digits = run_config.digits
            config.output.progress = run_config.progress
            logger.log_system_event("command_started", f"{command} with {run_config.precision_bits} bits")
            with mp.workprec(run_config.precision_bits):
                exit_code = CommandHandler(run_config).handle_command(command)
        except WorkbenchError as e:
            logger.log_error(type(e).__name__, str(e), f"Command: {command}")
            print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
            exit_code = e.exit_code
        except Exception as e:
            logger.log_exception(type(e).__name__, str(e), f"Command: {command}")
            print(f"❌ Unexpected error: {e}", file=sys.stderr)
            exit_code = 1
        logger.log_run_metrics(command, exit_code)
        return exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    return Orchestrator().run(list(sys.argv[1:] if argv is None else argv))
