import argparse
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import yaml

from analysis.meissel import check_alpha_grid
from config import ToleranceConfig, config
from logger import logger
from semigroup.catalog import Perturbation, SemigroupSpec, parse_residual
from semigroup.errors import ConfigError, DomainError, UsageError

COMMANDS = ("generate", "constants", "verify", "meissel", "identity")
SEMIGROUP_KINDS = {
    "polyfq": "poly_over_fq",
    "poly_over_fq": "poly_over_fq",
    "file": "file",
    "perturbed": "perturbed",
    "prescribed": "prescribed",
}
DEFAULT_FORMATS = {"generate": "csv", "constants": "json", "verify": "json", "meissel": "csv", "identity": "json"}
DEFAULT_ALPHA_GRID = (0.4, 0.2, 0.1, 0.05)
MIN_PRECISION_BITS = 64

# Keys accepted in a config file; each mirrors a command-line flag
CONFIG_KEYS = (
    "command", "semigroup", "q", "nmax", "pfile", "gfile", "seed", "precision", "out", "format",
    "threads", "digits", "tol", "alpha", "residual", "A", "perturb_degrees", "max_delta", "progress",
)


@dataclass
class RunConfig:
    command: str
    spec: SemigroupSpec
    precision_bits: int
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    out: Optional[str] = None
    format: str = "csv"
    digits: int = 25
    threads: int = 1
    alpha_grid: Tuple[float, ...] = DEFAULT_ALPHA_GRID
    progress: bool = False


class _ArgumentParser(argparse.ArgumentParser):
    """argparse that raises UsageError instead of exiting"""

    def error(self, message):
        raise UsageError(message)


class InputHandler:
    """Resolve command-line flags and an optional YAML config file into a RunConfig"""

    def __init__(self):
        self.parser = self._build_parser()

    def _build_parser(self) -> argparse.ArgumentParser:
        parser = _ArgumentParser(
            prog="python -m orchestrator",
            description="Additive arithmetical semigroup workbench",
            argument_default=argparse.SUPPRESS,
        )
        parser.add_argument("command", choices=COMMANDS)
        parser.add_argument("--config", dest="config_file", help="YAML file with default values for the flags")
        parser.add_argument("--semigroup", choices=sorted(SEMIGROUP_KINDS))
        parser.add_argument("--q", type=int)
        parser.add_argument("--nmax", type=int)
        parser.add_argument("--pfile")
        parser.add_argument("--gfile")
        parser.add_argument("--seed", type=int)
        parser.add_argument("--precision", type=int, help="working precision in significand bits")
        parser.add_argument("--out", help="output path; stdout when omitted")
        parser.add_argument("--format", choices=("csv", "json"))
        parser.add_argument("--threads", type=int)
        parser.add_argument("--digits", type=int, help="significant digits of serialized reals")
        parser.add_argument("--tol", action="append", metavar="NAME=VALUE",
                            help=f"check tolerance, one of: {', '.join(ToleranceConfig.names())}")
        parser.add_argument("--alpha", help="comma-separated decreasing alpha grid for meissel")
        parser.add_argument("--residual", help="prescribed residual family, power:<beta> or inverse_log:<eps>")
        parser.add_argument("--A", dest="A", help="prescribed limit A of G(n)/q^n")
        parser.add_argument("--perturb-degrees", dest="perturb_degrees", type=int)
        parser.add_argument("--max-delta", dest="max_delta", type=int)
        parser.add_argument("--progress", action=argparse.BooleanOptionalAction)
        return parser

    def load_config_file(self, path: str) -> dict:
        try:
            with open(path, encoding="utf-8") as handle:
                data = yaml.safe_load(handle)
        except OSError as e:
            logger.log_error("config_read_failed", str(e), f"Path: {path}")
            raise ConfigError(f"cannot read config file {path}: {e}")
        except yaml.YAMLError as e:
            logger.log_error("config_parse_failed", str(e), f"Path: {path}")
            raise ConfigError(f"config file {path} is not valid YAML: {e}")
        if data is None:
            return {}
        if not isinstance(data, dict):
            raise ConfigError(f"config file {path} must hold a mapping of keys to values")
        unknown = sorted(str(key) for key in data if key not in CONFIG_KEYS)
        if unknown:
            raise ConfigError(f"unknown keys in {path}: {', '.join(unknown)}")
        return data

    def parse_config(self, argv: Sequence[str], config_file: Optional[str] = None) -> RunConfig:
        """Flags override config-file values, which override environment defaults"""
        flags = vars(self.parser.parse_args(list(argv)))
        config_file = flags.pop("config_file", None) or config_file
        file_values = self.load_config_file(config_file) if config_file else {}
        if "command" in file_values and file_values["command"] != flags["command"]:
            raise ConfigError(f"config file is for '{file_values['command']}', not '{flags['command']}'")

        values = dict(file_values)
        sources = {key: "file" for key in file_values}
        for key, value in flags.items():
            if key == "tol":
                continue
            values[key] = value
            sources[key] = "flag"

        run_config = self._resolve(values, sources, file_values.get("tol"), flags.get("tol", []))
        logger.log_system_event(
            "run_config",
            f"command={run_config.command} spec={run_config.spec.as_dict()} bits={run_config.precision_bits}"
        )
        return run_config

    def _fail(self, sources: dict, key: str, message: str):
        if sources.get(key) == "file":
            raise ConfigError(message)
        raise UsageError(message)

    def _integer(self, values: dict, sources: dict, key: str, default, minimum: int):
        value = values.get(key, default)
        if value is None:
            return None
        if isinstance(value, bool) or not isinstance(value, int):
            self._fail(sources, key, f"{key} must be an integer, got {value!r}")
        if value < minimum:
            self._fail(sources, key, f"{key} must be >= {minimum}, got {value}")
        return value

    def _tolerances(self, file_tol, flag_tol, sources: dict) -> ToleranceConfig:
        tolerances = replace(config.tolerances)
        entries = []
        if file_tol is not None:
            if not isinstance(file_tol, dict):
                raise ConfigError("tol must map check names to values")
            entries += [(name, value, "file") for name, value in file_tol.items()]
        for item in flag_tol:
            name, sep, value = item.partition("=")
            if not sep:
                raise UsageError(f"--tol expects NAME=VALUE, got '{item}'")
            entries.append((name.strip(), value.strip(), "flag"))
        for name, value, source in entries:
            error = ConfigError if source == "file" else UsageError
            if name not in ToleranceConfig.names():
                raise error(f"unknown tolerance '{name}', expected one of {ToleranceConfig.names()}")
            try:
                number = float(value)
            except (TypeError, ValueError):
                raise error(f"tolerance {name} must be a number, got {value!r}")
            if not number > 0:
                raise error(f"tolerance {name} must be > 0, got {number}")
            setattr(tolerances, name, number)
        return tolerances

    def _alpha_grid(self, value, sources: dict) -> Tuple[float, ...]:
        if value is None:
            return DEFAULT_ALPHA_GRID
        items = value if isinstance(value, (list, tuple)) else str(value).split(",")
        try:
            grid = tuple(float(item) for item in items)
        except (TypeError, ValueError):
            self._fail(sources, "alpha", f"alpha grid must be comma-separated numbers, got {value!r}")
        try:
            check_alpha_grid(grid)
        except DomainError as e:
            self._fail(sources, "alpha", str(e))
        return grid

    def _spec(self, values: dict, sources: dict) -> SemigroupSpec:
        name = values.get("semigroup", "polyfq")
        if name not in SEMIGROUP_KINDS:
            self._fail(sources, "semigroup", f"unknown semigroup '{name}', expected one of {sorted(SEMIGROUP_KINDS)}")
        kind = SEMIGROUP_KINDS[name]
        pfile, gfile = values.get("pfile"), values.get("gfile")
        if kind == "file":
            if bool(pfile) == bool(gfile):
                self._fail(sources, "semigroup", "--semigroup file needs exactly one of --pfile or --gfile")
            kind = "explicit_P" if pfile else "explicit_G"

        # catalog instances default to q = 2; file instances estimate q unless given
        q_default = config.run.q if kind in ("poly_over_fq", "perturbed", "prescribed") else None
        q = self._integer(values, sources, "q", q_default, 2)
        n_max = self._integer(values, sources, "nmax", None, 1)
        if n_max is None:
            self._fail(sources, "nmax", "--nmax is required")
        seed = self._integer(values, sources, "seed", config.run.seed, 0)

        perturbation = None
        if kind == "perturbed":
            perturbation = Perturbation(
                self._integer(values, sources, "perturb_degrees", config.run.perturb_degrees, 1),
                self._integer(values, sources, "max_delta", config.run.max_delta, 0),
            )
        residual = values.get("residual")
        A = Fraction(1)
        if kind == "prescribed":
            residual = str(residual or "power:1")
            try:
                parse_residual(residual)
                A = Fraction(str(values.get("A", 1)))
            except (DomainError, ValueError, ZeroDivisionError) as e:
                self._fail(sources, "residual", f"bad prescribed instance: {e}")
            if A <= 0:
                self._fail(sources, "A", f"A must be > 0, got {A}")
        try:
            return SemigroupSpec(kind, n_max, q=q, seed=seed, perturbation=perturbation,
                                 residual=residual if kind == "prescribed" else None, A=A,
                                 pfile=pfile, gfile=gfile)
        except DomainError as e:
            raise UsageError(str(e))

    def _resolve(self, values: dict, sources: dict, file_tol, flag_tol) -> RunConfig:
        command = values["command"]
        spec = self._spec(values, sources)
        precision = self._integer(values, sources, "precision", config.precision.bits, MIN_PRECISION_BITS)
        threads = self._integer(values, sources, "threads", config.run.threads, 1)
        digits = self._integer(values, sources, "digits", config.output.digits, 1)
        output_format = values.get("format", DEFAULT_FORMATS[command])
        if output_format not in ("csv", "json"):
            self._fail(sources, "format", f"format must be csv or json, got {output_format!r}")
        progress = values.get("progress", config.output.progress)
        if not isinstance(progress, bool):
            self._fail(sources, "progress", f"progress must be true or false, got {progress!r}")
        out = values.get("out")
        return RunConfig(
            command=command,
            spec=spec,
            precision_bits=precision,
            tolerances=self._tolerances(file_tol, flag_tol, sources),
            out=str(out) if out is not None else None,
            format=output_format,
            digits=digits,
            threads=threads,
            alpha_grid=self._alpha_grid(values.get("alpha"), sources),
            progress=progress,
        )
