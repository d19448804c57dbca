import os
from dataclasses import dataclass, field, fields
from dotenv import load_dotenv

load_dotenv()

@dataclass
class PrecisionConfig:
    bits: int = 128

    def __post_init__(self):
        self.bits = int(os.getenv("PRECISION_BITS", self.bits))

@dataclass
class OutputConfig:
    digits: int = 25
    format: str = "csv"
    progress: bool = False

    def __post_init__(self):
        self.digits = int(os.getenv("OUTPUT_DIGITS", self.digits))
        self.progress = os.getenv("WORKBENCH_PROGRESS", str(self.progress)).lower() in ("1", "true", "yes")

@dataclass
class ToleranceConfig:
    """Pass thresholds of the verification checks, keyed by check name"""
    lambda_max: float = 4.0
    envelope_c: float = 10.0
    s_limit: float = 2e-3
    product_limit: float = 5e-3
    lemma3_limit: float = 1e-6
    i_integral: float = 5e-3
    prime_power_limit: float = 1e-3
    c_m_consistency: float = 1e-3
    corollary_r: float = 10.0
    zhang_sup_sum: float = 1e3
    meissel_identity: float = 1e-4
    meissel_o_alpha: float = 0.5
    abel_identity: float = 1e-9

    @classmethod
    def names(cls) -> list:
        return [f.name for f in fields(cls)]

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.names()}

@dataclass
class RunDefaults:
    threads: int = 1
    q: int = 2
    seed: int = 0
    perturb_degrees: int = 8
    max_delta: int = 3

    def __post_init__(self):
        self.threads = int(os.getenv("WORKBENCH_THREADS", self.threads))
        self.q = int(os.getenv("WORKBENCH_Q", self.q))

@dataclass
class Config:
    precision: PrecisionConfig = field(default_factory=PrecisionConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    run: RunDefaults = field(default_factory=RunDefaults)
    log_level: str = "INFO"

    def __post_init__(self):
        self.log_level = os.getenv("LOG_LEVEL", self.log_level)

# Global config instance
config = Config()
