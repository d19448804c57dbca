"""
Exception hierarchy for the workbench.

Every exception carries the process exit code the orchestrator maps it to:
1 domain error, 2 usage, 3 config, 4 IO, 5 verification failure.
"""


class WorkbenchError(Exception):
    """Base class for all workbench errors"""
    exit_code = 1


class NotASemigroup(WorkbenchError):
    """Counts are not realisable by a free commutative monoid"""
    pass


class ResourceGuard(WorkbenchError):
    """Input exceeds the limits of an exhaustive oracle"""
    pass


class InternalConsistencyError(WorkbenchError):
    """An exact identity failed; indicates an implementation bug"""
    pass


class DomainError(WorkbenchError):
    """Argument outside the domain of an operation"""
    pass


class NonGeometricGrowth(WorkbenchError):
    """Element counts do not grow like q^n with q > 1"""
    pass


class NoConvergence(WorkbenchError):
    """Normalized counts show no limit A > 0"""
    pass


class InsufficientData(WorkbenchError):
    """Available degrees cannot reach the requested tolerance"""
    pass


class ZeroDenominator(WorkbenchError):
    """Division by a vanishing element count"""
    pass


class DivergentEnvelope(WorkbenchError):
    """Envelope parameters violate the convergence hypothesis"""
    pass


class NoDecay(WorkbenchError):
    """Residuals do not decay over the fitting window"""
    pass


class TailUnbounded(WorkbenchError):
    """No decay bound for the deviation beyond the truncation point"""
    pass


class PrecisionError(WorkbenchError):
    """Computed constant disagrees with its independent oracle"""
    pass


class UsageError(WorkbenchError):
    """Invalid command line"""
    exit_code = 2


class ConfigError(WorkbenchError):
    """Invalid or unreadable config file"""
    exit_code = 3


class ArtifactError(WorkbenchError):
    """Reading or writing a sequence/report file failed"""
    exit_code = 4


class VerificationFailed(WorkbenchError):
    """One or more verification checks did not pass"""
    exit_code = 5

    def __init__(self, failed_checks):
        self.failed_checks = list(failed_checks)
        super().__init__(f"Verification failed: {', '.join(self.failed_checks)}")
