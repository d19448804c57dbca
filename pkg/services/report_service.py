"""
Report Service
Assembles the constants, verification and Meissel reports from the analysis layer
"""

import dataclasses
from typing import List, Optional, Sequence, Tuple

import numpy as np
from mpmath import mp

from analysis.constants import ConstantsReport, compute_constants
from analysis.envelopes import envelope_containment, fit_residual_model
from analysis.meissel import AlphaScan, meissel_alpha_scan
from analysis.mertens import (
    corollary_statistics, lambda_partial_sums, lemma3_lhs, mertens_product, mertens_sums,
    prime_power_sum
)
from analysis.normalization import (
    estimate_q, lambda_sequence, normalized_counts, residuals, resolve_A
)
from config import ToleranceConfig, config
from logger import logger
from semigroup.catalog import Semigroup, SemigroupSpec, resolve_spec
from semigroup.errors import (
    DomainError, InsufficientData, NoConvergence, NoDecay, NonGeometricGrowth
)
from semigroup.numeric import format_real, working_bits

SCHEMA_VERSION = 1
MIN_REPORT_DEGREE = 64
ENVELOPE_WINDOW_START = 64


def envelope_window(n_max: int) -> Tuple[int, int]:
    """Containment window; short runs start at n_max // 2 so the window never collapses"""
    return min(ENVELOPE_WINDOW_START, n_max // 2), n_max


def format_count(value, digits: int) -> str:
    """Exact counts print as integers; analysis-mode values as reals"""
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    if getattr(value, "denominator", None) == 1:
        return str(value.numerator)
    return format_real(value, digits)


def csv_block(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    lines = [",".join(header)] + [",".join("" if v is None else str(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def sample_degrees(n_max: int) -> List[int]:
    """Powers of two up to n_max, plus n_max itself"""
    degrees = []
    n = 1
    while n < n_max:
        degrees.append(n)
        n *= 2
    degrees.append(n_max)
    return degrees


class ReportService:
    """
    Service turning resolved semigroups into report dictionaries

    Reports contain only values derived from the run configuration, so
    identical configurations give identical reports.
    """

    def __init__(self, tolerances: Optional[ToleranceConfig] = None, digits: Optional[int] = None,
                 precision_bits: Optional[int] = None):
        self.tolerances = tolerances or config.tolerances
        self.digits = digits or config.output.digits
        self.precision_bits = precision_bits

    def _bits(self) -> int:
        return working_bits(self.precision_bits)

    def _real(self, value):
        return format_real(value, self.digits)

    def _check(self, name: str, statistic, passed: Optional[bool] = None) -> dict:
        tolerance = getattr(self.tolerances, name)
        if passed is None:
            passed = statistic is not None and statistic <= tolerance
        passed = bool(passed)
        logger.log_check_result(
            name,
            mp.nstr(statistic, 10) if statistic is not None else "n/a",
            tolerance,
            passed
        )
        return {"name": name, "statistic": self._real(statistic), "tolerance": tolerance, "pass": passed}

    def header(self, command: str, spec: SemigroupSpec) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "spec": spec.as_dict(),
            "precision_bits": self._bits(),
            "digits": self.digits,
        }

    def normalized_rows(self, semigroup: Semigroup) -> List[List[str]]:
        """Rows of the n,P,G,lambda,g_norm,r table; normalized columns stay blank when q or A is unavailable"""
        with mp.workprec(self._bits()):
            G = semigroup.G
            lam = g_norm = r = None
            try:
                q = semigroup.q if semigroup.q is not None else estimate_q(G).value
                lam = lambda_sequence(semigroup.P, q)
                g_norm = normalized_counts(G, q)
                r = residuals(G, q, resolve_A(semigroup, q).A)
            except (DomainError, NonGeometricGrowth, NoConvergence) as e:
                logger.log_system_event("normalization_skipped", str(e))
            rows = []
            for n in range(semigroup.n_max + 1):
                rows.append([
                    str(n),
                    format_count(semigroup.P[n], self.digits) if n >= 1 else "",
                    format_count(G[n], self.digits),
                    self._real(lam[n - 1]) if lam is not None and n >= 1 else "",
                    self._real(g_norm[n]) if g_norm is not None else "",
                    self._real(r[n - 1]) if r is not None and n >= 1 else "",
                ])
            return rows

    def constants_report(self, semigroup: Semigroup) -> Tuple[ConstantsReport, dict]:
        constants = compute_constants(semigroup, precision_bits=self._bits())
        report = self.header("constants", semigroup.spec)
        report["constants"] = constants.as_dict(self.digits)
        report["degenerate"] = constants.degenerate
        return constants, report

    def zhang_report(self, spec: SemigroupSpec, n_max: int) -> dict:
        """Growth and Mertens-type checks for one instance at degree n_max"""
        if n_max < MIN_REPORT_DEGREE:
            raise DomainError(f"verification needs n_max >= {MIN_REPORT_DEGREE}, got {n_max}")
        spec = dataclasses.replace(spec, n_max=n_max)
        semigroup = resolve_spec(spec)
        bits = self._bits()
        with mp.workprec(bits):
            constants, report = self.constants_report(semigroup)
            report["command"] = "verify"
            if constants.degenerate:
                S = mertens_sums(semigroup.P, semigroup.q, n_max) if semigroup.q else []
                report["checks"] = []
                report["series"] = {}
                report["diagnostics"] = {
                    "degenerate": "P vanishes identically: S is bounded and has no logarithmic growth",
                    "S_n_max": self._real(S[-1]) if S else None,
                }
                report["passed"] = True
                return report
            report["checks"], report["diagnostics"], report["series"] = self._zhang_checks(semigroup, constants)
            report["passed"] = all(check["pass"] for check in report["checks"])
            return report

    def _zhang_checks(self, semigroup: Semigroup, constants: ConstantsReport):
        P, G, n_max = semigroup.P, semigroup.G, semigroup.n_max
        q, A = constants.q, constants.A.value
        lam = lambda_sequence(P, q)
        levels = lambda_partial_sums(lam)
        deviation = [levels[n - 1] - n for n in range(1, n_max + 1)]
        S = mertens_sums(P, q, n_max)
        product = mertens_product(P, q, n_max)
        prime_powers = prime_power_sum(P, q, n_max)
        r = residuals(G, q, A)
        statistics = corollary_statistics(r, lam)
        ln_n = mp.log(n_max)

        checks = [self._check("lambda_max", statistics.max_lambda)]

        diagnostics = {"max_lambda": self._real(statistics.max_lambda)}
        top = np.arange(n_max // 2, n_max + 1, dtype=np.float64)
        trend = np.polyfit(top, np.array([float(lam[int(n) - 1]) for n in top]), 1)[0]
        diagnostics["lambda_trend"] = self._real(float(trend))

        try:
            fit = fit_residual_model(r)
            containment = envelope_containment(
                deviation, fit.best, envelope_window(n_max), self.tolerances.envelope_c
            )
            checks.append(self._check("envelope_c", containment.c, containment.contained))
            diagnostics["envelope"] = {
                "family": containment.family,
                "residual_c": self._real(fit.c),
                "deviation_constant": self._real(containment.constant),
                "deviation_c": self._real(containment.c),
                "window": list(containment.window),
                "families": {name: self._real(f.c) for name, f in sorted(fit.families.items())},
            }
        except (NoDecay, InsufficientData) as e:
            logger.log_system_event("envelope_fit_failed", str(e))
            checks.append(self._check("envelope_c", None, False))
            diagnostics["envelope"] = {"error": str(e)}

        checks.append(self._check("s_limit", abs(S[-1] - ln_n - constants.C_1.value)))
        checks.append(self._check("product_limit", abs(product.n_product - constants.C_2.value)))
        checks.append(self._check("lemma3_limit", abs(lemma3_lhs(P, G, n_max) - (n_max - constants.C_3.value))))
        checks.append(self._check("i_integral", abs(constants.I_integral.value + 1 - constants.C_1.value)))
        checks.append(self._check(
            "prime_power_limit", abs(prime_powers - ln_n - constants.gamma - mp.log(A))
        ))
        checks.append(self._check("c_m_consistency", abs(prime_powers - S[-1] - constants.C_M.value)))
        checks.append(self._check("corollary_r", statistics.max_n_r))
        checks.append(self._check("zhang_sup_sum", statistics.zhang_sup_sum))
        diagnostics["sum_abs_r"] = self._real(statistics.sum_abs_r)

        rows = []
        for n in sample_degrees(n_max):
            rows.append([
                n,
                self._real(deviation[n - 1]),
                self._real(S[n - 1] - mp.log(n) - constants.C_1.value),
                self._real(mertens_product(P, q, n).n_product),
            ])
        series = {"convergence": csv_block(["n", "lambda_deviation", "s", "n_product"], rows)}
        return checks, diagnostics, series

    def meissel_report(self, semigroup: Semigroup, alpha_grid: Sequence, progress: Optional[bool] = None
                       ) -> Tuple[AlphaScan, dict]:
        """Alpha scan with K = N = n_max and its three checks"""
        bits = self._bits()
        with mp.workprec(bits):
            constants, report = self.constants_report(semigroup)
            report["command"] = "meissel"
            if constants.degenerate:
                raise DomainError("Meissel sums of a zero semigroup have no logarithmic asymptotics")
            n_max = semigroup.n_max
            S = mertens_sums(semigroup.P, constants.q, n_max)
            scan = meissel_alpha_scan(alpha_grid, n_max, n_max, semigroup.P, constants.q,
                                      constants.C_1.value, S, progress=progress)
            identity = max(abs(row.evaluation.identity_residual) for row in scan.rows)
            abel = max(abs(row.evaluation.abel_residual) for row in scan.rows)
            report["checks"] = [
                self._check("meissel_identity", identity),
                self._check("meissel_o_alpha", scan.max_gap),
                self._check("abel_identity", abel),
            ]
            report["J0"] = scan.J0.as_dict(self.digits)
            report["evaluations"] = [
                {
                    "alpha": self._real(row.alpha),
                    "series": self._real(row.evaluation.series_value),
                    "series_tail_bound": self._real(row.evaluation.series_tail_bound),
                    "J": self._real(row.evaluation.J_value),
                    "J_tail_bound": self._real(row.evaluation.J_tail_bound),
                    "identity_residual": self._real(row.evaluation.identity_residual),
                    "abel_residual": self._real(row.evaluation.abel_residual),
                    "K": row.evaluation.K,
                    "N": row.evaluation.N,
                }
                for row in scan.rows
            ]
            report["series"] = {"alpha_scan": csv_block(SCAN_HEADER, self.scan_rows(scan))}
            report["passed"] = all(check["pass"] for check in report["checks"])
            return scan, report

    def scan_rows(self, scan: AlphaScan) -> List[List[str]]:
        return [
            [
                self._real(row.alpha),
                self._real(row.evaluation.series_value),
                self._real(row.evaluation.series_tail_bound),
                self._real(row.evaluation.J_value),
                self._real(row.evaluation.identity_residual),
                self._real(row.D_over_alpha),
            ]
            for row in scan.rows
        ]


NORMALIZED_HEADER = ["n", "P", "G", "lambda", "g_norm", "r"]
SCAN_HEADER = ["alpha", "series", "tail_bound", "J", "identity_residual", "D_over_alpha"]


def zhang_report(spec: SemigroupSpec, n_max: int, tol: Optional[ToleranceConfig] = None) -> dict:
    """Verification report for spec resolved at degree n_max"""
    return ReportService(tolerances=tol).zhang_report(spec, n_max)
