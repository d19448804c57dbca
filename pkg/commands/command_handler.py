import time
from concurrent.futures import ThreadPoolExecutor
from typing import List

from analysis.mertens import exact_degree_identity_check
from logger import logger
from semigroup.catalog import resolve_spec
from semigroup.errors import UsageError, VerificationFailed
from services.report_service import NORMALIZED_HEADER, SCAN_HEADER, ReportService, csv_block
from utils.artifact_writer import ArtifactWriter
from utils.input_handler import RunConfig


class CommandHandler:
    """Run one workbench command and emit its artifacts"""

    def __init__(self, run_config: RunConfig, writer: ArtifactWriter = None, report_service: ReportService = None):
        self.run_config = run_config
        self.writer = writer or ArtifactWriter(run_config.out)
        self.report_service = report_service or ReportService(
            tolerances=run_config.tolerances,
            digits=run_config.digits,
            precision_bits=run_config.precision_bits,
        )

    def handle_command(self, action: str) -> int:
        """Route commands to appropriate handlers; returns the exit code"""
        start_time = time.time()
        if action == 'generate':
            result = self._generate()
        elif action == 'constants':
            result = self._constants()
        elif action == 'verify':
            result = self._verify()
        elif action == 'meissel':
            result = self._meissel()
        elif action == 'identity':
            result = self._identity()
        else:
            raise UsageError(f"Unknown command: {action}")
        logger.log_system_event("command_finished", f"{action} in {time.time() - start_time:.3f}s")
        return result

    def _raise_on_failures(self, report: dict):
        failed = [check["name"] for check in report.get("checks", []) if not check["pass"]]
        if failed:
            raise VerificationFailed(failed)

    def _generate(self) -> int:
        """Write the n,P,G,lambda,g_norm,r table"""
        semigroup = resolve_spec(self.run_config.spec)
        rows = self.report_service.normalized_rows(semigroup)
        if self.run_config.format == 'csv':
            self.writer.write_table(NORMALIZED_HEADER, rows)
        else:
            report = self.report_service.header("generate", semigroup.spec)
            report["series"] = {"normalized": csv_block(NORMALIZED_HEADER, rows)}
            self.writer.write_json(report)
        return 0

    def _constants(self) -> int:
        semigroup = resolve_spec(self.run_config.spec)
        _, report = self.report_service.constants_report(semigroup)
        if self.run_config.format == 'json':
            self.writer.write_json(report)
        else:
            rows = []
            for name in ("gamma", "A", "C_M", "C_1", "C_2", "C_3", "I_integral"):
                pair = report["constants"][name]
                rows.append([name, pair["value"], pair["bound"]] if pair else [name, "", ""])
            self.writer.write_table(["name", "value", "bound"], rows)
        return 0

    def _verify(self) -> int:
        spec = self.run_config.spec
        report = self.report_service.zhang_report(spec, spec.n_max)
        if self.run_config.format == 'json':
            self.writer.write_json(report)
        else:
            rows = [[c["name"], c["statistic"], c["tolerance"], str(c["pass"]).lower()] for c in report["checks"]]
            self.writer.write_table(["name", "statistic", "tolerance", "pass"], rows)
        self._raise_on_failures(report)
        return 0

    def _meissel(self) -> int:
        """Alpha-scan table plus the JSON report of the evaluations"""
        semigroup = resolve_spec(self.run_config.spec)
        scan, report = self.report_service.meissel_report(
            semigroup, self.run_config.alpha_grid, progress=self.run_config.progress
        )
        if self.run_config.format == 'csv':
            self.writer.write_table(SCAN_HEADER, self.report_service.scan_rows(scan))
            companion = self.writer.companion_path(".json")
            if companion is not None and companion != self.writer.out:
                self.writer.write_json(report, companion)
        else:
            self.writer.write_json(report)
        self._raise_on_failures(report)
        return 0

    def _identity_failures(self, P, G, degrees: List[int]) -> List[int]:
        return [n for n in degrees if not exact_degree_identity_check(P, G, n)]

    def _identity(self) -> int:
        """Exact degree identity for every n <= n_max, split across --threads workers"""
        semigroup = resolve_spec(self.run_config.spec)
        P, G, n_max = semigroup.P, semigroup.G, semigroup.n_max
        threads = max(1, min(self.run_config.threads, n_max))
        # interleaved chunks balance the O(n log n) cost per degree
        chunks = [list(range(1 + offset, n_max + 1, threads)) for offset in range(threads)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            failures = sorted(n for part in pool.map(lambda c: self._identity_failures(P, G, c), chunks)
                              for n in part)
        passed = not failures
        logger.log_check_result("degree_identity", len(failures), 0, passed)
        report = self.report_service.header("identity", semigroup.spec)
        report["checks"] = [{
            "name": "degree_identity",
            "statistic": str(len(failures)),
            "tolerance": 0,
            "pass": passed,
        }]
        report["failed_degrees"] = failures[:50]
        self.writer.write_json(report)
        self._raise_on_failures(report)
        return 0
