import csv
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from logger import logger
from semigroup.errors import ArtifactError


class ArtifactWriter:
    """Write CSV tables and JSON reports to a path, or to stdout when no path is given"""

    def __init__(self, out: Optional[str] = None):
        self.out = out if out not in (None, "-") else None

    def _open(self, path: Optional[str]):
        if path is None:
            return None
        try:
            Path(path).parent.mkdir(parents=True, exist_ok=True)
            return open(path, "w", newline="", encoding="utf-8")
        except OSError as e:
            logger.log_error("artifact_open_failed", str(e), f"Path: {path}")
            raise ArtifactError(f"cannot write {path}: {e}")

    def write_table(self, header: Sequence[str], rows: Sequence[Sequence], path: Optional[str] = None) -> None:
        path = path or self.out
        handle = self._open(path)
        try:
            writer = csv.writer(handle or sys.stdout, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
        except OSError as e:
            logger.log_error("artifact_write_failed", str(e), f"Path: {path}")
            raise ArtifactError(f"cannot write {path}: {e}")
        finally:
            if handle is not None:
                handle.close()
        logger.log_system_event("table_written", f"{path or 'stdout'}: {len(rows)} rows")

    def write_json(self, report: dict, path: Optional[str] = None) -> None:
        """Sorted keys and a trailing newline, so equal reports are byte-identical"""
        path = path or self.out
        text = json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
        handle = self._open(path)
        try:
            (handle or sys.stdout).write(text)
        except OSError as e:
            logger.log_error("artifact_write_failed", str(e), f"Path: {path}")
            raise ArtifactError(f"cannot write {path}: {e}")
        finally:
            if handle is not None:
                handle.close()
        logger.log_system_event("report_written", f"{path or 'stdout'}: {len(text)} bytes")

    def companion_path(self, suffix: str) -> Optional[str]:
        """The output path with a different suffix, e.g. the JSON report next to a CSV table"""
        if self.out is None:
            return None
        return str(Path(self.out).with_suffix(suffix))
