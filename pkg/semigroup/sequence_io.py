"""
Sequence files: CSV with header `n,P,G`, one row per degree.

The degree-0 row carries an empty P field. Integers are written as exact
decimals; a file whose entries are not all integers is read in analysis mode
(decimal strings become exact Fractions).
"""

import csv
from fractions import Fraction
from pathlib import Path
from typing import Optional, Tuple

from logger import logger
from semigroup.counts import ElementCounts, GeneratorCounts
from semigroup.errors import ArtifactError, DomainError

SEQUENCE_HEADER = ["n", "P", "G"]


def _parse_value(text: str, path: Path, row_number: int):
    text = text.strip()
    if not text:
        return None
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ArtifactError(f"{path}:{row_number}: cannot parse '{text}' as a number")


def read_sequence_csv(path) -> Tuple[Optional[GeneratorCounts], Optional[ElementCounts]]:
    """Read a sequence file; either column may be absent or left blank"""
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames is None or "n" not in reader.fieldnames:
                raise ArtifactError(f"{path}: missing header with column 'n'")
            rows = list(reader)
    except OSError as e:
        logger.log_error("sequence_read_failed", str(e), f"Path: {path}")
        raise ArtifactError(f"cannot read sequence file {path}: {e}")

    p_values, g_values = {}, {}
    for row_number, row in enumerate(rows, 2):
        try:
            degree = int(row["n"])
        except (TypeError, ValueError):
            raise ArtifactError(f"{path}:{row_number}: bad degree '{row.get('n')}'")
        p_value = _parse_value(row.get("P") or "", path, row_number)
        g_value = _parse_value(row.get("G") or "", path, row_number)
        if p_value is not None and degree >= 1:
            p_values[degree] = p_value
        if g_value is not None:
            g_values[degree] = g_value

    P = _assemble(p_values, 1, GeneratorCounts, path, "P")
    G = _assemble(g_values, 0, ElementCounts, path, "G")
    logger.log_system_event(
        "sequence_read",
        f"{path}: P degrees={P.n_max if P else 0}, G degrees={G.n_max if G else 0}"
    )
    return P, G


def _assemble(values: dict, first: int, kind, path: Path, column: str):
    if not values:
        return None
    last = max(values)
    missing = [d for d in range(first, last + 1) if d not in values]
    if missing:
        raise ArtifactError(f"{path}: column {column} has gaps at degrees {missing[:5]}")
    ordered = tuple(values[d] for d in range(first, last + 1))
    strict = all(isinstance(v, int) or v.denominator == 1 for v in ordered)
    return kind(ordered, strict=strict)


def write_sequence_csv(path, P: Optional[GeneratorCounts], G: Optional[ElementCounts]) -> None:
    """Write P and/or G with exact decimal integers (Fractions as p/q)"""
    if P is None and G is None:
        raise DomainError("nothing to write")
    n_max = max(P.n_max if P else 0, G.n_max if G else 0)
    try:
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(SEQUENCE_HEADER)
            for n in range(n_max + 1):
                p_field = str(P[n]) if P is not None and 1 <= n <= P.n_max else ""
                g_field = str(G[n]) if G is not None and n <= G.n_max else ""
                writer.writerow([n, p_field, g_field])
    except OSError as e:
        logger.log_error("sequence_write_failed", str(e), f"Path: {path}")
        raise ArtifactError(f"cannot write sequence file {path}: {e}")
