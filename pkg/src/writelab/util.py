"""Shared helpers: deterministic seeding, float formatting, atomic file IO."""

from __future__ import annotations

import csv
import hashlib
import math
import os
from pathlib import Path
from typing import Iterable, Sequence


def derive_seed(base_seed: int, *tags: object) -> int:
    """Derive a stable sub-seed from a base seed and a tag path.

    The derivation is order-independent across call sites (it depends only on
    the arguments), so parallel schedules and cached-stage reruns reproduce
    identical randomness.
    """
    material = ":".join([str(int(base_seed))] + [str(t) for t in tags])
    digest = hashlib.sha256(material.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def fmt_float(value: float | int | None) -> str:
    """Format a number for CSV output with exact round-trip semantics."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def normal_cdf(z: float) -> float:
    """Standard normal CDF via the error function."""
    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))


def two_sided_p_value(reference: float, mean: float, sd: float) -> float:
    """Two-sided normal-approximation p-value of `reference` under N(mean, sd).

    Degenerate spread (sd == 0) yields 1.0 when the simulated effects sit
    exactly at the reference and 0.0 otherwise.
    """
    if sd == 0.0 or math.isnan(sd):
        return 1.0 if reference == mean else 0.0
    z = (reference - mean) / sd
    return 2.0 * (1.0 - normal_cdf(abs(z)))


def write_text_atomic(path: Path, content: str) -> None:
    """Write text to `path` via a temp file and atomic rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(content, encoding="utf-8")
    os.replace(tmp, path)


def write_csv_atomic(path: Path, header: Sequence[str], rows: Iterable[Sequence[object]]) -> None:
    """Write a CSV file with deterministic bytes (LF line endings, repr floats)."""
    lines: list[str] = []
    out = _CsvBuffer(lines)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(list(header))
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    write_text_atomic(Path(path), "".join(lines))


def _cell(value: object) -> object:
    if value is None:
        return ""
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, float):
        return repr(value)
    return value


class _CsvBuffer:
    def __init__(self, lines: list[str]):
        self._lines = lines

    def write(self, chunk: str) -> None:
        self._lines.append(chunk)


def read_csv_rows(path: Path) -> list[dict[str, str]]:
    """Read a CSV written by this toolkit into a list of string dicts."""
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def parse_optional_float(cell: str) -> float | None:
    return None if cell == "" else float(cell)


def parse_optional_int(cell: str) -> int | None:
    return None if cell == "" else int(cell)
