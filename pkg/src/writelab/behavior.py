"""Behavioral treatment variables derived from suggestion episodes.

Three session-level behaviors are measured and then binarized at the corpus
median so each can serve as a binary treatment:

- T1: number of rejected suggestion episodes,
- T2: accepted-verbatim episodes / accepted episodes,
- T3: accepted-modified episodes / accepted episodes.

Sessions that accepted no suggestion have undefined T2/T3 ratios; they are
flagged (``valid_t2t3 = False``), excluded from the T2/T3 medians, and dropped
from T2/T3 analyses downstream while still contributing to T1.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

from .errors import EstimationError, ValidationError
from .ingest import Resolution, SuggestionEpisode
from .util import (
    fmt_float,
    parse_optional_float,
    parse_optional_int,
    read_csv_rows,
    write_csv_atomic,
)

TREATMENTS = ("T1", "T2", "T3")

BEHAVIOR_COLUMNS = (
    "session_id",
    "t1_raw",
    "t2_raw",
    "t3_raw",
    "t1_bin",
    "t2_bin",
    "t3_bin",
    "valid_t2t3",
)


@dataclass(frozen=True)
class BehaviorProfile:
    """Raw and binarized treatment values for one session."""

    session_id: str
    t1_raw: int
    t2_raw: float | None
    t3_raw: float | None
    valid_t2t3: bool
    t1_bin: int | None = None
    t2_bin: int | None = None
    t3_bin: int | None = None

    def raw(self, treatment: str) -> float | None:
        return {"T1": self.t1_raw, "T2": self.t2_raw, "T3": self.t3_raw}[treatment]

    def bin(self, treatment: str) -> int | None:
        return {"T1": self.t1_bin, "T2": self.t2_bin, "T3": self.t3_bin}[treatment]


def extract_behavior_profile(
    session_id: str, episodes: Sequence[SuggestionEpisode]
) -> BehaviorProfile:
    """Count episode resolutions into the raw treatment values."""
    rejected = sum(1 for ep in episodes if ep.resolution is Resolution.REJECTED)
    verbatim = sum(
        1 for ep in episodes if ep.resolution is Resolution.ACCEPTED_VERBATIM
    )
    modified = sum(
        1 for ep in episodes if ep.resolution is Resolution.ACCEPTED_MODIFIED
    )
    accepted = verbatim + modified
    if accepted:
        return BehaviorProfile(
            session_id=session_id,
            t1_raw=rejected,
            t2_raw=verbatim / accepted,
            t3_raw=modified / accepted,
            valid_t2t3=True,
        )
    return BehaviorProfile(
        session_id=session_id,
        t1_raw=rejected,
        t2_raw=None,
        t3_raw=None,
        valid_t2t3=False,
    )


def binarize_treatments(profiles: Sequence[BehaviorProfile]) -> list[BehaviorProfile]:
    """Binarize each treatment at its corpus median (strictly above -> 1).

    Ties with the median go to group 0. T2/T3 medians are computed over the
    sessions with defined ratios only; excluded sessions keep empty bins.
    """
    if len(profiles) < 2:
        raise ValidationError(
            f"need at least 2 sessions to binarize, got {len(profiles)}"
        )

    t1_median = statistics.median(p.t1_raw for p in profiles)

    valid = [p for p in profiles if p.valid_t2t3]
    if not valid:
        raise EstimationError(
            "treatments T2/T3: every session is excluded "
            "(no session accepted a suggestion)"
        )
    t2_median = statistics.median(p.t2_raw for p in valid)  # type: ignore[misc]
    t3_median = statistics.median(p.t3_raw for p in valid)  # type: ignore[misc]

    out: list[BehaviorProfile] = []
    for p in profiles:
        out.append(
            replace(
                p,
                t1_bin=int(p.t1_raw > t1_median),
                t2_bin=int(p.t2_raw > t2_median) if p.valid_t2t3 else None,
                t3_bin=int(p.t3_raw > t3_median) if p.valid_t2t3 else None,
            )
        )
    return out


def write_behavior_csv(profiles: Iterable[BehaviorProfile], path: Path) -> None:
    rows = [
        (
            p.session_id,
            p.t1_raw,
            fmt_float(p.t2_raw),
            fmt_float(p.t3_raw),
            p.t1_bin,
            p.t2_bin,
            p.t3_bin,
            int(p.valid_t2t3),
        )
        for p in profiles
    ]
    write_csv_atomic(path, BEHAVIOR_COLUMNS, rows)


def read_behavior_csv(path: Path) -> list[BehaviorProfile]:
    profiles = []
    for row in read_csv_rows(path):
        profiles.append(
            BehaviorProfile(
                session_id=row["session_id"],
                t1_raw=int(row["t1_raw"]),
                t2_raw=parse_optional_float(row["t2_raw"]),
                t3_raw=parse_optional_float(row["t3_raw"]),
                valid_t2t3=bool(int(row["valid_t2t3"])),
                t1_bin=parse_optional_int(row["t1_bin"]),
                t2_bin=parse_optional_int(row["t2_bin"]),
                t3_bin=parse_optional_int(row["t3_bin"]),
            )
        )
    return profiles
