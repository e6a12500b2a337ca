"""Loading and validation of the lexicon resource files used by the metrics.

Four plain-text files (one entry per line) back the quality metrics:

- ``common_words.txt``: frequency-ranked common-word lemmas; the top-K prefix
  (default 2000) defines which lemmas are "common" for lexical-sophistication
  scoring.
- ``stopwords.txt``: function words excluded from content-lemma sets.
- ``male_words.txt`` / ``female_words.txt``: gendered lexicons for the
  co-occurrence bias score; they must be disjoint.

The package bundles defaults under ``writelab/resources``; a run can swap in
its own directory containing the same file names.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import ValidationError

DEFAULT_TOP_K = 2000

_FILES = ("common_words.txt", "stopwords.txt", "male_words.txt", "female_words.txt")


@dataclass(frozen=True)
class Lexicons:
    """Word lists backing the quality metrics."""

    common_words: frozenset[str]
    stopwords: frozenset[str]
    male_words: frozenset[str]
    female_words: frozenset[str]
    top_k: int = field(default=DEFAULT_TOP_K)

    def __post_init__(self) -> None:
        overlap = self.male_words & self.female_words
        if overlap:
            raise ValidationError(
                f"male/female lexicons overlap: {sorted(overlap)[:5]}"
            )
        if not self.common_words:
            raise ValidationError("common-word list is empty")


def load_lexicons(directory: Path | str | None = None, top_k: int = DEFAULT_TOP_K) -> Lexicons:
    """Load lexicons from a directory, or the bundled defaults when None."""
    if top_k < 1:
        raise ValidationError(f"top_k must be positive, got {top_k}")
    texts: dict[str, str] = {}
    if directory is None:
        root = resources.files("writelab.resources")
        for name in _FILES:
            texts[name] = root.joinpath(name).read_text("utf-8")
    else:
        directory = Path(directory)
        for name in _FILES:
            path = directory / name
            if not path.is_file():
                raise ValidationError(f"missing lexicon file: {path}")
            texts[name] = path.read_text("utf-8")
    ranked_common = _parse_words(texts["common_words.txt"])
    return Lexicons(
        common_words=frozenset(ranked_common[:top_k]),
        stopwords=frozenset(_parse_words(texts["stopwords.txt"])),
        male_words=frozenset(_parse_words(texts["male_words.txt"])),
        female_words=frozenset(_parse_words(texts["female_words.txt"])),
        top_k=top_k,
    )


def _parse_words(text: str) -> list[str]:
    words = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.append(line.lower())
    return words
