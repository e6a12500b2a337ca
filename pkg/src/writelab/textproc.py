"""Lightweight text processing: tokenization, sentence splitting, lemmatization.

Everything here is deliberately small, deterministic, and dependency-free.
The lemmatizer is a rule-based suffix stripper backed by an exception table
bundled as a plain-text resource; it is a documented heuristic, not a full
morphological analyzer, and the quality metrics built on top treat it as a
replaceable component behind a stable contract.
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources
from typing import Mapping

WORD_RE = re.compile(r"\w+", re.UNICODE)

# Sentence boundaries: runs of terminal punctuation (not inside a number,
# so decimals like "3.5" survive) plus any newline. Abbreviation periods are
# a known limitation of this splitter.
_SENT_BOUNDARY_RE = re.compile(r"(?<!\d)[.!?]+(?!\d)|\n+")

_VOWEL_GROUP_RE = re.compile(r"[aeiou]+")
_VOWELS = "aeiou"


def tokenize(text: str) -> list[str]:
    """Lowercased word tokens (Unicode word characters)."""
    return [m.group(0).lower() for m in WORD_RE.finditer(text)]


def split_sentences(text: str) -> list[str]:
    """Split text into sentence strings; segments without word tokens drop."""
    segments = _SENT_BOUNDARY_RE.split(text)
    return [seg for seg in segments if seg and WORD_RE.search(seg)]


def tokenize_sentences(text: str) -> list[list[str]]:
    """Token lists per sentence, empty sentences dropped."""
    return [tokenize(seg) for seg in split_sentences(text)]


def is_alphabetic(token: str) -> bool:
    """True when the token contains at least one letter."""
    return any(ch.isalpha() for ch in token)


@lru_cache(maxsize=1)
def default_lemma_exceptions() -> Mapping[str, str]:
    """Irregular-form table bundled with the package (form -> base)."""
    text = resources.files("writelab.resources").joinpath("lemma_exceptions.txt").read_text("utf-8")
    return parse_lemma_exceptions(text)


def parse_lemma_exceptions(text: str) -> dict[str, str]:
    table: dict[str, str] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        form, base = line.split()
        table[form] = base
    return table


def lemmatize(token: str, exceptions: Mapping[str, str] | None = None) -> str:
    """Map a lowercased token to a base form via exceptions + suffix rules."""
    if exceptions is None:
        exceptions = default_lemma_exceptions()
    hit = exceptions.get(token)
    if hit is not None:
        return hit
    if token.endswith("ies") and len(token) >= 5:
        return token[:-3] + "y"
    if token.endswith("es") and len(token) >= 4:
        stem = token[:-2]
        if stem.endswith(("s", "x", "z", "ch", "sh", "o")):
            return stem
    if token.endswith("s") and len(token) >= 3 and not token.endswith(("ss", "us", "is")):
        return token[:-1]
    if token.endswith("ing") and len(token) >= 5:
        return _restore_stem(token[:-3])
    if token.endswith("ed") and len(token) >= 4:
        stem = token[:-2]
        if stem.endswith("i"):
            return stem[:-1] + "y"
        return _restore_stem(stem)
    return token


def _restore_stem(stem: str) -> str:
    # Undouble a trailing doubled consonant (running -> run) except the
    # clusters that are legitimately doubled in base forms (tell, class, buzz).
    if (
        len(stem) >= 3
        and stem[-1] == stem[-2]
        and stem[-1] not in _VOWELS
        and not stem.endswith(("ll", "ss", "zz"))
    ):
        return stem[:-1]
    # Restore a dropped final e for short consonant-vowel-consonant stems
    # (mak -> make, writ -> write) but leave multi-syllable stems alone
    # (open, visit, happen).
    if _is_cvc(stem) and len(_VOWEL_GROUP_RE.findall(stem)) == 1:
        return stem + "e"
    return stem


def _is_cvc(stem: str) -> bool:
    if len(stem) < 3:
        return False
    last, mid, prev = stem[-1], stem[-2], stem[-3]
    return (
        last not in _VOWELS
        and last not in "wxy"
        and mid in _VOWELS
        and prev not in _VOWELS
    )
