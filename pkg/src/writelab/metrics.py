"""Essay quality metrics computed on reconstructed documents.

Four session-level outcomes:

- Y1 ``advanced_guiraud``: distinct advanced lemma types (alphabetic lemmas
  outside the common-word list) divided by sqrt(total tokens) — lexical
  sophistication.
- Y2 ``mean_length_tunit``: words per minimal terminable unit — syntactic
  complexity. T-unit segmentation is a documented heuristic (see below), not
  a syntactic parse.
- Y3 ``semantic_overlap``: mean Jaccard similarity of content-lemma sets of
  adjacent sentences — topical cohesion.
- Y4 ``genbit_score``: mean absolute log-ratio of male vs female co-occurrence
  counts over content lemmas, windows bounded by sentences — gender skew.

T-unit heuristic
----------------

Sentences are split at terminal punctuation/newlines. Inside a sentence, a
coordinating conjunction starts a new T-unit when it is followed by a
determiner/pronoun subject opener and a finite-verb-looking token appears
before the next conjunction or the sentence end. Finite verbs are detected by
an auxiliary list, an irregular-past list, and ``-ed``/``-s`` suffixes, with a
determiner guard (a token right after a determiner is treated as a noun).
Because all metrics must be invariant to letter case, capitalization is never
used as a signal; proper-noun subjects therefore do not open new T-units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .errors import UndefinedMetricError, ValidationError
from .lexicons import Lexicons
from .textproc import is_alphabetic, lemmatize, tokenize, tokenize_sentences
from .util import read_csv_rows, write_csv_atomic

OUTCOMES = ("Y1", "Y2", "Y3", "Y4")

QUALITY_COLUMNS = ("session_id", "y1", "y2", "y3", "y4")

DEFAULT_BIAS_WINDOW = 10

COORDINATORS = frozenset({"and", "but", "or", "nor", "so", "yet", "for"})

SUBJECT_OPENERS = frozenset(
    {
        "a", "an", "the",
        "i", "you", "he", "she", "it", "we", "they", "there",
        "this", "that", "these", "those",
        "my", "your", "his", "her", "its", "our", "their",
        "some", "many", "most", "all", "no", "every", "each",
        "few", "several", "both", "another", "one", "two", "three",
    }
)

DETERMINER_GUARD = frozenset(
    {
        "a", "an", "the",
        "my", "your", "his", "her", "its", "our", "their",
        "this", "that", "these", "those",
        "some", "any", "no", "every", "each",
    }
)

FINITE_AUX = frozenset(
    {
        "is", "am", "are", "was", "were",
        "has", "have", "had",
        "do", "does", "did",
        "can", "could", "will", "would", "shall", "should",
        "may", "might", "must",
        "isn", "aren", "wasn", "weren", "hasn", "haven", "hadn",
        "don", "doesn", "didn", "couldn", "wouldn", "shouldn",
        "mightn", "mustn",
    }
)

IRREGULAR_FINITE = frozenset(
    {
        "ran", "ate", "slept", "kept", "left", "felt", "met", "meant",
        "sent", "spent", "built", "lost", "told", "sold", "bought",
        "brought", "thought", "fought", "caught", "taught", "sought",
        "took", "gave", "came", "saw", "knew", "grew", "threw", "flew",
        "drew", "wrote", "rode", "rose", "drove", "broke", "spoke",
        "chose", "froze", "stole", "woke", "began", "drank", "sang",
        "swam", "rang", "sank", "stood", "understood", "held", "heard",
        "found", "got", "sat", "lay", "paid", "read", "led", "fed",
        "bled", "bred", "sped", "fled", "won", "shone", "shot", "struck",
        "hung", "dug", "stuck", "swung", "wore", "tore", "bore", "swore",
        "fell", "bent", "lent", "burnt", "learnt", "dreamt", "dealt",
        "crept", "wept", "slid", "hid", "bit", "lit", "forgot", "forgave",
        "became", "arose", "awoke", "blew", "knelt", "shook", "spun",
        "sprang", "went", "said", "made",
    }
)


@dataclass(frozen=True)
class QualityVector:
    """The four outcome metrics for one document."""

    y1: float
    y2: float
    y3: float
    y4: float

    def value(self, outcome: str) -> float:
        return {"Y1": self.y1, "Y2": self.y2, "Y3": self.y3, "Y4": self.y4}[outcome]


def advanced_guiraud(text: str, lexicons: Lexicons) -> float:
    """Distinct advanced lemma types over sqrt(total tokens); 0 for empty text."""
    tokens = tokenize(text)
    if not tokens:
        return 0.0
    advanced = {
        lemma
        for tok in tokens
        if is_alphabetic(tok)
        and (lemma := lemmatize(tok)) not in lexicons.common_words
    }
    return len(advanced) / math.sqrt(len(tokens))


def mean_length_tunit(text: str) -> float:
    """Words per T-unit under the documented segmentation heuristic."""
    sentences = tokenize_sentences(text)
    if not sentences:
        raise UndefinedMetricError("mean_length_tunit undefined: no sentences")
    total_words = sum(len(s) for s in sentences)
    total_units = sum(_count_tunits(s) for s in sentences)
    return total_words / total_units


def _count_tunits(tokens: Sequence[str]) -> int:
    units = 1
    for i, tok in enumerate(tokens):
        if tok not in COORDINATORS or i + 1 >= len(tokens):
            continue
        if tokens[i + 1] not in SUBJECT_OPENERS:
            continue
        scan_end = len(tokens)
        for j in range(i + 2, len(tokens)):
            if tokens[j] in COORDINATORS:
                scan_end = j
                break
        if any(_looks_finite(tokens, j) for j in range(i + 2, scan_end)):
            units += 1
    return units


def _looks_finite(tokens: Sequence[str], idx: int) -> bool:
    tok = tokens[idx]
    if idx > 0 and tokens[idx - 1] in DETERMINER_GUARD:
        return False
    if tok in FINITE_AUX or tok in IRREGULAR_FINITE:
        return True
    if tok.endswith("ed") and len(tok) >= 4:
        return True
    if (
        tok.endswith("s")
        and len(tok) >= 3
        and not tok.endswith(("ss", "us", "is"))
    ):
        return True
    return False


def jaccard_similarity(left: set[str], right: set[str]) -> float:
    """Default pair similarity: Jaccard index, 0.0 when both sets are empty."""
    union = left | right
    return len(left & right) / len(union) if union else 0.0


def semantic_overlap(
    text: str,
    lexicons: Lexicons,
    pair_similarity: Callable[[set[str], set[str]], float] = jaccard_similarity,
) -> float:
    """Mean similarity of adjacent sentences' content-lemma sets.

    The pair similarity is pluggable for future semantic backends; the
    default is lexical Jaccard.
    """
    sentences = tokenize_sentences(text)
    if not sentences:
        raise UndefinedMetricError("semantic_overlap undefined: no sentences")
    if len(sentences) == 1:
        return 0.0
    sets = [_content_lemmas(s, lexicons) for s in sentences]
    scores = [pair_similarity(left, right) for left, right in zip(sets, sets[1:])]
    return sum(scores) / len(scores)


def _content_lemmas(tokens: Iterable[str], lexicons: Lexicons) -> set[str]:
    out = set()
    for tok in tokens:
        if not is_alphabetic(tok) or tok in lexicons.stopwords:
            continue
        lemma = lemmatize(tok)
        if lemma in lexicons.stopwords:
            continue
        out.add(lemma)
    return out


def genbit_score(
    text: str, lexicons: Lexicons, window: int = DEFAULT_BIAS_WINDOW
) -> float:
    """Mean |ln((m+1)/(f+1))| of gendered co-occurrence counts per lemma.

    Co-occurrence windows span ±`window` token positions and never cross
    sentence boundaries. Lemmas that never co-occur with a gendered word do
    not contribute; a text with no contributing lemma scores 0.0.
    """
    if window < 1:
        raise ValidationError(f"bias window must be >= 1, got {window}")
    sentences = tokenize_sentences(text)

    male_counts: dict[str, int] = {}
    female_counts: dict[str, int] = {}
    for tokens in sentences:
        genders = [_gender_of(tok, lexicons) for tok in tokens]
        for i, tok in enumerate(tokens):
            if genders[i] is not None or not is_alphabetic(tok):
                continue
            if tok in lexicons.stopwords:
                continue
            lemma = lemmatize(tok)
            if lemma in lexicons.stopwords:
                continue
            lo = max(0, i - window)
            hi = min(len(tokens), i + window + 1)
            for j in range(lo, hi):
                if j == i:
                    continue
                if genders[j] == "m":
                    male_counts[lemma] = male_counts.get(lemma, 0) + 1
                elif genders[j] == "f":
                    female_counts[lemma] = female_counts.get(lemma, 0) + 1

    lemmas = sorted(set(male_counts) | set(female_counts))
    if not lemmas:
        return 0.0
    total = 0.0
    for lemma in lemmas:
        m = male_counts.get(lemma, 0)
        f = female_counts.get(lemma, 0)
        total += abs(math.log((m + 1) / (f + 1)))
    return total / len(lemmas)


def _gender_of(token: str, lexicons: Lexicons) -> str | None:
    lemma = lemmatize(token)
    if token in lexicons.male_words or lemma in lexicons.male_words:
        return "m"
    if token in lexicons.female_words or lemma in lexicons.female_words:
        return "f"
    return None


def compute_quality(
    text: str, lexicons: Lexicons, bias_window: int = DEFAULT_BIAS_WINDOW
) -> QualityVector:
    """All four outcome metrics for one document."""
    return QualityVector(
        y1=advanced_guiraud(text, lexicons),
        y2=mean_length_tunit(text),
        y3=semantic_overlap(text, lexicons),
        y4=genbit_score(text, lexicons, window=bias_window),
    )


def write_quality_csv(rows: Iterable[tuple[str, QualityVector]], path: Path) -> None:
    write_csv_atomic(
        path,
        QUALITY_COLUMNS,
        [(sid, q.y1, q.y2, q.y3, q.y4) for sid, q in rows],
    )


def read_quality_csv(path: Path) -> dict[str, QualityVector]:
    out: dict[str, QualityVector] = {}
    for row in read_csv_rows(path):
        out[row["session_id"]] = QualityVector(
            y1=float(row["y1"]),
            y2=float(row["y2"]),
            y3=float(row["y3"]),
            y4=float(row["y4"]),
        )
    return out
