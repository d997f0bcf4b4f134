"""Text-similarity metrics and the conjunctive threshold detection rule.

Both metrics consume whole formalized documents (header excluded). BLEU is
oriented: the assurance case is the candidate, the pattern the reference.
Cosine similarity is computed over raw term-frequency vectors and is
symmetric. With non-negative term frequencies the realized cosine range
is [0, 1].
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable

from .errors import EmptyText
from .prose import FormalizedText

_STRIP_CHARS = '.,;:!?()"'

MAX_NGRAM = 4


def tokenize(text: str | FormalizedText) -> list[str]:
    """Lowercase whitespace tokens, surrounding punctuation stripped.

    Placeholder braces are removed so the names keep contributing tokens;
    full-line comments are dropped.
    """
    if isinstance(text, FormalizedText):
        text = text.body
    tokens: list[str] = []
    for line in text.splitlines():
        if line.lstrip().startswith("#"):
            continue
        for raw in line.split():
            token = raw.lower().strip(_STRIP_CHARS).replace("{", "").replace("}", "")
            if token:
                tokens.append(token)
    return tokens


def _tokens_or_raise(text: str | FormalizedText, side: str) -> list[str]:
    tokens = tokenize(text)
    if not tokens:
        raise EmptyText(f"{side} text tokenizes to zero tokens")
    return tokens


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu(candidate: str | FormalizedText, reference: str | FormalizedText) -> float:
    """BLEU over n-grams up to 4, with clipping and brevity penalty.

    Zero higher-order precisions are floored at 1/(2 * candidate length);
    a zero unigram precision (no shared tokens at all) short-circuits to 0.
    """
    cand = _tokens_or_raise(candidate, "candidate")
    ref = _tokens_or_raise(reference, "reference")
    if cand == ref:
        return 1.0

    precisions: list[float] = []
    for n in range(1, MAX_NGRAM + 1):
        cand_counts = _ngrams(cand, n)
        ref_counts = _ngrams(ref, n)
        total = sum(cand_counts.values())
        clipped = sum(min(count, ref_counts[gram]) for gram, count in cand_counts.items())
        p = clipped / total if total else 0.0
        if p == 0.0:
            if n == 1:
                return 0.0
            p = 1.0 / (2 * len(cand))
        precisions.append(p)

    geo_mean = math.exp(sum(math.log(p) for p in precisions) / MAX_NGRAM)
    bp = 1.0 if len(cand) >= len(ref) else math.exp(1.0 - len(ref) / len(cand))
    return bp * geo_mean


def cosine_similarity(a: str | FormalizedText, b: str | FormalizedText) -> float:
    """Cosine of the angle between raw term-frequency vectors."""
    va = Counter(_tokens_or_raise(a, "first"))
    vb = Counter(_tokens_or_raise(b, "second"))
    if va == vb:
        return 1.0
    dot = sum(count * vb[token] for token, count in va.items())
    norm = math.sqrt(sum(c * c for c in va.values())) * math.sqrt(sum(c * c for c in vb.values()))
    return dot / norm


# --- metric registry ---------------------------------------------------------

#: metric(candidate=case, reference=pattern) -> value
MetricFn = Callable[[str | FormalizedText, str | FormalizedText], float]

METRICS: dict[str, MetricFn] = {
    "bleu": bleu,
    "cosine": lambda case, pattern: cosine_similarity(case, pattern),
}


def metric_names() -> list[str]:
    return sorted(METRICS)


# --- conjunctive detection rule ---------------------------------------------


@dataclass(frozen=True)
class MetricThreshold:
    metric: str
    threshold: float

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold {self.threshold} outside [0, 1]")


@dataclass(frozen=True)
class DetectionRule:
    clauses: tuple[MetricThreshold, ...]

    def __post_init__(self):
        if not self.clauses:
            raise ValueError("a detection rule needs at least one clause")
        names = [c.metric for c in self.clauses]
        if len(names) != len(set(names)):
            raise ValueError("at most one clause per metric")

    @classmethod
    def uniform(cls, threshold: float, metrics: tuple[str, ...] = ("bleu", "cosine")) -> "DetectionRule":
        """One shared threshold for every metric, the evaluation default."""
        return cls(tuple(MetricThreshold(m, threshold) for m in metrics))


@dataclass(frozen=True)
class MetricResult:
    metric: str
    value: float
    threshold: float
    satisfied: bool


def evaluate_rule(
    rule: DetectionRule,
    pattern: str | FormalizedText,
    case: str | FormalizedText,
) -> tuple[bool, list[MetricResult]]:
    """Apply every clause (case = candidate, pattern = reference); AND verdict.

    A clause is satisfied when its metric value is greater than or equal to
    its threshold, so a value exactly at the threshold counts.
    """
    results: list[MetricResult] = []
    for clause in rule.clauses:
        value = METRICS[clause.metric](case, pattern)
        results.append(
            MetricResult(
                metric=clause.metric,
                value=value,
                threshold=clause.threshold,
                satisfied=value >= clause.threshold,
            )
        )
    return all(r.satisfied for r in results), results
