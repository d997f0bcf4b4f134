"""Pattern detection over a pattern library and the threshold-sweep
evaluation harness (multi-run detection with precision/recall/F-measure).

The deterministic rule engine is authoritative. When a generation backend
is attached, the model is additionally asked to apply the rule and any
disagreement with the deterministic verdict is logged; the model never
overrides the engine.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field

from .errors import EmptyGroundTruth
from .instantiation import PromptTask, build_prompt
from .metrics import DetectionRule, MetricResult, evaluate_rule
from .model import GoalStructure, PatternDocument
from .prose import serialize

log = logging.getLogger(__name__)

DEFAULT_THRESHOLDS = (0.2, 0.4, 0.6, 0.8, 1.0)
DEFAULT_RUNS = 5


@dataclass(frozen=True)
class DetectionJob:
    case: GoalStructure
    candidates: tuple[PatternDocument, ...]
    rule: DetectionRule
    runs: int = 1
    backend: object | None = None  # object with .complete() / .name, or None

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if not self.candidates:
            raise ValueError("at least one candidate pattern is required")


@dataclass(frozen=True)
class RunResult:
    detected: bool
    results: tuple[MetricResult, ...]
    model_verdict: bool | None = None  # None when no backend is attached


@dataclass(frozen=True)
class PatternReport:
    pattern: str
    runs: tuple[RunResult, ...]

    @property
    def majority(self) -> bool:
        return sum(1 for r in self.runs if r.detected) * 2 > len(self.runs)


@dataclass(frozen=True)
class DetectionReport:
    case: str
    patterns: tuple[PatternReport, ...]

    def detected_patterns(self) -> set[str]:
        return {p.pattern for p in self.patterns if p.majority}


_VERDICT_RE = re.compile(r"\bNOT[_\s-]?DETECTED\b|\bDETECTED\b", re.IGNORECASE)


def _model_verdict(backend, pattern: PatternDocument, case: GoalStructure, rule: DetectionRule) -> bool | None:
    prompts = build_prompt(PromptTask.DETECT, pattern, case=case, rule=rule)
    reply = backend.complete(prompts.system, prompts.user)
    match = _VERDICT_RE.search(reply)
    if match is None:
        log.warning("backend reply carries no verdict for pattern %r", pattern.structure.name)
        return None
    return match.group(0).upper() == "DETECTED"


def detect(job: DetectionJob) -> DetectionReport:
    """Run the rule for every (candidate, run) pair.

    Deterministic runs are computed once and replicated; candidates are
    always evaluated independently, one pattern at a time.
    """
    case_text = serialize(job.case)
    reports = []
    for candidate in job.candidates:
        pattern_text = serialize(candidate)
        detected, results = evaluate_rule(job.rule, pattern_text, case_text)
        runs = []
        for _ in range(job.runs):
            model_verdict = None
            if job.backend is not None:
                model_verdict = _model_verdict(job.backend, candidate, job.case, job.rule)
                if model_verdict is not None and model_verdict != detected:
                    log.warning(
                        "backend disagrees on %r vs %r: model=%s engine=%s",
                        candidate.structure.name, job.case.name, model_verdict, detected,
                    )
            runs.append(RunResult(detected=detected, results=tuple(results), model_verdict=model_verdict))
        reports.append(PatternReport(pattern=candidate.structure.name, runs=tuple(runs)))
    return DetectionReport(case=job.case.name, patterns=tuple(reports))


def precision(detected: set[str], truth: set[str]) -> float:
    """Correctly detected over all detected; 0 when nothing was detected."""
    if not detected:
        return 0.0
    return len(detected & truth) / len(detected)


def recall(detected: set[str], truth: set[str]) -> float:
    """Correctly detected over the patterns actually used."""
    if not truth:
        raise EmptyGroundTruth("ground truth set is empty")
    return len(detected & truth) / len(truth)


def f_measure(p: float, r: float) -> float:
    """Harmonic mean of precision and recall; 0 at the degenerate point."""
    if p + r == 0:
        return 0.0
    return 2 * p * r / (p + r)


@dataclass(frozen=True)
class CorpusEntry:
    system: str
    case: GoalStructure
    truth: frozenset[str]  # pattern names the case was derived from


@dataclass(frozen=True)
class EvaluationRow:
    system: str
    backend: str
    threshold: float
    recall: float
    precision: float
    f_measure: float
    runs: int
    error: str | None = None


@dataclass(frozen=True)
class EvaluationReport:
    rows: tuple[EvaluationRow, ...]

    def row(self, system: str, backend: str, threshold: float) -> EvaluationRow:
        for r in self.rows:
            if r.system == system and r.backend == backend and abs(r.threshold - threshold) < 1e-9:
                return r
        raise KeyError((system, backend, threshold))


def evaluate_corpus(
    corpus: list[CorpusEntry],
    candidates: list[PatternDocument],
    thresholds: list[float] = list(DEFAULT_THRESHOLDS),
    runs: int = DEFAULT_RUNS,
    backends: list | None = None,
) -> EvaluationReport:
    """One row per (system, backend, threshold) with run-averaged P/R/FM.

    ``backends`` may contain None (the deterministic engine) and/or backend
    objects; cell failures are recorded on their row without aborting the
    remaining cells.
    """
    for t in thresholds:
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"threshold {t} outside [0, 1]")
    backend_list = backends if backends is not None else [None]

    rows: list[EvaluationRow] = []
    for entry in corpus:
        for backend in backend_list:
            backend_name = "deterministic" if backend is None else getattr(backend, "name", str(backend))
            for threshold in thresholds:
                try:
                    rows.append(
                        _evaluate_cell(entry, candidates, threshold, runs, backend, backend_name)
                    )
                except Exception as exc:
                    log.warning("cell (%s, %s, %s) failed: %s", entry.system, backend_name, threshold, exc)
                    rows.append(
                        EvaluationRow(
                            system=entry.system, backend=backend_name, threshold=threshold,
                            recall=0.0, precision=0.0, f_measure=0.0, runs=runs, error=str(exc),
                        )
                    )
    return EvaluationReport(rows=tuple(rows))


def _evaluate_cell(entry, candidates, threshold, runs, backend, backend_name) -> EvaluationRow:
    rule = DetectionRule.uniform(threshold)
    job = DetectionJob(case=entry.case, candidates=tuple(candidates), rule=rule, runs=runs, backend=backend)
    report = detect(job)

    p_sum = r_sum = f_sum = 0.0
    for run_index in range(runs):
        detected = {
            pr.pattern for pr in report.patterns if pr.runs[run_index].detected
        }
        p = precision(detected, set(entry.truth))
        r = recall(detected, set(entry.truth))
        p_sum += p
        r_sum += r
        f_sum += f_measure(p, r)
    return EvaluationRow(
        system=entry.system,
        backend=backend_name,
        threshold=threshold,
        recall=r_sum / runs,
        precision=p_sum / runs,
        f_measure=f_sum / runs,
        runs=runs,
    )


def render_table(report: EvaluationReport) -> str:
    """Human-readable table, values rounded to two decimals."""
    header = f"{'System':<14} {'Backend':<14} {'Thr':>5} {'R':>6} {'P':>6} {'FM':>6}"
    lines = [header, "-" * len(header)]
    for row in report.rows:
        if row.error:
            lines.append(f"{row.system:<14} {row.backend:<14} {row.threshold:>5.2f}  error: {row.error}")
        else:
            lines.append(
                f"{row.system:<14} {row.backend:<14} {row.threshold:>5.2f} "
                f"{row.recall:>6.2f} {row.precision:>6.2f} {row.f_measure:>6.2f}"
            )
    return "\n".join(lines) + "\n"


def to_records(report: EvaluationReport) -> str:
    """Machine-readable report: one JSON object per line, one line per cell."""
    lines = []
    for row in report.rows:
        record = {
            "system": row.system,
            "backend": row.backend,
            "threshold": row.threshold,
            "recall": row.recall,
            "precision": row.precision,
            "f_measure": row.f_measure,
            "runs": row.runs,
        }
        if row.error:
            record["error"] = row.error
        lines.append(json.dumps(record, sort_keys=True))
    return "\n".join(lines) + "\n"
