import json
import random

import pytest

from gsnkit.backends import MockBackend
from gsnkit.corpus import CASES, GROUND_TRUTH, PATTERNS, reproduction_corpus
from gsnkit.detection import (
    DEFAULT_THRESHOLDS,
    CorpusEntry,
    DetectionJob,
    EvaluationReport,
    EvaluationRow,
    detect,
    evaluate_corpus,
    f_measure,
    precision,
    recall,
    render_table,
    to_records,
)
from gsnkit.errors import EmptyGroundTruth
from gsnkit.metrics import DetectionRule

from oracles import oracle_f_measure


ALL_PATTERNS = list(PATTERNS.values())


def test_precision_recall_definitions():
    detected, truth = {"a", "b"}, {"a", "c"}
    assert precision(detected, truth) == 0.5
    assert recall(detected, truth) == 0.5
    assert precision(set(), truth) == 0.0
    with pytest.raises(EmptyGroundTruth):
        recall({"a"}, set())


def test_f_measure_fixed_point():
    assert f_measure(1.0, 0.5) == pytest.approx(2 / 3, abs=1e-12)
    assert f_measure(0.0, 0.0) == 0.0


def test_f_measure_matches_oracle():
    rng = random.Random(21)
    for _ in range(200):
        p, r = rng.random(), rng.random()
        assert f_measure(p, r) == pytest.approx(oracle_f_measure(p, r), abs=1e-12)


def test_detect_reproduction_pairs_at_low_threshold():
    rule = DetectionRule.uniform(0.2)
    for system, case in CASES.items():
        job = DetectionJob(case=case, candidates=tuple(ALL_PATTERNS), rule=rule)
        report = detect(job)
        detected = report.detected_patterns()
        # cross-pattern similarities are all below 0.2; the only misses are the
        # second bluerov2 pattern (prose diverges too far after substitution)
        assert detected == GROUND_TRUTH[system] - {"bluerov2-resonate"}


def test_detect_nothing_at_threshold_one():
    rule = DetectionRule.uniform(1.0)
    for case in CASES.values():
        report = detect(DetectionJob(case=case, candidates=tuple(ALL_PATTERNS), rule=rule))
        assert report.detected_patterns() == set()


def test_runs_replicate_deterministic_verdict():
    job = DetectionJob(
        case=CASES["acas-xu"], candidates=tuple(ALL_PATTERNS), rule=DetectionRule.uniform(0.2), runs=5
    )
    report = detect(job)
    for pattern_report in report.patterns:
        assert len(pattern_report.runs) == 5
        assert len({r.detected for r in pattern_report.runs}) == 1
        assert all(r.model_verdict is None for r in pattern_report.runs)


def test_model_cross_check_never_overrides_engine():
    # The mock contradicts the engine for every pattern; deterministic verdicts win.
    backend = MockBackend(["NOT_DETECTED"])
    job = DetectionJob(
        case=CASES["acas-xu"],
        candidates=(PATTERNS["acas-xu-threat-identification"],),
        rule=DetectionRule.uniform(0.2),
        runs=3,
        backend=backend,
    )
    report = detect(job)
    assert report.detected_patterns() == {"acas-xu-threat-identification"}
    assert all(r.model_verdict is False for r in report.patterns[0].runs)
    assert len(backend.calls) == 3


def test_job_validation():
    with pytest.raises(ValueError):
        DetectionJob(case=CASES["gpca"], candidates=(), rule=DetectionRule.uniform(0.2))
    with pytest.raises(ValueError):
        DetectionJob(
            case=CASES["gpca"], candidates=tuple(ALL_PATTERNS), rule=DetectionRule.uniform(0.2), runs=0
        )


def _reproduction_report(runs=1) -> EvaluationReport:
    corpus = reproduction_corpus()
    return evaluate_corpus(list(corpus.entries), list(corpus.patterns), runs=runs)


def test_threshold_sweep_bands():
    report = _reproduction_report()
    for system in CASES:
        low = report.row(system, "deterministic", 0.2)
        if system == "bluerov2":
            # two-pattern ground truth, exactly one pattern detected
            assert low.precision == 1.0
            assert low.recall == 0.5
            assert low.f_measure == pytest.approx(2 / 3)
        else:
            assert (low.precision, low.recall, low.f_measure) == (1.0, 1.0, 1.0)
        for threshold in (0.8, 1.0):
            row = report.row(system, "deterministic", threshold)
            assert (row.precision, row.recall, row.f_measure) == (0.0, 0.0, 0.0)


def test_sweep_monotone_in_threshold():
    report = _reproduction_report()
    for system in CASES:
        recalls = [report.row(system, "deterministic", t).recall for t in DEFAULT_THRESHOLDS]
        assert recalls == sorted(recalls, reverse=True)


def test_multi_run_average_equals_single_run():
    single = _reproduction_report(runs=1)
    multi = _reproduction_report(runs=5)
    for row in single.rows:
        other = multi.row(row.system, row.backend, row.threshold)
        assert other.precision == pytest.approx(row.precision)
        assert other.recall == pytest.approx(row.recall)
        assert other.f_measure == pytest.approx(row.f_measure)
        assert other.runs == 5


def test_threshold_validation():
    corpus = reproduction_corpus()
    with pytest.raises(ValueError):
        evaluate_corpus(list(corpus.entries), list(corpus.patterns), thresholds=[0.2, 1.5])


def test_cell_error_recorded_not_raised():
    # empty ground truth makes recall undefined; the cell must carry the error
    entry = CorpusEntry(system="broken", case=CASES["gpca"], truth=frozenset())
    report = evaluate_corpus([entry], ALL_PATTERNS, thresholds=[0.2], runs=1)
    assert len(report.rows) == 1
    assert report.rows[0].error
    assert report.rows[0].f_measure == 0.0


def test_render_table_two_decimals():
    report = _reproduction_report()
    table = render_table(report)
    assert "0.67" in table  # bluerov2 f-measure
    assert table.count("\n") == len(report.rows) + 2


def test_to_records_is_jsonl():
    report = _reproduction_report()
    lines = to_records(report).strip().splitlines()
    assert len(lines) == len(report.rows)
    record = json.loads(lines[0])
    assert set(record) == {"system", "backend", "threshold", "recall", "precision", "f_measure", "runs"}


def test_report_row_lookup():
    report = _reproduction_report()
    with pytest.raises(KeyError):
        report.row("acas-xu", "deterministic", 0.3)
    row = report.row("acas-xu", "deterministic", 0.2)
    assert isinstance(row, EvaluationRow)
