"""Command-line surface for batch users and CI.

Exit codes: 0 success, 1 domain failure (invalid structure, corrupt store),
2 usage error, 3 backend or transport failure.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import corpus as corpus_mod
from . import jsoncodec
from .backends import ChatBackend, GenerationBackendConfig
from .detection import (
    DEFAULT_RUNS,
    DEFAULT_THRESHOLDS,
    DetectionJob,
    detect as run_detect,
    evaluate_corpus,
    render_table,
    to_records,
)
from .errors import BackendRefusal, BackendUnavailable, GsnkitError
from .export import export_dot, export_svg
from .instantiation import DomainKnowledge, generate_case, substitute
from .metrics import DetectionRule, MetricThreshold
from .model import PatternDocument, validate
from .prose import has_errors, parse, serialize

EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_BACKEND = 3


def _fail(message: str, code: int) -> "click.exceptions.Exit":
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _read_document(path: str):
    text = Path(path).read_text(encoding="utf-8")
    if path.endswith(".json"):
        return jsoncodec.structure_from_json(json.loads(text))
    doc, diagnostics = parse(text)
    if has_errors(diagnostics):
        for d in diagnostics:
            click.echo(f"{path}:{d.line}: {d.severity}: {d.message}", err=True)
        _fail(f"{path} does not parse cleanly", EXIT_DOMAIN)
    return doc


def _as_structure(doc):
    return doc.structure if isinstance(doc, PatternDocument) else doc


def _as_pattern(doc) -> PatternDocument:
    return doc if isinstance(doc, PatternDocument) else PatternDocument.from_structure(doc)


def _threshold_value(value: float, name: str) -> float:
    if not 0.0 <= value <= 1.0:
        raise click.BadParameter(f"{name} must be within [0, 1], got {value}")
    return value


def _write_output(content: str, output: str | None):
    if output:
        Path(output).write_text(content, encoding="utf-8")
    else:
        click.echo(content, nl=False)


def _backend_option(endpoint: str | None, model: str | None, temperature: float, max_tokens: int):
    if endpoint is None and model is None:
        return None
    if endpoint is None or model is None:
        raise click.BadParameter("--backend-endpoint and --backend-model go together")
    return ChatBackend(
        GenerationBackendConfig(
            endpoint=endpoint, model=model, temperature=temperature, max_tokens=max_tokens
        )
    )


@click.group()
def main():
    """Assurance-case toolkit: convert, validate, detect, instantiate, evaluate, serve."""


@main.command()
@click.argument("input_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--to", "target", type=click.Choice(["prose", "json", "dot", "svg"]), required=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
def convert(input_path: str, target: str, output: str | None):
    """Convert between prose, JSON, DOT, and SVG representations."""
    doc = _read_document(input_path)
    try:
        if target == "prose":
            content = serialize(doc).text
        elif target == "json":
            content = jsoncodec.dumps(jsoncodec.structure_to_json(doc))
        elif target == "dot":
            content = export_dot(_as_structure(doc))
        else:
            content = export_svg(_as_structure(doc))
    except GsnkitError as exc:
        _fail(str(exc), EXIT_DOMAIN)
    _write_output(content, output)


@main.command("validate")
@click.argument("input_path", type=click.Path(exists=True, dir_okay=False))
def validate_cmd(input_path: str):
    """Exit 0 iff the structure has no error-severity violations."""
    doc = _read_document(input_path)
    violations = validate(_as_structure(doc))
    for v in violations:
        click.echo(f"{v.severity}: {v.code} {list(v.ids)}: {v.message}", err=True)
    if any(v.severity == "error" for v in violations):
        sys.exit(EXIT_DOMAIN)
    click.echo("valid")


@main.command("detect")
@click.option("--pattern", "pattern_paths", type=click.Path(exists=True, dir_okay=False), multiple=True, required=True)
@click.option("--case", "case_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--threshold", type=float, default=None, help="Shared threshold for both metrics.")
@click.option("--threshold-bleu", type=float, default=None)
@click.option("--threshold-cosine", type=float, default=None)
@click.option("--runs", type=int, default=1, show_default=True)
@click.option("--backend-endpoint", default=None)
@click.option("--backend-model", default=None)
@click.option("--temperature", type=float, default=1.0, show_default=True)
@click.option("--max-tokens", type=int, default=4096, show_default=True)
def detect_cmd(pattern_paths, case_path, threshold, threshold_bleu, threshold_cosine,
               runs, backend_endpoint, backend_model, temperature, max_tokens):
    """Apply the conjunctive metric rule to one case and candidate patterns."""
    if threshold is None and threshold_bleu is None and threshold_cosine is None:
        raise click.BadParameter("set --threshold or per-metric thresholds")
    bleu_t = _threshold_value(threshold_bleu if threshold_bleu is not None else threshold, "--threshold-bleu")
    cosine_t = _threshold_value(threshold_cosine if threshold_cosine is not None else threshold, "--threshold-cosine")
    rule = DetectionRule((MetricThreshold("bleu", bleu_t), MetricThreshold("cosine", cosine_t)))

    case = _as_structure(_read_document(case_path))
    candidates = tuple(_as_pattern(_read_document(p)) for p in pattern_paths)
    try:
        backend = _backend_option(backend_endpoint, backend_model, temperature, max_tokens)
        report = run_detect(DetectionJob(case=case, candidates=candidates, rule=rule, runs=runs, backend=backend))
    except (BackendUnavailable, BackendRefusal) as exc:
        _fail(str(exc), EXIT_BACKEND)
    except GsnkitError as exc:
        _fail(str(exc), EXIT_DOMAIN)

    for pattern_report in report.patterns:
        verdict = "detected" if pattern_report.majority else "not detected"
        click.echo(f"{pattern_report.pattern}: {verdict}")
        for result in pattern_report.runs[0].results:
            click.echo(
                f"  {result.metric} = {result.value:.4f} "
                f"({'>=' if result.satisfied else '<'} {result.threshold:g})"
            )


@main.command("instantiate")
@click.option("--pattern", "pattern_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--knowledge", "knowledge_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--backend-endpoint", default=None)
@click.option("--backend-model", default=None)
@click.option("--temperature", type=float, default=1.0, show_default=True)
@click.option("--max-tokens", type=int, default=4096, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
def instantiate_cmd(pattern_path, knowledge_path, backend_endpoint, backend_model,
                    temperature, max_tokens, output):
    """Instantiate a pattern; without a backend, by deterministic substitution."""
    pattern = _as_pattern(_read_document(pattern_path))
    record = json.loads(Path(knowledge_path).read_text(encoding="utf-8"))
    knowledge = DomainKnowledge(
        system_name=record.get("system", ""),
        facts=tuple(record.get("facts", ())),
        bindings=dict(record.get("bindings", {})),
    )
    try:
        backend = _backend_option(backend_endpoint, backend_model, temperature, max_tokens)
        if backend is None:
            structure = substitute(pattern, knowledge.bindings)
        else:
            structure, diagnostics, _raw = generate_case(pattern, knowledge, backend)
            for d in diagnostics:
                click.echo(f"reply:{d.line}: {d.severity}: {d.message}", err=True)
        content = serialize(structure).text
    except (BackendUnavailable, BackendRefusal) as exc:
        _fail(str(exc), EXIT_BACKEND)
    except GsnkitError as exc:
        _fail(str(exc), EXIT_DOMAIN)
    _write_output(content, output)


@main.command("evaluate")
@click.option("--corpus", "corpus_path", default="builtin", show_default=True,
              help="Corpus directory, or 'builtin' for the bundled reproduction corpus.")
@click.option("--thresholds", default=",".join(f"{t:g}" for t in DEFAULT_THRESHOLDS), show_default=True)
@click.option("--runs", type=int, default=DEFAULT_RUNS, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None,
              help="Write machine-readable per-cell records (JSON lines) here.")
def evaluate_cmd(corpus_path, thresholds, runs, output):
    """Threshold sweep over a corpus; prints the averaged P/R/FM table."""
    try:
        values = [float(t) for t in thresholds.split(",") if t.strip()]
    except ValueError:
        raise click.BadParameter(f"cannot parse thresholds {thresholds!r}")
    for t in values:
        _threshold_value(t, "--thresholds")
    try:
        if corpus_path == "builtin":
            corpus = corpus_mod.reproduction_corpus()
        else:
            corpus = corpus_mod.load_corpus(corpus_path)
        report = evaluate_corpus(
            list(corpus.entries), list(corpus.patterns), thresholds=values, runs=runs
        )
    except GsnkitError as exc:
        _fail(str(exc), EXIT_DOMAIN)
    click.echo(render_table(report), nl=False)
    if output:
        Path(output).write_text(to_records(report), encoding="utf-8")


@main.command("corpus")
@click.argument("action", type=click.Choice(["init"]))
@click.argument("directory", type=click.Path(file_okay=False))
def corpus_cmd(action: str, directory: str):
    """Materialize the bundled reproduction corpus into a directory."""
    corpus_mod.write_corpus(corpus_mod.reproduction_corpus(), directory)
    click.echo(f"wrote reproduction corpus to {directory}")


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--store", default="./gsnkit-store", show_default=True)
@click.option("--token", default=None, help="Static bearer token; omit to disable auth.")
def serve_cmd(host, port, store, token):
    """Run the HTTP JSON API."""
    from .service import ServiceConfig, serve

    serve(ServiceConfig(store_root=store, token=token), host=host, port=port)


if __name__ == "__main__":
    main()
