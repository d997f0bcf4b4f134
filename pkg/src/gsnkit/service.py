"""HTTP JSON API: validation, conversion, detection, instantiation,
evaluation, and project CRUD for the web editor and other clients.

Every failure maps to an ApiError body {code, message, details} drawn from
a closed code set; malformed bodies never crash the service. Auth is an
optional static bearer token; long evaluations run as polled jobs.
"""

from __future__ import annotations

import os
import threading
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from . import corpus as corpus_mod
from . import jsoncodec
from .backends import ChatBackend, GenerationBackendConfig
from .detection import (
    DEFAULT_RUNS,
    DEFAULT_THRESHOLDS,
    DetectionJob,
    detect,
    evaluate_corpus,
    render_table,
)
from .errors import (
    BackendRefusal,
    BackendUnavailable,
    CorruptStore,
    GsnkitError,
    InvalidStructure,
    NotFound,
    StoreUnwritable,
)
from .export import export_dot, export_svg
from .instantiation import DomainKnowledge, generate_case, substitute
from .metrics import DetectionRule, MetricThreshold, metric_names
from .model import PatternDocument, validate
from .persistence import (
    Project,
    delete_project,
    list_projects,
    list_revisions,
    load_project,
    save_project,
)
from .prose import parse, serialize

API_ERROR_CODES = frozenset(
    {
        "BadRequest",
        "ThresholdOutOfRange",
        "InvalidStructure",
        "NotFound",
        "StoreUnwritable",
        "CorruptStore",
        "BackendUnavailable",
        "BackendRefusal",
        "Unauthorized",
    }
)


class ApiError(Exception):
    def __init__(self, code: str, message: str, status: int = 400, details: dict | None = None):
        assert code in API_ERROR_CODES
        self.code = code
        self.message = message
        self.status = status
        self.details = details or {}
        super().__init__(message)


@dataclass
class ServiceConfig:
    store_root: str = "./gsnkit-store"
    token: str | None = None  # None disables auth
    cors_origins: tuple[str, ...] = ("*",)
    backend: GenerationBackendConfig | None = None

    @classmethod
    def from_env(cls) -> "ServiceConfig":
        return cls(
            store_root=os.environ.get("GSNKIT_STORE", "./gsnkit-store"),
            token=os.environ.get("GSNKIT_TOKEN"),
        )


@dataclass
class _Job:
    status: str = "running"  # running | done | failed
    result: dict | None = None
    error: str | None = None


@dataclass
class _Jobs:
    lock: threading.Lock = field(default_factory=threading.Lock)
    jobs: dict[str, _Job] = field(default_factory=dict)


class ParseBody(BaseModel):
    text: str


class StructureBody(BaseModel):
    structure: dict


class ExportBody(BaseModel):
    structure: dict
    format: str = "svg"


class DetectBody(BaseModel):
    case: dict | None = None
    case_name: str | None = None
    patterns: list[dict] | None = None
    candidates: list[str] | None = None
    project: str | None = None
    thresholds: dict[str, float] | None = None
    threshold: float | None = None
    runs: int = 1
    backend: dict | None = None


class InstantiateBody(BaseModel):
    pattern: dict | None = None
    pattern_name: str | None = None
    project: str | None = None
    knowledge: dict
    backend: dict | None = None


class EvaluateBody(BaseModel):
    corpus: str = "builtin"  # "builtin" or a corpus directory path
    thresholds: list[float] = list(DEFAULT_THRESHOLDS)
    runs: int = DEFAULT_RUNS
    backend: dict | None = None


class ProjectBody(BaseModel):
    project: dict


def _decode_structure(data: dict, what: str = "structure"):
    try:
        return jsoncodec.structure_from_json(data)
    except (KeyError, ValueError, TypeError) as exc:
        raise ApiError("BadRequest", f"malformed {what}: {exc}")


def _build_rule(thresholds: dict[str, float] | None, shared: float | None) -> DetectionRule:
    if thresholds is None and shared is None:
        raise ApiError("BadRequest", "either 'thresholds' or 'threshold' is required")
    if thresholds is None:
        thresholds = {name: shared for name in metric_names()}
    clauses = []
    for metric, value in sorted(thresholds.items()):
        if metric not in metric_names():
            raise ApiError("BadRequest", f"unknown metric {metric!r}")
        if not 0.0 <= value <= 1.0:
            raise ApiError(
                "ThresholdOutOfRange",
                f"threshold for {metric} must be within [0, 1], got {value}",
            )
        clauses.append(MetricThreshold(metric, value))
    return DetectionRule(tuple(clauses))


def _backend_from(data: dict | None, config: ServiceConfig):
    if data is None:
        return None
    try:
        backend_config = GenerationBackendConfig(
            endpoint=data["endpoint"],
            model=data["model"],
            temperature=data.get("temperature", 1.0),
            max_tokens=data.get("max_tokens", 4096),
            credential_env=data.get("credential_env", "GSNKIT_API_KEY"),
        )
    except (KeyError, ValueError) as exc:
        raise ApiError("BadRequest", f"malformed backend config: {exc}")
    return ChatBackend(backend_config)


def _knowledge_from(data: dict) -> DomainKnowledge:
    try:
        return DomainKnowledge(
            system_name=data.get("system", data.get("system_name", "")),
            facts=tuple(data.get("facts", ())),
            bindings=dict(data.get("bindings", {})),
        )
    except (TypeError, ValueError) as exc:
        raise ApiError("BadRequest", f"malformed knowledge: {exc}")


def _project_to_json(project: Project) -> dict:
    return {
        "name": project.name,
        "created": project.created,
        "modified": project.modified,
        "cases": {name: jsoncodec.structure_to_json(c) for name, c in project.cases.items()},
        "patterns": {name: jsoncodec.structure_to_json(p) for name, p in project.patterns.items()},
        "knowledge": {
            name: {"system": k.system_name, "facts": list(k.facts), "bindings": dict(k.bindings)}
            for name, k in project.knowledge.items()
        },
        "reports": {name: jsoncodec.report_to_json(r) for name, r in project.reports.items()},
    }


def _project_from_json(data: dict) -> Project:
    try:
        cases = {}
        patterns = {}
        for name, raw in data.get("cases", {}).items():
            doc = jsoncodec.structure_from_json(raw)
            cases[name] = doc.structure if isinstance(doc, PatternDocument) else doc
        for name, raw in data.get("patterns", {}).items():
            doc = jsoncodec.structure_from_json(raw)
            if not isinstance(doc, PatternDocument):
                doc = PatternDocument.from_structure(doc)
            patterns[name] = doc
        project = Project(
            name=data["name"],
            created=data.get("created", 0.0) or 0.0,
            modified=data.get("modified", 0.0) or 0.0,
            cases=cases,
            patterns=patterns,
            knowledge={name: _knowledge_from(k) for name, k in data.get("knowledge", {}).items()},
            reports={
                name: jsoncodec.report_from_json(r) for name, r in data.get("reports", {}).items()
            },
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise ApiError("BadRequest", f"malformed project: {exc}")
    for name, case in project.cases.items():
        if any(v.severity == "error" for v in validate(case)):
            raise ApiError("InvalidStructure", f"case {name!r} does not validate")
    for name, pattern in project.patterns.items():
        if any(v.severity == "error" for v in validate(pattern.structure)):
            raise ApiError("InvalidStructure", f"pattern {name!r} does not validate")
    return project


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig.from_env()
    app = FastAPI(title="gsnkit", version="0.1.0")
    jobs = _Jobs()

    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(config.cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"code": exc.code, "message": exc.message, "details": exc.details},
        )

    @app.exception_handler(GsnkitError)
    async def _domain_error(_request: Request, exc: GsnkitError):
        mapping = {
            InvalidStructure: ("InvalidStructure", 400),
            NotFound: ("NotFound", 404),
            StoreUnwritable: ("StoreUnwritable", 409),
            CorruptStore: ("CorruptStore", 500),
            BackendUnavailable: ("BackendUnavailable", 502),
            BackendRefusal: ("BackendRefusal", 502),
        }
        code, status = next(
            (v for t, v in mapping.items() if isinstance(exc, t)), ("BadRequest", 400)
        )
        return JSONResponse(status_code=status, content={"code": code, "message": str(exc), "details": {}})

    @app.middleware("http")
    async def _auth(request: Request, call_next):
        if config.token and request.method != "OPTIONS":
            header = request.headers.get("authorization", "")
            if header != f"Bearer {config.token}":
                return JSONResponse(
                    status_code=401,
                    content={"code": "Unauthorized", "message": "missing or wrong bearer token", "details": {}},
                )
        return await call_next(request)

    # --- conversion and validation ------------------------------------------

    @app.post("/parse")
    def parse_endpoint(body: ParseBody):
        doc, diagnostics = parse(body.text)
        return {
            "structure": jsoncodec.structure_to_json(doc),
            "diagnostics": [d.__dict__ for d in diagnostics],
        }

    @app.post("/serialize")
    def serialize_endpoint(body: StructureBody):
        doc = _decode_structure(body.structure)
        return {"text": serialize(doc).text}

    @app.post("/validate")
    def validate_endpoint(body: StructureBody):
        doc = _decode_structure(body.structure)
        structure = doc.structure if isinstance(doc, PatternDocument) else doc
        violations = validate(structure)
        return {
            "valid": not any(v.severity == "error" for v in violations),
            "violations": [v.__dict__ for v in violations],
        }

    @app.post("/export")
    def export_endpoint(body: ExportBody):
        doc = _decode_structure(body.structure)
        structure = doc.structure if isinstance(doc, PatternDocument) else doc
        if body.format == "dot":
            return PlainTextResponse(export_dot(structure), media_type="text/vnd.graphviz")
        if body.format == "svg":
            return PlainTextResponse(export_svg(structure), media_type="image/svg+xml")
        raise ApiError("BadRequest", f"unknown export format {body.format!r}")

    # --- detection and instantiation ----------------------------------------

    def _resolve_patterns(body: DetectBody) -> list[PatternDocument]:
        if body.patterns:
            docs = []
            for raw in body.patterns:
                doc = _decode_structure(raw, "pattern")
                if not isinstance(doc, PatternDocument):
                    doc = PatternDocument.from_structure(doc)
                docs.append(doc)
            return docs
        if body.candidates:
            if body.project:
                project = load_project(config.store_root, body.project)
                pool = project.patterns
            else:
                pool = {
                    p.structure.name: p for p in corpus_mod.reproduction_corpus().patterns
                }
            missing = [name for name in body.candidates if name not in pool]
            if missing:
                raise ApiError("NotFound", f"unknown candidate patterns: {missing}", status=404)
            return [pool[name] for name in body.candidates]
        raise ApiError("BadRequest", "either 'patterns' or 'candidates' is required")

    @app.post("/detect")
    def detect_endpoint(body: DetectBody):
        rule = _build_rule(body.thresholds, body.threshold)
        if body.case is not None:
            doc = _decode_structure(body.case, "case")
            case = doc.structure if isinstance(doc, PatternDocument) else doc
        elif body.case_name is not None:
            corpus = corpus_mod.reproduction_corpus()
            case = corpus.entry(body.case_name).case
        else:
            raise ApiError("BadRequest", "either 'case' or 'case_name' is required")
        job = DetectionJob(
            case=case,
            candidates=tuple(_resolve_patterns(body)),
            rule=rule,
            runs=body.runs,
            backend=_backend_from(body.backend, config),
        )
        report = detect(job)
        return {
            "case": report.case,
            "patterns": [
                {
                    "pattern": p.pattern,
                    "majority": p.majority,
                    "runs": [
                        {
                            "detected": r.detected,
                            "model_verdict": r.model_verdict,
                            "results": [m.__dict__ for m in r.results],
                        }
                        for r in p.runs
                    ],
                }
                for p in report.patterns
            ],
            "detected": sorted(report.detected_patterns()),
        }

    @app.post("/instantiate")
    def instantiate_endpoint(body: InstantiateBody):
        if body.pattern is not None:
            doc = _decode_structure(body.pattern, "pattern")
            pattern = doc if isinstance(doc, PatternDocument) else PatternDocument.from_structure(doc)
        elif body.pattern_name is not None:
            if body.project:
                project = load_project(config.store_root, body.project)
                if body.pattern_name not in project.patterns:
                    raise ApiError("NotFound", f"no pattern {body.pattern_name!r}", status=404)
                pattern = project.patterns[body.pattern_name]
            else:
                pattern = corpus_mod.reproduction_corpus().pattern(body.pattern_name)
        else:
            raise ApiError("BadRequest", "either 'pattern' or 'pattern_name' is required")
        knowledge = _knowledge_from(body.knowledge)
        backend = _backend_from(body.backend, config)
        if backend is None:
            structure = substitute(pattern, knowledge.bindings)
            diagnostics, raw = [], None
        else:
            structure, diagnostics, raw = generate_case(pattern, knowledge, backend)
        return {
            "structure": jsoncodec.structure_to_json(structure),
            "diagnostics": [d.__dict__ for d in diagnostics],
            "raw_reply": raw,
        }

    # --- evaluation jobs -----------------------------------------------------

    @app.post("/evaluate", status_code=202)
    def evaluate_endpoint(body: EvaluateBody):
        for t in body.thresholds:
            if not 0.0 <= t <= 1.0:
                raise ApiError("ThresholdOutOfRange", f"threshold {t} outside [0, 1]")
        if body.corpus == "builtin":
            corpus = corpus_mod.reproduction_corpus()
        else:
            corpus = corpus_mod.load_corpus(body.corpus)
        backend = _backend_from(body.backend, config)
        job_id = uuid.uuid4().hex

        def run():
            try:
                report = evaluate_corpus(
                    list(corpus.entries),
                    list(corpus.patterns),
                    thresholds=body.thresholds,
                    runs=body.runs,
                    backends=[backend] if backend else None,
                )
                with jobs.lock:
                    jobs.jobs[job_id] = _Job(
                        status="done",
                        result={
                            "report": jsoncodec.report_to_json(report),
                            "table": render_table(report),
                        },
                    )
            except Exception as exc:
                with jobs.lock:
                    jobs.jobs[job_id] = _Job(status="failed", error=str(exc))

        with jobs.lock:
            jobs.jobs[job_id] = _Job()
        threading.Thread(target=run, daemon=True).start()
        return {"job": job_id}

    @app.get("/jobs/{job_id}")
    def job_endpoint(job_id: str):
        with jobs.lock:
            job = jobs.jobs.get(job_id)
            if job is None:
                raise ApiError("NotFound", f"no job {job_id!r}", status=404)
            return {"status": job.status, "result": job.result, "error": job.error}

    # --- project CRUD --------------------------------------------------------

    @app.get("/projects")
    def projects_endpoint():
        return {"projects": list_projects(config.store_root)}

    @app.post("/projects", status_code=201)
    def create_project_endpoint(body: ProjectBody):
        project = _project_from_json(body.project)
        revision = save_project(project, config.store_root)
        return {"name": project.name, "revision": revision}

    @app.get("/projects/{name}")
    def get_project_endpoint(name: str, revision: str | None = None):
        project = load_project(config.store_root, name, revision)
        return {
            "project": _project_to_json(project),
            "revisions": list_revisions(config.store_root, name),
        }

    @app.put("/projects/{name}")
    def put_project_endpoint(name: str, body: ProjectBody):
        project = _project_from_json(body.project)
        if project.name != name:
            raise ApiError("BadRequest", "project name in path and body differ")
        revision = save_project(project, config.store_root)
        return {"name": name, "revision": revision}

    @app.delete("/projects/{name}")
    def delete_project_endpoint(name: str):
        delete_project(config.store_root, name)
        return {"deleted": name}

    return app


def serve(config: ServiceConfig, host: str = "127.0.0.1", port: int = 8000):
    import uvicorn

    uvicorn.run(create_app(config), host=host, port=port)
