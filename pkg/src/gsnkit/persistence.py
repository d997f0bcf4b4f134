"""Local project store: named projects with cases, patterns, knowledge and
reports, saved as human-diffable text plus content-hash revision history.

Layout, one directory per project:

    <store>/<project>/
      project.json            metadata (name, timestamps)
      cases/<name>.gsn.txt
      patterns/<name>.gsn.txt
      knowledge.json
      reports.json
      revisions/<hash>/...    immutable snapshots (append-only)
      revisions/log           revision ids, oldest first
      .lock                   advisory single-writer lock
"""

from __future__ import annotations

import hashlib
import json
import os
import shutil
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

from .detection import EvaluationReport, EvaluationRow
from .errors import CorruptStore, NotFound, StoreUnwritable
from .instantiation import DomainKnowledge
from .model import GoalStructure, PatternDocument
from .prose import parse, serialize


@dataclass(frozen=True)
class Project:
    name: str
    created: float = field(default_factory=time.time)
    modified: float = field(default_factory=time.time)
    cases: dict[str, GoalStructure] = field(default_factory=dict)
    patterns: dict[str, PatternDocument] = field(default_factory=dict)
    knowledge: dict[str, DomainKnowledge] = field(default_factory=dict)
    reports: dict[str, EvaluationReport] = field(default_factory=dict)


def _files_of(project: Project) -> dict[str, str]:
    """Relative path -> file content; the canonical serialized form."""
    files = {
        "project.json": json.dumps(
            {"name": project.name, "created": project.created, "modified": project.modified},
            indent=2, sort_keys=True,
        ) + "\n",
    }
    for name, case in sorted(project.cases.items()):
        files[f"cases/{name}.gsn.txt"] = serialize(case).text
    for name, pattern in sorted(project.patterns.items()):
        files[f"patterns/{name}.gsn.txt"] = serialize(pattern).text
    files["knowledge.json"] = json.dumps(
        {
            name: {"system": k.system_name, "facts": list(k.facts), "bindings": dict(k.bindings)}
            for name, k in sorted(project.knowledge.items())
        },
        indent=2, sort_keys=True,
    ) + "\n"
    files["reports.json"] = json.dumps(
        {
            name: [row.__dict__ for row in report.rows]
            for name, report in sorted(project.reports.items())
        },
        indent=2, sort_keys=True,
    ) + "\n"
    return files


def _revision_id(files: dict[str, str]) -> str:
    digest = hashlib.sha256()
    for path in sorted(files):
        digest.update(path.encode())
        digest.update(b"\0")
        digest.update(files[path].encode())
        digest.update(b"\0")
    return digest.hexdigest()[:16]


@contextmanager
def project_lock(project_dir: Path):
    """Advisory single-writer lock; readers do not take it."""
    lock = project_dir / ".lock"
    try:
        fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise StoreUnwritable(f"project {project_dir.name!r} is locked by another writer")
    try:
        os.write(fd, str(os.getpid()).encode())
        os.close(fd)
        yield
    finally:
        lock.unlink(missing_ok=True)


def save_project(project: Project, store: str | Path) -> str:
    """Write the working tree and an immutable snapshot; returns the
    content-hash revision id. Identical content yields an identical id."""
    store = Path(store)
    try:
        store.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise StoreUnwritable(f"cannot create store at {store}: {exc}")
    if not os.access(store, os.W_OK):
        raise StoreUnwritable(f"store at {store} is not writable")

    files = _files_of(project)
    revision = _revision_id(files)
    project_dir = store / project.name
    project_dir.mkdir(exist_ok=True)

    with project_lock(project_dir):
        for rel, content in files.items():
            target = project_dir / rel
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(content, encoding="utf-8")
        # Drop working-tree files that no longer exist in the project.
        for sub in ("cases", "patterns"):
            directory = project_dir / sub
            if directory.is_dir():
                for existing in directory.glob("*.gsn.txt"):
                    if f"{sub}/{existing.name}" not in files:
                        existing.unlink()

        snapshot = project_dir / "revisions" / revision
        if not snapshot.exists():
            for rel, content in files.items():
                target = snapshot / rel
                target.parent.mkdir(parents=True, exist_ok=True)
                target.write_text(content, encoding="utf-8")
        log = project_dir / "revisions" / "log"
        history = log.read_text().split() if log.exists() else []
        if not history or history[-1] != revision:
            with log.open("a") as fh:
                fh.write(revision + "\n")
    return revision


def list_revisions(store: str | Path, name: str) -> list[str]:
    log = Path(store) / name / "revisions" / "log"
    if not log.exists():
        raise NotFound(f"project {name!r} has no revisions")
    return log.read_text().split()


def list_projects(store: str | Path) -> list[str]:
    store = Path(store)
    if not store.is_dir():
        return []
    return sorted(p.name for p in store.iterdir() if (p / "project.json").is_file())


def delete_project(store: str | Path, name: str) -> None:
    project_dir = Path(store) / name
    if not (project_dir / "project.json").is_file():
        raise NotFound(f"no project {name!r} in store")
    shutil.rmtree(project_dir)


def load_project(store: str | Path, name: str, revision: str | None = None) -> Project:
    """Load the latest revision, or an explicit one; verifies content hashes."""
    project_dir = Path(store) / name
    if not project_dir.is_dir():
        raise NotFound(f"no project {name!r} in store {store}")
    revisions = list_revisions(store, name)
    if revision is None:
        revision = revisions[-1]
    elif revision not in revisions:
        raise NotFound(f"project {name!r} has no revision {revision!r}")

    snapshot = project_dir / "revisions" / revision
    files: dict[str, str] = {}
    for path in sorted(snapshot.rglob("*")):
        if path.is_file():
            files[path.relative_to(snapshot).as_posix()] = path.read_text(encoding="utf-8")
    if _revision_id(files) != revision:
        raise CorruptStore(f"revision {revision!r} of {name!r} does not match its content hash")

    meta = json.loads(files["project.json"])
    cases: dict[str, GoalStructure] = {}
    patterns: dict[str, PatternDocument] = {}
    for rel, content in files.items():
        if rel.startswith("cases/"):
            doc, _ = parse(content)
            structure = doc.structure if isinstance(doc, PatternDocument) else doc
            cases[rel[len("cases/"):-len(".gsn.txt")]] = structure
        elif rel.startswith("patterns/"):
            doc, _ = parse(content)
            if not isinstance(doc, PatternDocument):
                doc = PatternDocument.from_structure(doc)
            patterns[rel[len("patterns/"):-len(".gsn.txt")]] = doc

    knowledge = {
        name_: DomainKnowledge(
            system_name=record["system"],
            facts=tuple(record.get("facts", ())),
            bindings=dict(record.get("bindings", {})),
        )
        for name_, record in json.loads(files.get("knowledge.json", "{}")).items()
    }
    reports = {
        name_: EvaluationReport(rows=tuple(EvaluationRow(**row) for row in rows))
        for name_, rows in json.loads(files.get("reports.json", "{}")).items()
    }
    return Project(
        name=meta["name"],
        created=meta["created"],
        modified=meta["modified"],
        cases=cases,
        patterns=patterns,
        knowledge=knowledge,
        reports=reports,
    )


def prune_revisions(store: str | Path, name: str, keep: int = 1) -> list[str]:
    """Explicitly drop all but the newest ``keep`` revisions; returns survivors."""
    revisions = list_revisions(store, name)
    survivors = revisions[-keep:] if keep > 0 else []
    project_dir = Path(store) / name
    with project_lock(project_dir):
        for revision in revisions:
            if revision not in survivors:
                shutil.rmtree(project_dir / "revisions" / revision, ignore_errors=True)
        (project_dir / "revisions" / "log").write_text("".join(r + "\n" for r in survivors))
    return survivors
