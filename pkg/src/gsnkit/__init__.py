"""Assurance-case management toolkit.

GSN goal structures, a canonical structured-prose codec, text-similarity
pattern detection with a conjunctive threshold rule, LLM-assisted pattern
instantiation, local project persistence, an HTTP JSON API, and a CLI.
"""

from .model import (
    ElementKind,
    GoalStructure,
    GsnElement,
    GsnRelationship,
    PatternDocument,
    RelationshipKind,
    StructureStats,
    Violation,
    extract_placeholders,
    is_valid,
    next_id,
    statistics,
    validate,
)
from .prose import FormalizedText, ParseDiagnostic, parse, serialize
from .export import export_dot, export_svg
from .metrics import (
    DetectionRule,
    MetricResult,
    MetricThreshold,
    bleu,
    cosine_similarity,
    evaluate_rule,
)
from .detection import (
    CorpusEntry,
    DetectionJob,
    DetectionReport,
    EvaluationReport,
    detect,
    evaluate_corpus,
    f_measure,
    precision,
    recall,
)
from .instantiation import DomainKnowledge, PromptPair, PromptTask, build_prompt, generate_case, substitute
from .backends import ChatBackend, GenerationBackendConfig, MockBackend
from .persistence import Project, load_project, save_project

__version__ = "0.1.0"
