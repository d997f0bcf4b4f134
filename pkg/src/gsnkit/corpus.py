"""Bundled reproduction corpus and the on-disk corpus directory format.

Five systems, each assurance case derived from its pattern(s) by realistic
placeholder substitution plus system-specific additions. The underwater
vehicle case is the only one derived from two patterns; the detector is
offered each pattern singly. Directory layout for external corpora:

    corpus/
      cases/<name>.gsn.txt
      patterns/<name>.gsn.txt
      truth.json            {"case name": ["pattern name", ...]}
      knowledge/<name>.json  (optional)
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

from .detection import CorpusEntry
from .errors import NotFound
from .instantiation import DomainKnowledge, substitute
from .model import (
    ElementKind,
    GoalStructure,
    GsnElement,
    GsnRelationship,
    PatternDocument,
    RelationshipKind,
)
from .prose import HEADER_PATTERN, parse, serialize

_KINDS = {
    "G": ElementKind.GOAL,
    "S": ElementKind.STRATEGY,
    "Sn": ElementKind.SOLUTION,
    "C": ElementKind.CONTEXT,
    "A": ElementKind.ASSUMPTION,
    "J": ElementKind.JUSTIFICATION,
}


def _kind_of(element_id: str) -> ElementKind:
    prefix = "Sn" if element_id.startswith("Sn") else element_id[0]
    return _KINDS[prefix]


def build(name: str, rows: list[tuple]) -> GoalStructure:
    """Rows are (id, statement, parent, relation) with relation 'sup'/'ctx';
    the element kind is inferred from the id prefix."""
    elements = []
    relationships = []
    for element_id, statement, parent, relation in rows:
        elements.append(GsnElement(id=element_id, kind=_kind_of(element_id), statement=statement))
        if parent is not None:
            kind = RelationshipKind.SUPPORTED_BY if relation == "sup" else RelationshipKind.IN_CONTEXT_OF
            relationships.append(GsnRelationship(source=parent, target=element_id, kind=kind))
    return GoalStructure(name=name, elements=tuple(elements), relationships=tuple(relationships))


def _extend(structure: GoalStructure, name: str, rows: list[tuple],
            extra_edges: list[tuple[str, str]] = ()) -> GoalStructure:
    extended = build(name, rows)
    extra = tuple(
        GsnRelationship(source=s, target=t, kind=RelationshipKind.SUPPORTED_BY) for s, t in extra_edges
    )
    return replace(
        structure,
        name=name,
        elements=structure.elements + extended.elements,
        relationships=structure.relationships + extended.relationships + extra,
    )


# --- patterns ----------------------------------------------------------------

ACAS_PATTERN = build("acas-xu-threat-identification", [
    ("G1", "{System} is acceptably secure against identified threats", None, None),
    ("C1", "Operational context: {Operational Context}", "G1", "ctx"),
    ("C2", "Security requirements drawn from {Security Standard}", "G1", "ctx"),
    ("S1", "Argument over identification and mitigation of threats to critical assets", "G1", "sup"),
    ("J1", "Threat enumeration follows {Security Standard} guidance", "S1", "ctx"),
    ("G2", "All critical assets of {System} are identified", "S1", "sup"),
    ("C3", "Critical assets are confined to {Asset 1} and {Asset 2}", "G2", "ctx"),
    ("G3", "All threats to identified assets are enumerated", "S1", "sup"),
    ("G4", "Each enumerated threat is mitigated or accepted", "S1", "sup"),
    ("Sn1", "Asset register listing {Asset 1} and {Asset 2}", "G2", "sup"),
    ("G5", "Threats to {Asset 1} are enumerated", "G3", "sup"),
    ("G6", "Threats to {Asset 2} are enumerated", "G3", "sup"),
    ("Sn2", "Threat catalogue covering {Threat 1} and {Threat 2}", "G5", "sup"),
    ("Sn3", "Threat catalogue covering {Threat 3}", "G6", "sup"),
    ("S2", "Argument over each threat on the attack surface {Attack Surface}", "G4", "sup"),
    ("G7", "{Threat 1} is mitigated by {Mitigation}", "S2", "sup"),
    ("G8", "{Threat 2} is mitigated by {Mitigation}", "S2", "sup"),
    ("G9", "{Threat 3} is accepted with documented rationale", "S2", "sup"),
    ("Sn4", "Mitigation verification report for {Threat 1}", "G7", "sup"),
    ("Sn5", "Mitigation verification report for {Threat 2}", "G8", "sup"),
    ("A1", "Residual risk of {Threat 3} is tolerable in {Operational Context}", "G9", "ctx"),
    ("Sn6", "Risk acceptance record for {Threat 3}", "G9", "sup"),
])

ALARP_PATTERN = build("bluerov2-alarp", [
    ("G1", "Residual risk of operating {System} is as low as reasonably practicable", None, None),
    ("C1", "{System} operates in {Operating Environment}", "G1", "ctx"),
    ("C2", "Risk acceptance criteria set by {Safety Authority}", "G1", "ctx"),
    ("S1", "Argument over all identified hazards", "G1", "sup"),
    ("J1", "ALARP argument structure accepted by {Safety Authority}", "S1", "ctx"),
    ("G2", "All credible hazards are identified", "S1", "sup"),
    ("Sn1", "Hazard log covering {Hazard 1} and {Hazard 2}", "G2", "sup"),
    ("G3", "Risk from {Hazard 1} is reduced to {Risk Target}", "S1", "sup"),
    ("G4", "Risk from {Hazard 2} is reduced to {Risk Target}", "S1", "sup"),
    ("A1", "{Residual Risk} remains tolerable throughout the mission", "G4", "ctx"),
    ("S2", "Argument by application of {Mitigation Measure}", "G3", "sup"),
    ("G5", "{Mitigation Measure} is implemented correctly", "S2", "sup"),
    ("G6", "{Mitigation Measure} is effective against {Hazard 1}", "S2", "sup"),
    ("Sn2", "Implementation review record", "G5", "sup"),
    ("Sn3", "Effectiveness trial results", "G6", "sup"),
    ("G7", "Further risk reduction for {Hazard 2} is impracticable", "G4", "sup"),
    ("Sn4", "Cost benefit analysis of candidate measures", "G7", "sup"),
    ("Sn5", "Residual risk assessment summary", "G4", "sup"),
])

RESONATE_PATTERN = build("bluerov2-resonate", [
    ("G1", "Dynamic risk of {System} missions is continuously assessed and bounded", None, None),
    ("C1", "Mission profile: {Mission Profile}", "G1", "ctx"),
    ("S1", "Argument over runtime risk estimation and response", "G1", "sup"),
    ("J1", "Probabilistic bounding argument reviewed by domain experts", "S1", "ctx"),
    ("G2", "Runtime monitors estimate collision likelihood within {Estimation Error}", "S1", "sup"),
    ("A1", "Sensor degradation is detectable during the mission", "G2", "ctx"),
    ("G3", "Hazard rates are recomputed when {Environmental Condition} changes", "S1", "sup"),
    ("C2", "Risk model calibrated for {Operating Domain}", "G3", "ctx"),
    ("G4", "The vehicle enters {Safe State} when estimated risk exceeds {Risk Bound}", "S1", "sup"),
    ("G5", "Risk estimates are logged for post mission audit", "S1", "sup"),
    ("Sn1", "Simulation campaign statistics", "G2", "sup"),
    ("Sn2", "Bayesian network validation report", "G3", "sup"),
    ("Sn3", "Fault injection test log", "G4", "sup"),
    ("Sn4", "Mission log archive", "G5", "sup"),
])

GPCA_PATTERN = build("gpca-safety", [
    ("G1", "The {System} delivers {Therapy} without exposing {Patient Group} to unacceptable harm", None, None),
    ("C1", "Intended use: bedside infusion in acute care", "G1", "ctx"),
    ("C2", "Regulatory baseline: {Regulation}", "G1", "ctx"),
    ("C3", "Device variant: baseline configuration", "G1", "ctx"),
    ("Sn1", "Hazard analysis report {Hazard Report}", "G1", "sup"),
    ("S1", "Argument over identified operational hazards of {System}", "G1", "sup"),
    ("J1", "Hazard coverage argued per {Assurance Guideline}", "S1", "ctx"),
    ("G2", "Hazard {Hazard A} is controlled by {Control A}", "S1", "sup"),
    ("G3", "Hazard {Hazard B} is controlled by {Control B}", "S1", "sup"),
    ("G4", "Hazard {Hazard C} is controlled by {Control C}", "S1", "sup"),
    ("G5", "{Control A} achieves {Safety Integrity A}", "G2", "sup"),
    ("G6", "{Control B} achieves {Safety Integrity B}", "G3", "sup"),
    ("G7", "{Control C} achieves {Safety Integrity C}", "G4", "sup"),
    ("Sn2", "Verification evidence {Evidence A}", "G5", "sup"),
    ("Sn3", "Verification evidence {Evidence B}", "G6", "sup"),
    ("Sn4", "Verification evidence {Evidence C}", "G7", "sup"),
    ("S2", "Argument over software contributions to hazards", "G1", "sup"),
    ("G8", "Software component {Software Component} satisfies its safety requirements", "S2", "sup"),
    ("Sn5", "Static analysis results for the pump controller", "G8", "sup"),
    ("A1", "Clinical staff follow {Operating Procedure}", "G8", "ctx"),
    ("G9", "Alarm subsystem alerts the caregiver within {Alarm Latency}", "G1", "sup"),
    ("Sn6", "Alarm timing test record", "G9", "sup"),
    ("Sn7", "Alarm subsystem design review", "G9", "sup"),
])

IM_PATTERN = build("im-software-security", [
    ("G1", "{Software} adequately protects {Critical Asset 1} and {Critical Asset 2}", None, None),
    ("C1", "Deployment: {Deployment Environment}", "G1", "ctx"),
    ("A1", "Attackers lack physical access to servers", "G1", "ctx"),
    ("S1", "Argument over protection of each critical asset", "G1", "sup"),
    ("J1", "Asset list confirmed by the security team", "S1", "ctx"),
    ("C2", "Threat model reviewed quarterly", "S1", "ctx"),
    ("G2", "{Critical Asset 1} is protected against {Attack 1}", "S1", "sup"),
    ("G3", "{Critical Asset 2} is protected against {Attack 2}", "S1", "sup"),
    ("G6", "Security incidents are detected and handled", "S1", "sup"),
    ("Sn1", "Security test report {Test Report}", "G2", "sup"),
    ("G4", "{Protection Mechanism 1} is correctly deployed", "G2", "sup"),
    ("G5", "{Protection Mechanism 2} is correctly deployed", "G3", "sup"),
    ("Sn2", "Configuration audit record", "G4", "sup"),
    ("Sn3", "Code review minutes", "G5", "sup"),
    ("Sn4", "Incident response drill results", "G6", "sup"),
])

DEEPMIND_PATTERN = build("deepmind-interpretability", [
    ("G1", "The {ML Component} of {System} is acceptably interpretable for {Stakeholder 1} and {Stakeholder 2}", None, None),
    ("C1", "{System} performs {Task} in {Clinical Setting}", "G1", "ctx"),
    ("C2", "Interpretability demands derive from {Regulation} and {Ethics Guideline}", "G1", "ctx"),
    ("S1", "Argument over interpretability needs of each stakeholder group", "G1", "sup"),
    ("J1", "Interpretability targets agreed at {Review Board}", "S1", "ctx"),
    ("G2", "{Stakeholder 1} can understand {Explanation Artifact 1} for {Decision Type 1}", "S1", "sup"),
    ("A1", "{Stakeholder 1} has training in {Training Domain}", "G2", "ctx"),
    ("G3", "{Stakeholder 2} can understand {Explanation Artifact 2} for {Decision Type 2}", "S1", "sup"),
    ("G4", "{Explanation Method} faithfully reflects the {Model Type} behaviour", "S1", "sup"),
    ("C3", "Model version {Model Version}", "G4", "ctx"),
    ("G6", "Explanations are delivered alongside each prediction", "S1", "sup"),
    ("Sn1", "User study {Study Id} with {Participant Count} participants", "G2", "sup"),
    ("Sn5", "Stakeholder interview transcripts", "G2", "sup"),
    ("G5", "{Saliency Tool} highlights {Input Feature} relevant to {Output Class}", "G3", "sup"),
    ("Sn3", "Case review of {Case Count} scans by {Reviewer Group}", "G5", "sup"),
    ("Sn2", "Fidelity evaluation {Fidelity Report} using {Fidelity Metric}", "G4", "sup"),
    ("Sn4", "Deployment log audit", "G6", "sup"),
])

PATTERNS: dict[str, PatternDocument] = {
    p.name: PatternDocument.from_structure(p)
    for p in (ACAS_PATTERN, ALARP_PATTERN, RESONATE_PATTERN, GPCA_PATTERN, IM_PATTERN, DEEPMIND_PATTERN)
}


# --- bindings and cases ------------------------------------------------------

ACAS_KNOWLEDGE = DomainKnowledge(
    system_name="acas-xu",
    facts=(
        "ACAS Xu is an airborne collision avoidance system for unmanned aircraft.",
        "It exchanges surveillance data over a datalink and computes avoidance manoeuvres.",
    ),
    bindings={
        "System": "ACAS Xu",
        "Operational Context": "unmanned airspace operations",
        "Security Standard": "DO-326A",
        "Asset 1": "the surveillance data",
        "Asset 2": "the avoidance logic",
        "Threat 1": "spoofed sensor input",
        "Threat 2": "datalink flooding",
        "Threat 3": "physical tampering",
        "Attack Surface": "the datalink interface",
        "Mitigation": "input validation and redundancy",
    },
)

BLUEROV2_KNOWLEDGE = DomainKnowledge(
    system_name="bluerov2",
    facts=(
        "The BlueROV2 is a remotely operated underwater vehicle used for pipeline inspection.",
        "Missions take place in shallow coastal waters under operator supervision.",
    ),
    bindings={
        "System": "the BlueROV2 vehicle",
        "Operating Environment": "shallow coastal waters",
        "Safety Authority": "the marine operations board",
        "Hazard 1": "collision with the pipeline",
        "Hazard 2": "loss of buoyancy",
        "Risk Target": "a tolerable level",
        "Mitigation Measure": "the obstacle avoidance monitor",
        "Residual Risk": "the remaining collision risk",
    },
)

GPCA_KNOWLEDGE = DomainKnowledge(
    system_name="gpca",
    facts=(
        "The GPCA infusion pump delivers patient controlled analgesia on general care wards.",
        "Software hazards are controlled by interlocks, detectors, and a watchdog supervisor.",
    ),
    bindings={
        "System": "GPCA infusion pump",
        "Therapy": "patient controlled analgesia",
        "Patient Group": "monitored inpatients",
        "Regulation": "IEC 62304 and ISO 14971",
        "Hazard A": "overdose delivery",
        "Control A": "the dose limiting interlock",
        "Hazard B": "air in line",
        "Control B": "the bubble detector",
        "Hazard C": "pump runaway",
        "Control C": "the watchdog supervisor",
        "Hazard Report": "HA-2024-07",
        "Safety Integrity A": "its specified integrity level",
        "Safety Integrity B": "its specified integrity level",
        "Safety Integrity C": "its specified integrity level",
        "Evidence A": "test suite TS-12",
        "Evidence B": "test suite TS-13",
        "Evidence C": "test suite TS-14",
        "Software Component": "the infusion controller",
        "Operating Procedure": "the ward administration procedure",
        "Assurance Guideline": "the device assurance guideline",
        "Alarm Latency": "five seconds",
    },
)

IM_KNOWLEDGE = DomainKnowledge(
    system_name="im-software",
    facts=(
        "The instant messaging platform serves mobile and desktop clients from a cloud backend.",
        "Account credentials and session data are the assets most often targeted.",
    ),
    bindings={
        "Software": "the instant messaging platform",
        "Critical Asset 1": "user account credentials",
        "Critical Asset 2": "authentication session data",
        "Deployment Environment": "a cloud hosted service accessed by mobile and desktop clients",
        "Attack 1": "credential theft and brute force guessing",
        "Attack 2": "session hijacking and token replay",
        "Test Report": "the quarterly penetration test report",
        "Protection Mechanism 1": "the hardened credential store",
        "Protection Mechanism 2": "the token management service",
    },
)

DEEPMIND_KNOWLEDGE = DomainKnowledge(
    system_name="deepmind",
    facts=(
        "The triage system predicts retinal disease and referral urgency from eye scans.",
        "Two neural networks segment scans and classify referral urgency.",
    ),
    bindings={
        "ML Component": "the retinal diagnosis network",
        "System": "the DeepMind triage system",
        "Stakeholder 1": "treating ophthalmologists",
        "Stakeholder 2": "clinical auditors",
        "Task": "referral recommendation",
        "Clinical Setting": "a hospital eye clinic",
        "Regulation": "medical device software regulation",
        "Ethics Guideline": "the clinical AI ethics guideline",
        "Explanation Artifact 1": "per scan saliency summaries",
        "Decision Type 1": "urgent referral decisions",
        "Explanation Artifact 2": "cohort level performance reports",
        "Decision Type 2": "audit decisions",
        "Study Id": "US-09",
        "Participant Count": "24",
        "Explanation Method": "integrated gradients",
        "Model Type": "two stage segmentation and classification",
        "Fidelity Report": "FR-3",
        "Fidelity Metric": "deletion curve area",
        "Saliency Tool": "the saliency viewer",
        "Input Feature": "retinal layer anomalies",
        "Output Class": "each referral class",
        "Case Count": "120",
        "Reviewer Group": "senior graders",
        "Training Domain": "ophthalmic imaging",
        "Review Board": "the clinical safety board",
        "Model Version": "v2.1",
    },
)

KNOWLEDGE: dict[str, DomainKnowledge] = {
    k.system_name: k
    for k in (ACAS_KNOWLEDGE, BLUEROV2_KNOWLEDGE, GPCA_KNOWLEDGE, IM_KNOWLEDGE, DEEPMIND_KNOWLEDGE)
}


def _case(pattern: PatternDocument, knowledge: DomainKnowledge, name: str,
          extras: list[tuple], extra_edges: list[tuple[str, str]] = ()) -> GoalStructure:
    return _extend(substitute(pattern, knowledge.bindings), name, extras, extra_edges)


ACAS_CASE = _case(PATTERNS["acas-xu-threat-identification"], ACAS_KNOWLEDGE, "acas-xu", [
    ("Sn7", "Independent penetration test report", "G4", "sup"),
    ("C4", "Assumed attacker capability: remote network access only", "S2", "ctx"),
])

BLUEROV2_CASE = _case(PATTERNS["bluerov2-alarp"], BLUEROV2_KNOWLEDGE, "bluerov2", [
    ("S3", "Argument from runtime monitoring of mission risk", "G1", "sup"),
    ("C4", "Monitoring assumptions hold in coastal waters", "S3", "ctx"),
    ("G8", "Onboard monitors bound collision risk during pipeline tracking", "S3", "sup"),
    ("G9", "The vehicle surfaces when monitored risk crosses its bound", "S3", "sup"),
    ("Sn6", "Field trial telemetry", "G8", "sup"),
    ("Sn7", "Surfacing behaviour test log", "G9", "sup"),
])

GPCA_CASE = _case(PATTERNS["gpca-safety"], GPCA_KNOWLEDGE, "gpca", [
    ("G10", "Battery backup sustains infusion during power loss", "S2", "sup"),
    ("Sn8", "Battery endurance test", "G10", "sup"),
    ("C5", "Deployment site: general care ward", "G9", "ctx"),
    ("Sn9", "Usability evaluation report", "G8", "sup"),
])

IM_CASE = _case(PATTERNS["im-software-security"], IM_KNOWLEDGE, "im-software", [
    ("G7", "User passwords are stored with salted hashing", "S1", "sup"),
    ("Sn5", "Cryptographic library audit", "G7", "sup"),
    ("G8", "Session tokens expire after fifteen minutes of inactivity", "S1", "sup"),
    ("Sn6", "Token lifecycle test log", "G8", "sup"),
    ("G9", "Transport encryption protects messages in transit", "S1", "sup"),
    ("Sn7", "TLS configuration scan results", "G9", "sup"),
    ("C3", "Mobile and desktop clients share the authentication service", "G1", "ctx"),
    ("G10", "Rate limiting blocks credential stuffing attempts", "S1", "sup"),
    ("Sn8", "Load test with adversarial traffic", "G10", "sup"),
])

DEEPMIND_CASE = _case(PATTERNS["deepmind-interpretability"], DEEPMIND_KNOWLEDGE, "deepmind", [
    ("G7", "Clinicians can contest a referral recommendation", "S1", "sup"),
    ("Sn6", "Contest workflow walkthrough records", "G7", "sup"),
    ("C4", "Explanations rendered in the clinical viewer", "G6", "ctx"),
    ("G8", "Saliency maps are stable across repeated scans", "G5", "sup"),
    ("Sn7", "Stability benchmark results", "G8", "sup"),
    ("A2", "Scan quality meets the acquisition protocol", "G5", "ctx"),
], extra_edges=[("G3", "Sn1")])


GROUND_TRUTH: dict[str, frozenset[str]] = {
    "acas-xu": frozenset({"acas-xu-threat-identification"}),
    "bluerov2": frozenset({"bluerov2-alarp", "bluerov2-resonate"}),
    "gpca": frozenset({"gpca-safety"}),
    "im-software": frozenset({"im-software-security"}),
    "deepmind": frozenset({"deepmind-interpretability"}),
}

CASES: dict[str, GoalStructure] = {
    c.name: c for c in (ACAS_CASE, BLUEROV2_CASE, GPCA_CASE, IM_CASE, DEEPMIND_CASE)
}


@dataclass(frozen=True)
class Corpus:
    entries: tuple[CorpusEntry, ...]
    patterns: tuple[PatternDocument, ...]
    knowledge: dict[str, DomainKnowledge]

    def pattern(self, name: str) -> PatternDocument:
        for p in self.patterns:
            if p.structure.name == name:
                return p
        raise NotFound(f"pattern {name!r} not in corpus")

    def entry(self, system: str) -> CorpusEntry:
        for e in self.entries:
            if e.system == system:
                return e
        raise NotFound(f"case {system!r} not in corpus")


def reproduction_corpus() -> Corpus:
    entries = tuple(
        CorpusEntry(system=name, case=case, truth=GROUND_TRUTH[name])
        for name, case in CASES.items()
    )
    return Corpus(entries=entries, patterns=tuple(PATTERNS.values()), knowledge=dict(KNOWLEDGE))


def write_corpus(corpus: Corpus, root: str | Path) -> Path:
    root = Path(root)
    (root / "cases").mkdir(parents=True, exist_ok=True)
    (root / "patterns").mkdir(exist_ok=True)
    (root / "knowledge").mkdir(exist_ok=True)
    for entry in corpus.entries:
        (root / "cases" / f"{entry.system}.gsn.txt").write_text(serialize(entry.case).text, encoding="utf-8")
    for pattern in corpus.patterns:
        path = root / "patterns" / f"{pattern.structure.name}.gsn.txt"
        path.write_text(serialize(pattern).text, encoding="utf-8")
    truth = {entry.system: sorted(entry.truth) for entry in corpus.entries}
    (root / "truth.json").write_text(json.dumps(truth, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    for name, knowledge in corpus.knowledge.items():
        record = {
            "system": knowledge.system_name,
            "facts": list(knowledge.facts),
            "bindings": dict(knowledge.bindings),
        }
        (root / "knowledge" / f"{name}.json").write_text(
            json.dumps(record, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    return root


def load_corpus(root: str | Path) -> Corpus:
    root = Path(root)
    if not (root / "truth.json").is_file():
        raise NotFound(f"{root} is not a corpus directory (truth.json missing)")
    truth = json.loads((root / "truth.json").read_text(encoding="utf-8"))

    patterns = []
    for path in sorted((root / "patterns").glob("*.gsn.txt")):
        doc, diagnostics = parse(path.read_text(encoding="utf-8"))
        errors = [d for d in diagnostics if d.severity == "Error"]
        if errors:
            raise ValueError(f"{path}: {errors[0].message}")
        if not isinstance(doc, PatternDocument):
            doc = PatternDocument.from_structure(doc)
        patterns.append(doc)
    pattern_names = {p.structure.name for p in patterns}

    entries = []
    for path in sorted((root / "cases").glob("*.gsn.txt")):
        doc, diagnostics = parse(path.read_text(encoding="utf-8"))
        errors = [d for d in diagnostics if d.severity == "Error"]
        if errors:
            raise ValueError(f"{path}: {errors[0].message}")
        case = doc.structure if isinstance(doc, PatternDocument) else doc
        case_truth = frozenset(truth.get(case.name, ()))
        unknown = case_truth - pattern_names
        if unknown:
            raise ValueError(f"truth for {case.name!r} names unknown patterns: {sorted(unknown)}")
        entries.append(CorpusEntry(system=case.name, case=case, truth=case_truth))

    knowledge = {}
    knowledge_dir = root / "knowledge"
    if knowledge_dir.is_dir():
        for path in sorted(knowledge_dir.glob("*.json")):
            record = json.loads(path.read_text(encoding="utf-8"))
            knowledge[record["system"]] = DomainKnowledge(
                system_name=record["system"],
                facts=tuple(record.get("facts", ())),
                bindings=dict(record.get("bindings", {})),
            )
    return Corpus(entries=tuple(entries), patterns=tuple(patterns), knowledge=knowledge)
