"""Safety requirements traceability: model, DSL, rule engine and impact analysis."""

from tracekit.dsl import load_file, load_text, print_canonical
from tracekit.errors import DslError, ModelError, TracekitError
from tracekit.graph import Direction, build_graph, find_cycles, reachable, trace_matrix
from tracekit.impact import ImpactResult, PropagationTable, default_propagation, impact, impact_report
from tracekit.model import (
    Criticality,
    ElementKind,
    EntityKind,
    Likelihood,
    Link,
    LinkKind,
    Model,
    ReqClass,
    Requirement,
    Risk,
    RiskSeverity,
    SolutionElement,
    TestCase,
    TestMethod,
    Tolerability,
    build_model,
    entity_kind,
    is_safety_requirement,
)
from tracekit.rules import CoverageStats, Finding, RuleConfig, coverage_stats, validate

__version__ = "0.1.0"
