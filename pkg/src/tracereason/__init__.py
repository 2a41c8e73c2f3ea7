"""Infer, check and explain trace links between development artifacts."""

from importlib import resources

from .dsl import CoreSpec, desugar, format_spec, load_spec, parse_spec
from .engine import (
    AnalysisResult,
    Analyzer,
    Violation,
    analyze,
    check_consistency,
    diagnose,
    infer,
    slice_location,
)
from .report import RenderOptions, render_report
from .tracemodel import TraceModel, TraceTuple, load_model, parse_model, serialize_model
from .typecheck import TypeHierarchy, build_hierarchy, check_model, suggest_targets, suggest_trace_types

__version__ = "0.1.0"


def fixture_path(name):
    """Filesystem path of a bundled fixture such as ``ecas.tarski``."""
    return resources.files(__name__).joinpath("fixtures", name)


def load_fixture(name):
    return fixture_path(name).read_text(encoding="utf-8")


__all__ = [
    "AnalysisResult",
    "Analyzer",
    "CoreSpec",
    "RenderOptions",
    "TraceModel",
    "TraceTuple",
    "TypeHierarchy",
    "Violation",
    "analyze",
    "build_hierarchy",
    "check_consistency",
    "check_model",
    "desugar",
    "diagnose",
    "fixture_path",
    "format_spec",
    "infer",
    "load_fixture",
    "load_model",
    "load_spec",
    "parse_model",
    "parse_spec",
    "render_report",
    "serialize_model",
    "slice_location",
    "suggest_targets",
    "suggest_trace_types",
]
