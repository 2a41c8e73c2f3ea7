"""Fixpoint inference, constraint checking and diagnosis."""

from .analysis import (
    AnalysisResult,
    Analyzer,
    Derivation,
    Diagnosis,
    Inference,
    ModelTypeError,
    Slice,
    StaleViolationError,
    Violation,
    analyze,
    check_consistency,
    diagnose,
    infer,
    slice_location,
)
from .kernels import get_backend

__all__ = [
    "AnalysisResult",
    "Analyzer",
    "Derivation",
    "Diagnosis",
    "Inference",
    "ModelTypeError",
    "Slice",
    "StaleViolationError",
    "Violation",
    "analyze",
    "check_consistency",
    "diagnose",
    "get_backend",
    "infer",
    "slice_location",
]
