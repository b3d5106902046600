"""Nonabelian differential cocycle toolkit (python facade)."""

from ._hgt import (
    HgtError,
    chern,
    classify_cocycle,
    crossed_modules,
    dgla_suite,
    normalize_cocycle,
    roundtrip,
    validate_cocycle,
    verify_axioms,
)

__all__ = [
    "HgtError",
    "chern",
    "classify_cocycle",
    "crossed_modules",
    "dgla_suite",
    "normalize_cocycle",
    "roundtrip",
    "validate_cocycle",
    "verify_axioms",
]
