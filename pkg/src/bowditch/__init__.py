"""Group action, Bowditch classification and rasterisation for imaginary characters of the free group of rank two."""

from .character import (
    BoundaryKind,
    BoundaryShape,
    ExceptionalKind,
    Generator,
    ImaginaryCharacter,
    MoveWord,
    apply,
    apply_word,
    boundary_trace_c11,
    boundary_traces_c02,
    exceptional_kind,
    in_fricke_c02,
    in_generalized_fricke_c11,
    kappa,
    nielsen_twist,
)
from .classifier import Budget, Variant, bq_check, classify, descend_step, elliptic_walk, end_invariant_estimate
from .errors import DegenerateError, DomainError
from .surface import LevelTopology, SheetSelector, Window, z_sheet
from .tree import Vertex, base_vertex, step

__version__ = "0.1.0"

__all__ = [
    "BoundaryKind",
    "BoundaryShape",
    "Budget",
    "DegenerateError",
    "DomainError",
    "ExceptionalKind",
    "Generator",
    "ImaginaryCharacter",
    "LevelTopology",
    "MoveWord",
    "SheetSelector",
    "Variant",
    "Vertex",
    "Window",
    "apply",
    "apply_word",
    "base_vertex",
    "boundary_trace_c11",
    "boundary_traces_c02",
    "bq_check",
    "classify",
    "descend_step",
    "elliptic_walk",
    "end_invariant_estimate",
    "exceptional_kind",
    "in_fricke_c02",
    "in_generalized_fricke_c11",
    "kappa",
    "nielsen_twist",
    "step",
    "z_sheet",
]
