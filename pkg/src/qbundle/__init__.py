"""Symbolic and numerical toolkit for the SU_q(2)-prolongation of the Hopf fibration."""
from .kernel import BACKEND
from .laurent import QLaurent
from .ncpoly import (
    Element,
    Presentation,
    check_local_confluence,
    multiply,
    normal_form,
    parse_element,
    specialize_q,
    star,
)
from .presets import load_preset

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Element",
    "Presentation",
    "QLaurent",
    "check_local_confluence",
    "load_preset",
    "multiply",
    "normal_form",
    "parse_element",
    "specialize_q",
    "star",
]
