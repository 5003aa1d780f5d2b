"""Exact random assignment rules (PR, PS, RIA, RSD, uniform) with axiom and efficiency checkers."""
from .core import Preference, Problem, as_matrix, validate, validate_assignment
from .rules import pr, ps, ria, rsd, serial_dictatorship, simple_ia, uniform

__version__ = "0.1.0"
