"""Executable kernel for rely/guarantee refinement over bounded traces."""
from .state_model import StateSpace
from .semantics import Engine, Trace, TraceSet, denote, engines_agree, satisfies_guarantee
from .refinement import equals, establishes, hoare_triple, refines, strongest_post
from .verdict import Outcome, Verdict

__version__ = "0.1.0"

__all__ = [
    "Engine", "Outcome", "StateSpace", "Trace", "TraceSet", "Verdict", "denote",
    "engines_agree", "equals", "establishes", "hoare_triple", "refines",
    "satisfies_guarantee", "strongest_post",
]
