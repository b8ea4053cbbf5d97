"""Text frontend: parse check scripts, run their goals and report verdicts."""
from .ast import Goal, Script
from .elaborate import Elaborator, elaborate
from .lexer import ScriptError, tokenize
from .parser import parse, parse_command, parse_expr
from .printer import show_command, show_expr, show_script
from .report import render, render_human, render_json
from .runner import GoalResult, RunOptions, resolve_seed, run

__all__ = [
    "Elaborator", "Goal", "GoalResult", "RunOptions", "Script", "ScriptError", "elaborate",
    "parse", "parse_command", "parse_expr", "render", "render_human", "render_json",
    "resolve_seed", "run", "show_command", "show_expr", "show_script", "tokenize",
]
