"""Law catalogue, theorem checkers and their instance generators."""
from .catalogue import (
    ALGEBRA, LAWS, Law, LawInstance, check_law, exhaustive_instances, get_law, law_ids,
    random_instance, sweep_law,
)
from .generators import DEFAULT_SEED, random_command, random_relation, random_set, rng_for
from .instances import (
    conditional_instances, expression_instances, recursion_instances, while_instances,
)
from .sweeps import THEOREMS, TheoremSweep, sweep_theorem
from .negative import hoare_loop_space, negative_control_hoare_loop
from .theorems import (
    ConditionalRuleInstance, ExpressionRuleInstance, RecursionRuleInstance, WhileRuleInstance,
    check_conditional_theorem, check_expression_rule, check_recursion_theorem,
    check_while_theorem, while_obligations,
)

__all__ = [
    "ALGEBRA", "ConditionalRuleInstance", "DEFAULT_SEED", "ExpressionRuleInstance", "LAWS",
    "Law", "LawInstance", "RecursionRuleInstance", "WhileRuleInstance", "check_conditional_theorem",
    "check_expression_rule", "check_law", "check_recursion_theorem", "check_while_theorem",
    "conditional_instances", "exhaustive_instances", "expression_instances", "get_law",
    "hoare_loop_space", "law_ids", "negative_control_hoare_loop", "random_command",
    "random_instance", "random_relation", "random_set", "recursion_instances", "rng_for",
    "sweep_law", "sweep_theorem", "THEOREMS", "TheoremSweep", "while_instances",
    "while_obligations",
]
