"""Rule learning for RDF knowledge graphs via frequent predicate cycles."""

from .index import GraphIndex
from .kb import FORWARD, INVERSE, THING, DirectedPredicate, KnowledgeGraph, Triple
from .miner import MiningConfig, PredicateCycle, mine, normalize, sup_var
from .predict import apply_rules, evaluate, holdout_split
from .rules import Rule, generate_rules, canonical_rule_form
from .scoring import score_rule, score_rules
from .typed import TypeConfig, TypedFPC, augment

__all__ = [
    "FORWARD",
    "INVERSE",
    "THING",
    "DirectedPredicate",
    "GraphIndex",
    "KnowledgeGraph",
    "MiningConfig",
    "PredicateCycle",
    "Rule",
    "Triple",
    "TypeConfig",
    "TypedFPC",
    "apply_rules",
    "augment",
    "canonical_rule_form",
    "evaluate",
    "generate_rules",
    "holdout_split",
    "mine",
    "normalize",
    "score_rule",
    "score_rules",
    "sup_var",
]
