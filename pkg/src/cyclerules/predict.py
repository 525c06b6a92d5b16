"""Apply ranked rules to a knowledge graph and evaluate against a holdout."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .index import GraphIndex
from .kb import KnowledgeGraph, Triple
from .rules import Rule
from .scoring import iter_bindings


@dataclass(frozen=True)
class Prediction:
    fact: Triple
    rule_id: int
    confidence: float


@dataclass
class HoldoutEvaluation:
    holdout_fraction: float
    predictions: int
    hits: int
    rules_used: int


def apply_rules(
    rules: Sequence[tuple[Rule, float]],
    index: GraphIndex,
    top_n: int | None = None,
    per_rule_limit: int | None = None,
) -> list[Prediction]:
    """Predict head facts absent from the graph.

    ``rules`` is (rule, confidence) in rank order; the rule id of a
    prediction is its position in that sequence.  A fact predicted by several
    rules is reported once, credited to the best-ranked one.
    """
    chosen = rules if top_n is None else rules[:top_n]
    out: dict[Triple, Prediction] = {}
    for rid, (rule, conf) in enumerate(chosen):
        h = rule.head
        made = 0
        for b in iter_bindings(index, rule.body):
            fact = Triple(b[h.subject], h.predicate, b[h.object])
            if fact in out or index.has_fact(*fact):
                continue
            out[fact] = Prediction(fact, rid, conf)
            made += 1
            if per_rule_limit is not None and made >= per_rule_limit:
                break
    return list(out.values())


def holdout_split(
    kb: KnowledgeGraph, fraction: float, seed: int
) -> tuple[KnowledgeGraph, set[Triple]]:
    """Uniform random split of relation facts; type assertions stay in training."""
    if not 0.0 < fraction < 1.0:
        raise ValueError("holdout fraction must be strictly between 0 and 1")
    facts = sorted(kb.facts)
    n_test = int(round(fraction * len(facts)))
    test = set(random.Random(seed).sample(facts, n_test))
    train = kb.with_facts(f for f in facts if f not in test)
    return train, test


def evaluate(
    predictions: Iterable[Prediction],
    test: set[Triple],
    holdout_fraction: float = 0.0,
    rules_used: int = 0,
) -> HoldoutEvaluation:
    preds = list(predictions)
    hits = sum(1 for p in preds if p.fact in test)
    return HoldoutEvaluation(holdout_fraction, len(preds), hits, rules_used)
