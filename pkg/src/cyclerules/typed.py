"""Attach frequent entity-type constraints to mined cycles."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

from .index import GraphIndex
from .kb import THING
from .miner import PredicateCycle, Steps, iter_cycle_instances


@dataclass(frozen=True)
class TypeConfig:
    top_k: int = 1
    min_support: int = 1

    def __post_init__(self):
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")
        if self.min_support < 1:
            raise ValueError("min_support must be >= 1")


@dataclass(frozen=True)
class TypedFPC:
    base: PredicateCycle
    constraints: tuple[int, ...]  # one type id per cycle variable, THING = none
    typed_support: int

    @property
    def steps(self) -> Steps:
        return self.base.steps


def instance_cycles(index: GraphIndex, steps) -> list[tuple[int, ...]]:
    """Entity tuples (v1, ..., vk) of every instance cycle of ``steps``."""
    return list(iter_cycle_instances(index, steps))


def type_counts(index: GraphIndex, cycles: list[tuple[int, ...]], position: int) -> Counter:
    """Type -> number of distinct entities at ``position`` (0-based) having it."""
    kb = index.kb
    counts: Counter = Counter()
    for e in {c[position] for c in cycles}:
        counts.update(kb.types_of(e))
    return counts


def frequent_types(counts: Counter, cfg: TypeConfig) -> list[int]:
    """Top-k types reaching the support threshold; Thing never competes."""
    kept = [(n, t) for t, n in counts.items() if t != THING and n >= cfg.min_support]
    kept.sort(key=lambda nt: (-nt[0], nt[1]))
    return [t for _, t in kept[: cfg.top_k]]


def augment(index: GraphIndex, fpc: PredicateCycle, cfg: TypeConfig) -> list[TypedFPC]:
    cycles = instance_cycles(index, fpc.steps)
    if not cycles:
        return []
    k = len(fpc.steps)
    candidates = []
    for i in range(k):
        candidates.append([THING] + frequent_types(type_counts(index, cycles, i), cfg))

    kb = index.kb
    type_sets = {}
    for c in cycles:
        for e in c:
            if e not in type_sets:
                type_sets[e] = kb.types_of(e)

    out = []
    for combo in itertools.product(*candidates):
        if all(t == THING for t in combo):
            continue
        sup = sum(
            1 for c in cycles if all(t in type_sets[e] for e, t in zip(c, combo))
        )
        if sup >= cfg.min_support:
            out.append(TypedFPC(fpc, tuple(combo), sup))
    return out
