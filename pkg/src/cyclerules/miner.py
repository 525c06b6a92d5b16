"""Frequent predicate cycle mining.

Paths are grown one directed predicate at a time from every frequent
starting predicate.  A path's operational support is the number of distinct
(frontier entity, new edge) pairs that extend it; paths whose support falls
below the threshold are pruned.  Each surviving path is then checked for
instance paths that return to their start entity.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from .index import GraphIndex
from .kb import FORWARD, INVERSE, DirectedPredicate

log = logging.getLogger(__name__)

Steps = tuple[DirectedPredicate, ...]


@dataclass(frozen=True)
class MiningConfig:
    min_support: int = 1
    max_length: int = 3
    threads: int = 1
    allow_self_loops: bool = True

    def __post_init__(self):
        if self.min_support < 1:
            raise ValueError("min_support must be >= 1")
        if self.max_length < 1:
            raise ValueError("max_length must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


@dataclass
class PredicatePath:
    steps: Steps
    frontier: frozenset[int]
    support_count: int


@dataclass(frozen=True)
class PredicateCycle:
    steps: Steps
    cycle_support: int

    def __len__(self) -> int:
        return len(self.steps)


@dataclass
class MiningResult:
    cycles: list[PredicateCycle]
    paths: list[PredicatePath]


def as_steps(steps: Iterable[Sequence[int]]) -> Steps:
    return tuple(DirectedPredicate(int(p), int(d)) for p, d in steps)


def reverse_cycle(steps: Sequence[DirectedPredicate]) -> Steps:
    """The same cycle traversed the other way round."""
    return tuple(DirectedPredicate(p, -d) for p, d in reversed(as_steps(steps)))


def normalize(steps: Sequence[Sequence[int]]) -> Steps:
    """Canonical representation of a predicate cycle.

    The smallest rotation of either orientation under (predicate id,
    forward < inverse) ordering; it necessarily starts with the minimum
    predicate id traversed forward.
    """
    steps = as_steps(steps)
    if not steps:
        raise ValueError("cannot normalize an empty cycle")
    k = len(steps)
    best: Steps | None = None
    best_key = None
    for seq in (steps, reverse_cycle(steps)):
        for r in range(k):
            cand = seq[r:] + seq[:r]
            key = [s.sort_key() for s in cand]
            if best_key is None or key < best_key:
                best, best_key = cand, key
    return best


def has_back_step(steps: Sequence[Sequence[int]]) -> bool:
    """True if some step is immediately undone by the next one."""
    return any(
        a[0] == b[0] and a[1] == -b[1] for a, b in zip(steps, steps[1:])
    )


class FPCMiner:
    """Runs the mining search against a frozen index."""

    def __init__(self, index: GraphIndex, config: MiningConfig):
        self.index = index
        self.config = config
        tau = config.min_support
        self.frequent_predicates = frozenset(
            p for p in index.predicates() if index.fact_count(p) >= tau
        )

    def one_paths(self, p: int) -> list[PredicatePath]:
        """The frequent 1-predicate paths (p forward) and (p inverse)."""
        out = []
        if p not in self.frequent_predicates:
            return out
        pairs = self.index.pairs_of(p)
        for d, col in ((FORWARD, 1), (INVERSE, 0)):
            frontier = frozenset(pair[col] for pair in pairs)
            out.append(PredicatePath((DirectedPredicate(p, d),), frontier, len(pairs)))
        return out

    def path_growth(self, theta: PredicatePath) -> list[PredicatePath]:
        """Frequent one-step extensions of ``theta``."""
        tau = self.config.min_support
        last = theta.steps[-1]
        banned = (last.predicate, -last.direction)
        freq = self.frequent_predicates
        counts: dict[tuple[int, int], int] = {}
        frontiers: dict[tuple[int, int], set[int]] = {}
        for e in sorted(theta.frontier):
            for dp, nbrs in self.index.edges_of(e).items():
                if dp == banned or dp[0] not in freq:
                    continue
                counts[dp] = counts.get(dp, 0) + len(nbrs)
                frontiers.setdefault(dp, set()).update(nbrs)
        grown = []
        for dp in sorted(counts):
            if counts[dp] >= tau:
                grown.append(
                    PredicatePath(
                        theta.steps + (DirectedPredicate(*dp),),
                        frozenset(frontiers[dp]),
                        counts[dp],
                    )
                )
        return grown

    def count_cycles(self, steps: Sequence[tuple[int, int]]) -> int:
        """Number of instance paths of ``steps`` whose last entity is the first."""
        steps = [tuple(s) for s in steps]
        k = len(steps)
        idx = self.index
        last = steps[-1]
        total = 0

        def walk(depth: int, e: int, start: int) -> int:
            # depth == k - 1: only the closing edge remains
            if depth == k - 1:
                return 1 if idx.has_edge(e, last, start) else 0
            n = 0
            for nxt in idx.neighbors(e, steps[depth]):
                n += walk(depth + 1, nxt, start)
            return n

        for v1 in idx.start_entities(steps[0]):
            total += walk(0, v1, v1)
        return total

    def find_cycles(
        self, paths: Iterable[PredicatePath], seen: dict[Steps, int] | None = None
    ) -> dict[Steps, int]:
        """Canonical cycle -> support for every path closing at least tau times."""
        tau = self.config.min_support
        seen = {} if seen is None else seen
        found: dict[Steps, int] = {}
        for theta in paths:
            canon = normalize(theta.steps)
            if canon in seen:
                sup = seen[canon]
            else:
                # support is invariant under rotation and reversal
                sup = self.count_cycles(theta.steps)
                seen[canon] = sup
            if sup >= tau:
                found[canon] = sup
        return found

    def mine_from(self, p: int) -> tuple[dict[Steps, int], list[PredicatePath]]:
        """All work for one starting predicate."""
        cfg = self.config
        cycles: dict[Steps, int] = {}
        seen: dict[Steps, int] = {}
        level = self.one_paths(p)
        paths = list(level)
        if cfg.allow_self_loops:
            cycles.update(self.find_cycles(level, seen))
        for _ in range(2, cfg.max_length + 1):
            nxt: list[PredicatePath] = []
            for theta in level:
                nxt.extend(self.path_growth(theta))
            if not nxt:
                break
            paths.extend(nxt)
            cycles.update(self.find_cycles(nxt, seen))
            level = nxt
        return cycles, paths

    def run(self) -> MiningResult:
        starts = sorted(self.frequent_predicates)
        threads = self.config.threads
        if threads > 1 and len(starts) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                parts = list(pool.map(self.mine_from, starts))
        else:
            parts = [self.mine_from(p) for p in starts]
        merged: dict[Steps, int] = {}
        all_paths: list[PredicatePath] = []
        for cycles, paths in parts:
            for canon, sup in cycles.items():
                prev = merged.setdefault(canon, sup)
                assert prev == sup, f"inconsistent support for {canon}"
            all_paths.extend(paths)
        result = [PredicateCycle(c, merged[c]) for c in sorted(merged, key=_steps_key)]
        log.debug("mined %d cycles from %d paths", len(result), len(all_paths))
        return MiningResult(result, all_paths)


def _steps_key(steps: Steps) -> list[tuple[int, int]]:
    return [s.sort_key() for s in steps]


def mine(index: GraphIndex, config: MiningConfig) -> list[PredicateCycle]:
    """Canonical frequent predicate cycles, sorted by canonical steps."""
    return FPCMiner(index, config).run().cycles


def sup_var(index: GraphIndex, steps: Sequence[tuple[int, int]]) -> int:
    """min over variable positions of the number of distinct entities there.

    Enumerates every instance path, so it is only meant for checking.
    """
    steps = list(steps)
    columns: list[set[int]] = [set() for _ in range(len(steps) + 1)]
    any_instance = False
    for inst in index.instance_paths(steps):
        any_instance = True
        for col, e in zip(columns, inst):
            col.add(e)
    if not any_instance:
        return 0
    return min(len(c) for c in columns)


def iter_cycle_instances(index: GraphIndex, steps: Sequence[tuple[int, int]]):
    """Yield (v1, ..., vk) for every instance path of ``steps`` with v_{k+1} = v1."""
    steps = [tuple(s) for s in steps]
    k = len(steps)
    last = steps[-1]
    path: list[int] = []

    def walk(depth: int, e: int):
        if depth == k - 1:
            if index.has_edge(e, last, path[0]):
                yield tuple(path)
            return
        for nxt in index.neighbors(e, steps[depth]):
            path.append(nxt)
            yield from walk(depth + 1, nxt)
            path.pop()

    for v1 in index.start_entities(steps[0]):
        path.append(v1)
        yield from walk(0, v1)
        path.pop()


def default_threads() -> int:
    return os.cpu_count() or 1
