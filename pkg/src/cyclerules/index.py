"""In-memory indexes over a frozen knowledge graph.

Two indexes answer the queries mining needs: predicate -> entity pairs, and
entity -> directed predicate -> neighbours.  A third structure caches type
incidence counts used to estimate how likely an entity is to carry a
predicate.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Iterator, Sequence

from .kb import FORWARD, INVERSE, THING, KnowledgeGraph

_EMPTY: tuple[int, ...] = ()


class GraphIndex:
    """Predicate-Entity-Entity and Entity-Predicate-Entity indexes.

    Building the index freezes the knowledge graph; all queries afterwards
    are read-only.
    """

    def __init__(self, kb: KnowledgeGraph):
        self.kb = kb.freeze()
        pairs: dict[int, list[tuple[int, int]]] = defaultdict(list)
        adj: list[dict[tuple[int, int], list[int]]] = [dict() for _ in range(kb.num_entities)]
        for s, p, o in sorted(kb.facts):
            pairs[p].append((s, o))
            adj[s].setdefault((p, FORWARD), []).append(o)
            adj[o].setdefault((p, INVERSE), []).append(s)
        self._pairs = {p: tuple(v) for p, v in pairs.items()}
        self._adj = [{k: tuple(v) for k, v in sorted(d.items())} for d in adj]
        self._facts = kb.facts
        self._starts: dict[tuple[int, int], list[int]] = {}
        self._type_incidence = TypeIncidenceIndex(self)

    # query type 1
    def pairs_of(self, p: int) -> tuple[tuple[int, int], ...]:
        return self._pairs.get(p, ())

    # query type 2
    def neighbors(self, e: int, dp: tuple[int, int]) -> tuple[int, ...]:
        if not 0 <= e < len(self._adj):
            return _EMPTY
        return self._adj[e].get(tuple(dp), _EMPTY)

    def edges_of(self, e: int) -> dict[tuple[int, int], tuple[int, ...]]:
        """All (directed predicate -> neighbours) entries of ``e``."""
        return self._adj[e]

    def has_fact(self, s: int, p: int, o: int) -> bool:
        return (s, p, o) in self._facts

    def has_edge(self, a: int, dp: tuple[int, int], b: int) -> bool:
        p, d = dp
        return (a, p, b) in self._facts if d == FORWARD else (b, p, a) in self._facts

    def fact_count(self, p: int) -> int:
        return len(self._pairs.get(p, ()))

    def predicates(self) -> list[int]:
        """Predicate ids that have at least one fact, ascending."""
        return sorted(self._pairs)

    def start_entities(self, dp: tuple[int, int]) -> list[int]:
        """Entities that have at least one edge along ``dp``."""
        dp = tuple(dp)
        cached = self._starts.get(dp)
        if cached is None:
            col = 0 if dp[1] == FORWARD else 1
            cached = sorted({pair[col] for pair in self.pairs_of(dp[0])})
            self._starts[dp] = cached
        return cached

    # query type 3
    def instance_paths(
        self, steps: Sequence[tuple[int, int]], limit: int | None = None
    ) -> Iterator[tuple[int, ...]]:
        """Yield entity sequences (v1, ..., vk+1) instantiating ``steps``.

        Depth-first per start entity; entities may repeat within a path.
        """
        steps = [tuple(s) for s in steps]
        if not steps:
            raise ValueError("predicate path must be non-empty")
        produced = 0
        k = len(steps)
        adj = self._adj
        path: list[int] = []

        def walk(depth: int, e: int) -> Iterator[tuple[int, ...]]:
            if depth == k:
                yield tuple(path)
                return
            for nxt in adj[e].get(steps[depth], _EMPTY):
                path.append(nxt)
                yield from walk(depth + 1, nxt)
                path.pop()

        for v1 in self.start_entities(steps[0]):
            path.append(v1)
            for inst in walk(0, v1):
                yield inst
                produced += 1
                if limit is not None and produced >= limit:
                    return
            path.pop()

    def incidence_probability(self, e: int, dp: tuple[int, int]) -> float:
        return self._type_incidence.probability(e, dp)

    @property
    def type_incidence(self) -> "TypeIncidenceIndex":
        return self._type_incidence


class TypeIncidenceIndex:
    """|Inst(c)| per type and |Inst_p(c)| per (type, directed predicate).

    ``Inst_p(c)`` for a forward predicate is the set of instances of c that
    appear as subject of some p-fact; for an inverse predicate, as object.
    Per-predicate counts are computed on first use.
    """

    def __init__(self, index: GraphIndex):
        kb = index.kb
        self._index = index
        self._kb = kb
        counts = [0] * len(kb.types)
        counts[THING] = kb.num_entities
        for e, ts in kb.type_of.items():
            for t in ts:
                counts[t] += 1
        self._instances = counts
        self._members: dict[int, list[int]] | None = None
        self._by_dp: dict[tuple[int, int], dict[int, int]] = {}

    def instance_count(self, c: int) -> int:
        return self._instances[c] if 0 <= c < len(self._instances) else 0

    def instances(self, c: int) -> list[int]:
        """Entity ids declared (or implied, for Thing) to be of type ``c``."""
        if c == THING:
            return list(range(self._kb.num_entities))
        if self._members is None:
            members: dict[int, list[int]] = defaultdict(list)
            for e in sorted(self._kb.type_of):
                for t in self._kb.type_of[e]:
                    members[t].append(e)
            self._members = dict(members)
        return self._members.get(c, [])

    def incidence_counts(self, dp: tuple[int, int]) -> dict[int, int]:
        """Type id -> number of its instances having an edge along ``dp``."""
        dp = tuple(dp)
        cached = self._by_dp.get(dp)
        if cached is not None:
            return cached
        counts: dict[int, int] = defaultdict(int)
        for e in self._index.start_entities(dp):
            for t in self._kb.types_of(e):
                counts[t] += 1
        cached = dict(counts)
        self._by_dp[dp] = cached
        return cached

    def probability(self, e: int, dp: tuple[int, int]) -> float:
        """max over the types of ``e`` (Thing included) of |Inst_p(c)|/|Inst(c)|."""
        counts = self.incidence_counts(dp)
        best = 0.0
        for c in self._kb.types_of(e):
            n = self._instances[c]
            if n:
                best = max(best, counts.get(c, 0) / n)
        return best

