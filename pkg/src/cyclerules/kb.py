"""Interned fact graph: entities, predicates, facts and the entity type map."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

FORWARD = 1
INVERSE = -1

THING = 0
THING_IRI = "Thing"


class Triple(NamedTuple):
    subject: int
    predicate: int
    object: int


class DirectedPredicate(NamedTuple):
    """A predicate traversed forward (subject to object) or inverse."""

    predicate: int
    direction: int = FORWARD

    def flipped(self) -> "DirectedPredicate":
        return DirectedPredicate(self.predicate, -self.direction)

    def sort_key(self) -> tuple[int, int]:
        # forward orders before inverse
        return (self.predicate, 0 if self.direction == FORWARD else 1)


class IdRangeError(ValueError):
    pass


class FrozenGraphError(RuntimeError):
    pass


class _Table:
    """Dense string <-> id table, ids allocated in first-seen order."""

    def __init__(self, reserved: Iterable[str] = ()):
        self.names: list[str] = []
        self.ids: dict[str, int] = {}
        for name in reserved:
            self.intern(name)

    def intern(self, name: str) -> int:
        if not name:
            raise ValueError("cannot intern an empty name")
        idx = self.ids.get(name)
        if idx is None:
            idx = len(self.names)
            self.names.append(name)
            self.ids[name] = idx
        return idx

    def __len__(self) -> int:
        return len(self.names)

    def __getitem__(self, idx: int) -> str:
        return self.names[idx]

    def get(self, name: str) -> int | None:
        return self.ids.get(name)


@dataclass
class KnowledgeGraph:
    """The graph G = (E, P, T) plus rdf:type information.

    Facts are stored as a duplicate-free set of interned triples.  rdf:type
    statements go to ``type_of`` and never become facts unless the loader is
    told otherwise.  Every entity is implicitly an instance of ``Thing``
    (type id 0).
    """

    entities: _Table = field(default_factory=_Table)
    predicates: _Table = field(default_factory=_Table)
    types: _Table = field(default_factory=lambda: _Table([THING_IRI]))
    facts: set[Triple] = field(default_factory=set)
    type_of: dict[int, set[int]] = field(default_factory=dict)
    frozen: bool = False

    def intern_entity(self, iri: str) -> int:
        self._check_mutable()
        return self.entities.intern(iri)

    def intern_predicate(self, iri: str) -> int:
        self._check_mutable()
        return self.predicates.intern(iri)

    def intern_type(self, iri: str) -> int:
        self._check_mutable()
        return self.types.intern(iri)

    def add_fact(self, t: Triple) -> bool:
        self._check_mutable()
        t = Triple(*t)
        n_ent = len(self.entities)
        if not (0 <= t.subject < n_ent and 0 <= t.object < n_ent):
            raise IdRangeError(f"entity id out of range in {t}")
        if not 0 <= t.predicate < len(self.predicates):
            raise IdRangeError(f"predicate id out of range in {t}")
        if t in self.facts:
            return False
        self.facts.add(t)
        return True

    def add(self, s: str, p: str, o: str) -> bool:
        """Intern the three names and insert the fact."""
        return self.add_fact(
            Triple(self.intern_entity(s), self.intern_predicate(p), self.intern_entity(o))
        )

    def add_type(self, e: int, t: int) -> None:
        self._check_mutable()
        if not 0 <= e < len(self.entities):
            raise IdRangeError(f"entity id {e} out of range")
        if not 0 <= t < len(self.types):
            raise IdRangeError(f"type id {t} out of range")
        if t != THING:
            self.type_of.setdefault(e, set()).add(t)

    def declare_type(self, entity: str, type_iri: str) -> None:
        self.add_type(self.intern_entity(entity), self.intern_type(type_iri))

    def types_of(self, e: int) -> frozenset[int]:
        return frozenset(self.type_of.get(e, ())) | {THING}

    def freeze(self) -> "KnowledgeGraph":
        self.frozen = True
        return self

    def _check_mutable(self) -> None:
        if self.frozen:
            raise FrozenGraphError("knowledge graph is frozen")

    @property
    def num_entities(self) -> int:
        return len(self.entities)

    @property
    def num_predicates(self) -> int:
        return len(self.predicates)

    def with_facts(self, facts: Iterable[Triple]) -> "KnowledgeGraph":
        """A copy sharing the intern tables and types but holding ``facts``."""
        kb = KnowledgeGraph(
            entities=self.entities,
            predicates=self.predicates,
            types=self.types,
            facts=set(facts),
            type_of=self.type_of,
        )
        return kb

    def fact_strings(self) -> set[tuple[str, str, str]]:
        E, P = self.entities, self.predicates
        return {(E[s], P[p], E[o]) for s, p, o in self.facts}

    @classmethod
    def from_strings(
        cls,
        facts: Iterable[tuple[str, str, str]],
        types: Iterable[tuple[str, str]] = (),
    ) -> "KnowledgeGraph":
        kb = cls()
        for s, p, o in facts:
            kb.add(s, p, o)
        for e, t in types:
            kb.declare_type(e, t)
        return kb
