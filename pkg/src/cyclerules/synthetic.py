"""Small generated knowledge graphs for tests and experiment scripts."""

from __future__ import annotations

import random

from .kb import KnowledgeGraph, Triple

MARRIED = "marriedTo"
HAS_CHILD = "hasChild"
HAS_PARENT = "hasParent"


def random_kb(
    rng: random.Random,
    max_entities: int = 30,
    max_predicates: int = 5,
    max_facts: int = 120,
    max_types: int = 3,
) -> KnowledgeGraph:
    """Uniformly random graph within the given size bounds, with random types."""
    n_ent = rng.randint(2, max_entities)
    n_pred = rng.randint(1, max_predicates)
    n_facts = rng.randint(1, max_facts)
    kb = KnowledgeGraph()
    for i in range(n_ent):
        kb.intern_entity(f"e{i}")
    for i in range(n_pred):
        kb.intern_predicate(f"p{i}")
    for _ in range(n_facts):
        kb.add_fact(Triple(rng.randrange(n_ent), rng.randrange(n_pred), rng.randrange(n_ent)))
    n_types = rng.randint(0, max_types)
    for t in range(n_types):
        tid = kb.intern_type(f"T{t}")
        for e in range(n_ent):
            if rng.random() < 0.5:
                kb.add_type(e, tid)
    return kb


def family_kb(n_families: int = 10, children: int = 3) -> KnowledgeGraph:
    """Families of two married parents and their children.

    Marriage is stored in both directions; every parent/child link is stored
    both as hasChild and hasParent.  Parents are typed Person and Parent,
    children Person and Child.
    """
    kb = KnowledgeGraph()
    for f in range(n_families):
        a, b = f"f{f}_parent0", f"f{f}_parent1"
        kb.add(a, MARRIED, b)
        kb.add(b, MARRIED, a)
        for who in (a, b):
            kb.declare_type(who, "Person")
            kb.declare_type(who, "Parent")
        for c in range(children):
            kid = f"f{f}_child{c}"
            kb.declare_type(kid, "Person")
            kb.declare_type(kid, "Child")
            for par in (a, b):
                kb.add(par, HAS_CHILD, kid)
                kb.add(kid, HAS_PARENT, par)
    return kb
