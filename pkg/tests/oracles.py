"""Independent reference computations used only by the tests.

Nothing here goes through GraphIndex or the join executor: cycle counts come
from traces of adjacency-matrix products, rule scores from enumerating every
assignment of entities to variables.
"""

from __future__ import annotations

import itertools

import numpy as np

from cyclerules.kb import THING, KnowledgeGraph
from cyclerules.miner import has_back_step, normalize
from cyclerules.rules import RelAtom, Rule


def adjacency(kb: KnowledgeGraph) -> dict[tuple[int, int], np.ndarray]:
    n = kb.num_entities
    mats = {}
    for p in range(kb.num_predicates):
        a = np.zeros((n, n), dtype=np.int64)
        for s, q, o in kb.facts:
            if q == p:
                a[s, o] = 1
        mats[(p, 1)] = a
        mats[(p, -1)] = a.T
    return mats


def all_cycle_counts(kb: KnowledgeGraph, max_length: int, allow_self_loops: bool = True):
    """Canonical cycle -> number of closed instance walks, for every pattern.

    Enumerates every directed-predicate sequence of length <= max_length that
    has no immediate back-step; trace(M1 ... Mk) counts the entity sequences
    (v1..vk) closing at v1.
    """
    mats = adjacency(kb)
    dps = sorted(mats)
    n = kb.num_entities
    out: dict = {}
    start = 1 if allow_self_loops else 2
    for k in range(start, max_length + 1):
        for seq in itertools.product(dps, repeat=k):
            if has_back_step(seq):
                continue
            m = np.eye(n, dtype=np.int64)
            for dp in seq:
                m = m @ mats[dp]
            t = int(np.trace(m))
            if t == 0:
                continue
            canon = normalize(seq)
            prev = out.setdefault(canon, t)
            assert prev == t, "rotations/orientations disagree on support"
    return out


def brute_force_fpcs(kb, max_length, min_support, allow_self_loops=True):
    counts = all_cycle_counts(kb, max_length, allow_self_loops)
    return {c: s for c, s in counts.items() if s >= min_support}


def incidence_probability(kb: KnowledgeGraph, e: int, p: int) -> float:
    """P(e,p) by direct set counting over the fact set."""
    subjects = {s for s, q, _ in kb.facts if q == p}
    best = 0.0
    for c in kb.types_of(e):
        inst = {x for x in range(kb.num_entities) if c in kb.types_of(x)}
        if inst:
            best = max(best, len(inst & subjects) / len(inst))
    return best


def brute_force_scores(rule: Rule, kb: KnowledgeGraph, counting="instantiation", soft_mode="entity"):
    """(support, body_support, conf_std, conf_pca, conf_soft) by enumeration."""
    vars_ = sorted(rule.variables())
    facts = kb.facts
    h = rule.head

    def holds(atom, b):
        if isinstance(atom, RelAtom):
            return (b[atom.subject], atom.predicate, b[atom.object]) in facts
        return atom.type in kb.types_of(b[atom.var])

    body_rows = []
    for values in itertools.product(range(kb.num_entities), repeat=len(vars_)):
        b = dict(zip(vars_, values))
        if all(holds(a, b) for a in rule.body):
            body_rows.append((b[h.subject], b[h.object]))
    if counting == "pair":
        body_rows = sorted(set(body_rows))
    subj_with_p = {s for s, q, _ in facts if q == h.predicate}
    n_body = len(body_rows)
    n_hit = sum(1 for x, y in body_rows if (x, h.predicate, y) in facts)
    n_pca = sum(1 for x, _ in body_rows if x in subj_with_p)
    u_rows = [x for x, _ in body_rows if x not in subj_with_p]
    if soft_mode == "entity":
        sub = sum(incidence_probability(kb, e, h.predicate) for e in set(u_rows))
    else:
        sub = sum(incidence_probability(kb, e, h.predicate) for e in u_rows)
    if n_body == 0:
        return n_hit, 0, None, None, None
    std = n_hit / n_body
    pca = n_hit / n_pca if n_pca else 1.0
    denom = max(n_body - sub, n_hit)
    soft = n_hit / denom if denom > 0 else 0.0
    return n_hit, n_body, std, pca, soft


def brute_sup_var(kb: KnowledgeGraph, steps) -> int:
    """min_i |distinct entities at position i| over all instance paths."""
    facts = kb.facts
    k = len(steps)
    cols = [set() for _ in range(k + 1)]
    for vs in itertools.product(range(kb.num_entities), repeat=k + 1):
        ok = True
        for i, (p, d) in enumerate(steps):
            edge = (vs[i], p, vs[i + 1]) if d == 1 else (vs[i + 1], p, vs[i])
            if edge not in facts:
                ok = False
                break
        if ok:
            for c, v in zip(cols, vs):
                c.add(v)
    if not cols[0]:
        return 0
    return min(len(c) for c in cols)


def brute_instance_count(kb: KnowledgeGraph, steps) -> int:
    """Standard support: number of instance paths, via matrix products."""
    mats = adjacency(kb)
    m = np.eye(kb.num_entities, dtype=np.int64)
    for dp in steps:
        m = m @ mats[tuple(dp)]
    return int(m.sum())


__all__ = [
    "THING",
    "all_cycle_counts",
    "brute_force_fpcs",
    "brute_force_scores",
    "brute_instance_count",
    "brute_sup_var",
    "incidence_probability",
]
