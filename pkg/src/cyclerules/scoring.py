"""Rule evaluation: body joins and the standard, PCA and soft confidences.

Counting granularity is one switch for every measure.  ``"instantiation"``
counts full variable assignments; ``"pair"`` counts distinct (head subject,
head object) pairs.  In either mode the PCA and soft denominators only
shrink the standard one, so conf_std <= conf_pca and conf_std <= conf_soft.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .index import GraphIndex
from .kb import FORWARD, INVERSE
from .rules import Atom, RelAtom, Rule, TypeAtom, canonicalize, rule_text

log = logging.getLogger(__name__)

COUNTING_MODES = ("instantiation", "pair")
SOFT_MODES = ("entity", "instantiation")
METRICS = ("std", "pca", "soft")


@dataclass
class ScoredRule:
    rule: Rule
    text: str
    support: int
    body_support: int
    conf_std: float | None
    conf_pca: float | None
    conf_soft: float | None
    pca_body: int = 0
    unknown_subjects: int = 0
    flags: list[str] = field(default_factory=list)

    def confidence(self, metric: str) -> float | None:
        return getattr(self, f"conf_{metric}")

    @property
    def defined(self) -> bool:
        return self.conf_std is not None


def _plan(atoms: Sequence[Atom], index: GraphIndex) -> list[tuple]:
    """Order atoms so each step extends or checks already bound variables."""
    remaining = list(atoms)
    bound: set[int] = set()
    ops: list[tuple] = []
    tix = index.type_incidence

    def cost(a: Atom) -> int:
        if isinstance(a, RelAtom):
            return index.fact_count(a.predicate)
        return tix.instance_count(a.type)

    while remaining:
        pick = None
        # checks first, then extensions from a bound variable, then scans
        for a in remaining:
            vs = (a.subject, a.object) if isinstance(a, RelAtom) else (a.var,)
            if all(v in bound for v in vs):
                pick = a
                break
        if pick is None:
            for a in remaining:
                if isinstance(a, RelAtom) and (a.subject in bound or a.object in bound):
                    pick = a
                    break
        if pick is None:
            pick = min(remaining, key=cost)
        remaining.remove(pick)

        if isinstance(pick, TypeAtom):
            ops.append(("type_check" if pick.var in bound else "type_scan", pick.var, pick.type))
            bound.add(pick.var)
            continue
        p, s, o = pick
        if s in bound and o in bound:
            ops.append(("check", p, s, o))
        elif s in bound:
            ops.append(("extend", (p, FORWARD), s, o))
        elif o in bound:
            ops.append(("extend", (p, INVERSE), o, s))
        else:
            ops.append(("scan", p, s, o))
        bound.update((s, o))
    return ops


def iter_bindings(index: GraphIndex, atoms: Sequence[Atom]) -> Iterator[dict[int, int]]:
    """Every assignment of the atoms' variables satisfying all of them.

    Each distinct assignment is produced once.  The yielded dict is reused;
    copy it to keep it.
    """
    ops = _plan(atoms, index)
    kb = index.kb
    tix = index.type_incidence
    b: dict[int, int] = {}
    n = len(ops)

    def run(i: int) -> Iterator[dict[int, int]]:
        if i == n:
            yield b
            return
        op = ops[i]
        kind = op[0]
        if kind == "check":
            _, p, s, o = op
            if index.has_fact(b[s], p, b[o]):
                yield from run(i + 1)
        elif kind == "extend":
            _, dp, frm, to = op
            for e in index.neighbors(b[frm], dp):
                b[to] = e
                yield from run(i + 1)
            b.pop(to, None)
        elif kind == "scan":
            _, p, s, o = op
            for x, y in index.pairs_of(p):
                if s == o:
                    if x != y:
                        continue
                    b[s] = x
                else:
                    b[s], b[o] = x, y
                yield from run(i + 1)
            b.pop(s, None)
            b.pop(o, None)
        elif kind == "type_check":
            _, v, t = op
            if t in kb.types_of(b[v]):
                yield from run(i + 1)
        else:
            _, v, t = op
            for e in tix.instances(t):
                b[v] = e
                yield from run(i + 1)
            b.pop(v, None)

    yield from run(0)


def score_rule(
    rule: Rule,
    index: GraphIndex,
    counting: str = "instantiation",
    soft_mode: str = "entity",
) -> ScoredRule:
    if counting not in COUNTING_MODES:
        raise ValueError(f"unknown counting mode {counting!r}")
    if soft_mode not in SOFT_MODES:
        raise ValueError(f"unknown soft mode {soft_mode!r}")
    head = rule.head
    hs, ho, hp = head.subject, head.object, head.predicate
    missing = {hs, ho} - _body_vars(rule.body)
    if missing:
        raise ValueError(f"head variables {missing} are not bound by the body")
    fwd = (hp, FORWARD)
    has_p: dict[int, bool] = {}
    prob: dict[int, float] = {}
    unknown: set[int] = set()

    n_body = n_hit = n_pca = 0
    u_weight = 0.0  # per-instantiation sum of P(e,p) over unknown subjects
    seen_pairs: set[tuple[int, int]] = set()
    pair_mode = counting == "pair"
    for b in iter_bindings(index, rule.body):
        x, y = b[hs], b[ho]
        if pair_mode:
            if (x, y) in seen_pairs:
                continue
            seen_pairs.add((x, y))
        known = has_p.get(x)
        if known is None:
            known = has_p[x] = bool(index.neighbors(x, fwd))
        n_body += 1
        if known:
            n_pca += 1
            if index.has_fact(x, hp, y):
                n_hit += 1
        else:
            if x not in prob:
                prob[x] = index.incidence_probability(x, fwd)
                unknown.add(x)
            u_weight += prob[x]

    text = rule_text(rule, index.kb)
    scored = ScoredRule(
        rule=canonicalize(rule),
        text=text,
        support=n_hit,
        body_support=n_body,
        conf_std=None,
        conf_pca=None,
        conf_soft=None,
        pca_body=n_pca,
        unknown_subjects=len(unknown),
    )
    if n_body == 0:
        scored.flags.append("empty_body")
        return scored
    scored.conf_std = n_hit / n_body
    if n_pca == 0:
        # no body subject has any head fact; nothing to judge under PCA
        scored.conf_pca = 1.0
        scored.flags.append("pca_undefined")
    else:
        scored.conf_pca = n_hit / n_pca
    if soft_mode == "entity":
        denom = n_body - sum(prob[e] for e in unknown)
    else:
        denom = n_body - u_weight
    if denom < n_hit or denom <= 0:
        scored.flags.append("soft_clamped")
        denom = max(denom, n_hit)
    scored.conf_soft = n_hit / denom if denom > 0 else 0.0
    return scored


def _body_vars(body: Sequence[Atom]) -> set[int]:
    out: set[int] = set()
    for a in body:
        if isinstance(a, RelAtom):
            out.update((a.subject, a.object))
        else:
            out.add(a.var)
    return out


def score_rules(
    rules: Sequence[Rule],
    index: GraphIndex,
    counting: str = "instantiation",
    soft_mode: str = "entity",
    threads: int = 1,
) -> tuple[list[ScoredRule], list[ScoredRule]]:
    """Score every rule; returns (defined, diagnostics) in input order."""

    def one(r: Rule) -> ScoredRule:
        return score_rule(r, index, counting, soft_mode)

    if threads > 1 and len(rules) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            scored = list(pool.map(one, rules))
    else:
        scored = [one(r) for r in rules]
    ok = [s for s in scored if s.defined and "pca_undefined" not in s.flags]
    diag = [s for s in scored if s.flags]
    for s in diag:
        log.debug("rule %s flagged %s", s.text, s.flags)
    return ok, diag


def rank(scored: Sequence[ScoredRule], metric: str = "soft", min_confidence: float = 0.0):
    """Sort by the chosen confidence descending, ties by rule text."""
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}")
    kept = [s for s in scored if (s.confidence(metric) or 0.0) >= min_confidence]
    return sorted(kept, key=lambda s: (-s.confidence(metric), s.text))
