"""Horn rules generated from predicate cycles.

Each of the k atoms of a k-cycle becomes the head of one rule whose body is
the remaining k-1 atoms, plus any type constraints carried by the cycle.
Rules are compared through a canonical form that is invariant under
variable renaming and body reordering.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence, Union

from .kb import FORWARD, THING, KnowledgeGraph
from .miner import PredicateCycle, Steps
from .typed import TypedFPC

TYPE_OF = "typeOf"


class RelAtom(NamedTuple):
    predicate: int
    subject: int
    object: int


class TypeAtom(NamedTuple):
    var: int
    type: int


Atom = Union[RelAtom, TypeAtom]


@dataclass(frozen=True)
class Rule:
    body: tuple[Atom, ...]
    head: RelAtom
    source: Steps | None = None

    def variables(self) -> set[int]:
        out = {self.head.subject, self.head.object}
        for a in self.body:
            if isinstance(a, RelAtom):
                out.update((a.subject, a.object))
            else:
                out.add(a.var)
        return out


def cycle_atoms(steps: Sequence[tuple[int, int]]) -> list[RelAtom]:
    """Relation atoms <x_i, p_i^{d_i}, x_{i+1}> with x_{k+1} = x_1 (vars 1..k)."""
    k = len(steps)
    atoms = []
    for i, (p, d) in enumerate(steps):
        a, b = i + 1, (i + 1) % k + 1
        atoms.append(RelAtom(p, a, b) if d == FORWARD else RelAtom(p, b, a))
    return atoms


def candidate_rules(fpc: PredicateCycle | TypedFPC) -> list[Rule]:
    """The k rules of a k-cycle, one per head position, before deduplication."""
    if isinstance(fpc, TypedFPC):
        constraints = [
            TypeAtom(i + 1, t) for i, t in enumerate(fpc.constraints) if t != THING
        ]
    else:
        constraints = []
    atoms = cycle_atoms(fpc.steps)
    rules = []
    for j, head in enumerate(atoms):
        body = tuple(a for i, a in enumerate(atoms) if i != j) + tuple(constraints)
        rules.append(Rule(body, head, fpc.steps))
    return rules


def _encode(atom: Atom, ren: dict[int, int]) -> tuple[int, ...]:
    if isinstance(atom, RelAtom):
        return (0, atom.predicate, ren[atom.subject], ren[atom.object])
    return (1, ren[atom.var], atom.type)


def _decode(enc: tuple[int, ...]) -> Atom:
    if enc[0] == 0:
        return RelAtom(*enc[1:])
    return TypeAtom(*enc[1:])


def canonicalize(rule: Rule) -> Rule:
    """Rename variables canonically and sort the body.

    The head subject becomes variable 1 and the head object variable 2;
    the remaining variables take whichever numbering gives the smallest
    sorted body.  Exhaustive over those variables, which is cheap for the
    short rules cycles produce.
    """
    head = rule.head
    ren = {head.subject: 1}
    if head.object not in ren:
        ren[head.object] = 2
    rest = sorted(rule.variables() - set(ren))
    base = len(ren) + 1
    best = None
    for perm in itertools.permutations(range(base, base + len(rest))):
        full = dict(ren)
        full.update(zip(rest, perm))
        body = tuple(sorted({_encode(a, full) for a in rule.body}))
        if best is None or body < best:
            best = body
    if best is None:
        best = tuple(sorted({_encode(a, ren) for a in rule.body}))
    new_head = RelAtom(head.predicate, 1, ren[head.object])
    return Rule(tuple(_decode(e) for e in best), new_head, rule.source)


def canonical_rule_form(rule: Rule) -> str:
    """Key equal for exactly the rules that are identical up to renaming."""
    c = canonicalize(rule)
    ident = {v: v for v in c.variables()}
    body = ";".join(",".join(map(str, _encode(a, ident))) for a in c.body)
    return f"{c.head.predicate},{c.head.subject},{c.head.object}<-{body}"


def generate_rules(fpc: PredicateCycle | TypedFPC) -> list[Rule]:
    """Distinct rules of a cycle, in head-position order, canonicalized."""
    return dedup_rules(candidate_rules(fpc))


def dedup_rules(rules: Iterable[Rule]) -> list[Rule]:
    """Drop empty-body and logically duplicate rules, keeping first seen."""
    seen = set()
    out = []
    for r in rules:
        if not r.body:
            continue
        key = canonical_rule_form(r)
        if key in seen:
            continue
        seen.add(key)
        out.append(canonicalize(r))
    return out


def rules_from_cycles(
    cycles: Iterable[PredicateCycle], typed: Iterable[TypedFPC] = ()
) -> list[Rule]:
    """Untyped rules of every cycle followed by typed rules, deduplicated."""
    cands: list[Rule] = []
    for c in cycles:
        cands.extend(candidate_rules(c))
    for t in typed:
        cands.extend(candidate_rules(t))
    return dedup_rules(cands)


# text form: "p(x1,x3) & typeOf(x3,T) => q(x1,x2)"

def atom_text(atom: Atom, kb: KnowledgeGraph) -> str:
    if isinstance(atom, RelAtom):
        return f"{kb.predicates[atom.predicate]}(x{atom.subject},x{atom.object})"
    return f"{TYPE_OF}(x{atom.var},{kb.types[atom.type]})"


def rule_text(rule: Rule, kb: KnowledgeGraph) -> str:
    c = canonicalize(rule)
    body = " & ".join(atom_text(a, kb) for a in c.body)
    return f"{body} => {atom_text(c.head, kb)}"


def _var(tok: str) -> int:
    tok = tok.strip()
    if not (tok.startswith("x") and tok[1:].isdigit()):
        raise ValueError(f"bad variable {tok!r}")
    return int(tok[1:])


def parse_atom(text: str, kb: KnowledgeGraph) -> Atom:
    text = text.strip()
    if not text.endswith(")"):
        raise ValueError(f"bad atom {text!r}")
    if text.startswith(TYPE_OF + "("):
        inner = text[len(TYPE_OF) + 1 : -1]
        var, _, type_name = inner.partition(",")
        t = kb.types.get(type_name)
        if t is None:
            raise ValueError(f"unknown type {type_name!r}")
        return TypeAtom(_var(var), t)
    cut = text.rfind("(")
    name, args = text[:cut], text[cut + 1 : -1]
    s, _, o = args.partition(",")
    p = kb.predicates.get(name)
    if p is None:
        raise ValueError(f"unknown predicate {name!r}")
    return RelAtom(p, _var(s), _var(o))


def parse_rule(text: str, kb: KnowledgeGraph) -> Rule:
    body_text, sep, head_text = text.partition(" => ")
    if not sep:
        raise ValueError(f"missing '=>' in rule {text!r}")
    head = parse_atom(head_text, kb)
    if not isinstance(head, RelAtom):
        raise ValueError("rule head must be a relation atom")
    body = tuple(parse_atom(a, kb) for a in body_text.split(" & ") if a.strip())
    return Rule(body, head)
