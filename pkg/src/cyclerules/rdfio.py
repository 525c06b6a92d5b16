"""N-Triples ingestion and the TSV/JSON artifacts exchanged between stages."""

from __future__ import annotations

import io
import json
import logging
import re
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence

from .kb import KnowledgeGraph, Triple

log = logging.getLogger(__name__)

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDF_TYPE = RDF_NS + "type"
DEFAULT_PREFIXES = {"rdf": RDF_NS}

RULES_HEADER = "support\tconf_std\tconf_pca\tconf_soft\trule_text"
PREDICTIONS_HEADER = "subject\tpredicate\tobject\trule_id\thit"

_IRI = r"<[^<>\"{}|^`\\\s]*>"
_BNODE = r"_:[A-Za-z0-9_\-.]+"
_PNAME = r"[A-Za-z][\w\-.]*:[^\s<>\"]*"
_LITERAL = r'"(?:[^"\\]|\\.)*"(?:@[A-Za-z]+(?:-[A-Za-z0-9]+)*|\^\^(?:' + _IRI + "|" + _PNAME + "))?"
_RESOURCE = f"(?:{_IRI}|{_BNODE}|{_PNAME})"
_LINE = re.compile(
    rf"^\s*(?P<s>{_RESOURCE})\s+(?P<p>{_IRI}|{_PNAME})\s+"
    rf"(?:(?P<o>{_RESOURCE})|(?P<lit>{_LITERAL}))\s*\.\s*(?:#.*)?$"
)


class MalformedLineError(ValueError):
    def __init__(self, lineno: int, line: str):
        super().__init__(f"malformed N-Triples line {lineno}: {line.strip()[:200]!r}")
        self.lineno = lineno


@dataclass
class IngestReport:
    lines_read: int = 0
    facts_kept: int = 0
    duplicate_facts: int = 0
    literals_skipped: int = 0
    type_statements: int = 0
    malformed_lines: int = 0
    blank_lines: int = 0

    def reconciles(self) -> bool:
        return self.lines_read == (
            self.facts_kept
            + self.duplicate_facts
            + self.literals_skipped
            + self.type_statements
            + self.malformed_lines
            + self.blank_lines
        )


def read_prefixes(path: str | Path) -> dict[str, str]:
    """Prefix file: ``@prefix dbo: <http://...> .`` or ``dbo http://...`` lines."""
    out: dict[str, str] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        m = re.match(r"@prefix\s+([\w\-.]*):\s*<([^>]*)>\s*\.?$", line, re.I)
        if m:
            out[m.group(1)] = m.group(2)
            continue
        parts = line.split()
        if len(parts) == 2:
            out[parts[0].rstrip(":")] = parts[1].strip("<>")
        else:
            raise ValueError(f"bad prefix line: {line!r}")
    return out


class _Resolver:
    def __init__(self, prefixes: dict[str, str] | None):
        self.prefixes = dict(DEFAULT_PREFIXES)
        if prefixes:
            self.prefixes.update(prefixes)

    def __call__(self, term: str) -> str:
        if term.startswith("<"):
            term = term[1:-1]
        elif term.startswith("_:"):
            return term
        pfx, colon, local = term.partition(":")
        if colon and not local.startswith("//") and pfx in self.prefixes:
            return self.prefixes[pfx] + local
        return term


def load_ntriples(
    source: IO[bytes] | IO[str] | Iterable[str],
    *,
    prefixes: dict[str, str] | None = None,
    strict: bool = False,
    keep_type_facts: bool = False,
    kb: KnowledgeGraph | None = None,
) -> tuple[KnowledgeGraph, IngestReport]:
    """Parse N-Triples into a knowledge graph.

    Literal-valued statements are skipped; rdf:type statements populate the
    type map (and also become facts when ``keep_type_facts`` is set).
    Malformed lines are counted, or raise in strict mode.
    """
    kb = KnowledgeGraph() if kb is None else kb
    report = IngestReport()
    resolve = _Resolver(prefixes)
    for lineno, raw in enumerate(source, 1):
        line = raw.decode("utf-8") if isinstance(raw, bytes) else raw
        report.lines_read += 1
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            report.blank_lines += 1
            continue
        m = _LINE.match(stripped)
        if m is None:
            if strict:
                raise MalformedLineError(lineno, line)
            report.malformed_lines += 1
            continue
        if m.group("lit") is not None:
            report.literals_skipped += 1
            continue
        s, p, o = resolve(m.group("s")), resolve(m.group("p")), resolve(m.group("o"))
        if p == RDF_TYPE:
            report.type_statements += 1
            kb.declare_type(s, o)
            if keep_type_facts:
                kb.add(s, p, o)
            continue
        if kb.add(s, p, o):
            report.facts_kept += 1
        else:
            report.duplicate_facts += 1
    return kb, report


def load_ntriples_file(path: str | Path, **kwargs) -> tuple[KnowledgeGraph, IngestReport]:
    with open(path, "rb") as fh:
        return load_ntriples(fh, **kwargs)


def _term(name: str) -> str:
    return name if name.startswith("_:") else f"<{name}>"


def write_ntriples(kb: KnowledgeGraph, facts: Iterable[Triple], sink: IO[str]) -> None:
    E, P = kb.entities, kb.predicates
    for s, p, o in sorted(facts):
        sink.write(f"{_term(E[s])} {_term(P[p])} {_term(E[o])} .\n")


def _fmt(x: float | None) -> str:
    return "nan" if x is None else f"{x:.6f}"


def write_rules(rules: Sequence, sink: IO[str], metric: str = "soft", fmt: str = "tsv") -> None:
    """Write scored rules sorted by ``metric`` descending, ties by rule text."""
    ordered = sorted(rules, key=lambda r: (-(r.confidence(metric) or 0.0), r.text))
    if fmt == "jsonl":
        for r in ordered:
            sink.write(
                json.dumps(
                    {
                        "support": r.support,
                        "conf_std": r.conf_std,
                        "conf_pca": r.conf_pca,
                        "conf_soft": r.conf_soft,
                        "rule_text": r.text,
                    },
                    sort_keys=True,
                )
                + "\n"
            )
        return
    if fmt != "tsv":
        raise ValueError(f"unknown rule format {fmt!r}")
    sink.write(RULES_HEADER + "\n")
    for r in ordered:
        sink.write(
            f"{r.support}\t{_fmt(r.conf_std)}\t{_fmt(r.conf_pca)}\t{_fmt(r.conf_soft)}\t{r.text}\n"
        )


@dataclass
class RuleRow:
    support: int
    conf_std: float
    conf_pca: float
    conf_soft: float
    text: str

    def confidence(self, metric: str) -> float:
        return getattr(self, f"conf_{metric}")


def read_rules(source: IO[str]) -> list[RuleRow]:
    """Read a rules file written by :func:`write_rules` (TSV or JSON lines)."""
    rows = []
    for n, line in enumerate(source):
        line = line.rstrip("\n")
        if not line:
            continue
        if line.startswith("{"):
            d = json.loads(line)
            rows.append(
                RuleRow(d["support"], d["conf_std"], d["conf_pca"], d["conf_soft"], d["rule_text"])
            )
            continue
        if n == 0 and line == RULES_HEADER:
            continue
        sup, cs, cp, cf, text = line.split("\t", 4)
        rows.append(RuleRow(int(sup), float(cs), float(cp), float(cf), text))
    return rows


def write_predictions(kb: KnowledgeGraph, predictions: Sequence, sink: IO[str], test: set | None = None) -> None:
    E, P = kb.entities, kb.predicates
    test = test or set()
    sink.write(PREDICTIONS_HEADER + "\n")
    for pr in predictions:
        s, p, o = pr.fact
        hit = 1 if pr.fact in test else 0
        sink.write(f"{E[s]}\t{P[p]}\t{E[o]}\t{pr.rule_id}\t{hit}\n")


def read_predictions(source: IO[str]) -> list[tuple[str, str, str, int, int]]:
    out = []
    for n, line in enumerate(source):
        line = line.rstrip("\n")
        if not line or (n == 0 and line == PREDICTIONS_HEADER):
            continue
        s, p, o, rid, hit = line.split("\t")
        out.append((s, p, o, int(rid), int(hit)))
    return out


def report_json(report: IngestReport) -> str:
    return json.dumps(asdict(report), sort_keys=True)


def parse_text(text: str, **kwargs) -> tuple[KnowledgeGraph, IngestReport]:
    return load_ntriples(io.StringIO(text), **kwargs)


CYCLES_HEADER = "support\tcycle\ttypes"
UNTYPED = "*"


def cycle_text(kb: KnowledgeGraph, steps: Sequence[tuple[int, int]]) -> str:
    return " ".join(f"{kb.predicates[p]}^{d}" for p, d in steps)


def write_cycles(kb: KnowledgeGraph, cycles: Sequence, typed: Sequence, sink: IO[str]) -> None:
    """Untyped cycles then typed ones; type column uses ``*`` for no constraint."""
    sink.write(CYCLES_HEADER + "\n")
    for c in cycles:
        sink.write(f"{c.cycle_support}\t{cycle_text(kb, c.steps)}\t\n")
    for t in typed:
        types = " ".join(UNTYPED if c == 0 else kb.types[c] for c in t.constraints)
        sink.write(f"{t.typed_support}\t{cycle_text(kb, t.steps)}\t{types}\n")


def read_cycles(kb: KnowledgeGraph, source: IO[str]):
    """Inverse of :func:`write_cycles` against the same graph's intern tables."""
    from .miner import PredicateCycle, as_steps
    from .typed import TypedFPC

    cycles, typed = [], []
    for n, line in enumerate(source):
        line = line.rstrip("\n")
        if not line or (n == 0 and line == CYCLES_HEADER):
            continue
        sup, text, types = line.split("\t")
        steps = []
        for tok in text.split():
            name, _, d = tok.rpartition("^")
            p = kb.predicates.get(name)
            if p is None:
                raise ValueError(f"unknown predicate {name!r} in cycles file")
            steps.append((p, int(d)))
        steps = as_steps(steps)
        if not types:
            cycles.append(PredicateCycle(steps, int(sup)))
            continue
        cons = []
        for name in types.split():
            if name == UNTYPED:
                cons.append(0)
                continue
            t = kb.types.get(name)
            if t is None:
                raise ValueError(f"unknown type {name!r} in cycles file")
            cons.append(t)
        # base support is not stored for typed rows; rules only need the steps
        typed.append(TypedFPC(PredicateCycle(steps, int(sup)), tuple(cons), int(sup)))
    return cycles, typed
