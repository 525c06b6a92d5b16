"""Command line interface.

Subcommands compose through files: ``mine`` writes cycles, ``score`` turns
cycles into ranked rules, ``predict`` applies rules, ``eval`` compares
predictions with withheld facts, and ``pipeline`` does all of it at once.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

from .index import GraphIndex
from .miner import FPCMiner, default_threads
from .pipeline import RunConfig, ingest, run
from .predict import apply_rules
from .rdfio import (
    load_ntriples_file,
    read_cycles,
    read_predictions,
    read_rules,
    write_cycles,
    write_ntriples,
    write_predictions,
    write_rules,
)
from .rules import parse_rule, rules_from_cycles
from .scoring import rank, score_rules
from .typed import TypeConfig, augment

log = logging.getLogger("cyclerules")


class CliError(Exception):
    pass


def _add_common(p: argparse.ArgumentParser, input_required: bool = True) -> None:
    if input_required:
        p.add_argument("input", type=Path, help="N-Triples file")
    p.add_argument("--min-support", type=int, default=2)
    p.add_argument("--max-length", type=int, default=3)
    p.add_argument("--with-types", action="store_true")
    p.add_argument("--top-k-types", type=int, default=1)
    p.add_argument("--confidence", choices=("std", "pca", "soft"), default="soft")
    p.add_argument("--min-confidence", type=float, default=0.0)
    p.add_argument("--threads", type=int, default=default_threads())
    p.add_argument("--holdout", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--top-n", type=int, default=500)
    p.add_argument("--prefixes", type=Path)
    p.add_argument("--strict", action="store_true")
    p.add_argument(
        "--allow-self-loops",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="mine length-1 cycles from self-loop facts (default on)",
    )
    p.add_argument("--pair-counting", action="store_true",
                   help="count distinct head pairs instead of full instantiations")
    p.add_argument("--soft-per-instantiation", action="store_true",
                   help="subtract P(e,p) once per body instantiation, not per entity")
    p.add_argument("--mine-rdf-type", action="store_true",
                   help="also keep rdf:type statements as minable facts")
    p.add_argument("--per-rule-limit", type=int)
    p.add_argument("--rule-format", choices=("tsv", "jsonl"), default="tsv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cyclerules", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mine", help="mine frequent predicate cycles")
    _add_common(p)
    p.add_argument("-o", "--output", type=Path, required=True)

    p = sub.add_parser("score", help="generate and score rules from a cycles file")
    _add_common(p)
    p.add_argument("--cycles", type=Path, required=True)
    p.add_argument("-o", "--output", type=Path, required=True)

    p = sub.add_parser("predict", help="apply a rules file")
    _add_common(p)
    p.add_argument("--rules", type=Path, required=True)
    p.add_argument("--test", type=Path, help="withheld facts, fills the hit column")
    p.add_argument("-o", "--output", type=Path, required=True)

    p = sub.add_parser("eval", help="count predictions found among withheld facts")
    p.add_argument("--predictions", type=Path, required=True)
    p.add_argument("--test", type=Path, required=True)
    p.add_argument("--holdout", type=float, default=0.0)
    p.add_argument("-o", "--output", type=Path)

    p = sub.add_parser("pipeline", help="run every stage")
    _add_common(p)
    p.add_argument("--out-dir", type=Path, required=True)
    return parser


def _config(args) -> RunConfig:
    return RunConfig(
        input=args.input,
        min_support=args.min_support,
        max_length=args.max_length,
        with_types=args.with_types,
        top_k_types=args.top_k_types,
        confidence=args.confidence,
        min_confidence=args.min_confidence,
        threads=args.threads,
        holdout=args.holdout,
        seed=args.seed,
        top_n=args.top_n,
        prefixes=args.prefixes,
        strict=args.strict,
        allow_self_loops=args.allow_self_loops,
        pair_counting=args.pair_counting,
        soft_per_instantiation=args.soft_per_instantiation,
        mine_rdf_type=args.mine_rdf_type,
        per_rule_limit=args.per_rule_limit,
    )


def _require(*paths: Path | None) -> None:
    for p in paths:
        if p is not None and not p.is_file():
            raise CliError(f"input file not found: {p}")


def _write_all(outputs: dict[Path, str]) -> None:
    # everything is rendered before the first write
    for path, text in outputs.items():
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")


def _render(fn, *args, **kwargs) -> str:
    buf = io.StringIO()
    fn(*args, sink=buf, **kwargs)
    return buf.getvalue()


def cmd_mine(args) -> None:
    cfg = _config(args)
    _require(cfg.input, cfg.prefixes)
    kb, report = ingest(cfg)
    log.info("ingest: %s", asdict(report))
    index = GraphIndex(kb)
    cycles = FPCMiner(index, cfg.mining).run().cycles
    typed = []
    if cfg.with_types:
        tcfg = TypeConfig(cfg.top_k_types, cfg.min_support)
        for c in cycles:
            typed.extend(augment(index, c, tcfg))
    _write_all({args.output: _render(write_cycles, kb, cycles, typed)})


def cmd_score(args) -> None:
    cfg = _config(args)
    _require(cfg.input, cfg.prefixes, args.cycles)
    kb, _ = ingest(cfg)
    with open(args.cycles, encoding="utf-8") as fh:
        cycles, typed = read_cycles(kb, fh)
    index = GraphIndex(kb)
    rules = rules_from_cycles(cycles, typed)
    scored, _ = score_rules(rules, index, cfg.counting, cfg.soft_mode, threads=cfg.threads)
    ranked = rank(scored, cfg.confidence, cfg.min_confidence)
    _write_all({args.output: _render(write_rules, ranked, metric=cfg.confidence, fmt=args.rule_format)})


def _load_test(path: Path, kb=None):
    test_kb, _ = load_ntriples_file(path, kb=kb)
    return test_kb


def cmd_predict(args) -> None:
    cfg = _config(args)
    _require(cfg.input, cfg.prefixes, args.rules, args.test)
    kb, _ = ingest(cfg)
    with open(args.rules, encoding="utf-8") as fh:
        rows = read_rules(fh)
    chosen = []
    for row in rows:
        try:
            chosen.append((parse_rule(row.text, kb), row.confidence(cfg.confidence)))
        except ValueError as exc:
            log.warning("skipping rule %r: %s", row.text, exc)
    test = set()
    if args.test:
        # facts only in the test file never occur in predictions, so interning
        # into a separate graph and mapping back by name is enough
        test_kb = _load_test(args.test)
        names = test_kb.fact_strings()
        E, P = kb.entities, kb.predicates
        for s, p, o in names:
            ids = (E.get(s), P.get(p), E.get(o))
            if None not in ids:
                test.add(ids)
    index = GraphIndex(kb)
    predictions = apply_rules(chosen, index, cfg.top_n, cfg.per_rule_limit)
    _write_all({args.output: _render(write_predictions, kb, predictions, test=test)})


def cmd_eval(args) -> None:
    _require(args.predictions, args.test)
    with open(args.predictions, encoding="utf-8") as fh:
        rows = read_predictions(fh)
    test = _load_test(args.test).fact_strings()
    hits = sum(1 for s, p, o, _, _ in rows if (s, p, o) in test)
    summary = {
        "holdout_fraction": args.holdout,
        "predictions": len(rows),
        "hits": hits,
        "rules_used": len({r[3] for r in rows}),
    }
    text = json.dumps(summary, sort_keys=True) + "\n"
    if args.output:
        _write_all({args.output: text})
    else:
        sys.stdout.write(text)


def cmd_pipeline(args) -> None:
    cfg = _config(args)
    _require(cfg.input, cfg.prefixes)
    result = run(cfg)
    out = args.out_dir
    outputs = {
        out / "rules.tsv": _render(write_rules, result.ranked, metric=cfg.confidence, fmt=args.rule_format),
        out / "predictions.tsv": _render(write_predictions, result.train, result.predictions, test=result.test),
    }
    if result.evaluation is not None:
        outputs[out / "evaluation.json"] = json.dumps(asdict(result.evaluation), sort_keys=True) + "\n"
        outputs[out / "test.nt"] = _render(write_ntriples, result.kb, result.test)
    report = result.report()
    if result.ingest is not None:
        report["ingest"] = asdict(result.ingest)
    outputs[out / "report.json"] = json.dumps(report, indent=2, sort_keys=True) + "\n"
    _write_all(outputs)
    for stage, secs in result.timings.items():
        print(f"{stage:<9} {secs:8.3f}s", file=sys.stderr)


COMMANDS = {
    "mine": cmd_mine,
    "score": cmd_score,
    "predict": cmd_predict,
    "eval": cmd_eval,
    "pipeline": cmd_pipeline,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except (CliError, ValueError, OSError) as exc:
        print(f"cyclerules: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
