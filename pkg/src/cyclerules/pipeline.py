"""End-to-end run: ingest, index, mine, type, generate, score, predict, evaluate."""

from __future__ import annotations

import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

from .index import GraphIndex
from .kb import KnowledgeGraph, Triple
from .miner import FPCMiner, MiningConfig, PredicateCycle, default_threads
from .predict import HoldoutEvaluation, Prediction, apply_rules, evaluate, holdout_split
from .rdfio import IngestReport, load_ntriples_file, read_prefixes
from .rules import rules_from_cycles
from .scoring import METRICS, ScoredRule, rank, score_rules
from .typed import TypeConfig, TypedFPC, augment

log = logging.getLogger(__name__)


@dataclass
class RunConfig:
    input: Path | None = None
    min_support: int = 2
    max_length: int = 3
    with_types: bool = False
    top_k_types: int = 1
    confidence: str = "soft"
    min_confidence: float = 0.0
    threads: int = field(default_factory=default_threads)
    holdout: float = 0.0
    seed: int = 0
    top_n: int = 500
    prefixes: Path | None = None
    strict: bool = False
    allow_self_loops: bool = True
    pair_counting: bool = False
    soft_per_instantiation: bool = False
    mine_rdf_type: bool = False
    per_rule_limit: int | None = None

    def __post_init__(self):
        if self.confidence not in METRICS:
            raise ValueError(f"confidence must be one of {METRICS}")
        if not 0.0 <= self.holdout < 1.0:
            raise ValueError("holdout must be in [0, 1)")
        self.mining  # validates thresholds
        TypeConfig(self.top_k_types, self.min_support)

    @property
    def mining(self) -> MiningConfig:
        return MiningConfig(
            self.min_support, self.max_length, self.threads, self.allow_self_loops
        )

    @property
    def counting(self) -> str:
        return "pair" if self.pair_counting else "instantiation"

    @property
    def soft_mode(self) -> str:
        return "instantiation" if self.soft_per_instantiation else "entity"


@dataclass
class RunResult:
    kb: KnowledgeGraph
    train: KnowledgeGraph
    ingest: IngestReport | None
    cycles: list[PredicateCycle]
    typed: list[TypedFPC]
    ranked: list[ScoredRule]
    diagnostics: list[ScoredRule]
    test: set[Triple]
    predictions: list[Prediction]
    evaluation: HoldoutEvaluation | None
    timings: dict[str, float]

    def report(self) -> dict:
        counts = {
            "entities": self.kb.num_entities,
            "predicates": self.kb.num_predicates,
            "facts": len(self.kb.facts),
            "train_facts": len(self.train.facts),
            "test_facts": len(self.test),
            "cycles": len(self.cycles),
            "typed_cycles": len(self.typed),
            "rules": len(self.ranked),
            "flagged_rules": len(self.diagnostics),
            "predictions": len(self.predictions),
        }
        return {
            "timings_s": {k: round(v, 4) for k, v in self.timings.items()},
            "counts": counts,
        }


class _Timer:
    def __init__(self):
        self.timings: dict[str, float] = {}

    @contextmanager
    def stage(self, name: str):
        t0 = time.perf_counter()
        yield
        self.timings[name] = time.perf_counter() - t0
        log.info("stage %-8s %.3fs", name, self.timings[name])


def ingest(cfg: RunConfig) -> tuple[KnowledgeGraph, IngestReport]:
    prefixes = read_prefixes(cfg.prefixes) if cfg.prefixes else None
    return load_ntriples_file(
        cfg.input, prefixes=prefixes, strict=cfg.strict, keep_type_facts=cfg.mine_rdf_type
    )


def learn_rules(index: GraphIndex, cfg: RunConfig, timer: _Timer | None = None):
    """Mine cycles, optionally type them, and score the generated rules."""
    timer = timer or _Timer()
    with timer.stage("mine"):
        cycles = FPCMiner(index, cfg.mining).run().cycles
    typed: list[TypedFPC] = []
    if cfg.with_types:
        with timer.stage("augment"):
            tcfg = TypeConfig(cfg.top_k_types, cfg.min_support)
            for c in cycles:
                typed.extend(augment(index, c, tcfg))
    with timer.stage("generate"):
        rules = rules_from_cycles(cycles, typed)
    with timer.stage("score"):
        scored, diag = score_rules(
            rules, index, cfg.counting, cfg.soft_mode, threads=cfg.threads
        )
        ranked = rank(scored, cfg.confidence, cfg.min_confidence)
    return cycles, typed, ranked, diag


def run(cfg: RunConfig, kb: KnowledgeGraph | None = None) -> RunResult:
    """Run every stage; ``kb`` overrides reading ``cfg.input``."""
    timer = _Timer()
    report = None
    if kb is None:
        with timer.stage("ingest"):
            kb, report = ingest(cfg)
    test: set[Triple] = set()
    train = kb
    if cfg.holdout > 0:
        train, test = holdout_split(kb, cfg.holdout, cfg.seed)
    with timer.stage("index"):
        index = GraphIndex(train)
    cycles, typed, ranked, diag = learn_rules(index, cfg, timer)
    with timer.stage("predict"):
        chosen = [(s.rule, s.confidence(cfg.confidence)) for s in ranked]
        predictions = apply_rules(chosen, index, cfg.top_n, cfg.per_rule_limit)
    evaluation = None
    if cfg.holdout > 0:
        evaluation = evaluate(
            predictions, test, cfg.holdout, rules_used=min(cfg.top_n, len(ranked))
        )
    return RunResult(
        kb, train, report, cycles, typed, ranked, diag, test, predictions, evaluation,
        timer.timings,
    )
