"""Untyped mining benchmark on a large dump.

Accepts N-Triples, or a tab-separated ``subject predicate object`` file
(as YAGO2 distributes) with ``--tsv``.  Reports stage timings, the number of
cycles and the number of generated rules.

    python3 scripts/benchmark_dump.py yago2core.tsv --tsv --min-support 50 --max-length 3
"""

import argparse
import os
import time

from cyclerules.index import GraphIndex
from cyclerules.kb import KnowledgeGraph
from cyclerules.miner import MiningConfig, mine
from cyclerules.rdfio import RDF_TYPE, load_ntriples_file
from cyclerules.rules import rules_from_cycles

REFERENCE_RULES = 210


def load_tsv(path):
    kb = KnowledgeGraph()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.rstrip("\n").split("\t")
            if len(parts) < 3 or parts[0].startswith("#"):
                continue
            # some dumps carry a leading fact id column
            s, p, o = parts[-3:] if len(parts) > 3 else parts
            s, p, o = (x.strip("<>") for x in (s, p, o))
            if o.startswith('"'):
                continue
            if p in ("rdf:type", RDF_TYPE):
                kb.declare_type(s, o)
            else:
                kb.add(s, p, o)
    return kb


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("path")
    ap.add_argument("--tsv", action="store_true")
    ap.add_argument("--min-support", type=int, default=50)
    ap.add_argument("--max-length", type=int, default=3)
    ap.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    args = ap.parse_args()

    t0 = time.perf_counter()
    kb = load_tsv(args.path) if args.tsv else load_ntriples_file(args.path)[0]
    t1 = time.perf_counter()
    idx = GraphIndex(kb)
    t2 = time.perf_counter()
    cycles = mine(idx, MiningConfig(args.min_support, args.max_length, args.threads))
    t3 = time.perf_counter()
    rules = rules_from_cycles(cycles)
    t4 = time.perf_counter()
    print(f"facts={len(kb.facts)} entities={kb.num_entities} predicates={kb.num_predicates}")
    print(f"load {t1 - t0:.2f}s  index {t2 - t1:.2f}s  mine {t3 - t2:.2f}s  rules {t4 - t3:.2f}s")
    ratio = len(rules) / REFERENCE_RULES
    print(f"cycles={len(cycles)} rules={len(rules)} (reference {REFERENCE_RULES}, ratio {ratio:.2f})")


if __name__ == "__main__":
    main()
