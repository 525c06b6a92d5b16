"""Compare the miner against brute-force cycle enumeration on random graphs.

Prints every run where the two disagree, with the missing cycles, their
instance cycles and the fact count of each predicate, so pruning losses can
be inspected by hand.  Needs numpy (the test extra).

    python3 scripts/oracle_report.py --graphs 200 --seed 0
"""

import argparse
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from oracles import brute_force_fpcs  # noqa: E402

from cyclerules.index import GraphIndex  # noqa: E402
from cyclerules.miner import MiningConfig, iter_cycle_instances, mine  # noqa: E402
from cyclerules.synthetic import random_kb  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--graphs", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--taus", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--lengths", type=int, nargs="+", default=[2, 3])
    args = ap.parse_args()

    rng = random.Random(args.seed)
    t0 = time.perf_counter()
    runs = bad = 0
    for i in range(args.graphs):
        kb = random_kb(rng)
        idx = GraphIndex(kb)
        for tau in args.taus:
            for xi in args.lengths:
                runs += 1
                got = {c.steps: c.cycle_support for c in mine(idx, MiningConfig(tau, xi))}
                want = brute_force_fpcs(kb, xi, tau)
                if got == want:
                    continue
                bad += 1
                print(f"graph {i} tau={tau} xi={xi}: {len(kb.facts)} facts")
                for c in sorted(set(want) - set(got)):
                    text = " ".join(f"p{p}^{d}" for p, d in c)
                    counts = ", ".join(f"p{p}:{idx.fact_count(p)}" for p in sorted({p for p, _ in c}))
                    inst = list(iter_cycle_instances(idx, c))
                    print(f"  missing {text} support={want[c]} facts[{counts}] instances={inst}")
                for c in sorted(set(got) - set(want)):
                    print(f"  extra   {c} support={got[c]}")
                for c in sorted(k for k in got if k in want and got[k] != want[k]):
                    print(f"  support {c} mined={got[c]} oracle={want[c]}")
    print(f"{runs - bad}/{runs} runs agree ({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main()
