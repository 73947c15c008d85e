"""Benchmark the compiled integer elimination kernel against the pure
Python fallback on boundary matrices from actual tree space computations.

Run from the repository root:

    python3 benchmarks/bench_kernel.py
    python3 benchmarks/bench_kernel.py --repeat 5 --support 7

Each workload is timed in a subprocess so the kernel choice (via
FORESTCALC_PURE) is made at import time, the way real runs see it.
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
from forestcalc.homology import chain_complex
from forestcalc.kernel import IMPLEMENTATION, normalize_divisor_chain, sparse_elementary_divisors
from forestcalc.partitions import indiscrete, make_partition
from forestcalc.simplicial import t_space

spec = json.loads(sys.argv[1])
support = spec["support"]
repeat = spec["repeat"]

# boundary matrices of tree spaces, largest degree first
jobs = []
for m in range(3, support + 1):
    cx = chain_complex(t_space(indiscrete(m)))
    for k in sorted(cx.entries, reverse=True):
        es = cx.boundary(k)
        if not es:
            continue
        jobs.append((f"T{m} d{k}", list(es), cx.ranks.get(k - 1, 0), cx.ranks.get(k, 0)))

out = []
for label, es, nrows, ncols in jobs:
    best = None
    divisors = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        divisors = normalize_divisor_chain(sparse_elementary_divisors(list(es), nrows, ncols))
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    out.append({
        "label": label,
        "rows": nrows,
        "cols": ncols,
        "nonzeros": len(es),
        "rank": len(divisors),
        "best_s": best,
    })
print(json.dumps({"implementation": IMPLEMENTATION, "jobs": out}))
"""


def run_worker(spec, pure):
    env = dict(os.environ)
    if pure:
        env["FORESTCALC_PURE"] = "1"
    else:
        env.pop("FORESTCALC_PURE", None)
    proc = subprocess.run(
        [sys.executable, "-c", WORKER, json.dumps(spec)],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    return json.loads(proc.stdout)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--support", type=int, default=6,
                        help="largest single-block support to include (default 6)")
    parser.add_argument("--repeat", type=int, default=3,
                        help="timing repetitions, best of (default 3)")
    args = parser.parse_args()

    spec = {"support": args.support, "repeat": args.repeat}
    fast = run_worker(spec, pure=False)
    slow = run_worker(spec, pure=True)

    print(f"kernels: {fast['implementation']} vs {slow['implementation']}")
    if fast["implementation"] == slow["implementation"]:
        print("note: compiled kernel unavailable, both runs used the fallback")
    header = f"{'matrix':>10} {'rows':>6} {'cols':>6} {'nnz':>7} {'rank':>5} " \
             f"{fast['implementation']:>12} {slow['implementation']:>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for a, b in zip(fast["jobs"], slow["jobs"]):
        assert a["label"] == b["label"]
        if a["rank"] != b["rank"]:
            raise SystemExit(f"kernel disagreement on {a['label']}: "
                             f"{a['rank']} vs {b['rank']}")
        ratio = b["best_s"] / a["best_s"] if a["best_s"] else float("inf")
        print(f"{a['label']:>10} {a['rows']:>6} {a['cols']:>6} {a['nonzeros']:>7} "
              f"{a['rank']:>5} {a['best_s']:>11.4f}s {b['best_s']:>11.4f}s {ratio:>7.1f}x")


if __name__ == "__main__":
    main()
