"""Measured constants of tango on random trees, m = 20n, for growing n (a lighter scaling run)."""

import sys

import numpy as np

from gstree.runner import RunConfig, run

ns = [2**k for k in range(6, 13)] if len(sys.argv) < 2 else [int(a) for a in sys.argv[1:]]
print(f"{'n':>6} {'kind':<12} {'I/m':>6} {'cost/m':>7} {'C_prime':>8} {'C_amort':>8} {'C':>6} {'sec':>6}")
for n in ns:
    for kind in ("uniform", "adversarial"):
        reps = [run(RunConfig(n=n, m=20 * n, kind=kind, tree_seed=s, seq_seed=s)) for s in range(3)]
        i_m = np.mean([r.interleave_total / r.m for r in reps])
        cost = np.mean([r.per_search_mean for r in reps])
        cp = np.mean([r.c_prime for r in reps])
        ca = np.mean([r.c_amortized for r in reps])
        c = max(r.c for r in reps)
        secs = sum(r.wall_seconds for r in reps)
        print(f"{n:>6} {kind:<12} {i_m:>6.2f} {cost:>7.1f} {cp:>8.3f} {ca:>8.3f} {c:>6.2f} {secs:>6.1f}")
