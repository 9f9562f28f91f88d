"""Compare the interleave lower bound with exact OPT and with tango on every tiny tree."""

import itertools

from gstree.core import Topology
from gstree.oracle import count_search_trees, exact_opt, static_baseline
from gstree.interleave import interleave_bound
from gstree.tango import TangoTree
from gstree.verify import SMALL_TREES

print(f"{'tree':<28} {'#T':>4} {'seqs':>5} {'max I':>6} {'max OPT':>8} {'slack':>6} {'tango/opt':>10}")
for n, edges in SMALL_TREES[1:]:
    g = Topology.from_edges(n, edges)
    seqs = [list(s) for m in (1, 2, 3) for s in itertools.product(range(n), repeat=m)]
    max_i = max_opt = 0
    slack = None
    ratio = 0.0
    for x in seqs:
        opt = exact_opt(g, x)
        t = TangoTree(g, record_trace=False)
        t.run(x)
        lb = interleave_bound(g, t.reference, x)
        max_i = max(max_i, lb.total)
        max_opt = max(max_opt, opt)
        gap = opt - lb.lower_bound
        slack = gap if slack is None else min(slack, gap)
        if opt:
            ratio = max(ratio, t.machine.total_cost / opt)
    label = " ".join(f"{a}-{b}" for a, b in edges)
    print(f"{label:<28} {count_search_trees(g):>4} {len(seqs):>5} {max_i:>6} {max_opt:>8} {slack:>6} {ratio:>10.1f}")

g = Topology.from_edges(3, [(0, 1), (1, 2)])
print("\npath a-b-c, X = a c a")
print("  OPT (free reset):", exact_opt(g, [0, 2, 0]))
print("  OPT (paid reset):", exact_opt(g, [0, 2, 0], reset="paid"))
print("  static walk cost:", static_baseline(g, [0, 2, 0]).total)
