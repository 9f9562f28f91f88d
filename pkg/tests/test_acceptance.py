"""Acceptance criteria 1-11; each test tags itself so the run ends with one line per criterion."""

import itertools
import math
import time

import numpy as np
import pytest

from gstree.core import SearchTree, Topology, height, rotate, validate_search_tree
from gstree.generators import gen_tree, random_search_tree
from gstree.interleave import interleave_bound, preferred_from_history
from gstree.machine import replay
from gstree.oracle import enumerate_search_trees, exact_opt, static_baseline
from gstree.steiner import (
    centroid_decomposition,
    is_steiner_closed_tree,
    minor_tree,
    reference_tree,
    split_components,
    steinerify,
)
from gstree.tango import TangoTree
from gstree.verify import SMALL_TREES, rotation_fuzz, _shuffled_tree

from conftest import SCALING_KINDS, SCALING_NS

STATIC_FACTOR = 16
TIMINGS: dict[str, float] = {}
NOISE = 1.10


def tag(request, k, detail=""):
    request.node.user_properties.append(("criterion", k))
    request.node.user_properties.append(("detail", detail))
    print(f"criterion {k}: {detail}")


@pytest.fixture(scope="module")
def tiny_instances():
    """(G, X, OPT) for every small tree, every sequence of length <= 3, and 1000 random length-4 ones."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(0)
    out = []
    for n, edges in SMALL_TREES:
        g = Topology.from_edges(n, edges)
        seqs = [list(s) for m in (1, 2, 3) for s in itertools.product(range(n), repeat=m)]
        seqs += [rng.integers(0, n, 4).tolist() for _ in range(1000)]
        out += [(g, x, exact_opt(g, x)) for x in seqs]
    TIMINGS["opt"] = time.perf_counter() - t0
    return out


def test_c01_rotation_soundness(request):
    t0 = time.perf_counter()
    bad = rotation_fuzz(10_000, 64, seed=1)
    secs = time.perf_counter() - t0
    tag(request, 1, f"10^4 rotations, {secs:.1f}s" + (f", {bad}" if bad else ""))
    assert bad is None
    assert secs < 10


def _bst_from_keys(keys):
    left, right, parent = {}, {}, {}
    root = keys[0]
    parent[root] = -1
    for k in keys[1:]:
        x = root
        while True:
            side = left if k < x else right
            if x in side:
                x = side[x]
            else:
                side[x] = k
                parent[k] = x
                break
    return left, right, parent


def _bst_rotate(left, right, parent, x):
    """Textbook single rotation of x over its parent."""
    p = parent[x]
    g = parent[p]
    if left.get(p) == x:
        b = right.pop(x, None)
        if b is not None:
            left[p] = b
            parent[b] = p
        else:
            left.pop(p)
        right[x] = p
    else:
        b = left.pop(x, None)
        if b is not None:
            right[p] = b
            parent[b] = p
        else:
            right.pop(p)
        left[x] = p
    parent[p] = x
    parent[x] = g
    if g >= 0:
        if left.get(g) == p:
            left[g] = x
        else:
            right[g] = x


def test_c02_bst_specialization(request):
    counts = []
    for n in range(1, 17):
        have = len(enumerate_search_trees(gen_tree("path", n)))
        counts.append(have == math.comb(2 * n, n) // (n + 1))
    rng = np.random.default_rng(2)
    mismatches = 0
    for _ in range(1000):
        n = int(rng.integers(2, 17))
        g = gen_tree("path", n)
        left, right, parent = _bst_from_keys(rng.permutation(n).tolist())
        t = SearchTree(tuple(parent[k] for k in range(n)))
        x = int(rng.choice([k for k in range(n) if parent[k] >= 0]))
        _bst_rotate(left, right, parent, x)
        mismatches += rotate(g, t, x) != SearchTree(tuple(parent[k] for k in range(n)))
    tag(request, 2, f"Catalan counts n<=16 {sum(counts)}/16, rotation mismatches {mismatches}/1000")
    assert all(counts) and mismatches == 0


def test_c03_centroid_height(request):
    rng = np.random.default_rng(3)
    worst = 0.0
    fails = 0
    for _ in range(1000):
        n = int(rng.integers(2, 1025))
        g = _shuffled_tree(rng, n)
        h = height(centroid_decomposition(g))
        fails += h > math.floor(math.log2(n)) + 1
        worst = max(worst, h / (math.floor(math.log2(n)) + 1))
    tag(request, 3, f"1000 trees, violations {fails}, worst height/bound {worst:.2f}")
    assert fails == 0


def test_c04_steiner_closure(request):
    rng = np.random.default_rng(4)
    fails = []
    for k in range(1000):
        n = int(rng.integers(1, 257))
        g = _shuffled_tree(rng, n)
        t = random_search_tree(g, rng)
        s = steinerify(g, t)
        if validate_search_tree(g, s) is not None or not is_steiner_closed_tree(g, s):
            fails.append(f"case {k} not closed")
        elif height(s) > 2 * height(t):
            fails.append(f"case {k} height {height(s)} > 2*{height(t)}")
        p = reference_tree(g)
        if height(p) > 2 * math.log2(n) + 2 or not is_steiner_closed_tree(g, p):
            fails.append(f"case {k} reference height {height(p)}")
    tag(request, 4, f"1000 trees, failures {len(fails)}" + (f", first: {fails[0]}" if fails else ""))
    assert not fails


def test_c05_jit_split(request):
    rng = np.random.default_rng(5)
    worst = 0
    checks = 0
    for _ in range(100):
        n = int(rng.integers(1, 129))
        g = _shuffled_tree(rng, n)
        p = reference_tree(g)
        for x in range(n):
            pi = p.ancestors(x)
            for i in range(len(pi) + 1):
                worst = max(worst, split_components(g, pi, i))
                checks += 1
    tag(request, 5, f"{checks} splits, max components {worst}")
    assert worst <= 2


def test_c06_minor_trees(request):
    rng = np.random.default_rng(6)
    checked = 0
    bad = None
    for k in range(1000):
        n = int(rng.integers(1, 65))
        g = _shuffled_tree(rng, n)
        t = TangoTree(g, record_trace=False)
        for x in rng.integers(0, n, 20).tolist():
            t.search(x)
            for top, chain in t.nodes.items():
                m = minor_tree(g, chain)
                checked += 1
                if len(m.edges) != len(chain) - 1 or not m.is_tree():
                    bad = bad or f"run {k} path {top}"
    tag(request, 6, f"{checked} path node sets over 1000 runs" + (f", first bad {bad}" if bad else ""))
    assert bad is None


def test_c07_lower_bound_soundness(request, tiny_instances):
    t0 = time.perf_counter()
    refs = {}
    checked = 0
    bad = []
    for g, x, opt in tiny_instances:
        key = (g.n, tuple(g.edges))
        if key not in refs:
            refs[key] = list(enumerate_search_trees(g))
        for p in refs[key]:
            checked += 1
            if interleave_bound(g, p, x).lower_bound > opt:
                bad.append((g.edges, x, p.parent))
    secs = time.perf_counter() - t0 + TIMINGS["opt"]
    tag(request, 7, f"{checked} (G,P,X) triples, violations {len(bad)}, {secs:.0f}s")
    assert not bad
    assert secs < 600


def test_c08_tango_legality(request):
    cases = [("random", 512), ("path", 256), ("caterpillar", 128), ("binary", 100), ("star", 64)]
    failed = []
    for shape, n in cases:
        g = gen_tree(shape, n, 8)
        t = TangoTree(g, audit_each=True)
        try:
            t.run(np.random.default_rng(8).integers(0, n, 1000).tolist())
        except AssertionError as exc:
            failed.append(f"{shape}: {exc}")
            continue
        rep, final = replay(g, t.initial_tree, t.trace_text())
        if rep.total != t.machine.total_cost or final != t.machine.tree:
            failed.append(f"{shape}: replay mismatch")
    tag(request, 8, f"{len(cases)} audited 1000-search runs, failures {len(failed)}")
    assert not failed


def test_c09_update_accounting(request, scaling_matrix):
    over = [k for k, r in scaling_matrix.items() if k != "seconds" and r.path_changes > r.interleave_total + r.n]
    rng = np.random.default_rng(9)
    mismatches = 0
    for _ in range(200):
        n = int(rng.integers(1, 65))
        g = _shuffled_tree(rng, n)
        t = TangoTree(g, record_trace=False)
        seq = rng.integers(0, n, 100).tolist()
        t.run(seq)
        lb = interleave_bound(g, t.reference, seq)
        over += [("small", n)] if t.total_path_changes > lb.total + n else []
        mismatches += t.preferred.preferred != preferred_from_history(t.reference, seq)
        mismatches += t.audit() is not None
    tag(request, 9, f"runs over I+n: {len(over)}, bookkeeping mismatches {mismatches}/200")
    assert not over and mismatches == 0


def test_c10_competitive_scaling(request, scaling_matrix):
    lines = []
    ok = True
    for kind in SCALING_KINDS:
        means = []
        for n in SCALING_NS:
            vals = [r.c_prime for key, r in scaling_matrix.items() if key != "seconds" and key[0] == n and key[1] == kind]
            means.append(float(np.mean(vals)))
        finite = all(math.isfinite(c) and c > 0 for c in means)
        steps = [b / a for a, b in zip(means, means[1:])]
        kind_ok = finite and all(s <= NOISE for s in steps)
        ok &= kind_ok
        lines.append(f"{kind} C'=" + "/".join(f"{c:.2f}" for c in means) + " steps " + "/".join(f"{s:.2f}" for s in steps))
    slow = {n: s for n, s in scaling_matrix["seconds"].items() if s >= 300}
    tag(request, 10, "; ".join(lines) + f"; max seconds per n {max(scaling_matrix['seconds'].values()):.0f}")
    assert not slow
    assert ok, lines


def test_c11_sanity_ordering(request, tiny_instances):
    worst = 0.0
    bad = []
    for g, x, opt in tiny_instances:
        t = TangoTree(g, record_trace=False)
        t.run(x)
        tango = t.machine.total_cost
        static = static_baseline(g, x, t.reference).total
        if not opt <= tango <= STATIC_FACTOR * static:
            bad.append((g.edges, x, opt, tango, static))
        if static:
            worst = max(worst, tango / static)
    tag(request, 11, f"{len(tiny_instances)} instances, constant {STATIC_FACTOR}, worst tango/static {worst:.1f}, violations {len(bad)}")
    assert not bad
