"""Invariant suites behind ``gstree verify``; each check returns a named pass/fail line."""

from __future__ import annotations

import itertools
from typing import Callable, NamedTuple

import numpy as np

from . import fixtures
from .core import Topology, height, rotate, validate_search_tree
from .generators import random_search_tree, tree_edges
from .interleave import interleave_bound, preferred_from_history
from .machine import replay
from .oracle import enumerate_search_trees, exact_opt
from .steiner import (
    centroid_decomposition,
    is_steiner_closed,
    is_steiner_closed_tree,
    minor_tree,
    reference_tree,
    split_components,
    steinerify,
)
from .tango import TangoTree

SUITES = ("core", "steiner", "lowerbound", "tango")

# non-isomorphic trees on up to five vertices; every labelling is covered by symmetry
SMALL_TREES = [
    (1, []),
    (2, [(0, 1)]),
    (3, [(0, 1), (1, 2)]),
    (4, [(0, 1), (1, 2), (2, 3)]),
    (4, [(0, 1), (0, 2), (0, 3)]),
    (5, [(0, 1), (1, 2), (2, 3), (3, 4)]),
    (5, [(0, 1), (0, 2), (0, 3), (0, 4)]),
    (5, [(0, 1), (1, 2), (2, 3), (1, 4)]),
]


class CheckResult(NamedTuple):
    suite: str
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        tag = "PASS" if self.ok else "FAIL"
        tail = f" ({self.detail})" if self.detail else ""
        return f"{tag} {self.suite}/{self.name}{tail}"


def _shuffled_tree(rng: np.random.Generator, n: int) -> Topology:
    shape = ["path", "star", "caterpillar", "binary", "random"][int(rng.integers(0, 5))]
    perm = rng.permutation(n).tolist()
    return Topology.from_edges(n, [(perm[a], perm[b]) for a, b in tree_edges(shape, n, int(rng.integers(0, 2**31)))])


def rotation_fuzz(cases: int = 1000, max_n: int = 64, seed: int = 0) -> str | None:
    """Rotate a random node of a random search tree; check validity and the inverse rotation."""
    rng = np.random.default_rng(seed)
    for k in range(cases):
        n = int(rng.integers(2, max_n + 1))
        g = _shuffled_tree(rng, n)
        t = random_search_tree(g, rng)
        v = int(rng.integers(0, n))
        if t.parent[v] < 0:
            v = t.children[v][0]
        p = t.parent[v]
        t2 = rotate(g, t, v)
        bad = validate_search_tree(g, t2)
        if bad is not None:
            return f"case {k}: rotation of {v} gave an invalid tree at node {bad.node}"
        if rotate(g, t2, p) != t:
            return f"case {k}: rotating {p} back did not restore the tree"
    return None


def steinerify_fuzz(cases: int = 200, max_n: int = 128, seed: int = 0) -> str | None:
    rng = np.random.default_rng(seed)
    for k in range(cases):
        n = int(rng.integers(1, max_n + 1))
        g = _shuffled_tree(rng, n)
        t = random_search_tree(g, rng)
        s = steinerify(g, t)
        if validate_search_tree(g, s) is not None or not is_steiner_closed_tree(g, s):
            return f"case {k}: output is not a Steiner-closed search tree"
        if height(s) > 2 * height(t):
            return f"case {k}: height {height(s)} exceeds twice {height(t)}"
    return None


def height_bounds(cases: int = 200, max_n: int = 1024, seed: int = 0) -> str | None:
    rng = np.random.default_rng(seed)
    for k in range(cases):
        n = int(rng.integers(2, max_n + 1))
        g = _shuffled_tree(rng, n)
        c = centroid_decomposition(g)
        if height(c) > int(np.floor(np.log2(n))) + 1:
            return f"case {k}: centroid height {height(c)} at n={n}"
        if max_n <= 256 or k % 4 == 0:
            p = reference_tree(g)
            if height(p) > 2 * np.log2(n) + 2:
                return f"case {k}: reference height {height(p)} at n={n}"
    return None


def split_matrix(graphs: int = 20, max_n: int = 128, seed: int = 0) -> str | None:
    """Every root path of a reference tree splits into at most two components."""
    rng = np.random.default_rng(seed)
    for k in range(graphs):
        n = int(rng.integers(1, max_n + 1))
        g = _shuffled_tree(rng, n)
        p = reference_tree(g)
        for v in range(n):
            path = p.ancestors(v)
            for i in range(len(path) + 1):
                c = split_components(g, path, i)
                if c > 2:
                    return f"graph {k}: path to {v} split at {i} gives {c} components"
    return None


def lowerbound_matrix(max_n: int = 5, max_m: int = 3, random_m4: int = 0, seed: int = 0) -> tuple[str | None, int]:
    """floor(I/2) - n <= OPT over every small tree, every search tree P, every short sequence."""
    rng = np.random.default_rng(seed)
    checked = 0
    for n, edges in SMALL_TREES:
        if n > max_n:
            continue
        g = Topology.from_edges(n, edges)
        refs = list(enumerate_search_trees(g))
        seqs = [list(s) for m in range(1, max_m + 1) for s in itertools.product(range(n), repeat=m)]
        seqs += [rng.integers(0, n, 4).tolist() for _ in range(random_m4)]
        for x in seqs:
            opt = exact_opt(g, x)
            for p in refs:
                checked += 1
                if interleave_bound(g, p, x).lower_bound > opt:
                    return f"n={n} edges={edges} x={x}: bound exceeds OPT={opt}", checked
    return None, checked


def tango_fuzz(runs: int = 30, max_n: int = 64, searches: int = 100, seed: int = 0) -> str | None:
    """Audited tango runs: audit after each search, trace replay, path-change accounting."""
    rng = np.random.default_rng(seed)
    for k in range(runs):
        n = int(rng.integers(1, max_n + 1))
        g = _shuffled_tree(rng, n)
        t = TangoTree(g, audit_each=True)
        seq = rng.integers(0, n, searches).tolist()
        try:
            t.run(seq)
        except AssertionError as exc:
            return f"run {k}: {exc}"
        rep, final = replay(g, t.initial_tree, t.trace_text())
        if rep.total != t.machine.total_cost or final != t.machine.tree:
            return f"run {k}: trace replay disagrees with the live structure"
        lb = interleave_bound(g, t.reference, seq)
        if t.total_path_changes > lb.total + lb.first_definitions:
            return f"run {k}: {t.total_path_changes} path changes exceed I + first definitions"
        if t.preferred.preferred != preferred_from_history(t.reference, seq):
            return f"run {k}: preferred children differ from a recomputation"
        for path in t.paths.values():
            if not is_steiner_closed(g, path.nodes) or not minor_tree(g, path.nodes).is_tree():
                return f"run {k}: path {path.id} has a bad minor"
    return None


def _core_checks(quick: bool) -> list[tuple[str, Callable[[], str | None]]]:
    def fixture_check():
        g = fixtures.sample_topology()
        t = fixtures.sample_search_tree()
        if validate_search_tree(g, t) is not None:
            return "sample search tree rejected"
        bad = validate_search_tree(g, fixtures.swapped(t, fixtures.v("g"), fixtures.v("j")))
        if bad is None:
            return "swapped tree accepted"
        if rotate(g, t, fixtures.v("i")) != fixtures.sample_rotated_i():
            return "rotation of i does not match the fixture"
        return None

    return [
        ("fixtures", fixture_check),
        ("rotation-fuzz", lambda: rotation_fuzz(300 if quick else 10_000)),
    ]


def _steiner_checks(quick: bool) -> list[tuple[str, Callable[[], str | None]]]:
    def fixture_check():
        g = fixtures.sample_topology()
        if steinerify(g, fixtures.sample_search_tree()) != fixtures.sample_steiner_closed():
            return "steinerify of the sample differs from the fixture"
        if centroid_decomposition(g) != fixtures.sample_centroid():
            return "centroid tree of the sample differs from the fixture"
        return None

    return [
        ("fixtures", fixture_check),
        ("steinerify-fuzz", lambda: steinerify_fuzz(50 if quick else 1000, 64 if quick else 256)),
        ("height-bounds", lambda: height_bounds(50 if quick else 1000, 256 if quick else 1024)),
        ("split-components", lambda: split_matrix(10 if quick else 100)),
    ]


def _lowerbound_checks(quick: bool) -> list[tuple[str, Callable[[], str | None]]]:
    return [("tiny-matrix", lambda: lowerbound_matrix(4 if quick else 5, 3, 0 if quick else 1000)[0])]


def _tango_checks(quick: bool) -> list[tuple[str, Callable[[], str | None]]]:
    def fixture_run():
        t = TangoTree(fixtures.sample_topology(), audit_each=True)
        t.run(np.random.default_rng(0).integers(0, 12, 1000).tolist())
        return t.audit()

    return [
        ("sample-1000", fixture_run),
        ("fuzz", lambda: tango_fuzz(10 if quick else 100, 64 if quick else 256)),
    ]


_BUILDERS = {
    "core": _core_checks,
    "steiner": _steiner_checks,
    "lowerbound": _lowerbound_checks,
    "tango": _tango_checks,
}


def verify(suite: str = "all", *, quick: bool = True) -> list[CheckResult]:
    names = SUITES if suite == "all" else (suite,)
    if any(s not in _BUILDERS for s in names):
        raise ValueError(f"unknown suite {suite!r}; expected one of {SUITES + ('all',)}")
    out = []
    for s in names:
        for name, fn in _BUILDERS[s](quick):
            bad = fn()
            out.append(CheckResult(s, name, bad is None, bad or ""))
    return out
