"""Ground truth at desk scale: all search trees of a tiny tree, exact OPT, a static baseline."""

from __future__ import annotations

from collections import deque
from collections.abc import Sequence as SequenceABC
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .core import SearchTree, Topology, TreeState
from .machine import CostReport, GstMachine, ResetMode
from .steiner import reference_tree

ENUMERATE_MAX_N = 16
ENUMERATE_MAX_TREES = 50_000_000
OPT_MAX_N = 5
OPT_MAX_M = 4


class GuardExceeded(ValueError):
    pass


def _components(g: Topology, verts: frozenset[int], removed: int) -> list[frozenset[int]]:
    left = set(verts)
    left.discard(removed)
    comps = []
    for start in sorted(left):
        if start not in left:
            continue
        left.discard(start)
        comp = [start]
        i = 0
        while i < len(comp):
            for y in g.adjacency[comp[i]]:
                if y in left:
                    left.discard(y)
                    comp.append(y)
            i += 1
        comps.append(frozenset(comp))
    return comps


def count_search_trees(g: Topology) -> int:
    """Number of search trees: sum over roots of the product over the remaining components."""

    @lru_cache(maxsize=None)
    def count(verts: frozenset[int]) -> int:
        total = 0
        for r in verts:
            prod = 1
            for comp in _components(g, verts, r):
                prod *= count(comp)
            total += prod
        return total

    return count(frozenset(range(g.n)))


def _tree_table(g: Topology) -> np.ndarray:
    """All search trees as rows of parent arrays, built bottom-up by cartesian products."""
    memo: dict[frozenset[int], np.ndarray] = {}

    def build(verts: frozenset[int]) -> np.ndarray:
        # columns follow sorted(verts); the component root's column holds -1
        if verts in memo:
            return memo[verts]
        cols = sorted(verts)
        pos = {x: i for i, x in enumerate(cols)}
        blocks = []
        for r in cols:
            comps = _components(g, verts, r)
            subs = [build(c) for c in comps]
            rows = 1
            for s in subs:
                rows *= len(s)
            block = np.empty((rows, len(cols)), dtype=np.int16)
            block[:, pos[r]] = -1
            inner = rows
            for comp, sub in zip(comps, subs):
                # product order: the first component varies slowest
                inner //= len(sub)
                outer = rows // (len(sub) * inner)
                tiled = np.tile(np.repeat(sub, inner, axis=0), (outer, 1))
                tiled = np.where(tiled == -1, np.int16(r), tiled)
                block[:, [pos[x] for x in sorted(comp)]] = tiled
            blocks.append(block)
        out = np.concatenate(blocks) if len(blocks) > 1 else blocks[0]
        memo[verts] = out
        return out

    return build(frozenset(range(g.n)))


class SearchTreeTable(SequenceABC):
    """Read-only sequence of every search tree on a topology, stored as one array."""

    def __init__(self, g: Topology, parents: np.ndarray):
        self.topology = g
        self.parents = parents

    def __len__(self) -> int:
        return len(self.parents)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        return SearchTree(tuple(int(x) for x in self.parents[i]))


def enumerate_search_trees(g: Topology) -> SearchTreeTable:
    if g.n > ENUMERATE_MAX_N:
        raise GuardExceeded(f"enumeration is limited to n <= {ENUMERATE_MAX_N}")
    count = count_search_trees(g)
    if count > ENUMERATE_MAX_TREES:
        raise GuardExceeded(f"{count} search trees exceed the enumeration cap")
    return SearchTreeTable(g, _tree_table(g))


class _RotationGraph:
    """Every search tree of a tiny topology with its rotation successors, by id."""

    def __init__(self, g: Topology):
        table = enumerate_search_trees(g)
        self.trees = list(table)
        self.index = {t.parent: i for i, t in enumerate(self.trees)}
        self.parent = [t.parent for t in self.trees]
        self.root = [t.root for t in self.trees]
        self.rotated: list[list[int]] = []
        for t in self.trees:
            succ = [-1] * g.n
            for x in range(g.n):
                if t.parent[x] >= 0:
                    st = TreeState(g, t)
                    st.rotate(x)
                    succ[x] = self.index[tuple(st.parent)]
            self.rotated.append(succ)


@lru_cache(maxsize=256)
def _rotation_graph(g: Topology) -> _RotationGraph:
    return _RotationGraph(g)


def exact_opt(
    g: Topology,
    x: Sequence[int],
    *,
    initial: SearchTree | None = None,
    reset: ResetMode | str = ResetMode.FREE,
) -> int:
    """Minimum number of unit ops serving ``x``, over all initial trees unless ``initial`` is given.

    States are (tree, finger, next search, touched); unit ops cost 1 and
    closing a session whose target was touched is free.  Under the paid
    reset a session may only close with the finger back on the root.
    """
    x = list(x)
    if g.n > OPT_MAX_N or len(x) > OPT_MAX_M:
        raise GuardExceeded(f"exact_opt is limited to n <= {OPT_MAX_N}, m <= {OPT_MAX_M}")
    for v in x:
        g.check_vertex(v)
    m = len(x)
    if m == 0:
        return 0
    paid = ResetMode(reset) is ResetMode.PAID
    rg = _rotation_graph(g)
    n = g.n

    def key(tid: int, finger: int, idx: int, touched: bool) -> int:
        return ((tid * n + finger) * (m + 1) + idx) * 2 + touched

    dist: dict[int, int] = {}
    dq: deque[tuple[int, int, int, int, bool]] = deque()
    starts = range(len(rg.trees)) if initial is None else [rg.index[initial.parent]]
    for tid in starts:
        r = rg.root[tid]
        dq.append((0, tid, r, 0, r == x[0]))
    while dq:
        d, tid, f, idx, touched = dq.popleft()
        k = key(tid, f, idx, touched)
        if k in dist:
            continue
        dist[k] = d
        if touched and (not paid or rg.parent[tid][f] < 0):
            if idx + 1 == m:
                return d
            r = rg.root[tid]
            dq.appendleft((d, tid, r, idx + 1, r == x[idx + 1]))
        target = x[idx]
        par = rg.parent[tid]
        nxt = []
        if par[f] >= 0:
            nxt.append((tid, par[f]))
            nxt.append((rg.rotated[tid][f], f))
        for c in range(n):
            if par[c] == f:
                nxt.append((tid, c))
        for t2, f2 in nxt:
            dq.append((d + 1, t2, f2, idx, touched or f2 == target))
    raise AssertionError("search space exhausted without serving the sequence")


def static_baseline(g: Topology, x: Iterable[int], reference: SearchTree | None = None) -> CostReport:
    """Serve each search by walking down the fixed reference tree, never rotating."""
    p = reference_tree(g) if reference is None else reference
    m = GstMachine(g, p, record_trace=False)
    for v in x:
        m.begin_search(v)
        m.walk_to(v)
        m.end_search()
    return m.report()
