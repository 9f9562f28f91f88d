"""Tango trees on trees.

A static Steiner-closed reference tree ``P`` is split into preferred paths.
Each path's node set ``S`` induces a minor tree ``G(S)``, which is stored
as a link-cut style virtual tree: solid paths of ``G(S)`` kept as splay
trees, glued by path-parent edges.  Such a virtual tree is itself a valid
search tree on the part of ``G`` it covers, and a splay rotation is exactly
a rotation in the search-tree-on-trees sense, so every restructuring step
is realized as a unit op on the machine.  Vertices of a non-root path hang
as one block under the deepest of their (at most two) attachment points.

Only the physical composite tree lives in the machine.  The splay
children (``left``/``right``/``rev``), the path partition and the minor
adjacency are free bookkeeping.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .core import SearchTree, Topology, validate_search_tree
from .interleave import UNDEFINED, PreferredState
from .machine import GstMachine, ResetMode, format_trace
from .steiner import MinorTree, is_steiner_closed, minor_tree, reference_tree


def loglog_factor(n: int) -> int:
    """``1 + ceil(log2 log2 max(n, 4))``."""
    return 1 + math.ceil(math.log2(math.log2(max(n, 4))))


class SearchStats(NamedTuple):
    target: int
    cost: int
    paths_touched: int
    path_changes: int
    wall_ns: int


@dataclass(frozen=True)
class PreferredPath:
    id: int
    nodes: tuple[int, ...]
    min_depth: int
    max_depth: int
    minor: MinorTree
    decomposition: tuple[tuple[int, ...], ...]


@dataclass
class OpCounts:
    """Minor-tree edge surgery done by the last cut or merge."""

    cuts: int = 0
    links: int = 0


class TangoTree:
    def __init__(
        self,
        g: Topology,
        *,
        reference: SearchTree | None = None,
        reset: ResetMode | str = ResetMode.FREE,
        record_trace: bool = True,
        debug: bool = False,
        audit_each: bool = False,
    ):
        self.topology = g
        self.reference = reference_tree(g) if reference is None else reference
        p = self.reference
        self.depth_of = p.depth
        self.preferred = PreferredState(p)
        self.audit_each = audit_each
        n = g.n
        self._first_child = [cs[0] if cs else -1 for cs in p.children]
        self.outer = self._outer_pairs()

        # initial partition follows the canonical (smallest) child everywhere
        self.path_of = [-1] * n
        self.nodes: dict[int, list[int]] = {}
        for top in p.order:
            if self.path_of[top] >= 0:
                continue
            chain = [top]
            while self._first_child[chain[-1]] >= 0:
                chain.append(self._first_child[chain[-1]])
            for x in chain:
                self.path_of[x] = top
            self.nodes[top] = chain

        self.minor_adj: list[set[int]] = [set() for _ in range(n)]
        self.left = [-1] * n
        self.right = [-1] * n
        self.rev = [False] * n
        self.initial_tree = self._build_composite()
        self.machine = GstMachine(g, self.initial_tree, reset=reset, record_trace=record_trace, debug=debug)
        self.targets: list[int] = []
        self.last_counts = OpCounts()
        self.total_path_changes = 0

    # -- construction --

    def _outer_pairs(self) -> list[list[tuple[int, int]]]:
        """For every node c, the G-edges (a, x) with a outside P(c) and x inside."""
        p = self.reference
        outer: list[list[tuple[int, int]]] = [[] for _ in range(p.n)]
        for u, w in self.topology.edges:
            a, x = (u, w) if p.is_ancestor(u, w) else (w, u)
            c = x
            while c != a:
                outer[c].append((a, x))
                c = p.parent[c]
        return outer

    def _build_composite(self) -> SearchTree:
        n = self.topology.n
        parent = [-1] * n
        vdepth = [0] * n  # depth inside the composite, for picking hang points
        for top in self.reference.order:
            if self.path_of[top] != top:
                continue
            chain = self.nodes[top]
            mt = minor_tree(self.topology, chain)
            for a, b in mt.edges:
                self.minor_adj[a].add(b)
                self.minor_adj[b].add(a)
            hang = -1
            for a, _ in self.outer[top]:
                if hang < 0 or vdepth[a] > vdepth[hang]:
                    hang = a
            parent[top] = hang
            vdepth[top] = 0 if hang < 0 else vdepth[hang] + 1
            # singleton splay trees: the composite on S is G(S) rooted at the top
            order = [top]
            i = 0
            while i < len(order):
                x = order[i]
                i += 1
                for y in sorted(self.minor_adj[x]):
                    if y != parent[x]:
                        parent[y] = x
                        vdepth[y] = vdepth[x] + 1
                        order.append(y)
        t = SearchTree(tuple(parent))
        bad = validate_search_tree(self.topology, t)
        if bad is not None:
            raise AssertionError(f"initial composite tree is invalid: {bad}")
        return t

    # -- splay machinery, every rotation a unit op at the finger --

    def _splay_parent(self, x: int) -> int:
        p = self.machine.state.parent[x]
        if p >= 0 and (self.left[p] == x or self.right[p] == x):
            return p
        return -1

    def _push(self, x: int) -> None:
        if self.rev[x]:
            l, r = self.left[x], self.right[x]
            self.left[x], self.right[x] = r, l
            if l >= 0:
                self.rev[l] = not self.rev[l]
            if r >= 0:
                self.rev[r] = not self.rev[r]
            self.rev[x] = False

    def _rotate_up(self, x: int) -> None:
        """Rotate ``x`` above its splay parent; the finger must be on ``x``."""
        p = self._splay_parent(x)
        gp = self._splay_parent(p)
        left, right = self.left, self.right
        if gp >= 0:
            if left[gp] == p:
                left[gp] = x
            else:
                right[gp] = x
        if left[p] == x:
            left[p] = right[x]
            right[x] = p
        else:
            right[p] = left[x]
            left[x] = p
        self.machine.rotate()

    def _splay(self, x: int, stop: int = -1) -> None:
        """Splay ``x`` until its splay parent is ``stop`` (or it is a splay root)."""
        chain = [x]
        while True:
            p = self._splay_parent(chain[-1])
            if p < 0:
                break
            chain.append(p)
        for y in reversed(chain):
            self._push(y)
        m = self.machine
        while True:
            p = self._splay_parent(x)
            if p < 0 or p == stop:
                return
            gp = self._splay_parent(p)
            if gp < 0 or gp == stop:
                self._rotate_up(x)
            elif (self.left[gp] == p) == (self.left[p] == x):
                m.move_to_parent()
                self._rotate_up(p)
                m.move_to_child(x)
                self._rotate_up(x)
            else:
                self._rotate_up(x)
                self._rotate_up(x)

    def _goto(self, x: int) -> None:
        self.machine.walk_to(x)

    def _access(self, x: int) -> None:
        """Make ``x`` the root of its path's virtual tree with no solid successor."""
        self._goto(x)
        self._splay(x)
        self.right[x] = -1
        m = self.machine
        path = self.path_of[x]
        while True:
            w = m.state.parent[x]
            if w < 0 or self.path_of[w] != path:
                return
            m.move_to_parent()
            self._splay(w)
            self.right[w] = x
            m.move_to_child(x)
            self._rotate_up(x)

    def _evert(self, x: int) -> None:
        self._access(x)
        self.rev[x] = not self.rev[x]

    # -- preferred-path surgery --

    def _relabel(self, verts: Iterable[int], top: int) -> None:
        for x in verts:
            self.path_of[x] = top

    def _check_session(self) -> None:
        if not self.machine.in_session:
            raise RuntimeError("path surgery needs an open search session on the machine")

    def cut_path(self, p: int, d: int) -> tuple[int, int]:
        """Split path ``p`` into reference depths ``< d`` and ``>= d``."""
        self._check_session()
        if self.path_of[p] != p:
            raise KeyError(f"no preferred path with id {p}")
        chain = self.nodes[p]
        lo, hi = self.depth_of[chain[0]], self.depth_of[chain[-1]]
        if not lo < d <= hi:
            raise ValueError(f"cut depth {d} outside ({lo}, {hi}]")
        k = d - lo
        top_part, bottom = chain[:k], chain[k:]
        self._cut(top_part, bottom)
        return p, bottom[0]

    def _cut(self, top_part: list[int], bottom: list[int]) -> None:
        p = top_part[0]
        b_top = bottom[0]
        crossings = sorted(
            (a, b) for b in bottom for a in self.minor_adj[b] if self.depth_of[a] < self.depth_of[b_top] and self.path_of[a] == p
        )
        if not 1 <= len(crossings) <= 2:
            raise AssertionError(f"cut crosses {len(crossings)} minor edges")
        if len(crossings) == 1:
            (a1, b1), = crossings
            self._evert(b1)
            self._access(a1)
            self._push(a1)
            assert self.left[a1] == b1, "crossing edge is not the solid predecessor"
            self.left[a1] = -1
        else:
            (a1, b1), (a2, b2) = crossings
            self._evert(a1)
            self._access(a2)
            self._goto(a1)
            self._splay(a1, stop=a2)
            self._push(a1)
            assert self.right[a1] >= 0
            self.right[a1] = -1
            self.minor_adj[a1].add(a2)
            self.minor_adj[a2].add(a1)
        for a, b in crossings:
            self.minor_adj[a].discard(b)
            self.minor_adj[b].discard(a)
        self.nodes[p] = top_part
        self.nodes[b_top] = bottom
        self._relabel(bottom, b_top)
        self.last_counts = OpCounts(cuts=len(crossings), links=len(crossings) - 1)

    def merge_paths(self, top: int, bottom: int) -> int:
        self._check_session()
        for q in (top, bottom):
            if self.path_of[q] != q:
                raise KeyError(f"no preferred path with id {q}")
        if self.reference.parent[bottom] != self.nodes[top][-1]:
            raise ValueError("the deepest node of top is not the reference parent of bottom's top node")
        self._merge(top, bottom)
        return top

    def _nearest_member(self, x: int, top: int) -> int:
        """First vertex of path ``top`` on the G-path from ``x`` to ``top``."""
        direction = self.topology.direction
        while self.path_of[x] != top:
            x = direction(x, top)
        return x

    def _merge(self, top: int, c: int) -> None:
        attach = [(a, x) for a, x in self.outer[c] if self.path_of[a] == top]
        pairs = sorted((a, self._nearest_member(x, c)) for a, x in attach)
        if len(pairs) == 1:
            (a1, b1), = pairs
            self._access(a1)
            self._evert(b1)
            links, cuts = 1, 0
        elif len(pairs) == 2:
            (a1, b1), (a2, b2) = pairs
            self._evert(a1)
            self._access(a2)
            self._evert(b1)
            self._access(b2)
            self._push(a1)
            assert self.left[a2] == a1 and self.right[a1] < 0
            self.right[a1] = b2
            self.minor_adj[a1].discard(a2)
            self.minor_adj[a2].discard(a1)
            self.minor_adj[a2].add(b2)
            self.minor_adj[b2].add(a2)
            links, cuts = 2, 1
        else:
            raise AssertionError(f"region of {c} has {len(pairs)} attachments in the top path")
        self.minor_adj[a1].add(b1)
        self.minor_adj[b1].add(a1)
        chain = self.nodes.pop(c)
        self.nodes[top] = self.nodes[top] + chain
        self._relabel(chain, top)
        self.last_counts = OpCounts(cuts=cuts, links=links)

    # -- searching --

    def search(self, v: int) -> SearchStats:
        self.topology.check_vertex(v)
        t0 = time.perf_counter_ns()
        m = self.machine
        before = m.total_cost
        m.begin_search(v)
        changes = 0
        for e in self.preferred.record_access(v).events:
            old = e.old if e.old != UNDEFINED else self._first_child[e.node]
            if old == e.new:
                continue
            changes += 1
            y = e.node
            p = self.path_of[y]
            chain = self.nodes[p]
            k = self.depth_of[y] - self.depth_of[chain[0]] + 1
            self._cut(chain[:k], chain[k:])
            self._merge(p, e.new)
        self._access(v)
        m.end_search()
        self.targets.append(v)
        self.total_path_changes += changes
        if self.audit_each:
            bad = self.audit()
            if bad is not None:
                raise AssertionError(f"audit failed after searching {v}: {bad}")
        return SearchStats(v, m.total_cost - before, changes + 1, changes, time.perf_counter_ns() - t0)

    def run(self, seq: Iterable[int]) -> list[SearchStats]:
        return [self.search(v) for v in seq]

    def trace_text(self) -> str:
        return format_trace(self.machine, self.targets)

    # -- inspection --

    def _inorder(self, r: int) -> list[int]:
        out: list[int] = []
        stack: list[tuple[int, bool, bool]] = [(r, False, False)]
        while stack:
            x, flip, emit = stack.pop()
            if emit:
                out.append(x)
                continue
            flip = flip ^ self.rev[x]
            l, rr = (self.right[x], self.left[x]) if flip else (self.left[x], self.right[x])
            if rr >= 0:
                stack.append((rr, flip, False))
            stack.append((x, flip, True))
            if l >= 0:
                stack.append((l, flip, False))
        return out

    def solid_paths(self, top: int) -> list[list[int]]:
        """In-order vertex lists of the splay trees making up one path's virtual tree."""
        return [self._inorder(x) for x in self.nodes[top] if self._splay_parent(x) < 0]

    @property
    def paths(self) -> dict[int, PreferredPath]:
        out = {}
        for top, chain in self.nodes.items():
            edges = tuple(sorted((a, b) for a in chain for b in self.minor_adj[a] if a < b))
            out[top] = PreferredPath(
                top,
                tuple(chain),
                self.depth_of[chain[0]],
                self.depth_of[chain[-1]],
                MinorTree(frozenset(chain), edges),
                tuple(tuple(s) for s in self.solid_paths(top)),
            )
        return out

    def audit(self) -> str | None:
        """``None`` when every structural invariant holds, else a description of the first failure."""
        g = self.topology
        st = self.machine.state
        tree = st.snapshot()
        bad = validate_search_tree(g, tree)
        if bad is not None:
            return f"composite tree invalid: {bad}"
        p = self.reference
        # partition implied by the effective preferred children
        seen = 0
        for top in p.order:
            if p.parent[top] >= 0 and self.preferred.effective(p.parent[top]) == top:
                continue
            chain = [top]
            while True:
                c = self.preferred.effective(chain[-1])
                if c == UNDEFINED:
                    break
                chain.append(c)
            if self.nodes.get(top) != chain:
                return f"path at {top} is {self.nodes.get(top)}, preferred children give {chain}"
            if any(self.path_of[x] != top for x in chain):
                return f"path_of disagrees with the path at {top}"
            seen += len(chain)
        if seen != g.n or len(self.nodes) != sum(
            1 for t in p.order if p.parent[t] < 0 or self.preferred.effective(p.parent[t]) != t
        ):
            return "paths do not partition the vertices"
        for top, chain in self.nodes.items():
            if not is_steiner_closed(g, chain):
                return f"path {top} is not Steiner-closed"
            expect = minor_tree(g, chain).edges
            got = tuple(sorted((a, b) for a in chain for b in self.minor_adj[a] if a < b))
            if got != expect:
                return f"minor of path {top} is {got}, expected {expect}"
            vroot = [x for x in chain if st.parent[x] < 0 or self.path_of[st.parent[x]] != top]
            if len(vroot) != 1:
                return f"path {top} has {len(vroot)} virtual roots"
            if sorted(tree.subtree(vroot[0])) != sorted(p.subtree(top)):
                return f"region under path {top} differs from its reference subtree"
            for x in chain:
                for y in (self.left[x], self.right[x]):
                    if y >= 0 and (st.parent[y] != x or self.path_of[y] != top):
                        return f"splay child {y} of {x} is not its composite child"
            for x in chain:
                if self._splay_parent(x) >= 0:
                    continue
                solid = self._inorder(x)
                for a, b in zip(solid, solid[1:]):
                    if b not in self.minor_adj[a]:
                        return f"solid path {solid} skips a minor edge at {a}-{b}"
                span = sum(g.distance(a, b) for a, b in zip(solid, solid[1:]))
                if span != g.distance(solid[0], solid[-1]):
                    return f"solid path {solid} is not a path of G"
                w = st.parent[x]
                if w >= 0 and self.path_of[w] == top and solid[0] not in self.minor_adj[w]:
                    return f"path-parent {w} of solid path {solid} is not adjacent to its top"
        return None


def tango_new(g: Topology, **kw) -> TangoTree:
    return TangoTree(g, **kw)
