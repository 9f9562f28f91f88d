"""Trees, search trees on trees, and the rotation primitive.

A *topology* is the fixed unrooted tree ``G`` whose vertices are searched.
A *search tree* on ``G`` is a rooted tree over the same vertices in which
the child subtrees of every node ``v`` are exactly the connected components
of ``G`` restricted to ``subtree(v) - {v}``.

Vertices are dense integers ``0..n-1``.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence


class TopologyError(ValueError):
    """Malformed edge-list document."""


class DuplicateEdgeError(TopologyError):
    pass


class DisconnectedError(TopologyError):
    pass


class CycleError(TopologyError):
    pass


class VertexRangeError(TopologyError):
    pass


class RotationError(ValueError):
    pass


class InvalidSearchTree(ValueError):
    def __init__(self, violation: "Violation"):
        super().__init__(f"invalid search tree: {violation}")
        self.violation = violation


@dataclass(frozen=True)
class Topology:
    """An unrooted tree on vertices ``0..n-1``.

    ``adjacency[v]`` is the sorted tuple of neighbours of ``v``.  Build one
    with :func:`from_edges` or :func:`parse_topology`; both validate.
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Topology":
        if n < 1:
            raise TopologyError("a tree needs at least one vertex")
        adj: list[set[int]] = [set() for _ in range(n)]
        count = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise VertexRangeError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise CycleError(f"self-loop at {u}")
            if v in adj[u]:
                raise DuplicateEdgeError(f"duplicate edge ({u}, {v})")
            adj[u].add(v)
            adj[v].add(u)
            count += 1
        # n-1 edges and connected <=> tree; with more edges and connected there is a cycle
        seen = _reachable(adj, 0)
        if len(seen) != n:
            if count >= n - 1:
                raise CycleError("edge set contains a cycle")
            raise DisconnectedError(f"graph is disconnected ({len(seen)} of {n} reachable)")
        if count != n - 1:
            raise CycleError("edge set contains a cycle")
        return cls(n, tuple(tuple(sorted(a)) for a in adj))

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    # -- rooted view of G (rooted at vertex 0) used by the oracles below --

    @cached_property
    def _dfs(self):
        n = self.n
        parent = [-1] * n
        depth = [0] * n
        tin = [0] * n
        tout = [0] * n
        order: list[int] = []
        children: list[list[int]] = [[] for _ in range(n)]
        stack = [(0, 0)]
        parent[0] = -1
        while stack:
            v, i = stack.pop()
            if i == 0:
                tin[v] = len(order)
                order.append(v)
            nbrs = self.adjacency[v]
            while i < len(nbrs) and nbrs[i] == parent[v]:
                i += 1
            if i < len(nbrs):
                stack.append((v, i + 1))
                c = nbrs[i]
                parent[c] = v
                depth[c] = depth[v] + 1
                children[v].append(c)
                stack.append((c, 0))
            else:
                tout[v] = len(order) - 1
        child_tins = [[tin[c] for c in cs] for cs in children]
        return parent, depth, tin, tout, order, children, child_tins

    @cached_property
    def _sparse(self) -> list[list[int]]:
        # range-min over dfs order keyed by depth, for O(1) lca
        _, depth, _, _, order, _, _ = self._dfs
        table = [list(order)]
        j = 1
        while (1 << j) <= self.n:
            prev = table[-1]
            half = 1 << (j - 1)
            row = []
            for i in range(self.n - (1 << j) + 1):
                a, b = prev[i], prev[i + half]
                row.append(a if depth[a] <= depth[b] else b)
            table.append(row)
            j += 1
        return table

    def lca(self, u: int, v: int) -> int:
        if u == v:
            return u
        gparent, depth, tin, _, _, _, _ = self._dfs
        a, b = tin[u], tin[v]
        if a > b:
            a, b = b, a
        # the shallowest vertex in order[a+1..b] is a child of the lca
        lo, hi = a + 1, b
        k = (hi - lo + 1).bit_length() - 1
        row = self._sparse[k]
        x, y = row[lo], row[hi - (1 << k) + 1]
        w = x if depth[x] <= depth[y] else y
        return gparent[w]

    def distance(self, u: int, v: int) -> int:
        depth = self._dfs[1]
        return depth[u] + depth[v] - 2 * depth[self.lca(u, v)]

    def direction(self, x: int, t: int) -> int:
        """Neighbour of ``x`` on the path towards ``t``."""
        if x == t:
            raise ValueError("direction(x, x) is undefined")
        gparent, _, tin, tout, _, children, child_tins = self._dfs
        tt = tin[t]
        if tin[x] < tt <= tout[x]:
            return children[x][bisect.bisect_right(child_tins[x], tt) - 1]
        return gparent[x]

    def check_vertex(self, v: int) -> None:
        if not (isinstance(v, int) and 0 <= v < self.n):
            raise IndexError(f"vertex {v!r} out of range for n={self.n}")


def _reachable(adj: Sequence[Iterable[int]], start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def parse_topology(text: str) -> Topology:
    """Parse an edge-list document: ``n`` on the first line, then ``n-1`` lines ``u v``."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise TopologyError("empty document")
    try:
        n = int(lines[0])
        edges = []
        for ln in lines[1:]:
            u, v = ln.split()
            edges.append((int(u), int(v)))
    except ValueError as exc:
        raise TopologyError(f"malformed line: {exc}") from None
    return Topology.from_edges(n, edges)


def format_topology(g: Topology) -> str:
    return "".join([f"{g.n}\n"] + [f"{u} {v}\n" for u, v in g.edges])


def path_between(g: Topology, u: int, v: int) -> list[int]:
    g.check_vertex(u)
    g.check_vertex(v)
    gparent = g._dfs[0]
    w = g.lca(u, v)
    left = [u]
    while left[-1] != w:
        left.append(gparent[left[-1]])
    right = [v]
    while right[-1] != w:
        right.append(gparent[right[-1]])
    return left + right[-2::-1]


def direction(g: Topology, x: int, t: int) -> int:
    g.check_vertex(x)
    g.check_vertex(t)
    return g.direction(x, t)


def _virtual_tree(g: Topology, s: Iterable[int]) -> tuple[list[int], dict[int, int]]:
    """Vertices of ``s`` closed under pairwise lca, and their virtual parents."""
    tin = g._dfs[2]
    verts = sorted(set(s), key=tin.__getitem__)
    extra = {g.lca(a, b) for a, b in zip(verts, verts[1:])}
    allv = sorted(set(verts) | extra, key=tin.__getitem__)
    vparent = {allv[0]: -1}
    for a, b in zip(allv, allv[1:]):
        vparent[b] = g.lca(a, b)
    return allv, vparent


def convex_hull(g: Topology, s: Iterable[int]) -> frozenset[int]:
    """Vertices of the minimal subtree of ``g`` containing ``s``."""
    s = list(s)
    if not s:
        raise ValueError("convex hull of an empty set")
    for v in s:
        g.check_vertex(v)
    gparent = g._dfs[0]
    allv, vparent = _virtual_tree(g, s)
    hull = set(allv)
    for v in allv:
        p = vparent[v]
        if p < 0:
            continue
        w = gparent[v]
        while w != p:
            hull.add(w)
            w = gparent[w]
    return frozenset(hull)


@dataclass(frozen=True)
class SearchTree:
    """A rooted tree over ``0..n-1`` given by its parent array (root has ``-1``)."""

    parent: tuple[int, ...]

    def __post_init__(self):
        roots = [v for v, p in enumerate(self.parent) if p == -1]
        if len(roots) != 1:
            raise ValueError(f"expected exactly one root, found {len(roots)}")
        n = len(self.parent)
        for v, p in enumerate(self.parent):
            if p != -1 and not (0 <= p < n) or p == v:
                raise ValueError(f"bad parent {p} for {v}")
        if len(self.order) != n:
            raise ValueError("parent array contains a cycle")

    @classmethod
    def from_children(cls, root: int, children: dict[int, Iterable[int]], n: int | None = None) -> "SearchTree":
        if n is None:
            n = 1 + max([root] + [c for cs in children.values() for c in cs] + list(children))
        parent = [-2] * n
        parent[root] = -1
        for p, cs in children.items():
            for c in cs:
                parent[c] = p
        if -2 in parent:
            raise ValueError("children map does not span all vertices")
        return cls(tuple(parent))

    @property
    def n(self) -> int:
        return len(self.parent)

    @cached_property
    def root(self) -> int:
        return self.parent.index(-1)

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        kids: list[list[int]] = [[] for _ in self.parent]
        for v, p in enumerate(self.parent):
            if p >= 0:
                kids[p].append(v)
        return tuple(tuple(k) for k in kids)

    @cached_property
    def order(self) -> tuple[int, ...]:
        """Vertices in breadth-first order from the root (children ascending)."""
        kids = self.children
        out = [self.root]
        i = 0
        while i < len(out):
            out.extend(kids[out[i]])
            i += 1
            if len(out) > len(self.parent):
                break
        return tuple(out)

    @cached_property
    def depth(self) -> tuple[int, ...]:
        """Depth of every node counted in nodes: the root has depth 1."""
        d = [0] * self.n
        for v in self.order:
            p = self.parent[v]
            d[v] = 1 if p < 0 else d[p] + 1
        return tuple(d)

    @cached_property
    def _euler(self) -> tuple[list[int], list[int]]:
        tin = [0] * self.n
        tout = [0] * self.n
        kids = self.children
        clock = 0
        stack = [(self.root, False)]
        while stack:
            v, done = stack.pop()
            if done:
                tout[v] = clock - 1
                continue
            tin[v] = clock
            clock += 1
            stack.append((v, True))
            for c in reversed(kids[v]):
                stack.append((c, False))
        return tin, tout

    def is_ancestor(self, a: int, b: int) -> bool:
        """True when ``a`` is an ancestor of ``b`` (or equal)."""
        tin, tout = self._euler
        return tin[a] <= tin[b] <= tout[a]

    def subtree(self, v: int) -> list[int]:
        out = [v]
        i = 0
        kids = self.children
        while i < len(out):
            out.extend(kids[out[i]])
            i += 1
        return out

    def ancestors(self, v: int) -> list[int]:
        """Root-to-``v`` path, inclusive."""
        out = [v]
        while self.parent[out[-1]] >= 0:
            out.append(self.parent[out[-1]])
        return out[::-1]


def height(t: SearchTree) -> int:
    return max(t.depth)


def format_search_tree(t: SearchTree) -> str:
    lines = [f"root {t.root}\n"]
    lines += [f"{v} {p}\n" for v, p in enumerate(t.parent)]
    return "".join(lines)


def parse_search_tree(text: str) -> SearchTree:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0][0] != "root":
        raise ValueError("search tree document must start with 'root r'")
    root = int(lines[0][1])
    parent = {}
    for parts in lines[1:]:
        v, p = int(parts[0]), int(parts[1])
        if v in parent:
            raise ValueError(f"vertex {v} listed twice")
        parent[v] = p
    n = len(parent)
    if sorted(parent) != list(range(n)):
        raise ValueError("vertex ids must be 0..n-1")
    t = SearchTree(tuple(parent[v] for v in range(n)))
    if t.root != root:
        raise ValueError(f"declared root {root} but parent array has root {t.root}")
    return t


@dataclass(frozen=True)
class Violation:
    node: int
    reason: str

    def __str__(self) -> str:
        return f"node {self.node}: {self.reason}"


def validate_search_tree(g: Topology, t: SearchTree) -> Violation | None:
    """Return ``None`` if ``t`` is a valid search tree on ``g``, else the first offending node.

    Nodes are examined top-down (breadth-first, children ascending); the
    reported node is the first whose child subtrees are not the components
    of its own subtree minus itself.
    """
    if t.n != g.n:
        return Violation(t.root, f"tree spans {t.n} vertices, topology has {g.n}")
    if _valid_fast(g, t):
        return None
    return _first_violation(g, t)


def check_search_tree(g: Topology, t: SearchTree) -> None:
    bad = validate_search_tree(g, t)
    if bad is not None:
        raise InvalidSearchTree(bad)


def _valid_fast(g: Topology, t: SearchTree) -> bool:
    # valid <=> every G-edge joins an ancestor/descendant pair and every subtree is G-connected
    for u, v in g.edges:
        if not (t.is_ancestor(u, v) or t.is_ancestor(v, u)):
            return False
    # with ancestor/descendant edges only, child subtrees can't touch each other,
    # so it suffices that every subtree is one component (size check)
    uf = list(range(g.n))
    size = [1] * g.n
    sub = [1] * g.n

    def find(x: int) -> int:
        while uf[x] != x:
            uf[x] = uf[uf[x]]
            x = uf[x]
        return x

    for v in reversed(t.order):
        for c in t.children[v]:
            sub[v] += sub[c]
        for w in g.adjacency[v]:
            if w != v and t.is_ancestor(v, w):
                a, b = find(v), find(w)
                if a != b:
                    uf[b] = a
                    size[a] += size[b]
        if size[find(v)] != sub[v]:
            return False
    return True


def _first_violation(g: Topology, t: SearchTree) -> Violation:
    kids = t.children
    for v in t.order:
        sub = set(t.subtree(v))
        sub.discard(v)
        comps = []
        left = set(sub)
        while left:
            start = left.pop()
            comp = {start}
            stack = [start]
            while stack:
                x = stack.pop()
                for y in g.adjacency[x]:
                    if y in left:
                        left.discard(y)
                        comp.add(y)
                        stack.append(y)
            comps.append(frozenset(comp))
        got = {frozenset(t.subtree(c)) for c in kids[v]}
        if got != set(comps):
            return Violation(v, "child subtrees do not match the components of subtree minus node")
    raise AssertionError("fast check failed but no violating node found")


class TreeState:
    """Mutable search tree supporting O(log deg) rotations.

    For every non-root node ``c`` the state keeps ``port[c]``: the unique
    ``G``-neighbour of ``parent[c]`` inside ``subtree(c)``.  ``child_at[p]``
    maps each such port back to the child, which is how a rotation finds the
    child that changes sides without scanning subtrees.
    """

    __slots__ = ("g", "parent", "port", "child_at", "root")

    def __init__(self, g: Topology, t: SearchTree):
        if t.n != g.n:
            raise ValueError("tree and topology sizes differ")
        self.g = g
        self.parent = list(t.parent)
        self.root = t.root
        self.port = [-1] * g.n
        self.child_at: list[dict[int, int]] = [{} for _ in range(g.n)]
        direction = g.direction
        for c, p in enumerate(t.parent):
            if p >= 0:
                x = direction(p, c)
                self.port[c] = x
                self.child_at[p][x] = c

    def children(self, v: int) -> list[int]:
        return sorted(self.child_at[v].values())

    def snapshot(self) -> SearchTree:
        return SearchTree(tuple(self.parent))

    def rotate(self, v: int) -> None:
        parent = self.parent
        p = parent[v]
        if p < 0:
            raise RotationError(f"cannot rotate the root {v}")
        port = self.port
        child_at = self.child_at
        gp = parent[p]
        x = self.g.direction(v, p)
        w = port[v]
        pv = child_at[v]
        u = pv.pop(x, -1)
        pp = child_at[p]
        del pp[w]
        if u >= 0:
            pp[w] = u
            parent[u] = p
            port[u] = w
        if gp >= 0:
            port[v] = port[p]
            child_at[gp][port[p]] = v
        else:
            port[v] = -1
            self.root = v
        parent[v] = gp
        pv[x] = p
        parent[p] = v
        port[p] = x


def rotate(g: Topology, t: SearchTree, v: int) -> SearchTree:
    """Rotate ``v`` above its parent; returns a new tree."""
    g.check_vertex(v)
    if t.parent[v] < 0:
        raise RotationError(f"cannot rotate the root {v}")
    p = t.parent[v]
    parent = list(t.parent)
    # only the child of v holding v's G-neighbour toward p changes sides
    x = g.direction(v, p)
    if x != p:
        u = x
        while parent[u] != v:
            u = parent[u]
        parent[u] = p
    parent[v] = parent[p]
    parent[p] = v
    return SearchTree(tuple(parent))
