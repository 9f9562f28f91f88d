"""Steiner-closed sets and trees, the closure transform, centroid trees and minors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import SearchTree, Topology, TreeState, _virtual_tree, check_search_tree, convex_hull


class NotSteinerClosed(ValueError):
    pass


@dataclass(frozen=True)
class SteinerSet:
    members: frozenset[int]
    hull: frozenset[int]
    hull_degrees: dict[int, int]

    @property
    def closed(self) -> bool:
        return all(self.hull_degrees[w] == 2 for w in self.hull - self.members)


def steiner_set(g: Topology, s: Iterable[int]) -> SteinerSet:
    members = frozenset(s)
    hull = convex_hull(g, members)
    degrees = {w: sum(1 for y in g.adjacency[w] if y in hull) for w in hull}
    return SteinerSet(members, hull, degrees)


def _virtual_degrees(g: Topology, s: Iterable[int]) -> tuple[list[int], dict[int, int], dict[int, int]]:
    verts, vparent = _virtual_tree(g, s)
    deg = dict.fromkeys(verts, 0)
    for v, p in vparent.items():
        if p >= 0:
            deg[v] += 1
            deg[p] += 1
    return verts, vparent, deg


def is_steiner_closed(g: Topology, s: Iterable[int]) -> bool:
    s = set(s)
    if not s:
        raise ValueError("empty vertex set")
    for v in s:
        g.check_vertex(v)
    # only branching points of the hull can have degree > 2, and those are
    # exactly the virtual-tree vertices; non-members there must have degree 2
    verts, _, deg = _virtual_degrees(g, s)
    return all(deg[w] == 2 for w in verts if w not in s)


class _PathHull:
    """Hull of the current root-to-node path, maintained under push/pop."""

    def __init__(self, g: Topology):
        self.g = g
        self.in_hull = [False] * g.n
        self.in_path = [False] * g.n
        self._undo: list[list[int]] = []

    def attach(self, v: int, p: int) -> tuple[int, list[int]]:
        """Walk from ``v`` toward ``p`` until the hull; returns (hit vertex, walked vertices)."""
        if p < 0 or self.in_hull[v]:
            return v, []
        direction = self.g.direction
        walked = [v]
        w = direction(v, p)
        while not self.in_hull[w]:
            walked.append(w)
            w = direction(w, p)
        return w, walked

    def push(self, v: int, walked: list[int]) -> None:
        for w in walked:
            self.in_hull[w] = True
        if not self.in_hull[v]:
            self.in_hull[v] = True
            walked = walked + [v]
        self.in_path[v] = True
        self._undo.append(walked)

    def pop(self, v: int) -> None:
        for w in self._undo.pop():
            self.in_hull[w] = False
        self.in_path[v] = False


def _closure_walk(g: Topology, t: SearchTree, *, fix: bool):
    """Depth-first scan of root paths; with ``fix`` rotate violators up (returns the tree)."""
    state = TreeState(g, t)
    hull = _PathHull(g)
    root = state.root
    stack: list[tuple[int, bool]] = [(root, False)]
    while stack:
        v, done = stack.pop()
        if done:
            hull.pop(v)
            continue
        p = state.parent[v]
        s, walked = hull.attach(v, p)
        if walked and not hull.in_path[s]:
            if not fix:
                return v
            # s is the only hull vertex whose degree grew, so it is the unique violator
            while state.parent[s] != p:
                state.rotate(s)
            v = s
            s, walked = hull.attach(v, p)
            assert not walked
        hull.push(v, walked)
        stack.append((v, True))
        for c in sorted(state.child_at[v].values(), reverse=True):
            stack.append((c, False))
    return state.snapshot() if fix else None


def is_steiner_closed_tree(g: Topology, t: SearchTree) -> bool:
    check_search_tree(g, t)
    return _closure_walk(g, t, fix=False) is None


def first_unclosed_node(g: Topology, t: SearchTree) -> int | None:
    """Shallowest node (in depth-first order) whose root path is not Steiner-closed."""
    return _closure_walk(g, t, fix=False)


def steinerify(g: Topology, t: SearchTree) -> SearchTree:
    """Rotate hull branching points into place until every root path is Steiner-closed.

    Depth-first over the tree (children ascending); when the path to ``v``
    first stops being closed, the offending branching vertex ``s`` is rotated
    up to sit directly under ``parent(v)`` and the traversal resumes at ``s``.
    """
    check_search_tree(g, t)
    return _closure_walk(g, t, fix=True)


def centroid_decomposition(g: Topology) -> SearchTree:
    n = g.n
    adj = g.adjacency
    removed = [False] * n
    parent = [-1] * n
    size = [0] * n
    stack: list[tuple[int, int]] = [(0, -1)]
    while stack:
        start, above = stack.pop()
        # bfs order of the component, then subtree sizes bottom-up
        order = [start]
        bparent = {start: -1}
        i = 0
        while i < len(order):
            x = order[i]
            i += 1
            for y in adj[x]:
                if not removed[y] and y != bparent[x]:
                    bparent[y] = x
                    order.append(y)
        total = len(order)
        for x in reversed(order):
            size[x] = 1 + sum(size[y] for y in adj[x] if not removed[y] and y != bparent[x])
        best, best_load = -1, total + 1
        for x in order:
            load = total - size[x]
            for y in adj[x]:
                if not removed[y] and y != bparent[x]:
                    load = max(load, size[y])
            if load < best_load or (load == best_load and x < best):
                best, best_load = x, load
        # both centroids (if two) have the same max load; the tie-break keeps the smaller id
        c = best
        parent[c] = above
        removed[c] = True
        for y in sorted(adj[c], reverse=True):
            if not removed[y]:
                stack.append((y, c))
    return SearchTree(tuple(parent))


def reference_tree(g: Topology) -> SearchTree:
    return steinerify(g, centroid_decomposition(g))


@dataclass(frozen=True)
class MinorTree:
    vertices: frozenset[int]
    edges: tuple[tuple[int, int], ...]

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def is_tree(self) -> bool:
        if len(self.edges) != len(self.vertices) - 1:
            return False
        adj = self.adjacency()
        start = next(iter(self.vertices))
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(self.vertices)


def minor_tree(g: Topology, s: Iterable[int]) -> MinorTree:
    s = frozenset(s)
    if not is_steiner_closed(g, s):
        raise NotSteinerClosed(f"set of {len(s)} vertices is not Steiner-closed")
    verts, vparent, _ = _virtual_degrees(g, s)
    vadj: dict[int, list[int]] = {x: [] for x in verts}
    for x, p in vparent.items():
        if p >= 0:
            vadj[x].append(p)
            vadj[p].append(x)
    # splice out the non-members, each of which has exactly two virtual neighbours
    edges = []
    for x in s:
        for w in vadj[x]:
            prev = x
            while w not in s:
                a, b = vadj[w]
                prev, w = w, (b if a == prev else a)
            if x < w:
                edges.append((x, w))
    return MinorTree(s, tuple(sorted(edges)))


def minor_edges_by_definition(g: Topology, s: Iterable[int]) -> list[tuple[int, int]]:
    """Pairs of members with no other member strictly inside their connecting path."""
    from .core import path_between

    s = sorted(set(s))
    members = set(s)
    out = []
    for i, a in enumerate(s):
        for b in s[i + 1 :]:
            if not any(x in members for x in path_between(g, a, b)[1:-1]):
                out.append((a, b))
    return out


def split_components(g: Topology, pi: Sequence[int], i: int) -> int:
    """Components of ``CH(pi) - CH(pi[i:])``; an empty suffix has an empty hull."""
    pi = list(pi)
    if not pi or len(set(pi)) != len(pi):
        raise ValueError("malformed path: empty or repeated vertices")
    if not 0 <= i <= len(pi):
        raise ValueError(f"split index {i} out of range for a path of {len(pi)} vertices")
    whole = convex_hull(g, pi)
    rest = set(whole) - (convex_hull(g, pi[i:]) if i < len(pi) else frozenset())
    count = 0
    while rest:
        count += 1
        stack = [rest.pop()]
        while stack:
            x = stack.pop()
            for y in g.adjacency[x]:
                if y in rest:
                    rest.discard(y)
                    stack.append(y)
    return count
