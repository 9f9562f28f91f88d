"""Deterministic tree and access-sequence generators."""

from __future__ import annotations

import numpy as np

from .core import SearchTree, Topology
from .steiner import reference_tree

TREE_SHAPES = ("path", "star", "caterpillar", "binary", "random")
SEQ_KINDS = ("uniform", "repeated", "sequential", "adversarial")


def tree_edges(shape: str, n: int, seed: int = 0) -> list[tuple[int, int]]:
    if n < 1:
        raise ValueError("n must be at least 1")
    if shape == "path":
        edges = [(i - 1, i) for i in range(1, n)]
    elif shape == "star":
        edges = [(0, i) for i in range(1, n)]
    elif shape == "caterpillar":
        # spine 0..k-1, every other vertex is a leg on a random spine vertex
        k = (n + 1) // 2
        rng = np.random.default_rng(seed)
        edges = [(i - 1, i) for i in range(1, k)]
        edges += [(int(rng.integers(0, k)), i) for i in range(k, n)]
    elif shape == "binary":
        edges = [((i - 1) // 2, i) for i in range(1, n)]
    elif shape == "random":
        rng = np.random.default_rng(seed)
        edges = [(int(rng.integers(0, i)), i) for i in range(1, n)]
    else:
        raise ValueError(f"unknown tree shape {shape!r}; expected one of {TREE_SHAPES}")
    return edges


def gen_tree(shape: str, n: int, seed: int = 0) -> Topology:
    return Topology.from_edges(n, tree_edges(shape, n, seed))


def random_search_tree(g: Topology, seed: int | np.random.Generator = 0) -> SearchTree:
    """Pick a uniform root in every component, recursively."""
    rng = np.random.default_rng(seed)
    u = rng.random(g.n).tolist()
    parent = [-1] * g.n
    removed = [False] * g.n
    stack = [(0, -1)]
    while stack:
        start, above = stack.pop()
        comp = [start]
        removed[start] = True
        i = 0
        while i < len(comp):
            for y in g.adjacency[comp[i]]:
                if not removed[y]:
                    removed[y] = True
                    comp.append(y)
            i += 1
        for x in comp:
            removed[x] = False
        # one component per vertex removed, so u is never exhausted
        r = comp[int(u.pop() * len(comp))]
        parent[r] = above
        removed[r] = True
        for y in g.adjacency[r]:
            if not removed[y]:
                stack.append((y, r))
    return SearchTree(tuple(parent))


def adversarial_sequence(p: SearchTree, m: int, seed: int = 0) -> list[int]:
    """Root-to-leaf walks in ``p`` that alternate between the two tallest children of every node.

    Every branching node on a walk then flips its preferred child each time it is passed.
    """
    rng = np.random.default_rng(seed)
    kids = p.children
    tall = [0] * p.n
    for y in reversed(p.order):
        tall[y] = 1 + max((tall[c] for c in kids[y]), default=0)
    pair = [sorted(k, key=lambda c: (-tall[c], c))[:2] for k in kids]
    turn = rng.integers(0, 2, p.n).tolist()
    out = []
    for _ in range(m):
        y = p.root
        while pair[y]:
            opts = pair[y]
            c = opts[turn[y] % len(opts)]
            turn[y] += 1
            y = c
        out.append(y)
    return out


def gen_seq(kind: str, g: Topology, m: int, seed: int = 0, reference: SearchTree | None = None) -> list[int]:
    if m < 1:
        raise ValueError("m must be at least 1")
    rng = np.random.default_rng(seed)
    if kind == "uniform":
        return rng.integers(0, g.n, m).tolist()
    if kind == "repeated":
        return [int(rng.integers(0, g.n))] * m
    if kind == "sequential":
        return [i % g.n for i in range(m)]
    if kind == "adversarial":
        p = reference_tree(g) if reference is None else reference
        return adversarial_sequence(p, m, seed)
    raise ValueError(f"unknown sequence kind {kind!r}; expected one of {SEQ_KINDS}")


def parse_sequence(text: str) -> list[int]:
    return [int(tok) for tok in text.split()]


def format_sequence(seq) -> str:
    return " ".join(str(int(v)) for v in seq) + "\n"
