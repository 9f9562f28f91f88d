"""Hand-built instances on the 12-vertex sample tree, letters a..l mapped to 0..11."""

from __future__ import annotations

from .core import SearchTree, Topology

LETTERS = "abcdefghijkl"


def v(name: str) -> int:
    return LETTERS.index(name)


def name(x: int) -> str:
    return LETTERS[x]


def _tree(root: str, children: dict[str, str]) -> SearchTree:
    kids = {v(p): [v(c) for c in cs] for p, cs in children.items()}
    return SearchTree.from_children(v(root), kids, n=len(LETTERS))


SAMPLE_EDGES = ["ac", "cb", "cd", "dg", "gf", "fe", "fh", "di", "ij", "jk", "jl"]


def sample_topology() -> Topology:
    return Topology.from_edges(len(LETTERS), [(v(a), v(b)) for a, b in SAMPLE_EDGES])


def sample_search_tree() -> SearchTree:
    return _tree("c", {"c": "abf", "f": "ehi", "i": "dk", "d": "g", "k": "l", "l": "j"})


def sample_rotated_i() -> SearchTree:
    """``sample_search_tree`` after rotating ``i``."""
    return _tree("c", {"c": "abi", "i": "fk", "f": "ehd", "d": "g", "k": "l", "l": "j"})


def sample_rotated_i_d() -> SearchTree:
    """``sample_rotated_i`` after rotating ``d``."""
    return _tree("c", {"c": "abi", "i": "dk", "d": "f", "f": "ehg", "k": "l", "l": "j"})


def sample_steiner_closed() -> SearchTree:
    return _tree("c", {"c": "abf", "f": "ehd", "d": "gi", "i": "k", "k": "j", "j": "l"})


def sample_centroid() -> SearchTree:
    return _tree("d", {"d": "cfj", "c": "ab", "f": "egh", "j": "ikl"})


def swapped(t: SearchTree, a: int, b: int) -> SearchTree:
    """Exchange the labels of ``a`` and ``b`` in ``t`` (usually invalidates it)."""
    perm = list(range(t.n))
    perm[a], perm[b] = b, a
    parent = [0] * t.n
    for x, p in enumerate(t.parent):
        parent[perm[x]] = -1 if p < 0 else perm[p]
    return SearchTree(tuple(parent))
