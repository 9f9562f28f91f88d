"""Preferred children on a fixed reference tree and the interleave lower bound."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .core import SearchTree, Topology, check_search_tree

UNDEFINED = -1


class Change(NamedTuple):
    node: int
    old: int  # UNDEFINED for a first definition
    new: int


@dataclass
class AccessChanges:
    """Preferred-child updates caused by one access, ordered from the reference root down."""

    events: list[Change] = field(default_factory=list)

    @property
    def changed(self) -> list[int]:
        """Nodes whose preferred child switched between two defined values."""
        return [e.node for e in self.events if e.old != UNDEFINED]

    @property
    def first(self) -> list[int]:
        return [e.node for e in self.events if e.old == UNDEFINED]

    def __len__(self) -> int:
        return len(self.events)


class PreferredState:
    def __init__(self, reference: SearchTree, g: Topology | None = None):
        if g is not None:
            check_search_tree(g, reference)
        self.reference = reference
        self.preferred = [UNDEFINED] * reference.n
        self._parent = reference.parent
        self._first_child = [cs[0] if cs else UNDEFINED for cs in reference.children]

    def record_access(self, x: int) -> AccessChanges:
        if not 0 <= x < self.reference.n:
            raise IndexError(f"vertex {x} out of range")
        pref = self.preferred
        parent = self._parent
        events: list[Change] = []
        fc = self._first_child[x]
        if fc != UNDEFINED and pref[x] != fc:
            events.append(Change(x, pref[x], fc))
            pref[x] = fc
        c, y = x, parent[x]
        while y >= 0:
            if pref[y] != c:
                events.append(Change(y, pref[y], c))
                pref[y] = c
            c, y = y, parent[y]
        events.reverse()
        return AccessChanges(events)

    def effective(self, y: int) -> int:
        """Preferred child with undefined resolved to the canonical (smallest) child."""
        p = self.preferred[y]
        return p if p != UNDEFINED else self._first_child[y]


def preferred_from_history(reference: SearchTree, history: Sequence[int]) -> list[int]:
    """Recompute every preferred child by scanning the access history backwards."""
    pref = [UNDEFINED] * reference.n
    for y in range(reference.n):
        for x in reversed(history):
            if x == y:
                kids = reference.children[y]
                pref[y] = kids[0] if kids else UNDEFINED
                break
            if y != x and reference.is_ancestor(y, x):
                c = x
                while reference.parent[c] != y:
                    c = reference.parent[c]
                pref[y] = c
                break
    return pref


@dataclass(frozen=True)
class InterleaveResult:
    total: int
    per_node: dict[int, int]
    first_definitions: int
    n: int

    @property
    def lower_bound(self) -> int:
        return self.total // 2 - self.n

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "per_node": {str(k): v for k, v in sorted(self.per_node.items())},
            "first_definitions": self.first_definitions,
            "lower_bound": self.lower_bound,
        }


def interleave_bound(g: Topology, p: SearchTree, x: Iterable[int]) -> InterleaveResult:
    tracker = PreferredState(p, g)
    per_node: dict[int, int] = {}
    first = 0
    for v in x:
        g.check_vertex(v)
        ch = tracker.record_access(v)
        for e in ch.events:
            if e.old == UNDEFINED:
                first += 1
            else:
                per_node[e.node] = per_node.get(e.node, 0) + 1
    return InterleaveResult(sum(per_node.values()), per_node, first, g.n)
