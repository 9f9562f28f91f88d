"""Cost-accounted execution of finger programs on a search tree.

Each unit operation (move the finger up, move it to a child, rotate at the
finger) costs exactly one.  Searches run in sessions: ``begin_search``
puts the finger on the current root, and ``end_search`` is only allowed
once the target has been under the finger.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

from .core import SearchTree, Topology, TreeState, check_search_tree, validate_search_tree

DEBUG_MAX_N = 512


class Kind(str, Enum):
    MOVE_TO_PARENT = "P"
    MOVE_TO_CHILD = "C"
    ROTATE_HERE = "R"


class UnitOp(NamedTuple):
    kind: Kind
    child: int = -1

    def __str__(self) -> str:
        return f"C {self.child}" if self.kind is Kind.MOVE_TO_CHILD else self.kind.value


MOVE_TO_PARENT = UnitOp(Kind.MOVE_TO_PARENT)
ROTATE_HERE = UnitOp(Kind.ROTATE_HERE)


def move_to_child(c: int) -> UnitOp:
    return UnitOp(Kind.MOVE_TO_CHILD, c)


class IllegalOp(RuntimeError):
    """An op that is not legal in the machine's current state."""

    def __init__(self, msg: str, index: int | None = None):
        super().__init__(msg if index is None else f"op {index}: {msg}")
        self.index = index


class SessionError(RuntimeError):
    pass


class ResetMode(str, Enum):
    FREE = "free"
    PAID = "paid"


@dataclass
class CostReport:
    per_search: list[int] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(self.per_search)

    def to_json(self) -> str:
        return json.dumps({"per_search": self.per_search, "total": self.total})

    @classmethod
    def from_json(cls, text: str) -> "CostReport":
        data = json.loads(text)
        report = cls(list(data["per_search"]))
        if report.total != data["total"]:
            raise ValueError("total does not match per_search")
        return report


class GstMachine:
    """A search tree with one finger and a unit-cost ledger.

    ``reset`` selects what happens between searches: ``free`` teleports the
    finger to the root, ``paid`` makes ``end_search`` walk it back up with
    paid parent moves.  ``debug`` re-validates the whole tree after every op.
    """

    def __init__(
        self,
        g: Topology,
        t0: SearchTree,
        *,
        reset: ResetMode | str = ResetMode.FREE,
        record_trace: bool = True,
        debug: bool = False,
    ):
        check_search_tree(g, t0)
        self.topology = g
        self.state = TreeState(g, t0)
        self.finger = t0.root
        self.total_cost = 0
        self.reset = ResetMode(reset)
        self.record_trace = record_trace
        self.trace: list[tuple[int, UnitOp]] = []
        self.per_search: list[int] = []
        self.debug = debug and g.n <= DEBUG_MAX_N
        self.target: int | None = None
        self.touched = False
        self._session_start = 0

    # -- inspection --

    @property
    def tree(self) -> SearchTree:
        return self.state.snapshot()

    @property
    def root(self) -> int:
        return self.state.root

    @property
    def in_session(self) -> bool:
        return self.target is not None

    def parent_of(self, v: int) -> int:
        return self.state.parent[v]

    def report(self) -> CostReport:
        return CostReport(list(self.per_search))

    # -- sessions --

    def begin_search(self, target: int) -> None:
        if self.target is not None:
            raise SessionError("a search session is already open")
        self.topology.check_vertex(target)
        self.target = target
        self.finger = self.state.root
        self.touched = self.finger == target
        self._session_start = self.total_cost

    def end_search(self) -> int:
        if self.target is None:
            raise SessionError("no open search session")
        if not self.touched:
            raise SessionError(f"search for {self.target} ended without touching it")
        if self.reset is ResetMode.PAID:
            while self.state.parent[self.finger] >= 0:
                self.move_to_parent()
        cost = self.total_cost - self._session_start
        self.per_search.append(cost)
        self.target = None
        return cost

    # -- unit ops --

    def apply(self, op: UnitOp) -> None:
        if op.kind is Kind.MOVE_TO_PARENT:
            self.move_to_parent()
        elif op.kind is Kind.MOVE_TO_CHILD:
            self.move_to_child(op.child)
        elif op.kind is Kind.ROTATE_HERE:
            self.rotate()
        else:
            raise IllegalOp(f"unknown op {op!r}")

    def _charge(self, op: UnitOp) -> None:
        if self.target is None:
            raise IllegalOp("op outside a search session")
        self.total_cost += 1
        if self.record_trace:
            self.trace.append((len(self.per_search), op))
        if self.finger == self.target:
            self.touched = True
        if self.debug:
            bad = validate_search_tree(self.topology, self.state.snapshot())
            if bad is not None:
                raise AssertionError(f"tree became invalid: {bad}")

    def move_to_parent(self) -> None:
        p = self.state.parent[self.finger]
        if p < 0:
            raise IllegalOp("MoveToParent at the root")
        if self.target is None:
            raise IllegalOp("op outside a search session")
        self.finger = p
        self._charge(MOVE_TO_PARENT)

    def move_to_child(self, c: int) -> None:
        if not (0 <= c < self.topology.n) or self.state.parent[c] != self.finger:
            raise IllegalOp(f"{c} is not a child of the finger {self.finger}")
        if self.target is None:
            raise IllegalOp("op outside a search session")
        self.finger = c
        self._charge(move_to_child(c))

    def rotate(self) -> None:
        if self.state.parent[self.finger] < 0:
            raise IllegalOp("RotateHere at the root")
        if self.target is None:
            raise IllegalOp("op outside a search session")
        self.state.rotate(self.finger)
        self._charge(ROTATE_HERE)

    def walk_to(self, x: int) -> None:
        """Move the finger to ``x`` along the tree path (through their lca)."""
        parent = self.state.parent
        up = []
        a = self.finger
        down = []
        b = x
        # climb both until they meet; depths aren't stored so mark ancestors of the finger
        anc = {a}
        while parent[a] >= 0:
            a = parent[a]
            anc.add(a)
        while b not in anc:
            down.append(b)
            b = parent[b]
        a = self.finger
        while a != b:
            up.append(a)
            a = parent[a]
        for _ in up:
            self.move_to_parent()
        for c in reversed(down):
            self.move_to_child(c)


def run_sequence(m: GstMachine, program) -> None:
    """Execute ``program``: an iterable of ``("S", v)``, ``("E",)`` or UnitOp items."""
    for item in program:
        if isinstance(item, UnitOp):
            m.apply(item)
        elif item[0] == "S":
            m.begin_search(item[1])
        elif item[0] == "E":
            m.end_search()
        else:
            raise ValueError(f"unknown program item {item!r}")


def format_trace(m: GstMachine, targets: list[int]) -> str:
    """Serialize the machine's trace; ``targets`` are the searched vertices in order."""
    if not m.record_trace:
        raise ValueError("machine was created with record_trace=False")
    lines = []
    ops_by_search: list[list[UnitOp]] = [[] for _ in targets]
    for idx, op in m.trace:
        ops_by_search[idx].append(op)
    for t, ops in zip(targets, ops_by_search):
        lines.append(f"S {t}")
        lines.extend(str(op) for op in ops)
        lines.append("E")
    return "".join(ln + "\n" for ln in lines)


def parse_trace(text: str) -> list:
    items: list = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts:
            continue
        tag = parts[0]
        try:
            if tag == "S" and len(parts) == 2:
                items.append(("S", int(parts[1])))
            elif tag == "E" and len(parts) == 1:
                items.append(("E",))
            elif tag == "P" and len(parts) == 1:
                items.append(MOVE_TO_PARENT)
            elif tag == "R" and len(parts) == 1:
                items.append(ROTATE_HERE)
            elif tag == "C" and len(parts) == 2:
                items.append(move_to_child(int(parts[1])))
            else:
                raise ValueError(raw)
        except ValueError:
            raise ValueError(f"line {lineno}: malformed trace entry {raw!r}") from None
    return items


def replay(g: Topology, t0: SearchTree, trace: str, *, reset: ResetMode | str = ResetMode.FREE) -> tuple[CostReport, SearchTree]:
    """Re-execute a trace document; returns the cost report and the final tree.

    An illegal entry raises :class:`IllegalOp` whose ``index`` is the
    zero-based position of the entry among the trace items.
    """
    m = GstMachine(g, t0, reset=reset, record_trace=False)
    for k, item in enumerate(parse_trace(trace)):
        try:
            run_sequence(m, [item])
        except (IllegalOp, SessionError, IndexError) as exc:
            raise IllegalOp(str(exc), k) from None
    if m.in_session:
        raise IllegalOp("trace ends inside an open search", len(parse_trace(trace)))
    return m.report(), m.tree
