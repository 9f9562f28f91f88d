"""Compiled twin of :class:`gstree.tango.TangoTree` for large benchmark runs.

Same algorithm, same op sequence, one flat ``int64`` array instead of
objects.  The test suite checks that both produce identical per-search
costs, traces and final trees.  No legality checks happen in here;
replaying a recorded trace through :mod:`gstree.machine` is the
independent check.

All state lives in ``M``.  Its first ``HEADER`` cells hold scalars and the
offsets of the per-vertex tables, so every jitted helper takes just ``M``
(passing many arrays makes numba pay reference counting on each call).
"""

from __future__ import annotations

import time

import numpy as np
from numba import njit

from .core import SearchTree, Topology, TreeState
from .machine import Kind, UnitOp
from .tango import SearchStats, TangoTree

# scalar cells
FINGER, COST, ROOT, STAMP, TLEN, RECORD, ITOTAL, IFIRST, PAID, N, W, TCAP = range(12)
# table offsets
(
    ADJ_OFF, ADJ, GPAR, TIN, TOUT, GCH_OFF, GCH, GCH_TIN,
    PPAR, PDEPTH, PFIRST, PREF,
    PARENT, PORT, CHILD_AT,
    PATH_OF, BOTTOM, MADJ, MDEG, OUTER, NOUTER,
    LEFT, RIGHT, REV,
    MARK, BUF, ABUF, SBUF, PAIRS, TRACE,
) = range(12, 42)
HEADER = 42
TABLES = [
    "adj_off", "adj", "gpar", "tin", "tout", "gch_off", "gch", "gch_tin",
    "ppar", "pdepth", "pfirst", "pref",
    "parent", "port", "child_at",
    "path_of", "bottom", "madj", "mdeg", "outer", "nouter",
    "left", "right", "rev",
    "mark", "buf", "abuf", "sbuf", "pairs", "trace",
]


@njit(cache=True, inline="always")
def _direction(M, x, t):
    tin = M[TIN]
    tt = M[tin + t]
    if M[tin + x] < tt and tt <= M[M[TOUT] + x]:
        off = M[GCH_OFF]
        lo = M[off + x]
        hi = M[off + x + 1]
        gt = M[GCH_TIN]
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if M[gt + mid] <= tt:
                lo = mid
            else:
                hi = mid
        return M[M[GCH] + lo]
    return M[M[GPAR] + x]


@njit(cache=True, inline="always")
def _slot(M, a, x):
    """Index of the neighbour ``x`` in ``a``'s adjacency block."""
    off = M[ADJ_OFF]
    adj = M[ADJ]
    lo = M[off + a]
    hi = M[off + a + 1] - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if M[adj + mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(cache=True, inline="always")
def _record(M, kind, child):
    M[COST] += 1
    if M[RECORD]:
        M[M[TRACE] + M[TLEN]] = kind + 3 * (child + 1)
        M[TLEN] += 1


@njit(cache=True, inline="always")
def _move_up(M):
    M[FINGER] = M[M[PARENT] + M[FINGER]]
    _record(M, 0, -1)


@njit(cache=True, inline="always")
def _move_down(M, c):
    M[FINGER] = c
    _record(M, 1, c)


@njit(cache=True)
def _rotate(M):
    par = M[PARENT]
    port = M[PORT]
    cat = M[CHILD_AT]
    v = M[FINGER]
    p = M[par + v]
    gp = M[par + p]
    x = _direction(M, v, p)
    w = M[port + v]
    sx = cat + _slot(M, v, x)
    sw = cat + _slot(M, p, w)
    u = M[sx]
    M[sw] = -1
    if u >= 0:
        M[sw] = u
        M[par + u] = p
        M[port + u] = w
    if gp >= 0:
        pp = M[port + p]
        M[port + v] = pp
        M[cat + _slot(M, gp, pp)] = v
    else:
        M[port + v] = -1
        M[ROOT] = v
    M[par + v] = gp
    M[sx] = p
    M[par + p] = v
    M[port + p] = x
    _record(M, 2, -1)


@njit(cache=True)
def _goto(M, x):
    par = M[PARENT]
    mark = M[MARK]
    buf = M[BUF]
    M[STAMP] += 1
    stamp = M[STAMP]
    a = M[FINGER]
    while a >= 0:
        M[mark + a] = stamp
        a = M[par + a]
    b = x
    nd = 0
    while M[mark + b] != stamp:
        M[buf + nd] = b
        nd += 1
        b = M[par + b]
    while M[FINGER] != b:
        _move_up(M)
    for i in range(nd - 1, -1, -1):
        _move_down(M, M[buf + i])


@njit(cache=True, inline="always")
def _splay_parent(M, x):
    p = M[M[PARENT] + x]
    if p >= 0 and (M[M[LEFT] + p] == x or M[M[RIGHT] + p] == x):
        return p
    return -1


@njit(cache=True, inline="always")
def _push(M, x):
    rev = M[REV]
    if M[rev + x]:
        lo = M[LEFT]
        ro = M[RIGHT]
        l = M[lo + x]
        r = M[ro + x]
        M[lo + x] = r
        M[ro + x] = l
        if l >= 0:
            M[rev + l] ^= 1
        if r >= 0:
            M[rev + r] ^= 1
        M[rev + x] = 0


@njit(cache=True)
def _rotate_up(M, x):
    lo = M[LEFT]
    ro = M[RIGHT]
    p = _splay_parent(M, x)
    gp = _splay_parent(M, p)
    if gp >= 0:
        if M[lo + gp] == p:
            M[lo + gp] = x
        else:
            M[ro + gp] = x
    if M[lo + p] == x:
        M[lo + p] = M[ro + x]
        M[ro + x] = p
    else:
        M[ro + p] = M[lo + x]
        M[lo + x] = p
    _rotate(M)


@njit(cache=True)
def _splay(M, x, stop):
    sbuf = M[SBUF]
    lo = M[LEFT]
    n = 0
    y = x
    while y >= 0:
        M[sbuf + n] = y
        n += 1
        y = _splay_parent(M, y)
    for i in range(n - 1, -1, -1):
        _push(M, M[sbuf + i])
    while True:
        p = _splay_parent(M, x)
        if p < 0 or p == stop:
            return
        gp = _splay_parent(M, p)
        if gp < 0 or gp == stop:
            _rotate_up(M, x)
        elif (M[lo + gp] == p) == (M[lo + p] == x):
            _move_up(M)
            _rotate_up(M, p)
            _move_down(M, x)
            _rotate_up(M, x)
        else:
            _rotate_up(M, x)
            _rotate_up(M, x)


@njit(cache=True)
def _access(M, x):
    par = M[PARENT]
    pof = M[PATH_OF]
    ro = M[RIGHT]
    _goto(M, x)
    _splay(M, x, -1)
    M[ro + x] = -1
    path = M[pof + x]
    while True:
        w = M[par + x]
        if w < 0 or M[pof + w] != path:
            return
        _move_up(M)
        _splay(M, w, -1)
        M[ro + w] = x
        _move_down(M, x)
        _rotate_up(M, x)


@njit(cache=True)
def _evert(M, x):
    _access(M, x)
    M[M[REV] + x] ^= 1


@njit(cache=True, inline="always")
def _madd(M, a, b):
    deg = M[MDEG] + a
    M[M[MADJ] + a * M[W] + M[deg]] = b
    M[deg] += 1


@njit(cache=True, inline="always")
def _mdel(M, a, b):
    deg = M[MDEG] + a
    row = M[MADJ] + a * M[W]
    d = M[deg]
    for j in range(d):
        if M[row + j] == b:
            M[row + j] = M[row + d - 1]
            M[deg] = d - 1
            return


@njit(cache=True, inline="always")
def _sort_pairs(M, cnt):
    # pairs live at PAIRS as a0, b0, a1, b1
    q = M[PAIRS]
    if cnt == 2 and (M[q + 2] < M[q] or (M[q + 2] == M[q] and M[q + 3] < M[q + 1])):
        M[q], M[q + 2] = M[q + 2], M[q]
        M[q + 1], M[q + 3] = M[q + 3], M[q + 1]


@njit(cache=True)
def _cut(M, p, y):
    """Split path ``p`` just below its node ``y``."""
    ppar = M[PPAR]
    pof = M[PATH_OF]
    bottom = M[BOTTOM]
    q = M[PAIRS]
    bot = M[bottom + p]
    o = bot
    while M[ppar + o] != y:
        o = M[ppar + o]
    d = M[M[PDEPTH] + o]
    cnt = 0
    b = bot
    while True:
        row = M[MADJ] + b * M[W]
        for j in range(M[M[MDEG] + b]):
            a = M[row + j]
            if M[pof + a] == p and M[M[PDEPTH] + a] < d:
                M[q + 2 * cnt] = a
                M[q + 2 * cnt + 1] = b
                cnt += 1
        if b == o:
            break
        b = M[ppar + b]
    _sort_pairs(M, cnt)
    a1 = M[q]
    b1 = M[q + 1]
    if cnt == 1:
        _evert(M, b1)
        _access(M, a1)
        _push(M, a1)
        M[M[LEFT] + a1] = -1
        _mdel(M, a1, b1)
        _mdel(M, b1, a1)
    else:
        a2 = M[q + 2]
        b2 = M[q + 3]
        _evert(M, a1)
        _access(M, a2)
        _goto(M, a1)
        _splay(M, a1, a2)
        _push(M, a1)
        M[M[RIGHT] + a1] = -1
        _madd(M, a1, a2)
        _madd(M, a2, a1)
        _mdel(M, a1, b1)
        _mdel(M, b1, a1)
        _mdel(M, a2, b2)
        _mdel(M, b2, a2)
    M[bottom + p] = y
    M[bottom + o] = bot
    b = bot
    while True:
        M[pof + b] = o
        if b == o:
            break
        b = M[ppar + b]


@njit(cache=True)
def _merge(M, p, c):
    pof = M[PATH_OF]
    outer = M[OUTER] + 4 * c
    q = M[PAIRS]
    cnt = 0
    for j in range(M[M[NOUTER] + c]):
        a = M[outer + 2 * j]
        if M[pof + a] == p:
            x = M[outer + 2 * j + 1]
            while M[pof + x] != c:
                x = _direction(M, x, c)
            M[q + 2 * cnt] = a
            M[q + 2 * cnt + 1] = x
            cnt += 1
    _sort_pairs(M, cnt)
    a1 = M[q]
    b1 = M[q + 1]
    if cnt == 1:
        _access(M, a1)
        _evert(M, b1)
    else:
        a2 = M[q + 2]
        b2 = M[q + 3]
        _evert(M, a1)
        _access(M, a2)
        _evert(M, b1)
        _access(M, b2)
        _push(M, a1)
        M[M[RIGHT] + a1] = b2
        _mdel(M, a1, a2)
        _mdel(M, a2, a1)
        _madd(M, a2, b2)
        _madd(M, b2, a2)
    _madd(M, a1, b1)
    _madd(M, b1, a1)
    ppar = M[PPAR]
    bottom = M[BOTTOM]
    bot = M[bottom + c]
    b = bot
    while True:
        M[pof + b] = p
        if b == c:
            break
        b = M[ppar + b]
    M[bottom + p] = bot


@njit(cache=True)
def _apply_change(M, y, old, new):
    """Path surgery for one preferred-child event; returns 1 if the partition changed."""
    if old != -1:
        M[ITOTAL] += 1
        eff = old
    else:
        M[IFIRST] += 1
        eff = M[M[PFIRST] + y]
    if eff == new:
        return 0
    p = M[M[PATH_OF] + y]
    _cut(M, p, y)
    _merge(M, p, new)
    return 1


@njit(cache=True)
def _search_batch(M, seq, start, costs, changes, reserve):
    ppar = M[PPAR]
    pref = M[PREF]
    abuf = M[ABUF]
    for i in range(start, seq.shape[0]):
        if M[RECORD] and M[TLEN] + reserve > M[TCAP]:
            return i
        v = seq[i]
        before = M[COST]
        M[FINGER] = M[ROOT]
        na = 0
        y = v
        while y >= 0:
            M[abuf + na] = y
            na += 1
            y = M[ppar + y]
        ch = 0
        for j in range(na - 1, 0, -1):
            y = M[abuf + j]
            c = M[abuf + j - 1]
            old = M[pref + y]
            if old != c:
                M[pref + y] = c
                ch += _apply_change(M, y, old, c)
        fc = M[M[PFIRST] + v]
        if fc >= 0 and M[pref + v] != fc:
            old = M[pref + v]
            M[pref + v] = fc
            ch += _apply_change(M, v, old, fc)
        _access(M, v)
        if M[PAID]:
            while M[M[PARENT] + M[FINGER]] >= 0:
                _move_up(M)
        costs[i] = M[COST] - before
        changes[i] = ch
    return seq.shape[0]


class FastTango:
    """Array-backed tango tree; mirrors :class:`TangoTree` op for op."""

    def __init__(self, g: Topology, *, reference: SearchTree | None = None, reset: str = "free", record_trace: bool = False):
        base = TangoTree(g, reference=reference, record_trace=False)
        self.topology = g
        self.reference = base.reference
        self.initial_tree = base.initial_tree
        n = g.n
        gpar, _, tin, tout, _, children, child_tins = g._dfs
        adj_off = np.concatenate([[0], np.cumsum([len(a) for a in g.adjacency])])
        gch_off = np.concatenate([[0], np.cumsum([len(c) for c in children])])

        p = self.reference
        height = max(p.depth)
        width = max(height, 2) + 1
        madj = np.full((n, width), -1, np.int64)
        mdeg = np.zeros(n, np.int64)
        for x in range(n):
            for j, y in enumerate(sorted(base.minor_adj[x])):
                madj[x, j] = y
            mdeg[x] = len(base.minor_adj[x])
        outer = np.full((n, 4), -1, np.int64)
        nouter = np.zeros(n, np.int64)
        for c in range(n):
            if len(base.outer[c]) > 2:
                raise AssertionError(f"reference subtree of {c} has {len(base.outer[c])} boundary edges")
            for j, (a, x) in enumerate(base.outer[c]):
                outer[c, 2 * j : 2 * j + 2] = (a, x)
            nouter[c] = len(base.outer[c])
        bottom = np.full(n, -1, np.int64)
        for top, chain in base.nodes.items():
            bottom[top] = chain[-1]
        st = base.machine.state
        child_at = np.full(int(adj_off[-1]), -1, np.int64)
        for c in range(n):
            if st.parent[c] >= 0:
                a = st.parent[c]
                child_at[adj_off[a] + g.adjacency[a].index(st.port[c])] = c

        self._reserve = (6 * height + 2) * (2 * n + 4 * height + 8) + 16
        cap = 4 * self._reserve if record_trace else 0
        tables = {
            "adj_off": adj_off, "adj": [x for a in g.adjacency for x in a], "gpar": gpar, "tin": tin, "tout": tout,
            "gch_off": gch_off, "gch": [x for c in children for x in c], "gch_tin": [x for c in child_tins for x in c],
            "ppar": p.parent, "pdepth": p.depth, "pfirst": base._first_child, "pref": np.full(n, -1),
            "parent": st.parent, "port": st.port, "child_at": child_at,
            "path_of": base.path_of, "bottom": bottom, "madj": madj.ravel(), "mdeg": mdeg,
            "outer": outer.ravel(), "nouter": nouter,
            "left": np.full(n, -1), "right": np.full(n, -1), "rev": np.zeros(n),
            "mark": np.zeros(n), "buf": np.zeros(n + 1), "abuf": np.zeros(n + 1), "sbuf": np.zeros(height + 1),
            "pairs": np.zeros(4), "trace": np.zeros(cap),
        }
        sizes = [len(tables[name]) for name in TABLES]
        M = np.zeros(HEADER + sum(sizes), np.int64)
        off = HEADER
        self._slices = {}
        for h, name, size in zip(range(ADJ_OFF, TRACE + 1), TABLES, sizes):
            M[h] = off
            M[off : off + size] = np.asarray(tables[name], np.int64)
            self._slices[name] = (off, size)
            off += size
        M[ROOT] = M[FINGER] = st.root
        M[RECORD] = int(record_trace)
        M[PAID] = int(reset == "paid")
        M[N] = n
        M[W] = width
        M[TCAP] = cap
        self.M = M
        self.per_search: list[int] = []
        self.changes: list[int] = []
        self.targets: list[int] = []
        self.wall_ns = 0

    def view(self, name: str) -> np.ndarray:
        off, size = self._slices[name]
        return self.M[off : off + size]

    @property
    def total_cost(self) -> int:
        return int(self.M[COST])

    @property
    def interleave_total(self) -> int:
        return int(self.M[ITOTAL])

    @property
    def first_definitions(self) -> int:
        return int(self.M[IFIRST])

    @property
    def total_path_changes(self) -> int:
        return sum(self.changes)

    @property
    def tree(self) -> SearchTree:
        return SearchTree(tuple(int(x) for x in self.view("parent")))

    def _grow(self) -> None:
        # the trace table is last, so growing it is an append
        extra = max(int(self.M[TCAP]), self._reserve)
        self.M = np.concatenate([self.M, np.zeros(extra, np.int64)])
        self.M[TCAP] += extra
        off, size = self._slices["trace"]
        self._slices["trace"] = (off, size + extra)

    def run(self, seq) -> tuple[np.ndarray, np.ndarray]:
        """Serve every search in ``seq``; returns per-search costs and path changes."""
        seq = np.asarray(seq, np.int64)
        if len(seq) and (seq.min() < 0 or seq.max() >= self.topology.n):
            raise IndexError("search target out of range")
        costs = np.zeros(len(seq), np.int64)
        changes = np.zeros(len(seq), np.int64)
        t0 = time.perf_counter_ns()
        i = 0
        while i < len(seq):
            i = _search_batch(self.M, seq, i, costs, changes, self._reserve)
            if i < len(seq):
                self._grow()
        self.wall_ns += time.perf_counter_ns() - t0
        self.per_search.extend(costs.tolist())
        self.changes.extend(changes.tolist())
        self.targets.extend(seq.tolist())
        return costs, changes

    def search(self, v: int) -> SearchStats:
        t0 = time.perf_counter_ns()
        costs, changes = self.run([v])
        return SearchStats(v, int(costs[0]), int(changes[0]) + 1, int(changes[0]), time.perf_counter_ns() - t0)

    def trace_ops(self) -> list[UnitOp]:
        if not self.M[RECORD]:
            raise ValueError("created with record_trace=False")
        kinds = (Kind.MOVE_TO_PARENT, Kind.MOVE_TO_CHILD, Kind.ROTATE_HERE)
        codes = self.view("trace")[: int(self.M[TLEN])]
        return [UnitOp(kinds[int(c) % 3], int(c) // 3 - 1) for c in codes]

    def trace_text(self) -> str:
        ops = iter(self.trace_ops())
        lines = []
        for t, c in zip(self.targets, self.per_search):
            lines.append(f"S {t}")
            lines.extend(str(next(ops)) for _ in range(c))
            lines.append("E")
        return "".join(ln + "\n" for ln in lines)

    def to_python(self) -> TangoTree:
        """A :class:`TangoTree` carrying this kernel's current state (for auditing)."""
        t = TangoTree(self.topology, reference=self.reference, record_trace=False)
        ppar = self.view("ppar")
        bottom = self.view("bottom")
        width = int(self.M[W])
        madj = self.view("madj").reshape(-1, width)
        mdeg = self.view("mdeg")
        t.machine.state = TreeState(self.topology, self.tree)
        t.machine.finger = t.machine.state.root
        t.machine.total_cost = self.total_cost
        t.machine.per_search = list(self.per_search)
        t.preferred.preferred = [int(x) for x in self.view("pref")]
        t.path_of = [int(x) for x in self.view("path_of")]
        t.nodes = {}
        for top in set(t.path_of):
            chain = [int(bottom[top])]
            while chain[-1] != top:
                chain.append(int(ppar[chain[-1]]))
            t.nodes[top] = chain[::-1]
        t.minor_adj = [set(int(y) for y in madj[x, : mdeg[x]]) for x in range(self.topology.n)]
        t.left = [int(x) for x in self.view("left")]
        t.right = [int(x) for x in self.view("right")]
        t.rev = [bool(x) for x in self.view("rev")]
        t.targets = list(self.targets)
        return t
