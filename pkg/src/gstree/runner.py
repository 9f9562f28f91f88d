"""Benchmark runner: one algorithm on one (tree, sequence) pair, reported as JSON."""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .core import SearchTree, Topology, parse_topology
from .generators import gen_seq, gen_tree, parse_sequence
from .interleave import interleave_bound
from .machine import GstMachine, ResetMode, format_trace
from .oracle import exact_opt
from .steiner import reference_tree
from .tango import TangoTree, loglog_factor

SCHEMA = 1
ALGORITHMS = ("tango", "static", "opt")
BACKENDS = ("fast", "python")


@dataclass
class RunConfig:
    tree_file: str | None = None
    shape: str = "random"
    n: int = 64
    tree_seed: int = 0
    seq_file: str | None = None
    kind: str = "uniform"
    m: int = 1000
    seq_seed: int = 0
    algorithm: str = "tango"
    backend: str = "fast"
    reset: str = "free"
    report: str | None = None
    trace: str | None = None
    audit: bool = False

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if self.backend not in BACKENDS:
            raise ValueError(f"unknown backend {self.backend!r}; expected one of {BACKENDS}")
        ResetMode(self.reset)

    def topology(self) -> Topology:
        if self.tree_file is not None:
            return parse_topology(Path(self.tree_file).read_text())
        return gen_tree(self.shape, self.n, self.tree_seed)

    def sequence(self, g: Topology, reference: SearchTree) -> list[int]:
        if self.seq_file is not None:
            seq = parse_sequence(Path(self.seq_file).read_text())
            for v in seq:
                g.check_vertex(v)
            return seq
        return gen_seq(self.kind, g, self.m, self.seq_seed, reference=reference)


@dataclass
class RunReport:
    n: int
    m: int
    algorithm: str
    total_cost: int
    per_search_mean: float
    per_search_max: int | None
    interleave_total: int
    first_definitions: int
    lower_bound: int
    path_changes: int | None
    max_ratio_units: float | None
    wall_seconds: float
    audit: str | None = None
    config: dict = field(default_factory=dict)

    @property
    def loglog(self) -> int:
        return loglog_factor(self.n)

    @property
    def c_prime(self) -> float:
        """total / ((I + n + m) * loglog factor)."""
        return self.total_cost / ((self.interleave_total + self.n + self.m) * self.loglog)

    @property
    def c(self) -> float | None:
        """Worst per-search cost / ((path changes + 1) * loglog factor); tango only."""
        if self.max_ratio_units is None:
            return None
        return self.max_ratio_units / self.loglog

    @property
    def c_amortized(self) -> float | None:
        """total / ((path changes + m) * loglog factor); tango only."""
        if self.path_changes is None:
            return None
        return self.total_cost / ((self.path_changes + self.m) * self.loglog)

    def to_dict(self) -> dict:
        d = {"schema": SCHEMA}
        d.update(asdict(self))
        d["loglog_factor"] = self.loglog
        d["C"] = self.c
        d["C_amortized"] = self.c_amortized
        d["C_prime"] = self.c_prime
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "RunReport":
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {d.get('schema')!r}")
        names = cls.__dataclass_fields__
        return cls(**{k: v for k, v in d.items() if k in names})


def _run_tango(cfg: RunConfig, g: Topology, p: SearchTree, seq: list[int]):
    want_trace = cfg.trace is not None
    if cfg.backend == "python" or cfg.audit:
        t = TangoTree(g, reference=p, reset=cfg.reset, record_trace=want_trace, audit_each=cfg.audit, debug=cfg.audit)
        stats = t.run(seq)
        costs = [s.cost for s in stats]
        changes = [s.path_changes for s in stats]
        lb = interleave_bound(g, p, seq)
        trace = t.trace_text() if want_trace else None
        audit = t.audit()
        return costs, changes, lb.total, lb.first_definitions, trace, audit
    from ._fast import FastTango

    f = FastTango(g, reference=p, reset=cfg.reset, record_trace=want_trace)
    c, ch = f.run(seq)
    trace = f.trace_text() if want_trace else None
    # the kernel counts I itself, op for op like interleave_bound
    return c.tolist(), ch.tolist(), f.interleave_total, f.first_definitions, trace, None


def _run_static(cfg: RunConfig, g: Topology, p: SearchTree, seq: list[int]):
    m = GstMachine(g, p, reset=cfg.reset, record_trace=cfg.trace is not None)
    for v in seq:
        m.begin_search(v)
        m.walk_to(v)
        m.end_search()
    trace = format_trace(m, seq) if cfg.trace is not None else None
    return m.per_search, trace


def _config_fields(cfg: RunConfig) -> dict:
    skip = {"report", "trace"}
    if cfg.tree_file is not None:
        skip |= {"shape", "n", "tree_seed"}
    if cfg.seq_file is not None:
        skip |= {"kind", "m", "seq_seed"}
    if cfg.algorithm != "tango":
        skip.add("backend")
    return {k: v for k, v in asdict(cfg).items() if k not in skip}


def run(cfg: RunConfig) -> RunReport:
    g = cfg.topology()
    p = reference_tree(g)
    seq = cfg.sequence(g, p)
    t0 = time.perf_counter()
    changes_total = None
    ratio_units = None
    trace = None
    audit = None
    if cfg.algorithm == "tango":
        costs, changes, itotal, first, trace, audit = _run_tango(cfg, g, p, seq)
        changes_total = int(sum(changes))
        ratio_units = max(c / (k + 1) for c, k in zip(costs, changes)) if costs else 0.0
        total, per_max = int(sum(costs)), int(max(costs, default=0))
    else:
        lb = interleave_bound(g, p, seq)
        itotal, first = lb.total, lb.first_definitions
        if cfg.algorithm == "static":
            costs, trace = _run_static(cfg, g, p, seq)
            total, per_max = int(sum(costs)), int(max(costs, default=0))
        else:
            total, per_max = exact_opt(g, seq, reset=cfg.reset), None
    wall = time.perf_counter() - t0
    report = RunReport(
        n=g.n,
        m=len(seq),
        algorithm=cfg.algorithm,
        total_cost=total,
        per_search_mean=total / len(seq) if seq else 0.0,
        per_search_max=per_max,
        interleave_total=int(itotal),
        first_definitions=int(first),
        lower_bound=int(itotal) // 2 - g.n,
        path_changes=changes_total,
        max_ratio_units=ratio_units,
        wall_seconds=wall,
        audit=("ok" if audit is None else audit) if cfg.audit else None,
        config=_config_fields(cfg),
    )
    if cfg.report is not None:
        Path(cfg.report).write_text(report.to_json())
    if trace is not None:
        Path(cfg.trace).write_text(trace)
    return report
