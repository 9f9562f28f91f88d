import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gstree.core import Topology, path_between, validate_search_tree
from gstree.fixtures import sample_topology, v
from gstree.generators import gen_tree
from gstree.interleave import interleave_bound
from gstree.machine import replay
from gstree.steiner import minor_tree
from gstree.tango import TangoTree, loglog_factor, tango_new

from _strategies import tree_and_sequence
from conftest import SCALING_NS


def test_loglog_factor():
    assert [loglog_factor(n) for n in (1, 2, 3, 4, 16, 17, 256, 257)] == [2, 2, 2, 2, 3, 4, 4, 5]


def test_new_on_sample_is_valid():
    t = tango_new(sample_topology())
    assert validate_search_tree(t.topology, t.machine.tree) is None
    assert t.audit() is None
    assert t.machine.total_cost == 0


def test_single_vertex():
    t = tango_new(Topology.from_edges(1, []))
    assert list(t.paths) == [0]
    assert t.search(0).cost == 0


def test_path_graph_is_binary():
    g = gen_tree("path", 31)
    t = tango_new(g)
    t.run(np.random.default_rng(1).integers(0, 31, 200).tolist())
    assert max(len(c) for c in t.machine.tree.children) <= 2
    assert t.audit() is None


def test_search_root_is_free():
    t = tango_new(sample_topology())
    rng = np.random.default_rng(3)
    for x in rng.integers(0, 12, 50).tolist():
        t.search(x)
        s = t.search(t.machine.root)
        assert s.cost == 0 and s.paths_touched == 1


def test_repeat_search_has_no_changes():
    t = tango_new(sample_topology())
    for x in [v("e"), v("l"), v("a")]:
        t.search(x)
        s = t.search(x)
        assert s.path_changes == 0
        assert s.paths_touched == s.path_changes + 1


def test_unknown_vertex():
    with pytest.raises(IndexError):
        tango_new(sample_topology()).search(12)


def test_audit_after_many_searches_and_replay():
    g = sample_topology()
    t = tango_new(g)
    seq = np.random.default_rng(0).integers(0, 12, 1000).tolist()
    t.run(seq)
    assert t.audit() is None
    rep, final = replay(g, t.initial_tree, t.trace_text())
    assert rep.total == t.machine.total_cost and final == t.machine.tree


def test_corrupted_parent_is_reported():
    t = tango_new(sample_topology())
    t.run([v("e"), v("l")])
    st_ = t.machine.state
    leaf = next(x for x in range(12) if not st_.children(x) and st_.parent[x] != st_.root)
    st_.parent[leaf] = st_.root
    assert "composite tree invalid" in t.audit()


def test_cut_two_node_path_into_singletons():
    g = gen_tree("path", 2)
    t = tango_new(g)
    (top,) = t.paths
    assert len(t.paths[top].nodes) == 2
    t.machine.begin_search(t.machine.root)
    a, b = t.cut_path(top, t.depth_of[top] + 1)
    assert len(t.paths) == 2
    assert t.paths[a].nodes == (top,) and len(t.paths[b].nodes) == 1
    assert t.merge_paths(a, b) == a
    t.machine.end_search()
    assert t.paths[a].nodes == (0, 1) or t.paths[a].nodes == (1, 0)
    assert len(t.paths[a].minor.edges) == 1
    assert t.audit() is None


def test_surgery_needs_open_session():
    t = tango_new(gen_tree("path", 2))
    with pytest.raises(RuntimeError):
        t.cut_path(t.machine.root, 2)


def test_cut_depth_range_and_merge_precondition():
    t = tango_new(sample_topology())
    t.machine.begin_search(t.machine.root)
    (top,) = [p for p, path in t.paths.items() if len(path.nodes) > 1][:1]
    lo = t.depth_of[top]
    with pytest.raises(ValueError):
        t.cut_path(top, lo)
    others = [p for p in t.paths if t.reference.parent[p] != t.nodes[top][-1] and p != top]
    with pytest.raises(ValueError):
        t.merge_paths(top, others[0])


def _long_paths(t):
    return [p for p, path in t.paths.items() if len(path.nodes) > 1]


@given(st.integers(2, 60), st.integers(0, 2**31), st.data())
@settings(max_examples=40)
def test_cut_then_merge_restores_path(n, seed, data):
    g = gen_tree("random", n, seed)
    t = tango_new(g)
    t.run(np.random.default_rng(seed).integers(0, n, 30).tolist())
    candidates = _long_paths(t)
    if not candidates:
        return
    p = data.draw(st.sampled_from(sorted(candidates)))
    before = t.paths[p]
    d = data.draw(st.integers(before.min_depth + 1, before.max_depth))
    t.machine.begin_search(t.machine.root)
    top, bottom = t.cut_path(p, d)
    assert t.last_counts.cuts <= 2 and t.last_counts.links <= 1
    assert t.paths[top].minor == minor_tree(g, t.paths[top].nodes)
    t.merge_paths(top, bottom)
    assert t.last_counts.cuts <= 2 and t.last_counts.links <= 2
    t.machine.end_search()
    after = t.paths[p]
    assert after.nodes == before.nodes and after.minor == before.minor
    assert t.audit() is None


@given(tree_and_sequence(max_n=50, max_m=40))
@settings(max_examples=60)
def test_audit_after_every_search(case):
    g, seq = case
    t = TangoTree(g, audit_each=True)
    stats = t.run(seq)
    assert all(s.paths_touched == s.path_changes + 1 and s.cost >= 0 for s in stats)
    lb = interleave_bound(g, t.reference, seq)
    assert t.total_path_changes <= lb.total + lb.first_definitions <= lb.total + g.n


@given(tree_and_sequence(max_n=40, max_m=30))
@settings(max_examples=40)
def test_path_structure(case):
    g, seq = case
    t = TangoTree(g)
    t.run(seq)
    height = max(t.reference.depth)
    for path in t.paths.values():
        assert len(path.nodes) <= height
        assert [t.depth_of[x] for x in path.nodes] == list(range(path.min_depth, path.max_depth + 1))
        covered = sorted(x for solid in path.decomposition for x in solid)
        assert covered == sorted(path.nodes)
        for solid in path.decomposition:
            walk = path_between(g, solid[0], solid[-1])
            assert [x for x in walk if x in set(path.nodes)] == list(solid)


@given(tree_and_sequence(max_n=30, max_m=20))
@settings(max_examples=30)
def test_paid_reset_replays(case):
    g, seq = case
    t = TangoTree(g, reset="paid")
    t.run(seq)
    assert t.machine.finger == t.machine.root
    rep, final = replay(g, t.initial_tree, t.trace_text(), reset="paid")
    assert rep.total == t.machine.total_cost and final == t.machine.tree


def test_per_search_constant_holds_across_scaling(scaling_matrix):
    """One C, measured at the smallest n, must bound every search at every larger n."""
    worst = {n: max(r.c for key, r in scaling_matrix.items() if key[0] == n) for n in SCALING_NS}
    print("per-search C by n:", {n: round(c, 3) for n, c in worst.items()})
    c0 = worst[SCALING_NS[0]]
    assert all(worst[n] <= c0 for n in SCALING_NS), worst
