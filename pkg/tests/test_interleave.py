import pytest
from hypothesis import given

from gstree.core import SearchTree
from gstree.fixtures import sample_centroid, sample_topology, v
from gstree.interleave import UNDEFINED, PreferredState, interleave_bound, preferred_from_history
from gstree.steiner import reference_tree

from _strategies import tree_and_sequence

BALANCED3 = SearchTree((1, -1, 1))


def test_fresh_state_is_undefined():
    s = PreferredState(sample_centroid(), sample_topology())
    assert s.preferred == [UNDEFINED] * 12
    assert PreferredState(SearchTree((-1,))).preferred == [UNDEFINED]


def test_path3_changes(path3):
    s = PreferredState(BALANCED3, path3)
    first = s.record_access(0)
    assert [(c.node, c.old, c.new) for c in first.events] == [(1, UNDEFINED, 0)]
    assert first.first == [1] and first.changed == []
    assert [(c.node, c.old, c.new) for c in s.record_access(2).events] == [(1, 0, 2)]
    assert [(c.node, c.old, c.new) for c in s.record_access(0).events] == [(1, 2, 0)]


def test_path3_bound(path3):
    r = interleave_bound(path3, BALANCED3, [0, 2, 0])
    assert r.total == 2 and r.lower_bound == -2
    assert r.first_definitions == 1
    assert r.to_dict()["per_node"] == {"1": 2}


def test_repeated_leaf_is_quiet():
    g = sample_topology()
    s = PreferredState(sample_centroid(), g)
    s.record_access(v("k"))
    assert len(s.record_access(v("k"))) == 0


def test_root_access_picks_first_child():
    s = PreferredState(sample_centroid())
    s.record_access(v("l"))
    s.record_access(v("d"))
    assert s.preferred[v("d")] == v("c")


def test_trivial_totals():
    g = sample_topology()
    p = reference_tree(g)
    assert interleave_bound(g, p, [v("e")]).total == 0
    assert interleave_bound(g, p, [v("e")] * 9).total == 0


def test_rejects_bad_vertex(path3):
    with pytest.raises(IndexError):
        interleave_bound(path3, BALANCED3, [3])


@given(tree_and_sequence())
def test_bookkeeping_matches_recomputation(case):
    g, seq = case
    p = reference_tree(g)
    s = PreferredState(p, g)
    for x in seq:
        s.record_access(x)
    assert s.preferred == preferred_from_history(p, seq)


@given(tree_and_sequence())
def test_total_bounded_by_path_lengths(case):
    g, seq = case
    p = reference_tree(g)
    r = interleave_bound(g, p, seq)
    assert 0 <= r.total <= len(seq) * max(p.depth)
    assert r.first_definitions <= g.n
