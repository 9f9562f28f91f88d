import pytest
from hypothesis import given
from hypothesis import strategies as st

from gstree.core import InvalidSearchTree, SearchTree, Topology, validate_search_tree
from gstree.fixtures import sample_rotated_i, sample_search_tree, sample_topology, swapped, v
from gstree.machine import (
    MOVE_TO_PARENT,
    ROTATE_HERE,
    CostReport,
    GstMachine,
    IllegalOp,
    SessionError,
    format_trace,
    move_to_child,
    parse_trace,
    replay,
    run_sequence,
)

from _strategies import tree_and_search_tree


@pytest.fixture
def m():
    return GstMachine(sample_topology(), sample_search_tree(), debug=True)


def test_new_machine_sits_at_root(m):
    assert m.finger == v("c") and m.total_cost == 0
    two = GstMachine(Topology.from_edges(2, [(0, 1)]), SearchTree((-1, 0)))
    assert two.finger == 0


def test_invalid_initial_tree_rejected():
    with pytest.raises(InvalidSearchTree):
        GstMachine(sample_topology(), swapped(sample_search_tree(), v("g"), v("j")))


def test_move_to_child_costs_one(m):
    m.begin_search(v("f"))
    m.move_to_child(v("f"))
    assert m.finger == v("f") and m.total_cost == 1
    assert m.end_search() == 1


def test_move_to_parent_at_root_fails(m):
    m.begin_search(v("c"))
    with pytest.raises(IllegalOp):
        m.move_to_parent()


def test_rotate_here_on_sample():
    m = GstMachine(sample_topology(), sample_search_tree())
    m.begin_search(v("i"))
    m.walk_to(v("i"))
    before = m.total_cost
    m.rotate()
    assert m.tree == sample_rotated_i()
    assert m.total_cost == before + 1


def test_sessions(m):
    m.begin_search(v("c"))
    assert m.end_search() == 0
    m.begin_search(v("a"))
    with pytest.raises(SessionError):
        m.end_search()
    with pytest.raises(SessionError):
        m.begin_search(v("b"))
    m.move_to_child(v("a"))
    assert m.end_search() == 1


def test_ops_outside_session_fail(m):
    with pytest.raises(IllegalOp):
        m.move_to_child(v("a"))


def test_not_a_child(m):
    m.begin_search(v("e"))
    with pytest.raises(IllegalOp):
        m.move_to_child(v("e"))


def test_paid_reset_walks_back():
    m = GstMachine(sample_topology(), sample_search_tree(), reset="paid")
    m.begin_search(v("e"))
    m.walk_to(v("e"))
    assert m.end_search() == 4
    assert m.finger == m.root


def test_empty_trace_replays_to_zero():
    rep, final = replay(sample_topology(), sample_search_tree(), "")
    assert rep.total == 0 and final == sample_search_tree()


def test_rotate_at_root_in_trace_reports_index():
    text = "S c\nE\nS a\nR\nE\n".replace(" c", f" {v('c')}").replace(" a", f" {v('a')}")
    with pytest.raises(IllegalOp) as info:
        replay(sample_topology(), sample_search_tree(), text)
    assert info.value.index == 3


def test_unfinished_trace_rejected():
    with pytest.raises(IllegalOp):
        replay(sample_topology(), sample_search_tree(), f"S {v('a')}\nC {v('a')}\n")


def test_parse_trace_rejects_garbage():
    with pytest.raises(ValueError):
        parse_trace("S 1\nX\n")


def test_unit_op_text():
    assert str(MOVE_TO_PARENT) == "P"
    assert str(ROTATE_HERE) == "R"
    assert str(move_to_child(7)) == "C 7"


def test_cost_report_json():
    r = CostReport([1, 0, 3])
    assert CostReport.from_json(r.to_json()) == r
    with pytest.raises(ValueError):
        CostReport.from_json('{"per_search": [1], "total": 2}')


@given(tree_and_search_tree(min_n=2), st.data())
def test_random_programs_replay(pair, data):
    g, t = pair
    m = GstMachine(g, t)
    targets = []
    for _ in range(data.draw(st.integers(1, 6))):
        x = data.draw(st.integers(0, g.n - 1))
        targets.append(x)
        m.begin_search(x)
        for _ in range(data.draw(st.integers(0, 6))):
            kids = m.state.children(m.finger)
            choice = data.draw(st.integers(0, 2))
            if choice == 0 and m.state.parent[m.finger] >= 0:
                m.move_to_parent()
            elif choice == 1 and kids:
                m.move_to_child(data.draw(st.sampled_from(sorted(kids))))
            elif choice == 2 and m.state.parent[m.finger] >= 0:
                m.rotate()
        m.walk_to(x)
        m.end_search()
        assert validate_search_tree(g, m.tree) is None
    rep, final = replay(g, t, format_trace(m, targets))
    assert rep == m.report() and final == m.tree


def test_run_sequence_program():
    m = GstMachine(sample_topology(), sample_search_tree())
    run_sequence(m, [("S", v("f")), move_to_child(v("f")), ROTATE_HERE, ("E",)])
    assert m.root == v("f") and m.total_cost == 2
