import pytest
from hypothesis import given
from hypothesis import strategies as st

from gstree.core import validate_search_tree
from gstree.generators import (
    SEQ_KINDS,
    TREE_SHAPES,
    format_sequence,
    gen_seq,
    gen_tree,
    parse_sequence,
    random_search_tree,
)
from gstree.interleave import interleave_bound
from gstree.steiner import reference_tree


def test_path_and_star():
    assert list(gen_tree("path", 5, 9).edges) == [(0, 1), (1, 2), (2, 3), (3, 4)]
    star = gen_tree("star", 5, 9)
    assert star.degree(0) == 4 and all(star.degree(i) == 1 for i in range(1, 5))


@given(st.sampled_from(TREE_SHAPES), st.integers(1, 80), st.integers(0, 1000))
def test_trees_are_deterministic(shape, n, seed):
    assert gen_tree(shape, n, seed) == gen_tree(shape, n, seed)
    assert gen_tree(shape, n, seed).n == n


def test_random_tree_attaches_to_earlier_vertices():
    g = gen_tree("random", 12, 5)
    assert all(min(e) < max(e) for e in g.edges)
    assert gen_tree("random", 12, 5) == g


def test_unknown_names():
    with pytest.raises(ValueError):
        gen_tree("cycle", 4)
    with pytest.raises(ValueError):
        gen_seq("zigzag", gen_tree("path", 4), 3)
    with pytest.raises(ValueError):
        gen_tree("path", 0)
    with pytest.raises(ValueError):
        gen_seq("uniform", gen_tree("path", 4), 0)


def test_sequential_and_repeated():
    assert gen_seq("sequential", gen_tree("path", 6), 6) == list(range(6))
    rep = gen_seq("repeated", gen_tree("random", 20, 1), 9, 4)
    assert len(set(rep)) == 1 and len(rep) == 9


@given(st.sampled_from(SEQ_KINDS), st.integers(1, 50), st.integers(1, 60), st.integers(0, 99))
def test_sequences_valid_and_deterministic(kind, n, m, seed):
    g = gen_tree("random", n, seed)
    x = gen_seq(kind, g, m, seed)
    assert x == gen_seq(kind, g, m, seed)
    assert len(x) == m and all(0 <= v < n for v in x)


@pytest.mark.parametrize("shape", ["random", "path", "caterpillar", "binary"])
@pytest.mark.parametrize("n", [64, 256, 1024])
def test_adversarial_beats_uniform(shape, n):
    g = gen_tree(shape, n, 1)
    p = reference_tree(g)
    adv = interleave_bound(g, p, gen_seq("adversarial", g, 4 * n, 1, reference=p)).total
    uni = interleave_bound(g, p, gen_seq("uniform", g, 4 * n, 1)).total
    assert adv > uni


@given(st.integers(1, 60), st.integers(0, 10**6))
def test_random_search_tree_valid(n, seed):
    g = gen_tree("random", n, seed)
    assert validate_search_tree(g, random_search_tree(g, seed)) is None


def test_sequence_text_roundtrip():
    assert parse_sequence(format_sequence([3, 1, 4])) == [3, 1, 4]
