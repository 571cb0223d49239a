import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.cluster.hierarchy import average, to_tree
from scipy.spatial.distance import squareform

from autolex import (
    Node,
    Tree,
    clades,
    generate_tree,
    newick_parse,
    newick_serialize,
    rf_curve,
    rf_difference,
    simulate_family,
    stability,
    upgma,
)
from autolex.chrono import divergence_time
from autolex.errors import DuplicateLeaf, LeafSetMismatch, ParseError
from autolex.lexstat import PairMatrix, language_distance


def matrix(labels, pairs):
    n = len(labels)
    values = np.zeros((n, n))
    for (x, y), d in pairs.items():
        i, j = labels.index(x), labels.index(y)
        values[i, j] = values[j, i] = d
    return PairMatrix(labels, values)


def ultrametric_distances(tree):
    """Twice the height of the most recent common ancestor of each pair."""
    labels = sorted(tree.leaf_labels)
    pairs = {}
    for node in tree.internal_nodes():
        for a, b in itertools.combinations(node.children, 2):
            for x in a.leaf_labels:
                for y in b.leaf_labels:
                    pairs[(x, y)] = 2 * node.height
    return matrix(labels, pairs)


def same_tree(t1, t2, tol=1e-12):
    def walk(a, b):
        assert a.label == b.label
        assert abs(a.length - b.length) <= tol
        ka = sorted(a.children, key=lambda c: c.min_label)
        kb = sorted(b.children, key=lambda c: c.min_label)
        assert len(ka) == len(kb)
        for x, y in zip(ka, kb):
            walk(x, y)
    walk(t1.root, t2.root)
    return True


# -- upgma ---------------------------------------------------------------------

def test_upgma_cherry():
    t = upgma(matrix(["a", "b"], {("a", "b"): 0.4}))
    assert newick_serialize(t) == "(a:0.2,b:0.2);"


def test_upgma_three_leaves():
    m = matrix(["a", "b", "c"], {("a", "b"): 0.2, ("a", "c"): 0.6, ("b", "c"): 0.6})
    t = upgma(m)
    assert newick_serialize(t) == "((a:0.1,b:0.1):0.2,c:0.3);"
    assert t.clade_heights() == {frozenset("ab"): pytest.approx(0.1), frozenset("abc"): pytest.approx(0.3)}


def test_upgma_tie_break_by_labels():
    labels = ["d", "c", "b", "a"]
    m = matrix(labels, {p: 1.0 for p in itertools.combinations(labels, 2)})
    assert newick_serialize(upgma(m)) == "(((a:0.5,b:0.5):0,c:0.5):0,d:0.5);"


def test_upgma_average_linkage_weights_cluster_sizes():
    # after merging (a,b) at 0.1, d(ab,c) = (0.4 + 0.6) / 2 = 0.5 < d(ab,d) = 0.9
    labels = ["a", "b", "c", "d"]
    m = matrix(labels, {("a", "b"): 0.2, ("a", "c"): 0.4, ("b", "c"): 0.6,
                        ("a", "d"): 0.9, ("b", "d"): 0.9, ("c", "d"): 0.9})
    t = upgma(m)
    assert t.clade_heights()[frozenset("abc")] == pytest.approx(0.25)
    assert t.clade_heights()[frozenset("abcd")] == pytest.approx(0.45)


def _scipy_clades(values, labels):
    root = to_tree(average(squareform(values, checks=False)))
    out = {}

    def walk(node):
        if node.is_leaf():
            return frozenset([labels[node.id]])
        s = walk(node.left) | walk(node.right)
        out[s] = node.dist / 2
        return s
    walk(root)
    return out


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2**32 - 1))
def test_upgma_matches_scipy_average_linkage(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.random((n, n))
    values = np.triu(a, 1) + np.triu(a, 1).T
    labels = [f"t{i:02d}" for i in range(n)]
    t = upgma(PairMatrix(labels, values))
    expected = _scipy_clades(values, labels)
    got = t.clade_heights()
    assert set(got) == set(expected)
    for clade, h in expected.items():
        assert got[clade] == pytest.approx(h, abs=1e-12)
    # ultrametric, heights non-decreasing towards the root
    depths = list(t.root_to_leaf().values())
    assert max(depths) - min(depths) <= 1e-9
    for node in t.internal_nodes():
        assert all(c.length >= 0 and c.height <= node.height for c in node.children)


def test_upgma_rejects_bad_input():
    with pytest.raises(ValueError):
        upgma(PairMatrix(["a"], [[0.0]]))
    with pytest.raises(ValueError):
        upgma(matrix(["a", "b"], {("a", "b"): -1.0}))


@pytest.mark.parametrize("seed", range(10))
def test_upgma_recovers_ultrametric_tree(seed):
    true = generate_tree(15, seed)
    t = upgma(ultrametric_distances(true))
    assert rf_difference(t, true) == 0
    for clade, h in true.clade_heights().items():
        assert t.clade_heights()[clade] == pytest.approx(h, abs=1e-9)


def test_upgma_deterministic_bits():
    ds, _, _ = simulate_family(12, 30, seed=8)
    m = language_distance(ds)
    assert newick_serialize(upgma(m)) == newick_serialize(upgma(m.reorder(sorted(m.labels, reverse=True))))


def test_time_transform_keeps_topology_on_synthetic_data():
    ds, _, _ = simulate_family(15, 60, seed=2)
    m = language_distance(ds)
    assert rf_difference(upgma(m), upgma(divergence_time(m, 0.3))) == 0


# -- newick --------------------------------------------------------------------

def test_parse_cherry():
    t = newick_parse("(a:0.2,b:0.2);")
    assert t.leaf_labels == {"a", "b"}
    assert t.root.height == pytest.approx(0.2)


def test_parse_without_lengths():
    t = newick_parse("((a,b),c);")
    assert all(n.length == 0.0 for n in t.nodes())
    assert clades(t) == {frozenset("ab")}


def test_parse_duplicate_leaf():
    with pytest.raises(DuplicateLeaf):
        newick_parse("(a,(a,b));")


@pytest.mark.parametrize("text, pos", [
    ("(a,b)", 5),
    ("(a,b;", 4),
    ("(a:x,b);", 3),
    ("(a,);", 3),
    ("(a,b);junk", 6),
    ("", 0),
    ("('a,b);", 1),
    ("(a:-1,b);", 3),
])
def test_parse_errors_report_position(text, pos):
    with pytest.raises(ParseError) as err:
        newick_parse(text)
    assert err.value.position == pos


def test_parse_extras():
    t = newick_parse(" ( 'x y':1.5e-1 , [comment] 'it''s' :2 ) root ; ")
    assert t.leaf_labels == {"x y", "it's"}
    assert t.root.label == "root"
    assert newick_serialize(t) == "('it''s':2,'x y':0.15)root;"
    assert newick_parse(newick_serialize(t)).leaf_labels == t.leaf_labels


def test_serialize_canonical_order():
    assert newick_serialize(newick_parse("(c:1,(b:0.5,a:0.5):0.5);")) == "((a:0.5,b:0.5):0.5,c:1);"


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 40), st.integers(0, 2**32 - 1))
def test_round_trip(n, seed):
    t = generate_tree(n, seed)
    back = newick_parse(newick_serialize(t))
    assert same_tree(t, back)
    assert newick_serialize(back) == newick_serialize(t)


# -- robinson-foulds -----------------------------------------------------------

@pytest.mark.parametrize("s1, s2, expected", [
    ("((a,b),(c,d));", "((a,b),(c,d));", 0),
    ("((a,b),(c,d));", "((a,c),(b,d));", 4),
    ("(((a,b),c),d);", "((a,b),(c,d));", 2),
    ("(((a,b),c),d);", "(((a,b),d),c);", 2),
])
def test_rf_examples(s1, s2, expected):
    assert rf_difference(newick_parse(s1), newick_parse(s2)) == expected


def test_rf_leaf_mismatch():
    with pytest.raises(LeafSetMismatch):
        rf_difference(newick_parse("(a,b);"), newick_parse("(a,c);"))


def test_clades_exclude_trivial():
    t = newick_parse("(((a,b),c),d);")
    assert clades(t) == {frozenset("ab"), frozenset("abc")}
    assert all(2 <= len(c) <= 3 for c in clades(t))


trees = st.builds(generate_tree, st.just(7), st.integers(0, 2**32 - 1))


@settings(max_examples=200, deadline=None)
@given(trees, trees, trees)
def test_rf_is_a_metric(t1, t2, t3):
    d12 = rf_difference(t1, t2)
    assert d12 == rf_difference(t2, t1)
    assert (d12 == 0) == (clades(t1) == clades(t2))
    assert rf_difference(t1, t1) == 0
    assert rf_difference(t1, t3) <= d12 + rf_difference(t2, t3)


def test_rf_curve_full_list_is_zero():
    ds, _, _ = simulate_family(8, 20, seed=1)
    t = stability(ds)
    assert rf_curve(ds, t, [20]) == [(20, 0)]
    curve = rf_curve(ds, t, [1, 5, 20])
    assert curve[-1] == (20, 0)
    assert all(rf >= 0 for _, rf in curve)


def test_tree_rejects_duplicate_leaves():
    with pytest.raises(DuplicateLeaf):
        Tree(Node(None, (Node("a"), Node("a"))))
