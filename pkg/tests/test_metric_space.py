import math
from itertools import combinations, permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import pointed_spaces, spaces
from metric_thickenings.errors import DomainError, StructuralError
from metric_thickenings.metric_space import (
    CLASSICAL,
    EXTENDED,
    PSEUDO,
    STAR,
    MetricSpace,
    PointedMetricSpace,
    coproduct,
    diameter,
    discrete,
    from_points,
    is_short,
    linf_product,
    validate,
    wedge,
)


def brute_triangle(space):
    """Every ordered violating triple (i, j, k): d(i,k) > d(i,j) + d(j,k), up to relative slack 1e-9."""
    D = space.dist
    n = len(space)
    out = set()
    for i, j, k in permutations(range(n), 3):
        via = D[i, j] + D[j, k]
        if D[i, k] > via + 1e-9 * max(via, 1.0):
            out.add((i, j, k))
    return out


def test_single_point_is_classical():
    X = MetricSpace(("a",), [[0]])
    assert validate(X) == []
    assert X.flavor == CLASSICAL


def test_triangle_violation_reported_at_b_a_c():
    X = MetricSpace(("a", "b", "c"), [[0, 1, 1], [1, 0, 3], [1, 3, 0]])
    found = validate(X)
    assert [v.axiom for v in found] == ["triangle"]
    assert found[0].labels == ("b", "a", "c")
    oracle = {t for t in brute_triangle(X) if t[0] < t[2]}
    assert {v.indices for v in found} == oracle


def test_collinear_rounding_is_not_a_violation():
    # sqrt(2) + sqrt(18) rounds one ulp below sqrt(32)
    X = from_points(["p", "q", "r"], np.array([[0.0, 0.0], [1.0, 1.0], [4.0, 4.0]]), "l2")
    assert X.dist[0, 2] > X.dist[0, 1] + X.dist[1, 2]
    assert validate(X) == []
    slightly = MetricSpace(("a", "b", "c"), [[0, 1, 2 + 1e-6], [1, 0, 1], [2 + 1e-6, 1, 0]])
    assert [v.axiom for v in validate(slightly)] == ["triangle"]


def test_infinite_distance_is_extended():
    X = MetricSpace(("a", "b"), [[0, math.inf], [math.inf, 0]])
    assert validate(X) == []
    assert X.flavor == EXTENDED


def test_other_axioms():
    bad = MetricSpace(("a", "b"), [[1, 2], [3, 0]])
    axioms = {v.axiom for v in validate(bad)}
    assert axioms == {"zero-diagonal", "symmetry"}
    neg = MetricSpace(("a", "b"), [[0, -1], [-1, 0]])
    assert "nonnegativity" in {v.axiom for v in validate(neg)}


def test_shape_mismatch():
    with pytest.raises(StructuralError):
        MetricSpace(("a", "b"), [[0]])
    with pytest.raises(StructuralError):
        MetricSpace(("a",), [[0, 1]])
    with pytest.raises(StructuralError):
        MetricSpace(("a", "a"), np.zeros((2, 2)))


@settings(max_examples=60, deadline=None)
@given(spaces(max_size=7))
def test_validate_matches_exhaustive_scan(X):
    D = X.dist.copy()
    i, j = 0, len(X) - 1
    if i != j:
        D[i, j] = D[j, i] = D[i, j] * 3 + 1
    Y = MetricSpace(X.points, D)
    found = {v.indices for v in validate(Y) if v.axiom == "triangle"}
    assert found == {t for t in brute_triangle(Y) if t[0] < t[2]}


def test_product_of_two_segments():
    X = MetricSpace(("0", "1"), [[0, 1], [1, 0]])
    Y = MetricSpace(("0", "1"), [[0, 2], [2, 0]])
    P = linf_product(X, Y)
    assert P.points == ("(0,0)", "(0,1)", "(1,0)", "(1,1)")
    assert P.d("(0,0)", "(1,1)") == 2
    assert P.d("(0,0)", "(1,0)") == 1
    assert validate(P) == []


@settings(max_examples=40, deadline=None)
@given(spaces(max_size=4))
def test_product_with_point_is_isometric(Y):
    P = linf_product(MetricSpace(("o",), [[0]]), Y)
    assert np.array_equal(P.dist, Y.dist)
    assert P.points == tuple(f"(o,{y})" for y in Y.points)


@settings(max_examples=40, deadline=None)
@given(spaces(max_size=4, prefix="x"), spaces(max_size=4, prefix="y"))
def test_product_valid_and_projections_short(X, Y):
    P = linf_product(X, Y)
    assert validate(P) == []
    origin = P.provenance.origin
    assert is_short({p: origin[p][0] for p in P.points}, P, X)
    assert is_short({p: origin[p][1] for p in P.points}, P, Y)


def test_wedge_of_two_segments():
    X = PointedMetricSpace(MetricSpace(("s", "x"), [[0, 1], [1, 0]]), "s")
    Y = PointedMetricSpace(MetricSpace(("t", "y"), [[0, 1], [1, 0]]), "t")
    W = wedge(X, Y)
    assert W.basepoint == STAR
    assert W.space.points == (STAR, "x", "y")
    assert W.space.d("x", "y") == 2
    assert validate(W.space) == []


@settings(max_examples=40, deadline=None)
@given(spaces(max_size=5))
def test_wedge_with_point_is_isometric(Y):
    point = PointedMetricSpace(MetricSpace(("o",), [[0]]), "o")
    W = wedge(point, PointedMetricSpace(Y, Y.points[0])).space
    assert np.array_equal(W.dist, Y.dist)


@settings(max_examples=60, deadline=None)
@given(pointed_spaces(prefix="p"), pointed_spaces(prefix="p"))
def test_wedge_properties(X, Y):
    W = wedge(X, Y).space
    assert validate(W) == []
    origin = W.provenance.origin
    star = STAR
    for side, P in ((0, X), (1, Y)):
        # inclusions are isometric embeddings
        labels = {origin[w][1]: w for w in W.points if origin[w][0] == side}
        labels[P.basepoint] = star
        for a, b in combinations(P.space.points, 2):
            assert W.d(labels[a], labels[b]) == P.space.d(a, b)
    for x in W.points:
        for y in W.points:
            if origin[x][0] == 0 and origin[y][0] == 1:
                assert W.d(x, y) >= max(W.d(x, star), W.d(y, star))
                assert W.d(x, y) == W.d(x, star) + W.d(star, y)


def test_wedge_relabels_colliding_points():
    X = PointedMetricSpace(MetricSpace(("s", "x"), [[0, 1], [1, 0]]), "s")
    W = wedge(X, X).space
    assert W.points == (STAR, "0:x", "1:x")
    assert W.provenance.origin["1:x"] == (1, "x")


def test_coproduct():
    a = MetricSpace(("a",), [[0]])
    b = MetricSpace(("b",), [[0]])
    C = coproduct(a, b)
    assert C.d("a", "b") == math.inf
    assert validate(C) == [] and C.flavor == EXTENDED
    assert coproduct(a, MetricSpace((), np.zeros((0, 0)))) == a


@settings(max_examples=30, deadline=None)
@given(spaces(max_size=4), spaces(max_size=4))
def test_coproduct_valid(X, Y):
    C = coproduct(X, Y)
    assert validate(C) == []
    assert C.flavor == EXTENDED
    assert len(C) == len(X) + len(Y)


def test_discrete():
    zero = discrete(["a", "b"], 0)
    assert zero.d("a", "b") == 0 and zero.flavor == PSEUDO and validate(zero) == []
    inf = discrete(["a", "b"], math.inf)
    assert inf.d("a", "b") == math.inf and inf.flavor == EXTENDED
    assert len(discrete(["a"], 5)) == 1


def test_diameter():
    X = MetricSpace(("a", "b", "c"), [[0, 1, 1], [1, 0, 3], [1, 3, 0]])
    assert diameter(X, ["a"]) == 0
    assert diameter(X, ["b", "c"]) == 3
    C = coproduct(MetricSpace(("p",), [[0]]), MetricSpace(("q",), [[0]]))
    assert diameter(C, ["p", "q"]) == math.inf
    with pytest.raises(DomainError):
        diameter(X, [])


@settings(max_examples=40, deadline=None)
@given(spaces(min_size=2, max_size=6), st.data())
def test_diameter_monotone(X, data):
    big = data.draw(st.lists(st.sampled_from(X.points), min_size=1, unique=True))
    small = data.draw(st.lists(st.sampled_from(big), min_size=1, unique=True))
    assert diameter(X, small) <= diameter(X, big)


def test_is_short():
    X = MetricSpace(("a", "b", "c"), [[0, 1, 1], [1, 0, 2], [1, 2, 0]])
    assert is_short({p: p for p in X.points}, X, X)
    assert is_short({p: "a" for p in X.points}, X, X)
    two = discrete(["a", "b"], 2)
    one = discrete(["u", "v"], 1)
    assert is_short({"a": "u", "b": "v"}, two, one)
    back = is_short({"u": "a", "v": "b"}, one, two)
    assert not back and back.first == ("u", "v")
    with pytest.raises(DomainError):
        is_short({"a": "u"}, two, one)
