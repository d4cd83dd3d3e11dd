from itertools import chain, combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metric_thickenings.errors import DomainError, StructuralError
from metric_thickenings.metric_space import STAR
from metric_thickenings.simplicial_complex import (
    SimplicialComplex,
    coproduct,
    f_vector,
    faces,
    is_simplicial_map,
    membership,
    product,
    wedge,
)


def simplex(*vs):
    return SimplicialComplex(vs, (frozenset(vs),))


def edge(a, b):
    return simplex(a, b)


def all_faces(K):
    """Every face, by brute-force closure of the maximal faces."""
    out = set()
    for f in K.maximal_faces:
        for k in range(1, len(f) + 1):
            out.update(frozenset(c) for c in combinations(sorted(f), k))
    return out


@st.composite
def complexes(draw, prefix="v", max_vertices=6):
    n = draw(st.integers(1, max_vertices))
    vs = [f"{prefix}{i}" for i in range(n)]
    gens = draw(st.lists(st.lists(st.sampled_from(vs), min_size=1, max_size=4, unique=True), max_size=5))
    return SimplicialComplex.from_faces(vs, gens)


def test_invariants_enforced():
    with pytest.raises(StructuralError):
        SimplicialComplex(("a", "b"), (frozenset("a"),))
    with pytest.raises(StructuralError):
        SimplicialComplex(("a", "b"), (frozenset("ab"), frozenset("a")))
    with pytest.raises(StructuralError):
        SimplicialComplex(("a",), (frozenset("az"),))


def test_membership_examples():
    K = SimplicialComplex.from_faces("abcd", ["abc", "cd"])
    assert all(membership(K, [v]) for v in "abcd")
    assert membership(K, "ab") and membership(K, "abc")
    assert not membership(K, "ad")
    with pytest.raises(DomainError):
        membership(K, "az")
    with pytest.raises(DomainError):
        membership(K, [])


@settings(max_examples=60, deadline=None)
@given(complexes(), st.data())
def test_membership_downward_closed(K, data):
    top = data.draw(st.sampled_from(K.maximal_faces))
    sub = data.draw(st.lists(st.sampled_from(sorted(top)), min_size=1, unique=True))
    assert membership(K, sub)


@settings(max_examples=60, deadline=None)
@given(complexes())
def test_membership_matches_closure(K):
    closure = all_faces(K)
    for k in range(1, len(K.vertices) + 1):
        for c in combinations(K.vertices, k):
            assert membership(K, c) == (frozenset(c) in closure)


def test_product_of_edges():
    P = product(edge("a", "b"), edge("c", "d"))
    assert len(P.maximal_faces) == 1 and len(P.maximal_faces[0]) == 4
    assert membership(P, ["(a,c)", "(b,c)"])
    assert len(faces(P, 3)) == 1


def test_product_with_point_is_isomorphic():
    K = SimplicialComplex.from_faces("abcd", ["abc", "cd"])
    P = product(simplex("o"), K)
    assert P.relabel({f"(o,{v})": v for v in K.vertices}) == K


@settings(max_examples=40, deadline=None)
@given(complexes("x", 4), complexes("y", 4))
def test_product_is_projection_criterion(K, L):
    P = product(K, L)
    origin = P.provenance.origin
    fk, fl = all_faces(K), all_faces(L)
    for k in range(1, 4):
        for c in combinations(P.vertices, k):
            left = frozenset(origin[v][0] for v in c)
            right = frozenset(origin[v][1] for v in c)
            assert membership(P, c) == (left in fk and right in fl)
    assert is_simplicial_map({v: origin[v][0] for v in P.vertices}, P, K)
    assert is_simplicial_map({v: origin[v][1] for v in P.vertices}, P, L)
    assert len(P.maximal_faces) == len(K.maximal_faces) * len(L.maximal_faces)


def test_coproduct():
    K = edge("a", "b")
    assert coproduct(K, SimplicialComplex((), ())) == K
    C = coproduct(edge("a", "b"), edge("c", "d"))
    assert len(C.maximal_faces) == 2
    assert not membership(C, "ac")
    assert len(C.vertices) == 4


def test_wedge_examples():
    W = wedge(simplex("p"), "p", simplex("q"), "q")
    assert W.vertices == (STAR,) and W.maximal_faces == (frozenset([STAR]),)
    P = wedge(edge("s", "x"), "s", edge("t", "y"), "t")
    assert P.vertices == (STAR, "x", "y")
    assert set(P.maximal_faces) == {frozenset([STAR, "x"]), frozenset([STAR, "y"])}
    assert not membership(P, "xy")
    with pytest.raises(DomainError):
        wedge(edge("s", "x"), "nope", edge("t", "y"), "t")


@settings(max_examples=40, deadline=None)
@given(complexes("x", 5), complexes("y", 5), st.data())
def test_wedge_face_counts(K, L, data):
    v0 = data.draw(st.sampled_from(K.vertices))
    w0 = data.draw(st.sampled_from(L.vertices))
    W = wedge(K, v0, L, w0)
    assert len(W.vertices) == len(K.vertices) + len(L.vertices) - 1
    top = max(K.dimension, L.dimension)
    fk, fl, fw = f_vector(K, top), f_vector(L, top), f_vector(W, top)
    assert fw[0] == fk[0] + fl[0] - 1
    assert fw[1:] == [a + b for a, b in zip(fk[1:], fl[1:])]


def test_simplicial_maps():
    K = SimplicialComplex.from_faces("abc", ["ab", "bc"])
    assert is_simplicial_map({v: v for v in "abc"}, K, K)
    assert is_simplicial_map({v: "a" for v in "abc"}, K, K)
    swap = is_simplicial_map({"a": "a", "b": "c", "c": "b"}, K, K)
    assert not swap and swap.first == ("a", "b")
    with pytest.raises(DomainError):
        is_simplicial_map({"a": "a"}, K, K)


def test_faces_enumeration():
    assert faces(edge("a", "b"), 0) == [("a",), ("b",)]
    assert faces(simplex("a", "b", "c"), 1) == [("a", "b"), ("a", "c"), ("b", "c")]
    assert faces(simplex("a", "b", "c"), 3) == []
    capped = SimplicialComplex(("a", "b", "c"), (frozenset("abc"),), dim_cap=1)
    assert faces(capped, 2) == []
    with pytest.raises(DomainError):
        faces(capped, -1)


def test_json_round_trip():
    K = SimplicialComplex.from_faces("abcd", ["abc", "cd"])
    data = K.to_json()
    assert data == {"vertices": ["a", "b", "c", "d"], "maximal_faces": [["a", "b", "c"], ["c", "d"]]}
    assert SimplicialComplex.from_json(data) == K


def test_faces_sorted_deterministically():
    K = SimplicialComplex.from_faces("dcba", ["ab", "cd", "bc"])
    assert faces(K, 1) == [("d", "c"), ("c", "b"), ("b", "a")]
    got = list(chain.from_iterable(faces(K, d) for d in range(2)))
    assert len(got) == 7
