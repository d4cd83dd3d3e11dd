"""Abstract simplicial complexes stored by their maximal faces.

Membership is a subset query against the maximal faces, so downward
closure holds by construction and full face lists are only produced on
demand (:func:`faces`).  The empty set is never a face.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .checks import CheckResult
from .errors import DomainError, StructuralError
from .metric_space import STAR, Provenance, glue_labels, product_label


def _prune(faces: Iterable[frozenset]) -> list[frozenset]:
    """Drop duplicates and faces contained in another face."""
    unique = sorted(set(faces), key=len, reverse=True)
    kept: list[frozenset] = []
    for f in unique:
        if not any(f <= g for g in kept):
            kept.append(f)
    return kept


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    vertices: tuple[str, ...]
    maximal_faces: tuple[frozenset, ...]
    dim_cap: int | None = None
    provenance: Provenance | None = field(default=None, compare=False)

    def __post_init__(self):
        vertices = tuple(str(v) for v in self.vertices)
        if len(set(vertices)) != len(vertices):
            raise StructuralError("vertex labels must be distinct")
        index = {v: i for i, v in enumerate(vertices)}
        faces = []
        for f in self.maximal_faces:
            f = frozenset(str(v) for v in f)
            if not f:
                raise StructuralError("the empty set is not a face")
            unknown = f - index.keys()
            if unknown:
                raise StructuralError(f"face uses unknown vertex {sorted(unknown)[0]!r}")
            faces.append(f)
        pruned = _prune(faces)
        if len(pruned) != len(faces):
            raise StructuralError("maximal faces contain duplicates or a dominated face")
        covered = set().union(*faces) if faces else set()
        if covered != set(vertices):
            missing = [v for v in vertices if v not in covered]
            raise StructuralError(f"vertex {missing[0]!r} lies in no maximal face")
        faces.sort(key=lambda f: sorted(index[v] for v in f))
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "maximal_faces", tuple(faces))
        object.__setattr__(self, "index", index)

    index: dict = field(init=False, repr=False, compare=False)

    @classmethod
    def from_faces(
        cls,
        vertices: Sequence[str],
        faces: Iterable[Iterable[str]],
        dim_cap: int | None = None,
        provenance: Provenance | None = None,
    ) -> SimplicialComplex:
        """Complex generated by ``faces``; uncovered vertices become isolated."""
        faces = [frozenset(f) for f in faces]
        faces = [f for f in faces if f]
        covered = set().union(*faces) if faces else set()
        faces += [frozenset([v]) for v in vertices if v not in covered]
        return cls(tuple(vertices), tuple(_prune(faces)), dim_cap, provenance)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return set(self.vertices) == set(other.vertices) and set(self.maximal_faces) == set(
            other.maximal_faces
        )

    def __hash__(self) -> int:
        return hash(frozenset(self.maximal_faces))

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def dimension(self) -> int:
        return max((len(f) for f in self.maximal_faces), default=0) - 1

    def sorted_face(self, face: Iterable[str]) -> tuple[str, ...]:
        return tuple(sorted(face, key=self.index.__getitem__))

    def canonical_faces(self) -> list[tuple[str, ...]]:
        return [self.sorted_face(f) for f in self.maximal_faces]

    def relabel(self, mapping: Mapping[str, str]) -> SimplicialComplex:
        return SimplicialComplex(
            tuple(mapping[v] for v in self.vertices),
            tuple(frozenset(mapping[v] for v in f) for f in self.maximal_faces),
            self.dim_cap,
        )

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "maximal_faces": [list(f) for f in self.canonical_faces()]}

    @classmethod
    def from_json(cls, data: Mapping) -> SimplicialComplex:
        return cls.from_faces(data["vertices"], data["maximal_faces"])


def membership(K: SimplicialComplex, sigma: Iterable[str]) -> bool:
    sigma = frozenset(sigma)
    if not sigma:
        raise DomainError("the empty set is not a face")
    unknown = sigma - K.index.keys()
    if unknown:
        raise DomainError(f"vertex {sorted(unknown)[0]!r} is not in the complex")
    return any(sigma <= m for m in K.maximal_faces)


def product(K: SimplicialComplex, L: SimplicialComplex) -> SimplicialComplex:
    """Categorical product: a set of pairs is a face iff both projections are faces.

    Its maximal faces are exactly the products of maximal faces.
    """
    vertices = tuple(product_label(a, b) for a in K.vertices for b in L.vertices)
    faces = tuple(
        frozenset(product_label(a, b) for a in s for b in t)
        for s in K.maximal_faces
        for t in L.maximal_faces
    )
    origin = {product_label(a, b): (a, b) for a in K.vertices for b in L.vertices}
    return SimplicialComplex(vertices, faces, _joint_cap(K, L), Provenance("product", K, L, origin))


def coproduct(K: SimplicialComplex, L: SimplicialComplex) -> SimplicialComplex:
    if not L.vertices:
        return K
    if not K.vertices:
        return L
    labels, lmap, rmap = glue_labels(K.vertices, L.vertices)
    faces = [frozenset(lmap[v] for v in f) for f in K.maximal_faces]
    faces += [frozenset(rmap[v] for v in f) for f in L.maximal_faces]
    origin: dict[str, tuple] = {lmap[v]: (0, v) for v in K.vertices}
    origin.update({rmap[v]: (1, v) for v in L.vertices})
    return SimplicialComplex(tuple(labels), tuple(faces), _joint_cap(K, L), Provenance("coproduct", K, L, origin))


def wedge(K: SimplicialComplex, v0: str, L: SimplicialComplex, w0: str) -> SimplicialComplex:
    """Glue ``K`` and ``L`` at ``v0 ~ w0``; the glued vertex is labelled ``⋆``."""
    if v0 not in K.index:
        raise DomainError(f"basepoint {v0!r} is not a vertex of the left complex")
    if w0 not in L.index:
        raise DomainError(f"basepoint {w0!r} is not a vertex of the right complex")
    labels, lmap, rmap = glue_labels(K.vertices, L.vertices, (v0, w0))
    faces = [frozenset(lmap[v] for v in f) for f in K.maximal_faces]
    faces += [frozenset(rmap[v] for v in f) for f in L.maximal_faces]
    origin: dict[str, tuple] = {lmap[v]: (0, v) for v in K.vertices if v != v0}
    origin.update({rmap[v]: (1, v) for v in L.vertices if v != w0})
    origin[STAR] = (None, (v0, w0))
    # {⋆} alone may be maximal on one side and dominated on the other
    return SimplicialComplex(
        tuple(labels), tuple(_prune(faces)), _joint_cap(K, L), Provenance("wedge", K, L, origin, STAR)
    )


def is_simplicial_map(g: Mapping[str, str], K: SimplicialComplex, L: SimplicialComplex) -> CheckResult:
    """Whether ``g`` sends faces to faces; checking maximal faces suffices."""
    missing = [v for v in K.vertices if v not in g]
    if missing:
        raise DomainError(f"vertex map is not defined on {missing[0]!r}")
    bad = [g[v] for v in K.vertices if g[v] not in L.index]
    if bad:
        raise DomainError(f"image vertex {bad[0]!r} is not in the target complex")
    for f in K.maximal_faces:
        image = frozenset(g[v] for v in f)
        if not membership(L, image):
            return CheckResult(False, (K.sorted_face(f),))
    return CheckResult(True)


def faces(K: SimplicialComplex, dim: int) -> list[tuple[str, ...]]:
    """All faces of exactly dimension ``dim``, in lexicographic vertex-index order.

    Empty beyond the dimension of ``K`` or beyond ``K.dim_cap`` when set.
    """
    if dim < 0:
        raise DomainError("dimension must be nonnegative")
    if K.dim_cap is not None and dim > K.dim_cap:
        return []
    k = dim + 1
    found: set[tuple[int, ...]] = set()
    for f in K.maximal_faces:
        if len(f) < k:
            continue
        idx = sorted(K.index[v] for v in f)
        found.update(combinations(idx, k))
    return [tuple(K.vertices[i] for i in c) for c in sorted(found)]


def f_vector(K: SimplicialComplex, max_dim: int) -> list[int]:
    return [len(faces(K, d)) for d in range(max_dim + 1)]


def _joint_cap(K: SimplicialComplex, L: SimplicialComplex) -> int | None:
    caps = [c for c in (K.dim_cap, L.dim_cap) if c is not None]
    return min(caps) if caps else None
