"""Simplicial metric thickenings ``(X, K, phi)`` and their constructions.

``phi`` is a bijection from the vertices of ``K`` onto the points of ``X``.
A finitely-supported measure on ``X`` belongs to the thickening when the
preimage of its support is a face of ``K``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping

import networkx as nx
import numpy as np

from . import metric_space as ms
from . import simplicial_complex as sc
from .checks import CheckResult
from .errors import DomainError, StructuralError
from .measure import FiniteMeasure
from .metric_space import STAR, MetricSpace, PointedMetricSpace, product_label
from .simplicial_complex import SimplicialComplex

CLOSED = "closed"
OPEN = "open"


@dataclass(frozen=True)
class ScaleParameter:
    """Scale ``r`` in ``[0, inf]`` with a closed (``<=``) or open (``<``) comparison."""

    r: float
    convention: str = CLOSED

    def __post_init__(self):
        if math.isnan(self.r) or self.r < 0:
            raise DomainError(f"scale must be a nonnegative extended real, got {self.r}")
        if self.convention not in (CLOSED, OPEN):
            raise DomainError(f"convention must be 'closed' or 'open', got {self.convention!r}")

    def admits(self, values: np.ndarray) -> np.ndarray:
        return values <= self.r if self.convention == CLOSED else values < self.r


def _scale(s) -> ScaleParameter:
    return s if isinstance(s, ScaleParameter) else ScaleParameter(float(s))


@dataclass(frozen=True, eq=False)
class Thickening:
    space: MetricSpace
    complex: SimplicialComplex
    phi: Mapping[str, str]
    provenance: str = "custom"
    basepoint: str | None = None
    factors: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        phi = dict(self.phi)
        if set(phi) != set(self.complex.vertices):
            raise StructuralError("phi must be defined exactly on the complex's vertices")
        image = list(phi.values())
        if len(set(image)) != len(image) or set(image) != set(self.space.points):
            raise StructuralError("phi must be a bijection onto the points of the space")
        if self.basepoint is not None and self.basepoint not in self.space:
            raise DomainError(f"basepoint {self.basepoint!r} is not a point of the space")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "phi_inverse", {x: v for v, x in phi.items()})

    phi_inverse: dict = field(init=False, repr=False)

    def pointed(self, basepoint: str) -> Thickening:
        return replace(self, basepoint=basepoint)

    def face_of(self, points) -> frozenset:
        """Complex vertices corresponding to a set of space points."""
        try:
            return frozenset(self.phi_inverse[x] for x in points)
        except KeyError as exc:
            raise DomainError(f"unknown point {exc.args[0]!r}") from None

    def has_face(self, points) -> bool:
        return sc.membership(self.complex, self.face_of(points))


def _identity(points) -> dict[str, str]:
    return {p: p for p in points}


def _graph_complex(X: MetricSpace, adjacent: np.ndarray) -> SimplicialComplex:
    G = nx.Graph()
    G.add_nodes_from(range(len(X)))
    iu, ju = np.nonzero(np.triu(adjacent, k=1))
    G.add_edges_from(zip(iu.tolist(), ju.tolist()))
    cliques = [frozenset(X.points[i] for i in c) for c in nx.find_cliques(G)] if len(X) else []
    return SimplicialComplex(X.points, tuple(cliques))


def vietoris_rips(X: MetricSpace, s) -> Thickening:
    """Vietoris-Rips thickening: faces are the subsets of diameter ``<= r`` (or ``< r``).

    The complex is the clique complex of its 1-skeleton, so its maximal faces
    are the maximal cliques of the scale graph.  Singletons are always faces.
    """
    s = _scale(s)
    K = _graph_complex(X, s.admits(X.dist))
    tag = "vr" if s.convention == CLOSED else "vr-strict"
    return Thickening(X, K, _identity(X.points), tag)


def cech(X: MetricSpace, s) -> Thickening:
    """Intrinsic Čech thickening with closed balls (open under the strict convention).

    A set is a face when some point of ``X`` lies within ``r`` of all of its
    members, so the maximal faces are the maximal balls around points of ``X``.
    """
    s = _scale(s)
    near = s.admits(X.dist)
    balls = [frozenset(X.points[j] for j in np.flatnonzero(row)) for row in near]
    K = SimplicialComplex.from_faces(X.points, balls)
    return Thickening(X, K, _identity(X.points), "cech" if s.convention == CLOSED else "cech-strict")


def contains(T: Thickening, mu: FiniteMeasure) -> bool:
    if mu.space != T.space:
        raise DomainError("measure does not live on the thickening's space")
    return T.has_face(mu.support)


def failing_face(T: Thickening, mu: FiniteMeasure) -> tuple[str, ...] | None:
    """The complex-vertex set of ``mu``'s support when it is not a face, else ``None``."""
    if contains(T, mu):
        return None
    return T.complex.sorted_face(T.face_of(mu.support))


def thickening_product(M: Thickening, N: Thickening) -> Thickening:
    space = ms.linf_product(M.space, N.space)
    K = sc.product(M.complex, N.complex)
    phi = {
        product_label(u, v): product_label(M.phi[u], N.phi[v])
        for u in M.complex.vertices
        for v in N.complex.vertices
    }
    return Thickening(space, K, phi, "product", factors=(M, N))


def thickening_wedge(
    M: Thickening, N: Thickening, vertex_basepoints: tuple[str, str] | None = None
) -> Thickening:
    """Glue two pointed thickenings at their basepoints.

    ``vertex_basepoints`` may name the complex basepoints explicitly; they
    must correspond to the space basepoints under ``phi``.
    """
    if M.basepoint is None or N.basepoint is None:
        raise DomainError("both thickenings need a basepoint")
    v0, w0 = M.phi_inverse[M.basepoint], N.phi_inverse[N.basepoint]
    if vertex_basepoints is not None and tuple(vertex_basepoints) != (v0, w0):
        raise DomainError("complex basepoints do not match the space basepoints under phi")
    pointed = ms.wedge(PointedMetricSpace(M.space, M.basepoint), PointedMetricSpace(N.space, N.basepoint))
    K = sc.wedge(M.complex, v0, N.complex, w0)
    _, lx, rx = ms.glue_labels(M.space.points, N.space.points, (M.basepoint, N.basepoint))
    _, lk, rk = ms.glue_labels(M.complex.vertices, N.complex.vertices, (v0, w0))
    phi = {lk[v]: lx[M.phi[v]] for v in M.complex.vertices}
    phi.update({rk[w]: rx[N.phi[w]] for w in N.complex.vertices})
    return Thickening(pointed.space, K, phi, "wedge", basepoint=STAR, factors=(M, N))


def thickening_coproduct(M: Thickening, N: Thickening) -> Thickening:
    space = ms.coproduct(M.space, N.space)
    K = sc.coproduct(M.complex, N.complex)
    _, lx, rx = ms.glue_labels(M.space.points, N.space.points)
    _, lk, rk = ms.glue_labels(M.complex.vertices, N.complex.vertices)
    phi = {lk[v]: lx[M.phi[v]] for v in M.complex.vertices}
    phi.update({rk[w]: rx[N.phi[w]] for w in N.complex.vertices})
    return Thickening(space, K, phi, "coproduct", factors=(M, N))


def validate_morphism(
    f: Mapping[str, str], g: Mapping[str, str], M: Thickening, N: Thickening
) -> CheckResult:
    """Whether ``(f, g)`` is a morphism ``M -> N``.

    Requires ``f`` short, ``g`` simplicial, and ``f(phi(v)) == psi(g(v))`` for
    every vertex ``v`` of ``M``'s complex.
    """
    failures: list = []
    try:
        short = ms.is_short(f, M.space, N.space)
        if not short:
            failures.append(("not-short", short.first))
    except DomainError as exc:
        failures.append(("point-map", str(exc)))
    try:
        simplicial = sc.is_simplicial_map(g, M.complex, N.complex)
        if not simplicial:
            failures.append(("not-simplicial", simplicial.first))
    except DomainError as exc:
        failures.append(("vertex-map", str(exc)))
    for v in M.complex.vertices:
        x = M.phi[v]
        if x in f and v in g and g[v] in N.phi and f[x] != N.phi[g[v]]:
            failures.append(("square", v))
    return CheckResult.from_failures(failures)


def wedge_hypothesis_check(V: Thickening, M: Thickening, N: Thickening) -> CheckResult:
    """Check that ``V``'s complex contains ``K v L`` and absorbs the basepoint.

    Every face of ``V`` lying on neither side must stay a face after adding
    the basepoint; testing maximal faces suffices.  Failures are either
    ``("missing", face)`` for a face of ``K v L`` absent from ``V`` or
    ``("no-basepoint", face)`` for a mixed maximal face without ``⋆``.
    """
    W = thickening_wedge(M, N)
    if V.space != W.space:
        raise DomainError("V's space is not the wedge of the two factor spaces")
    failures = []
    for face in W.complex.maximal_faces:
        points = [W.phi[v] for v in face]
        if not V.has_face(points):
            failures.append(("missing", tuple(sorted(points, key=W.space.index.__getitem__))))
    origin = W.space.provenance.origin
    for face in V.complex.maximal_faces:
        points = {V.phi[v] for v in face}
        sides = {origin[x][0] for x in points} - {None}
        if len(sides) > 1 and STAR not in points:
            failures.append(("no-basepoint", tuple(sorted(points, key=V.space.index.__getitem__))))
    return CheckResult.from_failures(failures)


def mixed_faces(V: Thickening, W: Thickening) -> list[tuple[str, ...]]:
    """Maximal faces of ``V`` (as point sets) that are not faces of ``W`` over the same space."""
    if V.space != W.space:
        raise DomainError("thickenings live on different spaces")
    out = []
    for face in V.complex.maximal_faces:
        points = [V.phi[v] for v in face]
        if not W.has_face(points):
            out.append(tuple(sorted(points, key=V.space.index.__getitem__)))
    return out
