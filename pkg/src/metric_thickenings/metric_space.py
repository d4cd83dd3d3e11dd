"""Finite (pseudo-, extended-) metric spaces and their constructions.

A :class:`MetricSpace` is an ordered tuple of string labels together with a
symmetric matrix of distances in ``[0, +inf]``.  The constructions here are
the L-infinity product, the wedge sum (gluing at basepoints), the coproduct
(disjoint union at infinite distance) and the discrete spaces ``D_r``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from .checks import CheckResult
from .errors import DomainError, StructuralError

STAR = "⋆"
ATOL = 1e-9

CLASSICAL = "classical"
PSEUDO = "pseudo"
EXTENDED = "extended"
EXTENDED_PSEUDO = "extended-pseudo"


def product_label(a: str, b: str) -> str:
    return f"({a},{b})"


def glue_labels(
    left: Sequence[str], right: Sequence[str], glue: tuple[str, str] | None = None
) -> tuple[list[str], dict[str, str], dict[str, str]]:
    """Labels for a disjoint union, optionally identifying one point of each side.

    Returns ``(labels, left_map, right_map)`` where the maps send old labels
    to new ones.  Labels are kept verbatim unless the two sides collide (or
    use the reserved basepoint symbol), in which case every label is tagged
    with ``0:`` or ``1:``.  A glued pair becomes the single point ``⋆``, which
    takes the position of the left basepoint.
    """
    lb, rb = glue if glue is not None else (None, None)
    left_rest = [a for a in left if a != lb]
    right_rest = [b for b in right if b != rb]
    clash = (
        bool(set(left_rest) & set(right_rest))
        or (glue is not None and STAR in set(left_rest) | set(right_rest))
    )
    left_map: dict[str, str] = {}
    right_map: dict[str, str] = {}
    labels: list[str] = []
    for a in left:
        new = STAR if a == lb else (f"0:{a}" if clash else a)
        left_map[a] = new
        labels.append(new)
    for b in right:
        if b == rb:
            right_map[b] = STAR
            continue
        new = f"1:{b}" if clash else b
        right_map[b] = new
        labels.append(new)
    return labels, left_map, right_map


@dataclass(frozen=True)
class Provenance:
    """How a space (or complex) was assembled from two others.

    ``origin`` maps each new label to ``(a, b)`` for products and to
    ``(side, old_label)`` for wedges and coproducts, ``side`` in ``{0, 1}``.
    The wedge basepoint maps to ``(None, (left_base, right_base))``.
    """

    kind: str
    left: object
    right: object
    origin: Mapping[str, tuple]
    basepoint: str | None = None

    def side_of(self, label: str) -> int | None:
        return self.origin[label][0]


@dataclass(frozen=True)
class Violation:
    axiom: str
    indices: tuple[int, ...]
    labels: tuple[str, ...]

    def __str__(self) -> str:
        return f"{self.axiom} at ({','.join(self.labels)})"


@dataclass(frozen=True, eq=False)
class MetricSpace:
    points: tuple[str, ...]
    dist: np.ndarray
    provenance: Provenance | None = field(default=None, compare=False)

    def __post_init__(self):
        points = tuple(str(p) for p in self.points)
        dist = np.array(self.dist, dtype=float, copy=True)
        if dist.size == 0 and not points:
            dist = np.zeros((0, 0))
        if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
            raise StructuralError(f"distance matrix must be square, got shape {dist.shape}")
        if dist.shape[0] != len(points):
            raise StructuralError(
                f"{len(points)} labels but distance matrix is {dist.shape[0]}x{dist.shape[1]}"
            )
        if len(set(points)) != len(points):
            raise StructuralError("point labels must be distinct")
        dist.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "dist", dist)
        object.__setattr__(self, "index", {p: i for i, p in enumerate(points)})

    index: dict = field(init=False, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, label) -> bool:
        return label in self.index

    def __eq__(self, other) -> bool:
        if not isinstance(other, MetricSpace):
            return NotImplemented
        return self.points == other.points and np.array_equal(self.dist, other.dist)

    def __hash__(self) -> int:
        return hash(self.points)

    def d(self, x: str, y: str) -> float:
        return float(self.dist[self.index[x], self.index[y]])

    def indices(self, labels: Iterable[str]) -> list[int]:
        try:
            return [self.index[p] for p in labels]
        except KeyError as exc:
            raise DomainError(f"unknown point {exc.args[0]!r}") from None

    @cached_property
    def flavor(self) -> str:
        n = len(self.points)
        off = self.dist[~np.eye(n, dtype=bool)]
        infinite = bool(np.isinf(off).any())
        zero = bool((off == 0).any())
        if infinite:
            return EXTENDED_PSEUDO if zero else EXTENDED
        return PSEUDO if zero else CLASSICAL

    def pairwise_distances(self) -> np.ndarray:
        """Sorted distinct off-diagonal distances."""
        iu = np.triu_indices(len(self.points), k=1)
        return np.unique(self.dist[iu])

    def relabel(self, mapping: Mapping[str, str]) -> MetricSpace:
        return MetricSpace(tuple(mapping[p] for p in self.points), self.dist)

    def subspace(self, labels: Sequence[str]) -> MetricSpace:
        idx = self.indices(labels)
        return MetricSpace(tuple(labels), self.dist[np.ix_(idx, idx)])


@dataclass(frozen=True)
class PointedMetricSpace:
    space: MetricSpace
    basepoint: str

    def __post_init__(self):
        if self.basepoint not in self.space:
            raise DomainError(f"basepoint {self.basepoint!r} is not a point of the space")


def from_points(labels: Sequence[str], coords, metric: str = "l2") -> MetricSpace:
    """Metric space on a point cloud under the l1, l2 or linf norm."""
    coords = np.asarray(coords, dtype=float)
    if coords.ndim == 1:
        coords = coords[:, None]
    diff = np.abs(coords[:, None, :] - coords[None, :, :])
    if metric == "l1":
        dist = diff.sum(axis=-1)
    elif metric == "l2":
        dist = np.sqrt((diff**2).sum(axis=-1))
    elif metric == "linf":
        dist = diff.max(axis=-1) if coords.shape[1] else np.zeros(diff.shape[:2])
    else:
        raise DomainError(f"unknown metric {metric!r}; expected l1, l2 or linf")
    return MetricSpace(tuple(labels), dist)


def validate(space: MetricSpace) -> list[Violation]:
    """All metric-axiom violations, each with its witnessing indices.

    Comparisons are exact except the triangle inequality, which allows a
    relative slack of ``ATOL`` so that rounding in distances computed from
    coordinates (collinear points, say) is not reported.  Triangle violations
    are reported as ``(i, j, k)`` meaning ``d(i, k) > d(i, j) + d(j, k)``,
    listed once per unordered
    ``{i, k}``.  An empty list means the space is an extended pseudo-metric;
    :attr:`MetricSpace.flavor` then names the narrowest class it belongs to.
    """
    D = space.dist
    P = space.points
    n = len(P)
    out: list[Violation] = []

    def add(axiom, *idx):
        out.append(Violation(axiom, tuple(idx), tuple(P[i] for i in idx)))

    for i in np.flatnonzero(np.isnan(D.diagonal())):
        add("nan", int(i), int(i))
    for i, j in zip(*np.nonzero(np.isnan(D))):
        if i < j:
            add("nan", int(i), int(j))
    for i in range(n):
        if D[i, i] != 0:
            add("zero-diagonal", i)
    for i, j in zip(*np.nonzero(D < 0)):
        add("nonnegativity", int(i), int(j))
    for i, j in zip(*np.nonzero(D != D.T)):
        if i < j and not (np.isnan(D[i, j]) or np.isnan(D[j, i])):
            add("symmetry", int(i), int(j))
    # O(n^3): one (n, n) slab per intermediate point
    for j in range(n):
        via = D[:, j][:, None] + D[j, :][None, :]
        bad = D > via + ATOL * np.maximum(via, 1.0)
        for i, k in zip(*np.nonzero(bad)):
            if i < k:
                add("triangle", int(i), j, int(k))
    out.sort(key=lambda v: (v.axiom, v.indices))
    return out


def linf_product(X: MetricSpace, Y: MetricSpace) -> MetricSpace:
    """Cartesian product in row-major order with the max-of-coordinates metric."""
    labels = tuple(product_label(a, b) for a in X.points for b in Y.points)
    dist = np.maximum(X.dist[:, None, :, None], Y.dist[None, :, None, :])
    dist = dist.reshape(len(labels), len(labels))
    origin = {product_label(a, b): (a, b) for a in X.points for b in Y.points}
    return MetricSpace(labels, dist, Provenance("product", X, Y, origin))


def wedge(X: PointedMetricSpace, Y: PointedMetricSpace) -> PointedMetricSpace:
    """Glue two pointed spaces at their basepoints.

    Cross distances route through the basepoint:
    ``d(x, y) = d(x, ⋆_X) + d(⋆_Y, y)``.
    """
    labels, lmap, rmap = glue_labels(X.space.points, Y.space.points, (X.basepoint, Y.basepoint))
    pos = {p: i for i, p in enumerate(labels)}
    n = len(labels)
    dist = np.zeros((n, n))
    li = [pos[lmap[a]] for a in X.space.points]
    ri = [pos[rmap[b]] for b in Y.space.points]
    dist[np.ix_(li, li)] = X.space.dist
    dist[np.ix_(ri, ri)] = Y.space.dist
    to_x = X.space.dist[:, X.space.index[X.basepoint]]
    to_y = Y.space.dist[:, Y.space.index[Y.basepoint]]
    cross = to_x[:, None] + to_y[None, :]
    for a_pos, a in zip(li, X.space.points):
        for b_pos, b in zip(ri, Y.space.points):
            if a == X.basepoint or b == Y.basepoint:
                continue
            value = cross[X.space.index[a], Y.space.index[b]]
            dist[a_pos, b_pos] = dist[b_pos, a_pos] = value
    origin: dict[str, tuple] = {lmap[a]: (0, a) for a in X.space.points if a != X.basepoint}
    origin.update({rmap[b]: (1, b) for b in Y.space.points if b != Y.basepoint})
    origin[STAR] = (None, (X.basepoint, Y.basepoint))
    prov = Provenance("wedge", X, Y, origin, basepoint=STAR)
    return PointedMetricSpace(MetricSpace(tuple(labels), dist, prov), STAR)


def coproduct(X: MetricSpace, Y: MetricSpace) -> MetricSpace:
    """Disjoint union with every cross distance equal to +inf."""
    if len(Y) == 0:
        return X
    if len(X) == 0:
        return Y
    labels, lmap, rmap = glue_labels(X.points, Y.points)
    n, m = len(X), len(Y)
    dist = np.full((n + m, n + m), math.inf)
    dist[:n, :n] = X.dist
    dist[n:, n:] = Y.dist
    origin: dict[str, tuple] = {lmap[a]: (0, a) for a in X.points}
    origin.update({rmap[b]: (1, b) for b in Y.points})
    return MetricSpace(tuple(labels), dist, Provenance("coproduct", X, Y, origin))


def discrete(labels: Sequence[str], r: float) -> MetricSpace:
    """The set ``labels`` with every off-diagonal distance equal to ``r``."""
    if r < 0 or math.isnan(r):
        raise DomainError("r must be a nonnegative extended real")
    n = len(labels)
    dist = np.full((n, n), float(r))
    np.fill_diagonal(dist, 0.0)
    return MetricSpace(tuple(labels), dist)


def diameter(space: MetricSpace, subset: Iterable[str]) -> float:
    idx = space.indices(subset)
    if not idx:
        raise DomainError("diameter of the empty set is undefined")
    return float(space.dist[np.ix_(idx, idx)].max())


def is_short(f: Mapping[str, str], X: MetricSpace, Y: MetricSpace) -> CheckResult:
    """Whether ``f`` is 1-Lipschitz from ``X`` to ``Y``; stops at the first violating pair."""
    missing = [x for x in X.points if x not in f]
    if missing:
        raise DomainError(f"map is not defined on {missing[0]!r}")
    bad_image = [f[x] for x in X.points if f[x] not in Y]
    if bad_image:
        raise DomainError(f"image point {bad_image[0]!r} is not in the target space")
    img = Y.indices(f[x] for x in X.points)
    D_img = Y.dist[np.ix_(img, img)]
    for i, j in combinations(range(len(X)), 2):
        if D_img[i, j] > X.dist[i, j]:
            return CheckResult(False, ((X.points[i], X.points[j]),))
    return CheckResult(True)
