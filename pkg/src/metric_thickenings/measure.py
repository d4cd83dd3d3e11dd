"""Finitely-supported probability measures on a finite metric space."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import DomainError, StructuralError
from .metric_space import MetricSpace, linf_product, product_label

log = logging.getLogger(__name__)

MASS_ATOL = 1e-12
DROP_BELOW = 1e-15


@dataclass(frozen=True, eq=False)
class FiniteMeasure:
    """``sum_i w_i * delta(x_i)`` with every ``w_i > 0`` and total mass 1.

    Atoms are kept in the order of the ambient space's points.  A measure
    whose support spans an infinite distance has no finite moments and is
    rejected.
    """

    space: MetricSpace
    atoms: tuple[tuple[str, float], ...]

    def __post_init__(self):
        seen = {}
        for point, weight in self.atoms:
            if point not in self.space:
                raise DomainError(f"atom {point!r} is not a point of the ambient space")
            if point in seen:
                raise StructuralError(f"duplicate atom at {point!r}")
            weight = float(weight)
            if not weight > 0 or math.isinf(weight):
                raise DomainError(f"atom weight must lie in (0, 1], got {weight} at {point!r}")
            seen[point] = weight
        total = math.fsum(seen.values())
        if abs(total - 1.0) > MASS_ATOL:
            raise DomainError(f"total mass is {total!r}, not 1")
        order = self.space.index
        atoms = tuple(sorted(seen.items(), key=lambda a: order[a[0]]))
        object.__setattr__(self, "atoms", atoms)
        idx = [order[p] for p, _ in atoms]
        if np.isinf(self.space.dist[np.ix_(idx, idx)]).any():
            raise DomainError("support spans an infinite distance (no finite moments)")

    @property
    def support(self) -> frozenset:
        return frozenset(p for p, _ in self.atoms)

    @property
    def points(self) -> tuple[str, ...]:
        return tuple(p for p, _ in self.atoms)

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.atoms])

    @property
    def mass(self) -> float:
        return math.fsum(w for _, w in self.atoms)

    def weight(self, point: str) -> float:
        return dict(self.atoms).get(point, 0.0)

    def as_dict(self) -> dict[str, float]:
        return dict(self.atoms)

    def isclose(self, other: FiniteMeasure, atol: float = MASS_ATOL) -> bool:
        if self.space != other.space:
            return False
        a, b = self.as_dict(), other.as_dict()
        return all(abs(a.get(p, 0.0) - b.get(p, 0.0)) <= atol for p in a.keys() | b.keys())

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteMeasure):
            return NotImplemented
        return self.space == other.space and self.atoms == other.atoms

    def __hash__(self) -> int:
        return hash(self.atoms)

    def __repr__(self) -> str:
        body = " + ".join(f"{w:.6g}·δ[{p}]" for p, w in self.atoms)
        return f"FiniteMeasure({body})"

    def rehome(self, space: MetricSpace) -> FiniteMeasure:
        """The same atoms viewed in an equal space (e.g. one carrying other provenance)."""
        if space != self.space:
            raise DomainError("target space differs from the ambient space")
        return FiniteMeasure(space, self.atoms)

    def to_json(self, name: str = "") -> dict:
        return {"space": name, "atoms": [{"point": p, "weight": w} for p, w in self.atoms]}

    @classmethod
    def from_json(cls, space: MetricSpace, data: Mapping) -> FiniteMeasure:
        return from_weights(space, {a["point"]: float(a["weight"]) for a in data["atoms"]})


def from_weights(
    space: MetricSpace, weights: Mapping[str, float], renormalize: bool = False
) -> FiniteMeasure:
    """Build a measure from a weight mapping, dropping atoms at or below 1e-15.

    Mass is rescaled to 1 when tiny atoms were dropped or when
    ``renormalize`` is requested; otherwise the mass must already be 1.
    """
    kept = {}
    dropped = 0.0
    for p, w in weights.items():
        w = float(w)
        if w < -DROP_BELOW:
            raise DomainError(f"negative weight {w} at {p!r}")
        if w <= DROP_BELOW:
            dropped += max(w, 0.0)
            continue
        kept[p] = kept.get(p, 0.0) + w
    if not kept:
        raise DomainError("measure has no mass")
    if dropped > 0.0 or renormalize:
        total = math.fsum(kept.values())
        if dropped > 0.0:
            log.debug("dropped %.3g of mass in sub-threshold atoms; renormalizing", dropped)
        kept = {p: w / total for p, w in kept.items()}
    return FiniteMeasure(space, tuple(kept.items()))


def delta(space: MetricSpace, x: str) -> FiniteMeasure:
    if x not in space:
        raise DomainError(f"unknown point {x!r}")
    return FiniteMeasure(space, ((x, 1.0),))


def uniform(space: MetricSpace, points: Iterable[str]) -> FiniteMeasure:
    points = list(dict.fromkeys(points))
    return FiniteMeasure(space, tuple((p, 1.0 / len(points)) for p in points))


def support(mu: FiniteMeasure) -> frozenset:
    return mu.support


def is_absolutely_continuous(nu: FiniteMeasure, mu: FiniteMeasure) -> bool:
    """``nu << mu``; for atomic measures this is support inclusion."""
    if nu.space != mu.space:
        raise DomainError("measures live on different spaces")
    return nu.support <= mu.support


def pushforward(f: Mapping[str, str], mu: FiniteMeasure, target: MetricSpace) -> FiniteMeasure:
    out: dict[str, float] = {}
    for p, w in mu.atoms:
        if p not in f:
            raise DomainError(f"map is undefined on atom {p!r}")
        q = f[p]
        if q not in target:
            raise DomainError(f"image {q!r} is not a point of the target space")
        out[q] = out.get(q, 0.0) + w
    return from_weights(target, out)


def product_measure(
    mu: FiniteMeasure, nu: FiniteMeasure, space: MetricSpace | None = None
) -> FiniteMeasure:
    """Independent coupling on the L-infinity product of the two ambient spaces."""
    if space is None:
        space = linf_product(mu.space, nu.space)
    else:
        _check_product_of(space, mu.space, nu.space)
    weights = {product_label(x, y): a * b for x, a in mu.atoms for y, b in nu.atoms}
    return from_weights(space, weights)


def marginals(alpha: FiniteMeasure) -> tuple[FiniteMeasure, FiniteMeasure]:
    prov = alpha.space.provenance
    if prov is None or prov.kind != "product":
        raise DomainError("measure does not live on a recorded product space")
    first: dict[str, float] = {}
    second: dict[str, float] = {}
    for p, w in alpha.atoms:
        x, y = prov.origin[p]
        first[x] = first.get(x, 0.0) + w
        second[y] = second.get(y, 0.0) + w
    return from_weights(prov.left, first), from_weights(prov.right, second)


def convex_combination(t: float, mu: FiniteMeasure, nu: FiniteMeasure) -> FiniteMeasure:
    """``t * mu + (1 - t) * nu``."""
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"t must lie in [0, 1], got {t}")
    if mu.space != nu.space:
        raise DomainError("measures live on different spaces")
    if t == 1.0:
        return mu
    if t == 0.0:
        return nu
    out = {p: t * w for p, w in mu.atoms}
    for p, w in nu.atoms:
        out[p] = out.get(p, 0.0) + (1.0 - t) * w
    return from_weights(mu.space, out)


def _check_product_of(space: MetricSpace, X: MetricSpace, Y: MetricSpace) -> None:
    prov = space.provenance
    if prov is None or prov.kind != "product" or prov.left != X or prov.right != Y:
        raise DomainError("space is not the recorded product of the two ambient spaces")
