"""Explicit homotopy equivalences for products and wedges of thickenings.

Products: ``inject`` sends a pair of measures to their product measure,
``retract`` takes marginals, and ``H(t, a) = t a + (1 - t) inject(retract(a))``.

Wedges: ``retract`` pushes the lighter side's mass onto the basepoint
(piecewise in which side is heavier), ``inject`` is the inclusion, and ``H``
is the same straight-line homotopy.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DomainError, PreconditionError
from .measure import (
    FiniteMeasure,
    convex_combination,
    from_weights,
    marginals,
    product_measure,
)
from .metric_space import MetricSpace
from .thickening import Thickening, contains, thickening_product, thickening_wedge, wedge_hypothesis_check
from .wasserstein import wasserstein

IDENTITY_ATOL = 1e-12
T_GRID = tuple(k / 10 for k in range(11))


def product_inject(
    mu: FiniteMeasure, nu: FiniteMeasure, space: MetricSpace | None = None
) -> FiniteMeasure:
    return product_measure(mu, nu, space)


def product_retract(alpha: FiniteMeasure) -> tuple[FiniteMeasure, FiniteMeasure]:
    return marginals(alpha)


def product_homotopy(t: float, alpha: FiniteMeasure) -> FiniteMeasure:
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"t must lie in [0, 1], got {t}")
    mu, nu = product_retract(alpha)
    return convex_combination(t, alpha, product_inject(mu, nu, alpha.space))


def _wedge_parts(mu: FiniteMeasure):
    prov = mu.space.provenance
    if prov is None or prov.kind != "wedge":
        raise DomainError("measure does not live on a recorded wedge space")
    star = prov.basepoint
    eps = 0.0
    left: dict[str, float] = {}
    right: dict[str, float] = {}
    for p, w in mu.atoms:
        if p == star:
            eps = w
        elif prov.origin[p][0] == 0:
            left[p] = w
        else:
            right[p] = w
    return star, eps, left, right


def wedge_retract_branch(mu: FiniteMeasure, branch: str) -> FiniteMeasure:
    """Evaluate one branch of the wedge retraction regardless of which side is heavier.

    ``branch="left"`` keeps the left side (valid when it carries at least as
    much mass as the right); ``"right"`` is symmetric.
    """
    star, eps, left, right = _wedge_parts(mu)
    lam = math.fsum(left.values())
    eta = math.fsum(right.values())
    if branch == "left":
        keep, other, kept = lam, eta, left
    elif branch == "right":
        keep, other, kept = eta, lam, right
    else:
        raise DomainError(f"branch must be 'left' or 'right', got {branch!r}")
    ratio = 1.0 if keep == 0 else other / keep
    weights = {star: 2 * other + eps}
    scale = 1.0 - ratio
    for p, w in kept.items():
        weights[p] = scale * w
    return from_weights(mu.space, weights)


def wedge_retract(mu: FiniteMeasure) -> FiniteMeasure:
    """Retract onto measures supported on one side plus the basepoint.

    Ties (equal mass on both sides) use the left branch; both branches give
    the point mass at the basepoint there.
    """
    _, _, left, right = _wedge_parts(mu)
    lam = math.fsum(left.values())
    eta = math.fsum(right.values())
    return wedge_retract_branch(mu, "left" if lam >= eta else "right")


def wedge_inject(mu: FiniteMeasure, V: Thickening, M: Thickening, N: Thickening) -> FiniteMeasure:
    """Include a measure of the wedge thickening ``M v N`` into ``V``."""
    check = wedge_hypothesis_check(V, M, N)
    if not check:
        raise PreconditionError(f"V fails the wedge hypothesis: {check.first}")
    W = thickening_wedge(M, N)
    if not contains(W, mu.rehome(W.space)):
        raise PreconditionError("measure is not in the wedge of the two thickenings")
    return mu.rehome(V.space)


def wedge_homotopy(t: float, mu: FiniteMeasure) -> FiniteMeasure:
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"t must lie in [0, 1], got {t}")
    return convex_combination(t, mu, wedge_retract(mu))


@dataclass
class HomotopyReport:
    retraction_identity_ok: bool = True
    endpoint_ok: bool = True
    containment_ok: bool = True
    sampled_lipschitz: float = 0.0
    samples: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.retraction_identity_ok and self.endpoint_ok and self.containment_ok

    def to_json(self) -> dict:
        out = asdict(self)
        out["failures"] = [list(map(str, f)) for f in self.failures]
        out["pass"] = self.ok
        return out


def random_contained_measure(T: Thickening, rng: np.random.Generator) -> FiniteMeasure:
    """Random measure of ``T``: a random nonempty subset of a random maximal face, flat Dirichlet weights."""
    faces = T.complex.maximal_faces
    face = T.complex.sorted_face(faces[rng.integers(len(faces))])
    k = int(rng.integers(1, len(face) + 1))
    chosen = rng.choice(len(face), size=k, replace=False)
    weights = rng.dirichlet(np.ones(k))
    return from_weights(T.space, {T.phi[face[i]]: w for i, w in zip(sorted(chosen), weights)}, renormalize=True)


def _same_measure(a: FiniteMeasure, b: FiniteMeasure) -> bool:
    return a.isclose(b, atol=IDENTITY_ATOL)


def verify_deformation(
    T: Thickening,
    kind: str,
    samples: int = 100,
    seed: int = 0,
    factors: tuple[Thickening, Thickening] | None = None,
) -> HomotopyReport:
    """Sampled check of the product or wedge deformation retraction on ``T``.

    For each sample this checks that retracting an injected measure gives it
    back (atol 1e-12), that ``H(1, .)`` is the identity and ``H(0, .)`` is
    ``inject . retract``, and that ``H(t, .)`` stays in the relevant
    thickening for ``t`` in ``0, 0.1, ..., 1``.  ``sampled_lipschitz`` is the
    largest observed ratio ``W(r(a), r(b)) / W(a, b)`` for ``r = inject .
    retract`` over consecutive sample pairs.

    ``factors`` defaults to the factors recorded on ``T``; for a wedge ``T``
    that is not itself a wedge of thickenings (such as the Vietoris-Rips
    thickening of a wedge), pass the two pointed factor thickenings.
    """
    if kind not in ("product", "wedge"):
        raise DomainError(f"kind must be 'product' or 'wedge', got {kind!r}")
    if factors is None:
        factors = T.factors
    if factors is None:
        raise PreconditionError("factor thickenings are unknown; pass them explicitly")
    M, N = factors
    rng = np.random.default_rng(seed)
    report = HomotopyReport(samples=samples)
    if samples <= 0:
        return report

    if kind == "product":
        inner = thickening_product(M, N)
        if T.space != inner.space:
            raise DomainError("T's space is not the product of the factor spaces")
        inject_retract = lambda a: product_inject(*product_retract(a), a.space)  # noqa: E731
        homotopy = product_homotopy
    else:
        check = wedge_hypothesis_check(T, M, N)
        if not check:
            report.containment_ok = False
            report.failures.append(("wedge-hypothesis",) + tuple(check.failures[:3]))
            return report
        inner = thickening_wedge(M, N)
        inject_retract = wedge_retract
        homotopy = wedge_homotopy
    space = T.space

    previous = None
    for k in range(samples):
        # round trip from the smaller space
        if kind == "product":
            mu, nu = random_contained_measure(M, rng), random_contained_measure(N, rng)
            back = product_retract(product_inject(mu, nu, space))
            if not (_same_measure(back[0], mu) and _same_measure(back[1], nu)):
                report.retraction_identity_ok = False
                report.failures.append(("retract-inject", k, mu, nu))
        else:
            mu = random_contained_measure(inner, rng).rehome(space)
            if not _same_measure(wedge_retract(mu), mu):
                report.retraction_identity_ok = False
                report.failures.append(("retract-inject", k, mu))

        alpha = random_contained_measure(T, rng)
        image = inject_retract(alpha)
        if not contains(inner, image.rehome(inner.space)):
            report.containment_ok = False
            report.failures.append(("retract-image", k, alpha))
        if not (_same_measure(homotopy(1.0, alpha), alpha) and _same_measure(homotopy(0.0, alpha), image)):
            report.endpoint_ok = False
            report.failures.append(("endpoints", k, alpha))
        for t in T_GRID:
            h = homotopy(t, alpha)
            if abs(h.mass - 1.0) > IDENTITY_ATOL or not contains(T, h):
                report.containment_ok = False
                report.failures.append(("homotopy", k, t, alpha))
                break

        if previous is not None:
            d_in, _ = wasserstein(previous[0], alpha)
            if d_in > 0 and math.isfinite(d_in):
                d_out, _ = wasserstein(previous[1], image)
                report.sampled_lipschitz = max(report.sampled_lipschitz, d_out / d_in)
        previous = (alpha, image)
    return report

