"""Seeded verification suites for the product, wedge and coproduct results.

Each suite returns a :class:`SuiteResult`; ``passed`` is true iff every
individual check passed.  All randomness comes from ``numpy`` generators
seeded by the caller, so results are reproducible.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

import numpy as np

from . import metric_space as ms
from . import simplicial_complex as sc
from .homology import betti, boundary_squares_vanish
from .homotopy import verify_deformation
from .measure import FiniteMeasure, delta, from_weights
from .metric_space import MetricSpace, PointedMetricSpace
from .simplicial_complex import SimplicialComplex
from .thickening import (
    CLOSED,
    OPEN,
    ScaleParameter,
    cech,
    thickening_coproduct,
    thickening_product,
    thickening_wedge,
    vietoris_rips,
)
from .wasserstein import WassersteinConfig, is_coupling, is_optimal, wasserstein, wasserstein_bruteforce

GRID_EPS = 1e-6
CONVENTIONS = (CLOSED, OPEN)
CONSTRUCTIONS: dict[str, Callable] = {"vr": vietoris_rips, "cech": cech}
MAX_REPORTED = 20


@dataclass
class SuiteResult:
    name: str
    passed: bool = True
    checks: int = 0
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def record(self, ok: bool, witness=None) -> bool:
        self.checks += 1
        if not ok:
            self.passed = False
            if len(self.failures) < MAX_REPORTED:
                self.failures.append(witness)
        return ok

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.checks} checks, {len(self.failures)} failures ({self.elapsed:.2f}s)"

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "pass": self.passed,
            "checks": self.checks,
            "failures": [_jsonable(f) for f in self.failures],
            "details": _jsonable(self.details),
            "elapsed": self.elapsed,
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [_jsonable(v) for v in items]
    if isinstance(obj, float):
        return "inf" if math.isinf(obj) else obj
    if isinstance(obj, (int, str, bool)) or obj is None:
        return obj
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return _jsonable(float(obj))
    return str(obj)


def _timed(fn):
    def run(*args, **kwargs) -> SuiteResult:
        start = time.perf_counter()
        result = fn(*args, **kwargs)
        result.elapsed = time.perf_counter() - start
        return result

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


# --- random inputs -----------------------------------------------------------


def random_space(rng: np.random.Generator, n: int, prefix: str = "p") -> MetricSpace:
    """Random classical metric space on ``n`` points.

    Half the draws use distinct integer points in a 5x5 grid under a random
    l1/l2/linf norm (plenty of tied distances); the rest use uniform points
    in the unit square under l2.
    """
    labels = [f"{prefix}{i}" for i in range(n)]
    if rng.random() < 0.5:
        cells = rng.choice(25, size=n, replace=False)
        coords = np.stack([cells // 5, cells % 5], axis=1).astype(float)
        metric = ("l1", "l2", "linf")[int(rng.integers(3))]
    else:
        coords = rng.random((n, 2))
        metric = "l2"
    return ms.from_points(labels, coords, metric)


def random_pointed(rng: np.random.Generator, n: int, prefix: str = "p") -> PointedMetricSpace:
    X = random_space(rng, n, prefix)
    return PointedMetricSpace(X, X.points[int(rng.integers(n))])


def random_measure(rng: np.random.Generator, space: MetricSpace, size: int | None = None) -> FiniteMeasure:
    if size is None:
        size = int(rng.integers(1, len(space) + 1))
    chosen = rng.choice(len(space), size=size, replace=False)
    weights = rng.dirichlet(np.ones(size))
    return from_weights(space, {space.points[i]: w for i, w in zip(chosen, weights)}, renormalize=True)


def scale_grid(*spaces: MetricSpace, eps: float = GRID_EPS, include_inf: bool = True) -> list[float]:
    """Zero, every finite pairwise distance ``d`` together with ``d - eps`` and ``d + eps``, and optionally +inf."""
    values = {0.0}
    for X in spaces:
        for d in X.pairwise_distances():
            if math.isfinite(d):
                values.update({float(d), max(float(d) - eps, 0.0), float(d) + eps})
    grid = sorted(values)
    if include_inf:
        grid.append(math.inf)
    return grid


# --- suites --------------------------------------------------------------------


def _product_iso(name: str, construction: Callable, seed: int, pairs: int) -> SuiteResult:
    rng = np.random.default_rng(seed)
    result = SuiteResult(name)
    rs = 0
    for k in range(pairs):
        X = random_space(rng, int(rng.integers(4, 7)), "a")
        Y = random_space(rng, int(rng.integers(4, 7)), "b")
        XY = ms.linf_product(X, Y)
        for r in scale_grid(X, Y):
            for conv in CONVENTIONS:
                s = ScaleParameter(r, conv)
                direct = construction(XY, s).complex
                factored = sc.product(construction(X, s).complex, construction(Y, s).complex)
                result.record(direct == factored, {"pair": k, "r": r, "convention": conv})
                rs += 1
    result.details = {"pairs": pairs, "comparisons": rs}
    return result


@_timed
def product_iso(seed: int = 0, pairs: int = 10) -> SuiteResult:
    """VR of an L-infinity product equals the product of the VR complexes."""
    return _product_iso("product-iso", vietoris_rips, seed, pairs)


@_timed
def cech_product_iso(seed: int = 0, pairs: int = 10) -> SuiteResult:
    """Intrinsic closed Čech of a product equals the product of the Čech complexes."""
    return _product_iso("cech-product-iso", cech, seed, pairs)


def wedge_pair(X: PointedMetricSpace, Y: PointedMetricSpace, s, construction: Callable = vietoris_rips):
    """``(V, M, N)``: the construction on the wedge, and on each pointed factor."""
    M = construction(X.space, s).pointed(X.basepoint)
    N = construction(Y.space, s).pointed(Y.basepoint)
    V = construction(ms.wedge(X, Y).space, s).pointed(ms.STAR)
    return V, M, N


@_timed
def wedge_betti(seed: int = 0, pairs: int = 10, dim_cap: int = 3) -> SuiteResult:
    """Betti numbers of VR of a wedge equal those of the wedge of the VR complexes."""
    rng = np.random.default_rng(seed)
    result = SuiteResult("wedge-betti")
    strict = 0
    for k in range(pairs):
        X = random_pointed(rng, int(rng.integers(3, 6)), "a")
        Y = random_pointed(rng, int(rng.integers(3, 6)), "b")
        XY = ms.wedge(X, Y).space
        for r in scale_grid(XY):
            for conv in CONVENTIONS:
                V, M, N = wedge_pair(X, Y, ScaleParameter(r, conv))
                W = thickening_wedge(M, N)
                bv, bw = betti(V.complex, dim_cap), betti(W.complex, dim_cap)
                result.record(bv == bw, {"pair": k, "r": r, "convention": conv, "V": bv.values, "W": bw.values})
                strict += V.complex != W.complex
    result.details = {"pairs": pairs, "dim_cap": dim_cap, "strictly_larger": strict}
    return result


def figure_wedge() -> tuple[PointedMetricSpace, PointedMetricSpace]:
    """Two unit segments ``{s, x}`` and ``{s, y}``, each pointed at ``s``."""
    X = MetricSpace(("s", "x"), [[0, 1], [1, 0]])
    Y = MetricSpace(("s", "y"), [[0, 1], [1, 0]])
    return PointedMetricSpace(X, "s"), PointedMetricSpace(Y, "s")


def _non_faces(V: SimplicialComplex, W: SimplicialComplex) -> list[tuple[str, ...]]:
    """Faces of ``V`` missing from ``W`` all of whose proper faces lie in ``W``."""
    found = set()
    for face in V.maximal_faces:
        for size in range(1, len(face) + 1):
            for sub in combinations(V.sorted_face(face), size):
                if sc.membership(W, sub):
                    continue
                if size == 1 or all(sc.membership(W, b) for b in combinations(sub, size - 1)):
                    found.add(sub)
    return sorted(found)


@_timed
def wedge_strict_containment(r: float = 2.0, dim_cap: int = 3) -> SuiteResult:
    """VR of the glued segments strictly contains the wedge of their VR complexes."""
    X, Y = figure_wedge()
    s = ScaleParameter(r, CLOSED)
    V, M, N = wedge_pair(X, Y, s)
    W = thickening_wedge(M, N)
    result = SuiteResult("wedge-strict-containment")
    contained = all(V.has_face([W.phi[v] for v in f]) for f in W.complex.maximal_faces)
    result.record(contained, "VR(X v Y) does not contain VR(X) v VR(Y)")
    missing = _non_faces(V.complex, W.complex)
    result.record(bool(missing), "no face of VR(X v Y) is missing from VR(X) v VR(Y)")
    result.record(("x", "y") in missing, {"expected": ["x", "y"], "found": missing})
    bv, bw = betti(V.complex, dim_cap), betti(W.complex, dim_cap)
    result.record(bv == bw, {"V": bv.values, "W": bw.values})
    result.details = {
        "r": r,
        "d(x,y)": V.space.d("x", "y"),
        "mixed_faces": missing,
        "vr_of_wedge": V.complex.canonical_faces(),
        "wedge_of_vr": W.complex.canonical_faces(),
        "betti": list(bv.values),
    }
    return result


@_timed
def coproduct_preservation(seed: int = 0, pairs: int = 5) -> SuiteResult:
    """VR and Čech of a coproduct are the coproducts of the thickenings, at every finite scale."""
    rng = np.random.default_rng(seed)
    result = SuiteResult("coproduct")
    for k in range(pairs):
        X = random_space(rng, int(rng.integers(3, 6)), "p")
        Y = random_space(rng, int(rng.integers(3, 6)), "p")
        XY = ms.coproduct(X, Y)
        for r in scale_grid(X, Y, include_inf=False):
            for conv in CONVENTIONS:
                s = ScaleParameter(r, conv)
                for name, build in CONSTRUCTIONS.items():
                    direct = build(XY, s)
                    glued = thickening_coproduct(build(X, s), build(Y, s))
                    ok = direct.space == glued.space and direct.complex == glued.complex
                    result.record(ok, {"pair": k, "r": r, "convention": conv, "construction": name})
    result.details = {"pairs": pairs}
    return result


@_timed
def metric_axioms(seed: int = 0, trials: int = 200, ps=(1, 2), oracle_max: int = 3) -> SuiteResult:
    """Wasserstein identity, symmetry and triangle inequality, plus brute-force agreement."""
    rng = np.random.default_rng(seed)
    result = SuiteResult("metric-axioms")
    oracle_checks = 0
    for p in ps:
        config = WassersteinConfig(p=p)
        for k in range(trials):
            X = random_space(rng, 5)
            mu, nu, xi = (random_measure(rng, X) for _ in range(3))
            d_mm, _ = wasserstein(mu, mu, config)
            d_mn, plan = wasserstein(mu, nu, config)
            d_nm, _ = wasserstein(nu, mu, config)
            d_nx, _ = wasserstein(nu, xi, config)
            d_mx, _ = wasserstein(mu, xi, config)
            tag = {"p": p, "trial": k}
            result.record(d_mm == 0.0, {**tag, "check": "identity", "value": d_mm})
            result.record(abs(d_mn - d_nm) <= 1e-9, {**tag, "check": "symmetry", "values": (d_mn, d_nm)})
            result.record(d_mx <= d_mn + d_nx + 1e-9, {**tag, "check": "triangle"})
            result.record(bool(is_coupling(plan)), {**tag, "check": "coupling"})
            result.record(bool(is_optimal(plan, config)), {**tag, "check": "certificate"})
            for a, b, value in ((mu, nu, d_mn), (nu, xi, d_nx), (mu, xi, d_mx)):
                if max(len(a.atoms), len(b.atoms)) <= oracle_max:
                    oracle = wasserstein_bruteforce(a, b, config)
                    result.record(abs(oracle - value) <= 1e-6, {**tag, "check": "oracle", "values": (value, oracle)})
                    oracle_checks += 1
    result.details = {"trials": trials, "p": list(ps), "oracle_comparisons": oracle_checks}
    return result


@_timed
def delta_isometry(seed: int = 0, spaces: int = 5, ps=(1, 2)) -> SuiteResult:
    """``W(delta_x, delta_y) == d(x, y)`` exactly."""
    rng = np.random.default_rng(seed)
    result = SuiteResult("delta-isometry")
    for k in range(spaces):
        X = random_space(rng, int(rng.integers(4, 7)))
        for x in X.points:
            for y in X.points:
                for p in ps:
                    value, _ = wasserstein(delta(X, x), delta(X, y), WassersteinConfig(p=p))
                    result.record(value == X.d(x, y), {"space": k, "pair": (x, y), "p": p, "value": value})
    return result


def _random_scale(rng: np.random.Generator, *spaces: MetricSpace) -> float:
    distances = sorted({float(d) for X in spaces for d in X.pairwise_distances()})
    return distances[int(rng.integers(len(distances)))]


@_timed
def homotopy_product(seed: int = 0, instances: int = 5, samples: int = 100) -> SuiteResult:
    """Sampled product deformation retraction on VR/Čech thickenings of products."""
    rng = np.random.default_rng(seed)
    result = SuiteResult("homotopy-product")
    reports = []
    for k in range(instances):
        X = random_space(rng, 4, "a")
        Y = random_space(rng, 4, "b")
        r = _random_scale(rng, X, Y)
        build = cech if k % 3 == 2 else vietoris_rips
        M, N = build(X, r), build(Y, r)
        T = thickening_product(M, N) if k % 2 == 0 else build(ms.linf_product(X, Y), r)
        report = verify_deformation(T, "product", samples, seed + k, factors=(M, N))
        reports.append({"instance": k, "r": r, "construction": T.provenance, **report.to_json()})
        result.record(report.retraction_identity_ok, {"instance": k, "check": "retract-inject"})
        result.record(report.endpoint_ok, {"instance": k, "check": "endpoints"})
        result.record(report.containment_ok, {"instance": k, "check": "containment"})
    result.details = {"reports": reports}
    return result


@_timed
def homotopy_wedge(seed: int = 0, instances: int = 5, samples: int = 100) -> SuiteResult:
    """Sampled wedge deformation retraction, including the glued-segments example at r = 2."""
    rng = np.random.default_rng(seed)
    result = SuiteResult("homotopy-wedge")
    reports = []
    for k in range(instances):
        if k == 0:
            X, Y = figure_wedge()
            r = 2.0
        else:
            X = random_pointed(rng, int(rng.integers(3, 6)), "a")
            Y = random_pointed(rng, int(rng.integers(3, 6)), "b")
            r = _random_scale(rng, ms.wedge(X, Y).space)
        V, M, N = wedge_pair(X, Y, r)
        report = verify_deformation(V, "wedge", samples, seed + k, factors=(M, N))
        reports.append({"instance": k, "r": r, **report.to_json()})
        result.record(report.retraction_identity_ok, {"instance": k, "check": "retract-inject"})
        result.record(report.endpoint_ok, {"instance": k, "check": "endpoints"})
        result.record(report.containment_ok, {"instance": k, "check": "containment"})
    result.details = {"reports": reports}
    return result


def hexagon(metric: str = "chordal") -> MetricSpace:
    """Six equally spaced points on the unit circle; tied distances are bitwise equal."""
    if metric == "chordal":
        by_step = [2 * math.sin(k * math.pi / 6) for k in range(4)]
    elif metric == "geodesic":
        by_step = [k * math.pi / 3 for k in range(4)]
    else:
        raise ValueError(f"unknown hexagon metric {metric!r}")
    by_step[0] = 0.0
    dist = [[by_step[min(abs(i - j), 6 - abs(i - j))] for j in range(6)] for i in range(6)]
    return MetricSpace(tuple(f"h{i}" for i in range(6)), dist)


@_timed
def homology_sanity(seed: int = 0, spaces: int = 10, dim_cap: int = 3) -> SuiteResult:
    """Boundary maps square to zero; hexagon and full-simplex Betti numbers."""
    rng = np.random.default_rng(seed)
    result = SuiteResult("homology-sanity")
    complexes = 0
    for k in range(spaces):
        X = random_space(rng, int(rng.integers(4, 8)))
        for r in scale_grid(X, include_inf=False)[::3]:
            for build in CONSTRUCTIONS.values():
                bad = boundary_squares_vanish(build(X, r).complex, dim_cap)
                result.record(not bad, {"space": k, "r": r, "dims": bad})
                complexes += 1
    plateau = {}
    for metric in ("chordal", "geodesic"):
        H = hexagon(metric)
        side, nxt = (float(d) for d in H.pairwise_distances()[:2])
        grid = [side, (side + nxt) / 2, nxt - GRID_EPS]
        for r in grid:
            value = betti(vietoris_rips(H, r).complex, dim_cap).values
            result.record(value == (1, 1, 0, 0), {"hexagon": metric, "r": r, "betti": value})
        below = betti(vietoris_rips(H, side - GRID_EPS).complex, dim_cap).values
        result.record(below == (6, 0, 0, 0), {"hexagon": metric, "r": side - GRID_EPS, "betti": below})
        plateau[metric] = {"side": side, "next": nxt}
    for n in range(1, 7):
        full = SimplicialComplex(tuple(f"v{i}" for i in range(n)), (frozenset(f"v{i}" for i in range(n)),))
        value = betti(full, dim_cap).values
        result.record(value == (1, 0, 0, 0), {"full_simplex": n, "betti": value})
    result.details = {"complexes_checked": complexes, "hexagon": plateau}
    return result


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "product-iso": product_iso,
    "cech-product-iso": cech_product_iso,
    "wedge-betti": wedge_betti,
    "wedge-strict-containment": wedge_strict_containment,
    "coproduct": coproduct_preservation,
    "metric-axioms": metric_axioms,
    "delta-isometry": delta_isometry,
    "homotopy-product": homotopy_product,
    "homotopy-wedge": homotopy_wedge,
    "homology": homology_sanity,
}
