"""Exact p-Wasserstein distances between finitely-supported measures.

The transport problem on the bipartite support graph is solved as a linear
program with a dual simplex method, which returns a vertex (basic) plan and
dual potentials.  Optimality is certified by complementary slackness.  A
separate brute-force solver enumerates every vertex of the transport
polytope and serves as an independent oracle for small supports.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.optimize import linprog

from .checks import CheckResult
from .errors import DomainError, PreconditionError, StructuralError
from .measure import FiniteMeasure


@dataclass(frozen=True)
class WassersteinConfig:
    p: float = 1.0
    tolerance: float = 1e-9

    def __post_init__(self):
        if not self.p >= 1 or math.isinf(self.p):
            raise DomainError(f"p must lie in [1, inf), got {self.p}")


@dataclass(frozen=True, eq=False)
class TransportPlan:
    """Coupling between the atoms of ``row_measure`` and ``col_measure``.

    ``potentials`` holds the dual variables ``(u, v)`` of the solve that
    produced the plan, when there was one.
    """

    row_measure: FiniteMeasure
    col_measure: FiniteMeasure
    mass: np.ndarray
    potentials: tuple[np.ndarray, np.ndarray] | None = None

    def cost_matrix(self, p: float = 1.0) -> np.ndarray:
        space = self.row_measure.space
        rows = space.indices(self.row_measure.points)
        cols = space.indices(self.col_measure.points)
        return space.dist[np.ix_(rows, cols)] ** p

    def transported(self) -> list[tuple[str, str, float]]:
        out = []
        for i, x in enumerate(self.row_measure.points):
            for j, y in enumerate(self.col_measure.points):
                if self.mass[i, j] > 0:
                    out.append((x, y, float(self.mass[i, j])))
        return out

    def to_json(self) -> list[dict]:
        return [{"from": x, "to": y, "mass": m} for x, y, m in self.transported()]


def is_coupling(plan: TransportPlan, tolerance: float = 1e-9) -> CheckResult:
    """Nonnegativity plus both marginal constraints, within ``tolerance``."""
    mu, nu = plan.row_measure, plan.col_measure
    mass = np.asarray(plan.mass, dtype=float)
    if mass.shape != (len(mu.atoms), len(nu.atoms)):
        raise StructuralError(
            f"plan has shape {mass.shape}, measures have {len(mu.atoms)} and {len(nu.atoms)} atoms"
        )
    failures = []
    for i, j in zip(*np.nonzero(mass < 0)):
        failures.append(("negative", mu.points[i], nu.points[j], float(mass[i, j])))
    rows = mass.sum(axis=1) - mu.weights
    cols = mass.sum(axis=0) - nu.weights
    for i in np.flatnonzero(np.abs(rows) > tolerance):
        failures.append(("row-marginal", mu.points[i], float(rows[i])))
    for j in np.flatnonzero(np.abs(cols) > tolerance):
        failures.append(("column-marginal", nu.points[j], float(cols[j])))
    return CheckResult.from_failures(failures)


def is_optimal(plan: TransportPlan, config: WassersteinConfig = WassersteinConfig()) -> CheckResult:
    """Complementary-slackness certificate for ``plan`` using its dual potentials.

    Requires reduced costs ``c_ij - u_i - v_j`` to be nonnegative on every
    finite cell and zero wherever the plan moves mass.
    """
    if plan.potentials is None:
        raise PreconditionError("plan carries no dual potentials")
    u, v = plan.potentials
    cost = plan.cost_matrix(config.p)
    finite = np.isfinite(cost)
    scale = 1.0 + float(np.max(cost[finite], initial=0.0))
    tol = config.tolerance * scale
    reduced = np.where(finite, cost - u[:, None] - v[None, :], np.inf)
    failures = []
    for i, j in zip(*np.nonzero(reduced < -tol)):
        failures.append(("dual-infeasible", plan.row_measure.points[i], plan.col_measure.points[j]))
    for i, j in zip(*np.nonzero(plan.mass > tol)):
        if abs(reduced[i, j]) > tol:
            failures.append(("slackness", plan.row_measure.points[i], plan.col_measure.points[j]))
    return CheckResult.from_failures(failures)


def _value(mass: np.ndarray, cost: np.ndarray, p: float) -> float:
    used = mass > 0
    total = math.fsum((mass[used] * cost[used]).tolist())
    return total if p == 1 else total ** (1.0 / p)


def wasserstein(
    mu: FiniteMeasure, nu: FiniteMeasure, config: WassersteinConfig = WassersteinConfig()
) -> tuple[float, TransportPlan | None]:
    """Optimal transport distance and an optimal plan.

    Returns ``(inf, None)`` when every coupling must move mass across an
    infinite distance.
    """
    if mu.space != nu.space:
        raise DomainError("measures live on different spaces")
    space = mu.space
    p = config.p
    rows = space.indices(mu.points)
    cols = space.indices(nu.points)
    m, n = len(rows), len(cols)
    dist = space.dist[np.ix_(rows, cols)]
    a, b = mu.weights, nu.weights

    if mu == nu:
        u = np.zeros(m)
        return 0.0, TransportPlan(mu, nu, np.diag(a), (u, u.copy()))

    if m == 1 or n == 1:
        # a point mass on either side admits exactly one coupling
        mass = np.outer(a, b)
        if np.isinf(dist).any():
            return math.inf, None
        if m == 1 and n == 1:
            d = float(dist[0, 0])
            return d, TransportPlan(mu, nu, mass, (np.array([d**p]), np.zeros(1)))
        cost = dist**p
        if m == 1:
            u, v = np.zeros(1), cost[0].copy()
        else:
            u, v = cost[:, 0].copy(), np.zeros(1)
        return _value(mass, cost, p), TransportPlan(mu, nu, mass, (u, v))

    cost = dist**p
    finite = np.isfinite(cost)
    cells = np.argwhere(finite)
    if not len(cells):
        return math.inf, None
    A = np.zeros((m + n, len(cells)))
    A[cells[:, 0], np.arange(len(cells))] = 1.0
    A[m + cells[:, 1], np.arange(len(cells))] = 1.0
    res = linprog(
        cost[finite],
        A_eq=A,
        b_eq=np.concatenate([a, b]),
        bounds=(0, None),
        method="highs-ds",
    )
    if res.status == 2:
        return math.inf, None
    if res.status != 0:
        raise RuntimeError(f"transport solve failed: {res.message}")
    mass = np.zeros((m, n))
    mass[finite] = np.clip(res.x, 0.0, None)
    duals = np.asarray(res.eqlin.marginals, dtype=float)
    plan = TransportPlan(mu, nu, mass, (duals[:m], duals[m:]))
    return _value(mass, np.where(finite, cost, 0.0), p), plan


BRUTEFORCE_MAX_ATOMS = 4


def wasserstein_bruteforce(
    mu: FiniteMeasure, nu: FiniteMeasure, config: WassersteinConfig = WassersteinConfig()
) -> float:
    """Minimum transport cost over every vertex of the transport polytope.

    Each vertex is the unique solution supported on some set of cells whose
    constraint columns form a basis; all such sets are enumerated.  Limited to
    supports of at most four atoms each.
    """
    if mu.space != nu.space:
        raise DomainError("measures live on different spaces")
    if max(len(mu.atoms), len(nu.atoms)) > BRUTEFORCE_MAX_ATOMS:
        raise PreconditionError(f"brute force is limited to {BRUTEFORCE_MAX_ATOMS} atoms per measure")
    space = mu.space
    m, n = len(mu.atoms), len(nu.atoms)
    dist = space.dist[np.ix_(space.indices(mu.points), space.indices(nu.points))]
    cost = dist**config.p
    b = np.concatenate([mu.weights, nu.weights])
    cells = [(i, j) for i in range(m) for j in range(n) if np.isfinite(cost[i, j])]
    if not cells:
        return math.inf
    A = np.zeros((m + n, len(cells)))
    for k, (i, j) in enumerate(cells):
        A[i, k] = A[m + j, k] = 1.0
    rank = np.linalg.matrix_rank(A)
    best = math.inf
    for basis in combinations(range(len(cells)), rank):
        cols = A[:, basis]
        if np.linalg.matrix_rank(cols) < rank:
            continue
        x, *_ = np.linalg.lstsq(cols, b, rcond=None)
        if np.abs(cols @ x - b).max() > 1e-12 or x.min() < -1e-12:
            continue
        total = math.fsum(max(x[k], 0.0) * cost[cells[c]] for k, c in enumerate(basis))
        best = min(best, total)
    if math.isinf(best):
        return best
    return best if config.p == 1 else best ** (1.0 / config.p)
