"""Simplicial homology with coefficients in GF(2)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, PreconditionError
from .metric_space import MetricSpace
from .simplicial_complex import SimplicialComplex, faces

DEFAULT_DIM_CAP = 3


@dataclass(frozen=True)
class BettiVector:
    values: tuple[int, ...]

    @property
    def dim_cap(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, k: int) -> int:
        return self.values[k]

    def __add__(self, other: BettiVector) -> BettiVector:
        return BettiVector(tuple(a + b for a, b in zip(self.values, other.values)))

    def to_json(self) -> dict:
        return {"dim_cap": self.dim_cap, "betti": list(self.values)}


def _check_cap(K: SimplicialComplex, dim: int, dim_cap: int) -> None:
    if dim > dim_cap + 1:
        raise PreconditionError(
            f"dimension {dim} exceeds dim_cap={dim_cap}; raise dim_cap to at least {dim - 1}"
        )
    if K.dim_cap is not None and dim > K.dim_cap:
        raise PreconditionError(
            f"complex enumerates faces only up to dimension {K.dim_cap}; rebuild it with a higher cap"
        )


def boundary_matrix(K: SimplicialComplex, dim: int, dim_cap: int = DEFAULT_DIM_CAP) -> np.ndarray:
    """Boundary map from ``dim``-faces to ``(dim - 1)``-faces over GF(2).

    Rows index ``(dim - 1)``-faces and columns ``dim``-faces, both in the
    canonical order of :func:`faces`.  Faces up to ``dim_cap + 1`` may be
    requested, since the top Betti number needs the next boundary map.
    """
    if dim < 0:
        raise DomainError("dimension must be nonnegative")
    _check_cap(K, dim, dim_cap)
    cols = faces(K, dim)
    if dim == 0:
        return np.zeros((0, len(cols)), dtype=np.uint8)
    rows = faces(K, dim - 1)
    row_index = {f: i for i, f in enumerate(rows)}
    B = np.zeros((len(rows), len(cols)), dtype=np.uint8)
    for j, face in enumerate(cols):
        for drop in range(len(face)):
            B[row_index[face[:drop] + face[drop + 1:]], j] = 1
    return B


def gf2_rank(M: np.ndarray) -> int:
    """Rank over GF(2) by elimination on rows packed into Python integers."""
    M = np.asarray(M, dtype=np.uint8) & 1
    if M.size == 0:
        return 0
    rows = [int("".join("1" if b else "0" for b in row), 2) for row in M]
    pivots: dict[int, int] = {}
    rank = 0
    for row in rows:
        while row:
            lead = row.bit_length() - 1
            if lead not in pivots:
                pivots[lead] = row
                rank += 1
                break
            row ^= pivots[lead]
    return rank


def betti(K: SimplicialComplex, dim_cap: int = DEFAULT_DIM_CAP) -> BettiVector:
    """Betti numbers ``b_0 .. b_{dim_cap}`` over GF(2)."""
    counts = [len(faces(K, k)) for k in range(dim_cap + 1)]
    ranks = [0] + [gf2_rank(boundary_matrix(K, k, dim_cap)) for k in range(1, dim_cap + 2)]
    return BettiVector(tuple(counts[k] - ranks[k] - ranks[k + 1] for k in range(dim_cap + 1)))


def boundary_squares_vanish(K: SimplicialComplex, dim_cap: int = DEFAULT_DIM_CAP) -> list[int]:
    """Dimensions ``k`` where ``d_k . d_{k+1}`` is nonzero mod 2 (empty when all vanish)."""
    bad = []
    for k in range(1, dim_cap + 1):
        prod = boundary_matrix(K, k, dim_cap).astype(np.int64) @ boundary_matrix(K, k + 1, dim_cap)
        if prod.size and (prod % 2).any():
            bad.append(k)
    return bad


def betti_curve(
    X: MetricSpace,
    construction: Callable[[MetricSpace, float], object],
    r_grid: Sequence[float],
    dim_cap: int = DEFAULT_DIM_CAP,
) -> list[tuple[float, BettiVector]]:
    """Betti vector of ``construction(X, r).complex`` for each ``r`` in the sorted grid."""
    r_grid = list(r_grid)
    if any(b < a for a, b in zip(r_grid, r_grid[1:])):
        raise DomainError("r_grid must be sorted")
    return [(r, betti(construction(X, r).complex, dim_cap)) for r in r_grid]


def parse_grid(text: str) -> list[float]:
    """``"start:step:stop"`` (inclusive) or a comma-separated list of values."""
    if ":" in text:
        start, step, stop = (float(v) for v in text.split(":"))
        if step <= 0:
            raise DomainError("grid step must be positive")
        n = int(math.floor((stop - start) / step + 1e-9))
        return [round(start + k * step, 12) for k in range(n + 1)]
    return sorted(float(v) for v in text.split(",") if v.strip())

