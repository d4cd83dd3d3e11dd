"""Acceptance criteria, one test each, at their stated tolerances.

Each test prints a single ``PASS criterion N`` or ``FAIL criterion N`` line;
the lines are repeated in the terminal summary of every run.  The suites live in
:mod:`metric_thickenings.verification`, so the CLI runs the same code.
"""
import math

import pytest

from metric_thickenings import verification as v
from metric_thickenings.homology import betti
from metric_thickenings.homotopy import IDENTITY_ATOL, T_GRID
from metric_thickenings.thickening import CLOSED, OPEN, vietoris_rips

SEED = 0
LINES: list[str] = []


def report(number, result, extra=""):
    status = "PASS" if result.passed else "FAIL"
    line = f"{status} criterion {number}: {result.summary()}"
    if extra:
        line += f" {extra}"
    print(line)
    LINES.append(line)
    if not result.passed:
        pytest.fail(f"{line}\nfirst failures: {result.failures[:3]}")


def test_criterion_1_product_isomorphism():
    result = v.product_iso(seed=SEED, pairs=10)
    ok = result.passed and result.elapsed < 60.0
    assert set(v.CONVENTIONS) == {CLOSED, OPEN}
    result.passed = ok
    report(1, result, f"(runtime {result.elapsed:.2f}s, limit 60s)")


def test_criterion_2_cech_product_isomorphism():
    report(2, v.cech_product_iso(seed=SEED, pairs=10))


def test_criterion_3_wedge_betti():
    result = v.wedge_betti(seed=SEED, pairs=10, dim_cap=3)
    report(3, result, f"({result.details['strictly_larger']} strictly larger complexes)")


def test_criterion_4_strict_containment():
    result = v.wedge_strict_containment(r=2.0, dim_cap=3)
    assert result.details["d(x,y)"] == 2.0
    assert ("x", "y") in result.details["mixed_faces"]
    report(4, result, f"(mixed faces {result.details['mixed_faces']})")


def test_criterion_5_coproduct():
    result = v.coproduct_preservation(seed=SEED, pairs=5)
    report(5, result)


def test_criterion_6_wasserstein_axioms():
    result = v.metric_axioms(seed=SEED, trials=200, ps=(1, 2), oracle_max=3)
    assert result.details["oracle_comparisons"] > 0
    report(6, result, f"({result.details['oracle_comparisons']} oracle comparisons)")


def test_criterion_7_delta_isometry():
    report(7, v.delta_isometry(seed=SEED, spaces=5))


def test_criterion_8_deformation_retractions():
    assert IDENTITY_ATOL == 1e-12
    assert len(T_GRID) == 11 and math.isclose(T_GRID[1], 0.1) and T_GRID[-1] == 1.0
    product = v.homotopy_product(seed=SEED, instances=5, samples=100)
    wedge = v.homotopy_wedge(seed=SEED, instances=5, samples=100)
    first = wedge.details["reports"][0]
    assert first["r"] == 2.0
    combined = v.SuiteResult(
        "homotopy-product+wedge",
        passed=product.passed and wedge.passed,
        checks=product.checks + wedge.checks,
        failures=product.failures + wedge.failures,
        elapsed=product.elapsed + wedge.elapsed,
    )
    report(8, combined)


def test_criterion_9_homology_sanity():
    result = v.homology_sanity(seed=SEED)
    for metric in ("chordal", "geodesic"):
        H = v.hexagon(metric)
        side, nxt = sorted({float(d) for d in H.pairwise_distances()})[:2]
        assert betti(vietoris_rips(H, (side + nxt) / 2).complex).values[:2] == (1, 1)
    report(9, result, f"({result.details['complexes_checked']} complexes checked for d.d = 0)")
