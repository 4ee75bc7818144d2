"""Connection-mismatch scan over the spectral parameter."""

import numpy as np
import pytest

from quadwave.spectral import scan


def test_mismatch_vanishes_at_eigenvalues():
    assert scan.mismatch(1.0) < 1e-10
    assert scan.mismatch(4.0) < 1e-10


def test_mismatch_large_away_from_eigenvalues():
    assert scan.mismatch(2.5) > 1e-3
    assert scan.mismatch(0.7) > 1e-3
    assert scan.mismatch(5.0) > 1e-3


def test_mismatch_signed_crosses_eigenvalues():
    assert scan.mismatch_signed(0.9) * scan.mismatch_signed(1.1) < 0.0
    assert scan.mismatch_signed(3.9) * scan.mismatch_signed(4.1) < 0.0


def test_resonant_lambda_is_nudged_not_fatal():
    # lam = 0 degenerates the Frobenius indices at rho = 1; the scan
    # sidesteps by a tiny offset instead of failing
    v = scan.mismatch(0.0)
    assert np.isfinite(v)
    assert v > 1e-3


def test_scan_localizes_symmetry_mode():
    res = scan.scan_real(0.8, 1.2, 0.1, refine=True)
    assert len(res.roots) == 1
    root, lo, hi = res.roots[0]
    assert root == pytest.approx(1.0, abs=1e-8)
    assert lo <= root <= hi
    assert hi - lo <= 0.2
    assert len(res.grid) == len(res.mismatch)
    assert res.errors == ()


def test_scan_localizes_instability_mode():
    res = scan.scan_real(3.8, 4.2, 0.1, refine=True)
    assert len(res.roots) == 1
    assert res.roots[0][0] == pytest.approx(4.0, abs=1e-8)


def test_scan_without_refinement_returns_curve_only():
    res = scan.scan_real(0.8, 1.2, 0.1, refine=False)
    assert res.roots == ()
    dip = res.grid[int(np.argmin(res.mismatch))]
    assert dip == pytest.approx(1.0, abs=1e-12)


def test_strip_floor_off_axis():
    points, floor = scan.scan_strip(0.0, 1.0, 0.5, re_step=0.5, im_step=0.5)
    assert floor > 1e-3
    # the floor is the minimum outside exclusion disks around 1 and 4
    outside = [m for lam, m in points
               if abs(lam - 1.0) > 0.2 and abs(lam - 4.0) > 0.2]
    assert outside
    assert floor == min(outside)
    inside = [m for lam, m in points if abs(lam - 1.0) <= 0.2]
    assert inside and min(inside) < floor
