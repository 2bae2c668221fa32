"""Criterion scans, covering bounds, mesh distances, and the radial
comparison / boundary diagnostics.

Frozen intrinsic-distance references for the radial pair curve are
quadrature values of int_0^r sqrt(1 + 4 k^2 s^2) ds computed at 40 digits
(the minimizing path is radial because the conformal factor is radial and
increasing).
"""

import io

import numpy as np
import pytest

import holocurve as hc
from holocurve.criterion import (BoundaryDiagnostics, GridSpec, boundary_diagnostics,
                                 boundary_trace, covering_bound,
                                 intrinsic_min_distance, normalize,
                                 radial_comparison_margin, scan,
                                 second_derivative_norm, tangent_norm_at_zero,
                                 weight_ratio, write_scan_csv)
from holocurve.errors import NumericalError
from holocurve.jets import DiskMobius
from holocurve.nehari import NehariFunction, extremal_profile
from holocurve.sampling import disk_samples

SMALL = GridSpec(n_r=40, n_theta=16)


# ---------------------------------------------------------------------------
# scans
# ---------------------------------------------------------------------------

def test_grid_spec_points():
    g = GridSpec(n_r=10, n_theta=8, r_max=0.9)
    pts = g.points()
    assert pts.size == 1 + 10 * 8
    assert pts[0] == 0.0
    assert np.max(np.abs(pts)) <= 0.9 + 1e-15


def test_identity_scan_holds_with_constant_margin():
    rep = scan(hc.identity_curve(), NehariFunction.constant(), SMALL)
    assert rep.verdict == "holds"
    assert abs(rep.min_margin - np.pi ** 2 / 2) < 1e-12
    assert rep.equality_count == 0
    assert np.max(np.abs(rep.margin - np.pi ** 2 / 2)) < 1e-12


def test_example1_scan_equality_everywhere(ex1):
    rep = scan(ex1, NehariFunction.constant(), SMALL)
    assert rep.verdict == "holds-with-equality"
    assert rep.equality_count == rep.n_points
    assert np.max(np.abs(rep.margin)) < 1e-10


def test_example2_scan_equality_on_real_diameter(ex2):
    rep = scan(ex2, NehariFunction.inverse_square(),
               GridSpec(n_r=30, n_theta=16, r_max=0.99))
    assert rep.verdict == "holds-with-equality"
    assert rep.min_margin > -1e-8
    on_axis = np.abs(rep.im_z) < 1e-15
    assert np.count_nonzero(on_axis) >= 30
    assert np.max(np.abs(rep.margin[on_axis])) < 1e-10
    off_axis = ~on_axis & (np.hypot(rep.re_z, rep.im_z) > 0.1)
    assert np.min(rep.margin[off_axis]) > 1e-6   # strict inequality off-axis


def test_truncated_tan_curve_fails():
    rep = scan(hc.tan_truncation_curve(), NehariFunction.constant(),
               GridSpec(n_r=60, n_theta=24, r_max=0.7))
    assert rep.verdict == "fails"
    assert rep.min_margin < -10.0
    assert abs(rep.argmin_z) > 0.5


def test_scan_rotation_invariance(ex2):
    grid = GridSpec(n_r=25, n_theta=20, r_max=0.9)
    rep0 = scan(ex2, NehariFunction.inverse_square(), grid)
    rot = hc.precompose_disk_mobius(ex2, DiskMobius(rho=0.0, theta=1.234))
    rep1 = scan(rot, NehariFunction.inverse_square(), grid)
    assert rep0.verdict == rep1.verdict
    assert abs(rep0.min_margin - rep1.min_margin) < 1e-8


def test_scan_scaling_invariance(ex1):
    rep0 = scan(ex1, NehariFunction.constant(), SMALL)
    rep1 = scan(hc.scale_curve(ex1, 7.5j), NehariFunction.constant(), SMALL)
    assert np.max(np.abs(rep0.margin - rep1.margin)) < 1e-9


def test_scan_refinement_zooms_toward_violation():
    curve = hc.tan_truncation_curve()
    grid0 = GridSpec(n_r=20, n_theta=12, r_max=0.7)
    rep0 = scan(curve, NehariFunction.constant(), grid0)
    rep2 = scan(curve, NehariFunction.constant(),
                GridSpec(n_r=20, n_theta=12, r_max=0.7, refine=2))
    assert rep2.n_points > rep0.n_points
    assert rep2.min_margin <= rep0.min_margin + 1e-12


def test_scan_csv_layout(ex1, tmp_path):
    rep = scan(ex1, NehariFunction.constant(), GridSpec(n_r=5, n_theta=4))
    buf = io.StringIO()
    write_scan_csv(rep, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "re_z,im_z,abs_schwarzian,curv_term,bound,margin"
    assert len(lines) == 1 + rep.n_points
    buf2 = io.StringIO()
    write_scan_csv(rep, buf2)
    assert buf.getvalue() == buf2.getvalue()


# ---------------------------------------------------------------------------
# covering bound and mesh distance
# ---------------------------------------------------------------------------

def test_covering_bound_reduces_to_psi_for_flat_curve(profile_inverse_square):
    # phi''(0) = 0 gives H = Psi
    for r in (0.3, 0.6, 0.9):
        h = float(covering_bound(profile_inverse_square, 0.0, r))
        assert abs(h - profile_inverse_square.Psi(r)) < 1e-14


def test_covering_bound_formula(profile_constant):
    psi = profile_constant.Psi(0.7)
    h = float(covering_bound(profile_constant, np.pi, 0.7))
    assert abs(h - 2 * psi / (2 + np.pi * psi)) < 1e-14


def test_covering_bound_rejects_decreasing_weight():
    xs = np.linspace(0.0, 0.95, 40)
    decreasing = NehariFunction.tabulated(xs, 0.6 / (1.0 + xs ** 2))
    prof = extremal_profile(decreasing)
    with pytest.raises(ValueError):
        covering_bound(prof, 0.0, 0.5)


def test_intrinsic_distance_identity_exact():
    for r in (0.3, 0.6, 0.9):
        d = intrinsic_min_distance(hc.identity_curve(), r)
        assert abs(d - r) < 1e-12


def test_intrinsic_distance_radial_pair_quadrature():
    curve = hc.radial_pair_curve(0.7)
    refs = {0.3: 0.30860017943754921325, 0.6: 0.66450987297289685164,
            0.9: 1.1002368306714114741}
    for r, want in refs.items():
        d = intrinsic_min_distance(curve, r)
        assert abs(d - want) < 1e-3, (r, d, want)


def test_intrinsic_distance_scales_linearly():
    curve = hc.radial_pair_curve(0.5)
    d1 = intrinsic_min_distance(curve, 0.5)
    d2 = intrinsic_min_distance(hc.scale_curve(curve, 3.0), 0.5)
    assert abs(d2 - 3.0 * d1) < 1e-10


def test_intrinsic_distance_validation():
    with pytest.raises(ValueError):
        intrinsic_min_distance(hc.identity_curve(), 0.995)
    with pytest.raises(ValueError):
        intrinsic_min_distance(hc.identity_curve(), 0.0)


def test_example1_covering_is_tight_and_consistent(ex1, profile_constant):
    curve = normalize(ex1)
    phi2 = second_derivative_norm(curve)
    assert abs(phi2 - np.pi) < 1e-10
    for r in (0.3, 0.9):
        h = float(covering_bound(profile_constant, phi2, r))
        d = intrinsic_min_distance(curve, r)
        assert d >= h - 2e-3
        assert d <= h + 0.02 * h   # sharp example: mesh value stays close


def test_normalize_idempotent(ex1):
    n1 = normalize(ex1)
    assert abs(tangent_norm_at_zero(n1) - 1.0) < 1e-12
    assert normalize(n1) is n1


# ---------------------------------------------------------------------------
# radial comparison and boundary diagnostics
# ---------------------------------------------------------------------------

def test_radial_comparison_margin_nonnegative(ex1, ex2, profile_constant,
                                              profile_inverse_square):
    zs = disk_samples(300, r_max=0.95, seed=21)
    m1 = radial_comparison_margin(ex1, profile_constant, zs)
    m2 = radial_comparison_margin(ex2, profile_inverse_square, zs)
    assert np.min(m1) > -1e-8
    assert np.min(m2) > -1e-8
    # example 2 achieves equality exactly on the real diameter
    xs = np.linspace(-0.9, 0.9, 11).astype(complex)
    assert np.max(np.abs(radial_comparison_margin(ex2, profile_inverse_square, xs))) < 1e-10


def test_radial_comparison_margin_at_origin(ex1, profile_constant):
    m = radial_comparison_margin(ex1, profile_constant, np.array([0.0 + 0j]))
    assert m.shape == (1,)
    assert abs(m[0]) < 1e-12   # equality at the center for the sharp example


def test_weight_ratio_strip_curve(profile_inverse_square):
    xs = np.linspace(-0.9, 0.9, 13).astype(complex)
    w = weight_ratio(hc.strip_curve(), profile_inverse_square, xs)
    assert np.max(np.abs(w - 1.0)) < 1e-10


def test_boundary_diagnostics_examples(ex1, ex2, profile_constant,
                                       profile_inverse_square):
    d1 = boundary_diagnostics(ex1, profile_constant)
    assert isinstance(d1, BoundaryDiagnostics)
    assert d1.worst_radial_convexity >= -1e-6
    assert d1.distortion is not None
    assert d1.distortion["b"] > 0
    assert d1.boundary_lambda == 0.0 and d1.mu == 2.0
    # the weight-ratio surface of the sharp product curve has a genuine
    # interior critical point on the positive real axis
    assert len(d1.critical_points) >= 1
    z0, grad = d1.critical_points[0]
    assert abs(z0 - 0.5) < 1e-3
    assert grad < 1e-5

    d2 = boundary_diagnostics(ex2, profile_inverse_square)
    assert d2.worst_radial_convexity >= -1e-6
    assert d2.distortion is not None
    assert abs(d2.boundary_lambda - 1.0) < 1e-9
    assert abs(d2.holder_exponent) < 1e-6


def test_boundary_trace_finds_cut_pair(ex1):
    tr = boundary_trace(ex1)
    eps = 1.0 - tr["ring_radius"]
    predicted = 2 * np.pi * 1700.0 * eps
    assert 0.8 * predicted <= tr["min_gap"] <= 1.25 * predicted
    # the near-collision sits at the conjugate pair +-i, not at +-1
    t1 = min(abs(tr["theta1"] - np.pi / 2), abs(tr["theta1"] - 3 * np.pi / 2))
    t2 = min(abs(tr["theta2"] - np.pi / 2), abs(tr["theta2"] - 3 * np.pi / 2))
    assert max(t1, t2) < 0.05
    assert abs(tr["theta1"] - tr["theta2"]) > 1.0
    assert tr["real_axis_gap"] > 1e3 * tr["min_gap"]


def test_boundary_trace_deterministic(ex2):
    a = boundary_trace(ex2, n_samples=1024)
    b = boundary_trace(ex2, n_samples=1024)
    assert a == b
