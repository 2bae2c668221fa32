"""Real-curve S1: direct formula, curvature decomposition, log-speed form,
and invariance under range Moebius transformations.

The two frozen S1 numbers were produced by an independent mpmath oracle
(40 digits, derivatives of the interleaved real coordinates only).
"""

import numpy as np
import pytest

import holocurve as hc
from holocurve.ahlfors import (MobiusRn, PlaneCurve, compose_real,
                               make_speed_curvature, s1_from_speed_curvature,
                               s1_direct, s1_mobius_invariance_check,
                               s1_of_composed_curve, s1_via_curvature)
from holocurve.errors import DomainError
from holocurve.jets import fd_derivative


def test_frozen_s1_values(ex1, ex2):
    v1 = s1_of_composed_curve(ex1, PlaneCurve.diameter(np.pi / 3), 0.2)
    assert abs(v1 - 2.4674040161716976887) < 1e-11
    v2 = s1_of_composed_curve(ex2, PlaneCurve.circle(0.45), 0.3)
    assert abs(v2 - 2.8403127899926617301) < 1e-11


def test_domain_paths_are_unit_speed():
    for path in (PlaneCurve.diameter(0.8), PlaneCurve.circle(0.37, 0.1 + 0.2j)):
        for t in (0.0, 0.3, 0.9):
            j = path.jet(t)
            assert abs(abs(j.d1) - 1.0) < 1e-14
    assert PlaneCurve.diameter(0.0).curvature(0.1) == 0.0
    assert abs(PlaneCurve.circle(0.4).curvature(0.0) - 2.5) < 1e-14


def test_circle_jet_matches_finite_differences():
    path = PlaneCurve.circle(0.45, 0.1 - 0.05j)
    for t in (0.0, 0.7, 2.0):
        j = path.jet(t)
        for order, got in ((1, j.d1), (2, j.d2), (3, j.d3)):
            want = fd_derivative(lambda s: path.jet(s).val, t, order)
            assert abs(got - want) < 1e-6


def test_circle_inside_disk_enforced():
    with pytest.raises(DomainError):
        PlaneCurve.circle(0.5, 0.6)


def test_direct_equals_curvature_decomposition(ex1, ex2):
    paths = [PlaneCurve.diameter(0.0), PlaneCurve.diameter(1.1),
             PlaneCurve.circle(0.3), PlaneCurve.circle(0.6)]
    for curve in (hc.identity_curve(), hc.radial_pair_curve(0.7), ex1, ex2):
        for path in paths:
            lo, hi = path.t_range()
            for t in np.linspace(lo + 0.03, hi - 0.03, 7):
                a = s1_of_composed_curve(curve, path, float(t))
                b = s1_via_curvature(curve, path, float(t))
                assert abs(a - b) <= 1e-8 * (1.0 + abs(a)), (curve.label, path.kind, t)


def test_direct_equals_log_speed_form(ex2):
    # (log v)'' - (1/2)((log v)')^2 + (1/2) v^2 kappa^2 via centered FD in t
    for curve in (hc.radial_pair_curve(0.7), ex2):
        for path in (PlaneCurve.diameter(0.4), PlaneCurve.circle(0.5)):
            speed, curv = make_speed_curvature(curve, path)
            for t in (-0.2, 0.0, 0.35):
                t = float(t) if path.kind == "diameter" else float(t) + 0.6
                a = s1_of_composed_curve(curve, path, t)
                b = s1_from_speed_curvature(speed, curv, t)
                assert abs(a - b) <= 1e-5 * (1.0 + abs(a))


def test_signed_curvature_variant_differs_by_curvature_term(ex2):
    # the "signed" reading drops 2 * (3/4) e^{2 sigma} |K| relative to the
    # correct one; the gap must match that product exactly
    from holocurve.schwarzian import conformal_data
    path = PlaneCurve.circle(0.45)
    for t in (0.3, 1.1, 2.0):
        right = s1_via_curvature(ex2, path, t)
        wrong = s1_via_curvature(ex2, path, t, signed_curvature=True)
        z = path.jet(t).val
        data = conformal_data(ex2.eval(np.array([z]), check_domain=False))
        gap = 1.5 * np.exp(2 * data.sigma[0]) * abs(data.curvature[0])
        assert gap > 1e-4   # the probe is only meaningful off the flat locus
        assert abs((right - wrong) - gap) <= 1e-10 * (1.0 + gap)


def test_s1_invariant_under_range_mobius(ex2):
    # translation, rotation, scaling, and sphere inversion of the target
    path = PlaneCurve.diameter(0.3)
    sample = compose_real(ex2, path, 0.0)
    dim = sample.x0.size
    span = float(np.max(np.abs(sample.x0))) + 1.0
    mob = (MobiusRn(dim)
           .translate(0.3 * np.ones(dim))
           .invert(2.5 * span * np.eye(dim)[0])
           .scale(1.7))
    worst = s1_mobius_invariance_check(ex2, path, mob, (-0.5, -0.1, 0.35))
    assert worst < 1e-4


def test_mobius_rn_validation():
    with pytest.raises(ValueError):
        MobiusRn(4).orthogonal(np.ones((4, 4)))   # not orthogonal
    m = MobiusRn(2).invert(np.array([1.0, 0.0]))
    with pytest.raises(ValueError):
        m.apply(np.array([1.0, 0.0]))             # inversion pole


def test_s1_direct_frozen_formula():
    # hand-checkable case: a planar circle of radius R traversed at unit
    # speed has S1 = 1/(2 R^2) (log v = 0, kappa = 1/R)
    R = 0.7
    ts = np.array([0.2])
    sample_kwargs = dict(
        t=0.2,
        x0=np.array([R * np.cos(0.2 / R), R * np.sin(0.2 / R)]),
        x1=np.array([-np.sin(0.2 / R), np.cos(0.2 / R)]),
        x2=np.array([-np.cos(0.2 / R), -np.sin(0.2 / R)]) / R,
        x3=np.array([np.sin(0.2 / R), -np.cos(0.2 / R)]) / R ** 2,
    )
    from holocurve.ahlfors import RealCurveSample
    val = s1_direct(RealCurveSample(**sample_kwargs))
    assert abs(val - 1.0 / (2 * R * R)) < 1e-14
