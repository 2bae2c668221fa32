"""Third-order jet arithmetic against finite differences and closed forms."""

import numpy as np
import pytest

from holocurve.errors import DomainError, VanishingTangentError
from holocurve.jets import (AffineComponent, ComposedComponent, DiskMobius,
                            ExponentialComponent, HoloCurve, Jet3,
                            MoebiusComponent, PolynomialComponent,
                            ReciprocalComponent, StripMapComponent,
                            exponential_curve, fd_derivative, fd_jet,
                            identity_curve, polynomial_curve,
                            precompose_disk_mobius, radial_pair_curve,
                            scale_curve, strip_curve, tan_series,
                            tan_truncation_curve)
from holocurve.sampling import disk_samples, r2_sequence

RNG_POINTS = disk_samples(25, r_max=0.8, seed=3)

# Components whose nearest singularity sits on the unit circle (the strip
# map) are tested on a smaller radius: the third-order stencil's h^4 f^(7)
# truncation term outgrows the stated tolerance within ~0.3 of a pole.
COMPONENTS = [
    (PolynomialComponent([0.2, 1.0, -0.3j, 0.1, 0.05]), 0.8),
    (ExponentialComponent(1.5, 0.8 - 0.6j), 0.8),
    (MoebiusComponent(1.0, 0.3j, 0.25, 1.0), 0.8),
    (StripMapComponent(), 0.6),
    (ComposedComponent(MoebiusComponent(0.05, 1j, 0.05, -1j),
                       StripMapComponent()), 0.6),
    (ReciprocalComponent(ExponentialComponent(2.0, -1.1)), 0.8),
    (AffineComponent(PolynomialComponent([0.0, 1.0, 0.4]), mul=2.0 - 1j,
                     add=3.0), 0.8),
]


@pytest.mark.parametrize("comp,r_max", COMPONENTS,
                         ids=lambda v: type(v).__name__ if hasattr(v, "jet") else None)
def test_component_jets_match_finite_differences(comp, r_max):
    # orders 1-2 at the tight step, order 3 at its larger roundoff-safe step
    for z in disk_samples(25, r_max=r_max, seed=3):
        exact = comp.jet(z)
        approx = fd_jet(comp, z)
        for name in ("val", "d1", "d2", "d3"):
            a, b = getattr(exact, name), getattr(approx, name)
            assert abs(a - b) <= 1e-6 * (1.0 + abs(a)), (type(comp).__name__, name, z)


def test_jet_ring_operations_consistent_with_composition():
    f = PolynomialComponent([0.1, 0.7, -0.2, 0.3])
    g = ExponentialComponent(1.0, 0.5j)
    for z in RNG_POINTS[:8]:
        jf, jg = f.jet(z), g.jet(z)
        s = jf + jg
        p = jf * jg
        q = jf / jg
        # compare against FD of the combined scalar functions
        fs = lambda w: f.jet(w).val + g.jet(w).val
        fp = lambda w: f.jet(w).val * g.jet(w).val
        fq = lambda w: f.jet(w).val / g.jet(w).val
        for k, (jet_v, fn) in enumerate([(s, fs), (p, fp), (q, fq)]):
            for order in (1, 2, 3):
                want = fd_derivative(fn, z, order)
                got = (jet_v.d1, jet_v.d2, jet_v.d3)[order - 1]
                assert abs(got - want) <= 1e-6 * (1.0 + abs(got))


def test_jet_compose_chain_rule():
    outer = PolynomialComponent([0.0, 1.0, 0.25, -0.1])
    inner = MoebiusComponent(1.0, 0.2, -0.1j, 1.0)
    for z in RNG_POINTS[:8]:
        composed = outer.jet(inner.jet(z).val).compose(inner.jet(z))
        direct = ComposedComponent(outer, inner).jet(z)
        for name in ("val", "d1", "d2", "d3"):
            assert abs(getattr(composed, name) - getattr(direct, name)) < 1e-12


def test_reciprocal_jet_identity():
    # f * (1/f) == 1 through third order
    f = PolynomialComponent([0.5, 1.0, 0.3j])
    for z in RNG_POINTS[:8]:
        j = f.jet(z)
        prod = j * j.reciprocal()
        assert abs(prod.val - 1.0) < 1e-14
        assert abs(prod.d1) < 1e-13
        assert abs(prod.d2) < 1e-12
        assert abs(prod.d3) < 1e-11


def test_disk_mobius_maps_disk_into_disk_and_increases_radius():
    # |T(x)| >= |x| on the real axis for the vertical-translation family
    us = r2_sequence(60, 2, seed=11)
    for u1, u2 in us:
        mob = DiskMobius(rho=-0.9 + 1.8 * u1, theta=2 * np.pi * u2)
        xs = np.linspace(-0.999, 0.999, 41)
        vals = mob(xs.astype(complex))
        assert np.all(np.abs(vals) < 1.0)
        assert np.all(np.abs(vals) >= np.abs(xs) - 1e-14)


def test_disk_mobius_jet_matches_finite_differences():
    mob = DiskMobius(rho=0.35, theta=1.1)
    for z in RNG_POINTS[:10]:
        exact = mob.jet(z)
        approx = fd_jet(mob, z)
        for name in ("val", "d1", "d2", "d3"):
            assert abs(getattr(exact, name) - getattr(approx, name)) <= 1e-7


def test_disk_mobius_rejects_out_of_range_rho():
    with pytest.raises(ValueError):
        DiskMobius(rho=1.0, theta=0.0)


def test_tan_series_schwarzian_at_zero():
    # S(tan(a z))(0) = 2 a^2; the truncation reproduces it through the jet
    from holocurve.schwarzian import classical_schwarzian
    curve = tan_truncation_curve(stretch=1.2, degree=41)
    jet = curve.eval(np.array([0.0]))
    s0 = classical_schwarzian(jet.components[0])[0]
    a = 1.2 * np.pi / 2
    assert abs(s0 - 2 * a * a) < 1e-10


def test_tan_series_coefficients():
    c = tan_series(11)
    # tan z = z + z^3/3 + 2 z^5/15 + 17 z^7/315 + ...
    assert abs(c[1] - 1.0) < 1e-15
    assert abs(c[3] - 1.0 / 3.0) < 1e-15
    assert abs(c[5] - 2.0 / 15.0) < 1e-15
    assert abs(c[7] - 17.0 / 315.0) < 1e-14
    assert np.all(c[::2] == 0.0)


def test_eval_outside_disk_raises():
    with pytest.raises(DomainError):
        identity_curve().eval(np.array([1.0 + 0j]))
    with pytest.raises(DomainError):
        identity_curve().eval(np.array([0.3, 1.2j]))


def test_vanishing_tangent_detected():
    # phi = (z^2, z^3) has phi'(0) = 0
    bad = polynomial_curve([[0, 0, 1], [0, 0, 0, 1]])
    with pytest.raises(VanishingTangentError):
        bad.eval(np.array([0.0]))


def test_moebius_component_pole_guard():
    comp = MoebiusComponent(1.0, 0.0, 1.0, -0.5)  # pole at z = 0.5
    with pytest.raises(DomainError):
        comp.jet(0.5)
    with pytest.raises(ValueError):
        MoebiusComponent(1.0, 2.0, 1.0, 2.0)  # degenerate (ad = bc)


def test_precompose_disk_mobius_values():
    mob = DiskMobius(rho=0.3, theta=0.7)
    curve = radial_pair_curve(0.7)
    pre = precompose_disk_mobius(curve, mob)
    zs = disk_samples(12, r_max=0.7, seed=5)
    direct = curve.eval(mob(zs)).vals()
    viaa = pre.eval(zs).vals()
    assert np.max(np.abs(direct - viaa)) < 1e-14


def test_scale_curve_scales_all_components():
    curve = exponential_curve([(1700.0, np.pi), (1.0, -np.pi)])
    scaled = scale_curve(curve, 0.5j)
    z = np.array([0.2 + 0.1j])
    assert np.max(np.abs(scaled.eval(z).vals() - 0.5j * curve.eval(z).vals())) < 1e-12
    with pytest.raises(ValueError):
        scale_curve(curve, 0.0)


def test_strip_curve_is_artanh():
    z = np.array([0.4 - 0.2j])
    jet = strip_curve().eval(z)
    assert abs(jet.vals()[0, 0] - np.arctanh(z[0])) < 1e-14
    assert abs(jet.d1s()[0, 0] - 1.0 / (1.0 - z[0] ** 2)) < 1e-14


def test_polynomial_curve_validates_input():
    with pytest.raises(ValueError):
        polynomial_curve([])
    with pytest.raises(ValueError):
        polynomial_curve([[]])
