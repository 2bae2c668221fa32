"""Order-3 holomorphic jets and the built-in curve models.

A holomorphic curve here is a tuple of scalar holomorphic components on the
unit disk; everything downstream (Schwarzian data, curvature, criterion
scans) consumes only the value and first three derivatives of each component.
This module provides

* ``Jet3`` -- (f, f', f'', f''') with Leibniz / chain / reciprocal algebra,
* component models (polynomial, exponential, Moebius, strip map, composition
  and affine/reciprocal wrappers) emitting exact jets,
* ``HoloCurve`` / ``CurveJet`` / ``eval_curve``,
* ``DiskMobius`` disk automorphisms and ``precompose_disk_mobius``,
* finite-difference reference derivatives (``fd_derivative``, ``fd_jet``)
  used as independent oracles by the test-suite and the identity checker.

Jet evaluation is vectorized: ``z`` may be a scalar or ndarray and the fields
of the returned jets have the same shape.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, VanishingTangentError

__all__ = [
    "Jet3", "CurveJet", "HoloCurve", "DiskMobius",
    "PolynomialComponent", "ExponentialComponent", "MoebiusComponent",
    "StripMapComponent", "ComposedComponent", "ReciprocalComponent",
    "AffineComponent", "PrecomposedComponent",
    "eval_curve", "precompose_disk_mobius", "scale_curve",
    "identity_curve", "polynomial_curve", "exponential_curve",
    "strip_curve", "tan_truncation_curve", "radial_pair_curve",
    "planar_affine_curve",
    "fd_derivative", "fd_jet", "tan_series",
]


# ---------------------------------------------------------------------------
# Jet algebra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Jet3:
    """Value and first three complex derivatives of a holomorphic function.

    Fields are scalars or ndarrays of a common shape; the algebra is
    elementwise.
    """

    val: complex | np.ndarray
    d1: complex | np.ndarray
    d2: complex | np.ndarray
    d3: complex | np.ndarray

    def __add__(self, other: "Jet3") -> "Jet3":
        return Jet3(self.val + other.val, self.d1 + other.d1,
                    self.d2 + other.d2, self.d3 + other.d3)

    def __sub__(self, other: "Jet3") -> "Jet3":
        return Jet3(self.val - other.val, self.d1 - other.d1,
                    self.d2 - other.d2, self.d3 - other.d3)

    def __neg__(self) -> "Jet3":
        return Jet3(-self.val, -self.d1, -self.d2, -self.d3)

    def __mul__(self, other):
        if isinstance(other, Jet3):
            # Leibniz to order three.
            f, g = self, other
            return Jet3(
                f.val * g.val,
                f.d1 * g.val + f.val * g.d1,
                f.d2 * g.val + 2.0 * f.d1 * g.d1 + f.val * g.d2,
                f.d3 * g.val + 3.0 * f.d2 * g.d1 + 3.0 * f.d1 * g.d2
                + f.val * g.d3,
            )
        return Jet3(self.val * other, self.d1 * other,
                    self.d2 * other, self.d3 * other)

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet3":
        """Jet of 1/f.  Caller is responsible for f != 0."""
        g, g1, g2, g3 = self.val, self.d1, self.d2, self.d3
        inv = 1.0 / g
        inv2 = inv * inv
        return Jet3(
            inv,
            -g1 * inv2,
            (2.0 * g1 * g1 * inv - g2) * inv2,
            (-6.0 * g1 ** 3 * inv2 + 6.0 * g1 * g2 * inv - g3) * inv2,
        )

    def __truediv__(self, other):
        if isinstance(other, Jet3):
            return self * other.reciprocal()
        return self * (1.0 / other)

    def compose(self, inner: "Jet3") -> "Jet3":
        """Chain rule (Faa di Bruno to order three).

        ``self`` must hold the jets of the outer map evaluated at
        ``inner.val``; the result is the jet of outer(inner(.)).
        """
        g1, g2, g3 = inner.d1, inner.d2, inner.d3
        return Jet3(
            self.val,
            self.d1 * g1,
            self.d2 * g1 * g1 + self.d1 * g2,
            self.d3 * g1 ** 3 + 3.0 * self.d2 * g1 * g2 + self.d1 * g3,
        )


# ---------------------------------------------------------------------------
# Component models (each emits exact order-3 jets)
# ---------------------------------------------------------------------------

class PolynomialComponent:
    """f(z) = sum coeffs[k] z^k, coefficients ascending."""

    def __init__(self, coeffs: Sequence[complex]):
        c = np.asarray(coeffs, dtype=complex)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coeffs must be a nonempty 1-d sequence")
        self.coeffs = c
        P = np.polynomial.polynomial
        self._dc = [c, P.polyder(c), P.polyder(c, 2), P.polyder(c, 3)]

    def jet(self, z) -> Jet3:
        P = np.polynomial.polynomial
        return Jet3(*(P.polyval(z, d) for d in self._dc))


class ExponentialComponent:
    """f(z) = amplitude * exp(rate * z)."""

    def __init__(self, amplitude: complex, rate: complex):
        if amplitude == 0:
            raise ValueError("amplitude must be nonzero")
        self.amplitude = complex(amplitude)
        self.rate = complex(rate)

    def jet(self, z) -> Jet3:
        b = self.rate
        f = self.amplitude * np.exp(b * z)
        return Jet3(f, b * f, b * b * f, b ** 3 * f)


class MoebiusComponent:
    """f(z) = (a z + b) / (c z + d), with a d - b c != 0."""

    def __init__(self, a: complex, b: complex, c: complex, d: complex):
        self.a, self.b, self.c, self.d = (complex(a), complex(b),
                                          complex(c), complex(d))
        self.det = self.a * self.d - self.b * self.c
        if self.det == 0:
            raise ValueError("degenerate Moebius map (zero determinant)")

    def jet(self, z) -> Jet3:
        w = self.c * z + self.d
        if np.any(np.abs(w) < 1e-12):
            raise DomainError("Moebius component evaluated at its pole")
        inv = 1.0 / w
        det = self.det
        return Jet3(
            (self.a * z + self.b) * inv,
            det * inv ** 2,
            -2.0 * self.c * det * inv ** 3,
            6.0 * self.c ** 2 * det * inv ** 4,
        )


class StripMapComponent:
    """f(z) = artanh z = (1/2) log((1+z)/(1-z)); maps D onto |Im w| < pi/4."""

    def jet(self, z) -> Jet3:
        one_minus = 1.0 - z * z
        inv = 1.0 / one_minus
        return Jet3(
            0.5 * (np.log(1.0 + z) - np.log(1.0 - z)),
            inv,
            2.0 * z * inv * inv,
            (2.0 + 6.0 * z * z) * inv ** 3,
        )


class ComposedComponent:
    """outer(inner(z)) via the order-3 chain rule."""

    def __init__(self, outer, inner):
        self.outer = outer
        self.inner = inner

    def jet(self, z) -> Jet3:
        gj = self.inner.jet(z)
        return self.outer.jet(gj.val).compose(gj)


class ReciprocalComponent:
    """1/f for a nonvanishing component f."""

    def __init__(self, base):
        self.base = base

    def jet(self, z) -> Jet3:
        fj = self.base.jet(z)
        if np.any(np.abs(fj.val) < 1e-150):
            raise DomainError("reciprocal component hit a zero of its base")
        return fj.reciprocal()


class AffineComponent:
    """mul * f(z) + add."""

    def __init__(self, base, mul: complex = 1.0, add: complex = 0.0):
        self.base = base
        self.mul = complex(mul)
        self.add = complex(add)

    def jet(self, z) -> Jet3:
        fj = self.base.jet(z) * self.mul
        return Jet3(fj.val + self.add, fj.d1, fj.d2, fj.d3)


# ---------------------------------------------------------------------------
# Disk automorphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiskMobius:
    """T(z) = e^{i theta} (z - i rho) / (1 + i rho z), rho in (-1, 1).

    These automorphisms of the disk move points radially outward on the real
    axis: |T(x)| >= |x| for real x, which is what makes them compatible with
    radially non-increasing weight functions.
    """

    rho: float
    theta: float = 0.0

    def __post_init__(self):
        if not -1.0 < float(self.rho) < 1.0:
            raise ValueError("rho must lie in (-1, 1)")

    def jet(self, z) -> Jet3:
        rho = self.rho
        den = 1.0 + 1j * rho * z
        phase = np.exp(1j * self.theta)
        fac = phase * (1.0 - rho * rho)
        inv = 1.0 / den
        return Jet3(
            phase * (z - 1j * rho) * inv,
            fac * inv ** 2,
            -2j * rho * fac * inv ** 3,
            -6.0 * rho * rho * fac * inv ** 4,
        )

    def __call__(self, z):
        return self.jet(z).val


class PrecomposedComponent:
    """f(T(z)) for a component f and a disk automorphism T."""

    def __init__(self, base, mobius: DiskMobius):
        self.base = base
        self.mobius = mobius

    def jet(self, z) -> Jet3:
        tj = self.mobius.jet(z)
        return self.base.jet(tj.val).compose(tj)


# ---------------------------------------------------------------------------
# Curves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurveJet:
    """Jets of all components of a curve at common evaluation points."""

    z: complex | np.ndarray
    components: tuple[Jet3, ...]

    @property
    def n(self) -> int:
        return len(self.components)

    # Stacked views, shape (n,) + shape(z); convenient for sums over
    # components.
    def vals(self) -> np.ndarray:
        return np.stack([np.asarray(c.val) for c in self.components])

    def d1s(self) -> np.ndarray:
        return np.stack([np.asarray(c.d1) for c in self.components])

    def d2s(self) -> np.ndarray:
        return np.stack([np.asarray(c.d2) for c in self.components])

    def d3s(self) -> np.ndarray:
        return np.stack([np.asarray(c.d3) for c in self.components])


@dataclass(frozen=True)
class HoloCurve:
    """A holomorphic curve D -> C^n given by exact component models."""

    components: tuple
    label: str = "curve"

    def __post_init__(self):
        if not self.components:
            raise ValueError("a curve needs at least one component")

    @property
    def n(self) -> int:
        return len(self.components)

    def eval(self, z, check_domain: bool = True) -> CurveJet:
        z = np.asarray(z, dtype=complex) if np.ndim(z) else complex(z)
        if check_domain and np.any(np.abs(z) >= 1.0):
            raise DomainError("evaluation point outside the open unit disk")
        jets = tuple(m.jet(z) for m in self.components)
        q = sum(np.abs(j.d1) ** 2 for j in jets)
        if np.any(q < 1e-280):
            raise VanishingTangentError(
                f"tangent vector of '{self.label}' vanished at a requested point")
        return CurveJet(z, jets)


def eval_curve(curve: HoloCurve, z) -> CurveJet:
    """Evaluate the order-3 jet of every component of `curve` at `z`."""
    return curve.eval(z)


def precompose_disk_mobius(curve: HoloCurve, mobius: DiskMobius) -> HoloCurve:
    """The curve z -> phi(T(z)) with exact chain-rule jets."""
    comps = tuple(PrecomposedComponent(m, mobius) for m in curve.components)
    return HoloCurve(comps, label=f"{curve.label}∘mobius(rho={mobius.rho:g},"
                                  f"theta={mobius.theta:g})")


def scale_curve(curve: HoloCurve, factor: complex) -> HoloCurve:
    """The curve factor * phi (all components scaled by one constant)."""
    if factor == 0:
        raise ValueError("scale factor must be nonzero")
    comps = tuple(AffineComponent(m, mul=factor) for m in curve.components)
    return HoloCurve(comps, label=f"{abs(factor):.6g}*{curve.label}")


# ---------------------------------------------------------------------------
# Factories
# ---------------------------------------------------------------------------

def identity_curve() -> HoloCurve:
    return HoloCurve((PolynomialComponent([0.0, 1.0]),), label="identity")


def polynomial_curve(coeff_lists: Sequence[Sequence[complex]],
                     label: str | None = None) -> HoloCurve:
    comps = tuple(PolynomialComponent(c) for c in coeff_lists)
    return HoloCurve(comps, label=label or f"polynomial(n={len(comps)})")


def exponential_curve(pairs: Sequence[tuple[complex, complex]],
                      label: str | None = None) -> HoloCurve:
    comps = tuple(ExponentialComponent(a, b) for a, b in pairs)
    return HoloCurve(comps, label=label or f"exponential(n={len(comps)})")


def strip_curve() -> HoloCurve:
    """n = 1 curve given by the strip map artanh."""
    return HoloCurve((StripMapComponent(),), label="strip-map")


def radial_pair_curve(k: float = 0.7) -> HoloCurve:
    """phi(z) = (z, k z^2); simple nonplanar test curve with K < 0 off 0."""
    return HoloCurve(
        (PolynomialComponent([0.0, 1.0]), PolynomialComponent([0.0, 0.0, k])),
        label=f"radial-pair(k={k:g})")


def planar_affine_curve(base, a: complex, b: complex,
                        label: str = "planar") -> HoloCurve:
    """phi = (f, a f + b): image in an affine line, so curvature vanishes."""
    return HoloCurve((base, AffineComponent(base, mul=a, add=b)), label=label)


def tan_series(degree: int) -> np.ndarray:
    """Maclaurin coefficients of tan up to `degree` (ascending).

    Built by iterating the integral form of T' = 1 + T^2; each pass doubles
    the number of correct coefficients, so ~log2(degree) passes suffice.
    """
    t = np.zeros(degree + 1)
    for _ in range(int(np.ceil(np.log2(max(degree, 2)))) + 2):
        sq = np.convolve(t, t)[:degree + 1]
        nxt = np.zeros(degree + 1)
        nxt[1] = 1.0 + sq[0]
        for k in range(1, degree):
            nxt[k + 1] = sq[k] / (k + 1)
        t = nxt
    return t


def tan_truncation_curve(stretch: float = 1.2, degree: int = 41) -> HoloCurve:
    """Polynomial truncation of f(z) = tan(a z), a = stretch * pi / 2.

    For stretch > 1 this has S f(0) = 2 a^2 > pi^2 / 2, so it violates the
    classical bound at the origin while remaining polynomial (pole-free).
    Keep scans inside |z| <~ 0.6/stretch where the truncation is faithful.
    """
    a = stretch * np.pi / 2.0
    t = tan_series(degree)
    coeffs = t * a ** np.arange(degree + 1)
    return HoloCurve((PolynomialComponent(coeffs),),
                     label=f"tan-truncation(stretch={stretch:g})")


# ---------------------------------------------------------------------------
# Finite-difference references
# ---------------------------------------------------------------------------

_FD_STEPS = {1: 1e-4, 2: 1e-4, 3: 5e-3}


def fd_derivative(f: Callable, z, order: int, h: float | None = None):
    """4th-order central difference of a holomorphic callable along the real
    direction.

    Orders 1-2 default to h = 1e-4; order 3 uses h = 5e-3 because the
    roundoff floor eps/h^3 of a third-difference at h = 1e-4 (~1e-4 relative)
    would drown the truncation term.
    """
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2 or 3")
    if h is None:
        h = _FD_STEPS[order]
    zs = [f(z + k * h) for k in range(-3, 4)]
    fm3, fm2, fm1, f0, fp1, fp2, fp3 = zs
    if order == 1:
        return (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h)
    if order == 2:
        return (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h)
    return (-fp3 + 8.0 * fp2 - 13.0 * fp1 + 13.0 * fm1 - 8.0 * fm2 + fm3) \
        / (8.0 * h ** 3)


def fd_jet(component, z) -> Jet3:
    """Finite-difference Jet3 of a component model (oracle path)."""
    f = (lambda w: component.jet(w).val) if hasattr(component, "jet") else component
    return Jet3(f(z), fd_derivative(f, z, 1), fd_derivative(f, z, 2),
                fd_derivative(f, z, 3))
