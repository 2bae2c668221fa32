"""Nehari weight functions, disconjugacy certification, extremal profiles.

A weight here is an even positive function p on (-1, 1) whose compactified
kernel P(t) = (1-x^2)^2 p(x), x = tanh t, is non-increasing in |t| and for
which u'' + p u = 0 is disconjugate (no solution has two zeros).  Built-in
kinds:

    constant        p = pi^2/4            (kernel (pi^2/4) sech^4 t)
    inverse_square  p = (1-x^2)^{-2}      (kernel 1)
    half_strip      p = 2 (1-x^2)^{-1}    (kernel 2 sech^2 t)

each times an optional positive factor, plus cubic-spline tabulated weights.

Disconjugacy is certified through the compactified equation
v'' + (P(t) - 1) v = 0 on |t| <= t_max (v = u cosh t shares its zeros with
u), integrated in Pruefer phase form so no exponentially large magnitudes
ever appear; with t_max = 120 the untested endpoint gap is ~4e-105, far
below anything float64 sampling of x could reach.

The extremal profile solves u0'' + p u0 = 0 (u0(0)=1, u0'(0)=0) and
U'' = p U together with Phi = int u0^{-2} and Psi = int U^{-2}, and derives
the radial comparison data A(r) and the weight metric curvature.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from .errors import NumericalError
from .jets import DiskMobius

__all__ = [
    "NehariFunction", "NehariValidation", "validate_nehari",
    "disconjugacy_count", "extremality_margin",
    "ExtremalProfile", "extremal_profile", "metric_quantities",
    "mobius_weight_check", "completeness_probe", "write_profile_csv",
    "richardson_lambda",
]

_KINDS = ("constant", "inverse_square", "half_strip", "tabulated")


def _one_minus_sq(x):
    """(1-x)(1+x): keeps full precision for x within ~1e-12 of +-1."""
    return (1.0 - x) * (1.0 + x)


@dataclass(frozen=True)
class NehariFunction:
    """An even positive weight on (-1, 1); see module docstring for kinds."""

    kind: str
    factor: float = 1.0
    table_x: np.ndarray | None = None
    table_p: np.ndarray | None = None
    _spline: CubicSpline | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if not self.factor > 0:
            raise ValueError("weight factor must be positive")
        if self.kind == "tabulated":
            x = np.asarray(self.table_x, dtype=float)
            p = np.asarray(self.table_p, dtype=float)
            if x.ndim != 1 or x.shape != p.shape or x.size < 4:
                raise ValueError("tabulated weight needs matching 1-d tables "
                                 "with at least 4 nodes")
            if x[0] != 0.0 or np.any(np.diff(x) <= 0) or x[-1] >= 1.0:
                raise ValueError("table abscissae must increase from 0 "
                                 "strictly inside [0, 1)")
            object.__setattr__(self, "table_x", x)
            object.__setattr__(self, "table_p", p)
            object.__setattr__(self, "_spline", CubicSpline(x, p))

    # -- constructors -------------------------------------------------------

    @staticmethod
    def constant(factor: float = 1.0) -> "NehariFunction":
        return NehariFunction("constant", factor)

    @staticmethod
    def inverse_square(factor: float = 1.0) -> "NehariFunction":
        return NehariFunction("inverse_square", factor)

    @staticmethod
    def half_strip(factor: float = 1.0) -> "NehariFunction":
        return NehariFunction("half_strip", factor)

    @staticmethod
    def tabulated(xs: Sequence[float], ps: Sequence[float],
                  factor: float = 1.0) -> "NehariFunction":
        return NehariFunction("tabulated", factor, np.asarray(xs, float),
                              np.asarray(ps, float))

    def scaled(self, k: float) -> "NehariFunction":
        return NehariFunction(self.kind, self.factor * k, self.table_x,
                              self.table_p)

    # -- evaluation ---------------------------------------------------------

    def __call__(self, x):
        ax = np.abs(x)
        if self.kind == "constant":
            return self.factor * (np.pi ** 2 / 4.0) * np.ones_like(ax)
        if self.kind == "inverse_square":
            return self.factor / _one_minus_sq(ax) ** 2
        if self.kind == "half_strip":
            return 2.0 * self.factor / _one_minus_sq(ax)
        # tabulated: spline evaluated on |x|, clamped at the table edge
        xe = np.minimum(ax, self.table_x[-1])
        return self.factor * self._spline(xe)

    def kernel(self, t):
        """P(t) = (1-x^2)^2 p(x) at x = tanh t (closed forms where known)."""
        if self.kind == "constant":
            return self.factor * (np.pi ** 2 / 4.0) / np.cosh(t) ** 4
        if self.kind == "inverse_square":
            return self.factor * np.ones_like(np.asarray(t, dtype=float))
        if self.kind == "half_strip":
            return 2.0 * self.factor / np.cosh(t) ** 2
        x = np.tanh(t)
        return (1.0 / np.cosh(t) ** 4) * self(x)

    @property
    def boundary_lambda(self) -> float | None:
        """lim_{|x| -> 1} (1-x^2)^2 p(x), when known in closed form."""
        if self.kind == "constant" or self.kind == "half_strip":
            return 0.0
        if self.kind == "inverse_square":
            return self.factor
        return None


def _as_kernel(p) -> Callable:
    """Kernel P(t) for a NehariFunction or plain callable weight."""
    if isinstance(p, NehariFunction):
        return p.kernel
    return lambda t: (1.0 / np.cosh(t) ** 4) * p(np.tanh(t))


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NehariValidation:
    positive: bool
    even: bool
    kernel_nonincreasing: bool
    disconjugate: bool
    zero_count: int
    messages: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return (self.positive and self.even and self.kernel_nonincreasing
                and self.disconjugate)


def validate_nehari(p, resolution: int = 2001, t_max: float = 120.0
                    ) -> NehariValidation:
    """Check the defining properties of a Nehari weight on a sample grid.

    Positivity/evenness are sampled on (-1, 1); the monotonicity of the
    compactified kernel is sampled in the t variable (uniform there = heavily
    refined near |x| = 1, which is where violations hide).
    """
    msgs = []
    xs = np.tanh(np.linspace(-16.0, 16.0, resolution))
    vals = np.asarray(p(xs), dtype=float)
    positive = bool(np.all(vals > 0.0))
    if not positive:
        msgs.append("weight is not strictly positive on the sample grid")
    scale = float(np.max(np.abs(vals))) or 1.0
    even = bool(np.all(np.abs(vals - vals[::-1]) <= 1e-9 * scale))
    if not even:
        msgs.append("weight is not even")

    kern = _as_kernel(p)
    ts = np.linspace(0.0, 40.0, resolution)
    kv = np.asarray(kern(ts), dtype=float)
    tol = 1e-10 * max(float(kv[0]), 1e-300)
    kernel_noninc = bool(np.all(np.diff(kv) <= tol))
    if not kernel_noninc:
        msgs.append("(1-x^2)^2 p(x) increases somewhere in |x|")

    count = disconjugacy_count(p, t_max=t_max) if positive else -1
    disconj = count == 0
    if positive and not disconj:
        msgs.append(f"u'' + p u = 0 oscillates ({count} interior zero(s))")
    return NehariValidation(positive, even, kernel_noninc, disconj,
                            count, tuple(msgs))


# ---------------------------------------------------------------------------
# Disconjugacy and the extremality margin
# ---------------------------------------------------------------------------

def disconjugacy_count(p, t_max: float = 120.0, rtol: float = 1e-10) -> int:
    """Number of zeros in (-t_max, t_max] of the solution of
    v'' + (P(t) - 1) v = 0 started as v(-t_max) = 0, v'(-t_max) = 1.

    Zero count == 0 certifies disconjugacy of u'' + p u = 0 on
    |x| <= tanh(t_max).  The count is obtained from the Pruefer phase
    theta' = cos^2 theta + (P - 1) sin^2 theta, theta(-t_max) = 0: zeros of v
    correspond to theta crossing positive multiples of pi (each crossed
    transversally, theta' = 1 there), so the count is floor(theta(t_max)/pi).
    """
    kern = _as_kernel(p)

    def rhs(t, y):
        g = float(kern(t)) - 1.0
        s, c = np.sin(y[0]), np.cos(y[0])
        return [c * c + g * s * s]

    sol = solve_ivp(rhs, (-t_max, t_max), [0.0], method="DOP853",
                    rtol=rtol, atol=1e-12)
    if not sol.success:  # pragma: no cover - smooth bounded RHS
        raise NumericalError(f"phase integration failed: {sol.message}")
    return int(np.floor(sol.y[0, -1] / np.pi + 1e-9))


def extremality_margin(p, k_hi: float = 4.0, k_tol: float = 1e-4,
                       t_max: float = 120.0) -> float:
    """sup{k >= 1 : u'' + k p u = 0 is disconjugate}, by bisection.

    Requires p itself to be disconjugate and the margin to lie below k_hi.
    A margin of ~1 means p is extremal: any upward scaling destroys
    disconjugacy.
    """
    def count(k: float) -> int:
        if isinstance(p, NehariFunction):
            return disconjugacy_count(p.scaled(k), t_max=t_max)
        return disconjugacy_count(lambda x: k * p(x), t_max=t_max)

    if count(1.0) != 0:
        raise ValueError("weight is not disconjugate; margin undefined")
    if count(k_hi) == 0:
        raise NumericalError(f"extremality margin exceeds the bracket {k_hi}")
    lo, hi = 1.0, k_hi
    while hi - lo > k_tol:
        mid = 0.5 * (lo + hi)
        if count(mid) == 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Extremal profile
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExtremalProfile:
    """Radial ODE data of a weight: u0, Phi, U, Psi and derived quantities.

    u0 solves u'' + p u = 0 with u0(0) = 1, u0'(0) = 0; Phi' = u0^{-2}
    (so Phi is the distortion of the associated radial metric); U solves
    U'' = p U with the same initial data and Psi' = U^{-2}.  All evaluations
    are restricted to 0 <= x <= 1 - eps.
    """

    p: object
    eps: float
    xs: np.ndarray
    _sol: object = field(repr=False, compare=False, default=None)
    _p2_at_0: float = 0.0

    # -- raw states ---------------------------------------------------------

    def _y(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < 0.0) or np.any(x > 1.0 - self.eps + 1e-15):
            raise ValueError(
                f"profile evaluated outside [0, {1.0 - self.eps!r}]")
        return self._sol.sol(x)

    def u0(self, x):
        return self._y(x)[0]

    def u0_prime(self, x):
        return self._y(x)[1]

    def Phi(self, x):
        return self._y(x)[2]

    def PhiP(self, x):
        return 1.0 / self.u0(x) ** 2

    def U(self, x):
        return self._y(x)[3]

    def U_prime(self, x):
        return self._y(x)[4]

    def Psi(self, x):
        return self._y(x)[5]

    # -- derived ------------------------------------------------------------

    def A(self, r):
        """A(r) = (1/4)(Phi''/Phi')^2 + (1/(2r)) Phi''/Phi'.

        Near r = 0 the closed formula is 0/0-ish; a series in r^2 (exact
        through O(r^2)) takes over below r = 1e-4.
        """
        r = np.asarray(r, dtype=float)
        scalar = r.ndim == 0
        r = np.atleast_1d(r)
        out = np.empty_like(r)
        small = r < 1e-4
        if np.any(~small):
            rr = r[~small]
            ratio = -2.0 * self.u0_prime(rr) / self.u0(rr)  # Phi''/Phi'
            out[~small] = 0.25 * ratio ** 2 + ratio / (2.0 * rr)
        if np.any(small):
            p0 = float(self.p(0.0))
            c2 = p0 ** 2 + (self._p2_at_0 + p0 ** 2) / 3.0
            out[small] = p0 + c2 * r[small] ** 2
        return out[0] if scalar else out

    def metric_curvature(self, r):
        """Gaussian curvature of the radial metric Phi'(|z|)^2 |dz|^2."""
        return -2.0 * (self.A(r) + np.asarray(self.p(r), float)) \
            / self.PhiP(r) ** 2

    def phi_inverse(self, s):
        """r with Phi(r) = s (vectorized; Newton-polished interpolation)."""
        s = np.asarray(s, dtype=float)
        phis = self.Phi(self.xs)
        r = np.interp(s, phis, self.xs)
        for _ in range(2):
            r = np.clip(r - (self.Phi(r) - s) * self.u0(r) ** 2, 0.0,
                        self.xs[-1])
        return r

    @property
    def boundary_lambda(self) -> float:
        lam = getattr(self.p, "boundary_lambda", None)
        if lam is None:
            lam = richardson_lambda(self.p)
        return float(lam)

    @property
    def mu(self) -> float:
        """Boundary growth exponent 1 + sqrt(1 - lambda)."""
        lam = min(max(self.boundary_lambda, 0.0), 1.0)
        return 1.0 + np.sqrt(1.0 - lam)

    @property
    def holder_exponent(self) -> float:
        lam = min(max(self.boundary_lambda, 0.0), 1.0)
        return float(np.sqrt(1.0 - lam))


def extremal_profile(p, eps: float = 1e-6, n_samples: int = 1025,
                     rtol: float = 1e-12, atol: float = 1e-14
                     ) -> ExtremalProfile:
    """Integrate the profile ODEs of a weight out to x = 1 - eps."""

    def rhs(x, y):
        pv = float(p(x))
        u, up, _, U, Up, _ = y
        return [up, -pv * u, 1.0 / (u * u), Up, pv * U, 1.0 / (U * U)]

    def u_hits_zero(x, y):
        return y[0]
    u_hits_zero.terminal = True
    u_hits_zero.direction = -1

    x_end = 1.0 - eps
    sol = solve_ivp(rhs, (0.0, x_end), [1.0, 0.0, 0.0, 1.0, 0.0, 0.0],
                    method="DOP853", rtol=rtol, atol=atol,
                    dense_output=True, events=u_hits_zero)
    if sol.status == 1:
        raise NumericalError(
            f"u0 vanished at x = {sol.t_events[0][0]:.6g} < {x_end:.6g}: "
            "the weight is too strong for a profile on [0, 1-eps)")
    if not sol.success:
        raise NumericalError(f"profile integration failed: {sol.message}")

    # p''(0), for the small-r series of A.
    h = 1e-3
    p2 = (-float(p(2 * h)) + 16 * float(p(h)) - 30 * float(p(0.0))
          + 16 * float(p(-h)) - float(p(-2 * h))) / (12 * h * h)
    xs = np.linspace(0.0, x_end, n_samples)
    return ExtremalProfile(p=p, eps=eps, xs=xs, _sol=sol, _p2_at_0=p2)


def metric_quantities(profile: ExtremalProfile, r) -> dict:
    """Point data of the weight metric at radius r (vectorized)."""
    return {
        "r": r,
        "Phi": profile.Phi(r),
        "PhiP": profile.PhiP(r),
        "A": profile.A(r),
        "p": np.asarray(profile.p(r), dtype=float),
        "curvature": profile.metric_curvature(r),
    }


def completeness_probe(p, radii: tuple[float, ...] = (1e-4, 1e-6, 1e-8),
                       threshold: float = 5.0) -> dict:
    """Phi(1 - delta) for a few delta, plus a divergence verdict.

    Extremal weights have Phi(1) = +inf; the built-in extremal kinds all
    exceed `threshold` already at delta = 1e-6, while any non-extremal
    rescaling saturates far below it.
    """
    eps = min(radii)
    prof = extremal_profile(p, eps=eps, n_samples=17)
    values = {d: float(prof.Phi(1.0 - d)) for d in sorted(radii, reverse=True)}
    diverging = values[1e-6 if 1e-6 in values else eps] > threshold
    return {"phi_values": values, "diverging": diverging,
            "threshold": threshold}


# ---------------------------------------------------------------------------
# Moebius compatibility of weights
# ---------------------------------------------------------------------------

def mobius_weight_check(p, mobius: DiskMobius, xs: np.ndarray | None = None
                        ) -> dict:
    """min over real x of  p(x) - |T'(x)|^2 p(|T(x)|)  for a disk Moebius T.

    Nonnegative for every admissible weight (the two sides collapse to
    m(|x|) vs m(|T(x)|) over the same (1-x^2)^2 denominator, with m the
    non-increasing kernel and |T(x)| >= |x|); identically zero exactly when
    the kernel is constant, i.e. for the inverse-square weight.
    """
    if xs is None:
        xs = np.tanh(np.linspace(-14.0, 14.0, 2001))
    base = np.asarray(p(np.abs(xs)), float)
    # 1 - |T(x)|^2 = (1-x^2)(1-rho^2)/(1+rho^2 x^2) exactly; direct
    # subtraction loses ~12 digits once |x| > 1 - 1e-6, so evaluate the
    # kernel difference instead of the weight difference when we can.
    rho2 = mobius.rho ** 2
    denom = 1.0 + rho2 * xs ** 2
    img_sq = (xs ** 2 + rho2) / denom
    one_minus_sq = _one_minus_sq(xs)
    one_minus_img = one_minus_sq * (1.0 - rho2) / denom
    if hasattr(p, "kernel"):
        img = np.sqrt(img_sq)
        t_img = 0.5 * np.log((1.0 + img) ** 2 / one_minus_img)
        slack = ((np.asarray(p.kernel(np.arctanh(np.abs(xs))), float)
                  - np.asarray(p.kernel(t_img), float)) / one_minus_sq ** 2)
    else:
        tj = mobius.jet(xs.astype(complex))
        slack = base - np.abs(tj.d1) ** 2 * np.asarray(p(np.sqrt(img_sq)), float)
    rel = slack / base
    i = int(np.argmin(rel))
    return {"min_slack": float(np.min(slack)),
            "min_rel_slack": float(rel[i]), "argmin_x": float(xs[i]),
            "max_abs_rel_slack": float(np.max(np.abs(rel)))}


# ---------------------------------------------------------------------------
# Boundary exponent and CSV export
# ---------------------------------------------------------------------------

def richardson_lambda(p, j_lo: int = 10, j_hi: int = 20, levels: int = 3
                      ) -> float:
    """Estimate lambda = lim (1-x^2)^2 p(x) by Richardson extrapolation
    along x_j = 1 - 2^{-j} (the kernel tail is ~ lambda + a 2^{-j} + ...).
    """
    js = np.arange(j_lo, j_hi + 1)
    x = 1.0 - 2.0 ** (-js.astype(float))
    m = _one_minus_sq(x) ** 2 * np.asarray(p(x), dtype=float)
    for level in range(1, levels + 1):
        if m.size < 2:
            break
        fac = 2.0 ** level
        m = (fac * m[1:] - m[:-1]) / (fac - 1.0)
    return float(np.clip(m[-1], 0.0, 1.0))


def write_profile_csv(profile: ExtremalProfile, path_or_buf) -> None:
    """Profile table: columns x,u0,Phi,PhiP,U,Psi,A,p at the sample grid."""
    xs = profile.xs
    cols = [xs, profile.u0(xs), profile.Phi(xs), profile.PhiP(xs),
            profile.U(xs), profile.Psi(xs), profile.A(xs),
            np.asarray(profile.p(xs), dtype=float)]
    buf = path_or_buf if isinstance(path_or_buf, io.IOBase) \
        else open(path_or_buf, "w", newline="")
    try:
        buf.write("x,u0,Phi,PhiP,U,Psi,A,p\n")
        for row in zip(*cols):
            buf.write(",".join(f"{v:.17g}" for v in row) + "\n")
    finally:
        if buf is not path_or_buf:
            buf.close()
