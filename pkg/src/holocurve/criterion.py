"""Injectivity criterion scans, covering bounds, and boundary diagnostics.

The central test: a holomorphic curve phi with |phi'(0)| matching its use is
injective on the disk when

    |S phi(z)| + (3/2) e^{-4 sigma} W^2  <=  2 p(|z|)

for an admissible weight p.  `scan` evaluates margin = bound - lhs over a
polar grid and classifies the verdict; `covering_bound` turns the profile of
the weight into the guaranteed intrinsic covering radius, which
`intrinsic_min_distance` can check against a Dijkstra shortest path in the
pulled-back metric; `radial_comparison_margin` evaluates the pointwise
metric-domination inequality; the boundary diagnostics quantify convexity of
the weight ratio w = sqrt(Phi'(|z|)/|phi'(z)|) along rays.
"""
from __future__ import annotations

import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.optimize import minimize
from scipy.sparse.csgraph import dijkstra

from .errors import NumericalError
from .jets import HoloCurve, eval_curve, scale_curve
from .nehari import ExtremalProfile
from .sampling import disk_samples
from .schwarzian import conformal_data, criterion_lhs

__all__ = [
    "GridSpec", "CriterionReport", "scan", "write_scan_csv",
    "normalize", "second_derivative_norm", "covering_bound",
    "intrinsic_min_distance", "radial_comparison_margin",
    "weight_ratio", "BoundaryDiagnostics", "boundary_diagnostics",
    "boundary_trace",
]


# ---------------------------------------------------------------------------
# Grid scans
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    """Polar evaluation grid: the origin plus n_r rings of n_theta angles."""

    n_r: int = 200
    n_theta: int = 64
    r_max: float = 0.999
    refine: int = 0

    def __post_init__(self):
        if self.n_r < 1 or self.n_theta < 4:
            raise ValueError("grid needs n_r >= 1 and n_theta >= 4")
        if not 0.0 < self.r_max < 1.0:
            raise ValueError("r_max must lie in (0, 1)")

    def points(self) -> np.ndarray:
        r = self.r_max * np.arange(1, self.n_r + 1) / self.n_r
        th = 2.0 * np.pi * np.arange(self.n_theta) / self.n_theta
        rings = (r[:, None] * np.exp(1j * th)[None, :]).ravel()
        return np.concatenate(([0.0 + 0.0j], rings))


@dataclass(frozen=True)
class CriterionReport:
    curve_label: str
    weight_label: str
    verdict: str                     # "holds" | "holds-with-equality" | "fails"
    min_margin: float
    argmin_z: complex
    tol_eq: float
    equality_count: int
    n_points: int
    re_z: np.ndarray
    im_z: np.ndarray
    abs_schwarzian: np.ndarray
    curv_term: np.ndarray
    bound: np.ndarray
    margin: np.ndarray


def _weight_label(weight) -> str:
    kind = getattr(weight, "kind", None)
    if kind is None:
        return getattr(weight, "__name__", "weight")
    return f"{kind}(factor={getattr(weight, 'factor', 1.0):g})"


_CHUNK = 8192


def _n_workers() -> int:
    try:
        return max(1, int(os.environ.get("HOLOCURVE_WORKERS", "1")))
    except ValueError:
        return 1


def _margin_parts(curve: HoloCurve, weight, z: np.ndarray):
    """Margin field over z, evaluated in fixed-size chunks.

    Chunk boundaries never depend on the worker count, so the concatenated
    result is byte-identical whether HOLOCURVE_WORKERS is 1 or 64.
    """
    def one(block: np.ndarray):
        data = conformal_data(eval_curve(curve, block))
        abs_s = np.abs(data.schwarzian)
        curv = 1.5 * data.wronskian_sq / data.q ** 2
        bound = 2.0 * np.asarray(weight(np.abs(block)), dtype=float)
        return abs_s, curv, bound, bound - (abs_s + curv)

    blocks = [z[i:i + _CHUNK] for i in range(0, len(z), _CHUNK)]
    workers = _n_workers()
    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(one, blocks))
    else:
        parts = [one(b) for b in blocks]
    return tuple(np.concatenate([p[k] for p in parts]) for k in range(4))


def scan(curve: HoloCurve, weight, grid: GridSpec | None = None,
         tol_eq: float | None = None) -> CriterionReport:
    """Evaluate the criterion margin over the grid and classify.

    verdict is "fails" iff the minimum margin drops below -tol_eq,
    "holds-with-equality" iff the minimum sits within tol_eq of zero, and
    "holds" otherwise.  tol_eq defaults to 1e-6 * max(1, 2 p(0)).
    """
    grid = grid or GridSpec()
    z = grid.points()
    abs_s, curv, bound, margin = _margin_parts(curve, weight, z)

    if tol_eq is None:
        tol_eq = 1e-6 * max(1.0, 2.0 * float(weight(0.0)))

    if grid.refine > 0:
        # Zoom the polar cell around the coarse argmin, once per level.
        i0 = int(np.argmin(margin))
        z0 = z[i0]
        dr = grid.r_max / grid.n_r
        dth = 2.0 * np.pi / grid.n_theta
        r0, th0 = abs(z0), np.angle(z0)
        for _ in range(grid.refine):
            rr = np.linspace(max(r0 - dr, 0.0), min(r0 + dr, grid.r_max), 9)
            tt = th0 + np.linspace(-dth, dth, 9)
            zz = (rr[:, None] * np.exp(1j * tt)[None, :]).ravel()
            a2, c2, b2, m2 = _margin_parts(curve, weight, zz)
            j = int(np.argmin(m2))
            if m2[j] < margin[i0]:
                z = np.concatenate([z, zz[j:j + 1]])
                abs_s = np.concatenate([abs_s, a2[j:j + 1]])
                curv = np.concatenate([curv, c2[j:j + 1]])
                bound = np.concatenate([bound, b2[j:j + 1]])
                margin = np.concatenate([margin, m2[j:j + 1]])
                i0 = len(margin) - 1
                r0, th0 = abs(zz[j]), np.angle(zz[j])
            dr /= 4.0
            dth /= 4.0

    i_min = int(np.argmin(margin))
    min_margin = float(margin[i_min])
    if min_margin < -tol_eq:
        verdict = "fails"
    elif min_margin <= tol_eq:
        verdict = "holds-with-equality"
    else:
        verdict = "holds"
    return CriterionReport(
        curve_label=curve.label, weight_label=_weight_label(weight),
        verdict=verdict, min_margin=min_margin, argmin_z=complex(z[i_min]),
        tol_eq=float(tol_eq),
        equality_count=int(np.sum(np.abs(margin) <= tol_eq)),
        n_points=len(z), re_z=np.real(z), im_z=np.imag(z),
        abs_schwarzian=abs_s, curv_term=curv, bound=bound, margin=margin)


def write_scan_csv(report: CriterionReport, path_or_buf) -> None:
    """Scan table: re_z,im_z,abs_schwarzian,curv_term,bound,margin."""
    cols = [report.re_z, report.im_z, report.abs_schwarzian,
            report.curv_term, report.bound, report.margin]
    buf = path_or_buf if isinstance(path_or_buf, io.IOBase) \
        else open(path_or_buf, "w", newline="")
    try:
        buf.write("re_z,im_z,abs_schwarzian,curv_term,bound,margin\n")
        for row in zip(*cols):
            buf.write(",".join(f"{v:.17g}" for v in row) + "\n")
    finally:
        if buf is not path_or_buf:
            buf.close()


# ---------------------------------------------------------------------------
# Normalization and the covering bound
# ---------------------------------------------------------------------------

def tangent_norm_at_zero(curve: HoloCurve) -> float:
    jet = eval_curve(curve, 0.0)
    return float(np.sqrt(np.sum(np.abs(jet.d1s()) ** 2)))


def second_derivative_norm(curve: HoloCurve) -> float:
    jet = eval_curve(curve, 0.0)
    return float(np.sqrt(np.sum(np.abs(jet.d2s()) ** 2)))


def normalize(curve: HoloCurve) -> HoloCurve:
    """Rescale by a positive constant so that |phi'(0)| = 1.

    The criterion, curvature and Schwarzian are invariant under this, but
    the covering bound below is stated for normalized curves only.
    """
    t = tangent_norm_at_zero(curve)
    if abs(t - 1.0) < 1e-12:
        return curve
    return scale_curve(curve, 1.0 / t)


def covering_bound(profile: ExtremalProfile, phi2_norm: float, r) -> np.ndarray:
    """Guaranteed covered intrinsic radius around phi(0):

        H(r) = 2 Psi(r) / (2 + |phi''(0)| Psi(r))

    for a normalized curve satisfying the criterion with a nondecreasing
    weight.  Raises if the profile's weight decreases somewhere on [0, 1).
    """
    rs = np.linspace(0.0, profile.xs[-1], 512)
    pv = np.asarray(profile.p(rs), dtype=float)
    if np.any(np.diff(pv) < -1e-12 * max(pv[0], 1.0)):
        raise ValueError("covering bound requires a nondecreasing weight")
    psi = profile.Psi(np.asarray(r, dtype=float))
    return 2.0 * psi / (2.0 + phi2_norm * psi)


# ---------------------------------------------------------------------------
# Intrinsic distance on a lattice mesh
# ---------------------------------------------------------------------------

# 16-neighbourhood: knight moves on top of the 8 axial/diagonal ones keep
# the lattice-metric anisotropy under ~3%.
_MOVES = [(1, 0), (0, 1), (1, 1), (1, -1),
          (2, 1), (2, -1), (1, 2), (1, -2)]


def intrinsic_min_distance(curve: HoloCurve, r: float,
                           resolution: int = 200) -> float:
    """min over |z| = r of the intrinsic distance d_phi(0, z).

    Dijkstra on a square lattice covering |z| <= r + 0.02, edge weights
    |dz| * e^{sigma(midpoint)}, with a final radial continuation from the
    lattice nodes just inside the circle.  Upper-bounds the true distance up
    to the lattice anisotropy (<~ 3%).
    """
    if not 0.0 < r < 0.99:
        raise ValueError("radius must lie in (0, 0.99)")
    R = min(r + 0.02, 0.999)
    h = 2.0 * R / resolution
    k = int(np.floor(R / h))
    ii, jj = np.meshgrid(np.arange(-k, k + 1), np.arange(-k, k + 1),
                         indexing="ij")
    zz = (ii * h) + 1j * (jj * h)
    inside = np.abs(zz) <= R
    ids = -np.ones(zz.shape, dtype=np.int64)
    ids[inside] = np.arange(int(np.sum(inside)))
    n_nodes = int(np.sum(inside))

    def sigma_factor(zpts: np.ndarray) -> np.ndarray:
        jet = eval_curve(curve, zpts)
        return np.sqrt(np.sum(np.abs(jet.d1s()) ** 2, axis=0))

    H, W = zz.shape
    rows, cols, ws = [], [], []
    for di, dj in _MOVES:
        s_sl = (slice(max(0, -di), H - max(0, di)),
                slice(max(0, -dj), W - max(0, dj)))
        d_sl = (slice(max(0, di), H - max(0, -di)),
                slice(max(0, dj), W - max(0, -dj)))
        both = inside[s_sl] & inside[d_sl]
        if not np.any(both):
            continue
        step = (di + 1j * dj) * h
        mid = zz[s_sl][both] + 0.5 * step
        rows.append(ids[s_sl][both])
        cols.append(ids[d_sl][both])
        ws.append(np.abs(step) * sigma_factor(mid))
    graph = sparse.coo_matrix(
        (np.concatenate(ws), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n_nodes, n_nodes)).tocsr()
    source = int(ids[k, k])  # lattice point (0, 0)
    dist = dijkstra(graph, directed=False, indices=source)

    node_z = zz[inside]
    node_r = np.abs(node_z)
    band = (node_r <= r) & (node_r >= r - 2.5 * h)
    if not np.any(band):
        raise NumericalError("no lattice nodes in the circle band; "
                             "increase the resolution")
    tail = sigma_factor(node_z[band]) * (r - node_r[band])
    return float(np.min(dist[band] + tail))


# ---------------------------------------------------------------------------
# Radial comparison margin
# ---------------------------------------------------------------------------

def radial_comparison_margin(curve: HoloCurve, profile: ExtremalProfile,
                             z) -> np.ndarray:
    """Pointwise slack of the metric-domination inequality

        (A + p) - |zeta^2 S phi + A - p| - (3/4) e^{2 sigma} |K|  >=  0,

    zeta = z/|z|; at z = 0 the direction-worst limit (A = p there) is used.
    Nonnegative wherever the criterion holds with a nondecreasing weight.
    """
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    data = conformal_data(eval_curve(curve, z))
    e2s_absk = 2.0 * data.wronskian_sq / data.q ** 2
    r = np.abs(z)
    a = profile.A(r)
    pv = np.asarray(profile.p(r), dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        zeta_sq = np.where(r > 0, z * z / np.where(r > 0, r * r, 1.0), 1.0)
    cross = np.where(r > 0,
                     np.abs(zeta_sq * data.schwarzian + (a - pv)),
                     np.abs(data.schwarzian))
    out = (a + pv) - cross - 0.75 * e2s_absk
    return out[0] if scalar else out


# ---------------------------------------------------------------------------
# Boundary / convexity diagnostics
# ---------------------------------------------------------------------------

def weight_ratio(curve: HoloCurve, profile: ExtremalProfile, z) -> np.ndarray:
    """w(z) = sqrt(Phi'(|z|) / |phi'(z)|); convex in the flat metric when
    the radial comparison holds."""
    z = np.asarray(z, dtype=complex)
    jet = eval_curve(curve, z)
    q = np.sum(np.abs(jet.d1s()) ** 2, axis=0)
    return np.sqrt(profile.PhiP(np.abs(z))) / q ** 0.25


@dataclass(frozen=True)
class BoundaryDiagnostics:
    critical_points: tuple            # ((z, |grad w|), ...) refined minima
    worst_radial_convexity: float     # min of omega'' over all rays
    convexity_argmin: tuple           # (theta, s) where the min occurs
    distortion: dict | None           # {'a','b','r0'} linear minorant or None
    boundary_lambda: float
    mu: float
    holder_exponent: float


def _critical_points(curve, profile, r_cap, coarse=(24, 48), h=1e-3):
    wfun = lambda x, y: float(weight_ratio(curve, profile, x + 1j * y))

    def grad_sq(xy):
        x, y = xy
        if np.hypot(x, y) > r_cap:
            return 1e6
        dx = (wfun(x + h, y) - wfun(x - h, y)) / (2 * h)
        dy = (wfun(x, y + h) - wfun(x, y - h)) / (2 * h)
        return dx * dx + dy * dy

    # Coarse sweep for small-gradient cells, then a few polished starts.
    rs = r_cap * (np.arange(1, coarse[0] + 1) - 0.5) / coarse[0]
    ths = 2.0 * np.pi * np.arange(coarse[1]) / coarse[1]
    grid = (rs[:, None] * np.exp(1j * ths)[None, :]).ravel()
    gnorm = np.sqrt([grad_sq([z.real, z.imag]) for z in grid])
    scale = float(np.median(gnorm)) + 1e-30
    cand = [0.0 + 0.0j]
    for i in np.argsort(gnorm):
        z0 = grid[i]
        if gnorm[i] >= 0.05 * scale or len(cand) >= 16:
            break
        if all(abs(z0 - zc) > 0.08 for zc in cand):
            cand.append(z0)

    found = []
    for z0 in cand:
        res = minimize(grad_sq, [z0.real, z0.imag], method="Nelder-Mead",
                       options={"xatol": 1e-9, "fatol": 1e-18,
                                "maxiter": 400})
        g = float(np.sqrt(max(res.fun, 0.0)))
        if g < 1e-5:
            zc = complex(res.x[0], res.x[1])
            if all(abs(zc - zf) > 1e-3 for zf, _ in found):
                found.append((zc, g))
    return tuple(found)


def boundary_diagnostics(curve: HoloCurve, profile: ExtremalProfile,
                         n_rays: int = 32, n_s: int = 100,
                         r_cap: float = 0.99,
                         annulus: tuple[float, float] = (0.5, 0.99),
                         ) -> BoundaryDiagnostics:
    """Convexity of omega_theta(s) = w(r e^{i theta}), s = Phi(r), along rays,
    plus refined critical points of w, a linear distortion minorant fit on an
    annulus, and the boundary exponent data of the weight."""
    r_cap = min(r_cap, profile.xs[-1])
    s_max = float(profile.Phi(r_cap))
    s = np.linspace(s_max / n_s, s_max, n_s)
    rs = profile.phi_inverse(s)
    worst = np.inf
    argmin = (0.0, 0.0)
    ds = s[1] - s[0]
    for i in range(n_rays):
        theta = 2.0 * np.pi * i / n_rays
        om = np.asarray(weight_ratio(curve, profile, rs * np.exp(1j * theta)),
                        dtype=float)
        om2 = (-om[4:] + 16 * om[3:-1] - 30 * om[2:-2] + 16 * om[1:-3]
               - om[:-4]) / (12 * ds * ds)
        j = int(np.argmin(om2))
        if om2[j] < worst:
            worst = float(om2[j])
            argmin = (theta, float(s[j + 2]))

    # Linear minorant w >= a s + b on the annulus (heuristic fit).
    zs = disk_samples(400, r_min=annulus[0], r_max=min(annulus[1], r_cap),
                      seed=0)
    w_ann = np.asarray(weight_ratio(curve, profile, zs), dtype=float)
    s_ann = profile.Phi(np.abs(zs))
    a = 0.95 * float(np.min(w_ann / np.maximum(s_ann, 1e-300)))
    b = float(np.min(w_ann - a * s_ann))
    distortion = {"a": a, "b": b, "r0": annulus[0]} if b >= 1e-8 else None

    return BoundaryDiagnostics(
        critical_points=_critical_points(curve, profile, r_cap),
        worst_radial_convexity=worst, convexity_argmin=argmin,
        distortion=distortion, boundary_lambda=profile.boundary_lambda,
        mu=profile.mu, holder_exponent=profile.holder_exponent)


def boundary_trace(curve: HoloCurve, ring_offset: float = 1e-3,
                   n_samples: int = 4096,
                   min_angle_sep: float = np.pi / 8) -> dict:
    """Near-collision search on the ring |z| = 1 - ring_offset.

    Finds the minimal image distance over sample pairs with angular
    separation at least min_angle_sep, and also reports the image gap of the
    two real-axis ring points (useful when a claimed boundary
    identification should be checked rather than assumed).
    """
    r = 1.0 - ring_offset
    th = 2.0 * np.pi * np.arange(n_samples) / n_samples
    z = r * np.exp(1j * th)
    jet = eval_curve(curve, z)
    vals = jet.vals()                       # (n, N) complex
    X = np.concatenate([np.real(vals), np.imag(vals)], axis=0).T  # (N, 2n)

    k_min = max(1, int(np.ceil(min_angle_sep * n_samples / (2 * np.pi))))
    best = np.inf
    best_pair = (0, 0)
    for k in range(k_min, n_samples // 2 + 1):
        d = np.linalg.norm(X - np.roll(X, -k, axis=0), axis=1)
        i = int(np.argmin(d))
        if d[i] < best:
            best = float(d[i])
            best_pair = (i, (i + k) % n_samples)
    i1, i2 = best_pair
    gap_real = float(np.linalg.norm(X[0] - X[n_samples // 2]))
    return {
        "min_gap": best, "z1": complex(z[i1]), "z2": complex(z[i2]),
        "theta1": float(th[i1]), "theta2": float(th[i2]),
        "real_axis_gap": gap_real, "ring_radius": r,
    }
