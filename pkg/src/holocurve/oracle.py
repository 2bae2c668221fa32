"""Cross-checking oracles.

`identity_suite` stress-tests the package against itself along independent
computational routes (closed Lagrange identity vs. Wronskian, direct real S1
vs. its curvature decomposition vs. the speed/curvature form, exact chain
rule vs. precomposition, finite-difference Moebius invariance in the target).
`injectivity_scan` hunts for actual image collisions of domain-separated
sample pairs.  Both are deterministic for a fixed seed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .ahlfors import (MobiusRn, PlaneCurve, compose_real,
                      make_speed_curvature, s1_from_speed_curvature, s1_direct,
                      s1_mobius_invariance_check, s1_of_composed_curve,
                      s1_via_curvature)
from .jets import (DiskMobius, HoloCurve, eval_curve, identity_curve,
                   polynomial_curve, precompose_disk_mobius,
                   radial_pair_curve, strip_curve)
from .sampling import disk_samples
from .schwarzian import conformal_data, second_form_sq_lagrange

__all__ = [
    "IdentityRecord", "IdentityReport", "identity_suite",
    "InjectivityReport", "injectivity_scan", "default_suite_curves",
]


# ---------------------------------------------------------------------------
# Identity suite
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityRecord:
    name: str
    worst_dev: float
    tol: float
    passed: bool
    where: str


@dataclass(frozen=True)
class IdentityReport:
    records: tuple[IdentityRecord, ...]

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.records)


def default_suite_curves() -> list[HoloCurve]:
    """A spread of shapes: flat, curved, planar, and the extremal examples."""
    from .fixtures import example1_curve, example2_curve
    return [
        identity_curve(),
        polynomial_curve([[0, 1, 0, -0.2], [0.5, 0.1j, 0.3]],
                         label="poly-pair"),
        radial_pair_curve(0.7),
        strip_curve(),
        example1_curve(),
        example2_curve(),
    ]


def _paths() -> list[PlaneCurve]:
    return [PlaneCurve.diameter(0.0), PlaneCurve.diameter(np.pi / 3),
            PlaneCurve.circle(0.45)]


def identity_suite(curves: list[HoloCurve] | None = None, seed: int = 0,
                   n_points: int = 40) -> IdentityReport:
    """Run all consistency identities; see the record names in the result.

    The final record deliberately exercises the *incorrect* signed-curvature
    reading of the S1 decomposition: it passes when that reading differs
    from the direct formula by exactly (3/2) e^{2 sigma} |K|, i.e. when the
    discrepancy of the signed variant is present and fully explained.
    """
    if curves is None:
        curves = default_suite_curves()
    records = []

    # (1) |II|^2: Lagrange-difference route vs. pairwise Wronskian route.
    worst, where = 0.0, ""
    for curve in curves:
        z = disk_samples(n_points, r_max=0.8, seed=seed)
        jet = eval_curve(curve, z)
        a = second_form_sq_lagrange(jet)
        b = conformal_data(jet).second_form_sq
        dev = np.max(np.abs(a - b) / (1.0 + np.abs(b)))
        if dev > worst:
            worst, where = float(dev), curve.label
    records.append(IdentityRecord("second_form_lagrange_vs_wronskian",
                                  worst, 1e-8, worst <= 1e-8, where))

    # (2) S1: direct real formula vs. curvature decomposition.
    worst, where = 0.0, ""
    ts = np.linspace(-0.7, 0.7, 7)
    for curve in curves:
        for path in _paths():
            t_lo, t_hi = path.t_range()
            for t in np.interp(ts, [-0.7, 0.7], [t_lo, t_hi]):
                a = s1_of_composed_curve(curve, path, float(t))
                b = s1_via_curvature(curve, path, float(t))
                dev = abs(a - b) / (1.0 + abs(a))
                if dev > worst:
                    worst = dev
                    where = f"{curve.label} / {path.kind} t={t:.3f}"
    records.append(IdentityRecord("s1_direct_vs_curvature_decomposition",
                                  worst, 1e-8, worst <= 1e-8, where))

    # (3) S1: direct vs. speed/curvature (finite-difference log-speed) form.
    worst, where = 0.0, ""
    for curve in curves:
        for path in _paths()[:2]:
            speed, kappa = make_speed_curvature(curve, path)
            for t in (-0.5, 0.0, 0.4):
                a = s1_of_composed_curve(curve, path, t)
                b = s1_from_speed_curvature(speed, kappa, t)
                dev = abs(a - b) / (1.0 + abs(a))
                if dev > worst:
                    worst, where = dev, f"{curve.label} / {path.kind} t={t}"
    records.append(IdentityRecord("s1_direct_vs_speed_curvature_form",
                                  worst, 1e-5, worst <= 1e-5, where))

    # (4) Schwarzian chain rule under disk automorphisms (exact jets).
    worst, where = 0.0, ""
    rng_mob = [DiskMobius(0.3, 0.7), DiskMobius(-0.55, 2.1)]
    for curve in curves:
        for mob in rng_mob:
            z = disk_samples(n_points // 2, r_max=0.85, seed=seed + 1)
            s_pre = conformal_data(eval_curve(
                precompose_disk_mobius(curve, mob), z)).schwarzian
            tj = mob.jet(z)
            s_chain = conformal_data(eval_curve(curve, tj.val)).schwarzian \
                * tj.d1 ** 2
            dev = np.max(np.abs(s_pre - s_chain) / (1.0 + np.abs(s_chain)))
            if dev > worst:
                worst, where = float(dev), f"{curve.label} / rho={mob.rho}"
    records.append(IdentityRecord("schwarzian_disk_mobius_chain_rule",
                                  worst, 1e-8, worst <= 1e-8, where))

    # (5) S1 invariance under Moebius maps of the target (FD route).
    worst, where = 0.0, ""
    t_values = (-0.5, -0.1, 0.35)
    for curve in curves:
        path = PlaneCurve.diameter(0.0)
        dim = 2 * curve.n
        # Place the inversion pole well outside the image of the tested arc.
        span = max(float(np.max(np.abs(compose_real(curve, path, t).x0)))
                   for t in t_values) + 1.0
        center = np.zeros(dim)
        center[0] = 2.5 * span
        rot = np.eye(dim)
        c, s = np.cos(0.8), np.sin(0.8)
        rot[0, 0] = rot[1, 1] = c
        rot[0, 1], rot[1, 0] = -s, s
        mob = MobiusRn(dim=dim)
        mob.translate(0.3 * (-1.0) ** np.arange(dim)).invert(center) \
           .scale(1.7).orthogonal(rot)
        dev = s1_mobius_invariance_check(curve, path, mob, t_values)
        if dev > worst:
            worst, where = float(dev), curve.label
    records.append(IdentityRecord("s1_target_mobius_invariance",
                                  worst, 1e-4, worst <= 1e-4, where))

    # (6) The signed-curvature reading: its gap from the direct formula must
    # equal (3/2) e^{2 sigma} |K| (documents the incorrect variant).
    worst, where = 0.0, ""
    for curve in curves:
        path = PlaneCurve.circle(0.45)
        for t in (0.3, 1.1, 2.0):
            direct = s1_of_composed_curve(curve, path, t)
            literal = s1_via_curvature(curve, path, t, signed_curvature=True)
            data = conformal_data(eval_curve(curve, path.jet(t).val))
            predicted_gap = 1.5 * float(data.q * np.abs(data.curvature))
            dev = abs((direct - literal) - predicted_gap) / (1.0 + predicted_gap)
            if dev > worst:
                worst, where = dev, f"{curve.label} t={t}"
    records.append(IdentityRecord("s1_signed_curvature_reading_gap",
                                  worst, 1e-8, worst <= 1e-8, where))

    return IdentityReport(tuple(records))


# ---------------------------------------------------------------------------
# Injectivity scan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InjectivityReport:
    curve_label: str
    n_samples: int
    min_sep: float
    collision_threshold: float
    collision_found: bool
    min_image_distance: float
    pair: tuple[complex, complex] | None
    pair_image_distance: float | None


def injectivity_scan(curve: HoloCurve, n_samples: int = 10000,
                     min_sep: float = 0.05, seed: int = 0,
                     r_min: float = 0.0, r_max: float = 1.0 - 1e-4,
                     symmetrize: bool = False,
                     collision_threshold: float = 1e-9) -> InjectivityReport:
    """Search for image collisions among domain-separated sample pairs.

    Only pairs with |z1 - z2| >= min_sep count (nearby domain points always
    have nearby images); a pair collides when its image distance drops below
    collision_threshold.  `symmetrize` replaces the second half of the
    sample with the antipodes of the first half -- the designed fixture for
    even curves like z^2, whose collisions are exactly antipodal and which a
    generic cloud would never hit.

    Also reports the minimal admissible image distance, found with a KD-tree
    under an escalating radius so the N^2 pair set is never materialized.
    """
    z = disk_samples(n_samples, r_min=r_min, r_max=r_max, seed=seed)
    if symmetrize:
        half = n_samples // 2
        z = np.concatenate([z[:half], -z[:half]])
    jet = eval_curve(curve, z)
    vals = jet.vals()
    X = np.concatenate([np.real(vals), np.imag(vals)], axis=0).T.copy()

    tree = cKDTree(X)

    def admissible_min(radius: float):
        pairs = tree.query_pairs(radius, output_type="ndarray")
        if pairs.size == 0:
            return None
        dz = np.abs(z[pairs[:, 0]] - z[pairs[:, 1]])
        ok = dz >= min_sep
        if not np.any(ok):
            return None
        d = np.linalg.norm(X[pairs[ok, 0]] - X[pairs[ok, 1]], axis=1)
        i = int(np.argmin(d))
        return float(d[i]), (complex(z[pairs[ok, 0][i]]),
                             complex(z[pairs[ok, 1][i]]))

    span = float(np.max(np.ptp(X, axis=0))) + 1e-300
    radius = collision_threshold
    best = None
    while best is None and radius < 2.0 * span:
        # Keep the candidate pair set bounded before materializing it.
        n_pairs = tree.count_neighbors(tree, radius) - len(X)
        if n_pairs > 6_000_000:
            best = _admissible_min_brute(z, X, min_sep)
            break
        best = admissible_min(radius)
        radius *= 8.0
    if best is None:
        best = _admissible_min_brute(z, X, min_sep)

    min_dist, pair = best
    collision = min_dist < collision_threshold
    return InjectivityReport(
        curve_label=curve.label, n_samples=len(z), min_sep=min_sep,
        collision_threshold=collision_threshold, collision_found=collision,
        min_image_distance=min_dist, pair=pair if collision else pair,
        pair_image_distance=min_dist)


def _admissible_min_brute(z, X, min_sep, chunk: int = 256):
    """Chunked O(N^2) fallback for pathological image distributions."""
    best = np.inf
    pair = (0, 0)
    n = len(z)
    for i0 in range(0, n, chunk):
        i1 = min(i0 + chunk, n)
        dz = np.abs(z[i0:i1, None] - z[None, :])
        dx = np.linalg.norm(X[i0:i1, None, :] - X[None, :, :], axis=2)
        dx[dz < min_sep] = np.inf
        j = np.unravel_index(np.argmin(dx), dx.shape)
        if dx[j] < best:
            best = float(dx[j])
            pair = (i0 + j[0], j[1])
    return best, (complex(z[pair[0]]), complex(z[pair[1]]))
