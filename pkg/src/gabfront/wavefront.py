"""Conic-sector decay analysis of Gabor coefficients.

A direction on the phase-space circle is flagged as singular when the lattice
STFT magnitudes fail to decay rapidly inside a conic sector around it.  Decay
is summarized per radial shell (sup or weighted l^p statistic), then
classified by a log-log fit of the shell statistics against the shell radii:

    slope <= 0.5                      -> non-decaying
    slope (plain or extrapolated) > N -> rapid (super-polynomial)
    otherwise                         -> polynomial of the fitted order

The extrapolated order comes from a quadratic fit in log-log coordinates
evaluated one octave past the outer shell; for exact power laws it reduces to
the plain least-squares slope, while Gaussian-type tails (which look
polynomial over a finite annulus) reveal their acceleration.

Before sector analysis the coefficient grid is re-anchored at the nearest
lattice point to the coefficient mass centroid.  Wave front sets are
invariant under time-frequency shifts, but a finite annulus is not: a shifted
singular line crosses off-axis cones inside the analysis window and would
otherwise flag spurious directions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadPartition,
    DegenerateFit,
    GridMismatch,
    InsufficientLattice,
    NotSymplectic,
)
from .frames import GaborCoefficients, LatticeSpec, default_lattice, gabor_coefficients
from .tfcore import Grid1D, PhaseGrid, StandardGaussian, stft_analytic, stft_numeric, Atom

__all__ = [
    "SupStat",
    "LpStat",
    "ConicSector",
    "DecayProfile",
    "DecayClass",
    "WaveFrontEstimate",
    "ConeAgreementReport",
    "sector_partition",
    "decay_profile",
    "classify_decay",
    "estimate_wavefront",
    "compare_discrete_continuous",
    "transport_estimate",
    "angular_distance",
]

SECTOR_OVERLAP = 0.5          # neighboring sectors share half their width
DEFAULT_NMAX = 8.0
DEFAULT_FLOOR = 1e-12
MIN_SHELL_POINTS = 3
CURVE_LOOKAHEAD = math.log(2.0)   # extrapolate the fitted order one octave out
_EPS_ANGLE = 1e-9


@dataclass(frozen=True)
class SupStat:
    """Shell statistic: supremum of |V| (Schwartz-decay wave front variant)."""


@dataclass(frozen=True)
class LpStat:
    """Shell statistic: weighted l^p aggregate (modulation-space variant)."""

    p: float = 2.0
    s: float = 0.0

    def __post_init__(self):
        if not self.p >= 1:
            raise ValueError(f"p must satisfy 1 <= p <= inf, got {self.p}")
        if self.s < 0:
            raise ValueError(f"weight exponent s must be >= 0, got {self.s}")


def angular_distance(a, b):
    """Distance on the circle, in [0, pi]."""
    d = np.mod(np.asarray(a) - np.asarray(b), 2.0 * math.pi)
    return np.minimum(d, 2.0 * math.pi - d)


@dataclass(frozen=True)
class ConicSector:
    """Angular sector of the plane intersected with an annulus."""

    theta: float
    halfwidth: float
    r_min: float
    r_max: float

    def __post_init__(self):
        if not (0 <= self.theta < 2.0 * math.pi):
            raise BadPartition(f"sector center must lie in [0, 2 pi), got {self.theta}")
        if not self.halfwidth > 0:
            raise BadPartition("sector halfwidth must be positive")
        if not (self.r_max > self.r_min >= 0):
            raise BadPartition("sector needs r_max > r_min >= 0")

    def contains(self, points):
        """Boolean mask for (n, 2) phase-space points (closed membership)."""
        pts = np.asarray(points, dtype=float)
        r = np.hypot(pts[..., 0], pts[..., 1])
        ang = np.arctan2(pts[..., 1], pts[..., 0])
        ok_angle = angular_distance(ang, self.theta) <= self.halfwidth + _EPS_ANGLE
        ok_radius = (r >= self.r_min - _EPS_ANGLE) & (r <= self.r_max + _EPS_ANGLE)
        return ok_angle & ok_radius & (r > 0)

    def contains_direction(self, theta):
        return bool(angular_distance(theta, self.theta) <= self.halfwidth + _EPS_ANGLE)


@dataclass(frozen=True)
class DecayProfile:
    """Radial decay summary inside one sector: shell midpoints and statistics."""

    sector: ConicSector
    radii: tuple
    stats: tuple

    def __post_init__(self):
        if len(self.radii) != len(self.stats):
            raise DegenerateFit("profile radii and statistics length mismatch")
        r = np.asarray(self.radii)
        if np.any(np.diff(r) <= 0):
            raise DegenerateFit("shell radii must be strictly increasing")
        if not np.all(np.isfinite(self.stats)):
            raise DegenerateFit("shell statistics must be finite")


_RANK = {"nondecaying": 2, "polynomial": 1, "rapid": 0}


@dataclass(frozen=True)
class DecayClass:
    """Classification of a sector: rapid, polynomial (with order), or non-decaying."""

    kind: str
    order: float = math.nan
    stderr: float = math.nan

    def __post_init__(self):
        if self.kind not in _RANK:
            raise ValueError(f"unknown decay class {self.kind!r}")

    @property
    def flagged(self):
        return self.kind != "rapid"

    def more_singular_than(self, other):
        return _RANK[self.kind] > _RANK[other.kind]


@dataclass(frozen=True)
class WaveFrontEstimate:
    """Per-sector classifications plus the flagged (singular) sector indices."""

    sectors: tuple
    classes: tuple
    flagged: tuple

    def __post_init__(self):
        if len(self.sectors) != len(self.classes):
            raise BadPartition("sector/class length mismatch")
        for i in self.flagged:
            if not 0 <= i < len(self.sectors):
                raise BadPartition(f"flagged index {i} out of range")

    @property
    def K(self):
        return len(self.sectors)

    def flagged_angles(self):
        return tuple(self.sectors[i].theta for i in self.flagged)

    def to_json_dict(self):
        return {
            "K": self.K,
            "sectors": [
                {
                    "theta": s.theta,
                    "class": c.kind,
                    "order": None if math.isnan(c.order) else c.order,
                    "stderr": None if math.isnan(c.stderr) else c.stderr,
                }
                for s, c in zip(self.sectors, self.classes)
            ],
            "flagged": list(self.flagged),
        }


def sector_partition(K: int, r_min: float, r_max: float, overlap: float = SECTOR_OVERLAP):
    """K uniformly spaced sectors with 50% overlap between neighbors.

    Centers sit at 2 pi j / K and the halfwidth is (pi / K) (1 + overlap), so
    every direction is covered by one or two sectors and antipodal sectors
    pair up for even K.
    """
    if K < 8 or K % 2 != 0:
        raise BadPartition(f"sector count must be even and >= 8, got {K}")
    if not (r_max > r_min >= 1):
        raise BadPartition(f"annulus must satisfy r_max > r_min >= 1, got [{r_min}, {r_max}]")
    hw = (math.pi / K) * (1.0 + overlap)
    return [
        ConicSector(2.0 * math.pi * j / K, hw, r_min, r_max) for j in range(K)
    ]


# ---------------------------------------------------------------------------
# decay profiles
# ---------------------------------------------------------------------------

def _shell_edges(r_min, r_max, shells):
    return r_min * (r_max / r_min) ** (np.arange(shells + 1) / shells)


def _shell_stat(mags, weights, statistic):
    if isinstance(statistic, SupStat):
        return float(mags.max())
    if isinstance(statistic, LpStat):
        w = weights**statistic.s
        if math.isinf(statistic.p):
            return float((mags * w).max())
        return float(np.sum((mags * w) ** statistic.p) ** (1.0 / statistic.p))
    raise ValueError(f"unknown statistic {statistic!r}")


def decay_profile(
    c: GaborCoefficients,
    sec: ConicSector,
    shells: int = 8,
    statistic=SupStat(),
    min_points: int = MIN_SHELL_POINTS,
    min_shells: int = 4,
    anchor=(0.0, 0.0),
) -> DecayProfile:
    """Radial shell statistics of |coefficients| inside a sector.

    Shells are geometric between the sector's radii; a shell holding fewer
    than min_points usable lattice points is dropped.  Raises
    InsufficientLattice when fewer than min_shells usable shells remain.
    Cones may be anchored away from the origin (a translated lattice is
    still a valid sampling set); the trust region always refers to the
    original positions.
    """
    if shells < 4:
        raise InsufficientLattice(0, "need at least 4 radial shells")
    pts = c.lattice.points() - np.asarray(anchor, dtype=float)
    vals = np.abs(c.values)
    usable = np.isfinite(vals)
    if c.trust_x is not None:
        usable &= np.abs(pts[:, 0]) <= c.trust_x + _EPS_ANGLE
    mask_sector = sec.contains(pts) & usable
    r = np.hypot(pts[:, 0], pts[:, 1])
    weights = np.sqrt(1.0 + r * r)
    edges = _shell_edges(sec.r_min, sec.r_max, shells)
    radii, stats = [], []
    first_bad = None
    for j in range(shells):
        in_shell = mask_sector & (r >= edges[j] - _EPS_ANGLE) & (r <= edges[j + 1] + _EPS_ANGLE)
        n = int(np.count_nonzero(in_shell))
        if n < min_points:
            if first_bad is None:
                first_bad = j
            continue
        radii.append(float(math.sqrt(edges[j] * edges[j + 1])))
        stats.append(_shell_stat(vals[in_shell], weights[in_shell], statistic))
    if len(radii) < min_shells:
        raise InsufficientLattice(
            first_bad if first_bad is not None else 0,
            f"only {len(radii)} usable shells in sector at {sec.theta:.3f} rad",
        )
    return DecayProfile(sec, tuple(radii), tuple(stats))


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def _linear_fit(x, y):
    """Least-squares slope, intercept and slope standard error."""
    n = len(x)
    xb, yb = x.mean(), y.mean()
    sxx = float(np.sum((x - xb) ** 2))
    slope = float(np.sum((x - xb) * (y - yb)) / sxx)
    intercept = yb - slope * xb
    if n > 2:
        resid = y - (intercept + slope * x)
        stderr = math.sqrt(float(np.sum(resid**2)) / (n - 2) / sxx)
    else:
        stderr = 0.0
    return slope, intercept, stderr


def classify_decay(profile: DecayProfile, n_max: float = DEFAULT_NMAX, floor: float = DEFAULT_FLOOR) -> DecayClass:
    """Classify a decay profile by fitted order in log-log coordinates.

    Shells at or below the floor are ignored; all below floor means rapid
    decay, a single shell above floor is a degenerate fit.  Ties at the class
    boundaries resolve toward the more singular class.
    """
    v = np.asarray(profile.stats, dtype=float)
    r = np.asarray(profile.radii, dtype=float)
    above = v > floor
    if not above.any():
        return DecayClass("rapid")
    if int(above.sum()) == 1:
        raise DegenerateFit("only one shell above the statistic floor")
    x = np.log(r[above])
    y = np.log(v[above])
    slope, _, stderr = _linear_fit(x, y)
    order = -slope
    if order <= 0.5:
        return DecayClass("nondecaying", order=order, stderr=stderr)
    order_ext = order
    if int(above.sum()) >= 4:
        c2, c1, _ = np.polyfit(x, y, 2)
        if c2 < 0:  # accelerating decay; extrapolate the local order outward
            order_ext = -(c1 + 2.0 * c2 * (x.max() + CURVE_LOOKAHEAD))
    if max(order, order_ext) > n_max:
        return DecayClass("rapid", order=order, stderr=stderr)
    return DecayClass("polynomial", order=order, stderr=stderr)


def _classify_summability(profile: DecayProfile, statistic: LpStat, floor: float = DEFAULT_FLOOR) -> DecayClass:
    """Convergence heuristic for the modulation-space variant.

    Finite p: the shell sums are declared summable when they fall by at
    least a factor 2^{0.1 p} per shell (geometric mean over the last four
    shells).  p = inf: the weighted sups must not grow, i.e. their fitted
    log-log slope over the last four shells stays below 0.25.
    """
    v = np.asarray(profile.stats, dtype=float)
    r = np.asarray(profile.radii, dtype=float)
    above = v > floor
    if not above.any():
        return DecayClass("rapid")
    v, r = v[above], r[above]
    if len(v) == 1:
        raise DegenerateFit("only one shell above the statistic floor")
    tail = slice(max(0, len(v) - 4), len(v))
    vt, rt = v[tail], r[tail]
    if math.isinf(statistic.p):
        slope, _, stderr = _linear_fit(np.log(rt), np.log(vt))
        if slope >= 0.25:
            return DecayClass("nondecaying", order=-slope, stderr=stderr)
        return DecayClass("rapid", order=-slope, stderr=stderr)
    ratios = vt[:-1] / vt[1:]
    mean_drop = float(np.exp(np.mean(np.log(np.maximum(ratios, 1e-300)))))
    if mean_drop >= 2.0 ** (0.1 * statistic.p):
        return DecayClass("rapid")
    return DecayClass("nondecaying")


# ---------------------------------------------------------------------------
# the estimator
# ---------------------------------------------------------------------------

def _mass_anchor(c: GaborCoefficients):
    """Exact |V|^2 mass centroid of the (trusted) coefficients.

    Flagging is invariant under time-frequency shifts of the input only if
    the cones track the data's phase-space center: a shifted singular line
    crosses off-axis cones of a finite annulus and would flag spurious
    directions.
    """
    L = c.lattice
    pts = L.points()
    mags2 = np.abs(c.values) ** 2
    usable = np.isfinite(mags2)
    if c.trust_x is not None:
        usable &= np.abs(pts[:, 0]) <= c.trust_x + _EPS_ANGLE
    mags2 = np.where(usable, mags2, 0.0)
    total = mags2.sum()
    if total <= 0:
        return (0.0, 0.0)
    return (
        float((mags2 * pts[:, 0]).sum() / total),
        float((mags2 * pts[:, 1]).sum() / total),
    )


def _flag_clusters(flagged, K):
    """Group flagged sector indices into circularly contiguous runs."""
    flagged_set = set(flagged)
    if len(flagged_set) == K:
        return [sorted(flagged_set)]
    runs, visited = [], set()
    for i in flagged:
        if i in visited:
            continue
        start = i
        while (start - 1) % K in flagged_set:
            start = (start - 1) % K
            if start == i:
                break
        run = [start]
        visited.add(start)
        j = (start + 1) % K
        while j in flagged_set and j not in visited:
            run.append(j)
            visited.add(j)
            j = (j + 1) % K
        runs.append(run)
    return runs


def _prune_to_detected_directions(coeffs, anchor, sectors, classes, r_min, r_max, floor):
    """Final flag assembly: keep non-rapid sectors within one sector width of
    their cluster's detected direction.

    Each contiguous run of non-rapid sectors detects one singular direction,
    estimated as the doubled-angle circular mean of the |V|^2 mass inside the
    run's angular span (doubling makes the mean insensitive to the antipodal
    split).  Sectors farther than the estimator's angular resolution (one
    sector width) from that direction are grazing artifacts of the finite
    annulus and are dropped.
    """
    flagged0 = [i for i, cl in enumerate(classes) if cl.flagged]
    if not flagged0:
        return ()
    K = len(sectors)
    spacing = 2.0 * math.pi / K
    halfwidth = sectors[0].halfwidth
    width = 2.0 * halfwidth

    pts = coeffs.lattice.points() - np.asarray(anchor, dtype=float)
    mags2 = np.abs(coeffs.values) ** 2
    usable = np.isfinite(mags2) & (mags2 > floor**2)
    if coeffs.trust_x is not None:
        usable &= np.abs(pts[:, 0]) <= coeffs.trust_x + _EPS_ANGLE
    r = np.hypot(pts[:, 0], pts[:, 1])
    usable &= (r >= r_min - _EPS_ANGLE) & (r <= r_max + _EPS_ANGLE)
    theta_pts = np.arctan2(pts[:, 1], pts[:, 0])

    keep = []
    for run in _flag_clusters(flagged0, K):
        mid = (sectors[run[0]].theta + 0.5 * (len(run) - 1) * spacing) % (2.0 * math.pi)
        halfarc = 0.5 * (len(run) - 1) * spacing + halfwidth
        sel = usable & (angular_distance(theta_pts, mid) <= halfarc + _EPS_ANGLE)
        if not sel.any():
            keep.extend(run)  # no mass to localize; keep the conservative flags
            continue
        z = np.sum(mags2[sel] * np.exp(2j * theta_pts[sel]))
        if abs(z) == 0:
            keep.extend(run)
            continue
        base = 0.5 * np.angle(z)
        cands = (base % (2.0 * math.pi), (base + math.pi) % (2.0 * math.pi))
        direction = min(cands, key=lambda t: angular_distance(t, mid))
        keep.extend(
            j for j in run
            if angular_distance(sectors[j].theta, direction) <= width + _EPS_ANGLE
        )
    return tuple(sorted(keep))


def estimate_wavefront(
    u,
    w=None,
    L: LatticeSpec = None,
    K: int = 72,
    shells: int = 8,
    statistic=SupStat(),
    r_min: float = 4.0,
    r_max: float = 20.0,
    n_max: float = DEFAULT_NMAX,
    floor: float = DEFAULT_FLOOR,
    recenter: bool = True,
    grid: Grid1D = None,
) -> WaveFrontEstimate:
    """Estimate singular phase-space directions of an atom or sampled signal.

    Runs decay_profile + classification on every sector of the partition;
    the flagged set collects sectors classified non-decaying or polynomial.
    Accepts precomputed GaborCoefficients as well.
    """
    w = w or StandardGaussian()
    L = L or default_lattice()
    if max(L.alpha * L.kx, L.beta * L.kxi) < r_max - _EPS_ANGLE:
        raise InsufficientLattice(0, f"lattice does not cover r_max = {r_max}")
    if isinstance(u, GaborCoefficients):
        coeffs = u
    else:
        coeffs = gabor_coefficients(u, w, L, grid=grid)
    anchor = _mass_anchor(coeffs) if recenter else (0.0, 0.0)
    sectors = sector_partition(K, r_min, r_max)
    min_shells = 4 if coeffs.trust_x is None else 3
    classes = []
    for sec in sectors:
        prof = decay_profile(
            coeffs, sec, shells=shells, statistic=statistic,
            min_shells=min_shells, anchor=anchor,
        )
        try:
            if isinstance(statistic, LpStat):
                cl = _classify_summability(prof, statistic, floor=floor)
            else:
                cl = classify_decay(prof, n_max=n_max, floor=floor)
        except DegenerateFit:
            # a single shell above floor: everything beyond it already fell
            # under the floor, which only a super-polynomial tail achieves
            cl = DecayClass("rapid")
        classes.append(cl)
    flagged = _prune_to_detected_directions(
        coeffs, anchor, sectors, classes, r_min, r_max, floor
    )
    return WaveFrontEstimate(tuple(sectors), tuple(classes), flagged)


# ---------------------------------------------------------------------------
# discrete vs continuous cones
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConeAgreementReport:
    """Per-sector classifications from lattice sums vs Riemann integrals."""

    thetas: tuple
    discrete_kinds: tuple
    continuous_kinds: tuple

    @property
    def agree(self):
        return all(
            (d != "rapid") == (c != "rapid")
            for d, c in zip(self.discrete_kinds, self.continuous_kinds)
        )

    def to_json_dict(self):
        return {
            "sectors": [
                {"theta": t, "discrete": d, "continuous": c, "agree": (d != "rapid") == (c != "rapid")}
                for t, d, c in zip(self.thetas, self.discrete_kinds, self.continuous_kinds)
            ],
            "agreement": self.agree,
        }


def compare_discrete_continuous(
    u,
    w=None,
    L: LatticeSpec = None,
    fine: PhaseGrid = None,
    p: float = 2.0,
    s: float = 0.0,
    K: int = 72,
    shells: int = 8,
    r_min: float = 4.0,
    r_max: float = 20.0,
    recenter: bool = True,
    grid: Grid1D = None,
) -> ConeAgreementReport:
    """Numerically test that lattice cone sums and cone integrals classify alike.

    The continuous side replaces the lattice sum with a Riemann sum over a
    fine phase grid (step at most alpha/4) against the same sectors, shells,
    and summability rule.
    """
    w = w or StandardGaussian()
    L = L or default_lattice()
    statistic = LpStat(p=p, s=s)
    if fine is None:
        extent = max(L.alpha * L.kx, L.beta * L.kxi)
        step = L.alpha / 4.0
        n = int(round(2 * extent / step)) + 1
        fine = PhaseGrid(Grid1D(-extent, step, n), Grid1D(-extent, step, n))
    if fine.xgrid.step > L.alpha / 4.0 + 1e-12:
        raise GridMismatch(
            f"fine grid step {fine.xgrid.step} exceeds alpha/4 = {L.alpha / 4.0}"
        )

    disc = estimate_wavefront(
        u, w, L, K=K, shells=shells, statistic=statistic,
        r_min=r_min, r_max=r_max, recenter=recenter, grid=grid,
    )

    # continuous path: |V| on the fine grid, Riemann-weighted cone statistics
    if isinstance(u, Atom) and isinstance(w, StandardGaussian):
        X, XI = np.meshgrid(fine.xgrid.points(), fine.xigrid.points(), indexing="ij")
        mags = np.abs(stft_analytic(u, X.ravel(), XI.ravel()))
        trust = None
    else:
        from .tfcore import SampledSignal, eval_atom, default_grid as _dg

        sig = u if isinstance(u, SampledSignal) else eval_atom(u, grid or _dg())
        mags = np.abs(stft_numeric(sig, w, fine)).ravel()
        X, XI = np.meshgrid(fine.xgrid.points(), fine.xigrid.points(), indexing="ij")
        trust = 0.5 * (sig.grid.stop - sig.grid.start) - 6.0
    pts = np.column_stack([X.ravel(), XI.ravel()])
    cell = fine.cell_area()
    usable = np.ones(len(pts), dtype=bool)
    if trust is not None:
        usable &= np.abs(pts[:, 0]) <= trust
    if recenter:
        w2 = (mags**2) * usable
        tot = w2.sum()
        if tot > 0:
            pts = pts - (w2[:, None] * pts).sum(axis=0) / tot

    r = np.hypot(pts[:, 0], pts[:, 1])
    wts = np.sqrt(1.0 + r * r)
    edges = _shell_edges(r_min, r_max, shells)
    sectors = sector_partition(K, r_min, r_max)
    cont_kinds = []
    for sec in sectors:
        in_sec = sec.contains(pts) & usable
        radii, stats = [], []
        for j in range(shells):
            sel = in_sec & (r >= edges[j]) & (r <= edges[j + 1])
            if not sel.any():
                continue
            radii.append(float(math.sqrt(edges[j] * edges[j + 1])))
            if math.isinf(p):
                stats.append(float((mags[sel] * wts[sel] ** s).max()))
            else:
                stats.append(
                    float((np.sum((mags[sel] * wts[sel] ** s) ** p * cell)) ** (1.0 / p))
                )
        prof = DecayProfile(sec, tuple(radii), tuple(stats))
        try:
            cont_kinds.append(_classify_summability(prof, statistic).kind)
        except DegenerateFit:
            cont_kinds.append("rapid")

    return ConeAgreementReport(
        tuple(sec.theta for sec in sectors),
        tuple(c.kind for c in disc.classes),
        tuple(cont_kinds),
    )


# ---------------------------------------------------------------------------
# symplectic transport
# ---------------------------------------------------------------------------

def transport_estimate(e: WaveFrontEstimate, S) -> WaveFrontEstimate:
    """Push a wave front estimate through a symplectic matrix.

    Each flagged sector's center direction maps to the direction of
    S (cos t, sin t); transported directions are re-binned into the same
    partition, with boundary hits flagging both adjacent sectors.
    """
    S = np.asarray(S, dtype=float)
    if S.shape != (2, 2):
        raise NotSymplectic(f"expected a 2x2 matrix, got shape {S.shape}")
    J = np.array([[0.0, 1.0], [-1.0, 0.0]])
    if abs(np.linalg.det(S) - 1.0) > 1e-9 or np.max(np.abs(S.T @ J @ S - J)) > 1e-9:
        raise NotSymplectic("matrix is not symplectic within 1e-9")
    classes = [DecayClass("rapid")] * len(e.sectors)
    for i in e.flagged:
        th = e.sectors[i].theta
        v = S @ np.array([math.cos(th), math.sin(th)])
        th_new = math.atan2(v[1], v[0]) % (2.0 * math.pi)
        src = e.classes[i]
        for j, sec in enumerate(e.sectors):
            if sec.contains_direction(th_new) and src.more_singular_than(classes[j]):
                classes[j] = src
    flagged = tuple(i for i, cl in enumerate(classes) if cl.flagged)
    return WaveFrontEstimate(e.sectors, tuple(classes), flagged)
