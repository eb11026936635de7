"""
Geometry - Lojasiewicz Exponent Fitting

Estimates sigma in rho(z) >= c * d(z, Gamma)^sigma from sampled pairs
(log d, log rho), and checks the geometric assumptions on the root locus:
branch decomposition, two-dimensional overlap and 1-regular separation.

Both the sigma fit and the separation fit use lower envelopes (minimum of
y per log-bin), since the inequalities involved are one-sided.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field
from scipy.optimize import linear_sum_assignment

from src import config
from src.errors import (
    BranchTrackingError,
    DomainTooLargeError,
    InsufficientSamplingError,
    MisuseError,
    NearPoleError,
    OverlapError,
    WeierdivError,
)
from src.poly.parampoly import ParamPoly, roots_in_tau, roots_in_x
from src.geometry.rootgeom import (
    UNASSIGNED,
    Domain,
    GammaCloud,
    dist_to_gamma,
    fiber,
    inv_p_derivative,
    is_hyperbolic,
    sample_gamma,
)

logger = logging.getLogger(__name__)

FIT_SLACK = 0.2
MU_TOL = 0.15
MIN_BINS = 6
CROSSING_MERGE = 0.02
AMBIGUITY_RATIO = 3.0
AREA_CELLS = 24
AREA_THRESHOLD = 0.5
OVERLAP_TOL = 1e-9
REAL_TOL = 1e-9


# Shared lower envelope


class BinStat(BaseModel):
    """Minimum of y over one bin of x."""

    x_lo: float
    x_hi: float
    x: float = Field(description="x of the sample realizing the minimum")
    y: float = Field(description="Minimum y in the bin")
    count: int
    used: bool = False


def lower_envelope(x: np.ndarray, y: np.ndarray, bins: int) -> List[BinStat]:
    """Non-empty bins of x (equal width over the data range), sorted by x."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size == 0:
        return []
    lo, hi = float(x.min()), float(x.max())
    if hi <= lo:
        hi = lo + 1e-12
    edges = np.linspace(lo, hi, bins + 1)
    which = np.clip(np.searchsorted(edges, x, side="right") - 1, 0, bins - 1)
    stats = []
    for b in range(bins):
        members = np.flatnonzero(which == b)
        if members.size == 0:
            continue
        best = members[np.argmin(y[members])]
        stats.append(
            BinStat(
                x_lo=float(edges[b]),
                x_hi=float(edges[b + 1]),
                x=float(x[best]),
                y=float(y[best]),
                count=int(members.size),
            )
        )
    return stats


def _line_fit(x: np.ndarray, y: np.ndarray) -> Tuple[float, float, float, float]:
    """Least-squares line: (slope, intercept, residual rms, slope stderr)."""
    coeffs, cov = np.polyfit(x, y, 1, cov=True)
    residual = y - np.polyval(coeffs, x)
    rms = float(np.sqrt(np.mean(residual ** 2)))
    return float(coeffs[0]), float(coeffs[1]), rms, float(math.sqrt(max(cov[0, 0], 0.0)))


# 1/P growth


class InverseGrowthFit(BaseModel):
    """Regression of log(sup_t |D_t^l (1/P)| / l!) along a ray in z."""

    angle: float = Field(description="Argument of the probe ray")
    z_moduli: List[float]
    distances: List[float] = Field(description="d(z, Gamma) at each probe point")
    l_max: int
    slope: float = Field(description="Coefficient of l * log(1/d): compare with sigma")
    nu_hat: float = Field(description="Coefficient of log(1/d)")
    coefficients: List[float] = Field(description="[slope, nu_hat, c_l, c_0]")
    residual_rms: float
    n_points: int


def _probe_angle(cloud: GammaCloud, radius: float, n: int = 32) -> float:
    angles = 2 * math.pi * (np.arange(n) + 0.5) / n
    distances = [dist_to_gamma(cloud, radius * complex(math.cos(a), math.sin(a))) for a in angles]
    return float(angles[int(np.argmax(distances))])


def _t_grid(P: ParamPoly, z: complex, eta: float, n: int = 40) -> List[Tuple[float, ...]]:
    half = eta * np.geomspace(1e-6, 1.0, n)
    line = np.concatenate([-half[::-1], [0.0], half])
    if P.m == 1:
        poles = roots_in_tau(P, z).real
        poles = poles[np.abs(poles) <= eta]
        return [(float(s),) for s in np.unique(np.concatenate([line, poles]))]
    coarse = line[:: max(1, line.size // 21)]
    return [(float(a), float(b)) for a in coarse for b in coarse]


def inverse_growth_fit(
    P: ParamPoly,
    dom: Domain,
    cloud: GammaCloud,
    angle: Optional[float] = None,
    l_max: int = 6,
    n_points: int = 8,
) -> InverseGrowthFit:
    """Fit sup_t |D_t^l (1/P)(z,t)| ~ l! C^(l+1) d(z,Gamma)^-(slope*l + nu)."""
    if P.m == 2:
        l_max = min(l_max, 4)
    delta = dom.delta
    angle = _probe_angle(cloud, 0.5 * delta) if angle is None else float(angle)
    direction = complex(math.cos(angle), math.sin(angle))
    moduli = np.geomspace(1e-3 * delta, 0.5 * delta, n_points)

    rows, values, distances = [], [], []
    for r in moduli:
        z = complex(r * direction)
        dist = dist_to_gamma(cloud, z)
        distances.append(dist)
        grid = _t_grid(P, z, dom.eta)
        for l in range(l_max + 1):
            best = 0.0
            for t in grid:
                try:
                    best = max(best, abs(inv_p_derivative(P, z, t, l)))
                except NearPoleError:
                    continue
            if best <= 0.0 or dist <= 0.0:
                continue
            inv_log = math.log(1.0 / dist)
            rows.append([l * inv_log, inv_log, l, 1.0])
            values.append(math.log(best) - math.lgamma(l + 1))

    if len(values) < 4:
        raise InsufficientSamplingError("too few finite 1/P derivative samples for the growth fit")
    design, target = np.array(rows), np.array(values)
    coeffs, *_ = np.linalg.lstsq(design, target, rcond=None)
    residual = target - design @ coeffs
    logger.debug("inverse growth fit along angle %.4f: slope=%.4f nu=%.4f", angle, coeffs[0], coeffs[1])
    return InverseGrowthFit(
        angle=angle,
        z_moduli=[float(r) for r in moduli],
        distances=[float(v) for v in distances],
        l_max=l_max,
        slope=float(coeffs[0]),
        nu_hat=float(coeffs[1]),
        coefficients=[float(c) for c in coeffs],
        residual_rms=float(np.sqrt(np.mean(residual ** 2))),
        n_points=len(values),
    )


# Sigma


class SigmaEstimate(BaseModel):
    """Fitted exponent of the lower envelope of log rho against log d."""

    sigma_hat: float
    intercept_log_c: float
    ci: Tuple[float, float] = Field(description="sigma_hat -/+ two standard errors")
    nu_hat: Optional[float] = Field(default=None, description="From the 1/P growth fit, when run")
    n_samples: int = Field(description="Samples off Gamma that entered the binning")
    bin_stats: List[BinStat]
    residual_rms: float
    valid: bool = Field(description="sigma_hat within [1 - slack, d + slack]")
    crude_bound: float = Field(description="General bound sigma <= d")
    hyperbolic: bool
    fit_slack: float = FIT_SLACK
    n_radii: int
    n_angles: int
    n_offsets: int
    bins: int
    window: int
    r_min: float
    r_max: float
    inverse_growth: Optional[InverseGrowthFit] = None
    samples: List[Tuple[float, float, float, float]] = Field(
        default_factory=list, exclude=True, description="re, im, log d, log rho"
    )


def _crossing_angles(args: np.ndarray) -> List[float]:
    if args.size == 0:
        return []
    ordered = np.sort(np.mod(args, 2 * math.pi))
    groups = [[ordered[0]]]
    for a in ordered[1:]:
        if a - groups[-1][-1] <= CROSSING_MERGE:
            groups[-1].append(a)
        else:
            groups.append([a])
    if len(groups) > 1 and ordered[0] + 2 * math.pi - ordered[-1] <= CROSSING_MERGE:
        groups[0] = groups.pop() + groups[0]
    return [float(g[len(g) // 2]) for g in groups]


def sigma_sample_points(
    cloud: GammaCloud,
    radii: np.ndarray,
    n_angles: int,
    offsets: np.ndarray,
) -> np.ndarray:
    """Uniform polar grid plus angular offsets around each crossing of Gamma."""
    uniform = np.exp(2j * np.pi * (np.arange(n_angles) + 0.5) / n_angles)
    gamma_abs = np.abs(cloud.z)
    gamma_arg = np.angle(cloud.z)
    points = []
    for r in radii:
        points.append(r * uniform)
        ring = (gamma_abs >= 0.5 * r) & (gamma_abs <= 2.0 * r)
        for theta in _crossing_angles(gamma_arg[ring]):
            points.append(r * np.exp(1j * (theta + offsets)))
            points.append(r * np.exp(1j * (theta - offsets)))
    return np.concatenate(points)


def estimate_sigma(
    P: ParamPoly,
    dom: Domain,
    cloud: Optional[GammaCloud] = None,
    n_radii: int = 24,
    n_angles: int = 96,
    bins: int = 32,
    window: int = 12,
    radius_range: Tuple[float, float] = (1e-6, 1.0),
    n_offsets: int = 40,
    with_inverse_growth: bool = True,
    threads: Optional[int] = None,
) -> SigmaEstimate:
    """Lower-envelope fit of log rho(z) against log d(z, Gamma) over D_delta."""
    if P.trivial:
        raise InsufficientSamplingError("P = x^d has Gamma = {0}; sigma is not sampled")
    threads = config.THREADS if threads is None else threads
    cloud = sample_gamma(P, dom, threads=threads) if cloud is None else cloud

    r_min, r_max = radius_range[0] * dom.delta, radius_range[1] * dom.delta
    radii = np.geomspace(r_min, r_max, n_radii)
    offsets = np.geomspace(1e-7, 0.3, n_offsets)
    points = sigma_sample_points(cloud, radii, n_angles, offsets)

    def measure(z):
        try:
            rho = fiber(P, dom, z).rho
        except DomainTooLargeError:
            return None
        return dist_to_gamma(cloud, z), rho

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            measured = list(pool.map(measure, points))
    else:
        measured = [measure(z) for z in points]

    log_floor = math.log(r_min)
    samples = []
    for z, pair in zip(points, measured):
        if pair is None:
            continue
        dist, rho = pair
        if dist <= 0.0 or rho <= 0.0:
            continue
        x, y = math.log(dist), math.log(rho)
        if x < log_floor:
            continue
        samples.append((float(z.real), float(z.imag), x, y))
    logger.info("sigma: %d usable samples of %d", len(samples), len(points))

    x = np.array([s[2] for s in samples])
    y = np.array([s[3] for s in samples])
    stats = lower_envelope(x, y, bins)
    if len(stats) < MIN_BINS:
        raise InsufficientSamplingError(f"only {len(stats)} non-empty bins, need {MIN_BINS}")
    chosen = stats[:window]
    for stat in chosen:
        stat.used = True
    slope, intercept, rms, stderr = _line_fit(
        np.array([s.x for s in chosen]), np.array([s.y for s in chosen])
    )

    valid = 1.0 - FIT_SLACK <= slope <= P.d + FIT_SLACK
    if not valid:
        logger.warning("sigma_hat=%.4f outside [1, d=%d] beyond slack; flagged invalid", slope, P.d)

    growth = None
    if with_inverse_growth:
        try:
            growth = inverse_growth_fit(P, dom, cloud)
        except WeierdivError as exc:
            logger.warning("1/P growth fit skipped: %s", exc)

    return SigmaEstimate(
        sigma_hat=slope,
        intercept_log_c=intercept,
        ci=(slope - 2 * stderr, slope + 2 * stderr),
        nu_hat=None if growth is None else growth.nu_hat,
        n_samples=len(samples),
        bin_stats=stats,
        residual_rms=rms,
        valid=valid,
        crude_bound=float(P.d),
        hyperbolic=is_hyperbolic(cloud),
        n_radii=n_radii,
        n_angles=n_angles,
        n_offsets=n_offsets,
        bins=bins,
        window=window,
        r_min=r_min,
        r_max=r_max,
        inverse_growth=growth,
        samples=samples,
    )


# Branches


class BranchSummary(BaseModel):
    branch_id: int
    is_real: bool
    endpoint_ok: bool = Field(description="Branch reaches 0 with a converging tangent direction")
    tangent_angle: Optional[float] = Field(default=None, description="Limit direction at 0")
    n_points: int


class BranchDecomposition:
    """Labeled cloud, per-branch summaries and ordered point sets."""

    def __init__(self, cloud: GammaCloud, branches: List[BranchSummary], points: Dict[int, np.ndarray]):
        self.cloud = cloud
        self.branches = branches
        self.points = points

    def __len__(self) -> int:
        return len(self.branches)


def _real_segment(delta: float, n: int = 200) -> np.ndarray:
    half = delta * np.geomspace(1e-6, 1.0, n)
    return np.concatenate([-half[::-1], [0.0], half]).astype(complex)


def _tangent(track: np.ndarray) -> Tuple[Optional[float], bool]:
    """Limit direction of an ordered track (outer to inner) and whether it settles."""
    moving = track[np.abs(track) > 0]
    if moving.size < 8:
        return None, False
    scale = np.max(np.abs(track))
    reaches_zero = np.min(np.abs(moving)) <= 1e-3 * scale
    tenth = max(2, moving.size // 10)
    inner = moving[-tenth:]
    outer = moving[-2 * tenth : -tenth]
    inner_dir = np.angle(np.mean(inner / np.abs(inner)))
    outer_dir = np.angle(np.mean(outer / np.abs(outer)))
    gap = abs(math.remainder(inner_dir - outer_dir, 2 * math.pi))
    return float(np.mod(inner_dir, 2 * math.pi)), bool(reaches_zero and gap < 0.05)


def _track_ray(P: ParamPoly, cloud: GammaCloud, ray: int) -> List[List[int]]:
    """Continuation of the d roots along one parameter ray, outer radius first."""
    radial = cloud.radial_values
    sign = 1.0 if ray == 0 else -1.0
    by_index: Dict[int, np.ndarray] = {}
    for k in range(len(radial)):
        by_index[k] = np.flatnonzero((cloud.ray == ray) & (cloud.radial_index == k))

    last = len(radial) - 1
    tracks = [[int(i)] for i in by_index[last]]
    for k in range(last - 1, -1, -1):
        t_old, t_new = sign * cloud.domain.eta * radial[k + 1], sign * cloud.domain.eta * radial[k]
        current = cloud.z[[tr[-1] for tr in tracks]]
        slope_x = np.array([P.dx(mu, (t_old,)) for mu in current], dtype=complex)
        slope_t = np.array([P.dt(mu, (t_old,))[0] for mu in current], dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            velocity = np.where(np.abs(slope_x) > 0, -slope_t / slope_x, 0.0)
        velocity = np.where(np.isfinite(velocity), velocity, 0.0)
        predicted = current + velocity * (t_new - t_old)

        candidates = by_index[k]
        new = cloud.z[candidates]
        cost = np.abs(predicted[:, None] - new[None, :])
        rows, cols = linear_sum_assignment(cost)

        # roots inside one cluster are interchangeable
        threshold = config.CLUSTER_RADIUS * max(float(np.max(np.abs(new))), 1e-300)
        close = np.abs(new[:, None] - new[None, :]) <= threshold
        for i, j in zip(rows, cols):
            others = cost[i, ~close[j]]
            if others.size and others.min() < AMBIGUITY_RATIO * cost[i, j]:
                raise BranchTrackingError(
                    f"ambiguous root pairing at |t|={abs(t_new):.3e}", radius=abs(t_new)
                )
            tracks[i].append(int(candidates[j]))
    return tracks


def _is_real(points: np.ndarray) -> bool:
    return bool(np.all(np.abs(points.imag) <= REAL_TOL * np.maximum(np.abs(points), 1e-300)))


def decompose_branches(cloud: GammaCloud) -> BranchDecomposition:
    """Label every cloud point with a branch id; real points form branch 0."""
    P, delta = cloud.P, cloud.domain.delta
    branch_id = np.full(len(cloud), UNASSIGNED, dtype=int)
    branch_id[cloud.ray == UNASSIGNED] = 0
    real_points = [_real_segment(delta)]

    if P.m == 2 or P.trivial:
        if not P.trivial and not is_hyperbolic(cloud):
            raise MisuseError("branch tracking for m = 2 is supported only when Gamma is real")
        branch_id[:] = 0
        real_points.append(cloud.z)
        zero = np.sort_complex(np.concatenate(real_points).real.astype(complex))
        summary = BranchSummary(branch_id=0, is_real=True, endpoint_ok=True, tangent_angle=0.0, n_points=len(cloud))
        return BranchDecomposition(cloud.with_branches(branch_id), [summary], {0: zero})

    tracks = _track_ray(P, cloud, 0) + _track_ray(P, cloud, 1)
    merged: List[List[List[int]]] = []
    for track in tracks:
        points = cloud.z[track]
        scale = max(float(np.max(np.abs(points))), 1e-300)
        for group in merged:
            other = cloud.z[group[0]]
            if np.max(np.abs(points - other)) <= 1e-6 * scale:
                group.append(track)
                break
        else:
            merged.append([track])

    complex_tracks = []
    for group in merged:
        indices = [i for track in group for i in track]
        points = cloud.z[group[0]]
        if _is_real(points):
            branch_id[indices] = 0
            real_points.append(points)
        else:
            angle, settled = _tangent(points)
            complex_tracks.append((angle if angle is not None else math.inf, indices, points, settled))

    summaries = [BranchSummary(branch_id=0, is_real=True, endpoint_ok=True, tangent_angle=0.0, n_points=0)]
    zero = np.concatenate(real_points)
    ordered_sets = {0: np.sort_complex(zero.real.astype(complex))}
    for new_id, (angle, indices, points, settled) in enumerate(sorted(complex_tracks, key=lambda c: c[0]), start=1):
        branch_id[indices] = new_id
        ordered_sets[new_id] = np.concatenate([points, [0j]])
        summaries.append(
            BranchSummary(
                branch_id=new_id,
                is_real=False,
                endpoint_ok=settled,
                tangent_angle=None if math.isinf(angle) else angle,
                n_points=len(indices),
            )
        )
    summaries[0] = summaries[0].model_copy(update={"n_points": int(np.sum(branch_id == 0))})
    logger.info("decomposed Gamma into %d branches", len(summaries))
    return BranchDecomposition(cloud.with_branches(branch_id), summaries, ordered_sets)


# Separation


def _polyline_distance(points: np.ndarray, polyline: np.ndarray) -> np.ndarray:
    """Distance from each point to the polyline through the ordered vertices."""
    if polyline.size == 1:
        return np.abs(points - polyline[0])
    a, b = polyline[:-1], polyline[1:]
    edge = b - a
    length2 = np.abs(edge) ** 2
    rel = points[:, None] - a[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(length2 > 0, (rel * np.conj(edge)[None, :]).real / length2, 0.0)
    s = np.clip(s, 0.0, 1.0)
    return np.min(np.abs(rel - s * edge[None, :]), axis=1)


def separation_exponent(branch_a: Sequence[complex], branch_b: Sequence[complex], bins: int = 16) -> float:
    """Lower-envelope slope of log d(x, A) against log |x| over x in B."""
    a = np.asarray(branch_a, dtype=complex)
    b = np.asarray(branch_b, dtype=complex)
    if a.size == 0 or b.size == 0:
        raise InsufficientSamplingError("empty branch")
    r_hi = 0.5 * min(float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    r_lo = 1e-4 * r_hi
    moduli = np.abs(b)
    window = b[(moduli >= r_lo) & (moduli <= r_hi)]
    if window.size < MIN_BINS:
        raise InsufficientSamplingError(f"only {window.size} points of B in [{r_lo:.2e}, {r_hi:.2e}]")

    dist = _polyline_distance(window, a)
    if np.any(dist <= OVERLAP_TOL * np.abs(window)):
        raise OverlapError(f"branches meet away from 0 (|x| >= {r_lo:.2e})")

    stats = lower_envelope(np.log(np.abs(window)), np.log(dist), bins)
    if len(stats) < 3:
        raise InsufficientSamplingError("too few occupied bins for the separation fit")
    slope, *_ = _line_fit(np.array([s.x for s in stats]), np.array([s.y for s in stats]))
    return slope


# Assumptions


FailureReason = Literal["overlap_2d", "tangential_contact", "branch_overlap", "untracked", "none"]


class AssumptionReport(BaseModel):
    """Outcome of the geometric assumption checks on Gamma near 0."""

    branches: List[BranchSummary]
    pairwise_mu: List[List[Optional[float]]] = Field(
        description="pairwise_mu[i][j]: separation exponent of branch j from branch i"
    )
    passes: bool
    failure_reason: FailureReason
    occupied_fraction: float = Field(description="Share of disc cells containing Gamma points")
    hyperbolic: bool
    mu_tol: float = MU_TOL
    area_threshold: float = AREA_THRESHOLD
    area_cells: int = AREA_CELLS
    unmeasured_pairs: List[Tuple[int, int]] = Field(
        default_factory=list, description="Branch pairs whose separation exponent could not be fitted"
    )
    detail: Optional[str] = None


def _area_points(P: ParamPoly, eta: float) -> np.ndarray:
    if P.m == 1:
        grid = [(t,) for t in np.linspace(-eta, eta, 2048)]
    else:
        axis = np.linspace(-eta, eta, 64)
        grid = [(a, b) for a in axis for b in axis]
    return np.concatenate([roots_in_x(P, t).roots for t in grid])


def occupied_fraction(points: np.ndarray, delta: float, cells: int = AREA_CELLS) -> float:
    """Fraction of grid cells centred in D_delta that contain a point."""
    edges = np.linspace(-delta, delta, cells + 1)
    centers = 0.5 * (edges[:-1] + edges[1:])
    in_disc = (centers[:, None] ** 2 + centers[None, :] ** 2) <= delta ** 2
    inside = points[np.abs(points) <= delta]
    ix = np.clip(np.searchsorted(edges, inside.real, side="right") - 1, 0, cells - 1)
    iy = np.clip(np.searchsorted(edges, inside.imag, side="right") - 1, 0, cells - 1)
    occupied = np.zeros((cells, cells), dtype=bool)
    occupied[ix, iy] = True
    return float(np.sum(occupied & in_disc) / max(np.sum(in_disc), 1))


def check_assumptions(
    P: ParamPoly,
    dom: Domain,
    cloud: Optional[GammaCloud] = None,
    threads: Optional[int] = None,
) -> AssumptionReport:
    """Classify Gamma: finite union of separated arcs meeting only at 0, or not."""
    cloud = sample_gamma(P, dom, threads=threads) if cloud is None else cloud
    hyperbolic = is_hyperbolic(cloud)
    fraction = 0.0 if P.trivial else occupied_fraction(
        np.concatenate([cloud.z, _area_points(P, dom.eta)]), dom.delta
    )

    def report(reason, branches=(), mu=(), detail=None, unmeasured=()):
        return AssumptionReport(
            branches=list(branches),
            pairwise_mu=[list(row) for row in mu],
            passes=reason == "none",
            failure_reason=reason,
            occupied_fraction=fraction,
            hyperbolic=hyperbolic,
            unmeasured_pairs=list(unmeasured),
            detail=detail,
        )

    if fraction > AREA_THRESHOLD:
        logger.info("Gamma occupies %.2f of D_delta: two-dimensional", fraction)
        return report("overlap_2d")

    try:
        decomposition = decompose_branches(cloud)
    except (BranchTrackingError, MisuseError) as exc:
        return report("untracked", detail=str(exc))

    ids = [b.branch_id for b in decomposition.branches]
    mu = [[None] * len(ids) for _ in ids]
    unmeasured = []
    for i in ids:
        for j in ids:
            if i == j:
                continue
            try:
                mu[i][j] = separation_exponent(decomposition.points[i], decomposition.points[j])
            except OverlapError as exc:
                return report("branch_overlap", decomposition.branches, mu, detail=f"branches {i},{j}: {exc}")
            except WeierdivError as exc:
                logger.warning("separation of branches %d,%d not fitted: %s", i, j, exc)
                unmeasured.append((i, j))

    worst = max((v for row in mu for v in row if v is not None), default=None)
    if worst is not None and worst > 1.0 + MU_TOL:
        return report(
            "tangential_contact",
            decomposition.branches,
            mu,
            detail=f"max separation exponent {worst:.3f}",
            unmeasured=unmeasured,
        )
    detail = f"{len(unmeasured)} branch pairs not fitted" if unmeasured else None
    return report("none", decomposition.branches, mu, detail=detail, unmeasured=unmeasured)
