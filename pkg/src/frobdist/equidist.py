"""Distribution of the normalized trace ratios against the recursive limit
density, plus Kronecker-sequence discrepancy.

The ratio a_n / (2g q^(n/2)) is produced on two independent routes: exact
big-integer power sums converted through 128-bit scaled arithmetic (no
q^(n/2) is ever materialized as a float), or cos(pi n theta_j) evaluated from
high-precision angles.  The limit density for genus g is the Lebesgue
measure of {psi in [0,1]^g : lo <= mean cos(pi psi_j) <= hi}; for g = 1 that
is the arcsine law in closed form, for g >= 2 a one-dimensional integral of
the lower-genus density with breakpoints wherever the inner arguments cross
the interval ends.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from math import isqrt

import mpmath as mp
import numpy as np
from scipy import integrate

from .errors import (
    GuardExceeded,
    PrecisionInsufficient,
    SizeExceeded,
    ToleranceUnachievable,
)
from .zeta import FrobeniusAngles, ZetaNumerator, extend_power_sums

EXACT_MODE = "exact-bigint"
ANGLE_MODE = "angle-float"
EXACT_GUARD = 10 ** 6
ANGLE_GUARD = 10 ** 8
KRONECKER_GUARD = 10 ** 6

_FRAC_BITS = 256  # scaled-integer angle resolution


@dataclass(frozen=True)
class Interval:
    """A closed query interval [lo, hi] inside [-1, 1]."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (-1.0 <= self.lo <= self.hi <= 1.0):
            raise ValueError(f"need -1 <= lo <= hi <= 1, got [{self.lo}, {self.hi}]")


@dataclass(frozen=True)
class RatioSequence:
    """Normalized traces alpha_n for n = 1..n, all within [-1, 1]."""

    q: int
    g: int
    n: int
    values: np.ndarray
    mode: str
    source: ZetaNumerator | None = None

    def __post_init__(self):
        assert len(self.values) == self.n


@dataclass(frozen=True)
class DensityValue:
    value: float
    method: str  # closed-form | quadrature | monte-carlo
    error_bound: float
    stderr: float | None = None


@dataclass(frozen=True)
class IntervalStat:
    lo: float
    hi: float
    count: int
    frequency: float
    density: float
    deviation: float


@dataclass(frozen=True)
class DistributionReport:
    n: int
    g: int
    rows: tuple[IntervalStat, ...]
    sup_deviation: float
    bin_edges: tuple[float, ...]
    histogram: tuple[int, ...]


@dataclass(frozen=True)
class DiscrepancyReport:
    n: int
    dimension: int
    star_discrepancy: float
    method: str  # exact-1d | exact-2d | lower-bound
    extreme_upper_bound: float  # extreme discrepancy <= 2^d * star


# ---------------------------------------------------------------------------
# ratio sequences
# ---------------------------------------------------------------------------

def ratio_sequence(
    z: ZetaNumerator,
    n_max: int,
    mode: str = EXACT_MODE,
    angles: FrobeniusAngles | None = None,
) -> RatioSequence:
    """alpha_n for n = 1..n_max on the requested route.

    Exact mode runs the integer recurrence and converts each s_n with
    128-bit scaled mantissas (relative error well under 1e-12).  Angle mode
    needs a FrobeniusAngles at >= 50 digits and evaluates the cosine form
    through scaled-integer phase reduction.
    """
    if mode in ("exact", EXACT_MODE):
        if n_max > EXACT_GUARD:
            raise GuardExceeded(f"exact mode capped at {EXACT_GUARD}")
        values = _exact_ratios(z, n_max)
        return RatioSequence(z.q, z.g, n_max, values, EXACT_MODE, z)
    if mode in ("angle", ANGLE_MODE):
        if n_max > ANGLE_GUARD:
            raise GuardExceeded(f"angle mode capped at {ANGLE_GUARD}")
        if angles is None:
            from .zeta import frobenius_angles

            angles = frobenius_angles(z, digits=50)
        if angles.precision_digits < 50:
            raise PrecisionInsufficient("angle mode needs >= 50 digit angles")
        values = _angle_ratios(angles, n_max)
        return RatioSequence(z.q, z.g, n_max, values, ANGLE_MODE, z)
    raise ValueError(f"unknown mode {mode!r}")


def _exact_ratios(z: ZetaNumerator, n_max: int) -> np.ndarray:
    s = extend_power_sums(z, n_max).s
    g = z.g
    out = np.empty(n_max)
    sqrt_q = isqrt(z.q << 254)  # sqrt(q) * 2^127, truncated
    mant, exp2 = 1 << 127, -127  # running q^(n/2) = mant * 2^exp2
    for i, sn in enumerate(s):
        mant *= sqrt_q
        exp2 -= 127
        shift = mant.bit_length() - 128
        mant >>= shift
        exp2 += shift
        if sn == 0:
            out[i] = 0.0
            continue
        an = -sn if sn < 0 else sn
        nbits = an.bit_length()
        sm = an >> (nbits - 128) if nbits >= 128 else an << (128 - nbits)
        ratio = (sm << 64) // mant
        val = math.ldexp(float(ratio), nbits - 192 - exp2) / (2 * g)
        if sn < 0:
            val = -val
        out[i] = val
    _check_and_clamp(out)
    return out


def _angle_ratios(angles: FrobeniusAngles, n_max: int) -> np.ndarray:
    scaled = _scaled_angles(angles)
    g = angles.g
    mask = (1 << (_FRAC_BITS + 1)) - 1  # phase modulo 2
    top = _FRAC_BITS - 52
    out = np.empty(n_max)
    cos = math.cos
    pi = math.pi
    for n in range(1, n_max + 1):
        acc = 0.0
        for th in scaled:
            u = float(((n * th) & mask) >> top) * 2.0 ** -52  # n theta mod 2
            acc += cos(pi * u)
        out[n - 1] = acc / g
    _check_and_clamp(out)
    return out


def _scaled_angles(angles: FrobeniusAngles) -> list[int]:
    with mp.workdps(angles.precision_digits + 20):
        two = mp.mpf(2) ** _FRAC_BITS
        return [int(mp.floor(t * two)) for t in angles.theta]


def _check_and_clamp(values: np.ndarray) -> None:
    worst = float(np.max(np.abs(values))) if len(values) else 0.0
    if worst > 1.0 + 1e-9:
        raise PrecisionInsufficient(f"ratio {worst} escapes [-1-1e-9, 1+1e-9]")
    np.clip(values, -1.0, 1.0, out=values)


def count_in_interval(seq: RatioSequence, query: Interval) -> int:
    """Number of n with lo <= alpha_n <= hi (closed on both ends)."""
    v = seq.values
    return int(np.count_nonzero((v >= query.lo) & (v <= query.hi)))


# ---------------------------------------------------------------------------
# limit density
# ---------------------------------------------------------------------------

def default_tolerance(genus: int) -> float:
    return 1e-9 if genus <= 2 else 1e-6


def limit_density(genus: int, query: Interval, tol: float | None = None) -> DensityValue:
    """Measure of {psi in [0,1]^g : lo <= mean_j cos(pi psi_j) <= hi}.

    Genus 1 is the closed-form arcsine law; higher genus integrates the
    lower-genus density over one angle, with mandatory subdivision where the
    shifted arguments cross +-1 (the integrand has kinks there).
    """
    if genus not in (1, 2, 3):
        raise ValueError("genus must be 1, 2 or 3")
    if tol is None:
        tol = default_tolerance(genus)
    if not 1e-12 <= tol <= 1e-3:
        raise ValueError("tol must lie in [1e-12, 1e-3]")
    value, err = _density(genus, query.lo, query.hi, tol)
    if err > tol:
        raise ToleranceUnachievable(f"quadrature error {err} above tol {tol}")
    method = "closed-form" if genus == 1 else "quadrature"
    return DensityValue(value=min(1.0, max(0.0, value)), method=method, error_bound=err)


def _density(g: int, lo: float, hi: float, tol: float) -> tuple[float, float]:
    if hi < lo or hi <= -1.0 or lo >= 1.0:
        # the law is absolutely continuous, so touching an endpoint is null
        return 0.0, 0.0
    if lo <= -1.0 and hi >= 1.0:
        return 1.0, 0.0
    if g == 1:
        b = max(-1.0, min(1.0, lo))
        c = max(-1.0, min(1.0, hi))
        return (math.asin(c) - math.asin(b)) / math.pi, 5e-16
    inner_tol = tol / 4.0
    scale = g - 1

    def integrand(alpha: float) -> float:
        shift = math.cos(math.pi * alpha)
        return _density(g - 1, (g * lo - shift) / scale, (g * hi - shift) / scale,
                        inner_tol)[0]

    points = _kink_points(g, lo, hi)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, quad_err = integrate.quad(
            integrand, 0.0, 1.0, points=points or None, limit=200,
            epsabs=tol / 4.0, epsrel=tol / 4.0,
        )
    return value, quad_err + inner_tol


def _kink_points(g: int, lo: float, hi: float) -> list[float]:
    """Interior alpha where (g*bound - cos(pi alpha))/(g-1) crosses +-1."""
    pts = set()
    for bound in (lo, hi):
        for target in (1.0, -1.0):
            c = g * bound - (g - 1) * target
            if -1.0 < c < 1.0:
                a = math.acos(c) / math.pi
                if 0.0 < a < 1.0:
                    pts.add(a)
    return sorted(pts)


def monte_carlo_density(
    genus: int, query: Interval, samples: int, seed: int = 0
) -> DensityValue:
    """Uniform sampling of [0,1]^g; deterministic for a fixed seed and
    independent of block partitioning."""
    if samples < 10 ** 3:
        raise ValueError("need at least 10^3 samples")
    rng = np.random.default_rng(seed)
    block = 1 << 16
    hits = 0
    remaining = samples
    while remaining > 0:
        b = min(block, remaining)
        psi = rng.random((b, genus))
        m = np.cos(np.pi * psi).mean(axis=1)
        hits += int(np.count_nonzero((m >= query.lo) & (m <= query.hi)))
        remaining -= b
    p_hat = hits / samples
    stderr = math.sqrt(p_hat * (1.0 - p_hat) / samples)
    return DensityValue(value=p_hat, method="monte-carlo",
                        error_bound=stderr, stderr=stderr)


# ---------------------------------------------------------------------------
# empirical reports
# ---------------------------------------------------------------------------

def default_grid(m: int = 21) -> list[Interval]:
    """m equispaced closed intervals covering [-1, 1]."""
    edges = np.linspace(-1.0, 1.0, m + 1)
    return [Interval(float(a), float(b)) for a, b in zip(edges, edges[1:])]


def distribution_report(
    seq: RatioSequence,
    grid: list[Interval],
    tol: float | None = None,
    bins: int = 64,
) -> DistributionReport:
    """Frequencies against the limit density over a grid of intervals, the
    sup deviation and a histogram of the ratio values."""
    if not grid:
        raise ValueError("grid must be nonempty")
    rows = []
    sup_dev = 0.0
    for query in grid:
        t = count_in_interval(seq, query)
        freq = t / seq.n
        dens = limit_density(seq.g, query, tol).value
        dev = abs(freq - dens)
        sup_dev = max(sup_dev, dev)
        rows.append(IntervalStat(query.lo, query.hi, t, freq, dens, dev))
    counts, edges = np.histogram(seq.values, bins=bins, range=(-1.0, 1.0))
    return DistributionReport(
        n=seq.n,
        g=seq.g,
        rows=tuple(rows),
        sup_deviation=sup_dev,
        bin_edges=tuple(float(e) for e in edges),
        histogram=tuple(int(c) for c in counts),
    )


# ---------------------------------------------------------------------------
# Kronecker points and star discrepancy
# ---------------------------------------------------------------------------

def kronecker_points(angles: FrobeniusAngles, n_max: int) -> np.ndarray:
    """Fractional parts ({n theta_1}, ..., {n theta_g}) for n = 1..n_max,
    computed from the full-precision angles."""
    if n_max > KRONECKER_GUARD:
        raise GuardExceeded(f"kronecker points capped at {KRONECKER_GUARD}")
    scaled = _scaled_angles(angles)
    mask = (1 << _FRAC_BITS) - 1
    top = _FRAC_BITS - 53
    out = np.empty((n_max, angles.g))
    for n in range(1, n_max + 1):
        for j, th in enumerate(scaled):
            out[n - 1, j] = float(((n * th) & mask) >> top) * 2.0 ** -53
    return out


def star_discrepancy(points) -> DiscrepancyReport:
    """Anchored discrepancy sup over boxes [0, u).

    Exact in one dimension via the sorted-point formula and in two via the
    critical-box grid; three dimensions report a sampled lower bound.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    n, d = pts.shape
    if n == 0:
        raise ValueError("need at least one point")
    if d == 1:
        star = _star_1d(pts[:, 0])
        method = "exact-1d"
    elif d == 2:
        if n > 10 ** 4:
            raise SizeExceeded("exact 2-d discrepancy capped at N = 10^4")
        star = _star_2d(pts)
        method = "exact-2d"
    elif d == 3:
        star = _star_3d_lower(pts)
        method = "lower-bound"
    else:
        raise SizeExceeded(f"dimension {d} not supported")
    return DiscrepancyReport(
        n=n,
        dimension=d,
        star_discrepancy=star,
        method=method,
        extreme_upper_bound=min(1.0, 2 ** d * star),
    )


def _star_1d(x: np.ndarray) -> float:
    xs = np.sort(x)
    n = len(xs)
    targets = (2.0 * np.arange(1, n + 1) - 1.0) / (2.0 * n)
    return 1.0 / (2.0 * n) + float(np.max(np.abs(xs - targets)))


def _star_2d(pts: np.ndarray) -> float:
    n = len(pts)
    order = np.argsort(pts[:, 0], kind="stable")
    xs = pts[order, 0]
    ys = pts[order, 1]
    a_grid = np.unique(np.concatenate([xs, [1.0]]))
    b_grid = np.unique(np.concatenate([ys, [1.0]]))
    best = 0.0
    arr_open = np.empty(0)  # y-values of points with x < a, kept sorted
    idx = 0
    for a in a_grid:
        while idx < n and xs[idx] < a:
            pos = int(np.searchsorted(arr_open, ys[idx]))
            arr_open = np.insert(arr_open, pos, ys[idx])
            idx += 1
        arr_closed = arr_open  # extended below with the x == a points
        jdx = idx
        while jdx < n and xs[jdx] == a:
            pos = int(np.searchsorted(arr_closed, ys[jdx]))
            arr_closed = np.insert(arr_closed, pos, ys[jdx])
            jdx += 1
        open_counts = np.searchsorted(arr_open, b_grid, side="left")
        closed_counts = np.searchsorted(arr_closed, b_grid, side="right")
        vols = a * b_grid
        best = max(
            best,
            float(np.max(vols - open_counts / n)),
            float(np.max(closed_counts / n - vols)),
        )
    return best


def _star_3d_lower(pts: np.ndarray, per_axis: int = 24) -> float:
    n = len(pts)
    grids = []
    for j in range(3):
        coords = np.unique(pts[:, j])
        if len(coords) > per_axis:
            sel = np.linspace(0, len(coords) - 1, per_axis).astype(int)
            coords = coords[sel]
        grids.append(np.concatenate([coords, [1.0]]))
    ax, bx, cx = grids
    open_m = [
        (pts[:, j][:, None] < g[None, :]).astype(np.float64)
        for j, g in enumerate(grids)
    ]
    closed_m = [
        (pts[:, j][:, None] <= g[None, :]).astype(np.float64)
        for j, g in enumerate(grids)
    ]
    open_counts = np.einsum("na,nb,nc->abc", *open_m)
    closed_counts = np.einsum("na,nb,nc->abc", *closed_m)
    vols = ax[:, None, None] * bx[None, :, None] * cx[None, None, :]
    return max(
        float(np.max(vols - open_counts / n)),
        float(np.max(closed_counts / n - vols)),
    )
