"""Structural classification of zeta numerators: Newton-polygon p-rank and
ordinarity, irreducibility over the integers (degree <= 4), integer-relation
search among Frobenius angles, and a census over small curve families.

A reported relation is a certificate; "none found up to (K, epsilon)" plus
the exact minimum residual is the strongest finite statement the search can
make, and is what the census records.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp
import numpy as np

from .curves import elliptic_curve, hyperelliptic_curve, validate
from .errors import (
    BadCharacteristic,
    DegreeOutOfRange,
    EvenCharacteristic,
    SingularCurve,
    SizeExceeded,
    ToleranceBelowPrecision,
)
from .ffield import is_prime
from .zeta import (
    FrobeniusAngles,
    ZetaNumerator,
    extend_power_sums,
    extension_numerator,
    frobenius_angles,
    numerator_from_curve,
)

ORDINARY = "ordinary"
SUPERSINGULAR = "supersingular"
INTERMEDIATE = "intermediate"

RELATION_BOUND_SMALL_GENUS = 1000
RELATION_BOUND_GENUS3 = 60


@dataclass(frozen=True)
class Classification:
    p_rank: int
    kind: str
    newton_slopes: tuple[Fraction, ...]


@dataclass(frozen=True)
class RelationReport:
    """Outcome of the exhaustive scan for sum k_j theta_j close to an integer."""

    found: tuple[int, ...] | None  # (k_0, k_1, ..., k_g) or None
    residual: float | None
    search_bound: int
    epsilon: float
    min_residual: float


def classify(z: ZetaNumerator, p: int) -> Classification:
    """Newton polygon of the coefficient p-valuations, slopes scaled to [0, 1].

    p_rank is the length of the slope-0 segment; ordinary means p_rank = g,
    supersingular means every slope equals 1/2.
    """
    vq = _valuation_of_power(z.q, p)
    pts = []
    for i, ei in enumerate(z.e):
        pts.append((i, None if ei == 0 else _padic_valuation(ei, p)))
    hull = _lower_hull(pts)
    slopes: list[Fraction] = []
    for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
        s = Fraction(y1 - y0, x1 - x0) / vq
        slopes.extend([s] * (x1 - x0))
    slopes.sort()
    p_rank = sum(1 for s in slopes if s == 0)
    # slopes come in (s, 1-s) symmetric pairs; p_rank counts the zero segment
    if p_rank == z.g:
        kind = ORDINARY
    elif all(s == Fraction(1, 2) for s in slopes):
        kind = SUPERSINGULAR
    else:
        kind = INTERMEDIATE
    return Classification(p_rank=p_rank, kind=kind, newton_slopes=tuple(slopes))


def _valuation_of_power(q: int, p: int) -> int:
    v = _padic_valuation(q, p)
    if p ** v != q:
        raise BadCharacteristic(f"{q} is not a power of {p}")
    return v


def _padic_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    if p < 2:
        raise BadCharacteristic(f"bad prime {p}")
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def _lower_hull(pts):
    """Lower convex hull of (i, v) points, infinite v (None) dropped."""
    finite = [(x, y) for x, y in pts if y is not None]
    hull = []
    for x, y in finite:
        while len(hull) >= 2:
            (x0, y0), (x1, y1) = hull[-2], hull[-1]
            # keep turn strictly convex from below
            if (y1 - y0) * (x - x0) >= (y - y0) * (x1 - x0):
                hull.pop()
            else:
                break
        hull.append((x, y))
    return hull


# ---------------------------------------------------------------------------
# irreducibility over Z, degree <= 4
# ---------------------------------------------------------------------------

def is_irreducible_over_integers(coeffs) -> bool:
    """Exact irreducibility of an integer polynomial of degree 1..4.

    Tests the primitive part: rational-root search over divisor pairs of the
    constant and leading coefficients, plus for degree 4 an exhaustive
    quadratic x quadratic factor search over divisor pairs of both end
    coefficients.
    """
    c = [int(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    deg = len(c) - 1
    if deg < 1 or deg > 4:
        raise DegreeOutOfRange(f"degree {deg} outside [1, 4]")
    content = 0
    for x in c:
        content = math.gcd(content, x)
    c = [x // content for x in c]
    if c[0] == 0:
        return deg == 1  # divisible by x
    if deg == 1:
        return True
    if _has_rational_root(c):
        return False
    if deg < 4:
        return True
    return not _has_quadratic_split(c)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
    return sorted(out)


def _has_rational_root(c) -> bool:
    deg = len(c) - 1
    for r in _divisors(c[0]):
        for s in _divisors(c[-1]):
            if math.gcd(r, s) != 1:
                continue
            for rr in (r, -r):
                # f(rr/s) * s^deg, exact integers
                val = sum(ci * rr ** i * s ** (deg - i) for i, ci in enumerate(c))
                if val == 0:
                    return True
    return False


def _has_quadratic_split(c) -> bool:
    """Search (a x^2 + b x + e)(d x^2 + f x + h) = quartic c, exact."""
    c0, c1, c2, c3, c4 = c
    cauchy = 2 * (1 + max(abs(ci) for ci in c[:-1]) / abs(c4))
    for a in _divisors(c4):
        d, rem = divmod(c4, a)
        assert rem == 0
        for e0 in _divisors(c0):
            for e in (e0, -e0):
                h, rem = divmod(c0, e)
                if rem:
                    continue
                # b f-system from the T^3 and T^1 coefficients:
                # d b + a f = c3 ; h b + e f = c1
                det = d * e - a * h
                if det != 0:
                    bnum = e * c3 - a * c1
                    fnum = d * c1 - h * c3
                    if bnum % det or fnum % det:
                        continue
                    b, f = bnum // det, fnum // det
                    if a * h + e * d + b * f == c2:
                        return True
                else:
                    bound = math.ceil(abs(a) * cauchy) + 1
                    for b in range(-bound, bound + 1):
                        if (c3 - d * b) % a:
                            continue
                        f = (c3 - d * b) // a
                        if h * b + e * f == c1 and a * h + e * d + b * f == c2:
                            return True
    return False


def irreducible_through_extensions(z: ZetaNumerator, m_max: int = 6) -> bool:
    """Necessary-style evidence for an absolutely simple Jacobian: the
    extension numerators stay irreducible over Z for m = 1..m_max.  This is
    a proxy, not a proof."""
    for m in range(1, m_max + 1):
        if not is_irreducible_over_integers(extension_numerator(z, m).poly_coeffs()):
            return False
    return True


# ---------------------------------------------------------------------------
# integer relations among angles
# ---------------------------------------------------------------------------

def find_integer_relation(
    angles: FrobeniusAngles, bound: int, epsilon: float
) -> RelationReport:
    """Exhaustive scan of nonzero integer vectors (k_1..k_g), |k_j| <= bound,
    up to overall sign, ordered by max-norm shell then lexicographically.

    Returns the first vector whose combination sits within epsilon of an
    integer, plus the exact minimum residual over the full searched grid
    (the shell containing a hit is always completed first).
    """
    g = angles.g
    limit = RELATION_BOUND_GENUS3 if g >= 3 else RELATION_BOUND_SMALL_GENUS
    if bound > limit:
        raise SizeExceeded(f"bound {bound} above the g={g} limit {limit}")
    if epsilon < 10.0 ** (-(angles.precision_digits - 10)):
        raise ToleranceBelowPrecision(
            f"epsilon {epsilon} below the angle precision floor"
        )
    theta_f = [float(t) for t in angles.theta]
    # float residuals are exact to ~bound * 2^-52; margin covers the gap
    margin = max(1e-12, bound * 1e-15)
    best_mp: mp.mpf | None = None
    hit: tuple[tuple[int, ...], mp.mpf] | None = None
    with mp.workdps(angles.precision_digits + 10):
        for shell in range(1, bound + 1):
            for vec in _shell_vectors(g, shell):
                x = 0.0
                for k, t in zip(vec, theta_f):
                    x += k * t
                res_f = abs(x - round(x))
                if best_mp is None or res_f <= float(best_mp) + margin:
                    res_mp, k0 = _mp_residual(vec, angles.theta)
                    if best_mp is None or res_mp < best_mp:
                        best_mp = res_mp
                    if hit is None and res_mp <= epsilon:
                        hit = ((k0, *vec), res_mp)
            if hit is not None:
                break
        found = hit[0] if hit else None
        residual = float(hit[1]) if hit else None
        return RelationReport(
            found=found,
            residual=residual,
            search_bound=bound,
            epsilon=epsilon,
            min_residual=float(best_mp) if best_mp is not None else math.inf,
        )


def _mp_residual(vec, theta):
    x = mp.mpf(0)
    for k, t in zip(vec, theta):
        x += k * t
    k0 = int(mp.nint(x))
    return abs(x - k0), k0


def _shell_vectors(g: int, m: int):
    """Canonical vectors (first nonzero positive) with max-norm exactly m,
    in lexicographic order.  Built from the cube faces directly, so a shell
    costs O(g (2m+1)^(g-1)) rather than a full cube filter."""
    if g == 1:
        return [(m,)]
    vecs = set()
    for pinned in range(g):
        for sign in (m, -m):
            for rest in itertools.product(range(-m, m + 1), repeat=g - 1):
                vecs.add(rest[:pinned] + (sign,) + rest[pinned:])
    canonical = []
    for vec in vecs:
        first = next((k for k in vec if k != 0), 0)
        if first > 0:
            canonical.append(vec)
    canonical.sort()
    return canonical


# ---------------------------------------------------------------------------
# census over curve families
# ---------------------------------------------------------------------------

CENSUS_MAX_P = {1: 13, 2: 7}


@dataclass(frozen=True)
class CensusEntry:
    coeffs: tuple[int, ...]  # (a, b) for genus 1, (c3, c2, c1, c0) for genus 2
    counts: tuple[int, ...]
    trace: int
    e: tuple[int, ...]
    kind: str
    p_rank: int
    irreducible_p: bool
    irreducible_p2: bool
    relation_found: bool
    min_residual: float


@dataclass(frozen=True)
class CensusReport:
    p: int
    genus: int
    family: str
    total: int
    skipped_singular: int
    sampled: bool
    seed: int | None
    relation_bound: int
    epsilon: float
    entries: tuple[CensusEntry, ...]
    fractions: dict = field(compare=False)


def census(
    p: int,
    genus: int,
    *,
    relation_bound: int = 50,
    epsilon: float = 1e-9,
    sample_limit: int = 200,
    seed: int = 0,
    digits: int = 50,
) -> CensusReport:
    """Classify a whole family: every nonsingular y^2 = x^3 + ax + b for
    genus 1, every (or a seeded sample of) depressed quintic
    y^2 = x^5 + c3 x^3 + c2 x^2 + c1 x + c0 for genus 2.

    The x^4 coefficient is pinned to zero to keep the family desk-sized;
    aggregation is order-independent, so results do not depend on how the
    family is partitioned.
    """
    if p == 2:
        raise EvenCharacteristic("census models need odd characteristic")
    if not is_prime(p):
        raise BadCharacteristic(f"{p} is not prime")
    if genus not in CENSUS_MAX_P:
        raise ValueError("genus must be 1 or 2")
    if p > CENSUS_MAX_P[genus]:
        raise SizeExceeded(f"census for genus {genus} supports p <= {CENSUS_MAX_P[genus]}")

    sampled = genus == 2 and p == 7
    skipped = 0
    entries = []
    if genus == 1:
        family = "y^2 = x^3 + a x + b, all (a, b) with nonzero discriminant"
        models = [(a, b) for a in range(p) for b in range(p)]
    else:
        family = "y^2 = x^5 + c3 x^3 + c2 x^2 + c1 x + c0 (depressed quintic)"
        if sampled:
            rng = np.random.default_rng(seed)
            models = [tuple(int(v) for v in rng.integers(0, p, size=4))
                      for _ in range(sample_limit)]
        else:
            models = list(itertools.product(range(p), repeat=4))

    for coeffs in models:
        if genus == 1:
            curve = elliptic_curve(p, coeffs[0], coeffs[1])
        else:
            c3, c2, c1, c0 = coeffs
            curve = hyperelliptic_curve(p, (c0, c1, c2, c3, 0, 1))
        try:
            validate(curve)
        except SingularCurve:
            skipped += 1
            continue
        z = numerator_from_curve(curve)
        cls = classify(z, p)
        angles = frobenius_angles(z, digits=digits)
        rel = find_integer_relation(angles, relation_bound, epsilon)
        s = extend_power_sums(z, genus).s
        counts = tuple(z.q ** n + 1 - sn for n, sn in enumerate(s, 1))
        entries.append(
            CensusEntry(
                coeffs=tuple(coeffs),
                counts=counts,
                trace=s[0],
                e=z.e,
                kind=cls.kind,
                p_rank=cls.p_rank,
                irreducible_p=is_irreducible_over_integers(z.poly_coeffs()),
                irreducible_p2=is_irreducible_over_integers(
                    extension_numerator(z, 2).poly_coeffs()
                ),
                relation_found=rel.found is not None,
                min_residual=rel.min_residual,
            )
        )

    total = len(entries)
    denom = total or 1
    fractions = {
        "ordinary": sum(e.kind == ORDINARY for e in entries) / denom,
        "supersingular": sum(e.kind == SUPERSINGULAR for e in entries) / denom,
        "intermediate": sum(e.kind == INTERMEDIATE for e in entries) / denom,
        "p_irreducible": sum(e.irreducible_p for e in entries) / denom,
        "relation_found": sum(e.relation_found for e in entries) / denom,
    }
    return CensusReport(
        p=p,
        genus=genus,
        family=family,
        total=total,
        skipped_singular=skipped,
        sampled=sampled,
        seed=seed if sampled else None,
        relation_bound=relation_bound,
        epsilon=epsilon,
        entries=tuple(entries),
        fractions=fractions,
    )
