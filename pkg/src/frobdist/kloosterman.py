"""Kloosterman sums over F_p and its extensions, the angle phi with
K = 2 sqrt(p) cos(phi), and the arcsine-law statistics of cos(n phi).

The additive character is fixed as psi(t) = e^(2 pi i t / p) with prime base
field.  Sums are assembled from an exact integer histogram of the traces
Tr(x + a x^{-1}), so the imaginary part cancels pair-by-pair (x against -x)
and the cosine part can be re-evaluated at any precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp

from .classify import RelationReport, find_integer_relation
from .equidist import (
    DistributionReport,
    Interval,
    RatioSequence,
    _angle_ratios,
    distribution_report,
)
from .errors import PrecisionInsufficient, SizeExceeded, WeilViolation, ZeroParameter
from .ffield import absolute_trace, is_prime, make_field
from .zeta import FrobeniusAngles

SUM_GUARD = 1 << 24
KAPPA_GUARD = 10 ** 7


@dataclass(frozen=True)
class KloostermanData:
    """K_p(a), its angle phi = arccos(K / 2 sqrt(p)) and kappa_1."""

    p: int
    a: int
    value: float
    phi: object  # mpmath real at `precision` digits
    kappa_1: float
    precision: int


@lru_cache(maxsize=None)
def _trace_counts(p: int, n: int, a: int) -> tuple[int, ...]:
    """counts[t] = #{x in F_{p^n}^* : Tr(x + a x^{-1}) = t}, exact."""
    if n == 1:
        counts = [0] * p
        for x in range(1, p):
            counts[(x + a * pow(x, p - 2, p)) % p] += 1
        return tuple(counts)
    pairs = _trace_pairs(p, n)
    counts = [0] * p
    for (t1, t2), c in pairs.items():
        counts[(t1 + a * t2) % p] += c
    return tuple(counts)


@lru_cache(maxsize=None)
def _trace_pairs(p: int, n: int) -> dict:
    """Joint histogram of (Tr(x), Tr(x^{-1})) over F_{p^n}^*; a enters only
    through the F_p-linear combination Tr(x) + a Tr(x^{-1})."""
    field = make_field(p, n)
    pairs: dict[tuple[int, int], int] = {}
    for x in field.elements():
        if not x:
            continue
        key = (absolute_trace(x), absolute_trace(x.inverse()))
        pairs[key] = pairs.get(key, 0) + 1
    return pairs


def kloosterman_sum(p: int, n: int, a: int) -> float:
    """K_{p^n}(a) = sum over x != 0 of cos(2 pi Tr(x + a/x) / p).

    The sine part is evaluated with symmetric arguments and must vanish to
    1e-10; the result obeys |K| <= 2 p^(n/2).
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if a % p == 0:
        raise ZeroParameter("a must be a nonzero residue")
    if n < 1 or p ** n > SUM_GUARD:
        raise SizeExceeded(f"{p}^{n} outside (0, 2^24]")
    counts = _trace_counts(p, n, a % p)
    if p == 2:
        # single nontrivial residue, character value -1
        total = float(counts[0] - counts[1])
        imag = 0.0
    else:
        total = float(counts[0])
        imag = 0.0
        for t in range(1, (p - 1) // 2 + 1):
            c = math.cos(2.0 * math.pi * t / p)
            s = math.sin(2.0 * math.pi * t / p)
            total += (counts[t] + counts[p - t]) * c
            imag += (counts[t] - counts[p - t]) * s
    if abs(imag) > 1e-10:
        raise PrecisionInsufficient(f"imaginary part {imag} did not cancel")
    bound = 2.0 * p ** (n / 2.0)
    if abs(total) > bound + 1e-6:
        raise WeilViolation(f"|K| = {abs(total)} above 2 p^(n/2) = {bound}")
    return total


def kloosterman_angle(p: int, a: int, digits: int = 50) -> KloostermanData:
    """phi at the requested precision, from a high-precision re-evaluation
    of the defining cosine sum.

    Near |K| = 2 sqrt(p) the arccos is ill-conditioned, so the angle is
    taken through arcsin of the complementary quantity instead.
    """
    value = kloosterman_sum(p, 1, a)  # validates inputs, |K| bound
    counts = _trace_counts(p, 1, a % p)
    with mp.workdps(digits + 15):
        if p == 2:
            k_hp = mp.mpf(counts[0] - counts[1])
        else:
            k_hp = mp.mpf(counts[0])
            for t in range(1, (p - 1) // 2 + 1):
                c = mp.cos(2 * mp.pi * t / p)
                k_hp += (counts[t] + counts[p - t]) * c
        x = k_hp / (2 * mp.sqrt(p))
        if abs(x) > 1:
            raise WeilViolation("normalized Kloosterman sum escapes [-1, 1]")
        if abs(x) > 0.99:
            comp = mp.sqrt((1 - x) * (1 + x))
            phi = mp.asin(comp) if x > 0 else mp.pi - mp.asin(comp)
        else:
            phi = mp.acos(x)
        kappa_1 = float(mp.cos(phi))
    return KloostermanData(
        p=p, a=a % p, value=value, phi=phi, kappa_1=kappa_1, precision=digits
    )


def _angle_container(data: KloostermanData) -> FrobeniusAngles:
    # kappa_n = cos(pi n (phi/pi)): reuse the genus-1 angle machinery
    with mp.workdps(data.precision + 15):
        theta = data.phi / mp.pi
    return FrobeniusAngles(
        g=1,
        q=data.p,
        theta=(theta,),
        precision_digits=data.precision,
        modulus_residual=0.0,
        reconstruction_error=0.0,
    )


def kappa_sequence(p: int, a: int, n_max: int) -> RatioSequence:
    """kappa_n = cos(n phi) for n = 1..n_max."""
    if n_max > KAPPA_GUARD:
        raise SizeExceeded(f"kappa sequence capped at {KAPPA_GUARD}")
    data = kloosterman_angle(p, a)
    values = _angle_ratios(_angle_container(data), n_max)
    return RatioSequence(q=p, g=1, n=n_max, values=values, mode="angle-float")


@dataclass(frozen=True)
class KappaReport:
    p: int
    a: int
    value: float
    phi: float
    kappa_1: float
    relation: RelationReport
    distribution: DistributionReport


def kappa_distribution_report(
    p: int, a: int, n_max: int, grid: list[Interval],
    relation_bound: int = 50, epsilon: float = 1e-9,
) -> KappaReport:
    """Interval frequencies of kappa_n against the arcsine law, annotated
    with the integer-relation search on phi/pi."""
    if n_max > KAPPA_GUARD:
        raise SizeExceeded(f"kappa sequence capped at {KAPPA_GUARD}")
    data = kloosterman_angle(p, a)
    container = _angle_container(data)
    values = _angle_ratios(container, n_max)
    seq = RatioSequence(q=p, g=1, n=n_max, values=values, mode="angle-float")
    report = distribution_report(seq, grid)
    relation = find_integer_relation(container, relation_bound, epsilon)
    return KappaReport(
        p=p,
        a=a % p,
        value=data.value,
        phi=float(data.phi),
        kappa_1=data.kappa_1,
        relation=relation,
        distribution=report,
    )
