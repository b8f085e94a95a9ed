"""Zeta numerators, exact trace sequences, Jacobian orders and Frobenius
angles.

Conventions: with inverse roots tau_1..tau_2g of modulus sqrt(q), the
numerator is P(T) = prod (1 - tau_j T) = sum_i (-1)^i e_i T^i where e_i is
the i-th elementary symmetric function of the tau_j, so e_0 = 1 and
e_{2g-i} = q^{g-i} e_i.  Power sums s_n = sum tau_j^n are exact integers;
floating point enters only at the angles.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp

from .curves import CurveSpec, count_points
from .errors import (
    GuardExceeded,
    NoConvergence,
    NonIntegerCoefficient,
    WeilViolation,
)

POWER_SUM_GUARD = 10 ** 6
MAX_ROOT_DEGREE = 8
ROOT_ITERATION_CAP = 500


@dataclass(frozen=True)
class ZetaNumerator:
    """Integer coefficients e_0..e_2g of the zeta numerator over F_q."""

    g: int
    q: int
    e: tuple[int, ...]

    def __post_init__(self):
        if len(self.e) != 2 * self.g + 1:
            raise ValueError("need exactly 2g + 1 coefficients")
        if self.e[0] != 1:
            raise ValueError("e_0 must be 1")
        for i in range(self.g + 1):
            if self.e[2 * self.g - i] != self.q ** (self.g - i) * self.e[i]:
                raise ValueError(
                    f"functional equation fails at i={i}: "
                    f"e_{2 * self.g - i} != q^{self.g - i} e_{i}"
                )

    def poly_coeffs(self) -> list[int]:
        """Coefficients of P(T), ascending: [1, -e_1, e_2, ...]."""
        return [(-1) ** i * ei for i, ei in enumerate(self.e)]


@dataclass(frozen=True)
class PowerSums:
    """Exact power sums s_1..s_N of the Frobenius eigenvalues."""

    g: int
    q: int
    s: tuple[int, ...]


@dataclass(frozen=True)
class FrobeniusAngles:
    """Angles theta_1 <= ... <= theta_g in [0, 1] with tau = sqrt(q) e^{i pi theta}.

    theta entries are mpmath reals carrying the full working precision;
    precision_digits is the requested (and verified) decimal precision.
    modulus_residual and reconstruction_error record the verification
    residuals: max | |tau| - sqrt(q) | and the relative coefficient error of
    prod_j (T^2 - 2 sqrt(q) cos(pi theta_j) T + q) against the integers e_i.
    """

    g: int
    q: int
    theta: tuple
    precision_digits: int
    modulus_residual: float
    reconstruction_error: float


def power_sums_from_counts(counts, q: int, g: int) -> PowerSums:
    """Turn #C(F_{q^n}) for n = 1..g into s_n = q^n + 1 - #C(F_{q^n})."""
    if len(counts) != g:
        raise ValueError(f"need exactly g={g} counts")
    s = []
    for n, c in enumerate(counts, start=1):
        sn = q ** n + 1 - c
        if sn * sn > 4 * g * g * q ** n:
            raise WeilViolation(f"|s_{n}| = {abs(sn)} exceeds 2g q^(n/2)")
        s.append(sn)
    return PowerSums(g, q, tuple(s))


def numerator_from_power_sums(ps: PowerSums) -> ZetaNumerator:
    """Newton's identities e_n = (1/n) sum (-1)^(i-1) e_{n-i} s_i, then the
    functional equation for the upper half."""
    g, q, s = ps.g, ps.q, ps.s
    if len(s) != g:
        raise ValueError(f"need exactly g={g} power sums")
    e = [1]
    for n in range(1, g + 1):
        acc = 0
        for i in range(1, n + 1):
            acc += (-1) ** (i - 1) * e[n - i] * s[i - 1]
        if acc % n:
            raise NonIntegerCoefficient(
                f"e_{n} = {acc}/{n} is not an integer; counts are inconsistent"
            )
        e.append(acc // n)
    for i in range(g - 1, -1, -1):
        e.append(q ** (g - i) * e[i])
    return ZetaNumerator(g, q, tuple(e))


def numerator_from_curve(curve: CurveSpec) -> ZetaNumerator:
    """Count over F_q .. F_{q^g} and assemble the numerator."""
    g = curve.genus
    counts = [count_points(curve, n) for n in range(1, g + 1)]
    return numerator_from_power_sums(power_sums_from_counts(counts, curve.q, g))


def extend_power_sums(z: ZetaNumerator, n_max: int) -> PowerSums:
    """Exact s_1..s_N: Newton's identities up to 2g, then the linear
    recurrence sum_{i=0}^{2g} (-1)^i e_i s_{n-i} = 0."""
    if n_max < 1:
        raise ValueError("n_max must be positive")
    if n_max > POWER_SUM_GUARD:
        raise GuardExceeded(f"n_max {n_max} over the 10^6 guard")
    g, e = z.g, z.e
    s: list[int] = []
    for n in range(1, min(2 * g, n_max) + 1):
        acc = (-1) ** (n - 1) * n * e[n]
        for i in range(1, n):
            acc += (-1) ** (i - 1) * e[i] * s[n - i - 1]
        s.append(acc)
    # signed recurrence coefficients: s_n = sum_i c_i s_{n-i}
    c = [(-1) ** (i - 1) * e[i] for i in range(1, 2 * g + 1)]
    for n in range(2 * g + 1, n_max + 1):
        acc = 0
        for i in range(2 * g):
            acc += c[i] * s[n - i - 2]
        s.append(acc)
    return PowerSums(g, z.q, tuple(s))


def extension_numerator(z: ZetaNumerator, m: int) -> ZetaNumerator:
    """Numerator of the same curve viewed over F_{q^m}: roots tau_j^m.

    Built from the power sums S_n = s_{mn}, n = 1..2g, by Newton's identities
    at full degree; the result lives over q^m.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if m == 1:
        return z
    g = z.g
    s_long = extend_power_sums(z, 2 * g * m).s
    big_s = [s_long[m * n - 1] for n in range(1, 2 * g + 1)]
    e = [1]
    for n in range(1, 2 * g + 1):
        acc = 0
        for i in range(1, n + 1):
            acc += (-1) ** (i - 1) * e[n - i] * big_s[i - 1]
        if acc % n:
            raise NonIntegerCoefficient(
                f"extension coefficient e_{n} not integral (internal inconsistency)"
            )
        e.append(acc // n)
    return ZetaNumerator(g, z.q ** m, tuple(e))


def jacobian_order(z: ZetaNumerator, n: int) -> int:
    """#J(F_{q^n}) = P_n(1) = prod (1 - tau_j^n), an exact positive integer."""
    zn = extension_numerator(z, n)
    order = sum((-1) ** i * ei for i, ei in enumerate(zn.e))
    if order <= 0:
        raise WeilViolation(f"Jacobian order {order} is not positive")
    return order


# ---------------------------------------------------------------------------
# angles
# ---------------------------------------------------------------------------

def frobenius_angles(z: ZetaNumerator, digits: int = 50) -> FrobeniusAngles:
    """All-roots simultaneous iteration for the eigenvalue polynomial,
    followed by conjugate pairing.

    Works at 2 x digits decimal precision, starts from equispaced points on
    the circle of radius sqrt(q) (phase-offset to break conjugation
    symmetry), verifies every root modulus against sqrt(q) within
    10^(3 - digits), and checks that the angles reconstruct the integer
    coefficients.
    """
    if not 15 <= digits <= 200:
        raise ValueError("digits must lie in [15, 200]")
    d = 2 * z.g
    if d > MAX_ROOT_DEGREE:
        raise ValueError(f"degree {d} above the supported bound {MAX_ROOT_DEGREE}")
    with mp.workdps(2 * digits):
        # monic eigenvalue polynomial: T^2g - e_1 T^(2g-1) + ... (descending)
        coeffs = [mp.mpf((-1) ** i * ei) for i, ei in enumerate(z.e)]
        roots = _all_roots(coeffs, mp.sqrt(z.q))
        sq = mp.sqrt(z.q)
        residual = max(abs(abs(r) - sq) for r in roots)
        if residual > mp.mpf(10) ** (3 - digits):
            raise WeilViolation(
                f"root modulus off sqrt(q) by {mp.nstr(residual, 5)}"
            )
        # conjugate pairing via |arg|/pi; real roots pair among themselves
        # (theta 0 for +sqrt(q), theta 1 for -sqrt(q))
        t = sorted(abs(mp.arg(r)) / mp.pi for r in roots)
        theta = tuple((t[2 * j] + t[2 * j + 1]) / 2 for j in range(z.g))
        recon_err = _reconstruction_error(theta, z, sq)
        if recon_err > mp.mpf(10) ** (5 - digits):
            raise NoConvergence(
                f"angle reconstruction error {mp.nstr(recon_err, 5)} too large"
            )
        return FrobeniusAngles(
            g=z.g,
            q=z.q,
            theta=theta,
            precision_digits=digits,
            modulus_residual=float(residual),
            reconstruction_error=float(recon_err),
        )


def _all_roots(coeffs, radius):
    """Durand-Kerner iteration; coeffs are monic descending at working
    precision, initial points equispaced on the given circle.

    Repeated roots (supersingular inputs) make the iterates stall as a
    cluster of diameter about 10^(-dps/2); that is accepted once the steps
    stop shrinking below the cluster ceiling, and final quality is gated by
    the modulus and reconstruction checks in the caller.
    """
    d = len(coeffs) - 1
    # fixed phase offset keeps the start set away from the real axis
    offset = mp.mpf("0.3571")
    roots = [
        radius * mp.exp(1j * (2 * mp.pi * j / d + mp.pi / (2 * d) + offset))
        for j in range(d)
    ]
    hard_tol = mp.mpf(10) ** (-mp.mp.dps + 8) * radius
    stall_ceiling = mp.mpf(10) ** (-(mp.mp.dps // 2) + 3) * radius
    prev_moved = mp.inf
    stalled = 0
    for _ in range(ROOT_ITERATION_CAP):
        moved = mp.mpf(0)
        for i in range(d):
            zi = roots[i]
            num = _horner(coeffs, zi)
            den = mp.mpf(1)
            for j in range(d):
                if j != i:
                    den *= zi - roots[j]
            step = num / den
            roots[i] = zi - step
            moved = max(moved, abs(step))
        if moved < hard_tol:
            return roots
        if moved < stall_ceiling and moved > prev_moved / 2:
            stalled += 1
            if stalled >= 4:
                return roots
        else:
            stalled = 0
        prev_moved = moved
    raise NoConvergence(f"root iteration did not settle in {ROOT_ITERATION_CAP} steps")


def _horner(coeffs, x):
    acc = coeffs[0]
    for c in coeffs[1:]:
        acc = acc * x + c
    return acc


def _reconstruction_error(theta, z: ZetaNumerator, sq):
    """Relative error of prod (T^2 - 2 sqrt(q) cos(pi theta_j) T + q)
    against the integer coefficients of the eigenvalue polynomial."""
    poly = [mp.mpf(1)]
    for th in theta:
        quad = [mp.mpf(1), -2 * sq * mp.cos(mp.pi * th), mp.mpf(z.q)]
        poly = _poly_mul_mp(poly, quad)
    worst = mp.mpf(0)
    scale = max(mp.mpf(abs(ei)) for ei in z.e)
    for i, ei in enumerate(z.e):
        target = mp.mpf((-1) ** i * ei)
        worst = max(worst, abs(poly[i] - target) / scale)
    return worst


def _poly_mul_mp(a, b):
    out = [mp.mpf(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def weil_bound_holds(s_n: int, g: int, q: int, n: int) -> bool:
    """Exact integer form of |s_n| <= 2g q^(n/2): s_n^2 <= 4 g^2 q^n."""
    return s_n * s_n <= 4 * g * g * q ** n
