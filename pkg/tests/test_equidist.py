import math
import random

import numpy as np
import pytest
from scipy import integrate

from frobdist import (
    Interval,
    RatioSequence,
    count_in_interval,
    default_grid,
    distribution_report,
    frobenius_angles,
    kronecker_points,
    limit_density,
    monte_carlo_density,
    ratio_sequence,
    star_discrepancy,
)
from frobdist.errors import GuardExceeded, SizeExceeded


def arcsine_quadrature(lo, hi):
    """Oracle: integrate the arcsine density 1/(pi sqrt(1 - a^2)) directly."""
    lo, hi = max(-1.0, lo), min(1.0, hi)
    if hi <= lo:
        return 0.0
    val, _ = integrate.quad(
        lambda a: 1.0 / (math.pi * math.sqrt((1.0 - a) * (1.0 + a))),
        lo, hi, points=[p for p in (lo, hi) if abs(p) == 1.0] or None,
    )
    return val


class TestRatioSequence:
    def test_supersingular_period_four(self, z_f3_ss):
        seq = ratio_sequence(z_f3_ss, 100)
        expected = [0.0, -1.0, 0.0, 1.0] * 25
        assert np.allclose(seq.values, expected, atol=1e-14)

    def test_alpha_one_value(self, z_f5_ord):
        seq = ratio_sequence(z_f5_ord, 1)
        assert abs(seq.values[0] - (-1 / math.sqrt(5))) < 1e-14

    def test_modes_agree(self, z_f5_ord, z_f5_g2, z_f5_g2_ord, z_f3_ss):
        for z in (z_f5_ord, z_f5_g2, z_f5_g2_ord, z_f3_ss):
            exact = ratio_sequence(z, 1000, mode="exact")
            angle = ratio_sequence(z, 1000, mode="angle")
            assert np.max(np.abs(exact.values - angle.values)) < 1e-9

    def test_modes_agree_deep(self, z_f5_ord):
        # exercises the scaled-mantissa conversion on 2000-bit power sums
        exact = ratio_sequence(z_f5_ord, 5000, mode="exact")
        angle = ratio_sequence(z_f5_ord, 5000, mode="angle")
        assert np.max(np.abs(exact.values - angle.values)) < 1e-9

    def test_exact_conversion_relative_error(self, z_f5_ord, z_f5_g2):
        # conversion contract: within 1e-12 of s_n / (2g q^(n/2)), checked
        # against direct high-precision evaluation
        import mpmath as mp

        from frobdist import extend_power_sums

        for z in (z_f5_ord, z_f5_g2):
            seq = ratio_sequence(z, 2000, mode="exact")
            s = extend_power_sums(z, 2000).s
            with mp.workdps(80):
                for n in (1, 2, 3, 17, 100, 999, 2000):
                    ref = mp.mpf(s[n - 1]) / (2 * z.g * mp.sqrt(z.q) ** n)
                    if ref == 0:
                        assert seq.values[n - 1] == 0.0
                    else:
                        rel = abs((mp.mpf(float(seq.values[n - 1])) - ref) / ref)
                        assert rel < 1e-12

    def test_within_unit_interval(self, z_f5_g2):
        seq = ratio_sequence(z_f5_g2, 3000)
        assert np.all(seq.values >= -1.0)
        assert np.all(seq.values <= 1.0)

    def test_guards(self, z_f5_ord):
        with pytest.raises(GuardExceeded):
            ratio_sequence(z_f5_ord, 10 ** 6 + 1, mode="exact")
        with pytest.raises(GuardExceeded):
            ratio_sequence(z_f5_ord, 10 ** 8 + 1, mode="angle")

    def test_unknown_mode(self, z_f5_ord):
        with pytest.raises(ValueError):
            ratio_sequence(z_f5_ord, 10, mode="bogus")


class TestCountInInterval:
    def test_small_example(self):
        seq = RatioSequence(5, 1, 3, np.array([0.5, -0.2, 0.9]), "exact-bigint")
        assert count_in_interval(seq, Interval(0.0, 1.0)) == 2

    def test_full_range(self, z_f5_ord):
        seq = ratio_sequence(z_f5_ord, 250)
        assert count_in_interval(seq, Interval(-1.0, 1.0)) == 250

    def test_supersingular_middle(self, z_f3_ss):
        seq = ratio_sequence(z_f3_ss, 100)
        assert count_in_interval(seq, Interval(-0.5, 0.5)) == 50

    def test_closed_boundaries(self):
        seq = RatioSequence(5, 1, 3, np.array([0.25, 0.5, 0.75]), "exact-bigint")
        assert count_in_interval(seq, Interval(0.25, 0.5)) == 2

    def test_invalid_interval(self):
        with pytest.raises(ValueError):
            Interval(0.5, -0.5)
        with pytest.raises(ValueError):
            Interval(-2.0, 0.0)


class TestLimitDensity:
    def test_full_mass_g1(self):
        assert limit_density(1, Interval(-1, 1)).value == 1.0

    def test_arcsine_third(self):
        d = limit_density(1, Interval(-0.5, 0.5))
        assert abs(d.value - 1 / 3) < 1e-9
        assert d.method == "closed-form"

    def test_matches_quadrature_oracle(self):
        rng = random.Random(2)
        for _ in range(12):
            lo = rng.uniform(-1, 1)
            hi = rng.uniform(lo, 1)
            got = limit_density(1, Interval(lo, hi)).value
            assert abs(got - arcsine_quadrature(lo, hi)) < 1e-9

    def test_full_mass_higher_genus(self):
        for g, tol in ((2, 1e-9), (3, 1e-6)):
            d = limit_density(g, Interval(-1, 1), tol)
            assert abs(d.value - 1.0) <= tol
            assert d.error_bound <= tol

    def test_symmetry_g2(self):
        for lo, hi in [(-0.8, -0.1), (0.05, 0.6), (-0.3, 0.9)]:
            a = limit_density(2, Interval(lo, hi), 1e-9).value
            b = limit_density(2, Interval(-hi, -lo), 1e-9).value
            assert abs(a - b) < 2e-9

    def test_half_mass_g2(self):
        assert abs(limit_density(2, Interval(-1.0, 0.0), 1e-9).value - 0.5) < 2e-9

    def test_riemann_oracle_g2(self):
        # independent 2-d Riemann sum over the unit square
        lo, hi = -0.35, 0.55
        m = 1500
        x = (np.arange(m) + 0.5) / m
        cx = np.cos(np.pi * x)
        mean = 0.5 * (cx[:, None] + cx[None, :])
        frac = np.count_nonzero((mean >= lo) & (mean <= hi)) / (m * m)
        assert abs(limit_density(2, Interval(lo, hi)).value - frac) < 2e-3

    def test_mpmath_oracle_g2(self):
        # independent high-accuracy evaluation with a different quadrature
        # engine: arc length in y of {2*lo - cos(pi x) <= cos(pi y) <= ...}
        import mpmath as mp

        def measure(lo, hi):
            def inner(x):
                a = 2 * lo - mp.cos(mp.pi * x)
                b = 2 * hi - mp.cos(mp.pi * x)
                a = max(mp.mpf(-1), min(mp.mpf(1), a))
                b = max(mp.mpf(-1), min(mp.mpf(1), b))
                if b <= a:
                    return mp.mpf(0)
                return (mp.acos(a) - mp.acos(b)) / mp.pi

            kinks = set()
            for bound in (lo, hi):
                for t in (1.0, -1.0):
                    c = 2 * bound - t
                    if -1 < c < 1:
                        kinks.add(float(mp.acos(c) / mp.pi))
            pts = [0.0] + sorted(kinks) + [1.0]
            with mp.workdps(30):
                return float(sum(
                    mp.quad(inner, [a, b]) for a, b in zip(pts, pts[1:])
                ))

        for lo, hi in [(-0.35, 0.55), (-0.9, -0.2), (0.0, 1.0)]:
            got = limit_density(2, Interval(lo, hi), 1e-10).value
            assert abs(got - measure(lo, hi)) < 1e-9

    def test_monotonicity(self):
        rng = random.Random(4)
        for g in (1, 2):
            for _ in range(4):
                lo = rng.uniform(-1, 0.5)
                hi = rng.uniform(lo, 1)
                base = limit_density(g, Interval(lo, hi)).value
                wider = limit_density(g, Interval(max(-1, lo - 0.2), hi)).value
                assert wider >= base - 1e-9

    def test_partition_sums_to_one(self):
        total = sum(
            limit_density(2, q, 1e-9).value for q in default_grid(7)
        )
        assert abs(total - 1.0) < 7e-9

    def test_tolerance_validation(self):
        with pytest.raises(ValueError):
            limit_density(1, Interval(-0.5, 0.5), 1e-2)
        with pytest.raises(ValueError):
            limit_density(4, Interval(-0.5, 0.5))


class TestMonteCarlo:
    def test_full_mass_exact(self):
        d = monte_carlo_density(1, Interval(-1, 1), 10 ** 4, seed=1)
        assert d.value == 1.0

    def test_matches_closed_form(self):
        d = monte_carlo_density(1, Interval(-0.5, 0.5), 10 ** 6, seed=0)
        assert abs(d.value - 1 / 3) <= 4 * d.stderr

    def test_matches_quadrature_g2(self):
        rng = random.Random(8)
        for _ in range(3):
            lo = rng.uniform(-1, 0.5)
            hi = rng.uniform(lo, 1)
            quad_val = limit_density(2, Interval(lo, hi)).value
            mc = monte_carlo_density(2, Interval(lo, hi), 10 ** 5, seed=3)
            assert abs(quad_val - mc.value) <= 4 * max(mc.stderr, 1e-4)

    def test_deterministic(self):
        a = monte_carlo_density(2, Interval(-0.4, 0.3), 10 ** 5, seed=11)
        b = monte_carlo_density(2, Interval(-0.4, 0.3), 10 ** 5, seed=11)
        assert a.value == b.value

    def test_sample_floor(self):
        with pytest.raises(ValueError):
            monte_carlo_density(1, Interval(-1, 1), 10)


class TestDistributionReport:
    def test_counts_partition(self, z_f5_ord):
        seq = ratio_sequence(z_f5_ord, 2000)
        rep = distribution_report(seq, default_grid(21))
        assert sum(r.count for r in rep.rows) == 2000  # no ratio hits an edge
        assert sum(rep.histogram) == 2000
        assert len(rep.histogram) == 64
        assert rep.sup_deviation < 0.05

    def test_supersingular_negative_control(self, z_f3_ss):
        seq = ratio_sequence(z_f3_ss, 10 ** 4)
        rep = distribution_report(seq, [Interval(-0.1, 0.1)])
        row = rep.rows[0]
        assert row.frequency == 0.5
        assert abs(row.density - 0.0638) < 5e-4
        assert row.deviation > 0.4

    def test_ordinary_genus2_equidistributes(self, z_f5_g2_ord):
        # relation-free angles: the genus-2 law should fit well by N = 5000
        seq = ratio_sequence(z_f5_g2_ord, 5000)
        rep = distribution_report(seq, default_grid(21))
        assert rep.sup_deviation < 0.05

    def test_genus2_kronecker_decay(self, z_f5_g2_ord):
        ang = frobenius_angles(z_f5_g2_ord)
        d_100 = star_discrepancy(kronecker_points(ang, 100)).star_discrepancy
        d_3k = star_discrepancy(kronecker_points(ang, 3000)).star_discrepancy
        assert d_3k < d_100

    def test_empty_grid(self, z_f5_ord):
        seq = ratio_sequence(z_f5_ord, 10)
        with pytest.raises(ValueError):
            distribution_report(seq, [])


@pytest.fixture(scope="module")
def z_g3():
    """Synthetic genus-3 numerator: product of three elliptic numerators
    over F_5 with traces 1, 2, 3 (an abelian threefold); distinct
    non-isogenous factors give relation-free angles."""
    from frobdist import ZetaNumerator

    prod = [1]
    for a in (1, 2, 3):
        out = [0] * (len(prod) + 2)
        for i, c in enumerate(prod):
            out[i] += c
            out[i + 1] += -a * c
            out[i + 2] += 5 * c
        prod = out
    e = tuple((-1) ** i * c for i, c in enumerate(prod))
    return ZetaNumerator(3, 5, e)


class TestGenusThree:
    def test_angles_are_the_elliptic_ones(self, z_g3):
        ang = frobenius_angles(z_g3)
        expected = sorted(math.acos(a / (2 * math.sqrt(5))) / math.pi
                          for a in (1, 2, 3))
        assert np.allclose([float(t) for t in ang.theta], expected, atol=1e-40)

    def test_no_relation_small_bound(self, z_g3):
        from frobdist import find_integer_relation

        rel = find_integer_relation(frobenius_angles(z_g3), 20, 1e-9)
        assert rel.found is None

    def test_equidistributes_against_genus3_law(self, z_g3):
        seq = ratio_sequence(z_g3, 20000)
        rep = distribution_report(seq, default_grid(11), tol=1e-6)
        assert rep.sup_deviation <= 0.05

    def test_3d_kronecker_lower_bound_decays(self, z_g3):
        ang = frobenius_angles(z_g3)
        d_small = star_discrepancy(kronecker_points(ang, 100)).star_discrepancy
        d_large = star_discrepancy(kronecker_points(ang, 2000)).star_discrepancy
        assert d_large < d_small


class TestKroneckerPoints:
    def test_half_angle(self, z_f3_ss):
        pts = kronecker_points(frobenius_angles(z_f3_ss), 4)
        assert np.allclose(pts.ravel(), [0.5, 0.0, 0.5, 0.0], atol=1e-12)

    def test_doubling(self, z_f5_ord):
        ang = frobenius_angles(z_f5_ord)
        pts = kronecker_points(ang, 2)
        theta = float(ang.theta[0])
        assert abs(pts[0, 0] - theta) < 1e-12
        assert abs(pts[1, 0] - (2 * theta % 1)) < 1e-12

    def test_single(self, z_f5_g2):
        ang = frobenius_angles(z_f5_g2)
        pts = kronecker_points(ang, 1)
        assert pts.shape == (1, 2)
        assert np.allclose(pts[0], [float(t) for t in ang.theta], atol=1e-12)

    def test_guard(self, z_f5_ord):
        with pytest.raises(GuardExceeded):
            kronecker_points(frobenius_angles(z_f5_ord), 10 ** 6 + 1)


class TestStarDiscrepancy:
    def test_single_point_half(self):
        rep = star_discrepancy([0.5])
        assert rep.star_discrepancy == 0.5
        assert rep.method == "exact-1d"

    def test_equispaced_midpoints(self):
        for n in (10, 100):
            pts = (2 * np.arange(1, n + 1) - 1) / (2 * n)
            assert abs(star_discrepancy(pts).star_discrepancy - 1 / (2 * n)) < 1e-15

    def test_single_2d_point(self):
        # hand oracle: sup is 1 - 0.25 at the closed corner (0.5, 0.5)
        rep = star_discrepancy([(0.5, 0.5)])
        assert rep.method == "exact-2d"
        assert abs(rep.star_discrepancy - 0.75) < 1e-15

    def test_2d_matches_brute_force(self):
        rng = random.Random(6)
        for trial in range(5):
            pts = np.array([(rng.random(), rng.random()) for _ in range(12)])
            got = star_discrepancy(pts).star_discrepancy
            # brute force over the critical corner grid
            xs = sorted(set(pts[:, 0])) + [1.0]
            ys = sorted(set(pts[:, 1])) + [1.0]
            best = 0.0
            for a in xs:
                for b in ys:
                    opened = np.count_nonzero((pts[:, 0] < a) & (pts[:, 1] < b))
                    closed = np.count_nonzero((pts[:, 0] <= a) & (pts[:, 1] <= b))
                    best = max(best, a * b - opened / 12, closed / 12 - a * b)
            assert abs(got - best) < 1e-12

    def test_kronecker_decay(self, z_f5_ord):
        ang = frobenius_angles(z_f5_ord)
        d_100 = star_discrepancy(kronecker_points(ang, 100)).star_discrepancy
        d_10k = star_discrepancy(kronecker_points(ang, 10 ** 4)).star_discrepancy
        assert d_10k < d_100

    def test_extreme_bound_recorded(self, z_f5_g2):
        pts = kronecker_points(frobenius_angles(z_f5_g2), 200)
        rep = star_discrepancy(pts)
        assert rep.extreme_upper_bound == min(1.0, 4 * rep.star_discrepancy)

    def test_3d_lower_bound(self):
        rng = np.random.default_rng(2)
        pts = rng.random((500, 3))
        rep = star_discrepancy(pts)
        assert rep.method == "lower-bound"
        assert 0.0 < rep.star_discrepancy <= 1.0

    def test_2d_size_guard(self):
        pts = np.random.default_rng(1).random((10 ** 4 + 1, 2))
        with pytest.raises(SizeExceeded):
            star_discrepancy(pts)

    def test_dimension_guard(self):
        with pytest.raises(SizeExceeded):
            star_discrepancy(np.zeros((5, 4)) + 0.5)
