"""Genus 1 and 2 hyperelliptic models over odd prime fields, with exact
point counting over extensions by enumeration.

Curve coefficients live in a prime field F_p (k = 1); counting over F_{p^n}
embeds them as constants, which is the unique F_p-algebra embedding and so
needs no choice of field tower.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import BadDegree, EvenCharacteristic, SingularCurve, SizeExceeded
from .ffield import (
    FieldSpec,
    MAX_ENUMERATION,
    _poly_gcd,
    _poly_trim,
    _raw_mul,
    make_field,
    quadratic_character,
    square_table,
)

ELLIPTIC = "elliptic"
HYPERELLIPTIC2 = "hyperelliptic2"


@dataclass(frozen=True)
class CurveSpec:
    """y^2 = f(x) over F_p, with f of degree 3 (elliptic) or 5/6 (genus 2).

    f is stored ascending-degree as residues mod p.  For the elliptic model
    f = x^3 + a x + b, so f == (b, a, 0, 1).
    """

    base: FieldSpec
    model: str
    f: tuple[int, ...]

    @property
    def genus(self) -> int:
        return 1 if self.model == ELLIPTIC else 2

    @property
    def q(self) -> int:
        return self.base.order


def elliptic_curve(p: int, a: int, b: int) -> CurveSpec:
    base = make_field(p, 1)
    return CurveSpec(base, ELLIPTIC, (b % p, a % p, 0, 1))


def hyperelliptic_curve(p: int, f_coeffs) -> CurveSpec:
    base = make_field(p, 1)
    f = tuple(c % p for c in f_coeffs)
    return CurveSpec(base, HYPERELLIPTIC2, f)


def validate(curve: CurveSpec) -> None:
    """Raise unless the model is smooth and supported.

    Elliptic: 4a^3 + 27b^2 != 0.  Genus 2: deg f in {5, 6} and f squarefree,
    i.e. gcd(f, f') = 1 in F_p[x].
    """
    p = curve.base.p
    if p == 2:
        raise EvenCharacteristic("curve models require odd characteristic")
    if curve.base.k != 1:
        raise BadDegree("curve coefficients must live in a prime field")
    f = _poly_trim(list(curve.f))
    deg = len(f) - 1
    if curve.model == ELLIPTIC:
        if deg != 3 or curve.f[3] != 1 or curve.f[2] != 0:
            raise BadDegree("elliptic model must be y^2 = x^3 + a x + b")
        a, b = curve.f[1], curve.f[0]
        if (4 * a * a * a + 27 * b * b) % p == 0:
            raise SingularCurve(f"discriminant vanishes for a={a}, b={b} mod {p}")
    elif curve.model == HYPERELLIPTIC2:
        if deg not in (5, 6):
            raise BadDegree(f"genus-2 model needs deg f in {{5, 6}}, got {deg}")
        fprime = _poly_trim([(i * c) % p for i, c in enumerate(f)][1:])
        if _poly_gcd(f, fprime, p) != [1]:
            raise SingularCurve("f is not squarefree")
    else:
        raise BadDegree(f"unknown model {curve.model!r}")


def count_points(curve: CurveSpec, n: int) -> int:
    """#C(F_{q^n}) on the smooth projective model, by enumeration.

    Affine points are counted as sum over x of 1 + chi(f(x)) with chi(0) = 0;
    infinity contributes 1 for deg 3 and 5, and for deg 6 both points at
    infinity are rational exactly when the leading coefficient is a square
    in F_{q^n}.
    """
    validate(curve)
    p = curve.base.p
    if n < 1:
        raise ValueError("extension degree must be positive")
    if p ** n > MAX_ENUMERATION:
        raise SizeExceeded(f"{p}^{n} exceeds the enumeration bound 2^28")
    ext = make_field(p, n)
    f = _poly_trim(list(curve.f))
    deg = len(f) - 1
    affine = _affine_count(ext, f)
    if deg in (3, 5):
        at_infinity = 1
    else:
        lc = ext.element(f[-1])
        at_infinity = 2 if quadratic_character(lc) == 1 else 0
    return affine + at_infinity


def _affine_count(ext: FieldSpec, f: list[int]) -> int:
    """Solutions of y^2 = f(x) with x, y in ext, via a square table."""
    squares = square_table(ext)
    p, k = ext.p, ext.k
    zero = (0,) * k
    deg = len(f) - 1
    total = 0
    for x, powers in _power_rows(ext, deg):
        # f(x) as a constant combination of the shared power rows; the rows
        # are cached per field, so repeated curves pay no multiplications.
        acc = [f[0] % p] + [0] * (k - 1)
        for j in range(1, deg + 1):
            cj = f[j]
            if cj:
                pj = powers[j - 1]
                for t in range(k):
                    acc[t] += cj * pj[t]
        val = tuple(c % p for c in acc)
        if val in squares:
            total += 2
        elif val == zero:
            total += 1
    return total


@lru_cache(maxsize=8)
def _power_cache(ext: FieldSpec, deg: int):
    """List of (x, (x^1 ... x^deg)) raw rows for every x in ext."""
    p, k, modulus = ext.p, ext.k, ext.modulus
    rows = []
    for coeffs in itertools.product(range(p), repeat=k):
        powers = [coeffs]
        acc = coeffs
        for _ in range(deg - 1):
            acc = _raw_mul(acc, coeffs, p, modulus)
            powers.append(acc)
        rows.append((coeffs, tuple(powers)))
    return rows


def _power_rows(ext: FieldSpec, deg: int):
    if ext.order <= MAX_ENUMERATION and ext.order <= (1 << 22):
        yield from _power_cache(ext, deg)
        return
    # too large to cache: stream the rows
    p, k, modulus = ext.p, ext.k, ext.modulus
    for coeffs in itertools.product(range(p), repeat=k):
        powers = [coeffs]
        acc = coeffs
        for _ in range(deg - 1):
            acc = _raw_mul(acc, coeffs, p, modulus)
            powers.append(acc)
        yield coeffs, tuple(powers)
