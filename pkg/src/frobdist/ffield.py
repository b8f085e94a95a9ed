"""Arithmetic in F_p and its extensions F_{p^k}.

Elements are dense coefficient vectors modulo a fixed monic irreducible
modulus; the modulus is chosen deterministically (smallest monic irreducible,
high-degree coefficients compared first) so that every downstream computation
is reproducible.  Fields up to p^k = 2^40 are supported; full enumeration is
guarded at 2^28.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    DivisionByZero,
    EvenCharacteristic,
    FieldMismatch,
    NotPrime,
    SizeExceeded,
)

MAX_FIELD_SIZE = 1 << 40
MAX_ENUMERATION = 1 << 28
MAX_PRIME = 10 ** 6


def is_prime(n: int) -> bool:
    """Trial-division primality test, adequate for p <= 10^6."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# dense polynomial arithmetic over F_p (ascending-degree int lists)
# ---------------------------------------------------------------------------

def _poly_trim(a: list[int]) -> list[int]:
    n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    return a[:n]


def _poly_mul(a, b, p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _poly_trim([c % p for c in out])


def _poly_rem(a, mod, p: int) -> list[int]:
    # mod is monic
    a = [c % p for c in a]
    d = len(mod) - 1
    for i in range(len(a) - 1, d - 1, -1):
        c = a[i]
        if c:
            a[i] = 0
            for j in range(d):
                a[i - d + j] = (a[i - d + j] - c * mod[j]) % p
    return _poly_trim(a)


def _poly_gcd(a, b, p: int) -> list[int]:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        inv_lead = pow(b[-1], p - 2, p)
        bm = [c * inv_lead % p for c in b]  # monic divisor
        a, b = b, _poly_rem(a, bm, p)
    if a:
        inv_lead = pow(a[-1], p - 2, p)
        a = [c * inv_lead % p for c in a]
    return a


def _is_irreducible(mod, p: int) -> bool:
    """Rabin test: x^(p^k) = x mod f, and x^(p^(k/r)) - x coprime to f."""
    k = len(mod) - 1
    if k == 1:
        return True
    frob = _poly_rem([0, 1], mod, p)
    powers = {}
    for j in range(1, k + 1):
        frob = _poly_powmod_x_of(frob, p, mod)
        powers[j] = frob
    if powers[k] != [0, 1]:
        return False
    for r in _prime_factors(k):
        h = list(powers[k // r])
        # subtract x
        while len(h) < 2:
            h.append(0)
        h[1] = (h[1] - 1) % p
        if _poly_gcd(h, mod, p) != [1]:
            return False
    return True


def _poly_powmod_x_of(g, p: int, mod) -> list[int]:
    """g(x)^p modulo mod, by square and multiply on the exponent p."""
    result = [1]
    base = g
    e = p
    while e:
        if e & 1:
            result = _poly_rem(_poly_mul(result, base, p), mod, p)
        base = _poly_rem(_poly_mul(base, base, p), mod, p)
        e >>= 1
    return result


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# fields and elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """An explicit model of F_{p^k}: characteristic, degree and modulus.

    The modulus is stored as ascending-degree coefficients of a monic
    irreducible polynomial; for k = 1 it is the polynomial x.
    """

    p: int
    k: int
    modulus: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.p ** self.k

    def element(self, value) -> "FieldElement":
        """Coerce an integer (constant) or coefficient sequence."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch("element belongs to a different field")
            return value
        if isinstance(value, int):
            coeffs = [value % self.p] + [0] * (self.k - 1)
        else:
            coeffs = [int(c) % self.p for c in value]
            if len(coeffs) > self.k:
                raise ValueError("coefficient vector longer than the degree")
            coeffs += [0] * (self.k - len(coeffs))
        return FieldElement(tuple(coeffs), self)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement((0,) * self.k, self)

    @property
    def one(self) -> "FieldElement":
        return FieldElement((1,) + (0,) * (self.k - 1), self)

    def elements(self):
        """Yield all p^k elements once, in lexicographic coefficient order."""
        if self.order > MAX_ENUMERATION:
            raise SizeExceeded(f"cannot enumerate {self.order} elements")
        for coeffs in itertools.product(range(self.p), repeat=self.k):
            yield FieldElement(coeffs, self)


@lru_cache(maxsize=None)
def make_field(p: int, k: int) -> FieldSpec:
    """Construct F_{p^k} with the smallest monic irreducible modulus.

    Candidate moduli x^k + c_{k-1} x^{k-1} + ... + c_0 are ordered by the
    tuple (c_{k-1}, ..., c_0), so sparse high-degree candidates like
    x^2 + c come first; the earliest irreducible one wins, which makes
    field construction deterministic (F_9 gets x^2 + 1, F_25 gets x^2 + 2).
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p > MAX_PRIME:
        raise SizeExceeded(f"characteristic {p} over the 10^6 bound")
    if k < 1:
        raise ValueError("extension degree must be >= 1")
    if p ** k > MAX_FIELD_SIZE:
        raise SizeExceeded(f"{p}^{k} exceeds 2^40")
    if k == 1:
        return FieldSpec(p, 1, (0, 1))
    for tail in itertools.product(range(p), repeat=k):
        mod = list(tail[::-1]) + [1]
        if _is_irreducible(mod, p):
            return FieldSpec(p, k, tuple(mod))
    raise RuntimeError("no irreducible polynomial found")  # unreachable


class FieldElement:
    """An element of a FieldSpec, as a fully reduced coefficient tuple."""

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs: tuple[int, ...], field: FieldSpec):
        self.coeffs = coeffs
        self.field = field

    def _check(self, other) -> "FieldElement":
        if isinstance(other, int):
            return self.field.element(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatch("operands come from different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.field.p
        return FieldElement(
            tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)),
            self.field,
        )

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(tuple(-a % p for a in self.coeffs), self.field)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        f = self.field
        return FieldElement(
            _raw_mul(self.coeffs, other.coeffs, f.p, f.modulus), f
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        f = self.field
        result = f.one.coeffs
        base = self.coeffs
        e = exponent
        while e:
            if e & 1:
                result = _raw_mul(result, base, f.p, f.modulus)
            base = _raw_mul(base, base, f.p, f.modulus)
            e >>= 1
        return FieldElement(result, f)

    def inverse(self) -> "FieldElement":
        """Inverse by the extended Euclidean algorithm in F_p[x]."""
        if not self:
            raise DivisionByZero("inverse of zero")
        f = self.field
        return FieldElement(_raw_inv(self.coeffs, f.p, f.modulus), f)

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.element(other)
        return (
            isinstance(other, FieldElement)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.coeffs, self.field.p, self.field.k))

    def __repr__(self):
        return f"FieldElement({list(self.coeffs)} in GF({self.field.p}^{self.field.k}))"


# raw tuple kernels, shared with the point-counting hot loops

def _raw_mul(a: tuple, b: tuple, p: int, modulus: tuple) -> tuple:
    k = len(a)
    if k == 1:
        return (a[0] * b[0] % p,)
    prod = [0] * (2 * k - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    for i in range(2 * k - 2, k - 1, -1):
        c = prod[i] % p
        if c:
            for j in range(k):
                prod[i - k + j] -= c * modulus[j]
        prod[i] = 0
    return tuple(c % p for c in prod[:k])


def _raw_inv(a: tuple, p: int, modulus: tuple) -> tuple:
    k = len(a)
    if k == 1:
        return (pow(a[0], p - 2, p),)
    r0, r1 = list(modulus), _poly_trim(list(a))
    t0, t1 = [], [1]
    while len(r1) > 1:
        inv_lead = pow(r1[-1], p - 2, p)
        # divide r0 by r1
        rem = list(r0)
        quot = [0] * max(1, len(rem) - len(r1) + 1)
        for i in range(len(rem) - 1, len(r1) - 2, -1):
            c = rem[i] * inv_lead % p
            if c:
                quot[i - len(r1) + 1] = c
                for j, r1j in enumerate(r1):
                    rem[i - len(r1) + 1 + j] = (rem[i - len(r1) + 1 + j] - c * r1j) % p
        rem = _poly_trim(rem)
        t2 = _poly_sub(t0, _poly_mul(quot, t1, p), p)
        r0, t0 = r1, t1
        r1, t1 = rem, t2
    if not r1:
        raise DivisionByZero("element is not invertible")
    scale = pow(r1[0], p - 2, p)
    out = _poly_rem([c * scale % p for c in t1], modulus, p)
    return tuple(out + [0] * (k - len(out)))


def _poly_sub(a, b, p: int) -> list[int]:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _poly_trim([(x - y) % p for x, y in zip(a, b)])


# ---------------------------------------------------------------------------
# characters and traces
# ---------------------------------------------------------------------------

def quadratic_character(a: FieldElement) -> int:
    """The quadratic character of a: 0, +1 (nonzero square) or -1."""
    f = a.field
    if f.p == 2:
        raise EvenCharacteristic("quadratic character needs odd characteristic")
    if not a:
        return 0
    v = a ** ((f.order - 1) // 2)
    return 1 if v == f.one else -1


def absolute_trace(a: FieldElement) -> int:
    """Trace down to F_p: sum of a^(p^j) for j = 0..k-1, as a residue."""
    f = a.field
    total = a
    frob = a
    for _ in range(f.k - 1):
        frob = frob ** f.p
        total = total + frob
    assert all(c == 0 for c in total.coeffs[1:]), "trace not in the prime field"
    return total.coeffs[0]


@lru_cache(maxsize=None)
def square_table(field: FieldSpec) -> frozenset:
    """Coefficient tuples of the nonzero squares of a small field."""
    if field.order > MAX_ENUMERATION:
        raise SizeExceeded("field too large for a square table")
    squares = set()
    for coeffs in itertools.product(range(field.p), repeat=field.k):
        if any(coeffs):
            squares.add(_raw_mul(coeffs, coeffs, field.p, field.modulus))
    return frozenset(squares)
