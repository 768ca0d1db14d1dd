"""Exact arithmetic in GF(p^e) for odd p, with trace map and additive character.

Field elements are plain integers ("codes") in ``[0, q)``.  The code is read
base-p little-endian as the coefficient vector of a polynomial over F_p, so
for prime fields the code is just the residue, and the prime subfield always
occupies codes ``0 .. p-1``.  All arithmetic goes through a :class:`Field`
instance; the integer encoding is stable across runs and embeds directly in
file formats and reports.

Character values are the only non-integers here: ``chi(a) = exp(2*pi*i*Tr(a)/p)``
is returned as a complex double.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache

__all__ = [
    "CapExceeded",
    "Field",
    "make_field",
    "DEFAULT_MODULI",
    "DEFAULT_MAX_Q",
]

DEFAULT_MAX_Q = 4096

# Build full multiplication/inverse tables only for small fields; beyond this
# elements are combined by on-the-fly polynomial arithmetic.
_TABLE_MAX_Q = 512


class CapExceeded(RuntimeError):
    """An enumeration would exceed its configured work cap."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# Monic irreducible moduli for the built-in small orders, little-endian
# coefficient tuples (constant term first).  Prime orders use the trivial
# degree-1 modulus x.
DEFAULT_MODULI: dict[int, tuple[int, ...]] = {
    3: (0, 1),
    5: (0, 1),
    7: (0, 1),
    9: (1, 0, 1),       # x^2 + 1 over F_3
    11: (0, 1),
    13: (0, 1),
    25: (2, 0, 1),      # x^2 + 2 over F_5
    27: (1, 2, 0, 1),   # x^3 + 2x + 1 over F_3
}


def _poly_mod(c: list[int], modulus: tuple[int, ...], p: int) -> list[int]:
    """Reduce c by the monic modulus, working little-endian over F_p."""
    c = list(c)
    deg_m = len(modulus) - 1
    for i in range(len(c) - 1, deg_m - 1, -1):
        lead = c[i] % p
        if lead:
            for j in range(deg_m + 1):
                c[i - deg_m + j] = (c[i - deg_m + j] - lead * modulus[j]) % p
    del c[deg_m:]
    return c


def _poly_mul_mod(a: list[int], b: list[int], modulus: tuple[int, ...], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_mod(out, modulus, p)


def _poly_is_irreducible(modulus: tuple[int, ...], p: int) -> bool:
    """Trial division by all monic polynomials of degree 1..e//2.

    Exhaustive and exact for the degrees this library supports (e <= 4 is the
    documented guarantee; the search stays correct for any e at p^(e//2) cost).
    """
    e = len(modulus) - 1
    if modulus[-1] != 1:
        return False
    if e == 1:
        return True
    for deg in range(1, e // 2 + 1):
        # monic divisor candidates: free coefficients below the leading 1
        for code in range(p**deg):
            div = _decode(code, p, deg) + [1]
            if _poly_divides(div, modulus, p):
                return False
    return True


def _poly_divides(div: list[int], modulus: tuple[int, ...], p: int) -> bool:
    """True when the monic polynomial div divides modulus over F_p."""
    rem = [c % p for c in modulus]
    dd = len(div) - 1
    for i in range(len(rem) - 1, dd - 1, -1):
        lead = rem[i]
        if lead:
            for j in range(dd + 1):
                rem[i - dd + j] = (rem[i - dd + j] - lead * div[j]) % p
    return not any(rem[:dd])


def _decode(code: int, p: int, e: int) -> list[int]:
    coeffs = []
    for _ in range(e):
        code, r = divmod(code, p)
        coeffs.append(r)
    return coeffs


def _encode(coeffs: list[int], p: int) -> int:
    code = 0
    for c in reversed(coeffs):
        code = code * p + (c % p)
    return code


class Field:
    """Arithmetic context for GF(p^e), q = p^e, p an odd prime.

    Immutable after construction; all operations are pure functions of their
    integer arguments, so a single instance can be shared freely.
    """

    def __init__(self, p: int, e: int = 1, modulus: tuple[int, ...] | None = None,
                 max_q: int = DEFAULT_MAX_Q):
        if not is_prime(p) or p == 2:
            raise ValueError(f"p={p} is not an odd prime")
        if e < 1:
            raise ValueError(f"extension degree e={e} must be >= 1")
        q = p**e
        if q > max_q:
            raise CapExceeded(f"q = {p}^{e} = {q} exceeds the enumeration cap {max_q}")
        if modulus is None:
            if e == 1:
                modulus = (0, 1)
            elif q in DEFAULT_MODULI:
                modulus = DEFAULT_MODULI[q]
            else:
                raise ValueError(
                    f"no built-in modulus for q={q}; pass one explicitly")
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != e + 1:
            raise ValueError(
                f"modulus has degree {len(modulus) - 1}, expected {e}")
        if not _poly_is_irreducible(modulus, p):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.e = e
        self.q = q
        self.modulus = modulus
        self._coeffs = [tuple(_decode(c, p, e)) for c in range(q)]
        if e > 1 and q <= _TABLE_MAX_Q:
            self._mul_table: list[list[int]] | None = [
                [self._mul_raw(a, b) for b in range(q)] for a in range(q)
            ]
        else:
            self._mul_table = None
        self._inv_table = [0] + [self._inv_raw(a) for a in range(1, q)]
        self._trace_table = [self._trace_raw(a) for a in range(q)]
        self._char_table = [
            cmath.exp(2j * math.pi * t / p) for t in self._trace_table
        ]

    # -- encoding ----------------------------------------------------------

    def coeffs(self, a: int) -> tuple[int, ...]:
        """Little-endian F_p coefficient vector of the element code."""
        return self._coeffs[a]

    def encode(self, coeffs) -> int:
        return _encode(list(coeffs), self.p)

    def elements(self) -> range:
        return range(self.q)

    def _check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise ValueError(f"element code {a} outside [0, {self.q})")
        return a

    # -- arithmetic --------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        self._check(a)
        self._check(b)
        if self.e == 1:
            return (a + b) % self.p
        ca, cb = self._coeffs[a], self._coeffs[b]
        return _encode([x + y for x, y in zip(ca, cb)], self.p)

    def sub(self, a: int, b: int) -> int:
        self._check(a)
        self._check(b)
        if self.e == 1:
            return (a - b) % self.p
        ca, cb = self._coeffs[a], self._coeffs[b]
        return _encode([x - y for x, y in zip(ca, cb)], self.p)

    def neg(self, a: int) -> int:
        self._check(a)
        if self.e == 1:
            return (-a) % self.p
        return _encode([-x for x in self._coeffs[a]], self.p)

    def mul(self, a: int, b: int) -> int:
        self._check(a)
        self._check(b)
        if self.e == 1:
            return (a * b) % self.p
        if self._mul_table is not None:
            return self._mul_table[a][b]
        return self._mul_raw(a, b)

    def _mul_raw(self, a: int, b: int) -> int:
        prod = _poly_mul_mod(list(self._coeffs[a]), list(self._coeffs[b]),
                             self.modulus, self.p)
        return _encode(prod, self.p)

    def inv(self, a: int) -> int:
        self._check(a)
        if a == 0:
            raise ZeroDivisionError("inverse of zero in GF(q)")
        return self._inv_table[a]

    def _inv_raw(self, a: int) -> int:
        # a^(q-2); q is tiny so square-and-multiply is plenty
        return self._pow_raw(a, self.q - 2)

    def pow(self, a: int, n: int) -> int:
        self._check(a)
        if n < 0:
            return self._pow_raw(self.inv(a), -n)
        return self._pow_raw(a, n)

    def _pow_raw(self, a: int, n: int) -> int:
        if self.e == 1:
            return pow(a, n, self.p)
        out, base = 1, a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    # -- trace and additive character ---------------------------------------

    def trace(self, a: int) -> int:
        """Tr(a) = sum of a^(p^i), i < e; lands in the prime subfield [0, p)."""
        return self._trace_table[self._check(a)]

    def _trace_raw(self, a: int) -> int:
        acc, frob = 0, a
        for _ in range(self.e):
            acc = self.add(acc, frob) if self.e > 1 else (acc + frob) % self.p
            frob = self._pow_raw(frob, self.p)
        # trace is fixed by Frobenius, hence a constant polynomial
        coeffs = self._coeffs[acc]
        assert all(c == 0 for c in coeffs[1:]), "trace left the prime subfield"
        return coeffs[0]

    def char(self, a: int) -> complex:
        """Additive character chi(a) = exp(2*pi*i*Tr(a)/p)."""
        return self._char_table[self._check(a)]

    def __repr__(self) -> str:
        return f"Field(p={self.p}, e={self.e}, q={self.q})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, Field)
                and (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus))

    def __hash__(self) -> int:
        return hash((self.p, self.e, self.modulus))


def make_field(p: int, e: int = 1, modulus=None, max_q: int = DEFAULT_MAX_Q) -> Field:
    """Construct a Field, failing loudly on bad p or a reducible modulus."""
    return Field(p, e, tuple(modulus) if modulus is not None else None, max_q=max_q)


@lru_cache(maxsize=None)
def field_for_order(q: int, max_q: int = DEFAULT_MAX_Q) -> Field:
    """Field of order q (q an odd prime power), using the built-in moduli."""
    if q < 3:
        raise ValueError(f"q={q} is not an odd prime power > 2")
    p = None
    for f in range(3, q + 1, 2):
        if q % f == 0:
            p = f
            break
    if p is None or not is_prime(p):
        raise ValueError(f"q={q} is not an odd prime power")
    e = 0
    n = q
    while n > 1:
        if n % p:
            raise ValueError(f"q={q} is not a power of the prime {p}")
        n //= p
        e += 1
    return Field(p, e, max_q=max_q)
