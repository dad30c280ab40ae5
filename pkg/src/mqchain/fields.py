"""Arithmetic over the small finite fields used by the puzzle and signature layers.

Supports prime fields GF(p) for p <= 256 and binary extension fields
GF(2^k) for k <= 8.  Elements are plain ints in [0, q); every element fits
in one byte, which is also the canonical wire encoding.

Multiplication and inversion are table-driven for q <= 32 and computed
directly for GF(256).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

FieldElement = int

# Reduction polynomials (bitmask form, degree bit included): the
# lexicographically least irreducible polynomial of each degree, so that
# puzzle generation is bit-for-bit reproducible.
DEFAULT_REDUCTION = {
    2: 0b111,        # x^2 + x + 1
    3: 0b1011,       # x^3 + x + 1
    4: 0b10011,      # x^4 + x + 1
    5: 0b100101,     # x^5 + x^2 + 1
    6: 0b1000011,    # x^6 + x + 1
    7: 0b10000011,   # x^7 + x + 1
    8: 0b100011011,  # x^8 + x^4 + x^3 + x + 1
}

_TABLE_LIMIT = 32  # mul/inv lookup tables are built for q <= this


class FieldError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _gf2_polymul(a: int, b: int) -> int:
    """Carry-less product of two GF(2) polynomials in bitmask form."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def _gf2_polymod(a: int, mod: int) -> int:
    md = mod.bit_length() - 1
    while a.bit_length() - 1 >= md:
        a ^= mod << (a.bit_length() - 1 - md)
    return a


def _gf2_irreducible(poly: int, degree: int) -> bool:
    """Exhaustive irreducibility test, fine for degree <= 8."""
    if poly.bit_length() - 1 != degree:
        return False
    # trial division by every polynomial of degree 1 .. degree // 2
    for d in range(1, degree // 2 + 1):
        for cand in range(1 << d, 1 << (d + 1)):
            if _gf2_polymod(poly, cand) == 0:
                return False
    return True


class FieldSpec:
    """Immutable description of GF(q) plus its arithmetic.

    ``kind`` is "prime" or "binary"; binary fields carry the reduction
    polynomial and extension degree.  All operations are pure functions of
    int inputs, so a spec can be shared freely across threads.
    """

    __slots__ = ("q", "kind", "degree", "reduction", "_mul_table", "_inv_table",
                 "_np_tables")

    def __init__(self, q: int, kind: str, reduction: int = 0, degree: int = 0):
        if not 2 <= q <= 256:
            raise FieldError(f"field order {q} out of supported range [2, 256]")
        if kind == "prime":
            if not _is_prime(q):
                raise FieldError(f"{q} is not prime")
        elif kind == "binary":
            if q != 1 << degree or degree < 2:
                raise FieldError(f"binary field needs q = 2^degree >= 4, got q={q} degree={degree}")
            if not _gf2_irreducible(reduction, degree):
                raise FieldError(f"reduction polynomial {reduction:#x} is not "
                                 f"irreducible of degree {degree}")
        else:
            raise FieldError(f"unknown field kind {kind!r}")
        self.q = q
        self.kind = kind
        self.degree = degree
        self.reduction = reduction
        self._np_tables = None
        if q <= _TABLE_LIMIT:
            mul = [[self._mul_direct(a, b) for b in range(q)] for a in range(q)]
            inv = [0] * q
            for a in range(1, q):
                for b in range(1, q):
                    if mul[a][b] == 1:
                        inv[a] = b
                        break
            self._mul_table = mul
            self._inv_table = inv
        else:
            self._mul_table = None
            self._inv_table = None

    def __repr__(self):
        return f"FieldSpec(q={self.q}, kind={self.kind!r})"

    def __eq__(self, other):
        return (isinstance(other, FieldSpec) and self.q == other.q
                and self.kind == other.kind and self.reduction == other.reduction)

    def __hash__(self):
        return hash((self.q, self.kind, self.reduction))

    # -- arithmetic ---------------------------------------------------------

    def _mul_direct(self, a: int, b: int) -> int:
        if self.kind == "prime":
            return (a * b) % self.q
        return _gf2_polymod(_gf2_polymul(a, b), self.reduction)

    def add(self, a: int, b: int) -> int:
        if self.kind == "prime":
            return (a + b) % self.q
        return a ^ b

    def sub(self, a: int, b: int) -> int:
        if self.kind == "prime":
            return (a - b) % self.q
        return a ^ b

    def neg(self, a: int) -> int:
        if self.kind == "prime":
            return (-a) % self.q
        return a

    def mul(self, a: int, b: int) -> int:
        if self._mul_table is not None:
            return self._mul_table[a][b]
        return self._mul_direct(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        if self._inv_table is not None:
            return self._inv_table[a]
        # a^(q-2) = a^-1 in any field of order q
        return self.pow(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def elem_from_byte(self, b: int) -> int:
        """Map one byte to a field element: b mod q.

        For binary fields q = 2^k this keeps the low k bits.  For prime q
        the reduction is slightly biased toward small residues; that bias
        is acceptable for puzzle coefficients and is part of the fixed,
        bit-exact derivation.
        """
        return b % self.q

    def elements(self):
        return range(self.q)

    # -- bulk tables for vectorised code ------------------------------------

    def numpy_tables(self) -> tuple[np.ndarray, np.ndarray]:
        """(add, mul) tables as q x q uint8 arrays, built lazily."""
        if self._np_tables is None:
            q = self.q
            add = np.empty((q, q), dtype=np.uint8)
            mul = np.empty((q, q), dtype=np.uint8)
            for a in range(q):
                for b in range(q):
                    add[a, b] = self.add(a, b)
                    mul[a, b] = self.mul(a, b)
            self._np_tables = (add, mul)
        return self._np_tables


@lru_cache(maxsize=None)
def field(q: int) -> FieldSpec:
    """FieldSpec for order q: prime fields directly, powers of two via the
    fixed reduction polynomials.  Other orders are unsupported."""
    if _is_prime(q):
        return FieldSpec(q, "prime")
    if q & (q - 1) == 0 and q >= 4:
        degree = q.bit_length() - 1
        if degree in DEFAULT_REDUCTION:
            return FieldSpec(q, "binary", DEFAULT_REDUCTION[degree], degree)
    raise FieldError(f"no supported field of order {q}")


def encode_elements(values, spec: FieldSpec) -> bytes:
    """Canonical one-byte-per-element encoding; rejects out-of-range values."""
    out = bytearray(len(values))
    for i, v in enumerate(values):
        if not 0 <= v < spec.q:
            raise FieldError(f"value {v} not in GF({spec.q})")
        out[i] = v
    return bytes(out)


def decode_elements(data: bytes, spec: FieldSpec) -> tuple[int, ...]:
    vals = tuple(data)
    for v in vals:
        if v >= spec.q:
            raise FieldError(f"byte {v} is not a canonical GF({spec.q}) element")
    return vals
