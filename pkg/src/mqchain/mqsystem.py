"""The puzzle object: random quadratic systems derived deterministically from a seed.

A system of m quadratic equations in n variables over GF(q),

    sum_{i<=j} a_ij x_i x_j + sum_i b_i x_i + c = 0      (one per equation)

is filled coefficient-by-coefficient from a hash-counter PRNG, so any two
parties derive bit-identical systems from the same (seed, q, m, n).

PRNG construction: element k of the stream is the first byte of
SHA256(seed || LE64(k)) reduced into GF(q).  The coefficient order is fixed:
per equation, quadratic coefficients in lexicographic (i, j) with i <= j,
then linear coefficients, then the constant.  A system consumes exactly
m * (n(n+1)/2 + n + 1) stream elements.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass

import numpy as np

from .fields import FieldSpec, field

SEED_BYTES = 32

_LE64 = struct.Struct("<Q")


class DimensionError(ValueError):
    pass


def derive_seed(prev_block_hash: bytes, nonce: int) -> bytes:
    """32-byte seed = SHA256(prev_block_hash || LE64(nonce)).

    ``prev_block_hash`` is the 32-byte double-SHA256 of the previous header.
    """
    if len(prev_block_hash) != SEED_BYTES:
        raise ValueError("previous block hash must be 32 bytes")
    return hashlib.sha256(prev_block_hash + _LE64.pack(nonce)).digest()


def prng_element(seed: bytes, counter: int, spec: FieldSpec) -> int:
    """Position-addressable field element: counter k -> element of GF(q)."""
    byte = hashlib.sha256(seed + _LE64.pack(counter)).digest()[0]
    return spec.elem_from_byte(byte)


def prng_bytes(seed: bytes, count: int, start: int = 0) -> bytes:
    """First bytes of SHA256(seed || LE64(k)) for k = start .. start+count-1."""
    base = hashlib.sha256(seed)
    pack = _LE64.pack
    out = bytearray(count)
    for i in range(count):
        h = base.copy()
        h.update(pack(start + i))
        out[i] = h.digest()[0]
    return bytes(out)


def coefficient_count(m: int, n: int) -> int:
    return m * (n * (n + 1) // 2 + n + 1)


def pair_index(n: int):
    """Pairs (i, j), i <= j, in the fixed lexicographic coefficient order."""
    return [(i, j) for i in range(n) for j in range(i, n)]


@dataclass(frozen=True)
class MQSystem:
    """m quadratic equations in n variables over GF(q), immutable.

    quad[k] holds the upper-triangular coefficients of equation k in
    lexicographic (i, j) order, lin[k] the linear coefficients, const[k]
    the constant term.
    """

    spec: FieldSpec
    m: int
    n: int
    quad: np.ndarray   # (m, n(n+1)/2) uint8
    lin: np.ndarray    # (m, n) uint8
    const: np.ndarray  # (m,) uint8

    def __post_init__(self):
        npairs = self.n * (self.n + 1) // 2
        if self.quad.shape != (self.m, npairs):
            raise DimensionError("quadratic coefficient table has wrong shape")
        if self.lin.shape != (self.m, self.n):
            raise DimensionError("linear coefficient table has wrong shape")
        if self.const.shape != (self.m,):
            raise DimensionError("constant table has wrong shape")
        if (int(self.quad.max(initial=0)) >= self.spec.q
                or int(self.lin.max(initial=0)) >= self.spec.q
                or int(self.const.max(initial=0)) >= self.spec.q):
            raise ValueError(f"coefficient out of range for GF({self.spec.q})")

    def __eq__(self, other):
        return (isinstance(other, MQSystem)
                and self.spec == other.spec and self.m == other.m and self.n == other.n
                and np.array_equal(self.quad, other.quad)
                and np.array_equal(self.lin, other.lin)
                and np.array_equal(self.const, other.const))


def generate_system(seed: bytes, spec: FieldSpec, m: int, n: int,
                    prng=None) -> MQSystem:
    """Derive the system for (seed, q, m, n); pure and deterministic.

    ``prng`` may override the element source (same signature as
    prng_element); used by tests to count stream consumption.
    """
    if m < 1 or n < 1:
        raise DimensionError("need m >= 1 and n >= 1")
    npairs = n * (n + 1) // 2
    if prng is None:
        raw = prng_bytes(seed, coefficient_count(m, n))
        stream = iter(spec.elem_from_byte(b) for b in raw)
        nxt = lambda: next(stream)
    else:
        counter = iter(range(coefficient_count(m, n)))
        nxt = lambda: prng(seed, next(counter), spec)
    quad = np.empty((m, npairs), dtype=np.uint8)
    lin = np.empty((m, n), dtype=np.uint8)
    const = np.empty(m, dtype=np.uint8)
    for k in range(m):
        for t in range(npairs):
            quad[k, t] = nxt()
        for i in range(n):
            lin[k, i] = nxt()
        const[k] = nxt()
    return MQSystem(spec, m, n, quad, lin, const)


def evaluate(system: MQSystem, x) -> tuple[int, ...]:
    """Residual vector (f_1(x), ..., f_m(x))."""
    n, m, spec = system.n, system.m, system.spec
    if len(x) != n:
        raise DimensionError(f"expected {n} values, got {len(x)}")
    for v in x:
        if not 0 <= v < spec.q:
            raise ValueError(f"value {v} not in GF({spec.q})")
    mul, add = spec.mul, spec.add
    pairs = pair_index(n)
    # monomial values are shared by all equations
    pv = [mul(x[i], x[j]) for i, j in pairs]
    out = []
    for k in range(m):
        acc = int(system.const[k])
        qrow = system.quad[k]
        lrow = system.lin[k]
        for t, v in enumerate(pv):
            c = int(qrow[t])
            if c and v:
                acc = add(acc, mul(c, v))
        for i in range(n):
            c = int(lrow[i])
            if c and x[i]:
                acc = add(acc, mul(c, x[i]))
        out.append(acc)
    return tuple(out)


def is_solution(system: MQSystem, x) -> bool:
    return all(r == 0 for r in evaluate(system, x))


# -- serialization -----------------------------------------------------------

_HDR = struct.Struct("<HHH")


def system_to_bytes(system: MQSystem) -> bytes:
    """Header (q, m, n as LE u16) followed by coefficients in generation order."""
    parts = [_HDR.pack(system.spec.q, system.m, system.n)]
    for k in range(system.m):
        parts.append(system.quad[k].tobytes())
        parts.append(system.lin[k].tobytes())
        parts.append(bytes([int(system.const[k])]))
    return b"".join(parts)


def system_from_bytes(data: bytes) -> MQSystem:
    q, m, n = _HDR.unpack_from(data, 0)
    spec = field(q)
    npairs = n * (n + 1) // 2
    need = _HDR.size + m * (npairs + n + 1)
    if len(data) != need:
        raise ValueError(f"system blob has {len(data)} bytes, expected {need}")
    quad = np.empty((m, npairs), dtype=np.uint8)
    lin = np.empty((m, n), dtype=np.uint8)
    const = np.empty(m, dtype=np.uint8)
    off = _HDR.size
    for k in range(m):
        quad[k] = np.frombuffer(data, dtype=np.uint8, count=npairs, offset=off)
        off += npairs
        lin[k] = np.frombuffer(data, dtype=np.uint8, count=n, offset=off)
        off += n
        const[k] = data[off]
        off += 1
    return MQSystem(spec, m, n, quad, lin, const)
