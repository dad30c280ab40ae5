"""JIT-compiled hot paths: batched SHA256 and exhaustive-search enumerators.

The SHA256 here handles exactly one message shape, a 32-byte prefix plus a
little-endian u64 (40 bytes, one compression block).  That shape covers both
seed derivation and the coefficient stream, and processing LANES counters at
a time lets LLVM vectorise the round loops.  Outputs are bit-identical to
hashlib; the test suite cross-checks them exhaustively.

Everything in this module is an internal accelerator.  The public modules
fall back to plain hashlib/python semantics for anything not covered here.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

LANES = 16
MINE_MAX_SOLS = 8

_K = np.array([
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1,
    0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
    0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786,
    0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
    0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
    0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
    0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a,
    0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
    0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2], dtype=np.uint64)

_M32 = np.uint64(0xFFFFFFFF)


def words_from_bytes(data: bytes) -> np.ndarray:
    """32 bytes -> 8 big-endian u32 words (as uint64 for safe numba math)."""
    return np.frombuffer(data, dtype=">u4").astype(np.uint64)


@njit(cache=True)
def _sha40_words(prefix8, value):
    """Digest words of SHA256(prefix || LE64(value)); scalar."""
    w = np.empty(64, dtype=np.uint64)
    for i in range(8):
        w[i] = prefix8[i]
    v = value
    w[8] = (((v & np.uint64(0xFF)) << np.uint64(24))
            | (((v >> np.uint64(8)) & np.uint64(0xFF)) << np.uint64(16))
            | (((v >> np.uint64(16)) & np.uint64(0xFF)) << np.uint64(8))
            | ((v >> np.uint64(24)) & np.uint64(0xFF)))
    w[9] = ((((v >> np.uint64(32)) & np.uint64(0xFF)) << np.uint64(24))
            | (((v >> np.uint64(40)) & np.uint64(0xFF)) << np.uint64(16))
            | (((v >> np.uint64(48)) & np.uint64(0xFF)) << np.uint64(8))
            | ((v >> np.uint64(56)) & np.uint64(0xFF)))
    w[10] = np.uint64(0x80000000)
    for i in range(11, 15):
        w[i] = np.uint64(0)
    w[15] = np.uint64(320)  # 40 bytes = 320 bits
    for i in range(16, 64):
        x = w[i - 15]
        s0 = (((x >> np.uint64(7)) | (x << np.uint64(25)))
              ^ ((x >> np.uint64(18)) | (x << np.uint64(14))) ^ (x >> np.uint64(3))) & _M32
        y = w[i - 2]
        s1 = (((y >> np.uint64(17)) | (y << np.uint64(15)))
              ^ ((y >> np.uint64(19)) | (y << np.uint64(13))) ^ (y >> np.uint64(10))) & _M32
        w[i] = (w[i - 16] + s0 + w[i - 7] + s1) & _M32
    a = np.uint64(0x6a09e667); b = np.uint64(0xbb67ae85)
    c = np.uint64(0x3c6ef372); d = np.uint64(0xa54ff53a)
    e = np.uint64(0x510e527f); f = np.uint64(0x9b05688c)
    g = np.uint64(0x1f83d9ab); h = np.uint64(0x5be0cd19)
    for i in range(64):
        s1 = (((e >> np.uint64(6)) | (e << np.uint64(26)))
              ^ ((e >> np.uint64(11)) | (e << np.uint64(21)))
              ^ ((e >> np.uint64(25)) | (e << np.uint64(7)))) & _M32
        ch = (e & f) ^ ((~e) & g)
        t1 = (h + s1 + ch + _K[i] + w[i]) & _M32
        s0 = (((a >> np.uint64(2)) | (a << np.uint64(30)))
              ^ ((a >> np.uint64(13)) | (a << np.uint64(19)))
              ^ ((a >> np.uint64(22)) | (a << np.uint64(10)))) & _M32
        maj = (a & b) ^ (a & c) ^ (b & c)
        t2 = (s0 + maj) & _M32
        h = g; g = f; f = e; e = (d + t1) & _M32
        d = c; c = b; b = a; a = (t1 + t2) & _M32
    out = np.empty(8, dtype=np.uint64)
    out[0] = (a + np.uint64(0x6a09e667)) & _M32
    out[1] = (b + np.uint64(0xbb67ae85)) & _M32
    out[2] = (c + np.uint64(0x3c6ef372)) & _M32
    out[3] = (d + np.uint64(0xa54ff53a)) & _M32
    out[4] = (e + np.uint64(0x510e527f)) & _M32
    out[5] = (f + np.uint64(0x9b05688c)) & _M32
    out[6] = (g + np.uint64(0x1f83d9ab)) & _M32
    out[7] = (h + np.uint64(0x5be0cd19)) & _M32
    return out


@njit(cache=True)
def _sha40_first_bytes(prefix8, start, count, out):
    """out[i] = first digest byte of SHA256(prefix || LE64(start + i)).

    Runs LANES counters per pass so the round loops vectorise.
    """
    w = np.empty((64, LANES), dtype=np.uint64)
    a = np.empty(LANES, dtype=np.uint64); b = np.empty(LANES, dtype=np.uint64)
    c = np.empty(LANES, dtype=np.uint64); d = np.empty(LANES, dtype=np.uint64)
    e = np.empty(LANES, dtype=np.uint64); f = np.empty(LANES, dtype=np.uint64)
    g = np.empty(LANES, dtype=np.uint64); h = np.empty(LANES, dtype=np.uint64)
    base = 0
    while base < count:
        cnt = count - base
        if cnt > LANES:
            cnt = LANES
        for l in range(LANES):
            v = start + np.uint64(base + l if l < cnt else base)
            w[8, l] = (((v & np.uint64(0xFF)) << np.uint64(24))
                       | (((v >> np.uint64(8)) & np.uint64(0xFF)) << np.uint64(16))
                       | (((v >> np.uint64(16)) & np.uint64(0xFF)) << np.uint64(8))
                       | ((v >> np.uint64(24)) & np.uint64(0xFF)))
            w[9, l] = ((((v >> np.uint64(32)) & np.uint64(0xFF)) << np.uint64(24))
                       | (((v >> np.uint64(40)) & np.uint64(0xFF)) << np.uint64(16))
                       | (((v >> np.uint64(48)) & np.uint64(0xFF)) << np.uint64(8))
                       | ((v >> np.uint64(56)) & np.uint64(0xFF)))
        for i in range(8):
            for l in range(LANES):
                w[i, l] = prefix8[i]
        for l in range(LANES):
            w[10, l] = np.uint64(0x80000000)
            w[11, l] = np.uint64(0); w[12, l] = np.uint64(0)
            w[13, l] = np.uint64(0); w[14, l] = np.uint64(0)
            w[15, l] = np.uint64(320)
        for i in range(16, 64):
            for l in range(LANES):
                x = w[i - 15, l]
                s0 = (((x >> np.uint64(7)) | (x << np.uint64(25)))
                      ^ ((x >> np.uint64(18)) | (x << np.uint64(14)))
                      ^ (x >> np.uint64(3))) & _M32
                y = w[i - 2, l]
                s1 = (((y >> np.uint64(17)) | (y << np.uint64(15)))
                      ^ ((y >> np.uint64(19)) | (y << np.uint64(13)))
                      ^ (y >> np.uint64(10))) & _M32
                w[i, l] = (w[i - 16, l] + s0 + w[i - 7, l] + s1) & _M32
        for l in range(LANES):
            a[l] = np.uint64(0x6a09e667); b[l] = np.uint64(0xbb67ae85)
            c[l] = np.uint64(0x3c6ef372); d[l] = np.uint64(0xa54ff53a)
            e[l] = np.uint64(0x510e527f); f[l] = np.uint64(0x9b05688c)
            g[l] = np.uint64(0x1f83d9ab); h[l] = np.uint64(0x5be0cd19)
        for i in range(64):
            for l in range(LANES):
                ee = e[l]
                s1 = (((ee >> np.uint64(6)) | (ee << np.uint64(26)))
                      ^ ((ee >> np.uint64(11)) | (ee << np.uint64(21)))
                      ^ ((ee >> np.uint64(25)) | (ee << np.uint64(7)))) & _M32
                ch = (ee & f[l]) ^ ((~ee) & g[l])
                t1 = (h[l] + s1 + ch + _K[i] + w[i, l]) & _M32
                aa = a[l]
                s0 = (((aa >> np.uint64(2)) | (aa << np.uint64(30)))
                      ^ ((aa >> np.uint64(13)) | (aa << np.uint64(19)))
                      ^ ((aa >> np.uint64(22)) | (aa << np.uint64(10)))) & _M32
                maj = (aa & b[l]) ^ (aa & c[l]) ^ (b[l] & c[l])
                t2 = (s0 + maj) & _M32
                h[l] = g[l]; g[l] = f[l]; f[l] = e[l]; e[l] = (d[l] + t1) & _M32
                d[l] = c[l]; c[l] = b[l]; b[l] = aa; a[l] = (t1 + t2) & _M32
        for l in range(cnt):
            out[base + l] = np.uint8(((a[l] + np.uint64(0x6a09e667)) & _M32) >> np.uint64(24))
        base += LANES


def prng_first_bytes_fast(seed: bytes, count: int, start: int = 0) -> np.ndarray:
    """Batched equivalent of the per-counter hashlib stream."""
    out = np.empty(count, dtype=np.uint8)
    _sha40_first_bytes(words_from_bytes(seed), np.uint64(start), count, out)
    return out


def derive_seed_words(prev_hash: bytes, nonce: int) -> np.ndarray:
    return _sha40_words(words_from_bytes(prev_hash), np.uint64(nonce))


# -- exhaustive search -------------------------------------------------------
#
# Both enumerators walk assignments in lexicographic order (x_0 outermost),
# maintaining the partially specialised system per prefix depth, and report
# solutions in that order.  The GF(2) variant packs all m <= 64 equations
# into one machine word per coefficient.


@njit(cache=True)
def bf_gf2(qmask, lmask, cmask, m, n, sols, cap):
    """All roots of a GF(2) system given as per-monomial equation bitmasks.

    qmask[t] has bit k set iff equation k has pair-coefficient t; sols
    receives solutions encoded as variable bitmasks (bit j = x_j).  Returns
    the total root count, which may exceed cap (extras are counted, not
    stored).
    """
    lin_stack = np.empty((n + 1, n), dtype=np.uint64)
    c_stack = np.empty(n + 1, dtype=np.uint64)
    for j in range(n):
        lin_stack[0, j] = lmask[j]
    c_stack[0] = cmask
    x = np.zeros(n, dtype=np.uint8)
    nsols = 0
    d = 0
    if n == 1:
        a = qmask[0]; b = lmask[0]; cc = cmask
        if cc == np.uint64(0):
            if nsols < cap:
                sols[nsols] = np.uint64(0)
            nsols += 1
        if cc ^ a ^ b == np.uint64(0):
            if nsols < cap:
                sols[nsols] = np.uint64(1)
            nsols += 1
        return nsols
    while True:
        if d == n - 1:
            rs = d * n - d * (d - 1) // 2
            a = qmask[rs]
            b = lin_stack[d, d]
            cc = c_stack[d]
            base_bits = np.uint64(0)
            for j in range(n - 1):
                if x[j]:
                    base_bits |= np.uint64(1) << np.uint64(j)
            if cc == np.uint64(0):
                if nsols < cap:
                    sols[nsols] = base_bits
                nsols += 1
            if cc ^ a ^ b == np.uint64(0):
                if nsols < cap:
                    sols[nsols] = base_bits | (np.uint64(1) << np.uint64(n - 1))
                nsols += 1
            d -= 1
            while d >= 0 and x[d] == 1:
                d -= 1
            if d < 0:
                return nsols
            x[d] = 1
            continue
        v = x[d]
        rs = d * n - d * (d - 1) // 2
        if v == 0:
            for j in range(d + 1, n):
                lin_stack[d + 1, j] = lin_stack[d, j]
            c_stack[d + 1] = c_stack[d]
        else:
            # x_d := 1 folds a_dj into the x_j coefficient, a_dd + b_d into c
            for j in range(d + 1, n):
                lin_stack[d + 1, j] = lin_stack[d, j] ^ qmask[rs + j - d]
            c_stack[d + 1] = c_stack[d] ^ qmask[rs] ^ lin_stack[d, d]
        d += 1
        x[d] = 0


@njit(cache=True)
def bf_generic(quad, lin, cst, addt, mult, q, m, n, sols, cap):
    """All roots of a GF(q) system via depth-first specialisation.

    quad/lin/cst are the coefficient tables; addt/mult the field tables.
    Solutions land in sols (cap rows) in lexicographic order; the return
    value is the full count.
    """
    lin_stack = np.empty((n + 1, m, n), dtype=np.uint8)
    c_stack = np.empty((n + 1, m), dtype=np.uint8)
    for k in range(m):
        for j in range(n):
            lin_stack[0, k, j] = lin[k, j]
        c_stack[0, k] = cst[k]
    x = np.zeros(n, dtype=np.uint8)
    nsols = 0
    d = 0
    while True:
        if d == n - 1:
            rs = d * n - d * (d - 1) // 2
            for v in range(q):
                ok = True
                for k in range(m):
                    r = addt[addt[mult[mult[quad[k, rs], v], v],
                                  mult[lin_stack[d, k, d], v]],
                             c_stack[d, k]]
                    if r != 0:
                        ok = False
                        break
                if ok:
                    if nsols < cap:
                        for j in range(n - 1):
                            sols[nsols, j] = x[j]
                        sols[nsols, n - 1] = v
                    nsols += 1
            d -= 1
            while d >= 0 and x[d] == q - 1:
                d -= 1
            if d < 0:
                return nsols
            x[d] += 1
            continue
        v = x[d]
        rs = d * n - d * (d - 1) // 2
        for k in range(m):
            for j in range(d + 1, n):
                lin_stack[d + 1, k, j] = addt[lin_stack[d, k, j],
                                              mult[quad[k, rs + j - d], v]]
            c_stack[d + 1, k] = addt[c_stack[d, k],
                                     addt[mult[mult[quad[k, rs], v], v],
                                          mult[lin_stack[d, k, d], v]]]
        d += 1
        x[d] = 0


@njit(cache=True)
def rref_gf2_packed(mat, ncols, pivot_cols):
    """In-place reduced row echelon form of a bit-packed GF(2) matrix.

    mat is (rows, words) uint64 with column c at bit (c & 63) of word
    (c >> 6).  pivot_cols (length >= ncols, int64) receives the pivot
    columns; returns (rank, elimination_ops).
    """
    nrows, nwords = mat.shape
    rank = 0
    ops = 0
    for c in range(ncols):
        w = c >> 6
        b = np.uint64(c & 63)
        pr = -1
        for i in range(rank, nrows):
            if (mat[i, w] >> b) & np.uint64(1):
                pr = i
                break
        if pr < 0:
            continue
        if pr != rank:
            for k in range(nwords):
                t = mat[pr, k]
                mat[pr, k] = mat[rank, k]
                mat[rank, k] = t
        for i in range(nrows):
            if i != rank and ((mat[i, w] >> b) & np.uint64(1)):
                for k in range(nwords):
                    mat[i, k] ^= mat[rank, k]
                ops += 1
        pivot_cols[rank] = c
        rank += 1
        if rank == nrows:
            break
    return rank, ops


@njit(cache=True, parallel=True)
def mine_scan_gf2(prev8, nonce_start, count, m, n, sol_counts, sols, overflow):
    """Scan `count` nonces: derive each seed, expand coefficients, and root
    the GF(2) system.  Per-nonce roots (up to MINE_MAX_SOLS, as variable
    bitmasks) land in disjoint slots, so the parallel scan is deterministic.
    """
    npairs = n * (n + 1) // 2
    per_eq = npairs + n + 1
    total = m * per_eq
    for ii in prange(count):
        nonce = nonce_start + np.uint64(ii)
        seed8 = _sha40_words(prev8, nonce)
        coeff = np.empty(total, dtype=np.uint8)
        _sha40_first_bytes(seed8, np.uint64(0), total, coeff)
        qmask = np.zeros(npairs, dtype=np.uint64)
        lmask = np.zeros(n, dtype=np.uint64)
        cmask = np.uint64(0)
        for k in range(m):
            base = k * per_eq
            bit = np.uint64(1) << np.uint64(k)
            for t in range(npairs):
                if coeff[base + t] & 1:
                    qmask[t] |= bit
            for j in range(n):
                if coeff[base + npairs + j] & 1:
                    lmask[j] |= bit
            if coeff[base + npairs + n] & 1:
                cmask |= bit
        buf = np.empty(MINE_MAX_SOLS, dtype=np.uint64)
        ns = bf_gf2(qmask, lmask, cmask, m, n, buf, MINE_MAX_SOLS)
        stored = ns if ns < MINE_MAX_SOLS else MINE_MAX_SOLS
        sol_counts[ii] = stored
        overflow[ii] = ns > MINE_MAX_SOLS
        for s in range(stored):
            sols[ii, s] = buf[s]
