"""Dense linear algebra over a FieldSpec: the matrix sizes here are small
(tens of rows), so everything is plain python over the field's tables."""

from __future__ import annotations

import numpy as np

from .fields import FieldSpec


def matmul(spec: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ra, ca = a.shape
    rb, cb = b.shape
    if ca != rb:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    mul, add = spec.mul, spec.add
    out = np.zeros((ra, cb), dtype=np.uint8)
    for i in range(ra):
        for k in range(ca):
            aik = int(a[i, k])
            if aik == 0:
                continue
            for j in range(cb):
                bkj = int(b[k, j])
                if bkj:
                    out[i, j] = add(int(out[i, j]), mul(aik, bkj))
    return out


def matvec(spec: FieldSpec, a: np.ndarray, v) -> np.ndarray:
    mul, add = spec.mul, spec.add
    r, c = a.shape
    out = np.zeros(r, dtype=np.uint8)
    for i in range(r):
        acc = 0
        for j in range(c):
            aij = int(a[i, j])
            if aij and v[j]:
                acc = add(acc, mul(aij, int(v[j])))
        out[i] = acc
    return out


def vec_add(spec: FieldSpec, u, v) -> np.ndarray:
    return np.array([spec.add(int(a), int(b)) for a, b in zip(u, v)], dtype=np.uint8)


def vec_sub(spec: FieldSpec, u, v) -> np.ndarray:
    return np.array([spec.sub(int(a), int(b)) for a, b in zip(u, v)], dtype=np.uint8)


def rref(spec: FieldSpec, mat: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns (matrix copy, pivot columns)."""
    m = mat.astype(np.uint8).copy()
    rows, cols = m.shape
    mul, add, sub, inv = spec.mul, spec.add, spec.sub, spec.inv
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        pr = -1
        for i in range(r, rows):
            if m[i, c]:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            m[[pr, r]] = m[[r, pr]]
        piv_inv = inv(int(m[r, c]))
        for j in range(c, cols):
            m[r, j] = mul(piv_inv, int(m[r, j]))
        for i in range(rows):
            if i != r and m[i, c]:
                f = int(m[i, c])
                for j in range(c, cols):
                    m[i, j] = sub(int(m[i, j]), mul(f, int(m[r, j])))
        pivots.append(c)
        r += 1
    return m, pivots


def solve(spec: FieldSpec, a: np.ndarray, b) -> np.ndarray | None:
    """Unique solution of a square system, or None when singular."""
    n = a.shape[0]
    aug = np.zeros((n, n + 1), dtype=np.uint8)
    aug[:, :n] = a
    aug[:, n] = b
    red, pivots = rref(spec, aug)
    if pivots != list(range(n)):
        return None
    return red[:n, n].copy()


def invert(spec: FieldSpec, a: np.ndarray) -> np.ndarray | None:
    """Matrix inverse, or None when singular."""
    n = a.shape[0]
    aug = np.zeros((n, 2 * n), dtype=np.uint8)
    aug[:, :n] = a
    for i in range(n):
        aug[i, n + i] = 1
    red, pivots = rref(spec, aug)
    if len(pivots) < n or pivots[:n] != list(range(n)):
        return None
    return red[:, n:].copy()


def is_invertible(spec: FieldSpec, a: np.ndarray) -> bool:
    return invert(spec, a) is not None


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.uint8)
