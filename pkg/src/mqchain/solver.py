"""Root-finding for random quadratic systems, plus cost estimators.

Two solver backends share one contract (identical solution sets, reported in
lexicographic order of the canonical byte encodings):

* solve_bruteforce: exhaustive enumeration of GF(q)^n, the reference oracle.
* solve_xl: extended linearization.  Each equation is multiplied by every
  monomial of degree <= D-2, the result is linearized over all monomials of
  degree <= D and row-reduced, univariate constraints are root-enumerated,
  and partial assignments are propagated by re-solving the specialized
  system.  Monomial exponents are reduced via x^q = x, i.e. the system is
  solved in the ring of functions on GF(q)^n (for q = 2 this is the usual
  appending of the field equations x_i^2 = x_i).  Square systems over
  larger fields rarely yield univariate rows at desk-scale degrees; when a
  row reduction produces none, the solver branches exhaustively on the last
  unassigned variable (disable with branch_on_stuck=False to get the
  degree-too-low signal instead).

The estimators mirror the standard closed forms for the three algebraic
attack families (F4, hybrid F5, XL) with all O(1) constants taken as 1,
evaluated in exact big-integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from . import _kernels
from .fields import FieldSpec
from .mqsystem import MQSystem, is_solution, pair_index


class BudgetExceededError(RuntimeError):
    pass


class DegreeTooLowError(RuntimeError):
    """Raised when XL produced no univariate constraint and branching is off."""


@dataclass(frozen=True)
class SolveBudget:
    max_candidates: int = 1 << 24
    max_matrix_cells: int = 1 << 24

    def __post_init__(self):
        if self.max_candidates <= 0 or self.max_matrix_cells <= 0:
            raise ValueError("budget limits must be positive")


@dataclass
class SolveReport:
    solutions: list[tuple[int, ...]]
    complete: bool
    work: int
    peak_cells: int = 0


def _check_soundness(system: MQSystem, solutions) -> None:
    for x in solutions:
        if not is_solution(system, x):
            raise AssertionError(f"solver returned a non-solution {x}")


# -- brute force -------------------------------------------------------------

def solve_bruteforce(system: MQSystem, budget: SolveBudget | None = None) -> SolveReport:
    """Enumerate all of GF(q)^n in lexicographic order; complete by construction."""
    budget = budget or SolveBudget()
    q, m, n = system.spec.q, system.m, system.n
    total = q ** n
    if total > budget.max_candidates:
        raise BudgetExceededError(
            f"q^n = {total} exceeds the candidate budget {budget.max_candidates}")
    if q == 2 and m <= 64:
        sols = _bruteforce_gf2(system, total)
    else:
        sols = _bruteforce_generic(system, total)
    report = SolveReport(sols, complete=True, work=total,
                         peak_cells=(system.n + 1) * system.m * system.n)
    _check_soundness(system, report.solutions)
    return report


def _bruteforce_gf2(system: MQSystem, total: int) -> list[tuple[int, ...]]:
    m, n = system.m, system.n
    npairs = n * (n + 1) // 2
    qmask = np.zeros(npairs, dtype=np.uint64)
    lmask = np.zeros(n, dtype=np.uint64)
    cmask = np.uint64(0)
    for k in range(m):
        bit = np.uint64(1) << np.uint64(k)
        for t in range(npairs):
            if system.quad[k, t]:
                qmask[t] |= bit
        for j in range(n):
            if system.lin[k, j]:
                lmask[j] |= bit
        if system.const[k]:
            cmask |= bit
    cap = min(total, 4096)
    while True:
        buf = np.empty(cap, dtype=np.uint64)
        ns = _kernels.bf_gf2(qmask, lmask, cmask, m, n, buf, cap)
        if ns <= cap:
            break
        cap = ns
    return [tuple((int(b) >> j) & 1 for j in range(n)) for b in buf[:ns]]


def _bruteforce_generic(system: MQSystem, total: int) -> list[tuple[int, ...]]:
    spec = system.spec
    addt, mult = spec.numpy_tables()
    cap = min(total, 4096)
    while True:
        buf = np.empty((cap, system.n), dtype=np.uint8)
        ns = _kernels.bf_generic(system.quad, system.lin, system.const,
                                 addt, mult, spec.q, system.m, system.n, buf, cap)
        if ns <= cap:
            break
        cap = ns
    return [tuple(int(v) for v in buf[s]) for s in range(ns)]


# -- extended linearization ---------------------------------------------------

def _reduce_exp(e: int, q: int) -> int:
    # x^q = x on GF(q): exponents collapse into 0 or 1..q-1
    if e < q:
        return e
    return ((e - 1) % (q - 1)) + 1


def _mono_mul(a: tuple, b: tuple, q: int) -> tuple:
    return tuple(_reduce_exp(x + y, q) for x, y in zip(a, b))


def _monomials_upto(n: int, d: int, q: int) -> list[tuple]:
    """Reduced exponent tuples of total degree <= d, per-variable degree < q."""
    emax = min(d, q - 1)
    out = []

    def rec(prefix, remaining, budget_deg):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for e in range(min(emax, budget_deg) + 1):
            prefix.append(e)
            rec(prefix, remaining - 1, budget_deg - e)
            prefix.pop()

    rec([], n, d)
    return out


def _system_as_dicts(system: MQSystem) -> list[dict]:
    q, n = system.spec.q, system.n
    add = system.spec.add
    eqs = []
    pairs = pair_index(n)
    for k in range(system.m):
        eq: dict[tuple, int] = {}
        for t, (i, j) in enumerate(pairs):
            c = int(system.quad[k, t])
            if c:
                e = [0] * n
                e[i] += 1
                e[j] += 1
                e[i] = _reduce_exp(e[i], q) if i == j else e[i]
                key = tuple(e)
                eq[key] = add(eq.get(key, 0), c)
        for i in range(n):
            c = int(system.lin[k, i])
            if c:
                e = [0] * n
                e[i] = 1
                key = tuple(e)
                eq[key] = add(eq.get(key, 0), c)
        c = int(system.const[k])
        zero = tuple([0] * n)
        if c:
            eq[zero] = add(eq.get(zero, 0), c)
        eqs.append({k2: v for k2, v in eq.items() if v})
    return eqs


def _specialize(eqs: list[dict], var: int, value: int, spec: FieldSpec) -> list[dict]:
    """Substitute x_var = value and drop the variable (reindexing the rest)."""
    out = []
    for eq in eqs:
        ne: dict[tuple, int] = {}
        for exps, c in eq.items():
            e = exps[var]
            if e:
                c = spec.mul(c, spec.pow(value, e))
                if c == 0:
                    continue
            key = exps[:var] + exps[var + 1:]
            acc = spec.add(ne.get(key, 0), c)
            if acc:
                ne[key] = acc
            elif key in ne:
                del ne[key]
        out.append(ne)
    return out


class _Tracker:
    def __init__(self, budget: SolveBudget):
        self.budget = budget
        self.work = 0
        self.candidates = 0
        self.peak_cells = 0

    def charge_candidates(self, k: int):
        self.candidates += k
        if self.candidates > self.budget.max_candidates:
            raise BudgetExceededError("candidate budget exhausted during branching")

    def charge_matrix(self, cells: int):
        self.peak_cells = max(self.peak_cells, cells)
        if cells > self.budget.max_matrix_cells:
            raise BudgetExceededError(f"linearization matrix of {cells} cells "
                                      f"exceeds budget {self.budget.max_matrix_cells}")


def _rref_rows(eq_rows: list[dict], columns: list[tuple], spec: FieldSpec,
               tracker: _Tracker) -> list[list[tuple[int, int]]]:
    """Row-reduce; returns nonzero rows as (column_index, coeff) supports."""
    col_of = {mono: i for i, mono in enumerate(columns)}
    ncols = len(columns)
    nrows = len(eq_rows)
    tracker.charge_matrix(nrows * ncols)
    if spec.q == 2:
        words = (ncols + 63) // 64
        mat = np.zeros((nrows, words), dtype=np.uint64)
        for r, eq in enumerate(eq_rows):
            for mono, c in eq.items():
                col = col_of[mono]
                mat[r, col >> 6] ^= np.uint64(1) << np.uint64(col & 63)
        piv = np.empty(min(nrows, ncols), dtype=np.int64)
        rank, ops = _kernels.rref_gf2_packed(mat, ncols, piv)
        tracker.work += int(ops)
        out = []
        for r in range(rank):
            sup = []
            for w in range(words):
                word = int(mat[r, w])
                while word:
                    b = (word & -word).bit_length() - 1
                    sup.append((w * 64 + b, 1))
                    word &= word - 1
            out.append(sorted(sup))
        return out
    if spec.kind == "binary":
        return _rref_bitsliced(eq_rows, col_of, ncols, spec, tracker)
    return _rref_prime(eq_rows, col_of, ncols, spec, tracker)


def _rref_bitsliced(eq_rows, col_of, ncols, spec: FieldSpec, tracker) -> list:
    """GF(2^k) row reduction on bit-plane-packed rows (one plane per bit)."""
    k = spec.degree
    words = (ncols + 63) // 64
    mat = np.zeros((len(eq_rows), k, words), dtype=np.uint64)
    for r, eq in enumerate(eq_rows):
        for mono, c in eq.items():
            col = col_of[mono]
            for p in range(k):
                if (c >> p) & 1:
                    mat[r, p, col >> 6] ^= np.uint64(1) << np.uint64(col & 63)
    # mulmap[c, r, s] = bit r of (c * x^s): scaling a row by c XORs plane s
    # into output plane r wherever this is set
    mulmap = np.zeros((spec.q, k, k), dtype=np.uint8)
    for c in range(spec.q):
        for s in range(k):
            prod = spec.mul(c, 1 << s)
            for r in range(k):
                mulmap[c, r, s] = (prod >> r) & 1
    invt = np.zeros(spec.q, dtype=np.uint8)
    for c in range(1, spec.q):
        invt[c] = spec.inv(c)
    piv = np.empty(min(len(eq_rows), ncols), dtype=np.int64)
    rank, ops = _kernels.rref_gf2k_packed(mat, ncols, k, mulmap, invt, piv)
    tracker.work += int(ops)
    out = []
    for r in range(rank):
        sup = []
        for w in range(words):
            mask = 0
            for p in range(k):
                mask |= int(mat[r, p, w])
            while mask:
                b = (mask & -mask).bit_length() - 1
                col = w * 64 + b
                coeff = 0
                for p in range(k):
                    coeff |= ((int(mat[r, p, w]) >> b) & 1) << p
                sup.append((col, coeff))
                mask &= mask - 1
        out.append(sup)
    return out


def _rref_prime(eq_rows, col_of, ncols, spec: FieldSpec, tracker) -> list:
    p = spec.q
    mat = np.zeros((len(eq_rows), ncols), dtype=np.int64)
    for r, eq in enumerate(eq_rows):
        for mono, c in eq.items():
            mat[r, col_of[mono]] = c
    rank = 0
    for c in range(ncols):
        nz = np.nonzero(mat[rank:, c])[0]
        if nz.size == 0:
            continue
        pr = rank + int(nz[0])
        if pr != rank:
            mat[[pr, rank]] = mat[[rank, pr]]
        mat[rank] = (mat[rank] * pow(int(mat[rank, c]), p - 2, p)) % p
        others = np.nonzero(mat[:, c])[0]
        for i in others:
            if i != rank:
                mat[i] = (mat[i] - int(mat[i, c]) * mat[rank]) % p
                tracker.work += 1
        rank += 1
        if rank == mat.shape[0]:
            break
    out = []
    for r in range(rank):
        nz = np.nonzero(mat[r])[0]
        out.append([(int(c), int(mat[r, c])) for c in nz])
    return out


def _univariate_roots(poly: dict[int, int], spec: FieldSpec) -> list[int]:
    roots = []
    for v in range(spec.q):
        acc = 0
        for e, c in poly.items():
            acc = spec.add(acc, spec.mul(c, spec.pow(v, e)))
        if acc == 0:
            roots.append(v)
    return roots


def _xl_level(eqs: list[dict], n: int, degree: int, spec: FieldSpec,
              tracker: _Tracker, branch: bool) -> list[tuple[int, ...]]:
    q = spec.q
    eqs = [e for e in eqs if e]
    zero = tuple([0] * n) if n else ()
    for eq in eqs:
        if list(eq.keys()) == [zero]:
            return []  # a nonzero constant equation: inconsistent
    if n == 0:
        return [()]
    if n == 1:
        roots = set(range(q))
        for eq in eqs:
            poly = {exps[0]: c for exps, c in eq.items()}
            roots &= set(_univariate_roots(poly, spec))
        tracker.charge_candidates(q)
        return sorted((r,) for r in roots)
    if not eqs:
        # no constraints left: every assignment works
        tracker.charge_candidates(q ** n)
        return sorted(_tuple_space(n, q))

    multipliers = _monomials_upto(n, degree - 2, q)
    columns = _monomials_upto(n, degree, q)
    columns.sort(key=lambda e: (-sum(e), e))
    rows = []
    for eq in eqs:
        for u in multipliers:
            row: dict[tuple, int] = {}
            for mono, c in eq.items():
                key = _mono_mul(u, mono, q)
                acc = spec.add(row.get(key, 0), c)
                if acc:
                    row[key] = acc
                elif key in row:
                    del row[key]
            if row:
                rows.append(row)
    reduced = _rref_rows(rows, columns, spec, tracker)

    # look for rows supported on powers of a single variable (plus constant)
    by_var: dict[int, list[dict[int, int]]] = {}
    for sup in reduced:
        if len(sup) == 1 and sum(columns[sup[0][0]]) == 0:
            return []  # reduction exposed a nonzero constant: inconsistent
        var = None
        poly: dict[int, int] = {}
        ok = True
        for col, coeff in sup:
            mono = columns[col]
            deg = sum(mono)
            if deg == 0:
                poly[0] = coeff
                continue
            nz = [i for i, e in enumerate(mono) if e]
            if len(nz) > 1:
                ok = False
                break
            if var is None:
                var = nz[0]
            elif var != nz[0]:
                ok = False
                break
            poly[mono[var]] = coeff
        if ok and var is not None:
            by_var.setdefault(var, []).append(poly)
    if by_var:
        best_var, best_roots = None, None
        for var, polys in sorted(by_var.items()):
            roots = set(range(q))
            for poly in polys:
                roots &= set(_univariate_roots(poly, spec))
            if best_roots is None or len(roots) < len(best_roots):
                best_var, best_roots = var, roots
        branch_var, values = best_var, sorted(best_roots)
    elif branch:
        branch_var, values = n - 1, list(range(q))
    else:
        raise DegreeTooLowError(
            f"no univariate constraint at degree {degree} with {n} variables")

    solutions = []
    tracker.charge_candidates(len(values))
    for value in values:
        sub = _specialize(eqs, branch_var, value, spec)
        for tail in _xl_level(sub, n - 1, degree, spec, tracker, branch):
            solutions.append(tail[:branch_var] + (value,) + tail[branch_var:])
    solutions.sort()
    return solutions


def _tuple_space(n: int, q: int):
    if n == 0:
        yield ()
        return
    for v in range(q):
        for rest in _tuple_space(n - 1, q):
            yield (v,) + rest


def solve_xl(system: MQSystem, degree: int, budget: SolveBudget | None = None,
             branch_on_stuck: bool = True) -> SolveReport:
    """Solve by extended linearization at the given operating degree."""
    if degree < 2:
        raise ValueError("XL degree must be at least 2")
    budget = budget or SolveBudget()
    tracker = _Tracker(budget)
    eqs = _system_as_dicts(system)
    sols = _xl_level(eqs, system.n, degree, system.spec, tracker, branch_on_stuck)
    sols = sorted(set(sols))
    report = SolveReport(sols, complete=True,
                         work=tracker.work + tracker.candidates,
                         peak_cells=tracker.peak_cells)
    _check_soundness(system, report.solutions)
    return report


def suggested_xl_degree(m: int, n: int, q: int) -> int:
    """Operating degree heuristic: the regularity degree, clamped to keep
    desk-scale matrices small."""
    try:
        d = degree_of_regularity(m, n)
    except ValueError:
        d = n + 1
    if q == 2:
        d = min(d, 5)
    return max(2, min(d, 6))


# -- cost estimators ----------------------------------------------------------

def degree_of_regularity(m: int, n: int) -> int:
    """Index of the first non-positive coefficient of (1-t^2)^m / (1-t)^n.

    Defined (finite) only when the system is not underdetermined; raises
    ValueError when every coefficient stays positive within the scan bound.
    """
    if m < 1 or n < 1:
        raise ValueError("need m, n >= 1")
    cap = 2 * (m + n) + 4
    for k in range(cap + 1):
        coeff = 0
        for j in range(0, min(m, k // 2) + 1):
            term = math.comb(m, j) * math.comb(n - 1 + k - 2 * j, k - 2 * j)
            coeff += -term if j & 1 else term
        if coeff <= 0:
            return k
    raise ValueError(f"no degree of regularity below {cap} (underdetermined system?)")


def _iroot(x: int, r: int) -> int:
    """floor(x ** (1/r)) for big ints."""
    if x < 0 or r < 1:
        raise ValueError("need x >= 0 and r >= 1")
    if x == 0 or r == 1:
        return x
    g = 1 << (x.bit_length() // r + 1)
    while True:
        nxt = ((r - 1) * g + x // g ** (r - 1)) // r
        if nxt >= g:
            return g
        g = nxt


def _ipow_frac(base: int, exponent: Fraction) -> int:
    """floor(base ** exponent) exactly, exponent rational."""
    return _iroot(base ** exponent.numerator, exponent.denominator)


def _as_fraction(omega) -> Fraction:
    if isinstance(omega, Fraction):
        w = omega
    elif isinstance(omega, int):
        w = Fraction(omega)
    else:
        w = Fraction(str(omega))
    if not 2 <= w <= 3:
        raise ValueError(f"linear-algebra exponent {omega} outside [2, 3]")
    return w


def complexity_estimate(algorithm: str, q: int, m: int, n: int, omega,
                        hybrid_k: int = 0) -> int:
    """Exact big-integer operation count for one attack family.

    algorithm: "f4", "hf5" (uses hybrid_k guessed variables), or "xl".
    Constants hidden by the O() are taken as 1; fractional omega is applied
    through exact integer roots, so results never overflow or round through
    floats.
    """
    w = _as_fraction(omega)
    alg = algorithm.lower()
    if alg == "f4":
        dreg = degree_of_regularity(m, n)
        return m * _ipow_frac(math.comb(m + n + dreg - 1, dreg), w)
    if alg == "hf5":
        if hybrid_k < 0:
            raise ValueError("hybrid_k must be >= 0")
        dreg = degree_of_regularity(m, n)
        return q ** hybrid_k * m * _ipow_frac(
            math.comb(m + n - hybrid_k + dreg - 1, dreg), w)
    if alg == "xl":
        if m <= n:
            raise ValueError("XL estimate needs an overdefined system (m > n)")
        # m = eps * n^2, D = ceil(1 / sqrt(eps)) = ceil(n / sqrt(m))
        d = math.isqrt(n * n // m)
        while d * d * m < n * n:
            d += 1
        return _ipow_frac(n ** d, w) // math.factorial(d)
    raise ValueError(f"unknown algorithm {algorithm!r}")
