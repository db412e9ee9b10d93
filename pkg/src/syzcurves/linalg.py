"""Exact rank computation for integer matrices.

Ranks are computed modulo word-sized primes (fast, numpy-backed) and
combined by a deterministic multi-prime consensus; small matrices can be
certified over the rationals with fraction-free (Bareiss) elimination.
A rank modulo p never exceeds the rational rank, and equals it for every
prime not dividing some fixed nonzero minor, so the consensus is a lower
bound that is exact for generic primes.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np

# Sampled primes live in [2^21, 2^22).  The lower floor keeps random
# structure constants from vanishing mod p; the upper bound keeps p^2
# small enough that float64 matrix products over 512-column chunks are
# exact (512 * p^2 < 2^53), which lets the elimination kernel run on BLAS.
PRIME_FLOOR = 1 << 20
_SAMPLE_LO = 1 << 21
_SAMPLE_HI = 1 << 22

# Largest prime for which the int64 kernel is safe: p^2 must fit in int64.
_INT64_PRIME_BOUND = 3_037_000_499

_STREAM_BLOCK = 256

# Entry count above which the BLAS-blocked streaming kernel beats plain
# int64 row elimination.
_STREAM_MIN_ELEMS = 1 << 16


class InvalidModulusError(ValueError):
    """Raised when a modulus is not prime (or violates the sampling floor)."""


class PrimeExhaustionError(RuntimeError):
    """Raised when no admissible primes can be found."""


class CertificationRefused(RuntimeError):
    """Raised when a matrix exceeds the exact-rank certification cap."""


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True, order=True)
class PrimeModulus:
    """A sampled word-sized prime, flagged admissible for the run's curve."""

    p: int
    admissible: bool = True

    def __post_init__(self):
        if not is_prime(self.p):
            raise InvalidModulusError(f"{self.p} is not prime")
        if not PRIME_FLOOR < self.p < (1 << 62):
            raise InvalidModulusError(
                f"modulus {self.p} outside (2^20, 2^62)")


class Certification(Enum):
    MODULAR_CONSENSUS = "modular-consensus"
    EXACT_RATIONAL = "exact-rational"


@dataclass(frozen=True)
class RankResult:
    rank: int
    primes_used: tuple[PrimeModulus, ...]
    certified: Certification

    def __post_init__(self):
        if self.certified is Certification.MODULAR_CONSENSUS and not self.primes_used:
            raise ValueError("consensus result must record its primes")


@dataclass(frozen=True)
class IntegerSparseMatrix:
    """Integer matrix in coordinate form, sorted by (row, col), no stored zeros."""

    rows: int
    cols: int
    entries: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimensions")
        last = None
        for r, c, v in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ValueError(f"entry ({r},{c}) out of range")
            if v == 0:
                raise ValueError(f"explicit zero stored at ({r},{c})")
            if last is not None and (r, c) <= last:
                raise ValueError("entries not sorted by (row, col) or duplicated")
            last = (r, c)

    @classmethod
    def from_coo(cls, rows: int, cols: int, triples) -> "IntegerSparseMatrix":
        """Build from possibly unsorted/duplicated (row, col, value) triples."""
        acc: dict[tuple[int, int], int] = {}
        for r, c, v in triples:
            key = (r, c)
            acc[key] = acc.get(key, 0) + v
        entries = tuple((r, c, v) for (r, c), v in sorted(acc.items()) if v != 0)
        return cls(rows, cols, entries)

    @classmethod
    def from_dense(cls, dense) -> "IntegerSparseMatrix":
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        triples = [(i, j, int(v)) for i, row in enumerate(dense)
                   for j, v in enumerate(row) if v != 0]
        return cls.from_coo(rows, cols, triples)

    @property
    def nnz(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def transpose(self) -> "IntegerSparseMatrix":
        triples = sorted((c, r, v) for r, c, v in self.entries)
        return IntegerSparseMatrix(self.cols, self.rows, tuple(triples))

    @cached_property
    def _coo_arrays(self) -> tuple[np.ndarray, np.ndarray, list[int]]:
        ri = np.fromiter((e[0] for e in self.entries), dtype=np.int64, count=self.nnz)
        ci = np.fromiter((e[1] for e in self.entries), dtype=np.int64, count=self.nnz)
        vals = [e[2] for e in self.entries]
        return ri, ci, vals

    def to_dense_mod(self, p: int) -> np.ndarray:
        """Dense int64 array of the residues mod p (requires p < 2^62)."""
        a = np.zeros((self.rows, self.cols), dtype=np.int64)
        ri, ci, vals = self._coo_arrays
        if vals:
            a[ri, ci] = np.fromiter((v % p for v in vals), dtype=np.int64,
                                    count=len(vals))
        return a

    def to_dense_int(self) -> list[list[int]]:
        a = [[0] * self.cols for _ in range(self.rows)]
        for r, c, v in self.entries:
            a[r][c] = v
        return a


def _rank_dense_int64(a: np.ndarray, p: int) -> int:
    """Row echelon over F_p on an int64 array with entries in [0, p)."""
    m, n = a.shape
    rank = 0
    for c in range(n):
        if rank == m:
            break
        nz = np.nonzero(a[rank:, c])[0]
        if nz.size == 0:
            continue
        i = rank + int(nz[0])
        if i != rank:
            a[[rank, i]] = a[[i, rank]]
        inv = pow(int(a[rank, c]), p - 2, p)
        row = a[rank] * inv % p
        a[rank] = row
        below = a[rank + 1:, c]
        hit = np.nonzero(below)[0]
        if hit.size:
            tail = a[rank + 1 + hit]
            a[rank + 1 + hit] = (tail - below[hit, None] * row) % p
        rank += 1
    return rank


def _rank_dense_object(rows: list[list[int]], p: int) -> int:
    """Plain Gauss over F_p with Python ints; fallback for huge primes."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    rank = 0
    for c in range(n):
        if rank == m:
            break
        piv = next((i for i in range(rank, m) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], p - 2, p)
        rows[rank] = [v * inv % p for v in rows[rank]]
        top = rows[rank]
        for i in range(rank + 1, m):
            f = rows[i][c] % p
            if f:
                rows[i] = [(v - f * w) % p for v, w in zip(rows[i], top)]
        rank += 1
    return rank


def _rank_streaming_float(matrix: IntegerSparseMatrix, p: int) -> int:
    """Streaming block elimination over F_p in exact float64 arithmetic.

    The matrix is oriented so columns form the short side; row blocks are
    densified, cleared against the reduced pivot rows found so far (chunked
    BLAS products, each chunk small enough that every dot product stays
    below 2^53), then locally echelonized.  Pivot rows are kept in reduced
    row echelon form so clearing multipliers can be read in one shot.
    """
    m, n = matrix.shape
    chunk = max(1, (1 << 53) // (p * p) - 1)
    ri, ci, vals = matrix._coo_arrays
    data = np.fromiter((v % p for v in vals), dtype=np.float64, count=len(vals))
    order = np.argsort(ri, kind="stable")
    ri, ci, data = ri[order], ci[order], data[order]
    counts = np.bincount(ri, minlength=m)
    indptr = np.concatenate([[0], np.cumsum(counts)])

    piv_rows = np.zeros((0, n))
    piv_cols: list[int] = []

    for start in range(0, m, _STREAM_BLOCK):
        stop = min(start + _STREAM_BLOCK, m)
        lo, hi = int(indptr[start]), int(indptr[stop])
        if lo == hi:
            continue
        d = np.zeros((stop - start, n))
        d[ri[lo:hi] - start, ci[lo:hi]] = data[lo:hi]

        for k in range(0, len(piv_cols), chunk):
            cols = piv_cols[k:k + chunk]
            mult = d[:, cols]
            if np.any(mult):
                d = (d - mult @ piv_rows[k:k + chunk]) % p

        new_rows: list[np.ndarray] = []
        new_cols: list[int] = []
        nrow = d.shape[0]
        for i in range(nrow):
            v = d[i]
            nz = np.nonzero(v)[0]
            if nz.size == 0:
                continue
            c = int(nz[0])
            inv = float(pow(int(v[c]), p - 2, p))
            v = v * inv % p
            if i + 1 < nrow:
                f = d[i + 1:, c]
                hit = np.nonzero(f)[0]
                if hit.size:
                    d[i + 1 + hit] = (d[i + 1 + hit] - f[hit, None] * v) % p
            if new_rows:
                nr = np.array(new_rows)
                f = nr[:, c]
                if np.any(f):
                    nr = (nr - f[:, None] * v) % p
                    new_rows = list(nr)
            new_rows.append(v)
            new_cols.append(c)

        if new_rows:
            nr = np.array(new_rows)
            for k in range(0, len(new_cols), chunk):
                cols = new_cols[k:k + chunk]
                mult = piv_rows[:, cols]
                if np.any(mult):
                    piv_rows = (piv_rows - mult @ nr[k:k + chunk]) % p
            piv_rows = np.vstack([piv_rows, nr])
            piv_cols.extend(new_cols)
            if len(piv_cols) == n:
                break

    return len(piv_cols)


def rank_mod_p(matrix: IntegerSparseMatrix, p) -> int:
    """Rank of an integer matrix over the field with p elements.

    Accepts a PrimeModulus or a bare prime int.  Deterministic for fixed
    input; the kernel is chosen by the size of p and of the matrix.
    """
    if isinstance(p, PrimeModulus):
        p = p.p
    else:
        p = int(p)
        if not is_prime(p):
            raise InvalidModulusError(f"{p} is not prime")
    if min(matrix.shape) == 0 or matrix.nnz == 0:
        return 0
    work = matrix if matrix.cols <= matrix.rows else matrix.transpose()
    big = work.rows * work.cols > _STREAM_MIN_ELEMS
    if big and (p * p) << 1 < 1 << 53:
        return _rank_streaming_float(work, p)
    if p <= _INT64_PRIME_BOUND:
        return _rank_dense_int64(work.to_dense_mod(p), p)
    rows = [[v % p for v in row] for row in work.to_dense_int()]
    return _rank_dense_object(rows, p)


def sample_primes(count: int, seed: int, avoid: int = 1) -> tuple[PrimeModulus, ...]:
    """Deterministically sample `count` distinct admissible primes.

    A prime is admissible iff it does not divide `avoid` (the caller packs
    a * disc(f) * leadcoeff(f) in there so reductions stay smooth curves).
    """
    if count < 1:
        raise ValueError("prime count must be >= 1")
    rng = random.Random(seed)
    found: list[PrimeModulus] = []
    chosen: set[int] = set()
    attempts = 0
    limit = 400 * count + 400
    while len(found) < count:
        attempts += 1
        if attempts > limit:
            raise PrimeExhaustionError(
                f"could not find {count} admissible primes in "
                f"[{_SAMPLE_LO}, {_SAMPLE_HI}) avoiding divisors of {avoid}")
        cand = rng.randrange(_SAMPLE_LO + 1, _SAMPLE_HI, 2)
        if cand in chosen or not is_prime(cand):
            continue
        if avoid == 0 or avoid % cand == 0:
            continue
        chosen.add(cand)
        found.append(PrimeModulus(cand))
    return tuple(found)


def rank_consensus(matrix: IntegerSparseMatrix, prime_count: int, seed: int,
                   avoid: int = 1, jobs: int = 1) -> RankResult:
    """Max of rank_mod_p over deterministically sampled admissible primes.

    The max over primes is a lower bound on the rational rank, attained
    for every prime not dividing a fixed nonzero maximal minor.
    """
    primes = sample_primes(prime_count, seed, avoid)
    if jobs > 1 and len(primes) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            ranks = list(pool.map(lambda q: rank_mod_p(matrix, q), primes))
    else:
        ranks = [rank_mod_p(matrix, q) for q in primes]
    return RankResult(max(ranks), primes, Certification.MODULAR_CONSENSUS)


def rank_exact(matrix: IntegerSparseMatrix, cap: int = 2000) -> RankResult:
    """Exact rational rank by fraction-free (Bareiss) elimination.

    Refuses matrices larger than cap x cap; callers fall back to consensus.
    """
    if matrix.rows > cap or matrix.cols > cap:
        raise CertificationRefused(
            f"matrix {matrix.rows}x{matrix.cols} exceeds certification cap {cap}")
    if min(matrix.shape) == 0 or matrix.nnz == 0:
        return RankResult(0, (), Certification.EXACT_RATIONAL)
    work = matrix if matrix.cols <= matrix.rows else matrix.transpose()
    rank = _rank_bareiss(work.to_dense_int())
    return RankResult(rank, (), Certification.EXACT_RATIONAL)


def _rank_bareiss(rows: list[list[int]]) -> int:
    """Fraction-free row echelon; all divisions are exact over Z.

    Pivots by smallest absolute value in the column to slow coefficient
    growth; intermediate entries are minors of the input matrix.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    rank = 0
    prev = 1
    for c in range(n):
        if rank == m:
            break
        piv = -1
        piv_abs = 0
        for i in range(rank, m):
            v = abs(rows[i][c])
            if v and (piv < 0 or v < piv_abs):
                piv, piv_abs = i, v
        if piv < 0:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        top = rows[rank]
        pv = top[c]
        for i in range(rank + 1, m):
            ri = rows[i]
            f = ri[c]
            if f:
                for j in range(c + 1, n):
                    ri[j] = (ri[j] * pv - f * top[j]) // prev
                ri[c] = 0
            elif pv != prev:
                for j in range(c + 1, n):
                    ri[j] = ri[j] * pv // prev
        prev = pv
        rank += 1
    return rank


@dataclass(frozen=True)
class RankPolicy:
    """How ranks get computed: modular consensus, or exact below a size cap."""

    mode: str = "consensus"  # "consensus" | "exact"
    prime_count: int = 3
    seed: int = 0
    exact_cap: int = 2000
    avoid: int = 1
    jobs: int = 1

    def __post_init__(self):
        if self.mode not in ("consensus", "exact"):
            raise ValueError(f"unknown rank policy mode {self.mode!r}")
        if self.prime_count < 1:
            raise ValueError("prime count must be >= 1")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")

    def rank(self, matrix: IntegerSparseMatrix) -> RankResult:
        if self.mode == "exact":
            try:
                return rank_exact(matrix, self.exact_cap)
            except CertificationRefused:
                pass
        return rank_consensus(matrix, self.prime_count, self.seed,
                              self.avoid, self.jobs)

    @property
    def cache_key(self) -> tuple:
        # jobs deliberately excluded: it cannot change any result.
        return (self.mode, self.prime_count, self.seed, self.exact_cap, self.avoid)

    def with_avoid(self, avoid: int) -> "RankPolicy":
        return RankPolicy(self.mode, self.prime_count, self.seed,
                          self.exact_cap, avoid, self.jobs)

    def exact_variant(self) -> "RankPolicy":
        return RankPolicy("exact", self.prime_count, self.seed,
                          self.exact_cap, self.avoid, self.jobs)
