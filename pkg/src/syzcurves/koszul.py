"""Koszul differentials and graded Betti numbers of an embedded curve.

With V the space of sections of the embedding bundle and W_q that of its
q-th power, the complex at position (p, q) is

    wedge^{p+1} V (x) W_{q-1}  ->  wedge^p V (x) W_q  ->  wedge^{p-1} V (x) W_{q+1}

and the Betti number at (p, q) is the middle dimension minus the ranks of
the two maps.  Wedge basis elements are ordered colexicographically and
section monomials by pole order, so every matrix is bit-reproducible.
Matrices are assembled once over Z and reduced per prime.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterator

from .curves import (CurveModel, LineBundleSpec, SectionBasis, make_bundle,
                     multiply_raw, section_basis)
from .linalg import (Certification, IntegerSparseMatrix, RankPolicy,
                     RankResult, sample_primes)


def wedge_rank(subset: tuple[int, ...]) -> int:
    """Colexicographic position of a strictly increasing index subset."""
    pos = 0
    for k, s in enumerate(subset):
        if k and s <= subset[k - 1]:
            raise ValueError(f"subset {subset} not strictly increasing")
        pos += comb(s, k + 1)
    return pos


def wedge_unrank(n: int, p: int, position: int) -> tuple[int, ...]:
    """Inverse of wedge_rank over p-subsets of {0, ..., n-1}."""
    if not 0 <= position < comb(n, p):
        raise ValueError(
            f"position {position} out of range for C({n},{p})={comb(n, p)}")
    out = []
    rem = position
    s = n - 1
    for k in range(p, 0, -1):
        while comb(s, k) > rem:
            s -= 1
        out.append(s)
        rem -= comb(s, k)
    out.reverse()
    return tuple(out)


@dataclass(frozen=True)
class WedgeIndex:
    subset: tuple[int, ...]
    rank: int

    @classmethod
    def from_subset(cls, subset) -> "WedgeIndex":
        subset = tuple(subset)
        return cls(subset, wedge_rank(subset))

    @classmethod
    def from_rank(cls, n: int, p: int, position: int) -> "WedgeIndex":
        return cls(wedge_unrank(n, p, position), position)


def colex_subsets(n: int, p: int) -> Iterator[tuple[int, ...]]:
    """All p-subsets of {0, ..., n-1} in colexicographic order."""
    if p == 0:
        yield ()
        return
    for top in range(p - 1, n):
        for rest in colex_subsets(top, p - 1):
            yield rest + (top,)


class KoszulContext:
    """Bases, multiplication tables and cached ranks for one (curve, d)."""

    def __init__(self, curve: CurveModel, d: int):
        self.curve = curve
        self.bundle: LineBundleSpec = make_bundle(curve, d)
        self._bases: dict[int, SectionBasis] = {}
        self._mult: dict[int, list[list[dict[int, int]]]] = {}
        self._ranks: dict[tuple, RankResult] = {}
        if len(self.w_basis(1)) != self.bundle.r + 1:
            raise AssertionError("section count disagrees with d + 1 - g")

    @property
    def sections(self) -> SectionBasis:
        return self.w_basis(1)

    def w_basis(self, q: int) -> SectionBasis:
        """Basis of the level-(q*d) section space."""
        basis = self._bases.get(q)
        if basis is None:
            basis = section_basis(self.curve, q * self.bundle.d)
            if q >= 1:
                expected = q * self.bundle.d + 1 - self.curve.genus
                if len(basis) != expected:
                    raise AssertionError(
                        f"dim W_{q} = {len(basis)} != {expected}")
            self._bases[q] = basis
        return basis

    def mult_table(self, q: int) -> list[list[dict[int, int]]]:
        """Coordinates of v_s * w in W_{q+1}, for all s in V, w in W_q."""
        table = self._mult.get(q)
        if table is None:
            v = self.w_basis(1)
            wq = self.w_basis(q)
            wq1 = self.w_basis(q + 1)
            table = [[{wq1.index[mono]: c
                       for mono, c in multiply_raw(self.curve, vs, w)}
                      for w in wq.monomials]
                     for vs in v.monomials]
            self._mult[q] = table
        return table

    def middle_dim(self, p: int, q: int) -> int:
        return comb(self.bundle.r + 1, p) * len(self.w_basis(q))

    def rank_of_differential(self, p: int, q: int,
                             policy: RankPolicy) -> RankResult:
        """Rank of the (p, q) differential, cached per policy.

        The cache write is idempotent (same key always maps to the same
        result), so concurrent recomputation is harmless.
        """
        policy = policy.with_avoid(self.curve.bad_prime_factor)
        key = (p, q, policy.cache_key)
        hit = self._ranks.get(key)
        if hit is None:
            hit = policy.rank(build_differential(self, p, q))
            self._ranks[key] = hit
        return hit


def build_differential(ctx: KoszulContext, p: int, q: int) -> IntegerSparseMatrix:
    """Integer matrix of wedge^p V (x) W_q -> wedge^{p-1} V (x) W_{q+1}.

    Column index of (S, w) is colex(S) * dim W_q + index(w); each basis
    element maps to the alternating sum over s in S of (S minus s, v_s w).
    """
    n = ctx.bundle.r + 1
    if not 0 <= p <= n or q < 0:
        raise ValueError(f"position (p={p}, q={q}) out of range")
    dim_wq = len(ctx.w_basis(q))
    dim_wq1 = len(ctx.w_basis(q + 1))
    cols = comb(n, p) * dim_wq
    rows = comb(n, p - 1) * dim_wq1 if p >= 1 else 0
    if p == 0:
        return IntegerSparseMatrix(rows, cols, ())
    mult = ctx.mult_table(q)
    triples = []
    for ci, subset in enumerate(colex_subsets(n, p)):
        col_base = ci * dim_wq
        removals = []
        for k, s in enumerate(subset):
            rest = subset[:k] + subset[k + 1:]
            sign = -1 if k & 1 else 1
            removals.append((wedge_rank(rest) * dim_wq1, sign, mult[s]))
        for w in range(dim_wq):
            col = col_base + w
            for row_base, sign, prods in removals:
                for u, c in prods[w].items():
                    triples.append((row_base + u, col, sign * c))
    return IntegerSparseMatrix.from_coo(rows, cols, triples)


@dataclass(frozen=True)
class BettiEntry:
    p: int
    q: int
    middle_dim: int
    rank_out: int
    rank_in: int
    dim: int
    cert_out: RankResult
    cert_in: RankResult | None

    @property
    def certification(self) -> Certification:
        certs = [self.cert_out.certified]
        if self.cert_in is not None:
            certs.append(self.cert_in.certified)
        if all(c is Certification.EXACT_RATIONAL for c in certs):
            return Certification.EXACT_RATIONAL
        return Certification.MODULAR_CONSENSUS

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "dim": self.dim,
            "rank_out": self.rank_out,
            "rank_in": self.rank_in,
            "middle_dim": self.middle_dim,
            "certified": self.certification.value,
        }


def koszul_dim(ctx: KoszulContext, p: int, q: int,
               policy: RankPolicy) -> BettiEntry:
    """Betti number at (p, q): middle dimension minus both adjacent ranks."""
    n = ctx.bundle.r + 1
    if not 0 <= p <= n or q < 0:
        raise ValueError(f"position (p={p}, q={q}) out of range")
    cert_out = ctx.rank_of_differential(p, q, policy)
    # the incoming map starts from the zero space when p + 1 > n
    cert_in = (ctx.rank_of_differential(p + 1, q - 1, policy)
               if q >= 1 and p + 1 <= n else None)
    rank_in = cert_in.rank if cert_in is not None else 0
    middle = ctx.middle_dim(p, q)
    dim = middle - cert_out.rank - rank_in
    if dim < 0:
        raise AssertionError(
            f"negative dimension {dim} at (p={p}, q={q}); ranks inconsistent")
    return BettiEntry(p=p, q=q, middle_dim=middle, rank_out=cert_out.rank,
                      rank_in=rank_in, dim=dim, cert_out=cert_out,
                      cert_in=cert_in)


@dataclass
class BettiTable:
    curve: CurveModel
    bundle: LineBundleSpec
    entries: dict[tuple[int, int], BettiEntry]
    policy: RankPolicy
    primes: tuple[int, ...]

    def entry(self, p: int, q: int) -> BettiEntry:
        return self.entries[(p, q)]

    def dim(self, p: int, q: int) -> int:
        return self.entries[(p, q)].dim

    def positions(self) -> list[tuple[int, int]]:
        return sorted(self.entries, key=lambda pq: (pq[1], pq[0]))

    def to_json_dict(self, curve_info: dict) -> dict:
        return {
            "curve": curve_info,
            "d": self.bundle.d,
            "r": self.bundle.r,
            "seed": self.policy.seed,
            "primes": list(self.primes),
            "entries": [self.entries[pq].to_json_dict()
                        for pq in self.positions()],
        }

    def to_csv(self) -> str:
        lines = ["p,q,dim,rank_out,rank_in,middle_dim"]
        for p, q in self.positions():
            e = self.entries[(p, q)]
            lines.append(f"{e.p},{e.q},{e.dim},{e.rank_out},{e.rank_in},"
                         f"{e.middle_dim}")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        ps = sorted({p for p, _ in self.entries})
        qs = sorted({q for _, q in self.entries})
        cells = {}
        for (p, q), e in self.entries.items():
            cells[(p, q)] = "." if e.dim == 0 else str(e.dim)
        width = max([3] + [len(v) + 1 for v in cells.values()]
                    + [len(str(p)) + 1 for p in ps])
        head = "q\\p" + "".join(f"{p:>{width}}" for p in ps)
        lines = [head]
        for q in qs:
            row = f"{q:>3}" + "".join(
                f"{cells.get((p, q), ''):>{width}}" for p in ps)
            lines.append(row)
        lines.append(f"primes={list(self.primes)} seed={self.policy.seed}")
        return "\n".join(lines) + "\n"


def betti_table(ctx: KoszulContext, p_range=None, q_range=None,
                policy: RankPolicy | None = None) -> BettiTable:
    """Betti numbers over a (p, q) window; q must stay within [0, 3].

    Everything above q = 3 vanishes for these embeddings, and computing
    the q = 3 row verifies that instead of assuming it.
    """
    if policy is None:
        policy = RankPolicy()
    r = ctx.bundle.r
    ps = list(p_range) if p_range is not None else list(range(r + 1))
    qs = list(q_range) if q_range is not None else [0, 1, 2, 3]
    if any(not 0 <= q <= 3 for q in qs):
        raise ValueError(f"q range {qs} not within [0, 3]")
    if any(not 0 <= p <= r + 1 for p in ps):
        raise ValueError(f"p range {ps} not within [0, {r + 1}]")
    entries = {}
    for q in sorted(qs):
        for p in sorted(ps):
            entries[(p, q)] = koszul_dim(ctx, p, q, policy)
    primes = tuple(pm.p for pm in sample_primes(
        policy.prime_count, policy.seed, ctx.curve.bad_prime_factor))
    return BettiTable(curve=ctx.curve, bundle=ctx.bundle, entries=entries,
                      policy=policy, primes=primes)
