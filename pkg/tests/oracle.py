"""Brute-force Betti-number oracle, independent of the package machinery.

Everything here is rebuilt from first principles: bases are enumerated by
scanning exponents, products are reduced with a generic y-degree loop,
index subsets come from itertools.combinations in lex order, matrices are
dense lists of Fractions, and ranks come from plain rational Gaussian
elimination.  Slow on purpose; only run on contexts with middle-term
dimension up to a couple hundred.
"""

from fractions import Fraction
from itertools import combinations
from math import comb


def oracle_genus(a: int, b: int) -> int:
    if a == 1:
        return 0
    reachable = {a * i + b * j
                 for i in range(b + 1) for j in range(a + 1)}
    return sum(1 for n in range(a * b) if n not in reachable)


def oracle_basis(a: int, b: int, m: int) -> list[tuple[int, int]]:
    monos = [(i, j)
             for j in range(a)
             for i in range(m + 1)
             if a * i + b * j <= m]
    monos.sort(key=lambda ij: a * ij[0] + b * ij[1])
    return monos


def oracle_multiply(a: int, f: list[int], pol1: dict, pol2: dict) -> dict:
    """Product of two polynomials in x, y modulo (y^a - f(x)).

    Polynomials are dicts (i, j) -> coefficient with arbitrary exponents;
    y-degrees are reduced by repeated substitution until all fall below a.
    """
    prod: dict[tuple[int, int], Fraction] = {}
    for (i1, j1), c1 in pol1.items():
        for (i2, j2), c2 in pol2.items():
            key = (i1 + i2, j1 + j2)
            prod[key] = prod.get(key, Fraction(0)) + Fraction(c1) * c2
    while any(j >= a for (_, j) in prod):
        nxt: dict[tuple[int, int], Fraction] = {}
        for (i, j), c in prod.items():
            if c == 0:
                continue
            if j >= a:
                for k, fk in enumerate(f):
                    if fk:
                        key = (i + k, j - a)
                        nxt[key] = nxt.get(key, Fraction(0)) + c * fk
            else:
                nxt[(i, j)] = nxt.get((i, j), Fraction(0)) + c
        prod = nxt
    return {key: c for key, c in prod.items() if c != 0}


def oracle_rank(matrix: list[list[Fraction]]) -> int:
    rows = [row[:] for row in matrix]
    m = len(rows)
    n = len(rows[0]) if m else 0
    rank = 0
    for c in range(n):
        piv = next((i for i in range(rank, m) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][c]
        rows[rank] = [v * inv for v in rows[rank]]
        for i in range(rank + 1, m):
            fac = rows[i][c]
            if fac:
                rows[i] = [v - fac * w for v, w in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def oracle_differential(a: int, b: int, f: list[int], d: int,
                        p: int, q: int) -> list[list[Fraction]]:
    """Dense matrix of the (p, q) Koszul map, lex-ordered wedge bases."""
    sections = oracle_basis(a, b, d)
    n = len(sections)
    wq = oracle_basis(a, b, q * d)
    wq1 = oracle_basis(a, b, (q + 1) * d)
    cols = comb(n, p) * len(wq)
    if p == 0:
        return [[Fraction(0)] * cols for _ in range(0)]
    cod_index = {s: k for k, s in enumerate(combinations(range(n), p - 1))}
    target_index = {mono: k for k, mono in enumerate(wq1)}
    rows = len(cod_index) * len(wq1)
    matrix = [[Fraction(0)] * cols for _ in range(rows)]
    for ci, subset in enumerate(combinations(range(n), p)):
        for wi, w in enumerate(wq):
            col = ci * len(wq) + wi
            for k in range(p):
                rest = subset[:k] + subset[k + 1:]
                sign = (-1) ** k
                prod = oracle_multiply(a, f, {sections[subset[k]]: 1}, {w: 1})
                base = cod_index[rest] * len(wq1)
                for mono, c in prod.items():
                    matrix[base + target_index[mono]][col] += sign * c
    return matrix


def oracle_betti(a: int, b: int, f: list[int], d: int) -> dict:
    """Full table over q in [0, 3], p in [0, r], by dense rational ranks."""
    g = oracle_genus(a, b)
    r = d - g
    ranks: dict[tuple[int, int], int] = {}

    def rank_at(p, q):
        if (p, q) not in ranks:
            ranks[(p, q)] = oracle_rank(oracle_differential(a, b, f, d, p, q))
        return ranks[(p, q)]

    table = {}
    for q in range(4):
        wq = oracle_basis(a, b, q * d)
        for p in range(r + 1):
            middle = comb(len(oracle_basis(a, b, d)), p) * len(wq)
            rank_in = rank_at(p + 1, q - 1) if q >= 1 else 0
            table[(p, q)] = middle - rank_at(p, q) - rank_in
    return table
