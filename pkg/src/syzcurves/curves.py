"""Curve models with computable section rings.

Two families: the projective line (a = 1), and superelliptic curves
y^a = f(x) with deg f = b, gcd(a, b) = 1 and f squarefree.  Such a curve
has a single totally ramified point over x = infinity; the pole orders of
x and y there are a and b, so the space of functions with pole order at
most m has the monomial basis { x^i y^j : 0 <= j < a, a*i + b*j <= m }.
All section arithmetic happens in that basis with integer coefficients,
which is what lets Koszul differentials be assembled exactly over Z.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import NamedTuple


class ModelInvalidError(ValueError):
    """A curve model violates one of its invariants; the message names it."""


@dataclass(frozen=True)
class CurveModel:
    """y^a = f(x) with f = sum f_coeffs[k] x^k; a = 1 means the projective line."""

    a: int
    b: int
    f_coeffs: tuple[int, ...]
    genus: int
    disc: int

    @property
    def rational(self) -> bool:
        return self.a == 1

    @property
    def lead_coeff(self) -> int:
        return self.f_coeffs[-1] if self.f_coeffs else 1

    @property
    def bad_prime_factor(self) -> int:
        """Primes dividing this stay inadmissible: reduction could degenerate."""
        if self.a == 1:
            return 1
        return self.a * abs(self.disc) * abs(self.lead_coeff)

    def pole_order(self, mono: tuple[int, int]) -> int:
        return self.a * mono[0] + self.b * mono[1]

    def semigroup_contains(self, n: int) -> bool:
        if n < 0:
            return False
        return any((n - self.b * j) % self.a == 0
                   for j in range(self.a) if n - self.b * j >= 0)


def _sylvester_det(f: list[int], g: list[int]) -> int:
    """Resultant of two integer polynomials (coefficients ascending)."""
    m = len(f) - 1
    n = len(g) - 1
    size = m + n
    rows = []
    for k in range(n):
        row = [0] * size
        for idx, c in enumerate(reversed(f)):
            row[k + idx] = c
        rows.append(row)
    for k in range(m):
        row = [0] * size
        for idx, c in enumerate(reversed(g)):
            row[k + idx] = c
        rows.append(row)
    return _det_bareiss(rows)


def _det_bareiss(rows: list[list[int]]) -> int:
    n = len(rows)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            sign = -sign
        for i in range(c + 1, n):
            f = rows[i][c]
            for j in range(c + 1, n):
                rows[i][j] = (rows[i][j] * rows[c][c] - f * rows[c][j]) // prev
            rows[i][c] = 0
        prev = rows[c][c]
    return sign * prev


def poly_discriminant(coeffs: list[int]) -> int:
    """disc(f) for integer f, zero iff f has a repeated root."""
    b = len(coeffs) - 1
    if b < 1:
        return 1
    deriv = [k * c for k, c in enumerate(coeffs)][1:]
    while deriv and deriv[-1] == 0:
        deriv.pop()
    if not deriv:
        return 0
    res = _sylvester_det(list(coeffs), deriv)
    sign = -1 if (b * (b - 1) // 2) % 2 else 1
    return sign * res // coeffs[-1]


def build_curve(a: int, f_coeffs) -> CurveModel:
    """Validate and build a curve model; raises ModelInvalidError otherwise."""
    if a < 1:
        raise ModelInvalidError(f"cover degree a={a} must be >= 1")
    if a == 1:
        return CurveModel(a=1, b=1, f_coeffs=(), genus=0, disc=1)
    coeffs = tuple(int(c) for c in f_coeffs)
    if len(coeffs) < 4:
        raise ModelInvalidError("deg f must be >= 3 for a superelliptic model")
    if coeffs[-1] == 0:
        raise ModelInvalidError("leading coefficient of f is zero")
    b = len(coeffs) - 1
    disc = poly_discriminant(list(coeffs))
    if disc == 0:
        raise ModelInvalidError("f not squarefree")
    if gcd(a, b) != 1:
        raise ModelInvalidError(f"gcd(a, deg f) = gcd({a}, {b}) != 1")
    genus = (a - 1) * (b - 1) // 2
    return CurveModel(a=a, b=b, f_coeffs=coeffs, genus=genus, disc=disc)


def rational_curve() -> CurveModel:
    return build_curve(1, ())


@dataclass(frozen=True)
class LineBundleSpec:
    """The bundle d * P_inf; r + 1 = d + 1 - g global sections."""

    d: int
    r: int


def make_bundle(curve: CurveModel, d: int) -> LineBundleSpec:
    if d < 2 * curve.genus + 1:
        raise ModelInvalidError(
            f"degree d={d} below 2g+1={2 * curve.genus + 1}")
    return LineBundleSpec(d=d, r=d - curve.genus)


@dataclass(frozen=True, eq=False)
class SectionBasis:
    """Ordered monomial basis of the pole-order filtration at level m."""

    level: int
    monomials: tuple[tuple[int, int], ...]
    a: int
    b: int

    def __len__(self) -> int:
        return len(self.monomials)

    @cached_property
    def index(self) -> dict[tuple[int, int], int]:
        return {mono: k for k, mono in enumerate(self.monomials)}

    def pole_order(self, mono: tuple[int, int]) -> int:
        return self.a * mono[0] + self.b * mono[1]


def section_basis(curve: CurveModel, m: int) -> SectionBasis:
    """Monomials x^i y^j with a*i + b*j <= m, sorted by pole order.

    Pole orders are pairwise distinct because gcd(a, b) = 1 and j < a,
    so the sort order is canonical.
    """
    if m < 0:
        raise ValueError(f"pole bound m={m} must be >= 0")
    monos = []
    for j in range(curve.a):
        room = m - curve.b * j
        if room < 0:
            continue
        monos.extend((i, j) for i in range(room // curve.a + 1))
    monos.sort(key=curve.pole_order)
    return SectionBasis(level=m, monomials=tuple(monos), a=curve.a, b=curve.b)


def h0_pole_bound(curve: CurveModel, m: int) -> int:
    """dim of the level-m section space, counted from the semigroup."""
    if m < 0:
        return 0
    return sum((m - curve.b * j) // curve.a + 1
               for j in range(curve.a) if m - curve.b * j >= 0)


def semigroup_gaps(curve: CurveModel) -> tuple[int, ...]:
    """Pole orders not attained; exactly g of them, all below 2g."""
    top = 2 * curve.genus
    return tuple(n for n in range(top) if not curve.semigroup_contains(n))


def multiply_raw(curve: CurveModel, s: tuple[int, int],
                 t: tuple[int, int]) -> tuple[tuple[tuple[int, int], int], ...]:
    """Product of two basis monomials as ((i, j), coeff) terms.

    y-exponents below a multiply freely; otherwise one rewrite
    y^a -> f(x) suffices because j1 + j2 <= 2a - 2.
    """
    i = s[0] + t[0]
    j = s[1] + t[1]
    if j < curve.a:
        return (((i, j), 1),)
    j -= curve.a
    return tuple(((i + k, j), c)
                 for k, c in enumerate(curve.f_coeffs) if c != 0)


def multiply_monomial(curve: CurveModel, s: tuple[int, int], m1: int,
                      t: tuple[int, int], m2: int,
                      target: SectionBasis | None = None) -> dict[int, int]:
    """Coordinates of s*t in the basis at level m1 + m2."""
    for mono, m in ((s, m1), (t, m2)):
        i, j = mono
        if i < 0 or not 0 <= j < curve.a or curve.pole_order(mono) > m:
            raise ValueError(f"monomial x^{i} y^{j} not in basis of level {m}")
    if target is None:
        target = section_basis(curve, m1 + m2)
    return {target.index[mono]: c for mono, c in multiply_raw(curve, s, t)}


class RRCheck(NamedTuple):
    ok: bool
    failed_at: int | None
    detail: str


def riemann_roch_selfcheck(curve: CurveModel, m_max: int) -> RRCheck:
    """Check dim = m + 1 - g for all 2g-1 <= m <= m_max, and gap count = g."""
    g = curve.genus
    for m in range(max(0, 2 * g - 1), m_max + 1):
        got = len(section_basis(curve, m))
        if got != m + 1 - g:
            return RRCheck(False, m, f"dim {got} != {m + 1 - g} at level {m}")
    gaps = semigroup_gaps(curve)
    if len(gaps) != g:
        return RRCheck(False, None, f"{len(gaps)} gaps, expected genus {g}")
    return RRCheck(True, None, "")


@dataclass(frozen=True)
class CurveDescriptors:
    genus: int
    canonical_degree: int
    gonality: int
    gonality_note: str
    hyperelliptic: bool
    trigonal: bool
    kg13_degree: int | None
    gaps: tuple[int, ...]

    def to_json_dict(self, curve: CurveModel) -> dict:
        out = {
            "model": "rational" if curve.rational else "superelliptic",
            "a": curve.a,
            "b": curve.b,
            "f": list(curve.f_coeffs),
            "genus": self.genus,
            "canonical_degree": self.canonical_degree,
            "gonality": self.gonality,
            "gonality_note": self.gonality_note,
            "hyperelliptic": self.hyperelliptic,
            "trigonal": self.trigonal,
            "kg13_degree": self.kg13_degree,
            "gaps": list(self.gaps),
        }
        return out


_GONALITY_NOTE = ("gonality asserted from the degree-a cover x: C -> P^1; "
                  "Castelnuovo-Severi rules out smaller pencils at these "
                  "genera (assumption recorded, not re-proved)")


def curve_descriptors(curve: CurveModel) -> CurveDescriptors:
    g = curve.genus
    trigonal = curve.a == 3
    return CurveDescriptors(
        genus=g,
        canonical_degree=2 * g - 2,
        gonality=curve.a if curve.a >= 2 else 1,
        gonality_note=_GONALITY_NOTE if curve.a >= 2 else
        "rational model: the identity map is a degree-1 pencil",
        hyperelliptic=curve.a == 2,
        trigonal=trigonal,
        kg13_degree=2 * g + 1 if trigonal else None,
        gaps=semigroup_gaps(curve),
    )


def random_superelliptic(a: int, b: int, seed: int) -> CurveModel:
    """Draw small integer coefficients for f, rejecting until squarefree."""
    if a < 2:
        raise ModelInvalidError("random model needs cover degree a >= 2")
    if b < 3:
        raise ModelInvalidError("deg f must be >= 3 for a superelliptic model")
    if gcd(a, b) != 1:
        raise ModelInvalidError(f"gcd(a, deg f) = gcd({a}, {b}) != 1")
    rng = random.Random(seed)
    for _ in range(1000):
        coeffs = [rng.randint(-3, 3) for _ in range(b)] + [rng.randint(1, 3)]
        if poly_discriminant(coeffs) == 0:
            continue
        return build_curve(a, coeffs)
    raise ModelInvalidError(
        f"no squarefree degree-{b} draw in 1000 attempts (seed {seed})")


def curve_from_json(spec) -> CurveModel:
    """Parse a curve specification: a JSON string or an already-decoded dict.

    Schemas: {"model": "rational"},
             {"model": "superelliptic", "a": int, "f": [c0, ..., cb]},
             {"model": "superelliptic", "a": int, "b": int, "seed": int}.
    """
    if isinstance(spec, str):
        try:
            obj = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise ModelInvalidError(f"bad curve JSON: {exc}") from exc
    else:
        obj = spec
    if not isinstance(obj, dict):
        raise ModelInvalidError("curve spec must be a JSON object")
    model = obj.get("model")
    if model == "rational":
        return rational_curve()
    if model != "superelliptic":
        raise ModelInvalidError(f"unknown model {model!r}")
    try:
        a = int(obj["a"])
    except KeyError as exc:
        raise ModelInvalidError("superelliptic spec needs field 'a'") from exc
    if "f" in obj:
        return build_curve(a, [int(c) for c in obj["f"]])
    if "b" in obj:
        return random_superelliptic(a, int(obj["b"]), int(obj.get("seed", 0)))
    raise ModelInvalidError("superelliptic spec needs 'f' or ('b', 'seed')")
