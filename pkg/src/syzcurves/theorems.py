"""Predicted Betti behavior per position, and verification against tables.

Each classical statement about curves embedded in degree >= 2g+1 becomes a
machine-checkable expectation over (curve, d, p, q): a forced zero, an
exact dimension, or an expected non-vanishing.  Semicontinuity orients the
comparisons: a dimension computed modulo admissible primes can only exceed
the characteristic-zero value, so computed zeros are conclusive while
computed non-zeros need exact-rational certification.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from math import comb

from .curves import (CurveModel, LineBundleSpec, curve_descriptors,
                     h0_pole_bound)
from .koszul import BettiTable, KoszulContext, betti_table, koszul_dim
from .linalg import Certification, RankPolicy


class HypothesisError(ValueError):
    """Inputs violate a blanket hypothesis (degree below 2g+1)."""


class ExpectationKind(Enum):
    ZERO = "zero"
    EXACT = "exact"
    NONZERO = "nonzero"
    UNCONSTRAINED = "unconstrained"


_KIND_STRENGTH = {
    ExpectationKind.EXACT: 3,
    ExpectationKind.ZERO: 2,
    ExpectationKind.NONZERO: 1,
    ExpectationKind.UNCONSTRAINED: 0,
}


class Status(Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    SKIPPED = "SKIPPED-hypothesis"
    INCONCLUSIVE = "INCONCLUSIVE-modular"


@dataclass(frozen=True)
class Expectation:
    p: int
    q: int
    kind: ExpectationKind
    value: int | None
    source: str
    hypotheses: tuple[str, ...]

    def expected_json(self):
        if self.kind is ExpectationKind.ZERO:
            return 0
        if self.kind is ExpectationKind.EXACT:
            return self.value
        if self.kind is ExpectationKind.NONZERO:
            return "nonzero"
        return None


@dataclass(frozen=True)
class _Candidate:
    source: str
    kind: ExpectationKind
    value: int | None
    checks: tuple[tuple[str, bool], ...]

    @property
    def ok(self) -> bool:
        return all(good for _, good in self.checks)

    def expectation(self, p: int, q: int) -> Expectation:
        hyps = tuple(text if good else f"{text} (not satisfied)"
                     for text, good in self.checks)
        return Expectation(p, q, self.kind, self.value, self.source, hyps)


def gl_nonvanishing_index(curve: CurveModel, bundle: LineBundleSpec) -> int | None:
    """Linear-strand index where the pencil decomposition forces K != 0.

    Splitting d*P as a*P + (d-a)*P gives series of dimensions r1 = 1 and
    r2 = h0((d-a)*P) - 1, with h0 counted from the semigroup (the degree
    may sit below 2g-1 where no closed dimension formula applies); the
    forced non-vanishing sits at p = r1 + r2 - 1 = r2.
    """
    if curve.a < 2:
        return None
    r2 = h0_pole_bound(curve, bundle.d - curve.a) - 1
    if r2 < 1:
        return None
    return r2


def position_candidates(curve: CurveModel, bundle: LineBundleSpec,
                        p: int, q: int) -> list[_Candidate]:
    """All statements whose index pattern matches (p, q), with hypothesis
    checks evaluated (a failed check turns into a SKIPPED report entry)."""
    g = curve.genus
    a = curve.a
    d = bundle.d
    r = bundle.r
    out: list[_Candidate] = []
    if q == 0:
        if p == 0:
            out.append(_Candidate("P3.1", ExpectationKind.EXACT, 1, ()))
        else:
            out.append(_Candidate("P3.1", ExpectationKind.ZERO, None, ()))
    if q >= 3:
        out.append(_Candidate("P3.1", ExpectationKind.ZERO, None, ()))
    if p >= r:
        out.append(_Candidate("Remark-p>=r", ExpectationKind.ZERO, None, ()))
    if q == 2 and p == r - 1:
        out.append(_Candidate("P3.3", ExpectationKind.EXACT, g, ()))
    if q == 1 and p == r - 1:
        out.append(_Candidate("P3.4", ExpectationKind.ZERO, None,
                              (("curve non-rational (g >= 1)", g >= 1),)))
    if q == 2 and 0 <= p <= d - 2 * g - 1:
        out.append(_Candidate("P3.5", ExpectationKind.ZERO, None, ()))
    if q == 1 and p == r - 2:
        out.append(_Candidate("P3.7", ExpectationKind.ZERO, None, (
            ("genus >= 4", g >= 4),
            ("curve not hyperelliptic", a != 2),
            ("not (trigonal with d = 2g+1)", not (a == 3 and d == 2 * g + 1)),
        )))
    if q == 1 and p == r - 3:
        out.append(_Candidate("P3.8", ExpectationKind.ZERO, None, (
            ("genus >= 7", g >= 7),
            ("gonality >= 4 (cover degree)", a >= 4),
            ("d >= 2g+3", d >= 2 * g + 3),
        )))
    if q == 1:
        p_star = gl_nonvanishing_index(curve, bundle)
        if p_star is not None and p == p_star:
            out.append(_Candidate("GL-converse", ExpectationKind.NONZERO, None, (
                ("degree-a pencil has two sections (r1 = 1)", True),
                (f"r2 = h0((d-a)P) - 1 = {p_star} from the semigroup", True),
            )))
    return out


def predict(curve: CurveModel, bundle: LineBundleSpec,
            p: int, q: int) -> Expectation:
    """Strongest applicable expectation at (p, q), with hypothesis trail."""
    if bundle.d < 2 * curve.genus + 1:
        raise HypothesisError(
            f"degree {bundle.d} below 2g+1 = {2 * curve.genus + 1}")
    applicable = [c for c in position_candidates(curve, bundle, p, q) if c.ok]
    if not applicable:
        return Expectation(p, q, ExpectationKind.UNCONSTRAINED, None, "none", ())
    best = max(applicable, key=lambda c: _KIND_STRENGTH[c.kind])
    return best.expectation(p, q)


def difference_value(g: int, d: int, p: int) -> int:
    """Value of dim K(p,2) - dim K(p+1,1); depends only on g and d.

    Integer rearrangement of binom(r,p)*(2d - pd/r + 1 - g)
    + binom(r+1,p+2) - (r+1)*binom(r+1,p+1), using
    binom(r,p)*p*d/r = d*binom(r-1,p-1).
    """
    r = d - g
    if not 0 <= p <= r:
        raise ValueError(f"p={p} out of range [0, {r}]")

    def c(n: int, k: int) -> int:
        return comb(n, k) if 0 <= k <= n else 0

    return (c(r, p) * (2 * d + 1 - g) - d * c(r - 1, p - 1)
            + c(r + 1, p + 2) - (r + 1) * c(r + 1, p + 1))


def vandermonde_check(r: int, caps: int | None = None) -> bool:
    """Binomial collapses behind the two linear-strand bounds.

    For every s in [r, caps]: sum_j C(s-2, 2-j) C(3, j) = C(s+1, 2) and
    sum_j C(s-3, 3-j) C(4, j) = C(s+1, 3).
    """
    if r < 4:
        raise ValueError("r must be >= 4")
    hi = caps if caps is not None else r
    for s in range(r, hi + 1):
        if sum(comb(s - 2, 2 - j) * comb(3, j) for j in range(3)) != comb(s + 1, 2):
            return False
        if sum(comb(s - 3, 3 - j) * comb(4, j) for j in range(4)) != comb(s + 1, 3):
            return False
    return True


@dataclass(frozen=True)
class ReportEntry:
    expectation: Expectation
    computed: int
    status: Status

    def to_json_dict(self) -> dict:
        e = self.expectation
        return {
            "p": e.p,
            "q": e.q,
            "expected": e.expected_json(),
            "computed": self.computed,
            "status": self.status.value,
            "source": e.source,
            "hypotheses": list(e.hypotheses),
        }


@dataclass(frozen=True)
class DerivedBundleDim:
    """Section count of the p-th wedge of the dual kernel bundle twisted
    by L, recovered as dim K(p,1) + C(r+1, p+1); it equals the section
    count of the (r-p)-th wedge of the kernel bundle, and meets the lower
    bound C(r+1, p+1) exactly when the linear-strand entry vanishes."""

    p: int
    h0_wedge: int
    lower_bound: int

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "h0_wedge": self.h0_wedge,
            "lower_bound": self.lower_bound,
            "attains_bound": self.h0_wedge == self.lower_bound,
        }


@dataclass
class VerificationReport:
    curve: CurveModel
    bundle: LineBundleSpec
    entries: list[ReportEntry]
    derived: list[DerivedBundleDim]
    primes: tuple[int, ...]
    seed: int

    @property
    def failures(self) -> list[ReportEntry]:
        return [e for e in self.entries if e.status is Status.FAIL]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json_dict(self) -> dict:
        return {
            "curve": curve_descriptors(self.curve).to_json_dict(self.curve),
            "d": self.bundle.d,
            "r": self.bundle.r,
            "entries": [e.to_json_dict() for e in self.entries],
            "derived": [d.to_json_dict() for d in self.derived],
            "primes": list(self.primes),
            "seed": self.seed,
        }

    def to_text(self) -> str:
        lines = []
        desc = curve_descriptors(self.curve)
        model = "rational" if self.curve.rational else (
            f"superelliptic a={self.curve.a} f={list(self.curve.f_coeffs)}")
        lines.append(f"verify: {model}  g={desc.genus}  d={self.bundle.d}  "
                     f"r={self.bundle.r}")
        for e in self.entries:
            ex = e.expectation
            expected = ex.expected_json()
            expected = "-" if expected is None else str(expected)
            line = (f"[{e.status.value}] ({ex.p},{ex.q}) {ex.source}: "
                    f"expected {expected}, computed {e.computed}")
            if ex.hypotheses:
                line += "  {" + "; ".join(ex.hypotheses) + "}"
            lines.append(line)
        for dd in self.derived:
            lines.append(f"[derived] h0(wedge^{dd.p} E* (x) L) = {dd.h0_wedge}"
                         f" (bound {dd.lower_bound})")
        n_fail = len(self.failures)
        lines.append(f"primes={list(self.primes)} seed={self.seed} "
                     f"failures={n_fail}")
        return "\n".join(lines) + "\n"


def _status_for(kind: ExpectationKind, value: int | None, computed: int,
                cert: Certification) -> Status:
    exact = cert is Certification.EXACT_RATIONAL
    if kind is ExpectationKind.ZERO:
        # computed dims upper-bound the characteristic-zero ones, so 0 wins
        return Status.PASS if computed == 0 else Status.FAIL
    if kind is ExpectationKind.EXACT:
        if computed == value:
            return Status.PASS
        if exact or computed < value:
            return Status.FAIL
        return Status.INCONCLUSIVE
    if kind is ExpectationKind.NONZERO:
        if computed == 0:
            return Status.FAIL
        return Status.PASS if exact else Status.INCONCLUSIVE
    return Status.PASS


def verify_table(table: BettiTable, curve: CurveModel | None = None,
                 bundle: LineBundleSpec | None = None) -> VerificationReport:
    """Compare every table position against its predictions.

    Emits one entry per applicable prediction (strongest per position),
    one SKIPPED entry per prediction whose index pattern matches but whose
    hypotheses fail, the strand-difference identity for every adjacent
    pair present, and the derived wedge-bundle section counts for q = 1.
    """
    curve = curve if curve is not None else table.curve
    bundle = bundle if bundle is not None else table.bundle
    g, d, r = curve.genus, bundle.d, bundle.r
    entries: list[ReportEntry] = []
    derived: list[DerivedBundleDim] = []
    for p, q in table.positions():
        be = table.entry(p, q)
        cands = position_candidates(curve, bundle, p, q)
        chosen = predict(curve, bundle, p, q)
        status = _status_for(chosen.kind, chosen.value, be.dim,
                             be.certification)
        entries.append(ReportEntry(chosen, be.dim, status))
        for cand in cands:
            if not cand.ok:
                entries.append(ReportEntry(cand.expectation(p, q), be.dim,
                                           Status.SKIPPED))
        if q == 1:
            bound = comb(r + 1, p + 1)
            derived.append(DerivedBundleDim(p, be.dim + bound, bound))
    for p in range(r):
        if (p, 2) in table.entries and (p + 1, 1) in table.entries:
            expected = difference_value(g, d, p)
            got = table.dim(p, 2) - table.dim(p + 1, 1)
            exp = Expectation(
                p, 2, ExpectationKind.EXACT, expected, "P3.2",
                (f"strand difference dim({p},2) - dim({p + 1},1), "
                 "bundle-independent for fixed d",))
            status = Status.PASS if got == expected else Status.FAIL
            entries.append(ReportEntry(exp, got, status))
    return VerificationReport(curve=curve, bundle=bundle, entries=entries,
                              derived=derived, primes=table.primes,
                              seed=table.policy.seed)


def verify_context(ctx: KoszulContext, policy: RankPolicy, p_range=None,
                   q_range=None, escalate: bool = True) -> VerificationReport:
    """Full pipeline: Betti window, verification, exact escalation.

    Non-vanishing expectations confirmed only modulo primes are retried
    with exact rational ranks (within the policy's certification cap);
    certification upgrades their status from INCONCLUSIVE to PASS.
    """
    table = betti_table(ctx, p_range, q_range, policy)
    report = verify_table(table)
    if not escalate:
        return report
    exact_policy = policy.exact_variant()
    for i, entry in enumerate(report.entries):
        ex = entry.expectation
        if (entry.status is Status.INCONCLUSIVE
                and ex.kind is ExpectationKind.NONZERO):
            be = koszul_dim(ctx, ex.p, ex.q, exact_policy)
            if be.certification is not Certification.EXACT_RATIONAL:
                continue  # over the cap; consensus fallback proves nothing new
            status = Status.PASS if be.dim != 0 else Status.FAIL
            upgraded = replace(
                ex, hypotheses=ex.hypotheses
                + ("certified by exact rational rank",))
            report.entries[i] = ReportEntry(upgraded, be.dim, status)
    return report
