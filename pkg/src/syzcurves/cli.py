"""Batch command line: curve inspection, Betti tables, verification runs.

Three single-shot subcommands sharing one flag vocabulary:

    syzcurves curve-info --curve '{"model": "superelliptic", "a": 3, "f": [1,2,0,0,0,1]}'
    syzcurves betti  --curve spec.json --d 9 --format csv
    syzcurves verify --curve spec.json --d 9 --primes 3 --seed 7 --format json

Exit codes: 0 = no FAIL entries, 1 = some verification FAILed,
2 = configuration or model error (message names the violated invariant).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .curves import ModelInvalidError, curve_descriptors, curve_from_json
from .koszul import KoszulContext, betti_table
from .linalg import PrimeExhaustionError, RankPolicy
from .theorems import HypothesisError, verify_context


@dataclass
class RunConfig:
    curve_spec: str
    d: int | None
    p_range: tuple[int, int] | None
    q_range: tuple[int, int] | None
    prime_count: int
    seed: int
    exact_cap: int
    rank_mode: str
    fmt: str
    out: str | None
    jobs: int
    extended: bool = False

    def policy(self) -> RankPolicy:
        return RankPolicy(mode=self.rank_mode, prime_count=self.prime_count,
                          seed=self.seed, exact_cap=self.exact_cap,
                          jobs=self.jobs)


def _parse_range(text: str) -> tuple[int, int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo, hi = int(lo), int(hi)
    else:
        lo = hi = int(text)
    if hi < lo:
        raise ValueError(f"empty range {text!r}")
    return lo, hi


def _load_curve(spec: str):
    text = spec.strip()
    if not text.startswith("{") and os.path.exists(text):
        with open(text, "r", encoding="utf-8") as fh:
            text = fh.read()
    return curve_from_json(text)


def _emit(content: str, out: str | None) -> None:
    sys.stdout.write(content)
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(content)


def _config(args, extended: bool = False) -> RunConfig:
    return RunConfig(
        curve_spec=args.curve,
        d=getattr(args, "d", None),
        p_range=_parse_range(args.p) if getattr(args, "p", None) else None,
        q_range=_parse_range(args.q) if getattr(args, "q", None) else None,
        prime_count=getattr(args, "primes", 3),
        seed=getattr(args, "seed", 0),
        exact_cap=getattr(args, "exact_cap", 2000),
        rank_mode=getattr(args, "rank_policy", "consensus"),
        fmt=args.format,
        out=args.out,
        jobs=getattr(args, "jobs", 1),
        extended=extended,
    )


def _resolve_window(cfg: RunConfig, r: int):
    ps = range(cfg.p_range[0], cfg.p_range[1] + 1) if cfg.p_range else None
    qs = range(cfg.q_range[0], cfg.q_range[1] + 1) if cfg.q_range else None
    return ps, qs


def cmd_curve_info(args) -> int:
    cfg = _config(args)
    curve = _load_curve(cfg.curve_spec)
    desc = curve_descriptors(curve)
    if cfg.fmt == "json":
        content = json.dumps(desc.to_json_dict(curve), indent=2) + "\n"
    else:
        lines = []
        if curve.rational:
            lines.append("model: rational (projective line)")
        else:
            lines.append(f"model: superelliptic y^{curve.a} = f(x), "
                         f"f = {list(curve.f_coeffs)} (deg {curve.b})")
        lines.append(f"genus: {desc.genus}")
        lines.append(f"semigroup gaps: {list(desc.gaps)}")
        lines.append(f"canonical degree: {desc.canonical_degree}")
        lines.append(f"gonality: {desc.gonality} ({desc.gonality_note})")
        if desc.trigonal:
            lines.append("bundle K(g13) has degree: "
                         f"{desc.kg13_degree}")
        content = "\n".join(lines) + "\n"
    _emit(content, cfg.out)
    return 0


def _require_d(cfg: RunConfig) -> int:
    if cfg.d is None:
        raise ValueError("--d is required")
    return cfg.d


def cmd_betti(args) -> int:
    cfg = _config(args)
    curve = _load_curve(cfg.curve_spec)
    ctx = KoszulContext(curve, _require_d(cfg))
    ps, qs = _resolve_window(cfg, ctx.bundle.r)
    table = betti_table(ctx, ps, qs, cfg.policy())
    if cfg.fmt == "json":
        info = curve_descriptors(curve).to_json_dict(curve)
        content = json.dumps(table.to_json_dict(info), indent=2) + "\n"
    elif cfg.fmt == "csv":
        content = table.to_csv()
    else:
        content = table.to_text()
    _emit(content, cfg.out)
    return 0


def cmd_verify(args) -> int:
    cfg = _config(args, extended=args.extended)
    if cfg.fmt == "csv":
        raise ValueError("verification reports support text or json output; "
                         "csv is the betti-entry schema")
    curve = _load_curve(cfg.curve_spec)
    ctx = KoszulContext(curve, _require_d(cfg))
    r = ctx.bundle.r
    if cfg.extended:
        if r < 3:
            raise ValueError(f"--extended needs r >= 3, got r={r}")
        ps, qs = [r - 3], [1]
    else:
        ps, qs = _resolve_window(cfg, r)
    report = verify_context(ctx, cfg.policy(), ps, qs)
    if cfg.fmt == "json":
        content = json.dumps(report.to_json_dict(), indent=2) + "\n"
    else:
        content = report.to_text()
    _emit(content, cfg.out)
    return 0 if report.passed else 1


def _add_common(sub, with_compute: bool = True) -> None:
    sub.add_argument("--curve", required=True,
                     help="curve spec: inline JSON or a file path")
    sub.add_argument("--format", choices=("text", "json", "csv"),
                     default="text")
    sub.add_argument("--out", default=None, help="also write output here")
    if with_compute:
        sub.add_argument("--d", type=int, required=True,
                         help="degree of the embedding bundle d*P_inf")
        sub.add_argument("--p", default=None, metavar="A..B",
                         help="p window (default 0..r)")
        sub.add_argument("--q", default=None, metavar="A..B",
                         help="q window within 0..3 (default 0..3)")
        sub.add_argument("--primes", type=int, default=3,
                         help="number of consensus primes")
        sub.add_argument("--seed", type=int, default=0,
                         help="prime-sampling seed (reports embed it)")
        sub.add_argument("--exact-cap", dest="exact_cap", type=int,
                         default=2000,
                         help="max dimension for exact rational ranks")
        sub.add_argument("--rank-policy", dest="rank_policy",
                         choices=("consensus", "exact"), default="consensus")
        sub.add_argument("--jobs", type=int, default=1,
                         help="max parallel rank tasks")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="syzcurves",
        description="Betti tables of curves embedded by degree >= 2g+1 "
                    "bundles, verified against the classical statements.")
    subs = parser.add_subparsers(dest="command", required=True)

    info = subs.add_parser("curve-info", help="inspect a curve model")
    _add_common(info, with_compute=False)
    info.set_defaults(func=cmd_curve_info)

    betti = subs.add_parser("betti", help="compute a Betti table window")
    _add_common(betti)
    betti.set_defaults(func=cmd_betti)

    verify = subs.add_parser("verify", help="verify predictions on a table")
    _add_common(verify)
    verify.add_argument("--extended", action="store_true",
                        help="check only the long-running (r-3, 1) position")
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ModelInvalidError, HypothesisError, PrimeExhaustionError,
            ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
