"""Command-line front end.

Examples:
    zarmod cf expand 5 13
    zarmod zaremba --p 101 --M 3
    zarmod zaremba --p-range 1000..100000 --M 3 --M 4 --M 5 --out z.csv
    zarmod covering --p 101 --p 211 --M 2 --M 3 --beta 0.3 --beta 0.5
    zarmod verify-all
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from zarmod.bounded_sets import DEFAULT_CONVENTION, enumerate_FMQ
from zarmod.contfrac import CFExpansion, cf_expand, cf_value, convergents
from zarmod.harness import (
    ExperimentConfig,
    geometric_primes,
    parse_config,
    parse_int_list,
    run_covering_suite,
    run_flattening,
    run_girth,
    run_incidence,
    run_popprod,
    run_sumprod_sweep,
    run_zaremba_scaling,
    verify_all,
    write_rows,
)
from zarmod.modp import is_prime


def _add_common(sub):
    sub.add_argument("--p", type=int, action="append", default=[],
                     help="prime modulus (repeatable)")
    sub.add_argument("--p-range", default=None,
                     help="lo..hi, expanded to the primes in the range")
    sub.add_argument("--M", type=int, action="append", default=[],
                     help="partial quotient bound (repeatable)")
    sub.add_argument("--N", type=int, default=5, help="generator family size")
    sub.add_argument("--beta", type=float, action="append", default=[],
                     help="denominator exponent in (0, 1/2] (repeatable)")
    sub.add_argument("--rho", type=int, action="append", default=[],
                     help="dilation residue (repeatable)")
    sub.add_argument("--alpha", type=float, default=0.5,
                     help="richness threshold")
    sub.add_argument("--depth-cap", type=int, default=10,
                     help="word-length cap for collision search")
    sub.add_argument("--out", default=None, help="output path (default stdout)")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--seed", type=int, default=0, help="64-bit RNG seed")
    sub.add_argument("--threads", type=int, default=1)
    sub.add_argument("--config", default=None,
                     help="key = value config file; flags override it")


def _build_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig()
    if args.config:
        raw = parse_config(args.config)
        cfg.primes = raw.get("primes", [])
        cfg.M_values = raw.get("M", [])
        cfg.N = raw.get("N", cfg.N)
        cfg.betas = raw.get("beta", [])
        cfg.rhos = raw.get("rho", [])
        cfg.alpha = raw.get("alpha", cfg.alpha)
        cfg.depth_cap = raw.get("depth_cap", cfg.depth_cap)
        cfg.out = raw.get("out", None)
        cfg.format = raw.get("format", cfg.format)
        cfg.seed = raw.get("seed", cfg.seed)
        cfg.threads = raw.get("threads", cfg.threads)
    if args.p:
        cfg.primes = list(args.p)
    if args.p_range:
        cfg.primes = cfg.primes + parse_int_list(args.p_range)
    if args.M:
        cfg.M_values = list(args.M)
    if args.N != 5 or not cfg.N:
        cfg.N = args.N
    if args.beta:
        cfg.betas = list(args.beta)
    if args.rho:
        cfg.rhos = list(args.rho)
    cfg.alpha = args.alpha
    cfg.depth_cap = args.depth_cap
    if args.out:
        cfg.out = args.out
    if args.format != "csv":
        cfg.format = args.format
    if args.seed:
        cfg.seed = args.seed
    if args.threads != 1:
        cfg.threads = args.threads
    return cfg.validate()


def _require(cfg: ExperimentConfig, primes=False, M=False, beta=False):
    if primes and not cfg.primes:
        raise SystemExit("error: no primes given (--p / --p-range / config)")
    if M and not cfg.M_values:
        raise SystemExit("error: no M values given (--M / config)")
    if beta and not cfg.betas:
        raise SystemExit("error: no beta values given (--beta / config)")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="zarmod",
        description="Continued fractions mod p: bounded-quotient sets, "
                    "group measures, and Cayley graph experiments.")
    subs = ap.add_subparsers(dest="command", required=True)

    cf = subs.add_parser("cf", help="continued fraction utilities")
    cfsubs = cf.add_subparsers(dest="cf_command", required=True)
    cfe = cfsubs.add_parser("expand", help="canonical expansion of a/q")
    cfe.add_argument("a", type=int)
    cfe.add_argument("q", type=int)
    cfv = cfsubs.add_parser("value", help="value of [0; b1,...,bs]")
    cfv.add_argument("quotients", type=int, nargs="+")
    cfc = cfsubs.add_parser("convergents", help="convergent table of a/q")
    cfc.add_argument("a", type=int)
    cfc.add_argument("q", type=int)

    for name, helptext in (
        ("zaremba", "bounded-quotient residue counts and scaling fit"),
        ("fmq", "enumerate F_M(Q)"),
        ("covering", "floored-set covering verification"),
        ("sumprod", "sumset / popular-product diagnostics"),
        ("girth", "collision depth against the norm bounds"),
        ("flatten", "self-convolution flattening profile"),
        ("incidence", "exhaustive incidence identity"),
        ("popprod", "popular-product pair-count cross-check"),
        ("verify-all", "run every asserted check"),
    ):
        sub = subs.add_parser(name, help=helptext)
        _add_common(sub)
        if name == "fmq":
            sub.add_argument("--Q", type=int, required=True,
                             help="denominator bound")
            sub.add_argument("--convention",
                             choices=("canonical", "relaxed"),
                             default=DEFAULT_CONVENTION)

    args = ap.parse_args(argv)

    if args.command == "cf":
        return _cmd_cf(args)

    cfg = _build_config(args)
    cfg.experiment = args.command

    if args.command == "zaremba":
        return _cmd_zaremba(cfg)
    if args.command == "fmq":
        return _cmd_fmq(cfg, args.Q, args.convention)
    if args.command == "covering":
        _require(cfg, primes=True, M=True, beta=True)
        header, rows, ok = run_covering_suite(cfg)
        write_rows(header, rows, cfg)
        return 0 if ok else 1
    if args.command == "sumprod":
        _require(cfg, primes=True)
        header, rows = run_sumprod_sweep(cfg)
        write_rows(header, rows, cfg)
        return 0
    if args.command == "girth":
        _require(cfg, primes=True)
        header, rows, ok = run_girth(cfg)
        write_rows(header, rows, cfg)
        return 0 if ok else 1
    if args.command == "flatten":
        _require(cfg, primes=True)
        header, rows = run_flattening(cfg)
        write_rows(header, rows, cfg)
        return 0
    if args.command == "incidence":
        _require(cfg, primes=True)
        header, rows, ok = run_incidence(cfg)
        write_rows(header, rows, cfg)
        return 0 if ok else 1
    if args.command == "popprod":
        _require(cfg, primes=True)
        header, rows, ok = run_popprod(cfg)
        write_rows(header, rows, cfg)
        return 0 if ok else 1
    if args.command == "verify-all":
        results = verify_all(seed=cfg.seed, verbose_sink=print)
        failed = [r for r in results if not r.passed]
        print(f"{len(results) - len(failed)}/{len(results)} checks passed")
        return 0 if not failed else 1
    raise AssertionError(f"unhandled command {args.command}")


def _cmd_cf(args) -> int:
    if args.cf_command == "expand":
        cf = cf_expand(args.a, args.q)
        print(" ".join(map(str, cf.quotients)) if cf.quotients else "(empty)")
        return 0
    if args.cf_command == "value":
        val = cf_value(CFExpansion(tuple(args.quotients)))
        print(f"{val.numerator}/{val.denominator}")
        return 0
    if args.cf_command == "convergents":
        tab = convergents(cf_expand(args.a, args.q))
        for u, v in tab.pairs():
            print(f"{u}/{v}")
        return 0
    raise AssertionError


def _cmd_zaremba(cfg: ExperimentConfig) -> int:
    _require(cfg, primes=True, M=True)
    if len(cfg.primes) >= 3:
        header, rows = run_zaremba_scaling(cfg)
    else:
        from zarmod.bounded_sets import half_convergent_set, zaremba_count

        header = ["p", "M", "card_Z", "card_A"]
        rows = [(p, M, zaremba_count(p, M), len(half_convergent_set(p, M)))
                for M in cfg.M_values for p in cfg.primes]
    write_rows(header, rows, cfg)
    return 0


def _cmd_fmq(cfg: ExperimentConfig, Q: int, convention: str) -> int:
    _require(cfg, M=True)
    rows = []
    for M in cfg.M_values:
        fs = enumerate_FMQ(M, Q, convention)
        for f in fs.members:
            rows.append((M, Q, convention, f.numerator, f.denominator))
    write_rows(["M", "Q", "convention", "numerator", "denominator"], rows, cfg)
    return 0


if __name__ == "__main__":
    sys.exit(main())
