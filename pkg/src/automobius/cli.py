"""automobius command line: mobius, verify, mertens, decay, correlate, maass-check.

Exit status: 0 ok, 1 internal error or failed verification, 2 bad
arguments or expression syntax, 3 bad or missing data.  Errors go to stderr
as ``error[CODE] key=value ...: message``.
"""
from __future__ import annotations

import argparse
import logging
import math
import os
import platform
import random
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import ArgumentError, AutomobiusError, CapabilityError, DataError, RepSyntaxError
from .experiments import (
    MOMENTS,
    decay_experiment,
    eta_exponent,
    inequality_grid,
    inequality_margin,
    maass_abs_bound_check,
    mertens_sum,
)
from .maass import load_maass
from .registry import FormRegistry
from .repalg import (
    check_decomposition,
    check_power_identities,
    exponents,
    fourth_power_decomposition,
    fourth_power_trivial_count,
    parse_rep,
    pi_times_pi_decomposition,
    theorem_rep,
    tensor_power,
)
from .report import Report
from .sieve import abs_partial_sums, correlate, mobius_from_factorization, mobius_table, signed_partial_sums

log = logging.getLogger("automobius")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 3
SCOPES = ("decomposition", "identities", "inequalities")
SPOT_CHECKS = 32


def count(text):
    """Positive integer, also written as '1e6' or '1_000_000'."""
    try:
        return int(text.replace("_", ""))
    except ValueError:
        pass
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v) or v != int(v):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(v)


def threads_arg(text):
    if text == "auto":
        return os.cpu_count() or 1
    n = count(text)
    if n < 1:
        raise argparse.ArgumentTypeError("threads must be >= 1")
    return n


def checkpoints_arg(text):
    if text == "decades":
        return None
    try:
        xs = [count(x.strip()) for x in text.split(",") if x.strip()]
    except argparse.ArgumentTypeError as exc:
        raise argparse.ArgumentTypeError(f"checkpoints: {exc}") from None
    if not xs or any(b <= a for a, b in zip(xs, xs[1:])):
        raise argparse.ArgumentTypeError("checkpoints must be 'decades' or a strictly increasing list")
    return xs


@dataclass
class RunConfig:
    rep: str = "zeta"
    N: int = 10 ** 6
    checkpoints: list | None = None
    cache_dir: str | None = None
    maass_files: list = field(default_factory=list)
    out: str | None = None
    format: str = "csv"
    threads: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.N < 1:
            raise ArgumentError(f"N must be >= 1, got {self.N}")
        if self.out:
            parent = os.path.dirname(os.path.abspath(self.out))
            if not os.path.isdir(parent) or not os.access(parent, os.W_OK):
                raise ArgumentError(f"output directory {parent} is not writable", path=self.out)


class Session:
    """Registry plus loaded Maass files for one invocation."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.registry = FormRegistry(config.cache_dir)
        self.datasets = [load_maass(p, registry=self.registry) for p in config.maass_files]

    def rep(self, text=None):
        return parse_rep(self.config.rep if text is None else text, known_forms=self.registry.known_forms())

    def meta(self, **extra):
        out = {
            "automobius": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "seed": self.config.seed,
            "maass": [d.provenance() for d in self.datasets],
        }
        out.update(extra)
        return out

    def emit(self, report: Report):
        if self.config.out:
            report.write(self.config.out, self.config.format)
        else:
            sys.stdout.write(report.render(self.config.format))


# ------------------------------------------------------------ commands

def cmd_mobius(s: Session):
    e = s.rep()
    c = s.config
    t = mobius_table(e, c.N, s.registry, threads=c.threads)
    absum = abs_partial_sums(t, c.checkpoints)
    signed = signed_partial_sums(t, c.checkpoints)
    rng = random.Random(c.seed)
    sample = sorted(rng.sample(range(1, c.N + 1), min(SPOT_CHECKS, c.N)))
    spot = max(abs(t[n] - mobius_from_factorization(e, n, s.registry)) for n in sample)
    rows = [(x, a, a / x, b) for (x, a), (_, b) in zip(absum.checkpoints, signed.checkpoints)]
    meta = s.meta(rep=e.to_dsl(), N=c.N, degree=t.degree,
                  support=f"mu vanishes off {t.degree + 1}th-power-free n",
                  density=rows[-1][2], spot_check_max_error=spot, spot_check_n=sample)
    s.emit(Report("mobius", ["x", "abs_sum", "abs_density", "signed_sum"], rows, meta))
    if spot > 1e-9:
        raise AutomobiusError(f"sieve disagrees with factorization by {spot:.3e}")
    return EXIT_OK


def _verify_rows(scopes):
    rows = []
    if "decomposition" in scopes:
        for m in range(9):
            for r in range(9):
                rows.append(("decomposition", f"Sym^{m} x Sym^{m + r}", "", check_decomposition(m, r)))
    if "identities" in scopes:
        for res in check_power_identities():
            rows.append(("identities", res.name, f"degree {res.lhs_degree}", res.passed))
        for m1 in range(4):
            for m2 in range(4):
                if m1 == m2 == 0:
                    continue
                pi = theorem_rep(m1, m2)
                d = (m1 + 1) * (m2 + 1)
                sq, quad = tensor_power(pi, 2), tensor_power(pi, 4)
                e_sq, e_quad = exponents(sq), exponents(quad)
                ok2 = e_sq == exponents(pi_times_pi_decomposition(m1, m2)) and e_sq.degree == d ** 2
                ok4 = (e_quad == exponents(fourth_power_decomposition(m1, m2)) and e_quad.degree == d ** 4
                       and e_quad.trivial_multiplicity() == fourth_power_trivial_count(m1, m2) == d)
                rows.append(("identities", f"pi x pi ({m1},{m2})", f"degree {e_sq.degree}", ok2))
                rows.append(("identities", f"pi^4 ({m1},{m2})", f"degree {e_quad.degree}", ok4))
    if "inequalities" in scopes:
        for m in range(1, 31):
            g = inequality_grid("lemma22", 0.0, 1.0, 10 ** 6, m=m)
            rows.append(("inequalities", g.id, f"min margin {g.min_margin:.3e} at t={g.argmin:.6f}", g.holds()))
        g = inequality_grid("ho", 0.0, 10.0, 10 ** 6 + 1)
        at1 = float(inequality_margin("ho", 1.0))
        rows.append(("inequalities", "ho", f"min margin {g.min_margin:.3e} at t={g.argmin:.6f}",
                     g.holds() and abs(at1) <= 1e-12))
        for m1 in range(6):
            for m2 in range(6):
                if m1 or m2:
                    eta = eta_exponent(m1, m2)
                    rows.append(("inequalities", f"eta ({m1},{m2})", f"{eta:.6g}", eta > 0))
    return rows


def cmd_verify(s: Session, scopes):
    rows = _verify_rows(scopes)
    failed = [r for r in rows if not r[3]]
    if s.config.out:
        s.emit(Report("verify", ["scope", "check", "detail", "passed"], rows, s.meta(scopes=list(scopes))))
    else:
        width = max(len(r[1]) for r in rows)
        for scope, name, detail, ok in rows:
            print(f"{'PASS' if ok else 'FAIL'}  {scope:<13} {name:<{width}}  {detail}")
        print(f"{len(rows) - len(failed)}/{len(rows)} passed")
    for r in failed:
        print(f"error[E_VERIFY] scope={r[0]}: {r[1]} failed", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_mertens(s: Session, moment, x):
    e = s.rep()
    rep = mertens_sum(e, moment, x, s.registry, checkpoints=s.config.checkpoints)
    r = rep.to_report()
    r.meta = s.meta(**r.meta)
    s.emit(r)
    return EXIT_OK


def cmd_decay(s: Session):
    e = s.rep()
    rep = decay_experiment(e, s.config.N, s.registry, checkpoints=s.config.checkpoints, threads=s.config.threads)
    r = rep.to_report()
    r.meta = s.meta(**r.meta)
    s.emit(r)
    return EXIT_OK


def cmd_correlate(s: Session, xi):
    e = s.rep()
    c = s.config
    t = mobius_table(e, c.N, s.registry, threads=c.threads)
    series = correlate(t, xi, checkpoints=c.checkpoints)
    s.emit(Report("correlate", ["x", "correlation"], list(series.checkpoints),
                  s.meta(rep=e.to_dsl(), N=c.N, xi=xi)))
    return EXIT_OK


def cmd_maass_check(s: Session, x):
    if not s.datasets:
        raise ArgumentError("maass-check needs --file")
    d = s.datasets[0]
    rep = maass_abs_bound_check(d, x if x is not None else int(d.n[-1]), checkpoints=s.config.checkpoints)
    r = rep.to_report()
    r.meta = s.meta(**r.meta)
    s.emit(r)
    return EXIT_OK if rep.pointwise_ok else EXIT_FAIL


# ------------------------------------------------------------ parser

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rep", default="zeta", help="representation expression, e.g. 'sym1(f12) x sym1(f16)'")
    common.add_argument("--N", type=count, default=10 ** 6, help="sieve length (default 1e6)")
    common.add_argument("--checkpoints", type=checkpoints_arg, default=None,
                        help="'decades' (default) or comma-separated x values")
    common.add_argument("--file", action="append", default=[], help="Maass eigenvalue file (repeatable)")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--threads", type=threads_arg, default=1, help="thread budget, integer or 'auto'")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized spot checks")

    p = argparse.ArgumentParser(prog="automobius", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("mobius", parents=[common], help="sieve mu_pi(n) and report partial sums")
    v = sub.add_parser("verify", parents=[common], help="exact identities and inequality grids")
    v.add_argument("scope", nargs="*", help=f"any of {', '.join(SCOPES)} (default all)")
    m = sub.add_parser("mertens", parents=[common], help="sum_{p<=x} w(p)/p against log log x")
    m.add_argument("--moment", choices=MOMENTS, default="square")
    m.add_argument("--x", type=count, default=10 ** 6)
    sub.add_parser("decay", parents=[common], help="S(x)/x and log^eta x S(x)/x")
    c = sub.add_parser("correlate", parents=[common], help="(1/x)|sum mu(n) xi(n)|")
    c.add_argument("--xi", default="1", help="'1', 'e(<alpha>)' or 'file:<path>'")
    mc = sub.add_parser("maass-check", parents=[common], help="Ho-surrogate bound for a Maass file")
    mc.add_argument("--x", type=count, default=None)
    return p


def _dispatch(args, session):
    if args.command == "mobius":
        return cmd_mobius(session)
    if args.command == "verify":
        bad = sorted(set(args.scope) - set(SCOPES))
        if bad:
            raise ArgumentError(f"unknown verify scope {bad[0]!r}; choose from {', '.join(SCOPES)}")
        scopes = tuple(x for x in SCOPES if x in (args.scope or SCOPES))
        return cmd_verify(session, scopes)
    if args.command == "mertens":
        return cmd_mertens(session, args.moment, args.x)
    if args.command == "decay":
        return cmd_decay(session)
    if args.command == "correlate":
        return cmd_correlate(session, args.xi)
    return cmd_maass_check(session, args.x)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    try:
        config = RunConfig(rep=args.rep, N=args.N, checkpoints=args.checkpoints, maass_files=args.file,
                           out=args.out, format=args.format, threads=args.threads, seed=args.seed)
        return _dispatch(args, Session(config))
    except (RepSyntaxError, ArgumentError, CapabilityError) as exc:
        print(exc.describe(), file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(exc.describe(), file=sys.stderr)
        return EXIT_DATA
    except AutomobiusError as exc:
        print(exc.describe(), file=sys.stderr)
        return EXIT_FAIL
    except Exception as exc:  # noqa: BLE001
        print(f"error[E_INTERNAL]: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
