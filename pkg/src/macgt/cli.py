"""maccli: evaluate, verify and tabulate from the command line.

Exit codes: 0 success, 1 parse error / unknown suite / failed verification,
2 domain or pole error.  Errors are printed to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from .errors import DomainError, MacError, PoleError
from .gtcombin import format_signature, parse_nu, parse_signature
from .qkernel import QParams, format_rational, to_mpf
from . import suites

EVAL_TARGETS = ("poly", "character", "residue", "link", "pushforward", "phi", "generating")
SEED_MAX = 2 ** 63 - 1


class CliParseError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliParseError(message)


# ---------------------------------------------------------------------------
# argument types


def _rational(text: str) -> str:
    try:
        return format_rational(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {text!r}")
    return v


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer seed: {text!r}")
    if not -SEED_MAX - 1 <= v <= SEED_MAX:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def _signature(text: str) -> str:
    try:
        return format_signature(parse_signature(text))
    except (MacError, ValueError):
        raise argparse.ArgumentTypeError(f"not a signature: {text!r}")


def _nu(text: str) -> str:
    try:
        return parse_nu(text).to_text()
    except (MacError, ValueError):
        raise argparse.ArgumentTypeError(f"not a nu spec: {text!r}")


def _n_list(text: str) -> tuple:
    try:
        vals = tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of integers: {text!r}")
    if not vals or any(v < 1 for v in vals):
        raise argparse.ArgumentTypeError(f"N must be positive: {text!r}")
    return vals


def _decimal(text: str) -> str:
    try:
        v = mpmath.mpf(text)
    except (ValueError, TypeError):
        raise argparse.ArgumentTypeError(f"not a decimal: {text!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError("eps must be positive")
    return text.strip()


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class RunConfig:
    command: str
    target: Optional[str] = None
    q: str = "1/2"
    theta: int = 1
    seed: int = suites.DEFAULT_SEED
    eps: str = "1e-20"
    output: str = "json"
    lam: Optional[str] = None
    mu: Optional[str] = None
    nu: Optional[str] = None
    N: tuple = ()
    m: Optional[int] = None
    x: tuple = ()
    points: int = suites.DEFAULT_POINTS
    max_N: int = suites.DEFAULT_MAX_N

    def to_argv(self) -> list:
        """Command-line arguments that parse back to this configuration."""
        argv = [self.command]
        if self.target is not None:
            argv.append(self.target)
        argv += ["--q", self.q, "--theta", str(self.theta), "--seed", str(self.seed),
                 "--eps", self.eps, "--output", self.output]
        if self.lam is not None:
            argv.append(f"--lambda={self.lam}")
        if self.mu is not None:
            argv.append(f"--mu={self.mu}")
        if self.nu is not None:
            argv.append(f"--nu={self.nu}")
        if self.N:
            argv += ["--N", ",".join(str(n) for n in self.N)]
        if self.m is not None:
            argv += ["--m", str(self.m)]
        for x in self.x:
            argv.append(f"--x={x}")
        argv += ["--points", str(self.points), "--max-N", str(self.max_N)]
        return argv

    def qparams(self) -> QParams:
        return QParams(Fraction(self.q), self.theta)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--q", type=_rational, default="1/2")
    common.add_argument("--theta", type=_positive_int, default=1)
    common.add_argument("--seed", type=_seed, default=suites.DEFAULT_SEED)
    common.add_argument("--eps", type=_decimal, default="1e-20")
    common.add_argument("--output", choices=("json", "csv"), default="json")
    common.add_argument("--lambda", dest="lam", type=_signature)
    common.add_argument("--mu", type=_signature)
    common.add_argument("--nu", type=_nu)
    common.add_argument("--N", type=_n_list, default=())
    common.add_argument("--m", type=_nonneg_int)
    common.add_argument("--x", type=_rational, action="append", default=[])
    common.add_argument("--points", type=_positive_int, default=suites.DEFAULT_POINTS)
    common.add_argument("--max-N", dest="max_N", type=_positive_int, default=suites.DEFAULT_MAX_N)

    parser = _Parser(prog="maccli", description="Macdonald characters and boundary computations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    ev = sub.add_parser("eval", parents=[common], help="evaluate one quantity")
    ev.add_argument("target", choices=EVAL_TARGETS)
    ve = sub.add_parser("verify", parents=[common], help="run a verification suite")
    ve.add_argument("target", nargs="?", default=None)
    ve.add_argument("--suite", dest="suite_flag")
    sub.add_parser("converge", parents=[common], help="convergence table of prelimit characters")
    return parser


def parse_config(argv: Sequence[str]) -> RunConfig:
    ns = build_parser().parse_args(list(argv))
    target = getattr(ns, "target", None)
    if ns.command == "verify":
        flag = ns.suite_flag
        if target is not None and flag is not None and target != flag:
            raise CliParseError("conflicting suite names")
        target = target or flag or "all"
    kw = {f.name: getattr(ns, f.name) for f in fields(RunConfig) if f.name not in ("command", "target")}
    kw["x"] = tuple(kw["x"])
    return RunConfig(command=ns.command, target=target, **kw)


# ---------------------------------------------------------------------------
# commands


def _one_n(cfg: RunConfig, default: Optional[int] = None) -> int:
    if not cfg.N:
        if default is None:
            raise CliParseError("--N is required")
        return default
    if len(cfg.N) != 1:
        raise DomainError("this command takes a single --N")
    return cfg.N[0]


def _need(value, flag: str):
    if value is None:
        raise CliParseError(f"{flag} is required")
    return value


def _xs(cfg: RunConfig) -> list:
    return [Fraction(x) for x in cfg.x]


def _m_of(cfg: RunConfig) -> int:
    m = cfg.m if cfg.m is not None else len(cfg.x)
    if cfg.x and m != len(cfg.x):
        raise DomainError(f"--m {m} does not match the {len(cfg.x)} values of --x")
    return m


def cmd_eval(cfg: RunConfig):
    from . import macpoly, qchar, qtboundary
    qp = cfg.qparams()
    t = cfg.target
    if t in ("poly", "character", "residue", "pushforward"):
        lam = parse_signature(_need(cfg.lam, "--lambda"))
        N = _one_n(cfg, len(lam))
        if N != len(lam):
            raise DomainError(f"signature {format_signature(lam)} does not have length N = {N}")
    if t == "poly":
        return macpoly.macdonald_poly(lam, N, qp).to_json()
    if t == "character":
        m = _m_of(cfg)
        if m == 0:
            raise CliParseError("--x is required")
        return format_rational(qchar.character(lam, N, _xs(cfg), qp))
    if t == "residue":
        if len(cfg.x) != 1:
            raise DomainError("the residue form takes exactly one --x")
        return format_rational(qchar.residue_character(lam, N, _xs(cfg)[0], qp))
    if t == "link":
        lam = parse_signature(_need(cfg.lam, "--lambda"))
        mu = parse_signature(_need(cfg.mu, "--mu"))
        return format_rational(qtboundary.link_one_step(lam, mu, qp))
    if t == "pushforward":
        m = _need(cfg.m, "--m")
        if not 0 <= m <= N:
            raise DomainError(f"need 0 <= m <= N, got m = {m}")
        return qtboundary.pushforward_delta(lam, m, qp).to_json()
    if t == "phi":
        nu = parse_nu(_need(cfg.nu, "--nu"))
        if not cfg.x:
            raise CliParseError("--x is required")
        return qtboundary.phi_nu_multi(nu, _xs(cfg), qp, mpmath.mpf(cfg.eps)).to_json()
    if t == "generating":
        m = _m_of(cfg)
        if cfg.nu is not None:
            nu = parse_nu(cfg.nu)
            N = _one_n(cfg)
            meas = qtboundary.boundary_measure_approx(nu, m, N, qp)
        else:
            lam = parse_signature(_need(cfg.lam, "--lambda"))
            if not 0 <= m <= len(lam):
                raise DomainError(f"need 0 <= m <= {len(lam)}, got m = {m}")
            meas = qtboundary.pushforward_delta(lam, m, qp)
        return format_rational(qtboundary.generating_function_eval(meas, _xs(cfg), qp))
    raise DomainError(f"unknown eval target {t!r}")


def cmd_verify(cfg: RunConfig) -> dict:
    if cfg.target != "all" and cfg.target not in suites.SUITES:
        raise CliParseError(f"unknown suite {cfg.target!r}; choose from {', '.join(suites.SUITES + ('all',))}")
    opt = suites.Options(seed=cfg.seed, points=cfg.points, max_N=cfg.max_N)
    return suites.run_suite(cfg.target, opt)


def cmd_converge(cfg: RunConfig):
    from .qtboundary import convergence_table, residuals_nonincreasing
    qp = cfg.qparams()
    nu = parse_nu(_need(cfg.nu, "--nu"))
    xs = _xs(cfg)
    if not xs:
        raise DomainError("--x is required")
    m = _m_of(cfg)
    Ns = cfg.N or (m + 1, m + 5, m + 10, m + 20)
    rows = convergence_table(nu, xs, Ns, qp, mpmath.mpf(cfg.eps))
    out = [{"N": r["N"], "exact": format_rational(r["exact"]),
            "exact_decimal": mpmath.nstr(to_mpf(r["exact"]), 30),
            "phi": r["phi"].to_json(), "residual": mpmath.nstr(r["residual"], 6)} for r in rows]
    return {"nu": nu.to_text(), "x": [format_rational(x) for x in xs], "q": cfg.q, "theta": cfg.theta,
            "rows": out, "nonincreasing": residuals_nonincreasing(rows)}


def _csv_table(table: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "exact", "exact_decimal", "phi", "phi_error_bound", "residual"])
    for r in table["rows"]:
        w.writerow([r["N"], r["exact"], r["exact_decimal"], r["phi"]["value"], r["phi"]["error_bound"], r["residual"]])
    return buf.getvalue()


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=True) + "\n"


def _error(kind: str, message: str) -> str:
    return _dump({"error": {"kind": kind, "message": message}})


def run(argv: Sequence[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        cfg = parse_config(argv)
    except CliParseError as exc:
        err.write(_error("parse", str(exc)))
        return 1
    try:
        if cfg.output == "csv" and cfg.command != "converge":
            raise CliParseError("csv output is only available for converge")
        if cfg.command == "eval":
            out.write(_dump(cmd_eval(cfg)))
            return 0
        if cfg.command == "verify":
            report = cmd_verify(cfg)
            out.write(_dump(report))
            return 0 if report["failed"] == 0 else 1
        table = cmd_converge(cfg)
        out.write(_csv_table(table) if cfg.output == "csv" else _dump(table))
        return 0
    except CliParseError as exc:
        err.write(_error("parse", str(exc)))
        return 1
    except PoleError as exc:
        err.write(_error("pole", str(exc)))
        return 2
    except (DomainError, ZeroDivisionError) as exc:
        err.write(_error("domain", str(exc)))
        return 2


def main(argv: Optional[Sequence[str]] = None) -> int:
    code = run(sys.argv[1:] if argv is None else argv)
    if argv is None:
        sys.exit(code)
    return code
