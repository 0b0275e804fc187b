"""Command-line interface.

Subcommands: tables, sigma, moments, sweep, design, verify.  All tabular
output is CSV with a header row, '.' decimals, 15 significant digits and LF
line endings.  Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .charsums import tilde_g
from .designs import design_recipe, exact3design_table, balanced_ensemble
from .gf import field, is_prime, odd_primes
from .lagrangian import enumerate_sigma, sigma_cubic_character
from .moments import (
    CubicFunction,
    MagicStateSpec,
    frame_potential3,
    kappa_profile,
    moment_norm_bounds,
    phi3_stab,
    shadow_norm_ensemble_bounds,
    shadow_norm_orbit_stab_observable,
    shadow_norm_stab_projector,
    stabilizer_profile,
    summarize,
)

QUANTITIES = ("phi3", "qnorm", "shadow-stab-K", "shadow-ensemble")
FAMILIES = ("stabilizer", "canonical-magic", "per-character-magic", "balanced")


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """Locale-independent decimal with 15 significant digits."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        x = float(x)
    return f"{float(x):.15g}"


def write_csv(header, rows, out=None) -> None:
    out = sys.stdout if out is None else out
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([c if isinstance(c, str) else fmt(c) for c in r])


# ---------------------------------------------------------------------------
# tables / sigma


def cmd_tables(which: str, dmax: int = 1000, out=None) -> int:
    if which == "nu":
        rows = [(d, field(d).nu) for d in odd_primes(min(dmax, 99))]
        write_csv(("d", "nu"), rows, out)
    elif which == "tgd":
        rows = []
        for d in odd_primes(dmax):
            if d % 3 == 1:
                t = tilde_g(d)
                rows.append((d, t.s, t.sq))
        write_csv(("d", "g_tilde", "g_tilde_sq"), rows, out)
    elif which == "exact3design":
        write_csv(("d", "g_tilde_sq", "S", "class"), exact3design_table(dmax), out)
    else:
        raise UsageError(f"unknown table {which}")
    return 0


def cmd_sigma(d: int, out=None) -> int:
    cat = enumerate_sigma(d)
    rows = []
    for i, T in enumerate(cat):
        v = T.vector
        chi = "" if T.is_sym else str(sigma_cubic_character(T))
        rows.append((i, T.y, T.parity, T.is_sym, T.is_ns, T.is_def, T.is_iso, T.is_delta,
                     int(v[0]), int(v[1]), int(v[2]), chi))
    write_csv(("index", "id_y", "parity", "sym", "ns", "def", "iso", "delta",
               "v1", "v2", "v3", "cubic_char"), rows, out)
    return 0


# ---------------------------------------------------------------------------
# moments


def parse_spec(text: str, d: int, n: int) -> MagicStateSpec:
    """'c3,c2,c1,c0;c3,...' (d = 3: 'c3,c2') or 'stabilizer'/'' for k = 0."""
    text = (text or "").strip()
    if text in ("", "stabilizer", "stab"):
        return MagicStateSpec(d, n, ())
    factors = []
    for part in text.split(";"):
        nums = [int(x) for x in part.split(",") if x.strip()]
        if not nums:
            raise UsageError(f"empty cubic in spec {text!r}")
        factors.append(CubicFunction(d, *nums))
    return MagicStateSpec(d, n, tuple(factors))


def cmd_moments(d: int, n: int, spec: str, csv_row: bool = False, out=None) -> int:
    out = sys.stdout if out is None else out
    s = parse_spec(spec, d, n)
    prof = stabilizer_profile(d, n) if s.k == 0 else kappa_profile(s)
    summ = summarize(prof)
    b = moment_norm_bounds(prof)
    data = summ.as_dict()
    data.update({"k": s.k, "norm_lower": b.lower, "norm_upper": b.upper, "norm_exact": b.exact})
    for key, val in data.items():
        out.write(f"{key}={val if isinstance(val, str) else fmt(val)}\n")
    if csv_row:
        keys = list(data)
        write_csv(keys, [[data[k] for k in keys]], out)
    return 0


# ---------------------------------------------------------------------------
# sweep


@dataclass
class SweepConfig:
    d: list = dc_field(default_factory=lambda: [3, 5, 7])
    n: list = dc_field(default_factory=lambda: [1])
    k: list | None = None  # None: k = n
    quantity: str = "phi3"
    family: str = "stabilizer"
    K: int = 1
    j: int = 0

    def grid(self) -> list:
        pts = []
        for d in self.d:
            for n in self.n:
                ks = [0] if self.family == "stabilizer" else (self.k if self.k is not None else [n])
                for k in ks:
                    pts.append((d, n, k))
        return pts


def parse_int_list(text: str, primes: bool = False) -> list:
    """'3,5,7' or 'a:b' (inclusive; odd primes only when ``primes``)."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            a, b = (int(x) for x in part.split(":"))
            rng = range(a, b + 1)
            out.extend(x for x in rng if not primes or (x > 2 and is_prime(x)))
        else:
            out.append(int(part))
    return out


def read_config(path: str) -> dict:
    cfg = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"bad config line {line!r}")
            key, val = (x.strip() for x in line.split("=", 1))
            cfg[key] = val
    return cfg


def build_sweep_config(args) -> SweepConfig:
    cfg = read_config(args.config) if args.config else {}
    for key in ("d", "n", "k", "quantity", "family", "K", "j"):
        v = getattr(args, key, None)
        if v is not None:
            cfg[key] = v
    c = SweepConfig()
    if "d" in cfg:
        c.d = parse_int_list(cfg["d"], primes=True)
    if "n" in cfg:
        c.n = parse_int_list(cfg["n"])
    if "k" in cfg:
        c.k = parse_int_list(cfg["k"])
    c.quantity = cfg.get("quantity", c.quantity)
    c.family = cfg.get("family", c.family)
    c.K = int(cfg.get("K", c.K))
    c.j = int(cfg.get("j", c.j))
    if c.quantity not in QUANTITIES:
        raise UsageError(f"quantity must be one of {QUANTITIES}")
    if c.family not in FAMILIES:
        raise UsageError(f"family must be one of {FAMILIES}")
    return c


def _profile(c: SweepConfig, d: int, n: int, k: int):
    if c.family == "stabilizer":
        return stabilizer_profile(d, n)
    if c.family == "canonical-magic":
        return kappa_profile(MagicStateSpec(d, n, (CubicFunction.canonical(d),) * k))
    if c.family == "per-character-magic":
        c3 = pow(field(d).nu, c.j, d)
        return kappa_profile(MagicStateSpec(d, n, (CubicFunction(d, c3),) * k))
    if d % 3 == 1:
        return kappa_profile(balanced_ensemble(d, n, k))
    return kappa_profile(MagicStateSpec(d, n, (CubicFunction.canonical(d),) * k))


SWEEP_HEADER = ("d", "n", "k", "family", "quantity", "value", "lower", "upper", "rational", "status")


def sweep_row(c: SweepConfig, d: int, n: int, k: int) -> tuple:
    base = (d, n, k, c.family, c.quantity)
    try:
        if d < 3 or not is_prime(d) or n < 1 or k > n or (c.family != "stabilizer" and k < 1):
            raise ValueError("outside analytic coverage")
        prof = _profile(c, d, n, k)
        val = lo = hi = None
        rat = ""
        if c.quantity == "phi3":
            val = frame_potential3(prof)
            if c.family == "stabilizer":
                rat = str(phi3_stab(n, d))
        elif c.quantity == "qnorm":
            b = moment_norm_bounds(prof)
            lo, hi = b.lower, b.upper
            val = b.value
        elif c.quantity == "shadow-stab-K":
            val = shadow_norm_orbit_stab_observable(prof, c.K)
            if c.family == "stabilizer":
                rat = str(shadow_norm_stab_projector(n, d, c.K)[0])
        else:
            lo, hi = shadow_norm_ensemble_bounds(prof)
        return base + (val, lo, hi, rat, "ok")
    except (ValueError, ArithmeticError, OverflowError):
        return base + (None, None, None, "", "unsupported")


def thread_count() -> int:
    env = os.environ.get("QDL_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError("QDL_THREADS must be an integer")
    return min(8, os.cpu_count() or 1)


def cmd_sweep(c: SweepConfig, out=None) -> int:
    pts = c.grid()
    with ThreadPoolExecutor(max_workers=thread_count()) as ex:
        rows = list(ex.map(lambda p: sweep_row(c, *p), pts))  # map keeps grid order
    write_csv(SWEEP_HEADER, rows, out)
    return 0


# ---------------------------------------------------------------------------
# design / verify


def cmd_design(d: int | None, n: int | None, k: int | None, table_s: bool, dmax: int, out=None) -> int:
    out = sys.stdout if out is None else out
    if table_s:
        return cmd_tables("exact3design", dmax, out)
    if d is None or n is None:
        raise UsageError("design needs --d and --n (or --table-s)")
    rec = design_recipe(d, n, k)
    if rec is None:
        out.write(f"d={d}\nn={n}\nrecipe=none\n")
        return 0
    for line in rec.lines():
        out.write(line + "\n")
    return 0


def cmd_verify(suite: str, out=None, probes: bool = False) -> int:
    from .verify import run_suite

    out = sys.stdout if out is None else out
    checks = run_suite(suite)
    for c in checks:
        out.write(c.line() + "\n")
    bad = sum(not c.passed for c in checks)
    out.write(f"summary suite={suite} checks={len(checks)} failed={bad}\n")
    if probes:
        from .verify import probe_conjectures

        for line in probe_conjectures():
            out.write(line + "\n")
    return 1 if bad else 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="artifact", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    t = sub.add_parser("tables", help="reproduce reference tables as CSV")
    t.add_argument("which", choices=("nu", "tgd", "exact3design"))
    t.add_argument("--dmax", type=int, default=None)

    s = sub.add_parser("sigma", help="dump the Sigma(d) catalog")
    s.add_argument("--d", type=int, required=True)

    m = sub.add_parser("moments", help="moment summary of a magic state")
    m.add_argument("--d", type=int, required=True)
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--spec", default="", help="'c3,c2,c1,c0;...' per magic factor, or 'stabilizer'")
    m.add_argument("--csv", action="store_true", help="also print a CSV row")

    w = sub.add_parser("sweep", help="parameter sweep over a (d, n, k) grid")
    w.add_argument("--config", help="key=value file (d, n, k, quantity, family, K, j)")
    w.add_argument("--d")
    w.add_argument("--n")
    w.add_argument("--k")
    w.add_argument("--quantity", choices=QUANTITIES)
    w.add_argument("--family", choices=FAMILIES)
    w.add_argument("--K")
    w.add_argument("--j")

    g = sub.add_parser("design", help="construct a 3-design recipe")
    g.add_argument("--d", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--table-s", action="store_true")
    g.add_argument("--dmax", type=int, default=1000)

    v = sub.add_parser("verify", help="oracle-vs-closed-form suites")
    v.add_argument("--suite", default="all",
                   choices=("gram", "stab-moment", "kappa-magic", "spectra", "shadow", "counts", "designs", "all"))
    v.add_argument("--probes", action="store_true",
                   help="also log empirical probes of open conjectures (never affects exit code)")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    # buffer so a usage error never leaves partial output behind
    buf = io.StringIO()
    try:
        if args.cmd == "tables":
            dmax = args.dmax if args.dmax is not None else (99 if args.which == "nu" else 1000)
            rc = cmd_tables(args.which, dmax, buf)
        elif args.cmd == "sigma":
            rc = cmd_sigma(args.d, buf)
        elif args.cmd == "moments":
            rc = cmd_moments(args.d, args.n, args.spec, args.csv, buf)
        elif args.cmd == "sweep":
            rc = cmd_sweep(build_sweep_config(args), buf)
        elif args.cmd == "design":
            rc = cmd_design(args.d, args.n, args.k, args.table_s, args.dmax, buf)
        else:
            rc = cmd_verify(args.suite, buf, args.probes)
    except (UsageError, ValueError, KeyError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    sys.stdout.write(buf.getvalue())
    sys.stdout.flush()
    return rc


if __name__ == "__main__":
    sys.exit(main())
