"""negpell command line: analyze, density, verify, spacing."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Optional

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_IO = 2
EXIT_MISSING = 3
EXIT_RESOURCE = 4
EXIT_USAGE = 64

DEFAULTS = {
    "max": None,
    "threads": 1,
    "seed": 0,
    "oracle_bound": 10_000,
    "cache": "negpell_cache.csv",
    "format": "csv",
    "suite": None,
    "trials": None,
    "y1": 10.0,
    "eta": 3.0,
}
DEFAULT_MAX = {"analyze": 10 ** 6, "density": 10 ** 7, "verify": 10 ** 5, "spacing": 10 ** 6}
DEFAULT_TRIALS = {"redei": 1000, "reflection": 100, "markov": 100_000, "combinatorics": 0, "oracle": 0}
DENSITY_BOUND = 10 ** 8
INT_KEYS = {"max", "threads", "seed", "oracle_bound", "trials"}
FLOAT_KEYS = {"y1", "eta"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _int(text: str) -> int:
    """Integers, also written as 1e6 or 10**6."""
    text = text.strip().replace("_", "")
    try:
        if "**" in text:
            b, e = text.split("**")
            return int(b) ** int(e)
        if "e" in text.lower():
            v = float(text)
            if v != int(v):
                raise ValueError
            return int(v)
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")


def read_config(path: str) -> dict:
    """Plain key=value lines; '#' starts a comment; keys may use - or _."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for k, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{k}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in DEFAULTS:
                raise UsageError(f"{path}:{k}: unknown key {key!r}")
            try:
                if key in INT_KEYS:
                    value = _int(value)
                elif key in FLOAT_KEYS:
                    value = float(value)
            except (argparse.ArgumentTypeError, ValueError):
                raise UsageError(f"{path}:{k}: bad value for {key}: {value!r}")
            out[key] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="negpell", description="2-parts of real quadratic class groups and the negative Pell equation")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--config", help="key=value file; flags override it")
        sp.add_argument("--max", type=_int, default=None)
        sp.add_argument("--seed", type=_int, default=None)
        sp.add_argument("--format", choices=("csv", "json"), default=None)

    a = sub.add_parser("analyze", help="sweep Pell-family D <= max into the result cache")
    common(a)
    a.add_argument("--threads", type=_int, default=None)
    a.add_argument("--oracle-bound", dest="oracle_bound", type=_int, default=None)
    a.add_argument("--cache", default=None)

    d = sub.add_parser("density", help="empirical densities against the limiting values")
    common(d)
    d.add_argument("--threads", type=_int, default=None)
    d.add_argument("--oracle-bound", dest="oracle_bound", type=_int, default=None)
    d.add_argument("--cache", default=None)
    d.add_argument("--build", action="store_true", help="extend the cache when it does not reach --max")

    v = sub.add_parser("verify", help="run a property suite")
    common(v)
    v.add_argument("--suite", choices=("redei", "reflection", "combinatorics", "markov", "oracle"), default=None)
    v.add_argument("--trials", type=_int, default=None)

    s = sub.add_parser("spacing", help="prime-factor spacing statistics")
    common(s)
    s.add_argument("--y1", type=float, default=None)
    s.add_argument("--eta", type=float, default=None)
    return p


def resolve(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        try:
            cfg.update(read_config(args.config))
        except OSError as e:
            raise UsageError(f"cannot read config: {e}")
    for key in DEFAULTS:
        v = getattr(args, key, None)
        if v is not None:
            cfg[key] = v
    if cfg["max"] is None:
        cfg["max"] = DEFAULT_MAX[args.command]
    if cfg["threads"] < 1:
        raise UsageError("threads must be >= 1")
    if cfg["max"] < 1:
        raise UsageError("max must be >= 1")
    cfg["build"] = getattr(args, "build", False)
    return cfg


def _emit(records: list[dict], fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(records, sort_keys=True, indent=1) + "\n")
        return
    keys: list[str] = []
    for r in records:
        keys += [k for k in r if k not in keys]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow(r)
    out.write(buf.getvalue())


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

class CacheError(OSError):
    pass


def read_cache(path: str) -> list:
    from .sweep import read_csv

    try:
        rows = read_csv(path)
    except (ValueError, UnicodeDecodeError) as e:
        raise CacheError(f"{path}: unreadable cache: {e}")
    if any(a.D >= b.D for a, b in zip(rows, rows[1:])):
        raise CacheError(f"{path}: rows are not strictly increasing in D")
    return rows


def _load_cache(path: str, seed: int) -> list:
    """Rows of an existing cache, with a 1% sample recomputed."""
    from .f2 import XorShift64Star
    from .sweep import recheck_row

    rows = read_cache(path)
    if rows:
        rng = XorShift64Star(seed)
        for _ in range(math.ceil(len(rows) / 100)):
            row = rows[rng.below(len(rows))]
            if not recheck_row(row):
                raise CacheMismatch(f"cached row for D={row.D} does not match recomputation")
    return rows


class CacheMismatch(Exception):
    pass


def update_cache(path: str, max_D: int, threads: int, oracle_bound: int, seed: int) -> list:
    """Append rows for D beyond the cache's last entry up to max_D; returns all rows <= max_D."""
    from .sweep import CSV_HEADER, iter_rows

    exists = os.path.exists(path)
    rows = _load_cache(path, seed) if exists else []
    start = rows[-1].D + 1 if rows else 2
    new = []
    # opened before the sweep so an unwritable path fails fast
    with open(path, "a", encoding="ascii", newline="\n") as fh:
        if not exists:
            fh.write(CSV_HEADER + "\n")
        if start <= max_D:
            for r in iter_rows(max_D, threads=threads, oracle_bound=oracle_bound, lo=start):
                fh.write(r.to_csv() + "\n")
                new.append(r)
    return [r for r in rows + new if r.D <= max_D]


def cache_covers(rows: list, max_D: int) -> bool:
    from .arith import iter_pell_family

    start = rows[-1].D + 1 if rows else 2
    return start > max_D or next(iter_pell_family(max_D, lo=start), None) is None


def summary_records(rows: list, max_D: int) -> list[dict]:
    n = len(rows)
    solv = sum(r.neg_pell for r in rows)
    return [{
        "max": max_D,
        "count_D": n,
        "count_solvable": solv,
        "solvable_fraction": round(solv / n, 10) if n else 0.0,
        "rk4_zero_fraction": round(sum(r.rk4_narrow == 0 for r in rows) / n, 10) if n else 0.0,
        "oracle_checked": sum(r.oracle_checked for r in rows),
    }]


def cmd_analyze(cfg: dict, out=None) -> int:
    rows = update_cache(cfg["cache"], cfg["max"], cfg["threads"], cfg["oracle_bound"], cfg["seed"])
    _emit(summary_records(rows, cfg["max"]), cfg["format"], out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# density
# ---------------------------------------------------------------------------

def density_records(reports) -> list[dict]:
    from .densities import ALPHA, beta

    a, b = ALPHA, beta()
    recs = [
        {"section": "constant", "key": "alpha", "value": f"{a:.10f}"},
        {"section": "constant", "key": "beta", "value": f"{b:.10f}"},
        {"section": "constant", "key": "alpha*beta", "value": f"{a * b:.10f}"},
        {"section": "constant", "key": "1-alpha", "value": f"{1 - a:.10f}"},
        {"section": "constant", "key": "5/4*alpha", "value": f"{1.25 * a:.10f}"},
    ]
    for rep in reports:
        recs.append({"section": "summary", "X": rep.X, "key": "count_D", "count": rep.count_D})
        recs.append({"section": "summary", "X": rep.X, "key": "solvable", "count": rep.count_solvable,
                     "empirical": f"{rep.solvable_fraction:.10f}", "theoretical": f"{1 - a:.10f}"})
        for n in sorted(rep.counts_n):
            theo = rep.theoretical_n[n]
            emp = rep.fraction(rep.counts_n[n])
            recs.append({"section": "rk4", "X": rep.X, "key": f"n={n}", "count": rep.counts_n[n],
                         "empirical": f"{emp:.10f}", "theoretical": f"{theo:.10f}",
                         "ratio": f"{emp / theo:.6f}"})
        for row in rep.table():
            recs.append({"section": "nm", "X": rep.X, "key": f"n={row['n']},m={row['m']}", "count": row["count"],
                         "empirical": f"{row['empirical']:.10f}", "theoretical": f"{row['theoretical']:.10f}",
                         "ratio": f"{row['ratio']:.6f}"})
    for note in reports[-1].notes if reports else ():
        recs.append({"section": "note", "key": "density", "value": note})
    return recs


def cmd_density(cfg: dict, out=None) -> int:
    from .densities import run_density_experiment

    X = cfg["max"]
    if X > DENSITY_BOUND:
        from .arith import ResourceBoundError

        raise ResourceBoundError(f"max = {X} exceeds the density sweep bound {DENSITY_BOUND}")
    path = cfg["cache"]
    rows = read_cache(path) if os.path.exists(path) else None
    if rows is None or not cache_covers(rows, X):
        if not cfg["build"]:
            print(f"cache {path} does not reach {X}; run analyze or pass --build", file=sys.stderr)
            return EXIT_MISSING
        rows = update_cache(path, X, cfg["threads"], cfg["oracle_bound"], cfg["seed"])
    reports = run_density_experiment(X, rows=(r for r in rows if r.D <= X))
    _emit(density_records(reports), cfg["format"], out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify and spacing
# ---------------------------------------------------------------------------

def cmd_verify(cfg: dict, out=None) -> int:
    from .verification import SUITES

    suite = cfg["suite"]
    if suite is None:
        raise UsageError("verify needs --suite")
    trials = cfg["trials"] if cfg["trials"] is not None else DEFAULT_TRIALS[suite]
    if suite == "oracle":
        report = SUITES[suite](max_D=cfg["max"], seed=cfg["seed"])
    else:
        report = SUITES[suite](trials=trials, seed=cfg["seed"])
    out = out or sys.stdout
    for line in report.lines():
        out.write(line + "\n")
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_spacing(cfg: dict, out=None) -> int:
    from .spacing import (SWEEP_BOUND, comfortable_failure_ladder, mertens_partial, spacing_statistics)
    from .arith import ResourceBoundError

    x = cfg["max"]
    if x > SWEEP_BOUND:
        raise ResourceBoundError(f"x = {x} exceeds the sweep bound {SWEEP_BOUND}")
    stats = spacing_statistics(x, cfg["y1"], cfg["eta"])
    c = stats.counts
    recs = [{"section": "count", "key": "Phi", "value": c.phi},
            {"section": "count", "key": "sum_r Phi_r", "value": sum(c.phi_r.values())},
            {"section": "count", "key": "consistent", "value": int(sum(c.phi_r.values()) == c.phi)},
            {"section": "count", "key": "mu", "value": f"{c.mu:.10f}"},
            {"section": "count", "key": "landau_ratio", "value": f"{c.landau_ratio():.10f}"},
            {"section": "count", "key": "mertens_estimate", "value": f"{mertens_partial(max(x, 10)):.10f}"}]
    for r in sorted(c.phi_r):
        recs.append({"section": "phi_r", "key": f"r={r}", "value": c.phi_r[r]})
    for r, (fc, fr, fe) in stats.fractions().items():
        recs.append({"section": "window", "key": f"r={r}", "value": c.phi_r.get(r, 0),
                     "comfortable_fail": f"{fc:.10f}", "regular_fail": f"{fr:.10f}",
                     "extravagant_fail": f"{fe:.10f}"})
    for y, frac in comfortable_failure_ladder(x).items():
        recs.append({"section": "y1_ladder", "key": f"y1={y:g}", "comfortable_fail": f"{frac:.10f}"})
    _emit(recs, cfg["format"], out)
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "density": cmd_density, "verify": cmd_verify, "spacing": cmd_spacing}


def main(argv: Optional[list] = None) -> int:
    from .arith import ResourceBoundError
    from .sweep import OracleMismatch

    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        return COMMANDS[args.command](cfg)
    except UsageError as e:
        print(f"negpell: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceBoundError as e:
        print(f"negpell: resource bound: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (CacheMismatch, OracleMismatch) as e:
        print(f"negpell: {e}", file=sys.stderr)
        return EXIT_VERIFY
    except OSError as e:
        print(f"negpell: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
