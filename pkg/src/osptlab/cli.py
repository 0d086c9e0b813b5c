"""Command-line front end: ``osptlab {coeffs,oracle,verify,asym,circle}``.

Exit codes: 0 success, 1 a mathematical violation or mismatch was found,
2 usage or configuration error.  All integers are written as decimal strings
and the output of a given configuration does not depend on ``--threads``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import asymptotics, circle, combinatorics, qseries
from .asymptotics import PRECISION_ENV

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2

SERIES = ("F", "H", "ospt", "pbar", "p", "h", "C", "Cbar")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    N_max: int = 0
    k_list: list[int] = field(default_factory=list)
    m_list: list[int] = field(default_factory=list)
    T: int | None = None
    precision_bits: int = asymptotics.DEFAULT_PRECISION
    interp: list[str] = field(default_factory=list)
    fmt: str = "json"
    out: str | None = None
    threads: int = 1

    def __post_init__(self):
        if self.precision_bits < 64:
            raise UsageError(f"precision_bits must be at least 64, got {self.precision_bits}")
        if self.threads < 1:
            raise UsageError(f"threads must be positive, got {self.threads}")
        if self.N_max < 0:
            raise UsageError(f"n-max must be non-negative, got {self.N_max}")
        if self.T is None:
            self.T = self.N_max
        if self.T < self.N_max:
            raise UsageError(f"truncation {self.T} is below n-max {self.N_max}")


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    out = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if ".." in chunk:
            lo, hi = chunk.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif chunk:
            out.append(int(chunk))
    return out


def _precision_default() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return asymptotics.DEFAULT_PRECISION
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{PRECISION_ENV}={raw!r} is not an integer") from None


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _csv(rows: Sequence[dict], fields: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(fields), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: "" if r.get(k) is None else r.get(k) for k in fields})
    return buf.getvalue()


def _jsonl(rows: Sequence[dict]) -> str:
    return "".join(json.dumps(r) + "\n" for r in rows)


def _pmap(fn: Callable, items: Sequence, threads: int) -> list:
    """Ordered map; results come back in input order whatever the thread count."""
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# coeffs


def _series_for(name: str, param: int | None, T: int) -> qseries.TruncatedSeries:
    if name == "F":
        return qseries.F_k_series(param, T)
    if name == "H":
        return qseries.H_m_series(param, T)
    if name == "ospt":
        return qseries.ospt_bar_series(T)
    if name == "pbar":
        return qseries.overpartition_gf(T)
    if name == "p":
        return qseries.partition_gf(T)
    if name == "h":
        return qseries.h_series(param, T)
    if name == "C":
        return qseries.C_m_series(param, T)
    if name == "Cbar":
        return qseries.C_bar_m_series(param, T)
    raise UsageError(f"unknown series {name!r}; choose from {', '.join(SERIES)}")


def _series_param(name: str, cfg: RunConfig) -> list[int | None]:
    if name == "F":
        if not cfg.k_list:
            raise UsageError("series F needs --k")
        return list(cfg.k_list)
    if name in ("H", "h", "C", "Cbar"):
        if not cfg.m_list:
            raise UsageError(f"series {name} needs --m")
        return list(cfg.m_list)
    return [None]


def cmd_coeffs(cfg: RunConfig, series: str) -> tuple[str, int]:
    params = _series_param(series, cfg)
    try:
        tables = _pmap(lambda p: (p, _series_for(series, p, cfg.T)), params, cfg.threads)
    except qseries.SeriesError as exc:
        raise UsageError(str(exc)) from None
    if cfg.fmt == "csv":
        multi = len(params) > 1
        rows = []
        for p, s in tables:
            for n in range(cfg.N_max + 1):
                row = {"n": n, "coefficient": str(s[n])}
                if multi:
                    row["parameter"] = p
                rows.append(row)
        fields = (["parameter"] if multi else []) + ["n", "coefficient"]
        return _csv(rows, fields), EXIT_OK
    docs = [
        {"series": series, "parameter": p, "n_max": cfg.N_max, "order": cfg.T,
         "coefficients": [str(s[n]) for n in range(cfg.N_max + 1)]}
        for p, s in tables
    ]
    return _jsonl(docs), EXIT_OK


# ---------------------------------------------------------------------------
# oracle


def cmd_oracle(cfg: RunConfig, mode: str) -> tuple[str, int]:
    """Enumeration counts against series coefficients, one row per (statistic, parameter, interp, n)."""
    T = cfg.N_max
    rows = []
    for m in cfg.m_list:
        s = qseries.C_m_series(m, T)
        for n in range(T + 1):
            got = combinatorics.C_m_count(n, m)
            rows.append(_oracle_row("C", m, "partition", mode, n, got, s[n]))
    for m in (1, 2):
        s = qseries.C_bar_m_series(m, T)
        for n in range(T + 1):
            got = combinatorics.C_bar_m_count(n, m)
            rows.append(_oracle_row("Cbar", m, "nonoverlined", mode, n, got, s[n]))
    pbar = qseries.overpartition_gf(T)
    for it in cfg.interp:
        combinatorics.get_interpretation(it)
        for k in cfg.k_list:
            s = qseries.F_k_series(k, T, pbar=pbar)
            for n in range(T + 1):
                got = combinatorics.A_minus_B_oracle(n, k, it, mode)
                rows.append(_oracle_row("AB", k, it, mode, n, got, s[n]))
    if cfg.fmt == "csv":
        return _csv(rows, ["statistic", "parameter", "interp", "mode", "n", "enumerated", "series", "agree"]), EXIT_OK
    return _jsonl(rows), EXIT_OK


def _oracle_row(stat, param, interp, mode, n, got, want) -> dict:
    return {
        "statistic": stat,
        "parameter": param,
        "interp": interp,
        "mode": mode if stat == "AB" else "",
        "n": n,
        "enumerated": str(got),
        "series": str(want),
        "agree": got == want,
    }


# ---------------------------------------------------------------------------
# verify


def _scan_F(k: int, T: int, pbar) -> dict:
    c = qseries.F_k_series(k, T, pbar=pbar).coeffs
    lo = 2 * k - 1
    best = None
    zeros, bad = [], []
    for n in range(lo, T + 1):
        v = c[n]
        if best is None or v < best[0]:
            best = (v, n)
        if v == 0:
            zeros.append(n)
        elif v < 0:
            bad.append((n, v))
    return {"k": k, "min": best, "zeros": zeros, "violations": bad}


def _scan_H(m: int, T: int) -> dict:
    c = qseries.H_m_series(m, T).coeffs
    best = None
    zeros, bad = [], []
    for n in range(1, T + 1):
        v = c[n]
        if best is None or v < best[0]:
            best = (v, n)
        if v == 0:
            zeros.append(n)
        elif v < 0:
            bad.append((n, v))
    return {"m": m, "min": best, "zeros": zeros, "violations": bad}


def verify_document(N_max: int, m_list: Sequence[int], threads: int = 1) -> dict:
    """Nonnegativity of F_k and H_m and the inequality 8 ospt-bar(n) > pbar(n) for n <= N_max."""
    T = N_max
    pbar = qseries.overpartition_gf(T)
    ks = list(range(1, (T + 1) // 2 + 1))
    f_scans = _pmap(lambda k: _scan_F(k, T, pbar), ks, threads)
    h_scans = _pmap(lambda m: _scan_H(m, T), list(m_list), threads)

    f_min = None
    f_zeros, f_bad = [], []
    for s in f_scans:
        if s["min"] is not None and (f_min is None or s["min"][0] < f_min[0]):
            f_min = (s["min"][0], s["min"][1], s["k"])
        f_zeros.extend({"n": n, "k": s["k"]} for n in s["zeros"])
        f_bad.extend({"n": n, "k": s["k"], "value": str(v)} for n, v in s["violations"])

    ospt = qseries.ospt_bar_series(T)
    margin = None
    o_bad = []
    for n in range(1, T + 1):
        gap = 8 * ospt[n] - pbar[n]
        if margin is None or gap < margin[0]:
            margin = (gap, n)
        if gap <= 0:
            o_bad.append({"n": n, "ospt": str(ospt[n]), "pbar": str(pbar[n])})

    h_doc = []
    h_violation = False
    for s in h_scans:
        h_violation |= bool(s["violations"])
        h_doc.append({
            "m": s["m"],
            "minimum": None if s["min"] is None else str(s["min"][0]),
            "minimum_at": None if s["min"] is None else s["min"][1],
            "zeros": s["zeros"],
            "violations": [{"n": n, "value": str(v)} for n, v in s["violations"]],
        })

    ok = not f_bad and not o_bad and not h_violation
    return {
        "n_max": N_max,
        "F_nonnegative": {
            "checked_k": len(ks),
            "minimum": None if f_min is None else str(f_min[0]),
            "minimum_at": None if f_min is None else {"n": f_min[1], "k": f_min[2]},
            "zeros": f_zeros,
            "violations": f_bad,
        },
        "H_nonnegative": h_doc,
        "ospt_vs_pbar": {
            "minimum_margin": None if margin is None else str(margin[0]),
            "minimum_margin_at": None if margin is None else margin[1],
            "violations": o_bad,
        },
        "status": "ok" if ok else "violation",
    }


def cmd_verify(cfg: RunConfig) -> tuple[str, int]:
    doc = verify_document(cfg.N_max, cfg.m_list, cfg.threads)
    code = EXIT_OK if doc["status"] == "ok" else EXIT_VIOLATION
    if cfg.fmt == "csv":
        rows = [{
            "check": "F", "parameter": "", "minimum": doc["F_nonnegative"]["minimum"],
            "zeros": len(doc["F_nonnegative"]["zeros"]), "violations": len(doc["F_nonnegative"]["violations"]),
        }]
        for h in doc["H_nonnegative"]:
            rows.append({"check": "H", "parameter": h["m"], "minimum": h["minimum"],
                         "zeros": " ".join(map(str, h["zeros"])), "violations": len(h["violations"])})
        o = doc["ospt_vs_pbar"]
        rows.append({"check": "ospt", "parameter": "", "minimum": o["minimum_margin"],
                     "zeros": "", "violations": len(o["violations"])})
        return _csv(rows, ["check", "parameter", "minimum", "zeros", "violations"]), code
    return json.dumps(doc, indent=1) + "\n", code


# ---------------------------------------------------------------------------
# asym and circle


def cmd_asym(cfg: RunConfig, kind: str, N_list: list[int], convention: str) -> tuple[str, int]:
    if kind == "AB":
        params = cfg.k_list or [1]
    elif kind == "C":
        params = cfg.m_list or [2]
    else:
        params = [None]
    if N_list and cfg.T < max(N_list):
        raise UsageError(f"truncation {cfg.T} is below the largest N {max(N_list)}")
    reports = []
    for p in params:
        series = asymptotics.exact_series(kind, p, cfg.T) if N_list else None
        reports.extend(asymptotics.asymptotic_report(kind, p, N_list, series, cfg.precision_bits, convention))
    if cfg.fmt == "csv":
        return asymptotics.reports_to_csv(reports), EXIT_OK
    return asymptotics.reports_to_jsonl(reports), EXIT_OK


def cmd_circle(cfg: RunConfig, kind: str, N_list: list[int], n_points: int | None) -> tuple[str, int]:
    if kind == "F":
        params = cfg.k_list or [1]
    else:
        params = cfg.m_list or [2]
    rows = []
    for N in N_list:
        prec = asymptotics.working_precision(N, cfg.precision_bits)
        try:
            res = circle.cauchy_coefficients(kind, params, N, n_points, prec)
        except circle.AccuracyError as exc:
            raise UsageError(f"{exc}; diagnostics: {json.dumps(exc.diagnostics)}") from None
        rows.extend(res[p].to_dict() for p in params)
    code = EXIT_OK if all(r["match"] for r in rows) else EXIT_VIOLATION
    if cfg.fmt == "csv":
        flat = []
        for r in rows:
            f = {k: v for k, v in r.items() if not isinstance(v, dict)}
            for part in ("I_major", "I_minor", "total"):
                f[f"{part}_re"] = r[part]["re"]
                f[f"{part}_im"] = r[part]["im"]
            flat.append(f)
        fields = ["kind", "parameter", "N", "n_points", "precision_bits",
                  "I_major_re", "I_major_im", "I_minor_re", "I_minor_im",
                  "total_re", "total_im", "rounded", "exact", "match"]
        return _csv(flat, fields), code
    return _jsonl(rows), code


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="osptlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, n_max_default=None, need_n_max=False):
        p.add_argument("--n-max", type=int, default=n_max_default, required=need_n_max)
        p.add_argument("--k", type=_int_list, default=None, help="comma list or a..b range")
        p.add_argument("--m", type=_int_list, default=None, help="comma list or a..b range")
        p.add_argument("--trunc", type=int, default=None, help="series truncation order T (default: n-max)")
        p.add_argument("--precision-bits", type=int, default=None,
                       help=f"working precision; default from ${PRECISION_ENV} or 256")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("coeffs", help="coefficient table of a generating function")
    common(p, need_n_max=True)
    p.add_argument("--series", required=True, help=f"one of {', '.join(SERIES)}")

    p = sub.add_parser("oracle", help="brute-force enumeration against series coefficients")
    common(p, n_max_default=12)
    p.add_argument("--interp", default="literal,nonoverlined",
                   help="comma list of odd/even string readings")
    p.add_argument("--mode", choices=("occurrences", "overpartitions"), default="occurrences")

    p = sub.add_parser("verify", help="scan the nonnegativity conjectures and the ospt-bar inequality")
    common(p, n_max_default=2000)

    p = sub.add_parser("asym", help="exact coefficients against asymptotic main terms")
    common(p, n_max_default=0)
    p.add_argument("--kind", choices=("AB", "C", "ospt"), required=True)
    p.add_argument("--N", type=_int_list, default=[], help="comma list of N")
    p.add_argument("--convention", choices=asymptotics.CONVENTIONS, default="derived")

    p = sub.add_parser("circle", help="recover coefficients by Cauchy's formula on the circle")
    common(p, n_max_default=0)
    p.add_argument("--kind", choices=("F", "H"), required=True)
    p.add_argument("--N", type=_int_list, default=[], help="comma list of N")
    p.add_argument("--n-points", type=int, default=None)
    return parser


def _config(args) -> RunConfig:
    prec = args.precision_bits if args.precision_bits is not None else _precision_default()
    n_max = args.n_max
    if args.command in ("asym", "circle"):
        n_max = max(args.N, default=0)
    k_list = args.k
    m_list = args.m
    if args.command == "oracle":
        k_list = [1, 2, 3] if k_list is None else k_list
        m_list = [1, 2, 3, 4] if m_list is None else m_list
    if args.command == "verify" and m_list is None:
        m_list = list(range(2, 11))
    interp = [s for s in getattr(args, "interp", "").split(",") if s]
    return RunConfig(args.command, n_max, k_list or [], m_list or [], args.trunc, prec, interp,
                     args.format, args.out, args.threads)


def _validate_params(cfg: RunConfig) -> None:
    if any(k < 1 for k in cfg.k_list):
        raise UsageError("k values must be positive")
    if any(m < 1 for m in cfg.m_list):
        raise UsageError("m values must be positive")
    if cfg.command in ("verify", "circle") and any(m < 2 for m in cfg.m_list):
        raise UsageError("m values must be at least 2 here")


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = _config(args)
        _validate_params(cfg)
        if args.command == "coeffs":
            if args.series not in SERIES:
                raise UsageError(f"unknown series {args.series!r}; choose from {', '.join(SERIES)}")
            text, code = cmd_coeffs(cfg, args.series)
        elif args.command == "oracle":
            text, code = cmd_oracle(cfg, args.mode)
        elif args.command == "verify":
            text, code = cmd_verify(cfg)
        elif args.command == "asym":
            text, code = cmd_asym(cfg, args.kind, args.N, args.convention)
        else:
            text, code = cmd_circle(cfg, args.kind, args.N, args.n_points)
    except (UsageError, combinatorics.ConfigurationError, qseries.SeriesError, ValueError) as exc:
        print(f"osptlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _write(text, cfg.out)
    if code == EXIT_VIOLATION:
        print("osptlab: violation or mismatch found", file=sys.stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
