"""Half-integer modified Bessel functions and the asymptotic main terms.

Values are mpmath ``mpf`` numbers at a configurable binary precision.  The
working precision grows with N because the main terms carry e^{pi sqrt N}.

Two normalisations of the A_k - B_k main term are provided.  ``derived``
(the default) uses the quadratic coefficient ab/32 in the small-y expansion
of the partial theta functions, which is what the g_{a,b} expansion gives
after multiplying by e^{-b^2 pi i tau/(4a)} and what the exact coefficients
converge to.  ``printed`` uses ab/16 and is exactly twice as large.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import gmpy2
import mpmath
from mpmath import mpf

from . import qseries
from .qseries import TruncatedSeries

__all__ = [
    "DEFAULT_PRECISION",
    "PRECISION_ENV",
    "AsymptoticReport",
    "TruncationError",
    "working_precision",
    "default_precision",
    "bessel_I_half",
    "bessel_I_power_series",
    "main_term_AB",
    "main_term_C",
    "ospt_bar_main",
    "pbar_main",
    "exact_series",
    "asymptotic_report",
    "string_ratio_report",
    "format_real",
    "reports_to_csv",
    "reports_to_jsonl",
]

DEFAULT_PRECISION = 256
PRECISION_ENV = "OSPTLAB_PRECISION_BITS"
CONVENTIONS = ("derived", "printed")


class TruncationError(ValueError):
    """Requested N lies beyond the order of the available exact series."""


def default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return DEFAULT_PRECISION
    prec = int(raw)
    if prec < 64:
        raise ValueError(f"{PRECISION_ENV}={prec} is below the 64-bit minimum")
    return prec


def working_precision(N: int = 0, prec: int | None = None) -> int:
    """max(P, pi sqrt(N)/ln 2 + 64) bits, with P the requested or default precision."""
    base = default_precision() if prec is None else prec
    if base < 64:
        raise ValueError(f"precision must be at least 64 bits, got {base}")
    need = math.ceil(math.pi * math.sqrt(max(N, 0)) / math.log(2)) + 64
    return max(base, need)


def _check_order(two_nu: int, z) -> None:
    if two_nu % 2 == 0:
        raise ValueError(f"order {two_nu}/2 is not a half-integer")
    if not z > 0:
        raise ValueError(f"need z > 0, got {z}")


def bessel_I_half(two_nu: int, z, prec: int | None = None) -> mpf:
    """I_{two_nu/2}(z) for odd two_nu and z > 0, from sinh/cosh and three-term recurrence.

    I_{1/2}(z) = sqrt(2/(pi z)) sinh z,  I_{-1/2}(z) = sqrt(2/(pi z)) cosh z,
    I_{nu-1}(z) = I_{nu+1}(z) + (2 nu/z) I_nu(z).
    """
    _check_order(two_nu, z)
    prec = working_precision(0, prec)
    # upward recurrence loses about log2 of the ratio of neighbouring orders per step
    guard = 32 + max(0, two_nu) * max(1, int(math.log2(abs(two_nu) + 2)))
    with mpmath.workprec(prec + guard):
        z = mpf(z)
        pref = mpmath.sqrt(2 / (mpmath.pi * z))
        lo, hi = pref * mpmath.cosh(z), pref * mpmath.sinh(z)  # orders -1/2, +1/2
        if two_nu == -1:
            val = lo
        elif two_nu == 1:
            val = hi
        elif two_nu < 0:
            # walk down: (lo, hi) = (I_{nu}, I_{nu+1}) with nu = -1/2, -3/2, ...
            nu2 = -1
            while nu2 > two_nu:
                lo, hi = hi + (mpf(nu2) / z) * lo, lo
                nu2 -= 2
            val = lo
        else:
            nu2 = 1
            while nu2 < two_nu:
                lo, hi = hi, lo - (mpf(nu2) / z) * hi
                nu2 += 2
            val = hi
    with mpmath.workprec(prec):
        return +val


def bessel_I_power_series(nu, z, prec: int | None = None) -> mpf:
    """Reference value sum_m (z/2)^{2m+nu} / (m! Gamma(m+nu+1)), summed term by term."""
    if not z > 0:
        raise ValueError(f"need z > 0, got {z}")
    prec = working_precision(0, prec)
    with mpmath.workprec(prec + 64):
        z = mpf(z)
        nu = mpf(nu)
        half = z / 2
        term = half**nu / mpmath.gamma(nu + 1)
        total = term
        sq = half * half
        m = 0
        eps = mpf(2) ** (-(prec + 32))
        while True:
            m += 1
            term = term * sq / (m * (m + nu))
            total += term
            # terms decrease geometrically once m exceeds z/2 and |nu|
            if m > z and abs(term) < eps * abs(total):
                break
    with mpmath.workprec(prec):
        return +total


def _check_convention(convention: str) -> None:
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")


def main_term_AB(k: int, N: int, prec: int | None = None, convention: str = "derived") -> mpf:
    """c (2k-1) pi^3 N^{-7/4} I_{-7/2}(pi sqrt N), c = 1/(128 sqrt 2) (derived) or 1/(64 sqrt 2)."""
    if k < 1 or N < 1:
        raise ValueError(f"need k >= 1 and N >= 1, got k={k}, N={N}")
    _check_convention(convention)
    prec = working_precision(N, prec)
    with mpmath.workprec(prec + 16):
        denom = 128 if convention == "derived" else 64
        scale = (2 * k - 1) * mpmath.pi**3 / (denom * mpmath.sqrt(2))
        val = scale * mpf(N) ** mpf(-1.75) * bessel_I_half(-7, mpmath.pi * mpmath.sqrt(N), prec + 16)
    with mpmath.workprec(prec):
        return +val


def main_term_C(m: int, N: int, prec: int | None = None) -> mpf:
    """(m-1) pi / (16 * 54^{1/4}) N^{-3/4} I_{-3/2}(pi sqrt(2N/3))."""
    if m < 2 or N < 1:
        raise ValueError(f"need m >= 2 and N >= 1, got m={m}, N={N}")
    prec = working_precision(N, prec)
    with mpmath.workprec(prec + 16):
        scale = (m - 1) * mpmath.pi / (16 * mpmath.root(54, 4))
        z = mpmath.pi * mpmath.sqrt(mpf(2 * N) / 3)
        val = scale * mpf(N) ** mpf(-0.75) * bessel_I_half(-3, z, prec + 16)
    with mpmath.workprec(prec):
        return +val


def ospt_bar_main(n: int, prec: int | None = None) -> mpf:
    """e^{pi sqrt n} / (64 n)."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    prec = working_precision(n, prec)
    with mpmath.workprec(prec):
        return mpmath.exp(mpmath.pi * mpmath.sqrt(n)) / (64 * n)


def pbar_main(n: int, prec: int | None = None) -> mpf:
    """e^{pi sqrt n} / (8 n), the leading behaviour of the overpartition count."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    prec = working_precision(n, prec)
    with mpmath.workprec(prec):
        return mpmath.exp(mpmath.pi * mpmath.sqrt(n)) / (8 * n)


@dataclass(frozen=True)
class AsymptoticReport:
    kind: str
    parameter: int | None
    N: int
    exact: int
    main_term: mpf
    relative_error: mpf

    @property
    def ratio(self) -> mpf:
        return self.exact / self.main_term

    def row(self) -> dict:
        return {
            "kind": self.kind,
            "parameter": "" if self.parameter is None else str(self.parameter),
            "N": self.N,
            "exact": str(self.exact),
            "main_term": format_real(self.main_term),
            "relative_error": format_real(self.relative_error),
        }


def _exact_mpfr(x) -> gmpy2.mpfr:
    if isinstance(x, gmpy2.mpfr):
        return x
    if isinstance(x, int):
        return gmpy2.mpfr(x, max(x.bit_length(), 1))
    sign, man, exp, bc = mpf(x)._mpf_
    if not man:
        return gmpy2.mpfr(0)
    v = gmpy2.mpfr(gmpy2.mpz(man), max(bc, 1)) * gmpy2.mpfr(2) ** exp
    return -v if sign else v


def format_real(x, digits: int = 20) -> str:
    """Scientific notation with a fixed number of significant digits, e.g. 1.2500000000000000000e+2."""
    with gmpy2.context(gmpy2.get_context(), precision=max(64, 4 * digits)):
        v = _exact_mpfr(x)
        if v == 0:
            return "0." + "0" * (digits - 1) + "e+0"
        mant, exp, _ = v.digits(10, digits)
    sign = "-" if mant.startswith("-") else ""
    mant = mant.lstrip("-")
    e = exp - 1
    return f"{sign}{mant[0]}.{mant[1:]}e{'+' if e >= 0 else '-'}{abs(e)}"


def exact_series(kind: str, parameter: int | None, T: int) -> TruncatedSeries:
    if kind == "AB":
        return qseries.F_k_series(parameter, T)
    if kind == "C":
        return qseries.H_m_series(parameter, T)
    if kind == "ospt":
        return qseries.ospt_bar_series(T)
    raise ValueError(f"unknown kind {kind!r}; expected AB, C or ospt")


def _main(kind, parameter, N, prec, convention):
    if kind == "AB":
        return main_term_AB(parameter, N, prec, convention)
    if kind == "C":
        return main_term_C(parameter, N, prec)
    return ospt_bar_main(N, prec)


def asymptotic_report(
    kind: str,
    parameter: int | None,
    N_list: Sequence[int],
    series: TruncatedSeries | None = None,
    prec: int | None = None,
    convention: str = "derived",
) -> list[AsymptoticReport]:
    """Exact coefficient vs main term for each N in N_list."""
    N_list = list(N_list)
    if not N_list:
        return []
    top = max(N_list)
    if series is None:
        series = exact_series(kind, parameter, top)
    elif series.order < top:
        raise TruncationError(f"N={top} exceeds the series order {series.order}")
    out = []
    for N in N_list:
        main = _main(kind, parameter, N, prec, convention)
        with mpmath.workprec(working_precision(N, prec)):
            exact = series[N]
            rel = abs(exact - main) / main
        out.append(AsymptoticReport(kind, parameter, N, exact, main, rel))
    return out


def string_ratio_report(m: int, N_list: Iterable[int], prec: int | None = None) -> list[dict]:
    """C_1(N) / (m C_m(N)) for each N; tends to 1 although the difference is positive."""
    N_list = list(N_list)
    if not N_list:
        return []
    T = max(N_list)
    c1 = qseries.C_m_series(1, T)
    cm = qseries.C_m_series(m, T)
    rows = []
    for N in N_list:
        with mpmath.workprec(working_precision(N, prec)):
            ratio = mpf(c1[N]) / (m * cm[N]) if cm[N] else mpmath.inf
        rows.append({"m": m, "N": N, "C1": str(c1[N]), "Cm": str(cm[N]), "ratio": format_real(ratio)})
    return rows


_CSV_FIELDS = ["kind", "parameter", "N", "exact", "main_term", "relative_error"]


def reports_to_csv(reports: Iterable[AsymptoticReport]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=_CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in reports:
        w.writerow(r.row())
    return buf.getvalue()


def reports_to_jsonl(reports: Iterable[AsymptoticReport]) -> str:
    return "".join(json.dumps(r.row()) + "\n" for r in reports)
