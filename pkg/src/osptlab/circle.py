"""Numerical evaluation of F_k and H_m inside the unit disc, and coefficient
recovery by Cauchy's formula on the circles |q| = e^{-pi/(2 sqrt N)} (F_k) and
|q| = e^{-pi/sqrt(6N)} (H_m).

Arithmetic is done with gmpy2 ``mpc``/``mpfr`` at an explicit binary
precision.  Every truncated sum returns an error bound obtained from a
geometric majorant of the discarded tail.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import gmpy2
import mpmath
from gmpy2 import mpc, mpfr

from . import qseries
from .asymptotics import bessel_I_half, default_precision, format_real, working_precision

__all__ = [
    "AccuracyError",
    "ComplexTau",
    "ContourSplit",
    "CauchyResult",
    "NearOneReport",
    "MinorArcReport",
    "contour_y",
    "eval_partial_theta_numeric",
    "eval_euler_numeric",
    "eval_eta_quotient_numeric",
    "eval_h_numeric",
    "eval_F_k_numeric",
    "eval_H_m_numeric",
    "f0_expansion",
    "lemma_f0_residual",
    "near_one_main_term",
    "near_one_mainterm_check",
    "contour_split",
    "cauchy_coefficient",
    "cauchy_coefficients",
    "minor_arc_bound_check",
    "bessel_contour_check",
]

IMAG_THRESHOLD = 1e-6
# below this Im(tau) the eta products are evaluated after tau -> -1/tau
INVERSION_THRESHOLD = 0.1
KINDS = ("F", "H")


class AccuracyError(RuntimeError):
    """Quadrature result failed its reality check; carries the diagnostics dict."""

    def __init__(self, message: str, diagnostics: dict):
        super().__init__(message)
        self.diagnostics = diagnostics


def _ctx(prec: int):
    return gmpy2.context(gmpy2.get_context(), precision=prec)


@dataclass(frozen=True)
class ComplexTau:
    """tau = x + iy in the upper half plane; q = e^{2 pi i tau}."""

    x: object
    y: object

    def __post_init__(self):
        if not self.y > 0:
            raise ValueError(f"need y > 0, got {self.y}")

    @classmethod
    def on_contour(cls, kind: str, N: int, x=0, prec: int | None = None) -> ComplexTau:
        """Point of the F-contour (y = 1/(4 sqrt N)) or H-contour (y = 1/(2 sqrt(6N)))."""
        prec = prec or working_precision(N)
        with _ctx(prec):
            return cls(mpfr(x), contour_y(kind, N))

    def value(self) -> mpc:
        """tau as an mpc in the current gmpy2 context."""
        return mpc(mpfr(self.x), mpfr(self.y))

    def q(self) -> mpc:
        return gmpy2.exp(2 * gmpy2.const_pi() * mpc(0, 1) * self.value())

    def conjugate_point(self) -> ComplexTau:
        """-x + iy, where real-coefficient series take conjugate values."""
        return ComplexTau(-self.x, self.y)


def contour_y(kind: str, N: int) -> mpfr:
    if N < 1:
        raise ValueError(f"need N >= 1, got {N}")
    if kind == "F":
        return 1 / (4 * gmpy2.sqrt(mpfr(N)))
    if kind == "H":
        return 1 / (2 * gmpy2.sqrt(mpfr(6 * N)))
    raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")


def _as_tau(tau) -> ComplexTau:
    if isinstance(tau, ComplexTau):
        return tau
    z = complex(tau)
    return ComplexTau(z.real, z.imag)


# ---------------------------------------------------------------------------
# truncated sums with certified tails


def _theta_sum(a: int, b: int, r: mpc, absr: mpfr, tol) -> tuple[mpc, mpfr]:
    """sum_{n>=1} (-1)^n r^{a n^2 + b n} with r = e^{pi i tau}, and a bound on the dropped tail."""
    if a <= 0 or a + b <= 0:
        raise ValueError(f"need a > 0 and a + b > 0, got a={a}, b={b}")
    term = r ** (a + b)
    step = r ** (3 * a + b)
    grow = r ** (2 * a)
    mag = absr ** (a + b)
    mstep = absr ** (3 * a + b)
    mgrow = absr ** (2 * a)
    total = -term
    n = 1
    while True:
        # next term has modulus mag*mstep; later gaps only widen
        nxt = mag * mstep
        bound = nxt / (1 - mstep) if mstep < 1 else mpfr("inf")
        if bound <= tol:
            return total, bound
        n += 1
        term = term * step
        mag = nxt
        step = step * grow
        mstep = mstep * mgrow
        total = total + term if n % 2 == 0 else total - term


def _pentagonal(q: mpc, absq: mpfr, tol) -> tuple[mpc, mpfr]:
    """(q; q)_inf = sum_{k in Z} (-1)^k q^{k(3k-1)/2}, with tail bound."""
    total = mpc(1)
    a = mpc(1)  # q^{k(3k-1)/2}
    ra = q  # q^{3k-2} for the next k
    q3 = q * q * q
    ma = mpfr(1)
    mra = absq
    mq3 = absq**3
    qk = mpc(1)
    k = 0
    while True:
        nxt = ma * mra
        # remaining exponents k(3k-1)/2 and k(3k+1)/2 for k > current, gaps >= 3k+1
        gap = mra * mq3 / absq if absq > 0 else mpfr(0)
        bound = 2 * nxt / (1 - gap) if gap < 1 else mpfr("inf")
        if bound <= tol:
            return total, bound
        k += 1
        a = a * ra
        ra = ra * q3
        ma = nxt
        mra = mra * mq3
        qk = qk * q
        pair = a + a * qk
        total = total - pair if k % 2 else total + pair


def _h_sum(q: mpc, absq: mpfr, tol) -> tuple[mpc, mpfr]:
    """h(q) = sum_{n>=1} (-1)^{n+1} q^{n(n+1)/2} / (1 - q^n), with tail bound."""
    one = mpc(1)
    qn = q
    tri = q  # q^{n(n+1)/2}
    mqn = absq
    mtri = absq
    total = tri / (one - qn)
    n = 1
    while True:
        nq = mqn * absq  # |q|^{n+1}
        nxt = mtri * nq  # |q|^{T_{n+1}}
        denom = (1 - nq) * (1 - nq * absq)
        bound = nxt / denom if denom > 0 else mpfr("inf")
        if bound <= tol:
            return total, bound
        n += 1
        qn = qn * q
        tri = tri * qn
        mqn = nq
        mtri = nxt
        term = tri / (one - qn)
        total = total + term if n % 2 else total - term


def _default_tol(prec: int):
    return mpfr(2) ** (-prec)


# ---------------------------------------------------------------------------
# point evaluators


def _branch(y, branch: str) -> str:
    if branch == "auto":
        return "inverted" if y < INVERSION_THRESHOLD else "direct"
    if branch not in ("direct", "inverted"):
        raise ValueError(f"branch must be auto, direct or inverted, got {branch!r}")
    return branch


def _euler_at(t: mpc, y, branch: str, tol) -> tuple[mpc, mpfr]:
    """(q;q)_inf at tau = t and a bound on its absolute error."""
    pi = gmpy2.const_pi()
    i = mpc(0, 1)
    if _branch(y, branch) == "direct":
        q = gmpy2.exp(2 * pi * i * t)
        return _pentagonal(q, abs(q), tol)
    # eta(tau) = eta(-1/tau) / sqrt(-i tau), eta(tau) = e^{pi i tau/12} (q;q)_inf
    tp = -1 / t
    qp = gmpy2.exp(2 * pi * i * tp)
    pent, err = _pentagonal(qp, abs(qp), tol)
    pref = gmpy2.exp(pi * i * (tp - t) / 12) / gmpy2.sqrt(-i * t)
    return pref * pent, abs(pref) * err


def _eta_quotient_at(t: mpc, y, branch: str, tol) -> tuple[mpc, mpfr]:
    """(-q)_inf/(q)_inf at tau = t and a bound on its absolute error."""
    pi = gmpy2.const_pi()
    i = mpc(0, 1)
    if _branch(y, branch) == "direct":
        q = gmpy2.exp(2 * pi * i * t)
        aq = abs(q)
        num, e1 = _pentagonal(q * q, aq * aq, tol)
        den, e2 = _pentagonal(q, aq, tol)
        val = num / (den * den)
        rel = e1 / abs(num) + 2 * e2 / abs(den)
        return val, abs(val) * rel * 2
    # sqrt(-i tau/2) eta(-1/(2 tau)) / eta(-1/tau)^2
    q1 = gmpy2.exp(-pi * i / t)  # e^{2 pi i (-1/(2 tau))}
    a1 = abs(q1)
    num, e1 = _pentagonal(q1, a1, tol)
    den, e2 = _pentagonal(q1 * q1, a1 * a1, tol)
    pref = gmpy2.sqrt(-i * t / 2) * gmpy2.exp(pi * i / (8 * t))
    val = pref * num / (den * den)
    rel = e1 / abs(num) + 2 * e2 / abs(den)
    return val, abs(val) * rel * 2


def _bracket_at(k: int, r: mpc, absr: mpfr, tol) -> tuple[mpc, mpfr]:
    f1, e1 = _theta_sum(2, 4 * k - 2, r, absr, tol)
    f2, e2 = _theta_sum(1, 4 * k - 1, r, absr, tol)
    f3, e3 = _theta_sum(1, 4 * k - 3, r, absr, tol)
    return 2 * f1 - f2 - f3, 2 * e1 + e2 + e3


def eval_partial_theta_numeric(a: int, b: int, tau, tol=None, prec: int | None = None, return_bound: bool = False):
    """f_{0,a,b}(tau) = sum_{n>=1} (-1)^n q^{(a n^2 + b n)/2}; absolute truncation error <= tol."""
    if tol is not None and not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    prec = prec or default_precision()
    tau = _as_tau(tau)
    with _ctx(prec):
        tol = _default_tol(prec) if tol is None else mpfr(tol)
        r = gmpy2.exp(gmpy2.const_pi() * mpc(0, 1) * tau.value())
        val, bound = _theta_sum(a, b, r, abs(r), tol)
    return (val, bound) if return_bound else val


def eval_euler_numeric(tau, prec: int | None = None, branch: str = "auto", return_bound: bool = False):
    """(q; q)_inf at q = e^{2 pi i tau}."""
    prec = prec or default_precision()
    tau = _as_tau(tau)
    with _ctx(prec):
        val, err = _euler_at(tau.value(), mpfr(tau.y), branch, _default_tol(prec))
    return (val, err) if return_bound else val


def eval_eta_quotient_numeric(tau, prec: int | None = None, branch: str = "auto", return_bound: bool = False):
    """(-q)_inf/(q)_inf; for Im tau < 0.1 evaluated as sqrt(-i tau/2) eta(-1/(2tau))/eta(-1/tau)^2."""
    prec = prec or default_precision()
    tau = _as_tau(tau)
    with _ctx(prec):
        val, err = _eta_quotient_at(tau.value(), mpfr(tau.y), branch, _default_tol(prec))
    return (val, err) if return_bound else val


def eval_h_numeric(m: int, tau, prec: int | None = None, return_bound: bool = False):
    """h(q^m) summed from its Lambert-type form."""
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    prec = prec or default_precision()
    tau = _as_tau(tau)
    with _ctx(prec):
        q = gmpy2.exp(2 * m * gmpy2.const_pi() * mpc(0, 1) * tau.value())
        val, err = _h_sum(q, abs(q), _default_tol(prec))
    return (val, err) if return_bound else val


def eval_F_k_numeric(k: int, tau, prec: int | None = None, branch: str = "auto", return_bound: bool = False):
    """F_k(q) = (-q)_inf/(q)_inf * [2 f_{0,2,4k-2} - f_{0,1,4k-1} - f_{0,1,4k-3}]."""
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    prec = prec or default_precision()
    tau = _as_tau(tau)
    with _ctx(prec):
        t = tau.value()
        tol = _default_tol(prec)
        r = gmpy2.exp(gmpy2.const_pi() * mpc(0, 1) * t)
        br, ebr = _bracket_at(k, r, abs(r), tol)
        eq, eeq = _eta_quotient_at(t, mpfr(tau.y), branch, tol)
        val = eq * br
        err = abs(eq) * ebr + eeq * abs(br) + eeq * ebr
    return (val, err) if return_bound else val


def _H_at(ms: Sequence[int], t: mpc, y, branch: str, tol) -> dict[int, tuple[mpc, mpfr]]:
    pi = gmpy2.const_pi()
    i = mpc(0, 1)
    q = gmpy2.exp(2 * pi * i * t)
    aq = abs(q)
    h1, e1 = _h_sum(q, aq, tol)
    inv_e, ee = _euler_at(t, y, branch, tol)
    out = {}
    for m in ms:
        qm = q**m
        hm, em = _h_sum(qm, aq**m, tol)
        num = h1 - m * hm
        enum = e1 + m * em
        val = num / inv_e
        err = (enum + abs(val) * ee) / abs(inv_e) * 2
        out[m] = (val, err)
    return out


def eval_H_m_numeric(m: int, tau, prec: int | None = None, branch: str = "auto", return_bound: bool = False):
    """H_m(q) = (h(q) - m h(q^m)) / (q;q)_inf."""
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}")
    prec = prec or default_precision()
    tau = _as_tau(tau)
    with _ctx(prec):
        val, err = _H_at([m], tau.value(), mpfr(tau.y), branch, _default_tol(prec))[m]
    return (val, err) if return_bound else val


# ---------------------------------------------------------------------------
# behaviour near q = 1


def f0_expansion(a: int, b: int, tau, convention: str = "derived") -> mpc:
    """-1/2 + (b/8) w + c*a*b w^2 with w = -2 pi i tau, c = 1/32 (derived) or 1/16 (printed)."""
    if convention not in ("derived", "printed"):
        raise ValueError(f"unknown convention {convention!r}")
    t = tau.value() if isinstance(tau, ComplexTau) else mpc(complex(tau))
    w = -2 * gmpy2.const_pi() * mpc(0, 1) * t
    c = mpfr(1) / (32 if convention == "derived" else 16)
    return mpfr(-1) / 2 + mpfr(b) / 8 * w + c * a * b * w * w


def lemma_f0_residual(
    a: int,
    b: int,
    y_grid: Iterable,
    offsets: Sequence = (0,),
    convention: str = "derived",
    prec: int = 160,
) -> list[tuple[float, float]]:
    """(y, max_x |f_{0,a,b}(x+iy) - expansion| / y^3) over x = offset*y."""
    out = []
    with _ctx(prec):
        for y in y_grid:
            y = mpfr(y)
            worst = mpfr(0)
            for off in offsets:
                tau = ComplexTau(mpfr(off) * y, y)
                val = eval_partial_theta_numeric(a, b, tau, prec=prec)
                worst = max(worst, abs(val - f0_expansion(a, b, tau, convention)) / y**3)
            out.append((float(y), float(worst)))
    return out


def near_one_main_term(kind: str, parameter: int, tau, convention: str = "derived") -> mpc:
    """Leading behaviour of F_k or H_m as q -> 1 (principal branches, Re(-i tau) > 0).

    F_k: (2k-1)/(16 sqrt pi) w^{5/2} e^{pi i/(8 tau)}  (printed: 8 sqrt pi)
    H_m: (m-1)/(8 sqrt(2 pi)) w^{1/2} e^{pi i/(12 tau)}
    with w = -2 pi i tau.
    """
    pi = gmpy2.const_pi()
    i = mpc(0, 1)
    t = _as_tau(tau).value()
    w = -2 * pi * i * t
    if kind == "F":
        denom = 16 if convention == "derived" else 8
        return (2 * parameter - 1) / (denom * gmpy2.sqrt(pi)) * w ** mpfr(2.5) * gmpy2.exp(pi * i / (8 * t))
    if kind == "H":
        return (parameter - 1) / (8 * gmpy2.sqrt(2 * pi)) * gmpy2.sqrt(w) * gmpy2.exp(pi * i / (12 * t))
    raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")


def _near_one_error_scale(kind: str, N: int) -> mpfr:
    pi = gmpy2.const_pi()
    if kind == "F":
        return mpfr(N) ** mpfr(-1.75) * gmpy2.exp(pi * gmpy2.sqrt(mpfr(N)) / 2)
    return mpfr(N) ** mpfr(-0.75) * gmpy2.exp(pi * gmpy2.sqrt(mpfr(N) / 6))


@dataclass
class NearOneReport:
    kind: str
    parameter: int
    N: int
    convention: str
    deviation: float  # max over the grid of |value - main| / |main|
    error_to_main: float  # stated error term / |main term| at x = 0
    worst_margin: float  # max over the grid of deviation / (10 * error_to_main at that x)
    main_at_zero_real_positive: bool
    flagged: bool
    notes: list[str] = field(default_factory=list)


def near_one_mainterm_check(
    kind: str,
    parameter: int,
    N: int,
    n_grid: int = 9,
    convention: str = "derived",
    prec: int | None = None,
    safety: float = 10.0,
) -> NearOneReport:
    """Compare F_k or H_m with its near-1 main term on |x| <= y of the contour."""
    prec = prec or working_precision(N)
    notes = []
    with _ctx(prec):
        y = contour_y(kind, N)
        scale = _near_one_error_scale(kind, N)
        deviation = mpfr(0)
        worst = mpfr(0)
        ratio0 = None
        real_pos = False
        for j in range(n_grid):
            x = y * (2 * mpfr(j) / (n_grid - 1) - 1) if n_grid > 1 else mpfr(0)
            tau = ComplexTau(x, y)
            if kind == "F":
                val = eval_F_k_numeric(parameter, tau, prec=prec)
            else:
                val = eval_H_m_numeric(parameter, tau, prec=prec)
            main = near_one_main_term(kind, parameter, tau, convention)
            dev = abs(val - main) / abs(main)
            deviation = max(deviation, dev)
            allowed = safety * scale / abs(main)
            worst = max(worst, dev / allowed)
        tau0 = ComplexTau(mpfr(0), y)
        main0 = near_one_main_term(kind, parameter, tau0, convention)
        ratio0 = scale / abs(main0)
        real_pos = main0.real > 0 and abs(main0.imag) <= abs(main0.real) * mpfr(2) ** (20 - prec)
    flagged = False
    if ratio0 > 0.1:
        flagged = True
        notes.append(f"stated error term is {float(ratio0):.3g} of the main term (threshold 0.1)")
    if worst > 1:
        flagged = True
        notes.append(f"deviation exceeds {safety}x the stated error ratio")
    return NearOneReport(kind, parameter, N, convention, float(deviation), float(ratio0),
                         float(worst), bool(real_pos), flagged, notes)


# ---------------------------------------------------------------------------
# Cauchy integrals on the circle


@dataclass(frozen=True)
class ContourSplit:
    """Trapezoid sums over |x| <= y (I_major) and the rest of the circle (I_minor)."""

    I_major: mpc
    I_minor: mpc

    @property
    def total(self) -> mpc:
        return self.I_major + self.I_minor


def _pairwise_sum(vals: list):
    if not vals:
        return mpc(0)
    while len(vals) > 1:
        nxt = [vals[i] + vals[i + 1] for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return vals[0]


def _node_values(kind: str, params: Sequence[int], t: mpc, y, tol) -> dict[int, mpc]:
    if kind == "F":
        r = gmpy2.exp(gmpy2.const_pi() * mpc(0, 1) * t)
        ar = abs(r)
        eq, _ = _eta_quotient_at(t, y, "auto", tol)
        return {k: eq * _bracket_at(k, r, ar, tol)[0] for k in params}
    return {m: v for m, (v, _) in _H_at(params, t, y, "auto", tol).items()}


def contour_split(kind: str, params: Sequence[int], N: int, n_points: int, prec: int) -> dict[int, ContourSplit]:
    """Trapezoid rule for [q^N] on the kind's circle, split at |x| = y, for several parameters.

    Nodes x_j = j/M - 1/2 (j = 0..M-1); all parameters share the eta evaluations.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    params = list(params)
    with _ctx(prec):
        pi = gmpy2.const_pi()
        i = mpc(0, 1)
        y = contour_y(kind, N)
        tol = _default_tol(prec)
        lift = gmpy2.exp(2 * pi * N * y)  # |q|^{-N}
        major = {p: [] for p in params}
        minor = {p: [] for p in params}
        M = n_points
        for j in range(M):
            x = mpfr(j) / M - mpfr(1) / 2
            t = mpc(x, y)
            vals = _node_values(kind, params, t, y, tol)
            phase = lift * gmpy2.exp(-2 * pi * i * N * x)
            side = major if abs(x) <= y else minor
            for p in params:
                side[p].append(vals[p] * phase)
        return {
            p: ContourSplit(_pairwise_sum(major[p]) / M, _pairwise_sum(minor[p]) / M)
            for p in params
        }


def _fmt_c(z) -> dict:
    return {"re": format_real(z.real), "im": format_real(z.imag)}


@dataclass
class CauchyResult:
    kind: str
    parameter: int
    N: int
    n_points: int
    precision_bits: int
    split: ContourSplit
    rounded: int
    imag_residue: float
    exact: int | None = None

    @property
    def match(self) -> bool | None:
        return None if self.exact is None else self.rounded == self.exact

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "parameter": self.parameter,
            "N": self.N,
            "n_points": self.n_points,
            "precision_bits": self.precision_bits,
            "I_major": _fmt_c(self.split.I_major),
            "I_minor": _fmt_c(self.split.I_minor),
            "total": _fmt_c(self.split.total),
            "rounded": str(self.rounded),
            "exact": None if self.exact is None else str(self.exact),
            "match": self.match,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def min_points(N: int) -> int:
    """ceil(8 N sqrt N): resolves e^{-2 pi i N x} with room to spare."""
    return max(8, math.ceil(8 * N * math.sqrt(N)))


def _exact_series(kind: str, parameter: int, N: int):
    if kind == "F":
        return qseries.F_k_series(parameter, N)
    return qseries.H_m_series(parameter, N)


def cauchy_coefficients(
    kind: str,
    params: Sequence[int],
    N: int,
    n_points: int | None = None,
    prec: int | None = None,
    with_exact: bool = True,
) -> dict[int, CauchyResult]:
    """[q^N] of F_k (kind F) or H_m (kind H) for several parameters from one set of nodes."""
    need = min_points(N)
    n_points = n_points or need
    if n_points < need:
        raise ValueError(f"n_points={n_points} below the required ceil(8 N sqrt N) = {need}")
    floor_prec = math.ceil(math.pi * math.sqrt(N) / math.log(2)) + 64
    prec = prec or floor_prec
    if prec < floor_prec:
        raise ValueError(f"precision {prec} below the required {floor_prec} bits")
    for p in params:
        if (kind == "F" and p < 1) or (kind == "H" and p < 2):
            raise ValueError(f"invalid parameter {p} for kind {kind}")
    splits = contour_split(kind, params, N, n_points, prec)
    out = {}
    for p in params:
        split = splits[p]
        with _ctx(prec):
            tot = split.total
            rounded = int(gmpy2.rint(tot.real))
            imag = float(abs(tot.imag))
        exact = _exact_series(kind, p, N)[N] if with_exact else None
        res = CauchyResult(kind, p, N, n_points, prec, split, rounded, imag, exact)
        if imag >= IMAG_THRESHOLD:
            raise AccuracyError(
                f"imaginary residue {imag:.3g} at N={N} exceeds {IMAG_THRESHOLD}",
                res.to_dict() | {"imag_residue": imag},
            )
        out[p] = res
    return out


def cauchy_coefficient(
    kind: str,
    parameter: int,
    N: int,
    n_points: int | None = None,
    prec: int | None = None,
    with_exact: bool = True,
) -> CauchyResult:
    """Recover [q^N] F_k or H_m by the trapezoid rule on the circle."""
    return cauchy_coefficients(kind, [parameter], N, n_points, prec, with_exact)[parameter]


# ---------------------------------------------------------------------------
# away from q = 1


def _away_bound_scale(kind: str, N: int) -> mpfr:
    pi = gmpy2.const_pi()
    sN = gmpy2.sqrt(mpfr(N))
    if kind == "F":
        return sN * gmpy2.exp(pi * sN / 4)
    return mpfr(N) ** mpfr(0.75) * gmpy2.exp(pi / 2 * gmpy2.sqrt(mpfr(N) / 6))


@dataclass
class MinorArcReport:
    kind: str
    parameter: int
    N: int
    sampled_max_minor: float
    sampled_max_major: float
    bound_scale: float
    ratio: float  # sampled_max_minor / bound_scale
    split_ratio: float  # |I_minor| / |I_major|
    symmetry_defect: float  # max relative gap between |value(x)| and |value(-x)|
    n_grid: int
    n_points: int

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def minor_arc_bound_check(
    kind: str,
    parameter: int,
    N: int,
    n_grid: int = 256,
    n_points: int | None = None,
    prec: int | None = None,
    with_split: bool = True,
) -> MinorArcReport:
    """Sample |F_k| (or |H_m|) on y <= |x| <= 1/2 and compare with the stated growth.

    With ``with_split`` the major/minor split of the Cauchy integral is also
    computed, using ``n_points`` trapezoid nodes (default max(256, 16N));
    otherwise split_ratio is NaN.
    """
    prec = prec or working_precision(N)
    n_points = n_points or max(256, 16 * N)
    ev = eval_F_k_numeric if kind == "F" else eval_H_m_numeric
    with _ctx(prec):
        y = contour_y(kind, N)
        half = mpfr(1) / 2
        max_minor = mpfr(0)
        defect = mpfr(0)
        for j in range(n_grid):
            x = y + (half - y) * mpfr(j) / max(n_grid - 1, 1)
            vp = abs(ev(parameter, ComplexTau(x, y), prec=prec))
            vm = abs(ev(parameter, ComplexTau(-x, y), prec=prec))
            max_minor = max(max_minor, vp, vm)
            defect = max(defect, abs(vp - vm) / max(vp, vm))
        max_major = mpfr(0)
        n_major = max(8, n_grid // 8)
        for j in range(n_major):
            x = y * mpfr(j) / (n_major - 1)
            max_major = max(max_major, abs(ev(parameter, ComplexTau(x, y), prec=prec)))
        scale = _away_bound_scale(kind, N)
    split_ratio = mpfr("nan")
    if with_split:
        split = contour_split(kind, [parameter], N, n_points, prec)[parameter]
        with _ctx(prec):
            split_ratio = abs(split.I_minor) / abs(split.I_major)
    return MinorArcReport(
        kind, parameter, N, float(max_minor), float(max_major), float(scale),
        float(max_minor / scale), float(split_ratio), float(defect), n_grid, n_points,
    )


def bessel_contour_check(s, N: int, prec: int = 80) -> mpmath.mpf:
    """|P_s - I_{-s-1}(pi sqrt N)| / I_{-s-1}(pi sqrt N) with
    P_s = (1/(2 pi i)) int_{1-i}^{1+i} v^s exp(pi sqrt(N)/2 (v + 1/v)) dv.
    """
    two_nu = -2 * mpmath.mpf(s) - 2
    if two_nu != int(two_nu) or int(two_nu) % 2 == 0:
        raise ValueError(f"s={s} does not give a half-integer order")
    with mpmath.workprec(prec + 20):
        half_z = mpmath.pi * mpmath.sqrt(N) / 2
        s = mpmath.mpf(s)

        def integrand(t):
            v = mpmath.mpc(1, t)
            # dv = i dt, so the 1/(2 pi i) prefactor becomes 1/(2 pi)
            return (v**s * mpmath.exp(half_z * (v + 1 / v))).real

        ps = mpmath.quad(integrand, mpmath.linspace(-1, 1, 9)) / (2 * mpmath.pi)
        ref = bessel_I_half(int(two_nu), 2 * half_z, prec + 20)
        diff = abs(ps - ref) / ref
    with mpmath.workprec(prec):
        return +diff
