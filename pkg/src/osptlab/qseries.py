"""Exact truncated power series in q with arbitrary-precision integer coefficients.

Every generating function used by the package is built here as an integer
coefficient vector.  Eta products are generated sparsely from the pentagonal
number theorem, and quotients by them use sparse division, so the
overpartition-weighted series cost O(T*sqrt(T)) big-integer operations.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import gmpy2

__all__ = [
    "SeriesError",
    "OrderMismatchError",
    "NotInvertibleError",
    "IntegralityError",
    "TruncatedSeries",
    "PartialThetaSpec",
    "mul",
    "invert",
    "divide",
    "euler_pochhammer",
    "partition_gf",
    "overpartition_gf",
    "partial_theta",
    "h_series",
    "h_series_lambert",
    "h_series_blocks",
    "theta_bracket",
    "F_k_series",
    "H_m_series",
    "C_m_series",
    "C_bar_m_series",
    "ospt_bar_series",
]

# below this many nonzero terms one operand is treated as sparse
_SPARSE_LIMIT = 64
# dense products below this order use the schoolbook kernel
_KRONECKER_MIN = 48


class SeriesError(ValueError):
    """Base class for series construction and arithmetic errors."""


class OrderMismatchError(SeriesError):
    pass


class NotInvertibleError(SeriesError):
    pass


class IntegralityError(SeriesError):
    pass


class TruncatedSeries:
    """Power series sum c_n q^n known exactly for 0 <= n <= order.

    Instances are immutable; coefficients are stored as a tuple of Python ints.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[int], order: int | None = None):
        c = [int(v) for v in coeffs]
        if order is not None:
            if order < 0:
                raise SeriesError(f"order must be non-negative, got {order}")
            if len(c) > order + 1:
                c = c[: order + 1]
            else:
                c.extend([0] * (order + 1 - len(c)))
        if not c:
            raise SeriesError("a series needs at least the constant coefficient")
        self._coeffs = tuple(c)

    @classmethod
    def zero(cls, order: int) -> TruncatedSeries:
        return cls((), order)

    @classmethod
    def one(cls, order: int) -> TruncatedSeries:
        return cls((1,), order)

    @classmethod
    def monomial(cls, exponent: int, order: int, coeff: int = 1) -> TruncatedSeries:
        c = [0] * (order + 1)
        if exponent <= order:
            c[exponent] = coeff
        return cls(c)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, int]], order: int) -> TruncatedSeries:
        """Build from (exponent, coefficient) pairs; exponents above order are dropped."""
        c = [0] * (order + 1)
        for e, v in terms:
            if 0 <= e <= order:
                c[e] += v
        return cls(c)

    @property
    def order(self) -> int:
        return len(self._coeffs) - 1

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self._coeffs

    def __len__(self) -> int:
        return len(self._coeffs)

    def __getitem__(self, n):
        return self._coeffs[n]

    def __iter__(self) -> Iterator[int]:
        return iter(self._coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, TruncatedSeries):
            return self._coeffs == other._coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __repr__(self) -> str:
        head = ", ".join(str(v) for v in self._coeffs[:8])
        more = ", ..." if self.order >= 8 else ""
        return f"TruncatedSeries(order={self.order}, coeffs=[{head}{more}])"

    def terms(self) -> list[tuple[int, int]]:
        """Nonzero (exponent, coefficient) pairs in increasing exponent order."""
        return [(i, v) for i, v in enumerate(self._coeffs) if v]

    def truncate(self, order: int) -> TruncatedSeries:
        if order > self.order:
            raise OrderMismatchError(
                f"cannot extend a series of order {self.order} to {order}"
            )
        return TruncatedSeries(self._coeffs[: order + 1])

    def substitute(self, m: int) -> TruncatedSeries:
        """The series in q^m, truncated at the same order."""
        if m < 1:
            raise SeriesError(f"substitution power must be positive, got {m}")
        c = [0] * (self.order + 1)
        for i in range(0, self.order // m + 1):
            c[i * m] = self._coeffs[i]
        return TruncatedSeries(c)

    def _check(self, other: TruncatedSeries) -> None:
        if other.order != self.order:
            raise OrderMismatchError(
                f"orders differ: {self.order} vs {other.order}; truncate explicitly"
            )

    def __add__(self, other):
        if isinstance(other, int):
            return TruncatedSeries((self._coeffs[0] + other,) + self._coeffs[1:])
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check(other)
        return TruncatedSeries([a + b for a, b in zip(self._coeffs, other._coeffs)])

    __radd__ = __add__

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries([-a for a in self._coeffs])

    def __sub__(self, other):
        if isinstance(other, int):
            return self + (-other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check(other)
        return TruncatedSeries([a - b for a, b in zip(self._coeffs, other._coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return TruncatedSeries([a * other for a in self._coeffs])
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def to_json(self) -> str:
        """JSON array of decimal strings (no 64-bit truncation on the reader's side)."""
        return json.dumps([str(v) for v in self._coeffs])

    @classmethod
    def from_json(cls, text: str) -> TruncatedSeries:
        return cls(int(v) for v in json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "coefficient"])
        for n, v in enumerate(self._coeffs):
            w.writerow([n, str(v)])
        return buf.getvalue()


@dataclass(frozen=True)
class PartialThetaSpec:
    """Exponent data (a, b) of sum_{n>=1} (-1)^n q^{(a n^2 + b n)/2}.

    Only the j = 0 member of the family is representable exactly.
    """

    a: int
    b: int

    def __post_init__(self):
        if self.a <= 0:
            raise SeriesError(f"need a > 0, got a={self.a}")
        if self.a + self.b <= 0:
            raise SeriesError(f"need a + b > 0, got a={self.a}, b={self.b}")
        # a n^2 + b n = n(a n + b) is even for every n iff a + b is even
        if (self.a + self.b) % 2:
            raise IntegralityError(
                f"(a n^2 + b n)/2 is not an integer for n=1 with (a, b)=({self.a}, {self.b})"
            )

    def exponent(self, n: int) -> int:
        return (self.a * n * n + self.b * n) // 2


# ---------------------------------------------------------------------------
# multiplication kernels


def _is_sparse(c: Sequence[int]) -> bool:
    nz = 0
    for v in c:
        if v:
            nz += 1
            if nz > _SPARSE_LIMIT:
                return False
    return True


def _mul_sparse(sparse: Sequence[int], dense: Sequence[int], order: int) -> list[int]:
    out = [0] * (order + 1)
    for e, c in enumerate(sparse):
        if not c:
            continue
        width = order + 1 - e
        if width <= 0:
            break
        seg = dense[:width]
        if c == 1:
            out[e:] = [a + b for a, b in zip(out[e:], seg)]
        elif c == -1:
            out[e:] = [a - b for a, b in zip(out[e:], seg)]
        else:
            out[e:] = [a + c * b for a, b in zip(out[e:], seg)]
    return out


def _mul_schoolbook(a: Sequence[int], b: Sequence[int], order: int) -> list[int]:
    out = [0] * (order + 1)
    for i, x in enumerate(a):
        if not x or i > order:
            continue
        for j in range(min(len(b), order + 1 - i)):
            out[i + j] += x * b[j]
    return out


def _pack(c: Sequence[int], width: int) -> gmpy2.mpz:
    """Evaluate sum c_i 2^(width*i) for signed c_i."""
    nbytes = width // 8
    pos = b"".join((v if v > 0 else 0).to_bytes(nbytes, "little") for v in c)
    neg = b"".join((-v if v < 0 else 0).to_bytes(nbytes, "little") for v in c)
    return gmpy2.mpz(int.from_bytes(pos, "little")) - gmpy2.mpz(int.from_bytes(neg, "little"))


def _unpack(packed: gmpy2.mpz, width: int, count: int) -> list[int]:
    """Inverse of _pack for digits known to satisfy |c_i| < 2^(width-1)."""
    nbytes = width // 8
    half = 1 << (width - 1)
    bias = int.from_bytes((b"\x00" * (nbytes - 1) + b"\x80") * count, "little")
    mask = (1 << (width * count)) - 1
    raw = (int(packed) + bias) & mask
    data = raw.to_bytes(nbytes * count, "little")
    return [
        int.from_bytes(data[i * nbytes : (i + 1) * nbytes], "little") - half
        for i in range(count)
    ]


def _mul_kronecker(a: Sequence[int], b: Sequence[int], order: int) -> list[int]:
    """Dense product by Kronecker substitution: pack, one big multiply, unpack."""
    a = a[: order + 1]
    b = b[: order + 1]
    amax = max((abs(v) for v in a), default=0)
    bmax = max((abs(v) for v in b), default=0)
    if amax == 0 or bmax == 0:
        return [0] * (order + 1)
    bits = amax.bit_length() + bmax.bit_length() + min(len(a), len(b)).bit_length() + 2
    width = -(-bits // 8) * 8
    prod = _pack(a, width) * _pack(b, width)
    count = min(order + 1, len(a) + len(b) - 1)
    out = _unpack(prod, width, count)
    out.extend([0] * (order + 1 - count))
    return out


def _mul_chunked(a, b, order, threads, chunk):
    starts = list(range(0, len(a), chunk))

    def piece(s):
        return s, _mul_kronecker(a[s : s + chunk], b[: order + 1 - s], order - s)

    out = [0] * (order + 1)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        # map preserves submission order, so the sum below is order-independent anyway
        for s, part in pool.map(piece, [s for s in starts if s <= order]):
            for i, v in enumerate(part):
                out[s + i] += v
    return out


def mul(
    s1: TruncatedSeries,
    s2: TruncatedSeries,
    *,
    method: str = "auto",
    threads: int = 1,
) -> TruncatedSeries:
    """Exact Cauchy product truncated at the common order.

    ``method`` is one of ``auto``, ``sparse``, ``schoolbook``, ``kronecker``;
    every choice (and every ``threads`` value) returns the same coefficients.
    """
    if s1.order != s2.order:
        raise OrderMismatchError(f"orders differ: {s1.order} vs {s2.order}")
    T = s1.order
    a, b = s1.coeffs, s2.coeffs
    if method == "auto":
        if _is_sparse(a) or _is_sparse(b):
            method = "sparse"
        elif T < _KRONECKER_MIN:
            method = "schoolbook"
        else:
            method = "kronecker"
    if method == "sparse":
        if not _is_sparse(a):
            a, b = b, a
        out = _mul_sparse(a, b, T)
    elif method == "schoolbook":
        out = _mul_schoolbook(a, b, T)
    elif method == "kronecker":
        if threads > 1:
            out = _mul_chunked(a, b, T, threads, chunk=-(-(T + 1) // threads))
        else:
            out = _mul_kronecker(a, b, T)
    else:
        raise SeriesError(f"unknown multiplication method {method!r}")
    return TruncatedSeries(out)


def divide(num: TruncatedSeries, den: TruncatedSeries) -> TruncatedSeries:
    """Exact quotient num/den for a denominator with constant term +1 or -1.

    Triangular recurrence; the inner sum runs over the nonzero terms of den only,
    so dividing by an eta product costs O(T*sqrt(T)).
    """
    if num.order != den.order:
        raise OrderMismatchError(f"orders differ: {num.order} vs {den.order}")
    c0 = den[0]
    if c0 not in (1, -1):
        raise NotInvertibleError(f"constant term {c0} is not a unit in Z[[q]]")
    T = num.order
    nz = [(e, v) for e, v in den.terms() if e > 0]
    out = [0] * (T + 1)
    for n in range(T + 1):
        acc = num[n]
        for e, v in nz:
            if e > n:
                break
            acc -= v * out[n - e]
        out[n] = acc if c0 == 1 else -acc
    return TruncatedSeries(out)


def invert(s: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse up to order T (constant term must be +1 or -1)."""
    return divide(TruncatedSeries.one(s.order), s)


# ---------------------------------------------------------------------------
# generating functions


def euler_pochhammer(T: int, step: int = 1) -> TruncatedSeries:
    """(q^step; q^step)_inf truncated at T, from the pentagonal number theorem."""
    if T < 0:
        raise SeriesError(f"order must be non-negative, got {T}")
    c = [0] * (T + 1)
    c[0] = 1
    k = 1
    while step * k * (3 * k - 1) // 2 <= T:
        sign = -1 if k % 2 else 1
        c[step * k * (3 * k - 1) // 2] += sign
        e = step * k * (3 * k + 1) // 2
        if e <= T:
            c[e] += sign
        k += 1
    return TruncatedSeries(c)


def partition_gf(T: int) -> TruncatedSeries:
    """1/(q;q)_inf = sum p(n) q^n."""
    return invert(euler_pochhammer(T))


def overpartition_gf(T: int) -> TruncatedSeries:
    """(-q;q)_inf/(q;q)_inf = (q^2;q^2)_inf/(q;q)_inf^2, by two sparse divisions."""
    qq = euler_pochhammer(T)
    return divide(divide(euler_pochhammer(T, step=2), qq), qq)


def partial_theta(spec: PartialThetaSpec, T: int) -> TruncatedSeries:
    """sum_{n>=1} (-1)^n q^{(a n^2 + b n)/2}, stopping at the last exponent <= T."""
    c = [0] * (T + 1)
    n = 1
    while True:
        e = spec.exponent(n)
        if e > T:
            break
        c[e] += -1 if n % 2 else 1
        n += 1
    return TruncatedSeries(c)


def h_series_lambert(T: int, m: int = 1) -> TruncatedSeries:
    """h(q^m) from sum_{n>=1} (-1)^{n+1} q^{n(n+1)/2} / (1 - q^n)."""
    c = [0] * (T + 1)
    n = 1
    while m * n * (n + 1) // 2 <= T:
        sign = 1 if n % 2 else -1
        for e in range(m * n * (n + 1) // 2, T + 1, m * n):
            c[e] += sign
        n += 1
    return TruncatedSeries(c)


def h_series_blocks(T: int, m: int = 1) -> TruncatedSeries:
    """h(q^m) from sum_{j>=1} q^{j^2} (1 + 2q^j + ... + 2q^{j^2-j} + q^{j^2})."""
    c = [0] * (T + 1)
    j = 1
    while m * j * j <= T:
        for i in range(j + 1):
            e = m * (j * j + i * j)
            if e > T:
                break
            c[e] += 1 if i in (0, j) else 2
        j += 1
    return TruncatedSeries(c)


def h_series(m: int, T: int) -> TruncatedSeries:
    """Coefficients of h(q^m) up to q^T."""
    if m < 1:
        raise SeriesError(f"m must be positive, got {m}")
    if T < 0:
        raise SeriesError(f"order must be non-negative, got {T}")
    return h_series_lambert(T, m)


def theta_bracket(k: int, T: int) -> TruncatedSeries:
    """2 f_{0,2,4k-2} - f_{0,1,4k-1} - f_{0,1,4k-3}, the sparse factor of F_k."""
    if k < 1:
        raise SeriesError(f"k must be positive, got {k}")
    return (
        2 * partial_theta(PartialThetaSpec(2, 4 * k - 2), T)
        - partial_theta(PartialThetaSpec(1, 4 * k - 1), T)
        - partial_theta(PartialThetaSpec(1, 4 * k - 3), T)
    )


def F_k_series(k: int, T: int, pbar: TruncatedSeries | None = None) -> TruncatedSeries:
    """Generating function of A_k(n) - B_k(n).

    Pass a precomputed ``pbar`` (overpartition_gf of the same order) when
    building many k at once.
    """
    if pbar is None:
        pbar = overpartition_gf(T)
    elif pbar.order != T:
        raise OrderMismatchError(f"pbar has order {pbar.order}, expected {T}")
    return mul(theta_bracket(k, T), pbar, method="sparse")


def H_m_series(m: int, T: int) -> TruncatedSeries:
    """(h(q) - m h(q^m)) / (q;q)_inf, whose coefficients are C_1(n) - m C_m(n)."""
    if m < 2:
        raise SeriesError(f"m must be at least 2, got {m}")
    return divide(h_series(1, T) - m * h_series(m, T), euler_pochhammer(T))


def C_m_series(m: int, T: int) -> TruncatedSeries:
    """h(q^m)/(q;q)_inf: weighted m-string counts over partitions."""
    return divide(h_series(m, T), euler_pochhammer(T))


def C_bar_m_series(m: int, T: int) -> TruncatedSeries:
    """(-q)_inf/(q)_inf * h(q^m): weighted m-string counts over overpartitions."""
    qq = euler_pochhammer(T)
    num = mul(euler_pochhammer(T, step=2), h_series(m, T), method="sparse")
    return divide(divide(num, qq), qq)


def ospt_bar_series(T: int) -> TruncatedSeries:
    """(-q)_inf/(q)_inf * (h(q) - 2 h(q^2)), whose coefficients are ospt-bar(n)."""
    if T < 0:
        raise SeriesError(f"order must be non-negative, got {T}")
    qq = euler_pochhammer(T)
    kernel = h_series(1, T) - 2 * h_series(2, T)
    num = mul(euler_pochhammer(T, step=2), kernel, method="sparse")
    return divide(divide(num, qq), qq)
