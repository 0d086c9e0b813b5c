"""Brute-force enumeration of partitions and overpartitions, and string detection.

These routines are deliberately naive: they are the ground truth that the
generating functions in :mod:`osptlab.qseries` are checked against.

Odd/even strings are detected under a pluggable reading of their defining
conditions (see :class:`Interpretation`).  The m-strings on overpartitions
are detected on the non-overlined part sizes only.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "Partition",
    "Overpartition",
    "StringOccurrence",
    "Interpretation",
    "INTERPRETATIONS",
    "ConfigurationError",
    "get_interpretation",
    "candidate_interpretations",
    "enumerate_partitions",
    "enumerate_overpartitions",
    "find_m_strings",
    "find_odd_strings",
    "find_even_strings",
    "C_m_count",
    "C_bar_m_count",
    "A_B_counts",
    "A_minus_B_oracle",
    "agreement_range",
    "interpretation_search",
    "oracle_records",
    "dump_jsonl",
]


class ConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        if any(p <= 0 for p in self.parts):
            raise ValueError(f"parts must be positive: {self.parts}")
        if any(a < b for a, b in zip(self.parts, self.parts[1:])):
            raise ValueError(f"parts must be non-increasing: {self.parts}")

    @property
    def n(self) -> int:
        return sum(self.parts)

    def __str__(self) -> str:
        return "+".join(map(str, self.parts)) or "()"


@dataclass(frozen=True)
class Overpartition:
    """Parts as (size, overlined) pairs; the overlined copy leads its size class."""

    parts: tuple[tuple[int, bool], ...]

    def __post_init__(self):
        seen_over = set()
        prev = None
        for size, over in self.parts:
            if size <= 0:
                raise ValueError(f"parts must be positive: {self.parts}")
            if prev is not None:
                psize, pover = prev
                if size > psize:
                    raise ValueError(f"sizes must be non-increasing: {self.parts}")
                if over and size == psize:
                    raise ValueError(f"overlined copy must come first among size {size}")
            if over:
                if size in seen_over:
                    raise ValueError(f"size {size} overlined twice")
                seen_over.add(size)
            prev = (size, over)

    @property
    def n(self) -> int:
        return sum(s for s, _ in self.parts)

    def multiplicities(self) -> tuple[Counter, frozenset]:
        """(count of every size, set of sizes carrying an overline)."""
        return Counter(s for s, _ in self.parts), frozenset(s for s, o in self.parts if o)

    def __str__(self) -> str:
        return "+".join(f"{s}̅" if o else str(s) for s, o in self.parts) or "()"


@dataclass(frozen=True)
class StringOccurrence:
    """One detected string.

    Odd and even strings carry (k, ell); m-strings carry (m, j, shift).
    """

    kind: str
    k: int | None = None
    ell: int | None = None
    m: int | None = None
    j: int | None = None
    shift: int | None = None
    weight: int = 1

    def __post_init__(self):
        if self.kind in ("odd", "even"):
            if not (self.k and self.k >= 1 and self.ell and self.ell >= 1):
                raise ValueError(f"{self.kind} string needs k, ell >= 1")
            if self.weight != 1:
                raise ValueError("odd/even strings carry weight 1")
        elif self.kind == "m-string":
            if not (self.m and self.m >= 1 and self.j and self.j >= 1):
                raise ValueError("m-string needs m, j >= 1")
            if self.shift is None or not 0 <= self.shift <= self.j:
                raise ValueError(f"shift must lie in [0, j], got {self.shift}")
            expected = 1 if self.shift in (0, self.j) else 2
            if self.weight != expected:
                raise ValueError(f"m-string weight must be {expected}")
        else:
            raise ValueError(f"unknown string kind {self.kind!r}")

    def parts(self) -> tuple[int, ...]:
        """Part sizes making up the string."""
        if self.kind == "m-string":
            return tuple(self.m * (2 * i - 1 + self.shift) for i in range(1, self.j + 1))
        length = 2 * self.ell - 1 if self.kind == "odd" else 2 * self.ell
        return tuple(range(2 * self.k - 1, 2 * self.k - 1 + length))


# ---------------------------------------------------------------------------
# enumeration


def _reverse_lex(n: int, largest: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _reverse_lex(n - first, first):
            yield (first,) + rest


def enumerate_partitions(n: int) -> Iterator[Partition]:
    """Partitions of n in reverse lexicographic order (4, 3+1, 2+2, 2+1+1, 1+1+1+1)."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    for parts in _reverse_lex(n, n):
        yield Partition(parts)


def _overline(parts: tuple[int, ...], marked: frozenset) -> Overpartition:
    out = []
    prev = None
    for s in parts:
        out.append((s, s in marked and s != prev))
        prev = s
    return Overpartition(tuple(out))


def enumerate_overpartitions(n: int) -> Iterator[Overpartition]:
    """Every overpartition of n exactly once.

    Partitions come in reverse lexicographic order; for each, the overlined
    subsets of its distinct sizes follow a binary counter whose bit i marks the
    i-th largest distinct size.
    """
    for p in enumerate_partitions(n):
        sizes = sorted(set(p.parts), reverse=True)
        for mask in range(1 << len(sizes)):
            marked = frozenset(s for i, s in enumerate(sizes) if mask >> i & 1)
            yield _overline(p.parts, marked)


# ---------------------------------------------------------------------------
# m-strings


def _m_strings_on(sizes: frozenset | set, m: int) -> list[StringOccurrence]:
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    if not sizes:
        return []
    top = max(sizes)
    found = []
    shift = 0
    while m * (1 + shift) <= top:
        j = max(shift, 1)
        while all(m * (2 * i - 1 + shift) in sizes for i in range(1, j + 1)):
            w = 1 if shift in (0, j) else 2
            found.append(StringOccurrence("m-string", m=m, j=j, shift=shift, weight=w))
            j += 1
        shift += 1
    return found


def find_m_strings(p: Partition, m: int) -> list[StringOccurrence]:
    """All m-strings of p: sizes m(1+k), m(3+k), ..., m(2j-1+k) present, 0 <= k <= j."""
    return _m_strings_on(set(p.parts), m)


def C_m_count(n: int, m: int) -> int:
    """Weighted number of m-strings along the partitions of n."""
    if n < 0 or m < 1:
        raise ValueError(f"need n >= 0 and m >= 1, got n={n}, m={m}")
    return sum(s.weight for p in enumerate_partitions(n) for s in find_m_strings(p, m))


def C_bar_m_count(n: int, m: int) -> int:
    """Weighted m-string count along the overpartitions of n.

    A size counts toward a string only through a non-overlined copy.
    """
    if n < 0 or m < 1:
        raise ValueError(f"need n >= 0 and m >= 1, got n={n}, m={m}")
    total = 0
    for o in enumerate_overpartitions(n):
        plain = {s for s, over in o.parts if not over}
        total += sum(s.weight for s in _m_strings_on(plain, m))
    return total


# ---------------------------------------------------------------------------
# odd and even strings

_SCOPES = ("all", "nonoverlined", "overlined")


@dataclass(frozen=True)
class Interpretation:
    """One reading of the odd/even string conditions.

    run_scope     which copies satisfy "each size of the run appears"
    other_scope   which copies count toward "no other part of size X"
    forbid_scope  which copies count toward "no part of size Y"

    "No other part of size X" is read as: the scoped multiplicity of X does
    not exceed the one copy the run already forces (zero when X is outside
    the run).
    """

    id: str
    run_scope: str = "all"
    other_scope: str = "all"
    forbid_scope: str = "all"
    description: str = field(default="", compare=False)

    def __post_init__(self):
        for name in ("run_scope", "other_scope", "forbid_scope"):
            if getattr(self, name) not in _SCOPES:
                raise ConfigurationError(f"{name} must be one of {_SCOPES}")
        if self.run_scope == "overlined":
            raise ConfigurationError("a run cannot be read on overlined copies alone")


INTERPRETATIONS: dict[str, Interpretation] = {
    "literal": Interpretation(
        "literal",
        description="every copy counts in both conditions, overlined or not",
    ),
    "nonoverlined": Interpretation(
        "nonoverlined",
        "nonoverlined",
        "nonoverlined",
        "nonoverlined",
        description="strings live on the non-overlined parts; overlined parts are ignored",
    ),
}


def get_interpretation(interp: str | Interpretation) -> Interpretation:
    if isinstance(interp, Interpretation):
        return interp
    try:
        return INTERPRETATIONS[interp]
    except KeyError:
        raise ConfigurationError(
            f"unknown interpretation {interp!r}; known: {sorted(INTERPRETATIONS)}"
        ) from None


def candidate_interpretations() -> list[Interpretation]:
    """The full scope grid searched by :func:`interpretation_search`."""
    out = []
    for run, other, forbid in itertools.product(("all", "nonoverlined"), _SCOPES, _SCOPES):
        ident = f"run={run},other={other},forbid={forbid}"
        out.append(Interpretation(ident, run, other, forbid))
    return out


def _scoped(counts: Counter, over: frozenset, size: int, scope: str) -> int:
    total = counts.get(size, 0)
    o = 1 if size in over else 0
    if scope == "all":
        return total
    if scope == "overlined":
        return o
    return total - o


def _strings(o: Overpartition, k: int, interp: Interpretation, odd: bool) -> list[StringOccurrence]:
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    counts, over = o.multiplicities()
    start = 2 * k - 1
    found = []
    ell = 1
    while True:
        length = 2 * ell - 1 if odd else 2 * ell
        run = range(start, start + length)
        # condition (1) is monotone in ell: once a size is missing, longer runs fail too
        if any(_scoped(counts, over, s, interp.run_scope) < 1 for s in run):
            break
        x = 2 * ell * ell - ell if odd else 2 * ell * ell + ell
        y = 4 * ell + 2 * k - 2 if odd else 4 * ell + 2 * k
        forced = 1 if x in run else 0
        if (
            _scoped(counts, over, x, interp.other_scope) <= forced
            and _scoped(counts, over, y, interp.forbid_scope) == 0
        ):
            found.append(StringOccurrence("odd" if odd else "even", k=k, ell=ell))
        ell += 1
    return found


def find_odd_strings(
    o: Overpartition, k: int, interp: str | Interpretation = "literal"
) -> list[StringOccurrence]:
    """Odd strings starting from 2k-1: sizes 2k-1..2k+2l-3 present, no other 2l^2-l, no 4l+2k-2."""
    return _strings(o, k, get_interpretation(interp), odd=True)


def find_even_strings(
    o: Overpartition, k: int, interp: str | Interpretation = "literal"
) -> list[StringOccurrence]:
    """Even strings from 2k-1: sizes 2k-1..2k+2l-2 present, no other 2l^2+l, no 4l+2k."""
    return _strings(o, k, get_interpretation(interp), odd=False)


def A_B_counts(
    n: int, k: int, interp: str | Interpretation = "literal", mode: str = "occurrences"
) -> tuple[int, int]:
    """(A_k(n), B_k(n)) under one reading.

    mode="occurrences" counts every (k, ell) string separately;
    mode="overpartitions" counts string-bearing overpartitions once.
    """
    if mode not in ("occurrences", "overpartitions"):
        raise ConfigurationError(f"unknown counting mode {mode!r}")
    it = get_interpretation(interp)
    a = b = 0
    for o in enumerate_overpartitions(n):
        odd = len(_strings(o, k, it, True))
        even = len(_strings(o, k, it, False))
        if mode == "overpartitions":
            odd, even = min(odd, 1), min(even, 1)
        a += odd
        b += even
    return a, b


def A_minus_B_oracle(
    n: int, k: int, interp: str | Interpretation = "literal", mode: str = "occurrences"
) -> int:
    a, b = A_B_counts(n, k, interp, mode)
    return a - b


def agreement_range(
    interp: str | Interpretation,
    reference: Mapping[int, Sequence[int]],
    n_max: int,
    mode: str = "occurrences",
) -> tuple[int, tuple[int, int, int, int] | None]:
    """Largest N such that the oracle matches ``reference[k][n]`` for all n <= N.

    ``reference`` maps k to an indexable coefficient sequence (e.g. F_k_series).
    Returns (N, first_mismatch) where first_mismatch is (n, k, oracle, series)
    or None when everything up to n_max agrees.  N is -1 if n = 0 already fails.
    """
    it = get_interpretation(interp)
    ks = sorted(reference)
    for n in range(n_max + 1):
        for k in ks:
            got = A_minus_B_oracle(n, k, it, mode)
            want = reference[k][n]
            if got != want:
                return n - 1, (n, k, got, want)
    return n_max, None


def interpretation_search(
    reference: Mapping[int, Sequence[int]],
    n_max: int,
    candidates: Iterable[Interpretation] | None = None,
    modes: Iterable[str] = ("occurrences", "overpartitions"),
) -> list[dict]:
    """Agreement range of every candidate reading against the series, best first."""
    if candidates is None:
        candidates = list(INTERPRETATIONS.values()) + candidate_interpretations()
    rows = []
    for it in candidates:
        for mode in modes:
            upto, miss = agreement_range(it, reference, n_max, mode)
            rows.append({"interp": it.id, "mode": mode, "agrees_through": upto, "first_mismatch": miss})
    rows.sort(key=lambda r: (-r["agrees_through"], r["interp"], r["mode"]))
    return rows


def oracle_records(
    n_max: int,
    m_list: Iterable[int] = (1, 2, 3, 4),
    mbar_list: Iterable[int] = (1, 2),
    k_list: Iterable[int] = (1, 2, 3),
    interps: Iterable[str] = ("literal", "nonoverlined"),
) -> Iterator[dict]:
    """Enumeration counts as JSON-ready records, ordered by statistic, parameter, n."""
    m_list, mbar_list, k_list, interps = map(tuple, (m_list, mbar_list, k_list, interps))
    for m in m_list:
        for n in range(n_max + 1):
            yield {"statistic": "C", "parameter": m, "n": n, "interp": "partition", "count": str(C_m_count(n, m))}
    for m in mbar_list:
        for n in range(n_max + 1):
            yield {"statistic": "Cbar", "parameter": m, "n": n, "interp": "nonoverlined", "count": str(C_bar_m_count(n, m))}
    for it in interps:
        for k in k_list:
            for n in range(n_max + 1):
                yield {"statistic": "AB", "parameter": k, "n": n, "interp": it, "count": str(A_minus_B_oracle(n, k, it))}


def dump_jsonl(records: Iterable[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)
