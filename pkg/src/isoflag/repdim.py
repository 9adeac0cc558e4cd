"""Exact dimensions of irreducible SO(n) modules.

Irreducible modules of SO(n, C) are indexed by nonincreasing half-integer
sequences mu = (mu_1, ..., mu_m), m = floor(n/2), with mu_m >= 0 when n is
odd and mu_{m-1} >= |mu_m| when n is even.  The dimension is the product

    n = 2m+1:  prod_{i<j} (mu_i - mu_j + j - i)/(j - i)
               * prod_{i<=j} (mu_i + mu_j + n - i - j)/(n - i - j)

    n = 2m:    prod_{i<j} (mu_i - mu_j + j - i)/(j - i)
                          * (mu_i + mu_j + n - i - j)/(n - i - j)

Everything here runs in exact big-integer arithmetic: weights are stored
as doubled integers so half-integral entries stay exact, and products are
accumulated as integer numerator/denominator pairs whose quotient is
checked to divide exactly.  Floating point is deliberately absent.

The classification utilities enumerate every dominant weight inside a box
and mechanically confirm which modules fit below the dimension of the
traceless symmetric matrices, (n-1)(n+2)/2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterator, Sequence

from .errors import (
    DeltaOutOfRange,
    HypothesisViolated,
    IndexOutOfRange,
    MixedParity,
    NotDominant,
    ValidationError,
)


@dataclass(frozen=True, order=True)
class HighestWeight:
    """A dominant weight for SO(n), stored as doubled integers.

    ``doubled[i] = 2 * mu_{i+1}``; all entries share one parity (all even
    for integral weights, all odd for spin weights).
    """

    n: int
    doubled: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "doubled", tuple(int(d) for d in self.doubled))
        if self.n < 3:
            raise NotDominant(f"need n >= 3, got n={self.n}")
        m = self.n // 2
        d = self.doubled
        if len(d) != m:
            raise NotDominant(f"need {m} entries for n={self.n}, got {len(d)}")
        if len({x % 2 for x in d}) > 1:
            raise MixedParity(f"entries mix integers and half-integers: {self._pretty(d)}")
        if any(a < b for a, b in zip(d, d[1:])):
            raise NotDominant(f"entries must be nonincreasing: {self._pretty(d)}")
        if self.n % 2 == 1:
            if d[-1] < 0:
                raise NotDominant(f"last entry must be >= 0 for odd n: {self._pretty(d)}")
        else:
            if m >= 2 and d[-2] < abs(d[-1]):
                raise NotDominant(
                    f"need mu_{m - 1} >= |mu_{m}| for even n: {self._pretty(d)}"
                )

    @staticmethod
    def _pretty(doubled: Sequence[int]) -> str:
        return ",".join(str(Fraction(d, 2)) for d in doubled)

    @property
    def m(self) -> int:
        return self.n // 2

    @property
    def is_spin(self) -> bool:
        return self.doubled[0] % 2 == 1

    @property
    def is_zero(self) -> bool:
        return all(d == 0 for d in self.doubled)

    def halves(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(d, 2) for d in self.doubled)

    def __str__(self) -> str:
        return self._pretty(self.doubled)

    @classmethod
    def from_halves(cls, n: int, values: Sequence) -> "HighestWeight":
        doubled = []
        for v in values:
            f = 2 * Fraction(v)
            if f.denominator != 1:
                raise MixedParity(f"entry {v!r} is not an integer or half-integer")
            doubled.append(int(f))
        return cls(n, tuple(doubled))

    @classmethod
    def zero(cls, n: int) -> "HighestWeight":
        return cls(n, (0,) * (n // 2))


def parse_weight(n: int, text: str) -> HighestWeight:
    """Parse the CLI weight syntax: comma-separated entries, each an integer
    or a fraction like ``1/2``.  Integral weights shorter than m are padded
    with trailing zeros; spin weights must be given in full since padding
    would mix parities."""
    entries = [t.strip() for t in text.split(",") if t.strip()]
    if not entries:
        raise ValidationError("empty weight")
    doubled = []
    for t in entries:
        try:
            f = 2 * Fraction(t)
        except (ValueError, ZeroDivisionError) as e:
            raise ValidationError(f"bad weight entry {t!r}: {e}") from None
        if f.denominator != 1:
            raise MixedParity(f"entry {t!r} is not an integer or half-integer")
        doubled.append(int(f))
    m = n // 2
    if len(doubled) < m:
        if any(d % 2 for d in doubled):
            raise MixedParity(
                f"spin weight needs all {m} entries for n={n}; zero-padding would mix parities"
            )
        doubled.extend([0] * (m - len(doubled)))
    return HighestWeight(n, tuple(doubled))


def weyl_dim(w: HighestWeight) -> int:
    """Dimension of the irreducible SO(n, C) module with highest weight w.

    Evaluated as an exact integer; the denominator product is required to
    divide the numerator product exactly, never rounded.
    """
    n, d, m = w.n, w.doubled, w.m
    num = 1
    den = 1
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            num *= (d[i - 1] - d[j - 1] + 2 * (j - i)) * (d[i - 1] + d[j - 1] + 2 * (n - i - j))
            den *= 4 * (j - i) * (n - i - j)
    if n % 2 == 1:
        for i in range(1, m + 1):
            num *= d[i - 1] + n - 2 * i
            den *= n - 2 * i
    q, r = divmod(num, den)
    if r != 0:
        raise ArithmeticError(f"dimension product is not integral for weight {w}")
    if q <= 0:
        raise ArithmeticError(f"dimension product is not positive for weight {w}")
    return q


def fundamental_weight(n: int, i: int) -> HighestWeight:
    """The i-th fundamental weight of SO(n), 1 <= i <= m.

    For odd n the last one is the spin weight (1/2, ..., 1/2); for even n
    the last two are the half-spin weights (1/2, ..., 1/2, -/+ 1/2).
    """
    if n < 3:
        raise HypothesisViolated(f"need n >= 3, got {n}")
    m = n // 2
    if not 1 <= i <= m:
        raise IndexOutOfRange(f"fundamental weight index {i} outside 1..{m}")
    if n % 2 == 1:
        if i <= m - 1:
            doubled = (2,) * i + (0,) * (m - i)
        else:
            doubled = (1,) * m
    else:
        if i <= m - 2:
            doubled = (2,) * i + (0,) * (m - i)
        elif i == m - 1:
            doubled = (1,) * (m - 1) + (-1,)
        else:
            doubled = (1,) * m
    return HighestWeight(n, doubled)


def spin_dimension(n: int) -> int:
    """2^m for n = 2m+1, 2^{m-1} for n = 2m: the spin module dimension,
    equal to weyl_dim at the spin fundamental weight(s)."""
    if n < 3:
        raise HypothesisViolated(f"need n >= 3, got {n}")
    m = n // 2
    return 2**m if n % 2 == 1 else 2 ** (m - 1)


def single_row_dim(n: int, s: int) -> int:
    """Closed form for the single-row weight (s, 0, ..., 0):

        odd n:   (1 + 2s/(n-2)) * C(n-3+s, s)
        even n:  (1 + s/(m-1))  * C(n-3+s, s)

    Must agree with weyl_dim on the same weight; kept separate so the two
    routes check each other.
    """
    if n < 5:
        raise HypothesisViolated(f"need n >= 5, got {n}")
    if s < 0:
        raise ValidationError(f"need s >= 0, got {s}")
    binom = comb(n - 3 + s, s)
    if n % 2 == 1:
        val = Fraction(n - 2 + 2 * s, n - 2) * binom
    else:
        m = n // 2
        val = Fraction(m - 1 + s, m - 1) * binom
    if val.denominator != 1:
        raise ArithmeticError(f"single-row dimension is not integral for n={n}, s={s}")
    return int(val)


def shift_decrease_check(w: HighestWeight, delta) -> bool:
    """Subtract delta from every nonzero leading entry of w and test that
    the dimension strictly drops.

    Requires 0 < delta <= mu_k where mu_k is the last nonzero entry (the
    downshifted sequence is then still dominant), and the shift must not
    mix parities when trailing zeros remain.
    """
    dd = 2 * Fraction(delta)
    if dd.denominator != 1:
        raise DeltaOutOfRange(f"delta {delta!r} is not an integer or half-integer")
    dd = int(dd)
    d = w.doubled
    nonzero = [idx for idx, v in enumerate(d) if v != 0]
    if not nonzero:
        raise DeltaOutOfRange("the zero weight has no entry to shift")
    k = nonzero[-1]
    if d[k] < 0:
        raise DeltaOutOfRange(f"last nonzero entry {Fraction(d[k], 2)} is negative")
    if not 0 < dd <= d[k]:
        raise DeltaOutOfRange(
            f"delta must satisfy 0 < delta <= {Fraction(d[k], 2)}, got {Fraction(dd, 2)}"
        )
    if k + 1 < len(d) and dd % 2 != 0:
        raise DeltaOutOfRange("half-integer shift would mix parities with the trailing zeros")
    shifted = tuple(v - dd for v in d[: k + 1]) + d[k + 1 :]
    return weyl_dim(w) > weyl_dim(HighestWeight(w.n, shifted))


@dataclass(frozen=True)
class EnumerationHit:
    """One dominant weight found at or below the dimension cutoff.

    ``real_form`` records whether the complex dimension is guaranteed to
    equal the real dimension (trailing entry zero for odd n, trailing two
    entries zero for even n); hits without that guarantee are reported at
    the complexified level.  ``sign_pair`` marks even-n weights whose
    mirror (sign-flipped last entry) is a distinct weight of the same
    dimension, reported once.
    """

    weight: HighestWeight
    dimension: int
    real_form: bool
    sign_pair: bool

    @property
    def spin(self) -> bool:
        return self.weight.is_spin


@dataclass(frozen=True)
class SearchBox:
    """The exhaustive enumeration region: both parities, first entry at
    most mu1_cap, and (for even n) both signs of the last entry."""

    mu1_cap_doubled: int
    includes_spin: bool = True
    includes_negative_last: bool = True

    @property
    def mu1_cap(self) -> Fraction:
        return Fraction(self.mu1_cap_doubled, 2)


@dataclass(frozen=True)
class EnumerationReport:
    n: int
    max_dim: int
    hits: tuple[EnumerationHit, ...]
    search_box: SearchBox


def _dominant_in_box(m: int, cap_doubled: int, parity: int) -> Iterator[tuple[int, ...]]:
    """All nonincreasing tuples of one parity with entries in [parity, cap]."""
    vals = range(cap_doubled - (cap_doubled - parity) % 2, parity - 1, -2)
    yield from itertools.combinations_with_replacement(vals, m)


def enumerate_low_dim(n: int, max_dim: int, mu1_cap=4) -> EnumerationReport:
    """Exhaustively list every dominant weight with mu_1 <= mu1_cap whose
    module dimension is at most max_dim.

    Both parities are walked.  For even n the negative-last-entry branch is
    visited explicitly, confirmed to carry the same dimension as its
    mirror, and reported once with ``sign_pair`` set.
    Hits are sorted by dimension, then lexicographically.
    """
    if n < 3:
        raise HypothesisViolated(f"need n >= 3, got {n}")
    cap = 2 * Fraction(mu1_cap)
    if cap.denominator != 1 or cap < 4:
        raise ValidationError(f"mu1_cap must be a half-integer >= 2, got {mu1_cap!r}")
    cap = int(cap)
    m = n // 2
    max_dim = int(max_dim)
    hits = []
    for parity in (0, 1):
        for doubled in _dominant_in_box(m, cap, parity):
            w = HighestWeight(n, doubled)
            dim = weyl_dim(w)
            if dim > max_dim:
                continue
            sign_pair = n % 2 == 0 and doubled[-1] > 0
            if sign_pair:
                mirror = HighestWeight(n, doubled[:-1] + (-doubled[-1],))
                if weyl_dim(mirror) != dim:
                    raise ArithmeticError(f"mirror of {w} has a different dimension")
            if n % 2 == 1:
                real_form = doubled[-1] == 0
            else:
                real_form = doubled[-1] == 0 and (m < 2 or doubled[-2] == 0)
            hits.append(EnumerationHit(w, dim, real_form, sign_pair))
    hits.sort(key=lambda h: (h.dimension, h.weight.doubled))
    return EnumerationReport(n, max_dim, tuple(hits), SearchBox(cap, True, n % 2 == 0))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class ClassificationReport:
    """Mechanical confirmation that, below the dimension of the traceless
    symmetric matrices, only the four classical modules fit."""

    n: int
    bound: int
    hits: tuple[EnumerationHit, ...]
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def traceless_sym_dim(n: int) -> int:
    """(n-1)(n+2)/2, the dimension of the traceless symmetric matrices."""
    return (n - 1) * (n + 2) // 2


def verify_classification(n: int, mu1_cap=4) -> ClassificationReport:
    """Verify, in exact arithmetic, the low-dimension module classification
    for SO(n), n >= 17:

    1. the spin dimension exceeds the bound (n-1)(n+2)/2 (this is what the
       n >= 17 hypothesis buys);
    2. inside the enumeration box exactly four weights fit at or below the
       bound: 0, (1,0,...), (1,1,0,...), (2,0,...), with their closed-form
       dimensions 1, n, n(n-1)/2, (n-1)(n+2)/2;
    3. the comparison weights (2,1^{q-1},0,...) for q = 2..m and
       (1^q,0,...) for q = 3..m all exceed the bound ((1,1,0,...) is the
       lone exception below it);
    4. the single-row closed form exceeds the bound at s = 3 and s = 4.
    """
    if n < 17:
        raise HypothesisViolated(f"classification requires n >= 17, got {n}")
    m = n // 2
    bound = traceless_sym_dim(n)
    checks = []

    spin = spin_dimension(n)
    checks.append(
        CheckResult("spin_exceeds_bound", spin > bound, f"{spin} > {bound}")
    )

    report = enumerate_low_dim(n, bound, mu1_cap)
    expected = {
        (0,) * m: 1,
        (2,) + (0,) * (m - 1): n,
        (2, 2) + (0,) * (m - 2): n * (n - 1) // 2,
        (4,) + (0,) * (m - 1): bound,
    }
    found = {h.weight.doubled: h.dimension for h in report.hits}
    checks.append(
        CheckResult(
            "only_four_low_weights",
            found == expected,
            f"hit dims {sorted(found.values())}, expected {sorted(expected.values())}",
        )
    )

    comparison = [(2,) * 1 + (1,) * (q - 1) + (0,) * (m - q) for q in range(2, m + 1)]
    comparison += [(1,) * q + (0,) * (m - q) for q in range(3, m + 1)]
    worst = None
    all_exceed = True
    for halves in comparison:
        dim = weyl_dim(HighestWeight.from_halves(n, halves))
        if dim <= bound:
            all_exceed = False
        if worst is None or dim < worst:
            worst = dim
    checks.append(
        CheckResult(
            "proof_case_weights_exceed_bound",
            all_exceed,
            f"{len(comparison)} comparison weights, smallest dimension {worst} vs bound {bound}",
        )
    )

    rows = {s: single_row_dim(n, s) for s in (3, 4)}
    checks.append(
        CheckResult(
            "single_row_exceeds_bound",
            all(v > bound for v in rows.values()),
            f"s=3: {rows[3]}, s=4: {rows[4]}, bound {bound}",
        )
    )

    return ClassificationReport(n, bound, report.hits, tuple(checks))
