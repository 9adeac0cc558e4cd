"""Ambient-dimension bounds for embedding a flag manifold, all in exact
integer arithmetic.

The matrix model lives in the traceless symmetric matrices, dimension
(n-1)(n+2)/2, and that value is compared here against the classical
general-purpose bounds evaluated at the flag manifold's dimension m:
Whitney's smooth bound 2m, Gunther's isometric bound, and Wang's
finite-group equivariant bound d|G|.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import ValidationError
from .flagcore import FlagSignature


def flag_dimension(sig: FlagSignature) -> int:
    """dim Flag(k_1, ..., k_p; R^n) = (n^2 - sum n_i^2) / 2."""
    n2 = sig.n**2 - sum(s**2 for s in sig.block_sizes)
    assert n2 % 2 == 0
    return n2 // 2


def gunther_bound(m: int) -> int:
    """max{m(m+3)/2 + 5, m(m+5)/2}: ambient dimension sufficient for an
    isometric embedding of any Riemannian manifold of dimension m."""
    if m < 1:
        raise ValidationError(f"need m >= 1, got {m}")
    return max(m * (m + 3) // 2 + 5, m * (m + 5) // 2)


def gunther_bound_alt(m: int) -> int:
    """The same bound with the constant folded inside the max:
    max{m(m+3) + 10, m(m+5)} / 2.  Kept as a cross-check."""
    if m < 1:
        raise ValidationError(f"need m >= 1, got {m}")
    return max(m * (m + 3) + 10, m * (m + 5)) // 2


def isospectral_bound(n: int) -> int:
    """(n-1)(n+2)/2: the ambient dimension achieved by the matrix model of
    any flag manifold in R^n (traceless symmetric matrices)."""
    if n < 2:
        raise ValidationError(f"need n >= 2, got {n}")
    return (n - 1) * (n + 2) // 2


def whitney_bound(m: int) -> int:
    """2m: ambient dimension sufficient for a smooth embedding."""
    if m < 1:
        raise ValidationError(f"need m >= 1, got {m}")
    return 2 * m


def whitney_comparison(sig: FlagSignature) -> bool:
    """True iff the matrix model beats (or ties) Whitney's bound, via the
    block-size inequality

        sum n_i (n_i + 1) <= 2 [1 + sum_{i<j} n_i n_j],

    which is equivalent to the direct comparison
    isospectral_bound(n) <= n^2 - sum n_i^2."""
    sizes = sig.block_sizes
    lhs = sum(s * (s + 1) for s in sizes)
    rhs = 2 * (1 + sum(a * b for a, b in itertools.combinations(sizes, 2)))
    return lhs <= rhs


def gunther_comparison(sig: FlagSignature) -> bool:
    """True iff the matrix model beats Gunther's bound strictly; true for
    every signature since m >= n - 1."""
    return isospectral_bound(sig.n) < gunther_bound(flag_dimension(sig))


def wang_bound(d: int, group_order: int) -> int:
    """d |G|: ambient dimension of the equivariant embedding a finite group
    of order |G| induces from any embedding into R^d."""
    if d < 1 or group_order < 1:
        raise ValidationError(f"need d, group_order >= 1, got {d}, {group_order}")
    return d * group_order


def wang_whitney_composed(m: int, group_order: int) -> int:
    """2m |G|: Wang's bound fed with Whitney's embedding."""
    return wang_bound(whitney_bound(m), group_order)


@dataclass(frozen=True)
class StiefelBound:
    ambient: int
    minimal_hypothesis: bool


def stiefel_min_dim(k: int, n: int) -> StiefelBound:
    """kn: ambient dimension of the orthonormal-frame model {Y : Y'Y = I}.

    ``minimal_hypothesis`` reports whether the range in which this is known
    to be the equivariant minimum holds: n >= 17 and k < (n-1)/2."""
    if not 1 <= k < n:
        raise ValidationError(f"need 1 <= k < n, got k={k}, n={n}")
    return StiefelBound(k * n, n >= 17 and 2 * k < n - 1)


def stiefel_check(y: np.ndarray, tol: float = 1e-10) -> bool:
    """Is y an orthonormal frame, i.e. ||Y'Y - I||_F <= tol?"""
    y = np.asarray(y, dtype=float)
    if y.ndim != 2:
        return False
    k = y.shape[1]
    return bool(np.linalg.norm(y.T @ y - np.eye(k)) <= tol)


@dataclass(frozen=True)
class BoundReport:
    """All bounds for one signature, as exact integers, plus the named
    comparisons between them.

    ``isospectral_label`` distinguishes the range where the model's value
    is the proven equivariant minimum (n >= 17) from the range where it is
    only an achieved upper bound."""

    signature: FlagSignature
    flag_dim: int
    isospectral: int
    gunther: int
    whitney: int
    wang: int | None
    comparisons: dict[str, bool]
    isospectral_label: str


def bound_table(sig: FlagSignature, group_order: int | None = None) -> BoundReport:
    """Evaluate every bound for one signature.

    With a group order given, the Wang column holds the Whitney-composed
    value 2m|G| and the comparisons record whether it exceeds the matrix
    model's dimension (equivalently |G| > (n-1)(n+2)/4m)."""
    m = flag_dimension(sig)
    iso = isospectral_bound(sig.n)
    comparisons = {
        "isospectral_lt_gunther": gunther_comparison(sig),
        "whitney_condition": whitney_comparison(sig),
    }
    wang = None
    if group_order is not None:
        wang = wang_whitney_composed(m, group_order)
        comparisons["wang_composed_gt_isospectral"] = wang > iso
    label = "exact equivariant minimum" if sig.n >= 17 else "achieved upper bound"
    return BoundReport(
        signature=sig,
        flag_dim=m,
        isospectral=iso,
        gunther=gunther_bound(m),
        whitney=whitney_bound(m),
        wang=wang,
        comparisons=comparisons,
        isospectral_label=label,
    )


def all_signatures(n: int) -> Iterator[FlagSignature]:
    """Every flag signature in R^n: the 2^{n-1} - 1 nonempty subsets of
    {1, ..., n-1} as chains k_1 < ... < k_p."""
    for p in range(1, n):
        for ks in itertools.combinations(range(1, n), p):
            yield FlagSignature(n, ks)
