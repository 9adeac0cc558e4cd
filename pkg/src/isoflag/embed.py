"""The fixed-spectrum matrix model of a flag manifold.

A flag with signature (k_1, ..., k_p) and spectrum (a_1, ..., a_{p+1}) is
realized as the symmetric matrix X = Q M Q' where M is the block-scalar
diagonal matrix diag(a_1 I_{n_1}, ..., a_{p+1} I_{n_{p+1}}) and Q is any
representative of the flag.  The realization is independent of the choice
of representative, turns the rotation action on flags into conjugation,
and is invertible: the flag is recovered from the eigenspaces of X.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass

import numpy as np

from .errors import (
    EigenvalueGapTooSmall,
    NotSpecialOrthogonal,
    SignatureMismatch,
    SpectrumMismatch,
)
from .flagcore import (
    ORTH_TOL,
    TRACE_TOL,
    FlagPoint,
    FlagSignature,
    Spectrum,
    SymmetricMatrix,
    _check_same_signature,
    _embedded_image,
)

EIG_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class EmbeddedFlag:
    """A point of the matrix model: symmetric, with eigenvalue a_i of
    multiplicity n_i for each block.  Validated on construction."""

    x: SymmetricMatrix
    spectrum: Spectrum
    eig_tol: InitVar[float] = EIG_TOL
    trace_tol: InitVar[float] = TRACE_TOL

    def __post_init__(self, eig_tol: float, trace_tol: float):
        if self.x.n != self.spectrum.signature.n:
            raise SignatureMismatch(
                f"matrix is {self.x.n}x{self.x.n} but signature has n={self.spectrum.signature.n}"
            )
        target = np.sort(self.spectrum.repeated())
        actual = np.linalg.eigvalsh(self.x.entries)
        worst = float(np.max(np.abs(actual - target)))
        if worst > eig_tol:
            raise SpectrumMismatch(
                f"eigenvalues deviate from the prescribed spectrum by {worst:.3e} > {eig_tol:.3e}"
            )
        drift = abs(self.x.trace - self.spectrum.block_trace)
        if drift > max(trace_tol, eig_tol * self.x.n):
            raise SpectrumMismatch(f"trace off by {drift:.3e}")

    @property
    def signature(self) -> FlagSignature:
        return self.spectrum.signature


def block_diagonal_model(spec: Spectrum) -> SymmetricMatrix:
    """The base point diag(a_1 I_{n_1}, ..., a_{p+1} I_{n_{p+1}})."""
    return SymmetricMatrix(np.diag(spec.repeated()))


def embed(f: FlagPoint, spec: Spectrum) -> EmbeddedFlag:
    """Realize the flag f as the symmetric matrix Q M Q'.

    The output depends only on the flag, not on the representative Q, and
    its eigenvalue multiset is {a_i with multiplicity n_i} exactly.
    """
    _check_same_signature(f.signature, spec.signature)
    return EmbeddedFlag(SymmetricMatrix(_embedded_image(f, spec)), spec)


def act(r: np.ndarray, f: FlagPoint, orth_tol: float = ORTH_TOL) -> FlagPoint:
    """Rotate a flag: the representative becomes r Q.

    Equivariance: embedding the rotated flag equals conjugating the
    embedded matrix, embed(act(r, f)) = r embed(f) r'.
    """
    r = np.asarray(r, dtype=float)
    n = f.signature.n
    if r.shape != (n, n):
        raise NotSpecialOrthogonal(f"expected a {n}x{n} matrix, got shape {r.shape}")
    if np.linalg.norm(r.T @ r - np.eye(n)) > orth_tol or np.linalg.det(r) < 0:
        raise NotSpecialOrthogonal("rotation must be orthogonal with determinant +1")
    return FlagPoint(r @ f.q, f.signature)


def membership(x: SymmetricMatrix, spec: Spectrum, tol: float = EIG_TOL) -> bool:
    """Does x lie on the model manifold, i.e. does its eigenvalue multiset
    match {a_i repeated n_i times} within tol?"""
    if x.n != spec.signature.n:
        raise SignatureMismatch(f"matrix is {x.n}x{x.n}, signature has n={spec.signature.n}")
    target = np.sort(spec.repeated())
    actual = np.linalg.eigvalsh(x.entries)
    return bool(np.max(np.abs(actual - target)) <= tol)


def recover(x: SymmetricMatrix, spec: Spectrum, eig_tol: float = EIG_TOL) -> FlagPoint:
    """Invert the embedding: read the flag off the eigenspaces of x.

    Eigenvalues are matched greedily to the nearest spectrum value; the
    match must be unambiguous (spectrum gaps > 2 * eig_tol) and complete
    (each eigenvalue within eig_tol of its value, multiplicities exact).
    The assembled eigenvector matrix is flipped to determinant +1 by
    negating one column of the last block, which fixes the representative
    without moving the flag.
    """
    sig = spec.signature
    if x.n != sig.n:
        raise SignatureMismatch(f"matrix is {x.n}x{x.n}, signature has n={sig.n}")
    if spec.min_gap <= 2 * eig_tol:
        raise EigenvalueGapTooSmall(
            f"spectrum min gap {spec.min_gap:.3e} <= 2 * eig_tol = {2 * eig_tol:.3e}"
        )
    lam, vec = np.linalg.eigh(x.entries)
    values = np.asarray(spec.values)
    columns: list[list[int]] = [[] for _ in values]
    for col, ev in enumerate(lam):
        j = int(np.argmin(np.abs(values - ev)))
        if abs(values[j] - ev) > eig_tol:
            raise SpectrumMismatch(
                f"eigenvalue {ev!r} is {abs(values[j] - ev):.3e} from the nearest "
                f"spectrum value {values[j]!r}"
            )
        columns[j].append(col)
    sizes = sig.block_sizes
    for j, (cols, size) in enumerate(zip(columns, sizes)):
        if len(cols) != size:
            raise SpectrumMismatch(
                f"value {values[j]!r} needs multiplicity {size}, found {len(cols)}"
            )
    q = np.concatenate([vec[:, cols] for cols in columns], axis=1)
    if np.linalg.det(q) < 0:
        q[:, -1] = -q[:, -1]
    return FlagPoint(q, sig)


def traceless_split(x: SymmetricMatrix) -> tuple[SymmetricMatrix, float]:
    """Split x into its traceless part and its scalar part:
    x = x0 + c * I with trace(x0) = 0 and c = trace(x) / n."""
    c = x.trace / x.n
    return SymmetricMatrix(x.entries - c * np.eye(x.n)), c
