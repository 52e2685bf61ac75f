"""Real bilinear forms with a symmetry sign.

A form is stored as its Gram matrix ``M`` together with the sign ``epsilon``
such that ``M.T == epsilon * M``: ``+1`` for symmetric forms, ``-1`` for
symplectic (skew) ones.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EpsilonMismatch, SymmetryViolation


@dataclass(frozen=True)
class Tolerance:
    """Relative threshold with an absolute floor.

    A quantity is treated as zero when it is below
    ``max(rel_eps * scale, abs_eps)`` for the relevant scale.
    """

    rel_eps: float = 1e-10
    abs_eps: float = 1e-12

    def __post_init__(self):
        if not self.rel_eps > 0:
            raise ValueError(f"rel_eps must be positive, got {self.rel_eps}")
        if not self.abs_eps >= 0:
            raise ValueError(f"abs_eps must be non-negative, got {self.abs_eps}")

    def threshold(self, scale: float) -> float:
        return max(self.rel_eps * float(scale), self.abs_eps)


DEFAULT_TOL = Tolerance()


def _readonly(a) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class BilinearFormMatrix:
    entries: np.ndarray
    epsilon: int

    def __post_init__(self):
        m = _readonly(self.entries)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"form matrix must be square, got shape {m.shape}")
        if self.epsilon not in (1, -1):
            raise ValueError(f"epsilon must be +1 or -1, got {self.epsilon!r}")
        scale = np.max(np.abs(m)) if m.size else 0.0
        defect = np.max(np.abs(m.T - self.epsilon * m)) if m.size else 0.0
        if defect > DEFAULT_TOL.threshold(scale):
            kind = "symmetric" if self.epsilon == 1 else "skew-symmetric"
            raise SymmetryViolation(f"matrix is not {kind} (defect {defect:.3e})")
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "epsilon", int(self.epsilon))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __call__(self, x, y) -> float:
        return float(np.asarray(x) @ self.entries @ np.asarray(y))

    def __repr__(self):
        return f"BilinearFormMatrix(n={self.n}, epsilon={self.epsilon:+d})"


@dataclass(frozen=True)
class Signature:
    positives: int
    negatives: int
    zeros: int

    @property
    def rank(self) -> int:
        return self.positives + self.negatives

    @property
    def index(self) -> int:
        """positives - negatives."""
        return self.positives - self.negatives

    def __add__(self, other: Signature) -> Signature:
        return Signature(
            self.positives + other.positives,
            self.negatives + other.negatives,
            self.zeros + other.zeros,
        )


def as_form(m, epsilon: int | None = None) -> BilinearFormMatrix:
    if isinstance(m, BilinearFormMatrix):
        if epsilon is not None and m.epsilon != epsilon:
            raise EpsilonMismatch(f"expected epsilon {epsilon:+d}, got {m.epsilon:+d}")
        return m
    return BilinearFormMatrix(m, 1 if epsilon is None else epsilon)


def signature(form: BilinearFormMatrix, tol: Tolerance = DEFAULT_TOL) -> Signature:
    """Inertia of a symmetric form.

    Eigenvalues of the symmetrized matrix are banded around zero with
    ``tol.threshold(spectral_radius)``.
    """
    form = as_form(form)
    if form.epsilon != 1:
        raise EpsilonMismatch("signature is only defined for symmetric (epsilon=+1) forms")
    m = form.entries
    if m.size == 0:
        return Signature(0, 0, 0)
    w = np.linalg.eigvalsh((m + m.T) / 2)
    tau = tol.threshold(np.max(np.abs(w)))
    pos = int(np.count_nonzero(w > tau))
    neg = int(np.count_nonzero(w < -tau))
    return Signature(pos, neg, len(w) - pos - neg)


def numerical_rank(m, tol: Tolerance = DEFAULT_TOL) -> int:
    m = np.asarray(m, dtype=float)
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.count_nonzero(s > tol.threshold(s[0])))


def is_nondegenerate(form: BilinearFormMatrix, tol: Tolerance = DEFAULT_TOL) -> bool:
    form = as_form(form)
    return numerical_rank(form.entries, tol) == form.n


def hyperbolic_form(k: int, epsilon: int) -> BilinearFormMatrix:
    """The form ``[[0, I_k], [epsilon*I_k, 0]]`` on ``L + L*``."""
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    eye = np.eye(k)
    zero = np.zeros((k, k))
    return BilinearFormMatrix(np.block([[zero, eye], [epsilon * eye, zero]]), epsilon)


def direct_sum(f1: BilinearFormMatrix, f2: BilinearFormMatrix) -> BilinearFormMatrix:
    if f1.epsilon != f2.epsilon:
        raise EpsilonMismatch(
            f"cannot sum forms with epsilon {f1.epsilon:+d} and {f2.epsilon:+d}"
        )
    n1, n2 = f1.n, f2.n
    m = np.zeros((n1 + n2, n1 + n2))
    m[:n1, :n1] = f1.entries
    m[n1:, n1:] = f2.entries
    return BilinearFormMatrix(m, f1.epsilon)
