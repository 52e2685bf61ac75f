"""Linear subspaces of R^n stored by orthonormal bases.

All comparisons go through principal angles, so every predicate here has a
single tolerance dial: two directions coincide when the sine of their
principal angle is at most ``rel_eps``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .forms import DEFAULT_TOL, BilinearFormMatrix, Tolerance


@dataclass(frozen=True, eq=False)
class Subspace:
    basis: np.ndarray

    def __post_init__(self):
        b = np.array(self.basis, dtype=float, copy=True)
        if b.ndim != 2:
            raise DimensionMismatch(f"basis must be a 2-d array, got ndim={b.ndim}")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    k = dim

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.T

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim})"


def zero_subspace(n: int) -> Subspace:
    return Subspace(np.zeros((n, 0)))


def canonicalize(raw, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the numerical column space of ``raw``."""
    raw = np.asarray(raw, dtype=float)
    if raw.ndim == 1:
        raw = raw[:, None]
    n = raw.shape[0]
    if n < 1:
        raise DimensionMismatch("ambient dimension must be at least 1")
    if raw.shape[1] == 0:
        return zero_subspace(n)
    u, s, _ = np.linalg.svd(raw, full_matrices=False)
    r = int(np.count_nonzero(s > tol.threshold(s[0])))
    return Subspace(u[:, :r])


def _check_ambient(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch(
            f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}"
        )


def _sines(a: Subspace, b: Subspace):
    """Sines of the principal angles, descending, with matching directions in ``b``.

    Taken from the part of ``b`` orthogonal to ``a``, which resolves small
    angles to full relative precision (cosines cannot below ~1e-8).
    """
    _check_ambient(a, b)
    if b.dim == 0:
        return np.zeros((0,)), np.zeros((b.ambient_dim, 0))
    rest = b.basis - a.basis @ (a.basis.T @ b.basis)
    _, s, vt = np.linalg.svd(rest, full_matrices=False)
    return np.clip(s, 0.0, 1.0), b.basis @ vt.T


def principal_angles(a: Subspace, b: Subspace) -> np.ndarray:
    """Principal angles in ascending order, ``min(dim a, dim b)`` of them."""
    if a.dim < b.dim:
        a, b = b, a
    _check_ambient(a, b)
    if b.dim == 0:
        return np.zeros((0,))
    cos = np.clip(np.linalg.svd(a.basis.T @ b.basis, compute_uv=False), 0.0, 1.0)
    from_cos = np.arccos(cos)
    from_sin = np.arcsin(_sines(a, b)[0][::-1])
    return np.where(from_cos < np.pi / 4, from_sin, from_cos)


def intersect(a: Subspace, b: Subspace, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Directions of ``b`` whose principal angle to ``a`` has sine <= ``rel_eps``."""
    if a.dim < b.dim:
        a, b = b, a
    s, dirs = _sines(a, b)
    keep = s <= tol.threshold(1.0)
    if not np.any(keep):
        return zero_subspace(b.ambient_dim)
    return canonicalize(dirs[:, keep], tol)


def subspace_sum(a: Subspace, b: Subspace, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    _check_ambient(a, b)
    return canonicalize(np.hstack([a.basis, b.basis]), tol)


def subspace_equal(a: Subspace, b: Subspace, tol: Tolerance = DEFAULT_TOL) -> bool:
    _check_ambient(a, b)
    if a.dim != b.dim:
        return False
    s, _ = _sines(a, b)
    return bool(np.all(s <= tol.threshold(1.0)))


def null_space(m, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the kernel of ``m`` (columns)."""
    m = np.asarray(m, dtype=float)
    n = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(n)
    _, s, vt = np.linalg.svd(m)
    r = int(np.count_nonzero(s > tol.threshold(s[0]))) if s.size else 0
    return vt[r:].T.copy()


def orthogonal_complement_wrt(
    form: BilinearFormMatrix, a: Subspace, tol: Tolerance = DEFAULT_TOL
) -> Subspace:
    """``{x : form(v, x) = 0 for all v in a}``."""
    m = form.entries if isinstance(form, BilinearFormMatrix) else np.asarray(form, float)
    if m.shape[0] != a.ambient_dim:
        raise DimensionMismatch(
            f"form has dimension {m.shape[0]}, subspace lives in {a.ambient_dim}"
        )
    if a.dim == 0:
        return Subspace(np.eye(a.ambient_dim))
    return Subspace(null_space(a.basis.T @ m, tol))
