"""Sampled homotopies of lagrangians into mutually transversal position.

The symmetric-case constructions move graph maps linearly towards multiples
of the identity metric; the skew case does the same with multiples of the
standard complex structure after doubling odd ranks.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ContinuityViolation, EpsilonMismatch
from .forms import DEFAULT_TOL, Tolerance
from .phase_space import (
    EpsSpace,
    GraphMap,
    Lagrangian,
    _same_space,
    are_transversal,
    graph_lagrangian,
    standard_space,
    validate_lagrangian,
)
from .subspace import principal_angles

CONTINUITY_BOUND = np.pi / 4
ANGLE_GRID = 64


def max_principal_angle(a: Lagrangian, b: Lagrangian) -> float:
    angles = principal_angles(a.subspace, b.subspace)
    return float(angles.max()) if angles.size else 0.0


@dataclass(frozen=True, eq=False)
class LagrangianPath:
    space: EpsSpace
    ts: np.ndarray
    lagrangians: tuple

    def __post_init__(self):
        ts = np.asarray(self.ts, dtype=float)
        if len(ts) != len(self.lagrangians) or len(ts) < 2:
            raise ValueError("a path needs at least two samples, one lagrangian per parameter")
        if ts[0] != 0.0 or ts[-1] != 1.0 or np.any(np.diff(ts) <= 0):
            raise ValueError("path parameters must increase strictly from 0 to 1")
        _same_space(*self.lagrangians)
        for k in range(len(ts) - 1):
            step = max_principal_angle(self.lagrangians[k], self.lagrangians[k + 1])
            if step >= CONTINUITY_BOUND:
                raise ContinuityViolation(
                    f"samples {k} and {k + 1} are {step:.3f} rad apart; increase steps"
                )
        ts = ts.copy()
        ts.setflags(write=False)
        object.__setattr__(self, "ts", ts)
        object.__setattr__(self, "lagrangians", tuple(self.lagrangians))

    @property
    def start(self) -> Lagrangian:
        return self.lagrangians[0]

    @property
    def end(self) -> Lagrangian:
        return self.lagrangians[-1]

    @property
    def residuals(self) -> np.ndarray:
        return np.array([lag.residual for lag in self.lagrangians])

    def __len__(self):
        return len(self.ts)


def _linear_graph_path(space, g0, target, steps, tol) -> LagrangianPath:
    if steps < 2:
        raise ValueError(f"steps must be at least 2, got {steps}")
    ts = np.linspace(0.0, 1.0, steps)
    lags = [graph_lagrangian(space, GraphMap((1 - t) * g0 + t * target, space.epsilon), tol)
            for t in ts]
    return LagrangianPath(space, ts, tuple(lags))


def _as_map(g, epsilon) -> GraphMap:
    if isinstance(g, GraphMap):
        if g.epsilon != epsilon:
            raise EpsilonMismatch(f"expected a graph map for epsilon {epsilon:+d}")
        return g
    return GraphMap(g, epsilon)


def deform_third_to_transversal(nprime: int, g, steps: int = 17,
                                tol: Tolerance = DEFAULT_TOL) -> LagrangianPath:
    """Path ``t -> graph((1 - t) g + t I)`` in the standard symplectic space."""
    g = _as_map(g, -1)
    space, _, _ = standard_space(nprime, -1)
    return _linear_graph_path(space, g.entries, np.eye(nprime), steps, tol)


def deform_family_to_mutually_transversal(nprime: int, gs: Sequence, steps: int = 17,
                                          tol: Tolerance = DEFAULT_TOL) -> list[LagrangianPath]:
    """The k-th map (k = 1, 2, ...) is moved to ``(k + 2) I``.

    Endpoints differ pairwise by nonzero multiples of the identity, so they
    are mutually transversal and transversal to both factors.
    """
    space, _, _ = standard_space(nprime, -1)
    eye = np.eye(nprime)
    return [
        _linear_graph_path(space, _as_map(g, -1).entries, (k + 3) * eye, steps, tol)
        for k, g in enumerate(gs)
    ]


def standard_complex_structure(nprime: int) -> np.ndarray:
    """``[[0, I], [-I, 0]]`` on a factor of even rank ``nprime``."""
    if nprime % 2:
        raise ValueError("an invertible skew matrix needs even size")
    h = nprime // 2
    eye = np.eye(h)
    zero = np.zeros((h, h))
    return np.block([[zero, eye], [-eye, zero]])


@dataclass(frozen=True)
class StabilizationReport:
    stabilized: bool
    original_nprime: int
    nprime: int
    space: EpsSpace


def deform_family_symmetric(nprime: int, gs: Sequence, steps: int = 17,
                            tol: Tolerance = DEFAULT_TOL):
    """Skew graph maps in the symmetric (epsilon=+1) space.

    Odd ``nprime`` is first doubled: ``graph(g)`` becomes
    ``graph(g (+) 0)`` in the standard space of rank ``2 nprime``, which is
    the stabilization by the ``L`` factor of ``H(L)``. The k-th map is then
    moved to ``(k + 2) * Omega0``.
    """
    maps = [_as_map(g, 1).entries for g in gs]
    n = nprime
    if nprime % 2:
        n = 2 * nprime
        padded = []
        for g in maps:
            big = np.zeros((n, n))
            big[:nprime, :nprime] = g
            padded.append(big)
        maps = padded
    space, _, _ = standard_space(n, 1)
    omega = standard_complex_structure(n)
    paths = [_linear_graph_path(space, g, (k + 3) * omega, steps, tol)
             for k, g in enumerate(maps)]
    return StabilizationReport(n != nprime, nprime, n, space), paths


def compatible_complex_structure(space: EpsSpace) -> np.ndarray:
    """Orthogonal factor ``J`` of the polar decomposition of the form.

    ``J`` is orthogonal with ``J @ J = -I`` and preserves the symplectic form,
    so ``cos(t) I + sin(t) J`` maps lagrangians to lagrangians.
    """
    u, _, vt = np.linalg.svd(space.form.entries)
    return u @ vt


def rotate(space: EpsSpace, lag: Lagrangian, t: float, j=None,
           tol: Tolerance = DEFAULT_TOL) -> Lagrangian:
    j = compatible_complex_structure(space) if j is None else j
    r = np.cos(t) * np.eye(space.dim) + np.sin(t) * j
    return validate_lagrangian(space, r @ lag.basis, tol)


def make_transversal_pair(space: EpsSpace, l1: Lagrangian, l2: Lagrangian, steps: int = 17,
                          tol: Tolerance = DEFAULT_TOL) -> LagrangianPath:
    """Rotate ``l2`` until it is transversal to ``l1``.

    The stopping angle is the point of a fixed 64-point grid over one period
    that maximizes the smallest principal angle to ``l1``. An already
    transversal pair gets the constant path.
    """
    if space.epsilon != -1:
        raise EpsilonMismatch("make_transversal_pair works in symplectic spaces")
    _same_space(l1, l2)
    ts = np.linspace(0.0, 1.0, steps)
    if are_transversal(l1, l2, tol):
        return LagrangianPath(space, ts, tuple(l2 for _ in ts))
    j = compatible_complex_structure(space)
    grid = np.arange(ANGLE_GRID) * np.pi / ANGLE_GRID
    best, best_angle = 0.0, -1.0
    for t in grid:
        smallest = principal_angles(l1.subspace, rotate(space, l2, t, j, tol).subspace).min()
        if smallest > best_angle:
            best, best_angle = t, smallest
    lags = tuple(rotate(space, l2, s * best, j, tol) for s in ts)
    return LagrangianPath(space, ts, lags)
