"""Closed loops of lagrangians and their Maslov index.

A lagrangian of the standard symplectic space with orthonormal basis
``[X; Y]`` gives the unitary matrix ``W = X + iY``; ``det(W)**2`` does not
depend on the basis. The Maslov index of a loop is the winding number of
``det(W)**2``, oriented so that the line ``span(cos(pi t) e1 + sin(pi t) e2)``,
``t in [0, 1]``, has index +1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .deformation import CONTINUITY_BOUND, compatible_complex_structure, max_principal_angle
from .errors import (
    ContinuityViolation,
    EndpointMismatch,
    EpsilonMismatch,
    NonStandardSpace,
    NotClosed,
    SamplingTooCoarse,
    SpaceMismatch,
)
from .forms import DEFAULT_TOL, Tolerance
from .phase_space import EpsSpace, Lagrangian, validate_lagrangian
from .subspace import subspace_equal

MAX_PHASE_STEP = np.pi / 2


@dataclass(frozen=True, eq=False)
class LagrangianLoop:
    space: EpsSpace
    thetas: np.ndarray
    lagrangians: tuple
    tol: Tolerance = DEFAULT_TOL

    def __post_init__(self):
        if self.space.epsilon != -1:
            raise EpsilonMismatch("loops live in symplectic spaces")
        thetas = np.array(self.thetas, dtype=float)
        lags = tuple(self.lagrangians)
        if len(thetas) != len(lags) or len(lags) < 2:
            raise ValueError("a loop needs at least two samples, one lagrangian per parameter")
        if np.any(np.diff(thetas) <= 0) or thetas[0] < 0 or thetas[-1] > 1:
            raise ValueError("loop parameters must increase strictly inside [0, 1]")
        for lag in lags:
            if not self.space.same_as(lag.space):
                raise SpaceMismatch("loop sample lives in a different space")
        if not subspace_equal(lags[0].subspace, lags[-1].subspace, self.tol):
            raise NotClosed("the last sample of a loop must equal the first")
        for k in range(len(lags) - 1):
            step = max_principal_angle(lags[k], lags[k + 1])
            if step >= CONTINUITY_BOUND:
                raise ContinuityViolation(
                    f"samples {k} and {k + 1} are {step:.3f} rad apart; refine the loop"
                )
        thetas.setflags(write=False)
        object.__setattr__(self, "thetas", thetas)
        object.__setattr__(self, "lagrangians", lags)

    def __len__(self):
        return len(self.lagrangians)


def loop_from_bases(space: EpsSpace, bases: Sequence, thetas=None,
                    tol: Tolerance = DEFAULT_TOL) -> LagrangianLoop:
    if thetas is None:
        thetas = np.linspace(0.0, 1.0, len(bases))
    lags = tuple(validate_lagrangian(space, b, tol) for b in bases)
    return LagrangianLoop(space, thetas, lags, tol)


def phase_rotation(space: EpsSpace, t: float) -> np.ndarray:
    """Symplectic rotation multiplying ``det(W)**2`` by ``exp(2i n' t)``."""
    j = compatible_complex_structure(space)
    return np.cos(t) * np.eye(space.dim) - np.sin(t) * j


def rotation_loop(space: EpsSpace, start: Lagrangian, turns: int = 1, samples: int = 9,
                  tol: Tolerance = DEFAULT_TOL) -> LagrangianLoop:
    """``start`` rotated through ``turns`` half-turns; index ``turns * n'``."""
    thetas = np.linspace(0.0, 1.0, samples)
    bases = [phase_rotation(space, np.pi * turns * th) @ start.basis for th in thetas]
    bases[-1] = start.basis
    return loop_from_bases(space, bases, thetas, tol)


def det_squared(lag: Lagrangian) -> complex:
    n = lag.space.nprime
    w = lag.basis[:n] + 1j * lag.basis[n:]
    d = np.linalg.det(w)
    return d * d


def phase_increments(loop: LagrangianLoop) -> np.ndarray:
    if not loop.space.is_standard:
        raise NonStandardSpace("the Maslov index is computed in standard coordinates")
    d = np.array([det_squared(lag) for lag in loop.lagrangians])
    return np.angle(d[1:] * np.conj(d[:-1]))


def loop_maslov_index(loop: LagrangianLoop, tol: Tolerance = DEFAULT_TOL) -> int:
    inc = phase_increments(loop)
    worst = np.max(np.abs(inc)) if inc.size else 0.0
    if worst >= MAX_PHASE_STEP:
        raise SamplingTooCoarse(
            f"phase step {worst:.3f} rad reaches pi/2; refine the loop"
        )
    winding = inc.sum() / (2 * np.pi)
    index = int(np.rint(winding))
    if abs(winding - index) > 0.25:
        raise NotClosed(f"accumulated phase {winding:.3f} turns is not an integer")
    return index


def _rescale(thetas, lo, hi):
    t = np.asarray(thetas, dtype=float)
    return lo + (hi - lo) * (t - t[0]) / (t[-1] - t[0])


def concatenate(a: LagrangianLoop, b: LagrangianLoop) -> LagrangianLoop:
    if not a.space.same_as(b.space):
        raise SpaceMismatch("cannot concatenate loops in different spaces")
    if not subspace_equal(a.lagrangians[-1].subspace, b.lagrangians[0].subspace, a.tol):
        raise EndpointMismatch("the second loop must start where the first ends")
    thetas = np.concatenate([_rescale(a.thetas, 0.0, 0.5), _rescale(b.thetas, 0.5, 1.0)[1:]])
    return LagrangianLoop(a.space, thetas, a.lagrangians + b.lagrangians[1:], a.tol)


def reverse(loop: LagrangianLoop) -> LagrangianLoop:
    thetas = (loop.thetas[0] + loop.thetas[-1]) - loop.thetas[::-1]
    return LagrangianLoop(loop.space, thetas, loop.lagrangians[::-1], loop.tol)


def shift_start(loop: LagrangianLoop, k: int) -> LagrangianLoop:
    """Same loop started at sample ``k``."""
    body = loop.lagrangians[:-1]
    k %= len(body)
    rolled = body[k:] + body[:k]
    return LagrangianLoop(loop.space, loop.thetas, rolled + rolled[:1], loop.tol)


def grassmann_geodesic(a, b, s: float) -> np.ndarray:
    """Point at fraction ``s`` of the geodesic from span(a) to span(b).

    ``a`` and ``b`` are orthonormal bases of equal size whose principal angles
    are all below pi/2.
    """
    u, c, vt = np.linalg.svd(a.T @ b)
    y = a @ u
    t = b @ vt.T - y * c
    sines = np.linalg.norm(t, axis=0)
    sigma = np.arctan2(sines, c)
    # sin(s*sigma) / sin(sigma), finite as sigma -> 0
    ratio = s * np.sinc(s * sigma / np.pi) / np.sinc(sigma / np.pi)
    return y * np.cos(s * sigma) + t * ratio


def refine(loop: LagrangianLoop, factor: int) -> LagrangianLoop:
    """Insert ``factor - 1`` geodesic samples between consecutive samples."""
    if factor < 2:
        raise ValueError(f"refinement factor must be at least 2, got {factor}")
    thetas = [loop.thetas[0]]
    lags = [loop.lagrangians[0]]
    for k in range(len(loop) - 1):
        a, b = loop.lagrangians[k], loop.lagrangians[k + 1]
        t0, t1 = loop.thetas[k], loop.thetas[k + 1]
        for j in range(1, factor):
            s = j / factor
            point = grassmann_geodesic(a.basis, b.basis, s)
            lags.append(validate_lagrangian(loop.space, point, loop.tol))
            thetas.append(t0 + s * (t1 - t0))
        thetas.append(t1)
        lags.append(b)
    return LagrangianLoop(loop.space, np.array(thetas), tuple(lags), loop.tol)
