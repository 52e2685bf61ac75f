"""epsilon-hermitian spaces and their lagrangian subspaces.

The standard space of rank ``n'`` has coordinates ``(a, alpha)`` and the
pairing ``phi((a, alpha), (b, beta)) = <a, beta> + epsilon * <b, alpha>``,
i.e. the Gram matrix ``hyperbolic_form(n', epsilon)``. Its two coordinate
halves are the factor lagrangians ``L`` and ``L*``; a lagrangian transversal
to ``L*`` is the graph ``{(u, g u)}`` of a map with ``g.T == -epsilon * g``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    EpsilonMismatch,
    Degenerate,
    NonStandardSpace,
    NotIsotropic,
    NotTransversal,
    NotTransversalToLstar,
    SpaceMismatch,
    SymmetryViolation,
    WrongDimension,
)
from .forms import (
    DEFAULT_TOL,
    BilinearFormMatrix,
    Tolerance,
    as_form,
    direct_sum,
    hyperbolic_form,
    is_nondegenerate,
)
from .subspace import Subspace, canonicalize, intersect


@dataclass(frozen=True, eq=False)
class EpsSpace:
    form: BilinearFormMatrix

    def __post_init__(self):
        form = as_form(self.form)
        if form.n % 2:
            raise DimensionMismatch(f"space dimension must be even, got {form.n}")
        if not is_nondegenerate(form):
            raise Degenerate("the form of an EpsSpace must be nondegenerate")
        object.__setattr__(self, "form", form)

    @property
    def dim(self) -> int:
        return self.form.n

    @property
    def nprime(self) -> int:
        return self.form.n // 2

    @property
    def epsilon(self) -> int:
        return self.form.epsilon

    @property
    def is_standard(self) -> bool:
        return np.array_equal(self.form.entries, hyperbolic_form(self.nprime, self.epsilon).entries)

    def same_as(self, other: EpsSpace) -> bool:
        return self is other or (
            self.epsilon == other.epsilon
            and self.dim == other.dim
            and np.array_equal(self.form.entries, other.form.entries)
        )

    def __repr__(self):
        return f"EpsSpace(dim={self.dim}, epsilon={self.epsilon:+d})"


@dataclass(frozen=True, eq=False)
class Lagrangian:
    """A validated lagrangian.

    ``subspace`` holds the orthonormal basis used for geometry. ``frame`` is
    the spanning basis the lagrangian was built from (the user's columns, or
    ``[I; g]`` for a graph); coordinate-dependent quantities such as the
    Kashiwara matrix are expressed in it.
    """

    space: EpsSpace
    subspace: Subspace
    frame: np.ndarray
    residual: float

    @property
    def basis(self) -> np.ndarray:
        return self.subspace.basis

    @property
    def dim(self) -> int:
        return self.subspace.dim

    def __repr__(self):
        return f"Lagrangian(dim={self.dim}, residual={self.residual:.2e})"


@dataclass(frozen=True, eq=False)
class GraphMap:
    entries: np.ndarray
    epsilon: int

    def __post_init__(self):
        g = np.array(self.entries, dtype=float, copy=True)
        if g.ndim == 0:
            g = g.reshape(1, 1)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise DimensionMismatch(f"graph map must be square, got shape {g.shape}")
        if self.epsilon not in (1, -1):
            raise ValueError(f"epsilon must be +1 or -1, got {self.epsilon!r}")
        defect = np.max(np.abs(g.T + self.epsilon * g)) if g.size else 0.0
        scale = np.max(np.abs(g)) if g.size else 0.0
        if defect > DEFAULT_TOL.threshold(scale):
            kind = "symmetric" if self.epsilon == -1 else "skew-symmetric"
            raise SymmetryViolation(f"graph map must be {kind} (defect {defect:.3e})")
        g = (g - self.epsilon * g.T) / 2
        g.setflags(write=False)
        object.__setattr__(self, "entries", g)

    @property
    def nprime(self) -> int:
        return self.entries.shape[0]


def symmetric_map(g) -> GraphMap:
    return GraphMap(g, -1)


def skew_map(g) -> GraphMap:
    return GraphMap(g, 1)


def standard_space(nprime: int, epsilon: int):
    """Return ``(space, L_factor, Lstar_factor)`` for the model space ``H(R^n')``."""
    if nprime < 1:
        raise ValueError(f"nprime must be at least 1, got {nprime}")
    space = EpsSpace(hyperbolic_form(nprime, epsilon))
    eye = np.eye(2 * nprime)
    return (
        space,
        validate_lagrangian(space, eye[:, :nprime]),
        validate_lagrangian(space, eye[:, nprime:]),
    )


def isotropy_residual(space: EpsSpace, basis) -> float:
    basis = np.asarray(basis, dtype=float)
    if basis.size == 0:
        return 0.0
    return float(np.max(np.abs(basis.T @ space.form.entries @ basis)))


def validate_lagrangian(space: EpsSpace, candidate, tol: Tolerance = DEFAULT_TOL) -> Lagrangian:
    """Check that ``candidate`` (a Subspace or spanning matrix) is lagrangian.

    The isotropy residual is ``max|Q.T M Q|`` over an orthonormal basis ``Q``
    and is compared against ``tol.threshold(||M||_2)``.
    """
    if isinstance(candidate, Subspace):
        sub = candidate
        frame = candidate.basis
    else:
        frame = np.asarray(candidate, dtype=float)
        if frame.ndim == 1:
            frame = frame[:, None]
        sub = canonicalize(frame, tol)
    if sub.ambient_dim != space.dim:
        raise WrongDimension(
            f"candidate lives in dimension {sub.ambient_dim}, space has dimension {space.dim}"
        )
    if sub.dim != space.nprime or frame.shape[1] != space.nprime:
        raise WrongDimension(
            f"a lagrangian has dimension {space.nprime}, candidate has rank {sub.dim}"
            f" with {frame.shape[1]} columns"
        )
    residual = isotropy_residual(space, sub.basis)
    if residual > tol.threshold(np.linalg.norm(space.form.entries, 2)):
        raise NotIsotropic(f"candidate is not isotropic (residual {residual:.3e})", residual)
    frame = frame.copy()
    frame.setflags(write=False)
    return Lagrangian(space, sub, frame, residual)


def _same_space(*lags: Lagrangian):
    first = lags[0].space
    for other in lags[1:]:
        if not first.same_as(other.space):
            raise SpaceMismatch("lagrangians live in different spaces")


def are_transversal(l1: Lagrangian, l2: Lagrangian, tol: Tolerance = DEFAULT_TOL) -> bool:
    _same_space(l1, l2)
    return intersect(l1.subspace, l2.subspace, tol).dim == 0


def _require_standard(space: EpsSpace):
    if not space.is_standard:
        raise NonStandardSpace("operation requires the standard hyperbolic space")


def graph_lagrangian(space: EpsSpace, g, tol: Tolerance = DEFAULT_TOL) -> Lagrangian:
    """The graph ``{(u, g u)}`` as a lagrangian with frame ``[I; g]``."""
    _require_standard(space)
    if not isinstance(g, GraphMap):
        g = GraphMap(g, space.epsilon)
    if g.epsilon != space.epsilon:
        raise EpsilonMismatch(f"graph map for epsilon {g.epsilon:+d} in a {space.epsilon:+d} space")
    if g.nprime != space.nprime:
        raise DimensionMismatch(f"graph map is {g.nprime}x{g.nprime}, space has n'={space.nprime}")
    return validate_lagrangian(space, np.vstack([np.eye(g.nprime), g.entries]), tol)


def extract_graph_map(space: EpsSpace, l3: Lagrangian, tol: Tolerance = DEFAULT_TOL) -> GraphMap:
    _require_standard(space)
    n = space.nprime
    lstar = Subspace(np.eye(2 * n)[:, n:])
    if intersect(l3.subspace, lstar, tol).dim:
        raise NotTransversalToLstar("lagrangian meets the L* factor; it is not a graph over L")
    x, y = l3.basis[:n], l3.basis[n:]
    g = np.linalg.lstsq(x.T, y.T, rcond=None)[0].T
    return GraphMap(g, space.epsilon)


def transport(matrix, lag: Lagrangian, target: EpsSpace | None = None,
              tol: Tolerance = DEFAULT_TOL) -> Lagrangian:
    """Image of ``lag`` under a linear isomorphism, validated in ``target``."""
    target = lag.space if target is None else target
    return validate_lagrangian(target, np.asarray(matrix, dtype=float) @ lag.frame, tol)


def darboux_pair_normalization(space: EpsSpace, l1: Lagrangian, l2: Lagrangian,
                               tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Change of basis ``P`` with ``P.T M P = hyperbolic_form(n', epsilon)``.

    The first ``n'`` columns of ``P`` span ``l1`` and the last ``n'`` span
    ``l2``: ``P`` carries the ``L`` factor onto ``l1`` and ``L*`` onto ``l2``.
    The ``l2`` block is orthonormal; the ``l1`` block is its dual basis under
    the pairing.
    """
    _same_space(l1, l2)
    if not are_transversal(l1, l2, tol):
        raise NotTransversal("darboux normalization needs a transversal pair")
    m = space.form.entries
    u0, v = l1.basis, l2.basis
    pairing = u0.T @ m @ v
    u = u0 @ np.linalg.inv(pairing).T
    return np.hstack([u, v])


def direct_sum_spaces(s1: EpsSpace, s2: EpsSpace) -> EpsSpace:
    return EpsSpace(direct_sum(s1.form, s2.form))


def direct_sum_lagrangians(space: EpsSpace, a: Lagrangian, b: Lagrangian,
                           tol: Tolerance = DEFAULT_TOL) -> Lagrangian:
    """``a + b`` inside ``space``, which must be ``a.space (+) b.space``."""
    fa, fb = a.frame, b.frame
    frame = np.zeros((fa.shape[0] + fb.shape[0], fa.shape[1] + fb.shape[1]))
    frame[: fa.shape[0], : fa.shape[1]] = fa
    frame[fa.shape[0]:, fa.shape[1]:] = fb
    return validate_lagrangian(space, frame, tol)


@dataclass(frozen=True)
class Stabilization:
    space: EpsSpace
    lagrangians: tuple
    added_rank: int
    summands: tuple = field(default=())


def stabilize(space: EpsSpace, lagrangians: Sequence[Lagrangian], l,
              summands: Sequence[str] | None = None,
              tol: Tolerance = DEFAULT_TOL) -> Stabilization:
    """Pass to ``E (+) H(R^k)``, adding a factor of ``H(R^k)`` to each lagrangian.

    ``l`` fixes ``k``: a Lagrangian/Subspace (its dimension) or an int.
    ``summands[i]`` is ``"L"`` or ``"L*"``, the factor appended to the i-th
    lagrangian; all ``"L"`` by default.
    """
    k = l if isinstance(l, (int, np.integer)) else l.dim
    lagrangians = list(lagrangians)
    if summands is None:
        summands = ["L"] * len(lagrangians)
    if len(summands) != len(lagrangians):
        raise ValueError("one summand label per lagrangian is required")
    hyp, lf, lsf = standard_space(k, space.epsilon)
    big = direct_sum_spaces(space, hyp)
    pick = {"L": lf, "L*": lsf}
    out = []
    for lag, label in zip(lagrangians, summands):
        if label not in pick:
            raise ValueError(f"summand must be 'L' or 'L*', got {label!r}")
        _same_space(lag, lagrangians[0])
        out.append(direct_sum_lagrangians(big, lag, pick[label], tol))
    return Stabilization(big, tuple(out), int(k), tuple(summands))
