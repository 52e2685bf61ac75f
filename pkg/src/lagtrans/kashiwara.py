"""The Leray-Kashiwara form of a lagrangian triple and its invariants.

For lagrangians ``L1, L2, L3`` of a symplectic space, the quadratic form

    q(x1, x2, x3) = phi(x1, x2) + phi(x2, x3) + phi(x3, x1)

on ``L1 + L2 + L3`` is nondegenerate exactly when the triple is pairwise
transversal. We work with its polarization ``Psi(x, x) = 2 q(x)``, written in
the frames of the three lagrangians.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EpsilonMismatch, NotInvertible, NotTransversalTriple
from .forms import (
    DEFAULT_TOL,
    BilinearFormMatrix,
    Signature,
    Tolerance,
    hyperbolic_form,
    is_nondegenerate,
    numerical_rank,
    signature,
)
from .phase_space import (
    EpsSpace,
    GraphMap,
    Lagrangian,
    _same_space,
    graph_lagrangian,
    standard_space,
)
from .subspace import Subspace, intersect, orthogonal_complement_wrt

PAIRS = ((0, 1), (0, 2), (1, 2))


@dataclass(frozen=True, eq=False)
class KashiwaraForm:
    form: BilinearFormMatrix
    block_dims: tuple

    @property
    def matrix(self) -> np.ndarray:
        return self.form.entries

    def block(self, i: int, j: int) -> np.ndarray:
        off = np.concatenate([[0], np.cumsum(self.block_dims)])
        return self.matrix[off[i]:off[i + 1], off[j]:off[j + 1]]


@dataclass(frozen=True)
class LKClass:
    rank_delta: int
    signature: int

    def __add__(self, other: LKClass) -> LKClass:
        return LKClass(self.rank_delta + other.rank_delta, self.signature + other.signature)

    def as_dict(self) -> dict:
        return {"rank_delta": self.rank_delta, "signature": self.signature}


@dataclass(frozen=True, eq=False)
class RadicalWitness:
    vector: np.ndarray
    pair_index: tuple
    carrier: np.ndarray


@dataclass(frozen=True, eq=False)
class CriterionResult:
    pairwise_transversal: bool
    form_nondegenerate: bool
    witness: RadicalWitness | None
    pair_transversal: dict

    @property
    def consistent(self) -> bool:
        return self.pairwise_transversal == self.form_nondegenerate


def _check_triple(l1, l2, l3):
    _same_space(l1, l2, l3)
    if l1.space.epsilon != -1:
        raise EpsilonMismatch("the Kashiwara form is defined for symplectic spaces")


def kashiwara_bilinear(space: EpsSpace, l1: Lagrangian, l2: Lagrangian,
                       l3: Lagrangian) -> KashiwaraForm:
    _check_triple(l1, l2, l3)
    m = space.form.entries
    f1, f2, f3 = l1.frame, l2.frame, l3.frame
    b12 = f1.T @ m @ f2
    b23 = f2.T @ m @ f3
    b31 = f3.T @ m @ f1
    z = [np.zeros((f.shape[1], f.shape[1])) for f in (f1, f2, f3)]
    psi = np.block([
        [z[0], b12, b31.T],
        [b12.T, z[1], b23],
        [b31, b23.T, z[2]],
    ])
    # exact symmetrization; the blocks above are already mutually transposed
    psi = (psi + psi.T) / 2
    return KashiwaraForm(BilinearFormMatrix(psi, 1), (f1.shape[1], f2.shape[1], f3.shape[1]))


def radical_witness(kform: KashiwaraForm, lags, pair, carrier) -> RadicalWitness:
    """Place ``carrier`` (a vector in ``L_i`` and ``L_j``) in slots i and j."""
    parts = []
    for k, lag in enumerate(lags):
        if k in pair:
            coords = np.linalg.lstsq(lag.frame, carrier, rcond=None)[0]
        else:
            coords = np.zeros(lag.frame.shape[1])
        parts.append(coords)
    return RadicalWitness(np.concatenate(parts), tuple(pair), np.asarray(carrier, dtype=float))


def transversality_criterion(space: EpsSpace, l1: Lagrangian, l2: Lagrangian, l3: Lagrangian,
                             tol: Tolerance = DEFAULT_TOL) -> CriterionResult:
    """Pairwise intersections and the rank of Psi, computed independently."""
    kform = kashiwara_bilinear(space, l1, l2, l3)
    lags = (l1, l2, l3)
    pair_ok = {}
    witness = None
    for i, j in PAIRS:
        meet = intersect(lags[i].subspace, lags[j].subspace, tol)
        pair_ok[(i, j)] = meet.dim == 0
        if meet.dim and witness is None:
            witness = radical_witness(kform, lags, (i, j), meet.basis[:, 0])
    return CriterionResult(
        pairwise_transversal=all(pair_ok.values()),
        form_nondegenerate=is_nondegenerate(kform.form, tol),
        witness=witness,
        pair_transversal=pair_ok,
    )


def kashiwara_signature(space, l1, l2, l3, tol: Tolerance = DEFAULT_TOL) -> Signature:
    return signature(kashiwara_bilinear(space, l1, l2, l3).form, tol)


def triple_index(space, l1, l2, l3, tol: Tolerance = DEFAULT_TOL) -> int:
    """Signature of Psi; near-zero eigenvalues (the radical) are not counted."""
    return kashiwara_signature(space, l1, l2, l3, tol).index


def lk_invariant(space, l1, l2, l3, tol: Tolerance = DEFAULT_TOL) -> LKClass:
    """``[Psi] - H(L1)`` as ``(rank(Psi) - 2n', signature(Psi))``."""
    crit = transversality_criterion(space, l1, l2, l3, tol)
    if not crit.pairwise_transversal:
        raise NotTransversalTriple("the LK invariant needs a pairwise transversal triple")
    sig = kashiwara_signature(space, l1, l2, l3, tol)
    return LKClass(sig.rank - 2 * space.nprime, sig.index)


@dataclass(frozen=True, eq=False)
class SplittingReport:
    """Residuals of ``F = H(L1) (+) E3`` for the triple ``(L, L*, graph g)``.

    Slots are ``L1 = L`` (first coordinates), ``L2 = L*``, ``L3 = graph(g)``
    with frame ``[I; g]``; ``E3`` is parametrized by ``u -> (u, g u, u)`` in
    slot coordinates.
    """

    slots: tuple
    psi: np.ndarray
    hyperbolic_residual: float
    complement_dim: int
    complement_residual: float
    restricted_form: np.ndarray
    restriction_residual: float
    rank: int
    signature: int

    @property
    def max_residual(self) -> float:
        return max(self.hyperbolic_residual, self.complement_residual, self.restriction_residual)


def verify_splitting(nprime: int, g, tol: Tolerance = DEFAULT_TOL) -> SplittingReport:
    if not isinstance(g, GraphMap):
        g = GraphMap(g, -1)
    if g.epsilon != -1:
        raise EpsilonMismatch("the splitting is stated for symmetric graph maps")
    gm = g.entries
    if numerical_rank(gm, tol) < nprime:
        raise NotInvertible("graph map must be invertible")
    space, lf, lsf = standard_space(nprime, -1)
    l3 = graph_lagrangian(space, g, tol)
    kform = kashiwara_bilinear(space, lf, lsf, l3)
    psi = kform.matrix
    n = nprime
    scale = max(1.0, np.linalg.norm(psi, 2))

    hyp = hyperbolic_form(n, 1).entries
    hyperbolic_residual = np.max(np.abs(psi[:2 * n, :2 * n] - hyp)) / scale

    eye3 = np.eye(3 * n)
    h_copy = Subspace(eye3[:, :2 * n])
    complement = orthogonal_complement_wrt(kform.form, h_copy, tol)
    e3 = np.vstack([np.eye(n), gm, np.eye(n)])
    e3_sub = Subspace(np.linalg.qr(e3)[0])
    if complement.dim == e3_sub.dim:
        q = complement.basis
        complement_residual = float(np.linalg.norm(e3_sub.basis - q @ (q.T @ e3_sub.basis), 2))
    else:
        complement_residual = float("inf")

    restricted = e3.T @ psi @ e3
    restriction_residual = np.max(np.abs(restricted + 2 * gm)) / max(1.0, np.max(np.abs(gm)))

    sig = signature(kform.form, tol)
    return SplittingReport(
        slots=("L", "L*", "graph(g)"),
        psi=psi,
        hyperbolic_residual=float(hyperbolic_residual),
        complement_dim=complement.dim,
        complement_residual=complement_residual,
        restricted_form=restricted,
        restriction_residual=float(restriction_residual),
        rank=sig.rank,
        signature=sig.index,
    )

