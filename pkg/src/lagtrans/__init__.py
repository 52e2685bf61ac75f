"""Lagrangian subspaces, transversality deformations, Kashiwara forms and Maslov loop indices."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .forms import (
    DEFAULT_TOL,
    BilinearFormMatrix,
    Signature,
    Tolerance,
    direct_sum,
    hyperbolic_form,
    is_nondegenerate,
    signature,
)
from .subspace import (
    Subspace,
    canonicalize,
    intersect,
    orthogonal_complement_wrt,
    principal_angles,
    subspace_equal,
    subspace_sum,
)
from .phase_space import (
    EpsSpace,
    GraphMap,
    Lagrangian,
    are_transversal,
    darboux_pair_normalization,
    extract_graph_map,
    graph_lagrangian,
    stabilize,
    standard_space,
    transport,
    validate_lagrangian,
)
from .deformation import (
    LagrangianPath,
    deform_family_symmetric,
    deform_family_to_mutually_transversal,
    deform_third_to_transversal,
    make_transversal_pair,
)
from .kashiwara import (
    KashiwaraForm,
    LKClass,
    kashiwara_bilinear,
    lk_invariant,
    transversality_criterion,
    triple_index,
    verify_splitting,
)
from .loops import LagrangianLoop, concatenate, loop_maslov_index, refine
