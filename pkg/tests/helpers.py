"""Random constructions shared by the property and acceptance tests."""
import numpy as np

from lagtrans.phase_space import graph_lagrangian, standard_space, transport, validate_lagrangian


def random_symmetric(rng, n, scale=1.0):
    a = rng.normal(scale=scale, size=(n, n))
    return (a + a.T) / 2


def random_skew(rng, n, scale=1.0):
    a = rng.normal(scale=scale, size=(n, n))
    return (a - a.T) / 2


def random_invertible_symmetric(rng, n, low=0.2, high=3.0):
    q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    lam = rng.uniform(low, high, size=n) * rng.choice([-1.0, 1.0], size=n)
    return (q * lam) @ q.T


def random_singular_symmetric(rng, n, nullity=1):
    q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    lam = rng.uniform(0.2, 3.0, size=n) * rng.choice([-1.0, 1.0], size=n)
    lam[:nullity] = 0.0
    return (q * lam) @ q.T


def random_symplectic(rng, n, epsilon=-1, scale=0.5):
    """Random automorphism of hyperbolic_form(n, epsilon) with moderate conditioning."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    shear = random_symmetric if epsilon == -1 else random_skew
    a = eye + rng.normal(scale=scale / np.sqrt(n), size=(n, n))
    p = np.block([[a, zero], [zero, np.linalg.inv(a).T]])
    lower = np.block([[eye, zero], [shear(rng, n, scale), eye]])
    upper = np.block([[eye, shear(rng, n, scale)], [zero, eye]])
    return upper @ p @ lower


def transported(rng, lags, epsilon=-1):
    space = lags[0].space
    p = random_symplectic(rng, space.nprime, epsilon)
    return [transport(p, lag, space) for lag in lags]


def graph_triple(n, g):
    space, lf, lsf = standard_space(n, -1)
    return space, [lf, lsf, graph_lagrangian(space, g)]


def random_triple(rng, n, kind):
    """Returns ``(space, [l1, l2, l3], intersecting_pair_or_None)``.

    Kinds: "graph" (L, L*, graph g), "three_graphs", "singular_graph",
    "shared_vector", "repeat".
    """
    space, lf, lsf = standard_space(n, -1)
    pair = None
    if kind == "graph":
        lags = [lf, lsf, graph_lagrangian(space, random_symmetric(rng, n))]
    elif kind == "three_graphs":
        g = [random_symmetric(rng, n, 2.0) for _ in range(3)]
        lags = [graph_lagrangian(space, x) for x in g]
    elif kind == "singular_graph":
        nullity = int(rng.integers(1, n + 1))
        lags = [lf, lsf, graph_lagrangian(space, random_singular_symmetric(rng, n, nullity))]
        pair = (0, 2)
    elif kind == "shared_vector":
        g1 = random_symmetric(rng, n, 2.0)
        g2 = g1 + random_singular_symmetric(rng, n)
        lags = [lsf, graph_lagrangian(space, g1), graph_lagrangian(space, g2)]
        pair = (1, 2)
    elif kind == "repeat":
        g = random_symmetric(rng, n)
        base = graph_lagrangian(space, g)
        lags = [base, lsf, validate_lagrangian(space, base.frame @ random_gl(rng, n))]
        pair = (0, 2)
    else:
        raise ValueError(kind)
    order = rng.permutation(3)
    lags = [lags[i] for i in order]
    if pair is not None:
        inv = {old: new for new, old in enumerate(order)}
        pair = tuple(sorted((inv[pair[0]], inv[pair[1]])))
    return space, transported(rng, lags), pair


def random_gl(rng, n):
    while True:
        a = rng.normal(size=(n, n))
        if abs(np.linalg.det(a)) > 0.1:
            return a
