"""Acceptance criteria, one check per criterion.

Each check prints a single PASS/FAIL line. Run with ``pytest -s`` or as a
script: ``python3 tests/test_acceptance.py``.
"""
import contextlib
import io
import sys
import time
from itertools import combinations
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import (  # noqa: E402
    random_invertible_symmetric,
    random_skew,
    random_symmetric,
    random_symplectic,
    random_triple,
)
from lagtrans.cli import EXIT_CONTRACT, main  # noqa: E402
from lagtrans.deformation import (  # noqa: E402
    deform_family_symmetric,
    deform_family_to_mutually_transversal,
    deform_third_to_transversal,
)
from lagtrans.errors import SamplingTooCoarse  # noqa: E402
from lagtrans.forms import BilinearFormMatrix, signature  # noqa: E402
from lagtrans.kashiwara import (  # noqa: E402
    kashiwara_bilinear,
    lk_invariant,
    transversality_criterion,
    triple_index,
    verify_splitting,
)
from lagtrans.loops import (  # noqa: E402
    concatenate,
    loop_from_bases,
    loop_maslov_index,
    refine,
    reverse,
)
from lagtrans.phase_space import (  # noqa: E402
    are_transversal,
    darboux_pair_normalization,
    direct_sum_lagrangians,
    direct_sum_spaces,
    extract_graph_map,
    graph_lagrangian,
    standard_space,
    transport,
)
from lagtrans.problem import parse_problem  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"
SEED = 1729


def symmetric_with_signs(rng, signs):
    """Invertible symmetric matrix with prescribed eigenvalue signs."""
    n = len(signs)
    q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    lam = rng.uniform(0.2, 3.0, size=n) * np.asarray(signs, dtype=float)
    return (q * lam) @ q.T


def random_signs(rng, n):
    return rng.choice([-1, 1], size=n)


def ac1_transversality_equivalence(rng):
    start = time.perf_counter()
    kinds = ["graph", "three_graphs", "singular_graph", "shared_vector", "repeat"]
    per_n = 1000
    disagree = wrong_truth = total = 0
    for n in (1, 2, 3, 4):
        for k in range(per_n):
            kind = kinds[k % len(kinds)]
            space, lags, pair = random_triple(rng, n, kind)
            crit = transversality_criterion(space, *lags)
            total += 1
            disagree += not crit.consistent
            wrong_truth += crit.pairwise_transversal != (pair is None)
    elapsed = time.perf_counter() - start
    ok = disagree == 0 and wrong_truth == 0 and elapsed < 30.0
    return ok, (f"{total} triples, {disagree} disagreements, {wrong_truth} differ from "
                f"construction, {elapsed:.1f} s")


def ac2_splitting(rng):
    worst = 0.0
    bad = 0
    for n in (1, 2, 3):
        for _ in range(500):
            signs = random_signs(rng, n)
            g = symmetric_with_signs(rng, signs)
            rep = verify_splitting(n, g)
            worst = max(worst, rep.max_residual)
            bad += rep.rank != 3 * n or rep.signature != -int(signs.sum())
            bad += rep.max_residual >= 1e-9
    return bad == 0, f"1500 maps, max residual {worst:.2e}, {bad} failures"


def ac3_third_path(rng):
    worst = 0.0
    bad = 0
    for k in range(200):
        n = int(rng.integers(1, 5))
        g = random_symmetric(rng, n, 2.0)
        if k % 4 == 0:
            g = np.zeros((n, n))
        path = deform_third_to_transversal(n, g)
        _, lf, lsf = standard_space(n, -1)
        worst = max(worst, max(path.residuals))
        bad += max(path.residuals) >= 1e-10
        bad += not (are_transversal(path.end, lf) and are_transversal(path.end, lsf))
    return bad == 0, f"200 paths, max isotropy residual {worst:.2e}, {bad} failures"


def ac4_family(rng):
    bad = 0
    for m in range(3, 9):
        for _ in range(50):
            n = int(rng.integers(1, 4))
            gs = [random_symmetric(rng, n, 2.0) for _ in range(m)]
            gs[0] = np.zeros((n, n))
            gs[1] = np.zeros((n, n))
            ends = [p.end for p in deform_family_to_mutually_transversal(n, gs, steps=33)]
            bad += not all(are_transversal(a, b) for a, b in combinations(ends, 2))
    return bad == 0, f"300 families, m = 3..8, {bad} with a non-transversal pair"


def ac5_skew_family(rng):
    bad = stabilized = 0
    for n in (1, 2, 3):
        for _ in range(50):
            m = int(rng.integers(2, 6))
            gs = [random_skew(rng, n, 2.0) for _ in range(m)]
            rep, paths = deform_family_symmetric(n, gs, steps=33)
            stabilized += rep.stabilized
            ends = [p.end for p in paths]
            bad += rep.nprime % 2 == 1
            bad += not all(are_transversal(a, b) for a, b in combinations(ends, 2))
    return bad == 0, f"150 families, {stabilized} stabilized, {bad} failures"


def ac6_witness(rng):
    worst = 0.0
    count = missing = 0
    for n in (1, 2, 3, 4):
        for kind in ("singular_graph", "shared_vector", "repeat"):
            for _ in range(100):
                space, lags, _ = random_triple(rng, n, kind)
                crit = transversality_criterion(space, *lags)
                if crit.witness is None:
                    missing += 1
                    continue
                psi = kashiwara_bilinear(space, *lags).matrix
                w = crit.witness.vector
                worst = max(worst, np.linalg.norm(psi @ w) / np.linalg.norm(w))
                count += 1
    ok = missing == 0 and worst < 1e-9
    return ok, f"{count} witnesses, max |Psi w|/|w| {worst:.2e}, {missing} missing"


def ac7_lk(rng):
    bad = 0
    for _ in range(200):
        n = int(rng.integers(1, 4))
        signs = random_signs(rng, n)
        space, lf, lsf = standard_space(n, -1)
        p0 = random_symplectic(rng, n)
        lags = [transport(p0, l) for l in
                (lf, lsf, graph_lagrangian(space, symmetric_with_signs(rng, signs)))]
        p = darboux_pair_normalization(space, lags[0], lags[1])
        g2 = extract_graph_map(space, transport(np.linalg.inv(p), lags[2], space))
        expected = (n, -int(signs.sum()))
        got = lk_invariant(space, *lags)
        bad += (got.rank_delta, got.signature) != expected
        # the normalized map is congruent to the one we built
        bad += signature(BilinearFormMatrix(g2.entries, 1)).index != int(signs.sum())

    for _ in range(100):
        parts = []
        for n in rng.integers(1, 3, size=2):
            n = int(n)
            space, lf, lsf = standard_space(n, -1)
            parts.append((space, [lf, lsf, graph_lagrangian(space, random_invertible_symmetric(rng, n))]))
        (s1, a), (s2, b) = parts
        total = direct_sum_spaces(s1, s2)
        summed = [direct_sum_lagrangians(total, x, y) for x, y in zip(a, b)]
        bad += lk_invariant(total, *summed) != lk_invariant(s1, *a) + lk_invariant(s2, *b)

    for _ in range(500):
        n = int(rng.integers(1, 4))
        space, lags, _ = random_triple(rng, n, "three_graphs")
        before = lk_invariant(space, *lags)
        q = random_symplectic(rng, n)
        after = lk_invariant(space, *[transport(q, l) for l in lags])
        bad += before != after
    return bad == 0, f"200 normalized, 100 direct sums, 500 transported triples, {bad} failures"


def _diagonal_loop(turns, samples):
    n = len(turns)
    space, _, _ = standard_space(n, -1)
    thetas = np.linspace(0.0, 1.0, samples)
    bases = []
    for t in thetas:
        b = np.zeros((2 * n, n))
        for j, k in enumerate(turns):
            angle = 0.0 if t == 1.0 else np.pi * k * t
            b[j, j] = np.cos(angle)
            b[n + j, j] = np.sin(angle)
        bases.append(b)
    return loop_from_bases(space, bases, thetas)


def ac8_loops(rng):
    failures = []
    half = parse_problem(FIXTURES / "problems" / "half_turn.json").loop("half_turn")
    if loop_maslov_index(half) != 1:
        failures.append("half-turn")
    acc = half
    for k in range(1, 6):
        if k > 1:
            acc = concatenate(acc, half)
        if loop_maslov_index(acc) != k:
            failures.append(f"concat {k}")
        if loop_maslov_index(reverse(acc)) != -k:
            failures.append(f"reverse {k}")
    for factor in (2, 4, 8):
        if loop_maslov_index(refine(half, factor)) != 1:
            failures.append(f"refine {factor}")
    # coarse sampling sweep: the index is either right or refused
    refused = misindexed = 0
    for _ in range(300):
        n = int(rng.integers(1, 4))
        turns = [int(t) for t in rng.integers(-2, 3, size=n)]
        samples = int(rng.integers(3, 40))
        try:
            loop = _diagonal_loop(turns, samples)
            index = loop_maslov_index(loop)
        except SamplingTooCoarse:
            refused += 1
            continue
        misindexed += index != sum(turns)
    if misindexed:
        failures.append(f"{misindexed} mis-indexed")
    if refused == 0:
        failures.append("no coarse loop refused")
    return not failures, (f"fixture/concat/reverse/refine checks, {refused} of 300 coarse loops "
                          f"refused, failures: {failures or 'none'}")


def ac9_cocycle(rng):
    checked = bad = 0
    while checked < 300:
        n = int(rng.integers(1, 4))
        space, _, _ = standard_space(n, -1)
        q = random_symplectic(rng, n)
        ls = [transport(q, graph_lagrangian(space, random_symmetric(rng, n, 2.0)))
              for _ in range(4)]
        if not all(are_transversal(a, b) for a, b in combinations(ls, 2)):
            continue
        t = lambda i, j, k: triple_index(space, ls[i], ls[j], ls[k])  # noqa: E731
        bad += t(1, 2, 3) - t(0, 2, 3) + t(0, 1, 3) - t(0, 1, 2) != 0
        checked += 1
    return bad == 0, f"{checked} quadruples, {bad} nonzero alternating sums"


def ac10_cli(_rng):
    sys.path.insert(0, str(FIXTURES))
    try:
        import regenerate
    finally:
        sys.path.pop(0)
    mismatched = []
    for entry in regenerate.load_manifest():
        code, text = regenerate.render(entry)
        expected = (FIXTURES / "reports" / f"{entry['name']}.json").read_text(encoding="utf-8")
        if code != entry["exit"] or text != expected:
            mismatched.append(entry["name"])
    contract = 0
    runs = 0
    for path in sorted((FIXTURES / "problems").glob("*.json")):
        for command in ("validate", "transversal", "kashiwara", "deform", "loop-index", "lk"):
            with contextlib.redirect_stdout(io.StringIO()), \
                    contextlib.redirect_stderr(io.StringIO()):
                code = main([command, "--input", str(path)])
            runs += 1
            contract += code == EXIT_CONTRACT
    ok = not mismatched and contract == 0
    return ok, (f"{len(regenerate.load_manifest())} committed reports, mismatched: "
                f"{mismatched or 'none'}; {runs} corpus runs, {contract} with exit code 2")


CRITERIA = [
    ("AC1", "pairwise transversality agrees with nondegeneracy", ac1_transversality_equivalence),
    ("AC2", "splitting identities", ac2_splitting),
    ("AC3", "third-lagrangian deformation", ac3_third_path),
    ("AC4", "mutually transversal family", ac4_family),
    ("AC5", "skew family with stabilization", ac5_skew_family),
    ("AC6", "radical witness", ac6_witness),
    ("AC7", "LK invariant", ac7_lk),
    ("AC8", "loop index", ac8_loops),
    ("AC9", "cocycle identity", ac9_cocycle),
    ("AC10", "CLI determinism", ac10_cli),
]


def evaluate(label, title, check):
    rng = np.random.default_rng([SEED, int(label[2:])])
    ok, detail = check(rng)
    line = f"{label} {'PASS' if ok else 'FAIL'} {title}: {detail}"
    return ok, line


@pytest.mark.parametrize("label, title, check", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(label, title, check, capsys):
    ok, line = evaluate(label, title, check)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
