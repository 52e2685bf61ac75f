"""Command-line front end.

    lagtrans COMMAND --input PROBLEM.json [--output REPORT.json] [options]

Commands: validate, transversal, kashiwara, deform, loop-index, lk.
Exit codes: 0 success, 1 invalid input or failed precondition, 2 internal
contract violation (the two transversality criteria disagree).
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations

import numpy as np

from . import __version__
from .deformation import deform_family_symmetric, deform_third_to_transversal, make_transversal_pair
from .errors import LagrangianError
from .forms import hyperbolic_form, signature
from .kashiwara import kashiwara_bilinear, lk_invariant, transversality_criterion
from .loops import loop_maslov_index, phase_increments
from .phase_space import (
    EpsSpace,
    are_transversal,
    darboux_pair_normalization,
    direct_sum_spaces,
    extract_graph_map,
    standard_space,
    transport,
)
from .problem import (
    SCHEMA_VERSION,
    ProblemError,
    SchemaError,
    UnknownName,
    ValidationError,
    dumps_report,
    parse_problem,
    parse_tol_flag,
)
from .subspace import intersect, principal_angles

COMMANDS = ("validate", "transversal", "kashiwara", "deform", "loop-index", "lk")
EXIT_OK, EXIT_INVALID, EXIT_CONTRACT = 0, 1, 2


class ContractViolation(Exception):
    """The library broke one of its own guarantees."""


def _names(text: str, count: int, flag: str) -> tuple:
    names = tuple(part.strip() for part in text.split(","))
    if len(names) != count or not all(names):
        raise SchemaError(flag, f"expected {count} comma-separated names, got {text!r}")
    return names


def _pair_key(a, b) -> str:
    return f"{a},{b}"


def _validate(problem, _target, _opts) -> dict:
    return {
        "epsilon": problem.epsilon,
        "dimension": problem.dimension,
        "standard_form": problem.space.is_standard,
        "lagrangians": {name: {"residual": lag.residual}
                        for name, lag in problem.lagrangians.items()},
        "loops": {name: {"samples": len(loop)} for name, loop in problem.loops.items()},
    }


def _transversal(problem, pair, _opts) -> dict:
    a, b = (problem.lagrangian(n) for n in pair)
    tol = problem.tolerance
    return {
        "pair": list(pair),
        "transversal": are_transversal(a, b, tol),
        "intersection_dim": intersect(a.subspace, b.subspace, tol).dim,
        "min_principal_angle": float(principal_angles(a.subspace, b.subspace).min()),
    }


def _check_symplectic(problem, command):
    if problem.epsilon != -1:
        raise ValidationError("epsilon", "EpsilonMismatch",
                              f"{command} needs a symplectic (epsilon=-1) problem")


def _kashiwara(problem, triple, _opts) -> dict:
    _check_symplectic(problem, "kashiwara")
    lags = [problem.lagrangian(n) for n in triple]
    tol = problem.tolerance
    kform = kashiwara_bilinear(problem.space, *lags)
    crit = transversality_criterion(problem.space, *lags, tol=tol)
    if not crit.consistent:
        raise ContractViolation(
            f"triple {triple}: pairwise transversal={crit.pairwise_transversal} but "
            f"form nondegenerate={crit.form_nondegenerate}"
        )
    sig = signature(kform.form, tol)
    witness = None
    if crit.witness is not None:
        w = crit.witness
        witness = {
            "pair": [triple[i] for i in w.pair_index],
            "vector": w.vector,
            "residual": float(np.linalg.norm(kform.matrix @ w.vector) / np.linalg.norm(w.vector)),
        }
    return {
        "triple": list(triple),
        "matrix": kform.matrix,
        "rank": sig.rank,
        "signature": sig.index,
        "inertia": {"positives": sig.positives, "negatives": sig.negatives, "zeros": sig.zeros},
        "triple_index": sig.index,
        "pairwise_transversal": {_pair_key(triple[i], triple[j]): ok
                                 for (i, j), ok in crit.pair_transversal.items()},
        "transversal": crit.pairwise_transversal,
        "form_nondegenerate": crit.form_nondegenerate,
        "witness": witness,
    }


def _lk(problem, triple, _opts) -> dict:
    _check_symplectic(problem, "lk")
    lags = [problem.lagrangian(n) for n in triple]
    crit = transversality_criterion(problem.space, *lags, tol=problem.tolerance)
    if not crit.consistent:
        raise ContractViolation(f"triple {triple}: transversality criteria disagree")
    try:
        cls = lk_invariant(problem.space, *lags, tol=problem.tolerance)
    except LagrangianError as exc:
        raise ValidationError.wrap(",".join(triple), exc) from None
    return {"triple": list(triple), **cls.as_dict()}


def _stabilized_embedding(p: np.ndarray, space: EpsSpace, n: int):
    """Map standard coordinates (a, a', alpha, alpha') of rank 2n into E (+) H(R^n)."""
    target = direct_sum_spaces(space, EpsSpace(hyperbolic_form(n, space.epsilon)))
    q = np.zeros((4 * n, 4 * n))
    q[:2 * n, :n] = p[:, :n]
    q[:2 * n, 2 * n:3 * n] = p[:, n:]
    q[2 * n:3 * n, n:2 * n] = np.eye(n)
    q[3 * n:, 3 * n:] = np.eye(n)
    return q, target


def _path_report(path, push, target, anchors, tol) -> dict:
    samples = []
    for t, lag in zip(path.ts, path.lagrangians):
        moved = transport(push, lag, target, tol)
        samples.append({"t": float(t), "basis": moved.basis, "residual": moved.residual})
    end = transport(push, path.end, target, tol)
    return samples, {name: are_transversal(end, anchor, tol) for name, anchor in anchors.items()}


def _deform(problem, names, opts) -> dict:
    tol = problem.tolerance
    steps = opts.steps
    space = problem.space
    if len(names) == 2:
        _check_symplectic(problem, "deform --pair")
        l1, l2 = (problem.lagrangian(n) for n in names)
        path = make_transversal_pair(space, l1, l2, steps, tol)
        samples, ends = _path_report(path, np.eye(space.dim), space, {names[0]: l1}, tol)
        return {"mode": "transversal-pair", "fixed": names[0], "moving": names[1],
                "stabilized": False, "samples": samples, "endpoint_transversal": ends}

    l1, l2, l3 = (problem.lagrangian(n) for n in names)
    try:
        p = darboux_pair_normalization(space, l1, l2, tol)
        std, _, _ = standard_space(space.nprime, space.epsilon)
        g = extract_graph_map(std, transport(np.linalg.inv(p), l3, std, tol), tol)
    except LagrangianError as exc:
        raise ValidationError.wrap(",".join(names), exc) from None
    n = space.nprime
    if space.epsilon == -1:
        path = deform_third_to_transversal(n, g, steps, tol)
        push, target, stabilized = p, space, False
    else:
        report, (path,) = deform_family_symmetric(n, [g], steps, tol)
        stabilized = report.stabilized
        if stabilized:
            push, target = _stabilized_embedding(p, space, n)
        else:
            push, target = p, space
    _, lf, lsf = standard_space(path.space.nprime, space.epsilon)
    anchors = {names[0]: transport(push, lf, target, tol), names[1]: transport(push, lsf, target, tol)}
    samples, ends = _path_report(path, push, target, anchors, tol)
    return {"mode": "third-to-transversal", "fixed": list(names[:2]), "moving": names[2],
            "graph_map": g.entries, "stabilized": stabilized, "samples": samples,
            "endpoint_transversal": ends}


def _loop_index(problem, name, _opts) -> dict:
    loop = problem.loop(name)
    try:
        index = loop_maslov_index(loop, problem.tolerance)
        steps = phase_increments(loop)
    except LagrangianError as exc:
        raise ValidationError.wrap(f"loops.{name}", exc) from None
    return {"loop": name, "index": index, "samples": len(loop),
            "max_phase_step": float(np.max(np.abs(steps)))}


HANDLERS = {
    "validate": _validate,
    "transversal": _transversal,
    "kashiwara": _kashiwara,
    "deform": _deform,
    "loop-index": _loop_index,
    "lk": _lk,
}


def _targets(command, problem, opts) -> list:
    names = list(problem.lagrangians)
    if command == "validate":
        return [None]
    if command == "transversal":
        if opts.pair:
            return [_names(p, 2, "--pair") for p in opts.pair]
        return list(combinations(names, 2))
    if command in ("kashiwara", "lk"):
        if opts.triple:
            return [_names(t, 3, "--triple") for t in opts.triple]
        if len(names) == 3:
            return [tuple(names)]
        raise SchemaError("--triple", "required unless the problem has exactly three lagrangians")
    if command == "deform":
        targets = [_names(t, 3, "--triple") for t in opts.triple or []]
        targets += [_names(p, 2, "--pair") for p in opts.pair or []]
        if targets:
            return targets
        if len(names) in (2, 3):
            return [tuple(names)]
        raise SchemaError("--triple", "deform needs --pair A,B or --triple A,B,C")
    if command == "loop-index":
        if opts.loop:
            return list(opts.loop)
        if not problem.loops:
            raise UnknownName("the problem defines no loops")
        return list(problem.loops)
    raise SchemaError("command", f"unknown command {command!r}")


def run(command: str, problem, opts) -> tuple[int, dict]:
    """Dispatch one command; returns ``(exit_code, report)``."""
    report = {"schema_version": SCHEMA_VERSION, "command": command}
    try:
        targets = _targets(command, problem, opts)
        handler = HANDLERS[command]
        jobs = max(1, getattr(opts, "jobs", 1) or 1)
        if jobs > 1 and len(targets) > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(lambda t: handler(problem, t, opts), targets))
        else:
            results = [handler(problem, t, opts) for t in targets]
    except ContractViolation as exc:
        report["error"] = {"type": "ContractViolation", "message": str(exc)}
        return EXIT_CONTRACT, report
    except ProblemError as exc:
        report["error"] = exc.as_dict()
        return EXIT_INVALID, report
    except LagrangianError as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        return EXIT_INVALID, report
    if len(results) == 1:
        report["result"] = results[0]
    else:
        report["results"] = results
    return EXIT_OK, report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lagtrans",
        description="Lagrangian transversality, Kashiwara forms and Maslov loop indices.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", required=True, metavar="PATH", help="problem JSON file")
    parser.add_argument("--output", metavar="PATH", help="report file (default: stdout)")
    parser.add_argument("--tol", metavar="REL[,ABS]", help="override the tolerance")
    parser.add_argument("--steps", type=int, default=17, help="deformation samples (default 17)")
    parser.add_argument("--pair", action="append", metavar="A,B")
    parser.add_argument("--triple", action="append", metavar="A,B,C")
    parser.add_argument("--loop", action="append", metavar="NAME")
    parser.add_argument("--jobs", type=int, default=1, help="worker threads for batch targets")
    return parser


def main(argv=None) -> int:
    opts = build_parser().parse_args(argv)
    report = {"schema_version": SCHEMA_VERSION, "command": opts.command}
    try:
        tol = parse_tol_flag(opts.tol) if opts.tol else None
        if opts.steps < 2:
            raise SchemaError("--steps", "must be at least 2")
        problem = parse_problem(opts.input, tol)
    except ProblemError as exc:
        code = EXIT_INVALID
        report["error"] = exc.as_dict()
    else:
        code, report = run(opts.command, problem, opts)

    text = dumps_report(report)
    if opts.output:
        with open(opts.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code != EXIT_OK:
        err = report["error"]
        print(f"lagtrans: {err['type']}: {err.get('field', '')} {err['message']}".rstrip(),
              file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
