"""Problem files and deterministic JSON reports.

A problem file is a JSON object::

    {
      "schema_version": 1,                       # optional, must be 1
      "epsilon": -1,
      "dimension": 2,
      "form": [[0, 1], [-1, 0]],                 # optional, default hyperbolic
      "lagrangians": {"L1": [[1], [0]], ...},    # columns are basis vectors
      "loops": {"half": [[[1], [0]], ...]},      # optional; list of bases, or
                                                 # {"thetas": [...], "samples": [...]}
      "tolerance": {"rel_eps": 1e-10, "abs_eps": 1e-12}   # optional
    }
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import LagrangianError
from .forms import DEFAULT_TOL, BilinearFormMatrix, Tolerance, hyperbolic_form
from .loops import LagrangianLoop, loop_from_bases
from .phase_space import EpsSpace, Lagrangian, validate_lagrangian

SCHEMA_VERSION = 1


class ProblemError(Exception):
    kind = "ProblemError"

    def as_dict(self) -> dict:
        return {"type": self.kind, "message": str(self)}


class IoError(ProblemError):
    kind = "IoError"


class SchemaError(ProblemError):
    kind = "SchemaError"

    def __init__(self, field_name: str, reason: str):
        super().__init__(f"{field_name}: {reason}")
        self.field = field_name
        self.reason = reason

    def as_dict(self) -> dict:
        return {"type": self.kind, "field": self.field, "message": self.reason}


class ValidationError(ProblemError):
    kind = "ValidationError"

    def __init__(self, field_name: str, error: str, message: str, residual: float | None = None):
        super().__init__(f"{field_name}: {error}: {message}")
        self.field = field_name
        self.error = error
        self.reason = message
        self.residual = residual

    @classmethod
    def wrap(cls, field_name: str, exc: LagrangianError) -> ValidationError:
        return cls(field_name, type(exc).__name__, str(exc), getattr(exc, "residual", None))

    def as_dict(self) -> dict:
        out = {"type": self.kind, "field": self.field, "error": self.error,
               "message": self.reason}
        if self.residual is not None:
            out["residual"] = self.residual
        return out


class UnknownName(ProblemError):
    kind = "UnknownName"


@dataclass
class ProblemFile:
    epsilon: int
    dimension: int
    space: EpsSpace
    lagrangians: dict = field(default_factory=dict)
    loops: dict = field(default_factory=dict)
    tolerance: Tolerance = DEFAULT_TOL
    source: str | None = None

    @property
    def form(self) -> BilinearFormMatrix:
        return self.space.form

    def lagrangian(self, name: str) -> Lagrangian:
        try:
            return self.lagrangians[name]
        except KeyError:
            raise UnknownName(f"no lagrangian named {name!r}") from None

    def loop(self, name: str) -> LagrangianLoop:
        try:
            return self.loops[name]
        except KeyError:
            raise UnknownName(f"no loop named {name!r}") from None


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _matrix(value, field_name: str, rows: int | None = None) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise SchemaError(field_name, "expected a non-empty array of rows")
    width = None
    for i, row in enumerate(value):
        if not isinstance(row, list):
            raise SchemaError(f"{field_name}[{i}]", "expected an array of numbers")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise SchemaError(f"{field_name}[{i}]", "rows have different lengths")
        for j, x in enumerate(row):
            if not _is_number(x):
                raise SchemaError(f"{field_name}[{i}][{j}]", "expected a finite number")
    m = np.array(value, dtype=float)
    if rows is not None and m.shape[0] != rows:
        raise ValidationError(field_name, "WrongDimension",
                              f"expected {rows} rows, got {m.shape[0]}")
    return m


def _tolerance(value, field_name="tolerance") -> Tolerance:
    if not isinstance(value, dict):
        raise SchemaError(field_name, "expected an object")
    kwargs = {}
    for key in ("rel_eps", "abs_eps"):
        if key in value:
            if not _is_number(value[key]):
                raise SchemaError(f"{field_name}.{key}", "expected a finite number")
            kwargs[key] = float(value[key])
    unknown = set(value) - {"rel_eps", "abs_eps"}
    if unknown:
        raise SchemaError(f"{field_name}.{sorted(unknown)[0]}", "unknown field")
    try:
        return Tolerance(**kwargs)
    except ValueError as exc:
        raise SchemaError(field_name, str(exc)) from None


def parse_tol_flag(text: str) -> Tolerance:
    parts = text.split(",")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise SchemaError("--tol", f"expected REL[,ABS], got {text!r}") from None
    if len(values) not in (1, 2):
        raise SchemaError("--tol", f"expected REL[,ABS], got {text!r}")
    try:
        return Tolerance(*values)
    except ValueError as exc:
        raise SchemaError("--tol", str(exc)) from None


def _require(data: dict, key: str):
    if key not in data:
        raise SchemaError(key, "missing required field")
    return data[key]


def problem_from_dict(data, tol: Tolerance | None = None, source: str | None = None) -> ProblemFile:
    if not isinstance(data, dict):
        raise SchemaError("<root>", "expected a JSON object")
    if "schema_version" in data and data["schema_version"] != SCHEMA_VERSION:
        raise SchemaError("schema_version", f"unsupported version {data['schema_version']!r}")

    epsilon = _require(data, "epsilon")
    if epsilon not in (1, -1) or isinstance(epsilon, bool):
        raise SchemaError("epsilon", "must be 1 or -1")
    dimension = _require(data, "dimension")
    if not isinstance(dimension, int) or isinstance(dimension, bool) or dimension < 2:
        raise SchemaError("dimension", "must be an integer >= 2")
    if dimension % 2:
        raise SchemaError("dimension", "must be even")
    raw_lags = _require(data, "lagrangians")
    if not isinstance(raw_lags, dict):
        raise SchemaError("lagrangians", "expected an object mapping names to matrices")
    raw_loops = data.get("loops", {})
    if not isinstance(raw_loops, dict):
        raise SchemaError("loops", "expected an object mapping names to sample lists")
    known = {"schema_version", "epsilon", "dimension", "form", "lagrangians", "loops",
             "tolerance"}
    for key in data:
        if key not in known:
            raise SchemaError(key, "unknown field")

    if tol is None:
        tol = _tolerance(data["tolerance"]) if "tolerance" in data else DEFAULT_TOL

    if "form" in data:
        m = _matrix(data["form"], "form", rows=dimension)
        if m.shape[1] != dimension:
            raise ValidationError("form", "WrongDimension",
                                  f"expected {dimension} columns, got {m.shape[1]}")
        try:
            space = EpsSpace(BilinearFormMatrix(m, epsilon))
        except LagrangianError as exc:
            raise ValidationError.wrap("form", exc) from None
    else:
        space = EpsSpace(hyperbolic_form(dimension // 2, epsilon))

    lags = {}
    for name, value in raw_lags.items():
        fname = f"lagrangians.{name}"
        m = _matrix(value, fname, rows=dimension)
        if m.shape[1] != dimension // 2:
            raise ValidationError(fname, "WrongDimension",
                                  f"expected {dimension // 2} columns, got {m.shape[1]}")
        try:
            lags[name] = validate_lagrangian(space, m, tol)
        except LagrangianError as exc:
            raise ValidationError.wrap(fname, exc) from None

    loops = {}
    for name, value in raw_loops.items():
        fname = f"loops.{name}"
        thetas = None
        samples = value
        if isinstance(value, dict):
            samples = value.get("samples")
            if samples is None:
                raise SchemaError(f"{fname}.samples", "missing required field")
            if "thetas" in value:
                thetas = value["thetas"]
                if not isinstance(thetas, list) or not all(_is_number(t) for t in thetas):
                    raise SchemaError(f"{fname}.thetas", "expected an array of numbers")
        if not isinstance(samples, list) or len(samples) < 2:
            raise SchemaError(fname, "expected an array of at least two basis matrices")
        bases = [_matrix(s, f"{fname}[{i}]", rows=dimension) for i, s in enumerate(samples)]
        if thetas is not None and len(thetas) != len(bases):
            raise SchemaError(f"{fname}.thetas", "needs one parameter per sample")
        try:
            loops[name] = loop_from_bases(space, bases, thetas, tol)
        except LagrangianError as exc:
            raise ValidationError.wrap(fname, exc) from None
        except ValueError as exc:
            raise SchemaError(fname, str(exc)) from None

    return ProblemFile(epsilon, dimension, space, lags, loops, tol, source)


def parse_problem(path, tol: Tolerance | None = None) -> ProblemFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise IoError(f"cannot read {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("<root>", f"invalid JSON: {exc}") from None
    return problem_from_dict(data, tol, str(path))


def _format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    text = "%.17g" % (x + 0.0)
    if all(c not in text for c in ".en"):
        text += ".0"
    return text


def _encode(obj, indent: int, level: int) -> str:
    if obj is None:
        return "null"
    if obj is True or obj is False:
        return "true" if obj else "false"
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        # innermost numeric rows stay on one line
        if all(not isinstance(v, (list, tuple, dict, np.ndarray)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_report(obj, indent: int = 2) -> str:
    """JSON text with insertion-ordered keys and floats at 17 significant digits."""
    return _encode(obj, indent, 0) + "\n"
