"""Command-line front end.

    thermopauli COMMAND --input IN.json [--output OUT.json] [--csv OUT.csv]
                [--kB X] [--backend float|exact] [--tol X] [--print-schema]

Every input and result file carries ``"schema": 1`` and is checked against
the JSON schemas in :data:`INPUT_SCHEMAS` / :data:`RESULT_SCHEMAS`; unknown
fields are rejected.  Exit status: 0 ok, 1 internal error, 2 admissibility
rejection, 3 malformed input or usage (with a JSON pointer to the field).
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np
from jsonschema import Draft202012Validator

from . import fluctuations as fl
from . import subtropical as st
from . import thermo as th
from . import tropical as tr
from .series_core import FLOAT, SeriesError, TruncatedSeries2, get_field

SCHEMA_VERSION = 1
COMMANDS = ("tropical", "subtropical", "fluctuations", "reduce", "chemical", "gibbs", "verify")
BACKEND_ENV = "THERMOPAULI_BACKEND"

EXIT_OK, EXIT_INTERNAL, EXIT_REJECTED, EXIT_SCHEMA = 0, 1, 2, 3

ADMISSIBILITY_ERRORS = (tr.TropicalError, st.SubtropicalError, th.ThermoError,
                        fl.FluctuationError, SeriesError)


class SchemaError(Exception):
    def __init__(self, pointer: str, message: str):
        super().__init__(f"schema violation at {pointer or '/'}: {message}")
        self.pointer = pointer


class VerificationFailed(Exception):
    pass


# --------------------------------------------------------------------------
# schemas


def _tagged(key, value, props, required=()):
    """if key == value then exactly these properties (plus key) are allowed."""
    return {"if": {"properties": {key: {"const": value}}, "required": [key]},
            "then": {"additionalProperties": False, "required": list(required),
                     "properties": {key: True, **props}}}


_RATIONAL = r"^[+-]?[0-9]+(/[0-9]+)?$"
_DEFS = {
    "num": {"oneOf": [{"type": "number"}, {"type": "string", "pattern": _RATIONAL}]},
    "real": {"type": "number"},
    "posreal": {"type": "number", "exclusiveMinimum": 0},
    "nonneg": {"type": "number", "minimum": 0},
    "vector": {"type": "array", "items": {"$ref": "#/$defs/real"}, "minItems": 1},
    "matrix": {"type": "array", "minItems": 1,
               "items": {"type": "array", "minItems": 1, "items": {"$ref": "#/$defs/real"}}},
    "complex": {"type": "array", "items": {"$ref": "#/$defs/num"},
                "minItems": 2, "maxItems": 2},
    "series1": {"type": "object", "additionalProperties": False,
                "required": ["degree", "coeffs"],
                "properties": {"degree": {"type": "integer", "minimum": 0},
                               "coeffs": {"type": "array",
                                          "items": {"$ref": "#/$defs/complex"}}}},
    "series2": {"type": "object", "additionalProperties": False,
                "required": ["degrees", "coeffs"],
                "properties": {
                    "degrees": {"type": "array", "items": {"type": "integer", "minimum": 0},
                                "minItems": 2, "maxItems": 2},
                    "coeffs": {"type": "array", "items": {
                        "type": "array", "items": {"$ref": "#/$defs/complex"}}}}},
    "units": {"const": "kB"},
    "model": {"type": "object", "required": ["name"],
              "properties": {"name": {"enum": ["sackur_tetrode", "quadratic", "product",
                                               "linear_change"]}},
              "allOf": [
                  _tagged("name", "sackur_tetrode", {"calib": {"$ref": "#/$defs/posreal"}}),
                  _tagged("name", "quadratic", {"H": {"$ref": "#/$defs/matrix"},
                                                "offset": {"$ref": "#/$defs/real"}}, ["H"]),
                  _tagged("name", "product", {"components": {
                      "type": "array", "minItems": 1, "items": {"$ref": "#/$defs/model"}}},
                      ["components"]),
                  _tagged("name", "linear_change", {"base": {"$ref": "#/$defs/model"},
                                                    "C": {"$ref": "#/$defs/matrix"}},
                          ["base", "C"])]},
    "tropical_problem": {"type": "object", "additionalProperties": False,
                         "required": ["u", "w"],
                         "properties": {"u": {"type": "array", "items": {"$ref": "#/$defs/num"}},
                                        "w": {"type": "array", "items": {"$ref": "#/$defs/num"}},
                                        "n0": {"type": "integer", "minimum": 1}}},
    "subtropical_problem": {"type": "object", "additionalProperties": False,
                            "required": ["A", "B"],
                            "properties": {"A": {"$ref": "#/$defs/series2"},
                                           "B": {"$ref": "#/$defs/series2"}}},
    "tropical_solution": {"type": "object", "additionalProperties": False,
                          "required": ["branch", "lambda", "rho"],
                          "properties": {"branch": {"type": "integer", "minimum": 0},
                                         "lambda": {"type": "array",
                                                    "items": {"$ref": "#/$defs/num"}},
                                         "rho": {"type": "array",
                                                 "items": {"$ref": "#/$defs/num"}},
                                         "residual": {"type": "number"}}},
    "subtropical_solution": {"type": "object", "additionalProperties": False,
                             "required": ["branch", "f", "g", "P", "phase"],
                             "properties": {"branch": {"type": "integer", "minimum": 0},
                                            "f": {"$ref": "#/$defs/series2"},
                                            "g": {"$ref": "#/$defs/series2"},
                                            "P": {"type": "array",
                                                  "items": {"$ref": "#/$defs/num"}},
                                            "phase": {"type": "array",
                                                      "items": {"$ref": "#/$defs/num"}},
                                            "residual": {"type": "number"}}},
}


def _doc(required: dict, optional: dict | None = None) -> dict:
    props = {"schema": {"const": SCHEMA_VERSION}, **required, **(optional or {})}
    return {"$schema": "https://json-schema.org/draft/2020-12/schema",
            "type": "object", "additionalProperties": False,
            "required": ["schema", *required], "properties": props, "$defs": _DEFS}


def _ref(name):
    return {"$ref": f"#/$defs/{name}"}


_REALS = {"type": "array", "items": _ref("real")}

INPUT_SCHEMAS = {
    "tropical": _doc({"u": _DEFS["tropical_problem"]["properties"]["u"],
                      "w": _DEFS["tropical_problem"]["properties"]["w"]},
                     {"n0": {"type": "integer", "minimum": 1}}),
    "subtropical": _doc({"A": _ref("series2"), "B": _ref("series2")}),
    "fluctuations": _doc({"A": _ref("matrix"),
                          "grid": {"type": "object", "additionalProperties": False,
                                   "required": ["min", "max", "points"],
                                   "properties": {"min": _ref("real"), "max": _ref("real"),
                                                  "points": {"type": "integer",
                                                             "minimum": 2}}}},
                         {"x0": _ref("vector"), "y0": _ref("vector"),
                          "which": {"enum": ["E", "beta"]},
                          "quantity": {"enum": ["density", "wavefunction"]}}),
    "reduce": _doc({"model": _ref("model"), "C": _ref("matrix"),
                    "released": {"type": "array", "minItems": 1,
                                 "items": {"type": "integer", "minimum": 0}},
                    "start": _ref("vector")},
                   {"units": _ref("units")}),
    "chemical": _doc({"N0": _ref("nonneg"), "N1": _ref("nonneg"), "N2": _ref("nonneg"),
                      "K": _ref("posreal")},
                     {"units": _ref("units")}),
    "gibbs": _doc({"u": _ref("posreal"), "v": _ref("posreal"), "n": _ref("posreal"),
                   "M0": _ref("posreal"), "M1": _ref("posreal"), "eps0": _ref("posreal")},
                  {"calib": _ref("posreal"), "K": _ref("posreal"), "units": _ref("units")}),
    "verify": {"$schema": "https://json-schema.org/draft/2020-12/schema", "$defs": _DEFS,
               "type": "object", "required": ["schema", "kind", "problem", "solution"],
               "properties": {"kind": {"enum": ["tropical", "subtropical"]}},
               "allOf": [_tagged("kind", kind, {
                   "schema": {"const": SCHEMA_VERSION},
                   "problem": _ref(f"{kind}_problem"),
                   "solution": _ref(f"{kind}_solution")}) for kind in ("tropical", "subtropical")]},
}

_BASE_RESULT = {"command": {"enum": list(COMMANDS)}, "backend": {"enum": ["float", "exact"]}}

RESULT_SCHEMAS = {
    "tropical": _doc({**_BASE_RESULT, "n0": {"type": "integer"},
                      "diagnostics": {"type": "object", "additionalProperties": False,
                                      "required": ["q", "D", "degenerate"],
                                      "properties": {"q": _ref("num"), "D": _ref("num"),
                                                     "degenerate": {"type": "boolean"}}},
                      "solutions": {"type": "array", "items": _ref("tropical_solution")}}),
    "subtropical": _doc({**_BASE_RESULT, "m0": {"type": "integer"}, "n0": {"type": "integer"},
                         "c": _ref("series1"),
                         "solutions": {"type": "array",
                                       "items": _ref("subtropical_solution")}}),
    "fluctuations": _doc({**_BASE_RESULT, "kB": _ref("posreal"), "h": _ref("posreal"),
                          "dim": {"type": "integer"}, "which": {"enum": ["E", "beta"]},
                          "quantity": {"enum": ["density", "wavefunction"]},
                          "var_E": _REALS, "var_beta": _REALS, "uncertainty": _REALS,
                          "csv": {"type": ["string", "null"]},
                          "csv_rows": {"type": "integer"}}),
    "reduce": _doc({**_BASE_RESULT, "units": _ref("units"), "E": _REALS, "beta": _REALS,
                    "entropy": _ref("real"), "released_beta": _REALS}),
    "chemical": _doc({**_BASE_RESULT, "units": _ref("units"), "x": _ref("real"),
                      "moles": _REALS}),
    "gibbs": _doc({**_BASE_RESULT, "units": _ref("units"), "mixing_entropy": _ref("real"),
                   "S_in": _ref("real"), "S_out": _ref("real"), "x": _ref("real"),
                   "K": _ref("real"), "eps": _ref("real")}),
    "verify": _doc({**_BASE_RESULT, "kind": {"enum": ["tropical", "subtropical"]},
                    "residual": {"type": "number"}, "tolerance": {"type": "number"},
                    "ok": {"type": "boolean"}}),
}


def _pointer(path) -> str:
    return "".join(f"/{p}" for p in path)


def validate(doc, schema) -> None:
    """Raise SchemaError for the first (deepest, then leftmost) violation."""
    errors = list(Draft202012Validator(schema).iter_errors(doc))
    if not errors:
        return
    # oneOf failures are reported at the branch that got furthest
    def leaves(e):
        if e.context:
            for c in e.context:
                yield from leaves(c)
        else:
            yield e
    flat = [x for e in errors for x in leaves(e)]
    best = max(flat, key=lambda e: (len(e.absolute_path), -len(list(e.absolute_schema_path))))
    raise SchemaError(_pointer(best.absolute_path), best.message)


# --------------------------------------------------------------------------
# decoding helpers


def _scalar(v, backend):
    if backend == "exact":
        return Fraction(v)
    return float(Fraction(v)) if isinstance(v, str) else float(v)


def _series2(obj, backend, where):
    m0, n0 = obj["degrees"]
    rows = obj["coeffs"]
    if len(rows) != m0 + 1:
        raise SchemaError(f"{where}/coeffs", f"expected {m0 + 1} rows")
    for m, r in enumerate(rows):
        if len(r) != n0 + 1:
            raise SchemaError(f"{where}/coeffs/{m}", f"expected {n0 + 1} entries")
    return TruncatedSeries2.from_json(obj, "x", get_field(backend))


def _tropical_problem(obj, backend, where=""):
    u = [_scalar(v, backend) for v in obj["u"]]
    w = [_scalar(v, backend) for v in obj["w"]]
    if len(w) != len(u):
        raise SchemaError(f"{where}/w", "u and w must have the same length")
    if "n0" in obj and obj["n0"] != len(u):
        raise SchemaError(f"{where}/n0", "n0 must equal the length of u")
    return tr.TropicalProblem.from_lists(u, w)


def _subtropical_problem(obj, backend, where=""):
    A = _series2(obj["A"], backend, f"{where}/A")
    B = _series2(obj["B"], backend, f"{where}/B")
    if A.degrees != B.degrees:
        raise SchemaError(f"{where}/B/degrees", "A and B must share truncation degrees")
    return st.SubtropicalProblem(A, B)


def _model(obj, kB, where):
    name = obj["name"]
    if name == "sackur_tetrode":
        return th.sackur_tetrode(kB, obj.get("calib", 1.0))
    if name == "quadratic":
        H = np.asarray(obj["H"], dtype=float)
        if H.shape[0] != H.shape[1]:
            raise SchemaError(f"{where}/H", "matrix must be square")
        return th.quadratic(H, obj.get("offset", 0.0))
    if name == "product":
        return th.product(*(_model(c, kB, f"{where}/components/{k}")
                            for k, c in enumerate(obj["components"])))
    base = _model(obj["base"], kB, f"{where}/base")
    C = np.asarray(obj["C"], dtype=float)
    if C.shape != (base.dim, base.dim):
        raise SchemaError(f"{where}/C", f"expected a {base.dim}x{base.dim} matrix")
    return th.linear_change(base, C)


def _square(obj, where):
    try:
        M = np.asarray(obj, dtype=float)
    except ValueError:
        raise SchemaError(where, "rows must have equal length") from None
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise SchemaError(where, "matrix must be square")
    return M


def _vector(obj, n, where):
    if obj is None:
        return None
    if len(obj) != n:
        raise SchemaError(where, f"expected {n} entries")
    return [float(v) for v in obj]


# --------------------------------------------------------------------------
# commands


@dataclass
class RunConfig:
    command: str
    input_path: str
    output_path: str | None = None
    csv_path: str | None = None
    kB: float = 1.0
    backend: str = "float"
    tol: float | None = None


def _run_tropical(doc, cfg):
    p = _tropical_problem(doc, cfg.backend)
    diag = tr.check_admissibility(p, cfg.backend)
    sols = tr.solve_tropical(p, cfg.backend)
    enc = FLOAT.encode if cfg.backend == "float" else str
    return {"n0": p.n0,
            "diagnostics": {"q": enc(diag.q), "D": enc(diag.D), "degenerate": diag.degenerate},
            "solutions": [s.to_json() for s in sols]}


def _subtropical_solution_json(s, field):
    enc = field.encode
    return {"branch": s.branch, "f": s.f.to_json(), "g": s.g.to_json(),
            "P": [enc(field.real(field.coerce(v))) for v in s.P],
            "phase": [enc(field.real(field.coerce(v))) for v in s.phase],
            "residual": float(s.residual_norm)}


def _run_subtropical(doc, cfg):
    p = _subtropical_problem(doc, cfg.backend)
    report = st.compute_c(p)
    sols = st.solve_subtropical(p)
    return {"m0": p.m0, "n0": p.n0, "c": report.c.to_json(),
            "solutions": [_subtropical_solution_json(s, p.field) for s in sols]}


def _csv_target(cfg):
    if cfg.csv_path:
        return Path(cfg.csv_path)
    if cfg.output_path:
        return Path(cfg.output_path).with_suffix(".csv")
    return None


def _run_fluctuations(doc, cfg):
    A = _square(doc["A"], "/A")
    k = fl.FluctKernel(A, cfg.kB)
    x0 = _vector(doc.get("x0"), k.n, "/x0")
    y0 = _vector(doc.get("y0"), k.n, "/y0")
    g = doc["grid"]
    if not g["max"] > g["min"]:
        raise SchemaError("/grid/max", "max must exceed min")
    which = doc.get("which", "E")
    quantity = doc.get("quantity", "density")
    grid = np.linspace(g["min"], g["max"], g["points"])
    # points run along the first axis; other coordinates sit at the centre
    centre = np.asarray((x0 if which == "E" else y0) or np.zeros(k.n))
    state = fl.CoherentState(k, x0, y0)
    if which == "beta":
        state = fl.h_fourier_analytic(state)
    density = fl.density_extensive if which == "E" else fl.density_intensive
    rows = []
    for t in grid:
        pt = centre.copy()
        pt[0] = t
        if quantity == "density":
            rows.append((float(t), density(k, pt - centre)))
        else:
            rows.append((float(t), state(pt).real))
    Ainv = np.linalg.inv(k.matrix)
    var_E = [float(cfg.kB * Ainv[j, j]) for j in range(k.n)]
    var_b = [float(cfg.kB * k.matrix[j, j]) for j in range(k.n)]
    target = _csv_target(cfg)
    if target is not None:
        with open(target, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x" if which == "E" else "y", "value"])
            for t, v in rows:
                w.writerow([repr(t), repr(float(v))])
    return {"kB": cfg.kB, "h": k.h, "dim": k.n, "which": which, "quantity": quantity,
            "var_E": var_E, "var_beta": var_b,
            "uncertainty": [float(np.sqrt(a * b)) for a, b in zip(var_E, var_b)],
            "csv": None if target is None else str(target), "csv_rows": len(rows)}


def _run_reduce(doc, cfg):
    S = _model(doc["model"], cfg.kB, "/model")
    C = _square(doc["C"], "/C")
    if C.shape[0] != S.dim:
        raise SchemaError("/C", f"expected a {S.dim}x{S.dim} matrix")
    start = _vector(doc["start"], S.dim, "/start")
    released = tuple(doc["released"])
    for k, r in enumerate(released):
        if r >= S.dim:
            raise SchemaError(f"/released/{k}", f"index must be below {S.dim}")
    spec = th.ReductionSpec(tuple(map(tuple, C.tolist())), released)
    kw = {} if cfg.tol is None else {"tol": cfg.tol}
    pt = th.reduce(S, spec, start, **kw)
    E = np.asarray(pt.E)
    beta_p = np.linalg.inv(C).T @ np.asarray(pt.beta)
    return {"units": "kB", "E": list(pt.E), "beta": list(pt.beta),
            "entropy": float(S.eval(E)) / cfg.kB,
            "released_beta": [float(beta_p[r]) for r in released]}


def _run_chemical(doc, cfg):
    s = th.ChemicalScenario(doc["N0"], doc["N1"], doc["N2"], doc["K"])
    x = float(th.chemical_shift(s))
    return {"units": "kB", "x": x, "moles": [s.N0 - x, s.N1 - x, s.N2 + 2 * x]}


def _run_gibbs(doc, cfg):
    K = doc.get("K")
    g = th.GibbsScenario(doc["u"], doc["v"], doc["n"], doc["M0"], doc["M1"], doc["eps0"],
                         K_of_eps=None if K is None else (lambda eps, eps0: K),
                         kB=cfg.kB, calib=doc.get("calib", 1.0))
    r = th.mixing_entropy(g)
    return {"units": "kB", "mixing_entropy": r.S_mix / cfg.kB, "S_in": r.S_in / cfg.kB,
            "S_out": r.S_out / cfg.kB, "x": float(r.x), "K": float(r.K), "eps": float(r.eps)}


def _run_verify(doc, cfg):
    kind = doc["kind"]
    sol = doc["solution"]
    if kind == "tropical":
        p = _tropical_problem(doc["problem"], cfg.backend, "/problem")
        lam = [_scalar(v, cfg.backend) for v in sol["lambda"]]
        rho = [_scalar(v, cfg.backend) for v in sol["rho"]]
        for key, vals in (("lambda", lam), ("rho", rho)):
            if len(vals) != p.n0:
                raise SchemaError(f"/solution/{key}", f"expected {p.n0} entries")
        res = tr.verify_tropical(p, tr.TropicalSolution(tuple(lam), tuple(rho), sol["branch"]),
                                 cfg.backend)
    else:
        p = _subtropical_problem(doc["problem"], cfg.backend, "/problem")
        f = _series2(sol["f"], cfg.backend, "/solution/f")
        g = _series2(sol["g"], cfg.backend, "/solution/g")
        for key, s in (("f", f), ("g", g)):
            if s.degrees != p.A.degrees:
                raise SchemaError(f"/solution/{key}/degrees", "must match the problem degrees")
        for key in ("P", "phase"):
            if len(sol[key]) != p.m0 + 1:
                raise SchemaError(f"/solution/{key}", f"expected {p.m0 + 1} entries")
        s = st.SubtropicalSolution(f, g, tuple(_scalar(v, cfg.backend) for v in sol["P"]),
                                   sol["branch"],
                                   tuple(_scalar(v, cfg.backend) for v in sol["phase"]))
        res = st.verify_subtropical(p, s)
    tol = cfg.tol if cfg.tol is not None else (0.0 if cfg.backend == "exact" else 1e-10)
    return {"kind": kind, "residual": float(res), "tolerance": tol, "ok": bool(res <= tol)}


_RUNNERS = {"tropical": _run_tropical, "subtropical": _run_subtropical,
            "fluctuations": _run_fluctuations, "reduce": _run_reduce,
            "chemical": _run_chemical, "gibbs": _run_gibbs, "verify": _run_verify}


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def execute(cfg: RunConfig, doc) -> dict:
    """Validate ``doc``, run the command and return the validated result."""
    validate(doc, INPUT_SCHEMAS[cfg.command])
    body = _RUNNERS[cfg.command](doc, cfg)
    backend = cfg.backend if cfg.command in ("tropical", "subtropical", "verify") else "float"
    result = {"schema": SCHEMA_VERSION, "command": cfg.command, "backend": backend, **body}
    validate(result, RESULT_SCHEMAS[cfg.command])
    return result


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        try:
            with open(cfg.input_path) as fh:
                doc = json.load(fh)
        except OSError as e:
            raise SchemaError("", f"cannot read input: {e.strerror}") from None
        except json.JSONDecodeError as e:
            raise SchemaError("", f"invalid JSON: {e}") from None
        result = execute(cfg, doc)
        text = dumps(result)
        if cfg.output_path:
            Path(cfg.output_path).write_text(text)
        else:
            stdout.write(text)
        if cfg.command == "verify" and not result["ok"]:
            raise VerificationFailed(f"verification failed: residual {result['residual']:.3e}"
                                     f" exceeds {result['tolerance']:.3e}")
    except SchemaError as e:
        print(str(e), file=stderr)
        return EXIT_SCHEMA
    except (*ADMISSIBILITY_ERRORS, VerificationFailed) as e:
        print(str(e), file=stderr)
        return EXIT_REJECTED
    except Exception as e:  # noqa: BLE001
        print(f"internal error: {type(e).__name__}: {e}", file=stderr)
        return EXIT_INTERNAL
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    # usage errors share the malformed-input status; 2 is reserved for rejections
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_SCHEMA, f"{self.prog}: error: {message}\n")


def _positive(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="thermopauli", description="Thermodynamic Pauli problem solvers.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", "-i", dest="input_path")
    p.add_argument("--output", "-o", dest="output_path")
    p.add_argument("--csv", dest="csv_path", help="CSV target (default: OUTPUT with .csv)")
    p.add_argument("--kB", type=_positive, default=1.0)
    p.add_argument("--backend", choices=("float", "exact"), default=None)
    p.add_argument("--tol", type=_positive, default=None)
    p.add_argument("--print-schema", action="store_true",
                   help="print the input and result schemas and exit")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.print_schema:
        sys.stdout.write(dumps({"input": INPUT_SCHEMAS[args.command],
                                "result": RESULT_SCHEMAS[args.command]}))
        return EXIT_OK
    if not args.input_path:
        print("--input is required", file=sys.stderr)
        return EXIT_SCHEMA
    backend = args.backend or os.environ.get(BACKEND_ENV) or "float"
    if backend not in ("float", "exact"):
        print(f"{BACKEND_ENV} must be 'float' or 'exact'", file=sys.stderr)
        return EXIT_SCHEMA
    cfg = RunConfig(args.command, args.input_path, args.output_path, args.csv_path,
                    args.kB, backend, args.tol)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
