"""JSON job files: rings, module data and analysis bounds.

A job looks like::

    {
      "p": 5,
      "variables": ["x", "y", "z"],
      "f": ["x*y", "y*z"],
      "module": {"family": {"name": "jorgensen", "params": {"p": 2, "q": 3}}},
      "against": {"family": {"name": "residue-field"}},
      "dmax": 20, "q": 5, "deg_bound": 2, "grading": "internal"
    }

``module`` and ``against`` are either a family reference or explicit data
``{"lo": 0, "ranks": [...], "diffs": {"1": matrix}, "lambdas": [{"0": matrix}, ...]}``
with matrices given as lists of rows of expression strings.  Jobs built
only from closed-fiber data (for instance the codepth-3 families) give the
operator count as ``"operators": n`` instead of ``variables`` and ``f``.
``against`` defaults to the residue field.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import field as ff
from . import families
from .dgmodule import ClosedFiberModuleData, DGEModuleData, FreeComplex, RingSpec, residue_field_datum
from .parser import ParseError
from .poly import PolyMatrix


class JobError(ValueError):
    """A job file that cannot be turned into data; ``where`` names the field."""

    def __init__(self, message: str, where: str = ""):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


CLOSED_FAMILIES = ("residue-field", "codepth3", "codepth2", "exterior")
FULL_FAMILIES = ("jorgensen", "koszul", "residue-field-resolution", "common-factor")


@dataclass(frozen=True)
class JobSpec:
    p: int
    variables: tuple
    f: tuple
    module: dict
    against: dict | None = None
    operators: int | None = None
    dmax: int | None = None
    q: int | None = None
    deg_bound: int = 2
    grading: str | None = None
    extra: dict = field(default_factory=dict)

    @property
    def closed_fiber_only(self) -> bool:
        return self.operators is not None

    @property
    def n(self) -> int:
        return self.operators if self.closed_fiber_only else len(self.f)

    def ring_spec(self) -> RingSpec:
        if self.closed_fiber_only:
            raise JobError("closed-fiber job has no base ring", "variables")
        try:
            return RingSpec.make(list(self.variables), list(self.f), self.p)
        except ParseError as e:
            raise JobError(str(e), "f") from e
        except ValueError as e:
            raise JobError(str(e), "f") from e

    def build_module(self):
        return _build(self, self.module, "module")

    def build_against(self):
        if self.against is None:
            return residue_field_datum(self.n, self.p)
        return _build(self, self.against, "against")

    def to_json(self) -> dict:
        out = {"p": self.p}
        if self.closed_fiber_only:
            out["operators"] = self.operators
        else:
            out["variables"] = list(self.variables)
            out["f"] = list(self.f)
        out["module"] = self.module
        if self.against is not None:
            out["against"] = self.against
        for key in ("dmax", "q", "grading"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        out["deg_bound"] = self.deg_bound
        out.update(self.extra)
        return out


def parse_job(obj) -> JobSpec:
    if not isinstance(obj, dict):
        raise JobError("a job must be a JSON object")
    known = {"p", "variables", "f", "operators", "module", "against", "dmax", "q", "deg_bound", "grading"}
    p = obj.get("p", ff.DEFAULT_P)
    try:
        p = ff.check_characteristic(p)
    except (TypeError, ValueError) as e:
        raise JobError(str(e), "p") from e
    if "module" not in obj:
        raise JobError("missing required key 'module'", "module")
    operators = obj.get("operators")
    if operators is None:
        if "f" not in obj:
            raise JobError("missing required key 'f'", "f")
        if "variables" not in obj:
            raise JobError("missing required key 'variables'", "variables")
        variables, f = obj["variables"], obj["f"]
        if not isinstance(variables, list) or not all(isinstance(v, str) for v in variables):
            raise JobError("expected a list of names", "variables")
        if not isinstance(f, list) or not all(isinstance(g, str) for g in f):
            raise JobError("expected a list of expression strings", "f")
    else:
        if not isinstance(operators, int) or operators < 0:
            raise JobError("expected a nonnegative integer", "operators")
        variables, f = (), ()
    grading = obj.get("grading")
    if grading is not None and grading not in ("ext", "internal"):
        raise JobError("expected 'ext' or 'internal'", "grading")
    for key in ("dmax", "q", "deg_bound"):
        v = obj.get(key)
        if v is not None and (not isinstance(v, int) or v < 0):
            raise JobError("expected a nonnegative integer", key)
    return JobSpec(
        p=p, variables=tuple(variables), f=tuple(f), module=obj["module"], against=obj.get("against"),
        operators=operators, dmax=obj.get("dmax"), q=obj.get("q"), deg_bound=obj.get("deg_bound", 2),
        grading=grading, extra={k: v for k, v in obj.items() if k not in known},
    )


def load_job(path) -> JobSpec:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as e:
        raise JobError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    return parse_job(obj)


def dump_job(job: JobSpec) -> str:
    return json.dumps(job.to_json(), indent=2, sort_keys=True)


# --------------------------------------------------------------------------
# data <-> JSON


def _matrix_from_json(ring, rows, shape, where):
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise JobError("a matrix is a list of rows", where)
    if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
        got = (len(rows), len(rows[0]) if rows else 0)
        raise JobError(f"expected shape {shape}, got {got}", where)
    try:
        return PolyMatrix.from_rows(ring, [[ring.coerce(str(v)) for v in r] for r in rows], cols=shape[1])
    except ParseError as e:
        raise JobError(str(e), where) from e


def _scalar_from_json(rows, shape, p, where):
    if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
        raise JobError(f"expected shape {shape}", where)
    try:
        return np.array([[int(v) % p for v in r] for r in rows], dtype=np.int64).reshape(shape)
    except (TypeError, ValueError) as e:
        raise JobError("closed-fiber entries must be integers", where) from e


def _explicit(job: JobSpec, data: dict, where: str):
    for key in ("lo", "ranks"):
        if key not in data:
            raise JobError(f"missing required key '{key}'", f"{where}.{key}")
    lo = data["lo"]
    ranks = tuple(data["ranks"])
    rank = lambda d: ranks[d - lo] if 0 <= d - lo < len(ranks) else 0  # noqa: E731
    lam_list = data.get("lambdas", [])
    if len(lam_list) != job.n:
        raise JobError(f"expected {job.n} operator families, got {len(lam_list)}", f"{where}.lambdas")
    if job.closed_fiber_only:
        diffs = {int(d): _scalar_from_json(m, (rank(int(d) - 1), rank(int(d))), job.p, f"{where}.diffs.{d}")
                 for d, m in data.get("diffs", {}).items()}
        lams = tuple(
            {int(d): _scalar_from_json(m, (rank(int(d) + 1), rank(int(d))), job.p, f"{where}.lambdas[{i}].{d}")
             for d, m in lam.items()}
            for i, lam in enumerate(lam_list)
        )
        return ClosedFiberModuleData(n=job.n, p=job.p, lo=lo, ranks=ranks, diffs=diffs, lambdas=lams)
    spec = job.ring_spec()
    ring = spec.ring
    diffs = {int(d): _matrix_from_json(ring, m, (rank(int(d) - 1), rank(int(d))), f"{where}.diffs.{d}")
             for d, m in data.get("diffs", {}).items()}
    lams = tuple(
        {int(d): _matrix_from_json(ring, m, (rank(int(d) + 1), rank(int(d))), f"{where}.lambdas[{i}].{d}")
         for d, m in lam.items()}
        for i, lam in enumerate(lam_list)
    )
    return DGEModuleData(spec, FreeComplex(ring, lo, ranks, diffs), lams)


def _family(job: JobSpec, fam: dict, where: str):
    name = fam.get("name")
    params = dict(fam.get("params", {}))
    where = f"{where}.family"
    try:
        if name == "residue-field":
            return residue_field_datum(job.n, job.p)
        if name == "codepth3":
            cls = params.pop("class")
            kw = {"r": params.pop("r", None), "hp": params.pop("p", None), "hq": params.pop("q", None)}
            data = families.codepth3_family(cls, params.pop("n"), params.pop("m"), params.pop("l"), prime=job.p, **kw)
        elif name == "codepth2":
            data = families.codepth2_family(params.pop("n"), params.pop("m"), job.p)
        elif name == "exterior":
            data = families.exterior_datum(params.pop("coeffs"), job.p)
        elif name in FULL_FAMILIES:
            if job.closed_fiber_only:
                raise JobError(f"family {name!r} needs 'variables' and 'f'", where)
            spec = job.ring_spec()
            if name == "jorgensen":
                data = families.jorgensen_family(params.pop("p"), params.pop("q"), job.p)
            elif name == "koszul":
                data = families.build_koszul(spec)
            elif name == "residue-field-resolution":
                data = families.residue_field_resolution(spec, params.pop("coeffs"))
            else:
                data = families.common_factor_family(spec, params.pop("g"), params.pop("u"), params.pop("v"))
            if data.spec.ring != spec.ring or data.spec.f != spec.f:
                raise JobError(f"family {name!r} is defined over {list(data.ring.names)} with f = "
                               f"{[str(g) for g in data.spec.f]}, which differs from the job", where)
        else:
            raise JobError(f"unknown family {name!r}; known: {', '.join(FULL_FAMILIES + CLOSED_FAMILIES)}", where)
    except KeyError as e:
        raise JobError(f"missing parameter {e.args[0]!r}", where) from e
    except ParseError as e:
        raise JobError(str(e), where) from e
    if params:
        raise JobError(f"unused parameters {sorted(params)}", where)
    if isinstance(data, ClosedFiberModuleData) and data.n != job.n:
        raise JobError(f"family has {data.n} operators, job has {job.n}", where)
    return data


def _build(job, obj, where):
    if not isinstance(obj, dict):
        raise JobError("expected an object", where)
    if "family" in obj:
        return _family(job, obj["family"], where)
    return _explicit(job, obj, where)


def datum_to_json(m) -> dict:
    """Explicit JSON form of a datum; :func:`datum_from_json` inverts it."""
    out = {"lo": m.lo, "ranks": list(m.ranks)}
    if isinstance(m, ClosedFiberModuleData):
        out["diffs"] = {str(d): m.diff(d).tolist() for d in sorted(m.diffs)}
        out["lambdas"] = [{str(d): a.tolist() for d, a in sorted(lam.items())} for lam in m.lambdas]
    else:
        out["diffs"] = {str(d): [[str(v) for v in r] for r in m.diff(d).to_rows()] for d in sorted(m.complex.diffs)}
        out["lambdas"] = [
            {str(d): [[str(v) for v in r] for r in a.to_rows()] for d, a in sorted(lam.items())}
            for lam in m.lambdas
        ]
    return out


def job_for(m, against=None, **bounds) -> JobSpec:
    """A job with ``m`` (and optionally ``against``) written out explicitly."""
    if isinstance(m, ClosedFiberModuleData):
        base = dict(p=m.p, variables=(), f=(), operators=m.n)
    else:
        base = dict(p=m.p, variables=tuple(m.ring.names), f=tuple(str(g) for g in m.spec.f))
    return JobSpec(module=datum_to_json(m), against=None if against is None else datum_to_json(against),
                   **base, **bounds)


def datum_from_json(job: JobSpec, obj: dict, where: str = "module"):
    return _build(job, obj, where)
