"""Job-level analyses shared by the command line and the reproduce catalog."""
from __future__ import annotations

from dataclasses import dataclass

from .dgmodule import DGEModuleData, verify_dg_axioms
from .jobs import JobSpec
from .opcomplex import build_ce_closed_fiber, default_dmax, hilbert_function
from .support import hyperplane_check, is_complete_intersection, pointwise_support


class AxiomFailure(Exception):
    """Raised when a job's data fails the DG axioms."""

    def __init__(self, reports):
        self.reports = reports
        super().__init__("; ".join(f"{who}: {c}" for who, r in reports for c in r.failures()))


@dataclass
class Prepared:
    job: JobSpec
    module: object
    against: object

    def complex(self):
        return build_ce_closed_fiber(self.module, self.against)


def axiom_reports(job: JobSpec):
    m, n = job.build_module(), job.build_against()
    return m, n, [("module", verify_dg_axioms(m)), ("against", verify_dg_axioms(n))]


def prepare(job: JobSpec) -> Prepared:
    """Build and verify the data of a job; analyses only run on verified data."""
    m, n, reports = axiom_reports(job)
    if not all(r.ok for _, r in reports):
        raise AxiomFailure([(w, r) for w, r in reports if not r.ok])
    return Prepared(job, m, n)


def _grading(job, grading, c):
    g = grading or job.grading or "ext"
    if g == "internal" and not c.is_linear:
        raise ValueError("the internal grading needs minimal data on both sides; use --grading ext")
    return g


def hilbert(job: JobSpec, dmax=None, grading=None):
    c = prepare(job).complex()
    g = _grading(job, grading, c)
    dmax = job.dmax if dmax is None else dmax
    return hilbert_function(c, dmax if dmax is not None else default_dmax(c, g), g)


def support(job: JobSpec, q=None, dmax=None, deg_bound=None, grading=None):
    c = prepare(job).complex()
    g = _grading(job, grading, c)
    dmax = job.dmax if dmax is None else dmax
    rep = pointwise_support(c, q or job.q, dmax, job.deg_bound if deg_bound is None else deg_bound, g)
    return rep, hyperplane_check(rep)


def ci_verdict(job: JobSpec, q=None, dmax=None):
    """Complete-intersection verdict, or ``None`` when the module is not a
    resolution of ``Q/(f)``."""
    prep = prepare(job)
    m = prep.module
    if not isinstance(m, DGEModuleData):
        return None
    try:
        return is_complete_intersection(m, q or job.q, job.dmax if dmax is None else dmax)
    except ValueError:
        return None
