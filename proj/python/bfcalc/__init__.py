"""Bernstein-function calculus checks on sectorial matrices."""

import json

from ._bfcalc import (
    BfcalcError,
    QuadratureError,
    SpecError,
    plot_kinds,
    suite_ids,
)
from . import _bfcalc

__all__ = [
    "BfcalcError",
    "QuadratureError",
    "SpecError",
    "check_inequality",
    "emit_plotdata",
    "hirsch_apply",
    "levy_apply",
    "plot_kinds",
    "psi",
    "run_suite",
    "subordinate_matrix",
    "suite_ids",
]


def _text(spec):
    return spec if isinstance(spec, str) else json.dumps(spec)


def run_suite(suite, seed=0, config=None, tol_scale=1.0, threads=0, timing=False):
    """Run a named suite. Returns (report dict, exit code)."""
    text, code = _bfcalc.run_suite(suite, seed, _text(config or {}), tol_scale, threads, timing)
    return json.loads(text), code


def emit_plotdata(report, kind):
    return _bfcalc.emit_plotdata(_text(report), kind)


def psi(spec, z):
    return _bfcalc.psi(_text(spec), complex(z))


def levy_apply(spec, A):
    return _bfcalc.levy_apply(_text(spec), A)


def hirsch_apply(spec, A):
    return _bfcalc.hirsch_apply(_text(spec), A)


def subordinate_matrix(family, A, t):
    return _bfcalc.subordinate_matrix(_text(family), A, t)


def check_inequality(id, spec, radii=64, angles=32):
    return json.loads(_bfcalc.check_inequality(id, _text(spec), radii, angles))
