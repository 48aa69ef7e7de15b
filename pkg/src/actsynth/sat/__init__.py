"""Incremental SAT: compiled kernel when available, pure Python otherwise.

Set ``ACTSYNTH_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pycdcl

PySolver = _pycdcl.Solver

if os.environ.get("ACTSYNTH_PURE_PYTHON"):
    CSolver = None
else:
    try:
        from ._cdcl import Solver as CSolver
    except ImportError:
        CSolver = None

Solver = CSolver if CSolver is not None else PySolver
BACKEND = Solver.backend

from .bridge import (  # noqa: E402
    Model,
    SolveContext,
    VarRegistry,
    exactly_one,
    minimize_true,
)

__all__ = [
    "BACKEND",
    "CSolver",
    "Model",
    "PySolver",
    "SolveContext",
    "Solver",
    "VarRegistry",
    "exactly_one",
    "minimize_true",
]
