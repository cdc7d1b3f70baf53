"""Kernel backend selection.

The compiled extension is used when it was built; otherwise (or when the
environment variable ``SIMPLEXWIDTH_PURE_PYTHON`` is set) the numpy
implementation is used.  ``BACKEND`` names the active one.
"""

import os

from . import _pykernels as python

compiled = None
if not os.environ.get("SIMPLEXWIDTH_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled
    except ImportError:
        compiled = None

_active = compiled if compiled is not None else python
BACKEND = "cython" if compiled is not None else "python"

cell_accumulate = _active.cell_accumulate
circle_envelope = _active.circle_envelope

__all__ = ["BACKEND", "cell_accumulate", "circle_envelope", "compiled", "python"]
