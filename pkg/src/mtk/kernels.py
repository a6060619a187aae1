"""Backend selection for the lift-tree kernels.

The compiled module is used when it was built and ``MTK_PURE_PYTHON`` is not
set.  Calls whose numbers leave the compiled int64 range are retried in pure
Python, so results never depend on the backend.
"""

import os

from . import _kernels_py

try:
    if os.environ.get("MTK_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"


def _dispatch(name):
    pure = getattr(_kernels_py, name)
    if _compiled is None:
        return pure
    fast = getattr(_compiled, name)

    def call(*args):
        try:
            return fast(*args)
        except OverflowError:
            return pure(*args)

    call.__name__ = name
    call.__doc__ = pure.__doc__
    return call


act = _dispatch("act")
fixes = _dispatch("fixes")
brute_stabiliser = _dispatch("brute_stabiliser")
stabilisers_for_path = _dispatch("stabilisers_for_path")
