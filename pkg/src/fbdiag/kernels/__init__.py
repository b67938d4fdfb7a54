"""Hot-path kernels with a compiled core and a pure-Python fallback.

The compiled extension is used when it has been built; set
``FBDIAG_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import vm_py

BACKEND = "python"
exec_code = vm_py.exec_code

if not os.environ.get("FBDIAG_PURE_PYTHON"):
    try:
        from ._vm import exec_code  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        pass

__all__ = ["exec_code", "prepare", "BACKEND", "vm_py"]


def prepare(ops, backend=None):
    """Convert a list of ints into the code buffer a backend expects."""
    from array import array

    if (backend or BACKEND) == "cython":
        return array("q", ops)
    return list(ops)
