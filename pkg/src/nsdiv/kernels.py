"""Kernel selection: the compiled extension if it imports, else pure Python.

Set ``NSDIV_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py as python

compiled = None
if not os.environ.get("NSDIV_PURE_PYTHON"):
    try:
        from . import _kernels_c as compiled
    except ImportError:
        compiled = None

active = compiled if compiled is not None else python
BACKEND = "cython" if active is compiled else "python"
