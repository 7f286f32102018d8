"""Backend selection for the hot loops.

The compiled extension is used when it was built; otherwise the numpy
fallback is used.  Setting ``BISIMP_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"

if os.environ.get("BISIMP_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _kernels_py
else:
    _impl = _kernels_py

enumerate_perms = _impl.enumerate_perms
bfs_closure = _impl.bfs_closure
hom_violation = _impl.hom_violation

__all__ = ["BACKEND", "enumerate_perms", "bfs_closure", "hom_violation"]
