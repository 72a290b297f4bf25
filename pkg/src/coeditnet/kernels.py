"""Kernel backend selection.

The compiled extension is used when it was built; otherwise, or when
``COEDITNET_PURE_PYTHON=1`` is set, the numpy/pure-Python versions are used.
"""

import os

if os.environ.get("COEDITNET_PURE_PYTHON", "") not in ("", "0"):
    from ._kernels_py import brandes, fruchterman_reingold

    BACKEND = "python"
else:
    try:
        from ._kernels import brandes, fruchterman_reingold

        BACKEND = "cython"
    except ImportError:
        from ._kernels_py import brandes, fruchterman_reingold

        BACKEND = "python"

__all__ = ["BACKEND", "brandes", "fruchterman_reingold"]
