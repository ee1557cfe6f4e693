"""Backend selection for the numerical kernels.

The compiled extension is preferred; the numpy fallback is used when it is
missing or when the environment variable ``G2SPECTRAL_PURE_PYTHON`` is ``1``.
``BACKEND`` names the implementation in use.
"""
import os

from . import _kernels_py

if os.environ.get("G2SPECTRAL_PURE_PYTHON") == "1":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

laurent_eval = _impl.laurent_eval
laurent_eval_many = _impl.laurent_eval_many
laurent_commutator = _impl.laurent_commutator
charpoly = _impl.charpoly

__all__ = ["BACKEND", "laurent_eval", "laurent_eval_many", "laurent_commutator", "charpoly"]
