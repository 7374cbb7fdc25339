"""Backend selection for the grid kernels.

The compiled ``_kernels_c`` module is used when it was built; otherwise, or
when the environment variable ``DUALCAVITY_PURE_PYTHON`` is set to ``1``, the
numpy implementation in ``_kernels_py`` is used. ``BACKEND`` names the choice.

``mode_sum`` always runs on numpy: it reduces to one BLAS matrix product,
which beats the compiled loop (see benchmarks/bench_kernels.py). The compiled
module only replaces ``maxwell_residual``.
"""
import os

from . import _kernels_py

if os.environ.get("DUALCAVITY_PURE_PYTHON") == "1":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels_c as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

mode_sum = _kernels_py.mode_sum
maxwell_residual = _impl.maxwell_residual

python_impl = _kernels_py


def compiled_impl():
    """Return the compiled module, or None if it was not built."""
    try:
        from . import _kernels_c
    except ImportError:
        return None
    return _kernels_c
