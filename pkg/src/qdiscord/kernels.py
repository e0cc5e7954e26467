"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
numpy versions in ``_kernels_py`` are used. Setting ``QDISCORD_PURE_PYTHON=1``
forces the fallback.
"""

import os

from . import _kernels_py

VON_NEUMANN = _kernels_py.VON_NEUMANN
LINEAR = _kernels_py.LINEAR
TSALLIS = _kernels_py.TSALLIS

_impl = _kernels_py
BACKEND = "python"

if os.environ.get("QDISCORD_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        pass

spectra = _impl.spectra
objective_values = _impl.objective_values
objective_gradient = _impl.objective_gradient
pfaffian = _impl.pfaffian
