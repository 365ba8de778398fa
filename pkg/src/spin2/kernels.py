"""Backend selection for the hot kernels.

The compiled extension is preferred when importable; SPIN2_BACKEND=python or
SPIN2_BACKEND=cython forces a choice (forcing cython raises if the extension
was not built).
"""

from __future__ import annotations

import os

from . import _pykernels

_requested = os.environ.get("SPIN2_BACKEND", "auto").lower()

if _requested == "python":
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        if _requested == "cython":
            raise ImportError(
                "SPIN2_BACKEND=cython but spin2._ckernels is not built; "
                "run `pip install -e . --no-build-isolation`"
            )
        _impl = _pykernels
        BACKEND = "python"

partition_sum = _impl.partition_sum
coeff_sums = _impl.coeff_sums
saw_ratio = _impl.saw_ratio
