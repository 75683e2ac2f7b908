"""Kernel backend selection.

Imports the compiled extension when present, otherwise the pure-Python
twin.  Set TFM_KERNEL=python to force the fallback.
"""

from __future__ import annotations

import os

if os.environ.get("TFM_KERNEL") == "python":
    from tfm import _pykernel as _impl
else:
    try:
        from tfm import _speedups as _impl  # type: ignore[no-redef]
    except ImportError:
        from tfm import _pykernel as _impl  # type: ignore[no-redef]

BACKEND: str = _impl.BACKEND
bareiss_rank = _impl.bareiss_rank
scan_weight_masks = _impl.scan_weight_masks
