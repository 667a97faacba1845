"""Hot loops, compiled when the Cython extension is built.

Set ``LOCALSPEC_PURE_PYTHON=1`` to force the numpy fallback. ``BACKEND``
names the implementation that was selected at import.
"""

import os

from . import _pykernels

if os.environ.get("LOCALSPEC_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

sweep_prefixes = _impl.sweep_prefixes
enumerate_cuts = _impl.enumerate_cuts


def available_backends():
    """Map backend name to module for every importable implementation."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        found["cython"] = _ckernels
    return found
