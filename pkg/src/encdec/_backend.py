"""Select the compiled kernels when available, else the numpy fallback.

Set ``ENCDEC_PURE_PYTHON=1`` to force the fallback.
"""

import logging
import os

from . import _kernels_py

log = logging.getLogger(__name__)

KERNEL_NAMES = (
    "pou_weights",
    "interp_stencil",
    "interp_eval",
    "cumulative_trapezoid",
    "monomial_design",
)


def _load():
    if os.environ.get("ENCDEC_PURE_PYTHON", "") not in ("", "0"):
        return _kernels_py, "python"
    try:
        from . import _kernels_c
    except ImportError:
        log.debug("compiled kernels unavailable, using numpy fallback")
        return _kernels_py, "python"
    return _kernels_c, "compiled"


kernels, BACKEND = _load()


def get_kernels(name=None):
    """Return the active kernel module, or a specific one by name."""
    if name is None:
        return kernels
    if name == "python":
        return _kernels_py
    if name == "compiled":
        from . import _kernels_c

        return _kernels_c
    raise ValueError(f"unknown backend {name!r}")
