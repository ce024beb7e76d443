"""Kernel backend selection.

The compiled extension is used when it was built; otherwise the pure-numpy
twins are loaded.  Set ``LORENTZISO_PURE=1`` to force the fallback.
"""
import os

if os.environ.get("LORENTZISO_PURE"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
pairwise_sum = _impl.pairwise_sum
l1_deviation_scan = _impl.l1_deviation_scan
lipschitz_excess = _impl.lipschitz_excess
inverse_power_moments = _impl.inverse_power_moments


def available_backends():
    """Return the importable kernel modules keyed by backend name."""
    from . import _kernels_py

    found = {"python": _kernels_py}
    try:
        from . import _kernels

        found["cython"] = _kernels
    except ImportError:
        pass
    return found
