"""Backend selection for the graph kernels.

The compiled ``_speedups`` extension is used when it was built; otherwise the
pure-Python versions in ``_pure`` are used.  Setting ``MARKETMAP_PURE=1`` in
the environment forces the fallback.
"""
import os

from marketmap import _pure

if os.environ.get("MARKETMAP_PURE"):
    _impl = _pure
else:
    try:
        from marketmap import _speedups as _impl
    except ImportError:
        _impl = _pure

BACKEND = "python" if _impl is _pure else "cython"

betweenness = _impl.betweenness
closeness_sums = _impl.closeness_sums
core_numbers = _impl.core_numbers
kruskal = _impl.kruskal


def available_backends():
    """Map backend name to kernel module for every backend importable here."""
    backends = {"python": _pure}
    try:
        from marketmap import _speedups
    except ImportError:
        pass
    else:
        backends["cython"] = _speedups
    return backends
