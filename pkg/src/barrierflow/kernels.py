"""Select the float kernels: the compiled module if it was built, numpy otherwise."""

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # pragma: no cover - depends on the build
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def get(name=None):
    """Kernel module by name (``"cython"``/``"python"``), default the fastest available."""
    if name is None:
        return _compiled or _kernels_py
    if name == "python":
        return _kernels_py
    if name == "cython":
        if _compiled is None:
            raise RuntimeError("the compiled kernels are not built")
        return _compiled
    raise ValueError(f"unknown kernel backend {name!r}")
