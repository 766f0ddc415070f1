"""Integer kernels behind the exact linear algebra.

The compiled extension is used when it was built; otherwise the pure-Python
implementation is loaded.  Set ``SYMTORSION_PURE_PYTHON=1`` to force the
fallback (the benchmark and the kernel parity tests do this per call via
:func:`load`).
"""
import importlib
import os

__all__ = ["BACKEND", "bareiss_det", "gauss_jordan", "load", "matmul"]


def load(name=None):
    """Return the kernel module ``"c"`` or ``"python"``; ``None`` picks the best available."""
    if name == "python":
        return importlib.import_module("symtorsion._kernels._pykernels")
    if name == "c":
        return importlib.import_module("symtorsion._kernels._ckernels")
    if os.environ.get("SYMTORSION_PURE_PYTHON"):
        return load("python")
    try:
        return load("c")
    except ImportError:
        return load("python")


_impl = load()
BACKEND = "c" if _impl.__name__.endswith("_ckernels") else "python"
gauss_jordan = _impl.gauss_jordan
bareiss_det = _impl.bareiss_det
matmul = _impl.matmul
