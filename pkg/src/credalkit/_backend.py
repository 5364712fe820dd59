"""Kernel selection: compiled extension when available, pure Python otherwise.

Set CREDALKIT_PURE=1 in the environment to force the pure kernel (useful
for timing comparisons; the benchmark script imports both directly).
"""

import os

from credalkit import _simplex_py

if os.environ.get("CREDALKIT_PURE"):
    _impl = _simplex_py
else:
    try:
        from credalkit import _simplex_ext as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _simplex_py

simplex_solve = _impl.simplex_solve


def kernel_backend():
    """Name of the active simplex kernel: "compiled" or "pure"."""
    return "compiled" if _impl.__name__.endswith("_simplex_ext") else "pure"
