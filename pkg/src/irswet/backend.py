"""Kernel backend selection.

The compiled extension is used when present; the numpy reference kernels are
the fallback.  Set IRSWET_BACKEND=python or IRSWET_BACKEND=cython to force a
choice (forcing cython raises if the extension was not built).
"""

from __future__ import annotations

import os

from . import _kernels_py

_choice = os.environ.get("IRSWET_BACKEND", "auto").strip().lower() or "auto"
if _choice not in {"auto", "cython", "python"}:
    raise ImportError(f"IRSWET_BACKEND must be auto, cython or python, not {_choice!r}")

if _choice == "python":
    _impl = _kernels_py
else:
    try:
        from . import _accel as _impl
    except ImportError as exc:
        if _choice == "cython":
            raise ImportError("IRSWET_BACKEND=cython but the compiled kernels "
                              "are not built; reinstall or drop the override") from exc
        _impl = _kernels_py

ao_sweep = _impl.ao_sweep
maxmin_sweep = _impl.maxmin_sweep


def active_backend() -> str:
    """Name of the kernel implementation in use: 'cython' or 'python'."""
    return "python" if _impl is _kernels_py else "cython"
