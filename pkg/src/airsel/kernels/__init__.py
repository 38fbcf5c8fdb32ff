"""Backend selection for the hot coordinate-sweep kernels.

The compiled Cython kernels are preferred; a numpy fallback with identical
semantics is used when the extension is missing. Set ``AIRSEL_BACKEND=python``
(or ``cython``) to force a choice, e.g. for the backend benchmark.
"""

import os

from . import _sweeps_py


def _select_backend():
    forced = os.environ.get("AIRSEL_BACKEND", "").strip().lower()
    if forced == "python":
        return _sweeps_py, "python"
    try:
        from . import _sweeps_cy
    except ImportError:
        if forced == "cython":
            raise ImportError(
                "AIRSEL_BACKEND=cython but the compiled kernels are not built"
            )
        return _sweeps_py, "python"
    return _sweeps_cy, "cython"


_impl, BACKEND = _select_backend()

box_lasso_cd = _impl.box_lasso_cd
gs_qp_sweep = _impl.gs_qp_sweep
fista_sweep = _impl.fista_sweep


def available_backends():
    """Names of importable kernel backends ('python' is always present)."""
    names = ["python"]
    try:
        from . import _sweeps_cy  # noqa: F401
        names.append("cython")
    except ImportError:
        pass
    return names


def get_backend(name):
    """Return the kernel module for an explicit backend name."""
    if name == "python":
        return _sweeps_py
    if name == "cython":
        from . import _sweeps_cy
        return _sweeps_cy
    raise ValueError(f"unknown kernel backend: {name!r}")
