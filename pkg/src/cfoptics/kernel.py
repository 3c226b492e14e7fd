"""Propagation-kernel backend selection.

At import time the compiled Cython extension is preferred; when it is not
built (source checkout without a compiler, unsupported platform) the
pure-Python kernel takes over with identical semantics.
"""

from . import _kernel_py

try:  # pragma: no cover - exercised indirectly via the selected backend
    from . import _kernel_cy  # type: ignore[attr-defined]
except ImportError:  # pragma: no cover
    _kernel_cy = None

_impl = _kernel_cy if _kernel_cy is not None else _kernel_py

run_plan = _impl.run_plan
BACKEND = _impl.BACKEND


def available_backends():
    """Map backend name to its ``run_plan`` callable, for benchmarks/tests."""
    backends = {"python": _kernel_py.run_plan}
    if _kernel_cy is not None:
        backends["cython"] = _kernel_cy.run_plan
    return backends
