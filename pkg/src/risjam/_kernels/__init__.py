"""Kernel backend selection: compiled Cython extension with a numpy fallback.

The compiled `_phase_sum` extension is used when importable; otherwise the
numpy implementation takes over transparently. Setting the environment
variable RISJAM_KERNEL to "numpy" or "cython" before import forces a backend
(forcing "cython" when the extension is missing raises at import). Both
backends compute the same sum; floating-point results may differ in the last
bits because the summation strategies differ.
"""

import os

from . import _numpy_fallback

try:
    from . import _phase_sum as _cython_impl
except ImportError:
    _cython_impl = None

_BACKENDS = {"numpy": _numpy_fallback}
if _cython_impl is not None:
    _BACKENDS["cython"] = _cython_impl

#: Currently selected backend name ("cython" or "numpy").
BACKEND = ""

#: sum_k amp[k]*exp(-1j*(psi[k]+theta[k])); rebound by select_backend().
coherent_sum = None


def available_backends():
    return tuple(sorted(_BACKENDS))


def select_backend(name):
    """Activate a kernel backend by name and return the name."""
    global BACKEND, coherent_sum
    if name not in _BACKENDS:
        raise ValueError(f"unknown kernel backend {name!r}; available: {available_backends()}")
    BACKEND = name
    coherent_sum = _BACKENDS[name].coherent_sum
    return BACKEND


_forced = os.environ.get("RISJAM_KERNEL", "").strip().lower()
if _forced:
    select_backend(_forced)
else:
    select_backend("cython" if _cython_impl is not None else "numpy")
