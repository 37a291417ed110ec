"""Hot numeric kernels: compiled core with a numpy fallback.

Two kernels live here because they dominate the runtime of the searches
and samplers built on top of them:

* ``scan_first_hit`` -- the torus-line grid scan used by the simultaneous
  angle search (scan order 0, +1, -1, +2, -2, ... in grid units).
* ``max_abs_on_circle`` -- Horner evaluation of |P| over equispaced points
  of a circle.

The Cython extension ``_native`` is selected at import when built;
otherwise the numpy reference implementation is used.  Both follow the
same documented scan order, so any given backend is deterministic.  (libm
and numpy trig can differ in the last ulp, so the two backends may in rare
borderline cases disagree on whether a grid point is admissible.)
"""

from __future__ import annotations

import numpy as np

from . import _reference

try:
    from . import _native
except ImportError:  # pragma: no cover - depends on build environment
    _native = None

BACKEND = "native" if _native is not None else "reference"
_impl = _native if _native is not None else _reference


def backends() -> dict:
    """Mapping of available backend name -> implementation module."""
    out = {"reference": _reference}
    if _native is not None:
        out["native"] = _native
    return out


def scan_first_hit(lam, theta, delta: float, step: float, k_max: int):
    """First grid index k (order 0, +1, -1, ...) with all angle conditions met.

    Admissibility of t = k*step: circle distance of lam[j]*t to theta[j]
    is < delta for every j.  Returns the signed index, or None.
    """
    lam = np.ascontiguousarray(lam, dtype=np.float64)
    theta = np.ascontiguousarray(theta, dtype=np.float64)
    if lam.shape != theta.shape:
        raise ValueError("frequency/angle arity mismatch")
    return _impl.scan_first_hit(lam, theta, float(delta), float(step), int(k_max))


def max_abs_on_circle(coeffs, r: float, m: int) -> float:
    """Max of |P| over m equispaced points on the circle of radius r."""
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    return float(_impl.max_abs_on_circle(coeffs, float(r), int(m)))
