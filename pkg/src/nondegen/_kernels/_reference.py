"""Pure numpy reference implementations of the hot kernels.

Semantically identical to the compiled versions in ``_native.pyx``; used
when the extension is not built, and by the benchmark for comparison.

The torus-line scan does not walk every grid index: indices satisfying
the tightest single angle condition cluster in small lattice blocks, so
only those candidates (edge-padded by one index) are tested with the full
admissibility predicate.  The candidate enumeration provably covers the
admissible set, and the final predicate is the same as the dense scan's,
so the selected index matches a plain scan of 0, +1, -1, +2, ...
"""

from __future__ import annotations

import numpy as np

_TWO_PI = 2.0 * np.pi
#: Below this index budget (or for very loose tolerances) scan densely.
_PLAIN_SCAN_LIMIT = 1024
_LOOSE_FRACTION = 0.45


def _admissible_mask(ts: np.ndarray, lam, theta, delta: float) -> np.ndarray:
    """Boolean mask of admissible t values, filtering frequency by frequency."""
    alive = np.arange(ts.shape[0])
    cur = ts
    for j in range(lam.shape[0]):
        d = np.remainder(lam[j] * cur - theta[j], _TWO_PI)
        d = np.minimum(d, _TWO_PI - d)
        keep = d < delta
        alive = alive[keep]
        cur = cur[keep]
        if alive.size == 0:
            break
    mask = np.zeros(ts.shape[0], dtype=bool)
    mask[alive] = True
    return mask


def _plain_scan(lam, theta, delta: float, step: float, k_max: int, chunk=1 << 16):
    for k0 in range(1, k_max + 1, chunk):
        ks = np.arange(k0, min(k0 + chunk, k_max + 1), dtype=np.float64)
        pos = _admissible_mask(ks * step, lam, theta, delta)
        neg = _admissible_mask(-ks * step, lam, theta, delta)
        hit = pos | neg
        if hit.any():
            i = int(np.argmax(hit))
            return k0 + i if pos[i] else -(k0 + i)
    return None


def _side_candidates(a0: float, c: float, dp: float, k_max: int) -> np.ndarray:
    """Ascending k >= 1 with a0*k + c within dp of an integer (edge-padded).

    Every k satisfying the condition has round(a0*k + c) among the
    enumerated lattice values, so the candidate set covers the admissible
    ones; the +-1 padding absorbs float rounding at block edges.
    """
    lo_val = a0 * 1 + c
    hi_val = a0 * k_max + c
    nu = np.arange(np.floor(lo_val - dp) - 1, np.ceil(hi_val + dp) + 2)
    k_lo = np.ceil((nu - c - dp) / a0).astype(np.int64) - 1
    k_hi = np.floor((nu - c + dp) / a0).astype(np.int64) + 1
    width = int(np.max(k_hi - k_lo, initial=0)) + 1
    ks = k_lo[:, None] + np.arange(width)[None, :]
    valid = (ks <= k_hi[:, None]) & (ks >= 1) & (ks <= k_max)
    out = ks[valid]
    return np.unique(out)  # sorted ascending, deduplicated


def scan_first_hit(lam, theta, delta: float, step: float, k_max: int):
    if bool(_admissible_mask(np.zeros(1), lam, theta, delta)[0]):
        return 0
    dp = delta / _TWO_PI
    if dp >= _LOOSE_FRACTION or k_max < _PLAIN_SCAN_LIMIT:
        return _plain_scan(lam, theta, delta, step, k_max)

    j0 = int(np.argmax(lam))
    a0 = lam[j0] * step / _TWO_PI
    b0 = theta[j0] / _TWO_PI

    pos = _side_candidates(a0, -b0, dp, k_max)
    neg = _side_candidates(a0, +b0, dp, k_max)
    ks = np.concatenate([pos, -neg])
    if ks.size == 0:
        return None
    mask = _admissible_mask(ks * step, lam, theta, delta)
    if not mask.any():
        return None
    cand = ks[mask]
    # plain-scan order: smallest |k| first, positive before negative
    order = 2 * np.abs(cand) + (cand < 0)
    return int(cand[int(np.argmin(order))])


def max_abs_on_circle(coeffs, r: float, m: int) -> float:
    z = r * np.exp(2j * np.pi * np.arange(m) / m)
    acc = np.zeros(m, dtype=np.complex128)
    for c in coeffs[::-1]:
        acc = acc * z + c
    return float(np.abs(acc).max())
