# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels (see package docstring).

The torus-line scan enumerates only the lattice blocks of grid indices
that satisfy the tightest single angle condition (edge-padded), testing
each candidate with the full admissibility predicate; the two signed
candidate streams are merged in the plain-scan order 0, +1, -1, +2, ...
so the result matches a dense scan exactly.
"""

from libc.math cimport M_PI, ceil, floor, fmod, cos, sin, sqrt

DEF TWO_PI = 6.283185307179586476925286766559
DEF PLAIN_SCAN_LIMIT = 1024
DEF LOOSE_FRACTION = 0.45


cdef inline bint _admissible(const double[::1] lam, const double[::1] theta,
                             double delta, double t) noexcept nogil:
    cdef Py_ssize_t j
    cdef double d
    for j in range(lam.shape[0]):
        d = fmod(lam[j] * t - theta[j], TWO_PI)
        if d < 0.0:
            d += TWO_PI
        if d > M_PI:
            d = TWO_PI - d
        if d >= delta:
            return False
    return True


cdef inline long long _next_candidate(double a0, double c, double dp,
                                      long long k_from, long long k_max) noexcept nogil:
    """Smallest candidate k >= k_from, or k_max+1 when exhausted.

    Candidates are the union over integers nu of the padded index blocks
    [ceil((nu-c-dp)/a0)-1, floor((nu-c+dp)/a0)+1].
    """
    cdef double nu
    cdef long long start, end
    if k_from > k_max:
        return k_max + 1
    nu = floor(a0 * k_from + c - dp) - 1.0
    while True:
        start = <long long> ceil((nu - c - dp) / a0) - 1
        end = <long long> floor((nu - c + dp) / a0) + 1
        if end >= k_from:
            if start > k_max:
                return k_max + 1
            return k_from if k_from > start else start
        nu += 1.0


def scan_first_hit(const double[::1] lam, const double[::1] theta,
                   double delta, double step, long long k_max):
    cdef long long k, found = 0, kp, kn
    cdef bint hit = False
    cdef double dp, a0, b0, best
    cdef Py_ssize_t j, j0
    with nogil:
        if _admissible(lam, theta, delta, 0.0):
            hit = True
        elif delta / TWO_PI >= LOOSE_FRACTION or k_max < PLAIN_SCAN_LIMIT:
            for k in range(1, k_max + 1):
                if _admissible(lam, theta, delta, k * step):
                    hit = True
                    found = k
                    break
                if _admissible(lam, theta, delta, -k * step):
                    hit = True
                    found = -k
                    break
        else:
            dp = delta / TWO_PI
            j0 = 0
            best = lam[0]
            for j in range(1, lam.shape[0]):
                if lam[j] > best:
                    best = lam[j]
                    j0 = j
            a0 = lam[j0] * step / TWO_PI
            b0 = theta[j0] / TWO_PI
            kp = _next_candidate(a0, -b0, dp, 1, k_max)
            kn = _next_candidate(a0, b0, dp, 1, k_max)
            while kp <= k_max or kn <= k_max:
                if kp <= kn:  # ties go to the positive side
                    if _admissible(lam, theta, delta, kp * step):
                        hit = True
                        found = kp
                        break
                    kp = _next_candidate(a0, -b0, dp, kp + 1, k_max)
                else:
                    if _admissible(lam, theta, delta, -kn * step):
                        hit = True
                        found = -kn
                        break
                    kn = _next_candidate(a0, b0, dp, kn + 1, k_max)
    if hit:
        return found
    return None


def max_abs_on_circle(const double complex[::1] coeffs, double r, long long m):
    cdef double best = 0.0, ang, xr, xi, ar, ai, tr, mag
    cdef Py_ssize_t i, j, n = coeffs.shape[0]
    with nogil:
        for i in range(m):
            ang = TWO_PI * i / m
            xr = r * cos(ang)
            xi = r * sin(ang)
            ar = 0.0
            ai = 0.0
            for j in range(n - 1, -1, -1):
                tr = ar * xr - ai * xi + coeffs[j].real
                ai = ar * xi + ai * xr + coeffs[j].imag
                ar = tr
            mag = sqrt(ar * ar + ai * ai)
            if mag > best:
                best = mag
    return best
