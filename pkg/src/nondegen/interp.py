"""Certified interpolation engine.

Builds, in order of sophistication:

* ``peak_poly`` -- a monomial equal to 1 at a point p and certifiably
  small on a smaller disk, (z/p)^N with minimal N.
* ``jet_peak_poly`` -- a polynomial with a full prescribed jet at p and a
  certified disk bound, by the staged peak recursion.
* ``entire_interpolant`` -- a truncated interpolant hitting prescribed
  jets at finitely many sites outside a guard disk, with a per-term
  geometric bound ledger proving the scheme converges.
* ``dense_perturbation`` -- adds to a polynomial curve a certified-small
  correction whose jets at integer sites run through an explicit
  enumeration of Gaussian-rational tuples.

Everything is exact in exact mode: jet equalities are polynomial
identities and every recorded bound is a rational over-estimate compared
exactly against its budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import CertificateError, DegreeCapExceeded, PreconditionError
from .polynomials import (
    DEGREE_CAP,
    UniPoly,
    _exact_div,
    hermite_interpolate,
    sup_norm_bound,
)
from .scalars import RAT, Qi, abs2, is_exact, is_rational, rational, sqrt_lower


def _require_positive_real(x, name: str) -> None:
    if isinstance(x, (Qi, complex)):
        raise PreconditionError(f"{name} must be a positive real number")
    if not x > 0:
        raise PreconditionError(f"{name} must be positive")


def _eval_sparse(P: UniPoly, z):
    """Evaluate by summing nonzero monomials; cheap when P is sparse."""
    total = 0
    for k, c in enumerate(P.coeffs):
        if c:
            total = total + c * z**k
    return total


def _min_peak_exponent_sq(ratio2, bound2) -> int:
    """Smallest N >= 0 with ratio2**N < bound2 (needs ratio2 < 1).

    Works on squared quantities so exact callers can compare moduli of
    Gaussian rationals without leaving rational arithmetic.
    """
    if not ratio2 < 1:
        raise PreconditionError("peak point must lie outside the guard disk")
    acc = ratio2 - ratio2 + 1  # one, in the operand's own arithmetic
    n = 0
    while not acc < bound2:
        acc = acc * ratio2
        n += 1
        if n > DEGREE_CAP:
            raise DegreeCapExceeded(
                "peak exponent exceeds the degree cap; budget too small"
            )
    return n


def peak_poly(p, r, eps) -> UniPoly:
    """Peak (z/p)^N: equals 1 at p, sup-norm bound < eps on |z| <= r.

    N is minimal with (r/|p|)^N < eps; in exact mode the minimality
    comparison is an exact rational comparison of squares.
    """
    _require_positive_real(r, "guard radius")
    _require_positive_real(eps, "epsilon")
    if is_exact(p) and is_rational(r) and is_rational(eps):
        p2 = abs2(p)
        r2 = rational(r) ** 2
        if not p2 > r2:
            raise PreconditionError("|p| must exceed the guard radius")
        n = _min_peak_exponent_sq(r2 / p2, rational(eps) ** 2)
        inv = (RAT(1) if is_rational(p) else Qi(1)) / p
    else:
        pa = abs(complex(p))
        rf = float(r)
        if not pa > rf:
            raise PreconditionError("|p| must exceed the guard radius")
        n = _min_peak_exponent_sq((rf / pa) ** 2, float(eps) ** 2)
        inv = 1 / complex(p)
    return UniPoly.monomial(n, inv**n)


def jet_peak_stages(p, r, eps, jet: Sequence) -> list[UniPoly]:
    """Stage polynomials of the jet-prescribing recursion.

    Stage m corrects the m-th derivative at p with a term
    (a_m - P_{m-1}^(m)(p)) (z-p)^m / m! times a peak factor chosen so the
    stage adds less than eps/(d+1) to the certified disk bound; so stage m
    carries a bound below (m+1)/(d+1)*eps.
    """
    jet = tuple(jet)
    if not jet:
        raise PreconditionError("jet must have length >= 1")
    d = len(jet) - 1
    _require_positive_real(r, "guard radius")
    _require_positive_real(eps, "epsilon")
    exact = (
        is_exact(p)
        and is_rational(r)
        and is_rational(eps)
        and all(is_exact(a) for a in jet)
    )
    if exact:
        p2 = abs2(p)
        r2 = rational(r) ** 2
        if not p2 > r2:
            raise PreconditionError("|p| must exceed the guard radius")
        ratio2 = r2 / p2
        stage_budget = rational(eps) / (d + 1)
        inv = (RAT(1) if is_rational(p) else Qi(1)) / p
    else:
        pa = abs(complex(p))
        if not pa > float(r):
            raise PreconditionError("|p| must exceed the guard radius")
        ratio2 = (float(r) / pa) ** 2
        stage_budget = float(eps) / (d + 1)
        inv = 1 / complex(p)

    current = UniPoly.zero()
    stages = []
    fact = 1
    for m in range(d + 1):
        if m:
            fact *= m
        target = jet[m] - current.derivative(m)(p)
        if target:
            shift = UniPoly((-p, 1)) ** m
            if exact:
                corr = shift * (target * RAT(1, fact))
            else:
                corr = shift * (target / fact)
            uq = sup_norm_bound(corr, r)
            thr = stage_budget / uq
            n = _min_peak_exponent_sq(ratio2, thr * thr)
            current = current + corr * UniPoly.monomial(n, inv**n)
        stages.append(current)

    if exact:
        for k in range(d + 1):
            if current.derivative(k)(p) != jet[k]:
                raise CertificateError("jet condition failed in exact mode")
    return stages


def jet_peak_poly(p, r, eps, jet: Sequence) -> UniPoly:
    """Polynomial with prescribed jet at p and certified bound < eps on |z| <= r."""
    return jet_peak_stages(p, r, eps, jet)[-1]


# ---------------------------------------------------------------------
# site lists and interpolation certificates
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class SiteList:
    """Interpolation sites outside a guard disk.

    Invariants (validated): every |site| > guard_r, moduli nondecreasing,
    sites pairwise distinct.
    """

    sites: tuple
    guard_r: object

    def __post_init__(self):
        object.__setattr__(self, "sites", tuple(self.sites))
        _require_positive_real(self.guard_r, "guard radius")
        exact = self.mode == "exact"
        prev = None
        for g in self.sites:
            if exact:
                a2 = abs2(g)
                if not a2 > rational(self.guard_r) ** 2:
                    raise PreconditionError("site inside the guard disk")
                if prev is not None and a2 < prev:
                    raise PreconditionError("site moduli must be nondecreasing")
                prev = a2
            else:
                a = abs(complex(g))
                if not a > float(self.guard_r):
                    raise PreconditionError("site inside the guard disk")
                if prev is not None and a < prev:
                    raise PreconditionError("site moduli must be nondecreasing")
                prev = a
        for i in range(len(self.sites)):
            for j in range(i + 1, len(self.sites)):
                if self.sites[i] == self.sites[j]:
                    raise PreconditionError("sites must be pairwise distinct")

    @property
    def mode(self) -> str:
        if all(is_exact(g) for g in self.sites) and is_rational(self.guard_r):
            return "exact"
        return "float"

    def __len__(self) -> int:
        return len(self.sites)


@dataclass(frozen=True)
class InterpolantTerm:
    """One corrective term of the truncated interpolant."""

    poly: UniPoly  # the product peak * correction added at this step
    radius: object  # r_n of the certificate
    bound: object  # certified sup-norm over-estimate on |z| <= r_n


@dataclass(frozen=True)
class InterpolantCertificate:
    """Truncated interpolant plus its per-term geometric bound ledger."""

    interpolant: UniPoly
    terms: tuple
    jet_order: int
    budget: object
    n_max: int
    sites: SiteList

    def partial_sum(self, k: int) -> UniPoly:
        """Sum of the first k corrective terms."""
        acc = UniPoly.zero()
        for term in self.terms[:k]:
            acc = acc + term.poly
        return acc

    def total_bound(self):
        total = 0
        for term in self.terms:
            total = total + term.bound
        return total

    def verify(self, jets: Sequence[Sequence]) -> None:
        """Re-check every certificate condition; raise CertificateError."""
        exact = self.interpolant.mode == "exact" and self.sites.mode == "exact"
        if self.partial_sum(len(self.terms)) != self.interpolant:
            raise CertificateError("interpolant is not the sum of its terms")
        prev = rational(self.sites.guard_r) if exact else float(self.sites.guard_r)
        budget = rational(self.budget) if exact else float(self.budget)
        half = RAT(1, 2) if exact else 0.5
        cut = budget
        for n, term in enumerate(self.terms, start=1):
            if not term.radius > prev:
                raise CertificateError("certificate radii must increase")
            prev = term.radius
            cut = cut * half
            if not term.bound < cut:
                raise CertificateError(f"term {n} bound exceeds its budget")
            recomputed = sup_norm_bound(
                term.poly, term.radius, strictly_below=cut if exact else None
            )
            if not exact and not recomputed < cut:
                raise CertificateError(f"term {n} bound exceeds its budget")
        if not self.total_bound() < budget:
            raise CertificateError("total bound exceeds the budget")
        derivs = [self.interpolant.derivative(k) for k in range(self.jet_order + 1)]
        for j, jet in enumerate(jets[: self.n_max]):
            g = self.sites.sites[j]
            for k in range(self.jet_order + 1):
                got = derivs[k](g)
                if exact:
                    if got != jet[k]:
                        raise CertificateError(f"jet mismatch at site {j + 1}")
                else:
                    if abs(complex(got) - complex(jet[k])) > 1e-9 * (
                        1 + abs(complex(jet[k]))
                    ):
                        raise CertificateError(f"jet mismatch at site {j + 1}")


def _radius_schedule(site_list: SiteList, n_max: int) -> list:
    """Strictly increasing certified radii with guard < r_n < |site_n|.

    The preferred radius is the guard/site midpoint (guard + |site_n|)/2,
    which keeps r_n / |site_n| bounded near 1/2: essential, because the
    peak exponent of step n scales like log(residual) / log(|site_n|/r_n)
    and residuals at later sites grow with every earlier exponent.  Only
    when that midpoint would break strict monotonicity (site moduli that
    repeat or grow slowly) does the schedule fall back to the midpoint
    between r_{n-1} and |site_n|.

    Uses rational lower brackets of the site moduli so every inequality
    holds exactly in exact mode; brackets refine adaptively when a site
    hugs the guard circle.
    """
    exact = site_list.mode == "exact"
    radii = []
    if exact:
        guard = rational(site_list.guard_r)
        r_prev = guard
        m_prev = guard
        for g in site_list.sites[:n_max]:
            a2 = abs2(g)
            scale = 1 << 24
            m = sqrt_lower(a2, scale)
            while not m > r_prev:
                scale = scale * scale
                if scale > 1 << 3000:
                    raise PreconditionError(
                        "site modulus too close to the guard radius"
                    )
                m = sqrt_lower(a2, scale)
            if m < m_prev:
                m = m_prev
            r_n = (guard + m) / 2
            if not r_n > r_prev:
                r_n = (r_prev + m) / 2
            radii.append(r_n)
            r_prev = r_n
            m_prev = m
    else:
        guard = float(site_list.guard_r)
        r_prev = guard
        m_prev = guard
        for g in site_list.sites[:n_max]:
            m = max(abs(complex(g)), m_prev)
            r_n = (guard + m) / 2
            if not r_n > r_prev:
                r_n = (r_prev + m) / 2
            radii.append(r_n)
            r_prev = r_n
            m_prev = m
    return radii


def entire_interpolant(
    sites: SiteList, jets: Sequence[Sequence], d: int, eps, n_max: int
) -> InterpolantCertificate:
    """Truncated interpolant hitting d-jets at the first n_max sites.

    Step n interpolates the residual jet at site n with a correction
    vanishing to order d at the earlier sites (so nothing already achieved
    is disturbed), then multiplies by a flat peak factor keeping the term's
    certified bound on |z| <= r_n below 2^-n * eps.
    """
    if not isinstance(sites, SiteList):
        raise PreconditionError("sites must be a SiteList")
    if d < 0:
        raise PreconditionError("jet order must be >= 0")
    if n_max < 0:
        raise PreconditionError("n_max must be >= 0")
    if len(jets) < n_max or len(sites) < n_max:
        raise PreconditionError("need at least n_max sites and jets")
    jets = [tuple(j) for j in jets]
    for j in jets[:n_max]:
        if len(j) != d + 1:
            raise PreconditionError("every jet must have length d+1")
    _require_positive_real(eps, "epsilon")
    exact = (
        sites.mode == "exact"
        and is_rational(eps)
        and all(all(is_exact(a) for a in j) for j in jets[:n_max])
    )

    radii = _radius_schedule(sites, n_max)
    budget = rational(eps) if exact else float(eps)
    half = RAT(1, 2) if exact else 0.5
    flat_jet = (1,) + (0,) * d
    binom = [[math.comb(k, i) for i in range(k + 1)] for k in range(d + 1)]

    def leibniz(avals, bvals):
        """Jets of a product from the factors' jets at the same point."""
        out = []
        for k in range(d + 1):
            acc = 0
            for i in range(k + 1):
                acc = acc + binom[k][i] * avals[i] * bvals[k - i]
            out.append(acc)
        return out

    # Jets of the running interpolant at every site, updated term by term
    # from the factored form peak * blocker * taylor (sparse and low-degree
    # evaluations); evaluating the assembled polynomial at each step would
    # be quadratically more expensive in the coefficient sizes.
    acc_jets = [[0] * (d + 1) for _ in range(n_max)]
    interpolant = UniPoly.zero()
    terms = []
    cut = budget
    # blocker: vanishes to order d at all sites before the current one, so
    # adding blocker * anything never disturbs jets already achieved
    blocker = UniPoly.constant(1)
    for n in range(1, n_max + 1):
        g = sites.sites[n - 1]
        r_n = radii[n - 1]
        cut = cut * half  # 2^-n * eps
        residual = tuple(
            jets[n - 1][k] - acc_jets[n - 1][k] for k in range(d + 1)
        )
        if any(residual):
            blocker_derivs = [blocker.derivative(k) for k in range(d + 1)]
            bjets = [blocker_derivs[k](g) for k in range(d + 1)]
            # Taylor coefficients of q with (blocker*q)-jets = residual at g;
            # blocker(g) != 0 since sites are distinct, so the triangular
            # system solves forward.  blocker*q is the unique minimal-degree
            # interpolant with zero d-jets at the earlier sites.
            qjets = []
            for k in range(d + 1):
                s = residual[k]
                for i in range(1, k + 1):
                    s = s - binom[k][i] * bjets[i] * qjets[k - i]
                qjets.append(_exact_div(s, bjets[0]))
            taylor = UniPoly.zero()
            shift = UniPoly.constant(1)
            fact = 1
            for k in range(d + 1):
                if k:
                    fact *= k
                    shift = shift * UniPoly((-g, 1))
                if qjets[k]:
                    taylor = taylor + shift * _exact_div(qjets[k], fact)
            correction = blocker * taylor
            uq = sup_norm_bound(correction, r_n, tight=False)
            # halve the peak budget: leaves room for the slack of the cheap
            # coefficient brackets used when certifying the product bound
            peak = jet_peak_poly(g, r_n, cut / (2 * uq), flat_jet)
            term_poly = peak * correction
            bound = sup_norm_bound(
                term_poly, r_n, strictly_below=cut if exact else None
            )
            if not bound < cut:
                raise CertificateError("term bound exceeded its budget")
            # update running jets at this and the later sites; at earlier
            # sites the blocker factor keeps every added jet at zero
            peak_derivs = [peak.derivative(k) for k in range(d + 1)]
            taylor_derivs = [taylor.derivative(k) for k in range(d + 1)]
            for j in range(n - 1, n_max):
                gj = sites.sites[j]
                pv = [_eval_sparse(peak_derivs[i], gj) for i in range(d + 1)]
                bv = [blocker_derivs[i](gj) for i in range(d + 1)]
                qv = [taylor_derivs[i](gj) for i in range(d + 1)]
                tv = leibniz(pv, leibniz(bv, qv))
                row = acc_jets[j]
                for k in range(d + 1):
                    row[k] = row[k] + tv[k]
        else:
            term_poly = UniPoly.zero()
            bound = RAT(0) if exact else 0.0
        if exact and list(acc_jets[n - 1]) != list(jets[n - 1]):
            raise CertificateError("jet condition failed in exact mode")
        interpolant = interpolant + term_poly
        terms.append(InterpolantTerm(term_poly, r_n, bound))
        blocker = blocker * UniPoly((-g, 1)) ** (d + 1)

    return InterpolantCertificate(
        interpolant=interpolant,
        terms=tuple(terms),
        jet_order=d,
        budget=budget,
        n_max=n_max,
        sites=sites,
    )


# ---------------------------------------------------------------------
# enumeration of Gaussian-rational tuples
# ---------------------------------------------------------------------

_CW_CACHE = [RAT(1)]  # Calkin-Wilf sequence, 1-based: q_{k+1} = 1/(2*floor(q_k) - q_k + 1)


def _calkin_wilf(k: int):
    """k-th positive rational of the Calkin-Wilf sequence (k >= 1)."""
    while len(_CW_CACHE) < k:
        q = _CW_CACHE[-1]
        _CW_CACHE.append(1 / (2 * (q.numerator // q.denominator) - q + 1))
    return _CW_CACHE[k - 1]


def rational_by_index(index: int):
    """Bijection from positive integers onto the rationals.

    1 -> 0; even 2k -> k-th Calkin-Wilf positive rational; odd 2k+1 -> its
    negative.
    """
    if index < 1:
        raise PreconditionError("enumeration index must be >= 1")
    if index == 1:
        return RAT(0)
    k, odd = divmod(index, 2)
    value = _calkin_wilf(k)
    return -value if odd else value


def _cantor_unpair(z: int) -> tuple[int, int]:
    """Inverse of the Cantor pairing (x+y)(x+y+1)/2 + y on pairs of naturals."""
    w = (math.isqrt(8 * z + 1) - 1) // 2
    t = w * (w + 1) // 2
    y = z - t
    return w - y, y


def _qi_by_index(index: int) -> Qi:
    """Bijection from positive integers onto the Gaussian rationals."""
    x, y = _cantor_unpair(index - 1)
    return Qi(rational_by_index(x + 1), rational_by_index(y + 1))


def enumerate_gaussian_rational(n: int, index: int) -> tuple:
    """index-th element (1-based) of a fixed bijective enumeration of Qi^n.

    Rationals come from the Calkin-Wilf walk interleaved with zero and the
    negatives; a Gaussian rational pairs its real/imaginary indices with
    the Cantor pairing; tuples unpair left-nested, peeling the last
    component off at each of the n-1 stages.
    """
    if n < 1:
        raise PreconditionError("dimension must be >= 1")
    if index < 1:
        raise PreconditionError("enumeration index must be >= 1")
    z = index - 1
    parts = []
    for _ in range(n - 1):
        z, last = _cantor_unpair(z)
        parts.append(last)
    parts.append(z)
    parts.reverse()
    return tuple(_qi_by_index(p + 1) for p in parts)


# ---------------------------------------------------------------------
# dense perturbation of polynomial curves
# ---------------------------------------------------------------------

def dense_perturbation(
    f: Sequence[UniPoly], R, eps, d: int, m: int
) -> tuple[tuple, tuple]:
    """Perturb the curve f so its d-jets run through enumerated targets.

    Sites are the integers ceil(R)+1, ..., ceil(R)+m.  The j-th target is
    the j-th tuple of the Gaussian-rational enumeration of Qi^(n(d+1)),
    laid out derivative-major: entry k*n + i is the k-th derivative of
    component i.  Returns (phi, certificates), phi = f + correction, with
    one certificate per component bounding the correction by eps on
    |z| <= R.
    """
    f = tuple(f)
    n = len(f)
    if n < 1:
        raise PreconditionError("curve needs at least one component")
    if m < 0:
        raise PreconditionError("site count must be >= 0")
    _require_positive_real(R, "radius")
    _require_positive_real(eps, "epsilon")
    if m == 0:
        return f, ()
    base = math.ceil(rational(R) if is_rational(R) else R)
    site_points = tuple(base + j for j in range(1, m + 1))
    sites = SiteList(site_points, R)
    targets = [enumerate_gaussian_rational(n * (d + 1), j) for j in range(1, m + 1)]

    phi = []
    certs = []
    for i in range(n):
        jets = []
        for j, g in enumerate(site_points):
            jets.append(
                tuple(
                    targets[j][k * n + i] - f[i].derivative(k)(g)
                    for k in range(d + 1)
                )
            )
        cert = entire_interpolant(sites, jets, d, eps, m)
        certs.append(cert)
        phi.append(f[i] + cert.interpolant)
    return tuple(phi), tuple(certs)


# ---------------------------------------------------------------------
# empirical jet coverage
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class CoverageReport:
    """Occupancy of a real grid over a jet-space box by sampled jet values."""

    cells_hit: int
    cells_total: int
    coverage_fraction: float
    max_gap: object  # Chebyshev cell distance to the nearest hit; None if unknowable
    samples_used: int
    samples_in_box: int


#: Cell-count ceiling above which the coverage report skips max_gap.
MAX_GAP_CELLS = 1 << 21


def jet_coverage_report(
    phi: Sequence[UniPoly], d: int, box: Sequence, grid: int, sample_count: int
) -> CoverageReport:
    """Fraction of grid cells hit by sampled jet values of the curve phi.

    Samples are t = 0, 1, ..., sample_count-1.  The box lists (lo, hi)
    bounds for each real axis of the jet space, derivative-major and with
    the real part before the imaginary part of every complex slot, so it
    has 2*n*(d+1) entries for an n-component curve.  ``max_gap`` is the
    largest Chebyshev distance (in cells) from any cell to a hit cell,
    reported only when the grid has at most MAX_GAP_CELLS cells and at
    least one hit.
    """
    import numpy as np

    if grid < 1:
        raise PreconditionError("grid must be >= 1")
    n = len(phi)
    axes = 2 * n * (d + 1)
    box = [tuple(b) for b in box]
    if len(box) != axes:
        raise PreconditionError(f"box must list bounds for {axes} real axes")
    for lo, hi in box:
        if not lo < hi:
            raise PreconditionError("box bounds must satisfy lo < hi")

    # Exact curves are sampled exactly at the integer sample points: their
    # coefficients routinely exceed float range, so values are compared
    # against the box and binned while still rational.
    exact = all(p.mode == "exact" for p in phi)
    if not exact:
        phi = [p.as_float() for p in phi]
    derivs = [[p.derivative(k) for p in phi] for k in range(d + 1)]
    if exact:
        bounds = [(rational(lo), rational(hi)) for lo, hi in box]
    else:
        bounds = box

    def axis_values(t):
        flat = []
        for k in range(d + 1):
            for p in derivs[k]:
                v = p(t) if exact else complex(p(float(t)))
                if exact:
                    v = v if isinstance(v, Qi) else Qi(v)
                    flat.append(v.re)
                    flat.append(v.im)
                else:
                    flat.append(v.real)
                    flat.append(v.imag)
        return flat

    hit_cells = set()
    in_box = 0
    for t in range(sample_count):
        x = axis_values(t)
        if all(lo <= v < hi for v, (lo, hi) in zip(x, bounds)):
            in_box += 1
            cell = tuple(
                min(int((v - lo) * grid / (hi - lo)), grid - 1)
                for v, (lo, hi) in zip(x, bounds)
            )
            hit_cells.add(cell)

    cells_total = grid**axes
    max_gap = None
    if hit_cells and cells_total <= MAX_GAP_CELLS:
        occ = np.zeros((grid,) * axes, dtype=bool)
        for cell in hit_cells:
            occ[cell] = True
        max_gap = 0
        while not occ.all():
            # one Chebyshev dilation, separable: widen along each axis in turn
            for ax in range(axes):
                lead = [slice(None)] * axes
                lag = [slice(None)] * axes
                lead[ax] = slice(0, grid - 1)
                lag[ax] = slice(1, grid)
                up = np.zeros_like(occ)
                dn = np.zeros_like(occ)
                up[tuple(lead)] = occ[tuple(lag)]
                dn[tuple(lag)] = occ[tuple(lead)]
                occ = occ | up | dn
            max_gap += 1

    return CoverageReport(
        cells_hit=len(hit_cells),
        cells_total=cells_total,
        coverage_fraction=len(hit_cells) / cells_total,
        max_gap=max_gap,
        samples_used=sample_count,
        samples_in_box=in_box,
    )
