"""The explicit dense map from the disk to a polydisk, and its preimage solver.

Pipeline: the Cayley transform identifies the unit disk with the upper
half plane; a line Im z = tau maps under z -> (exp(i lam_1 z), ...) into a
real torus inside the polydisk, winding densely when the frequencies are
rationally independent; averaging consecutive pairs then reaches every
nonzero radius combination for a suitable tau.  The preimage solver runs
the argument forward: pick tau from the radius window, solve the pair
angles in closed form, and find the line parameter t by a simultaneous
angle search on the torus line.  Every returned preimage is verified by
direct evaluation before it is reported.

All of this is float-mode numerics; the certified-exactness machinery
lives in the interpolation modules.
"""

from __future__ import annotations

import cmath
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from ._kernels import scan_first_hit
from .errors import BudgetExhausted, CertificateError, PreconditionError

#: Strictness slack for open-set membership checks.
MEMBERSHIP_TOL = 1e-12

_TWO_PI = 2.0 * math.pi


def default_frequencies(count: int) -> tuple[float, ...]:
    """1 followed by square roots of the first primes: 1, sqrt2, sqrt3, sqrt5, ...

    Rationally independent by the classical square-root argument.
    """
    if count < 1:
        raise PreconditionError("need at least one frequency")
    out = [1.0]
    candidate = 2
    while len(out) < count:
        if all(candidate % p for p in range(2, int(math.isqrt(candidate)) + 1)):
            out.append(math.sqrt(candidate))
        candidate += 1
    return tuple(out)


@dataclass(frozen=True)
class FrequencyVector:
    """Positive frequencies, declared rationally independent.

    The default family (1 and square roots of distinct primes) carries the
    independence by construction; arbitrary user values are accepted as
    declared, since the property is not machine-checkable in general.
    """

    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if not self.values:
            raise PreconditionError("frequency vector must be nonempty")
        if any(v <= 0 for v in self.values):
            raise PreconditionError("frequencies must be positive")

    @classmethod
    def default(cls, count: int) -> "FrequencyVector":
        return cls(default_frequencies(count))

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


def _as_frequencies(lam, count: int) -> tuple[float, ...]:
    if lam is None:
        return default_frequencies(count)
    values = tuple(float(v) for v in lam)
    if len(values) != count:
        raise PreconditionError(f"expected {count} frequencies, got {len(values)}")
    if any(v <= 0 for v in values):
        raise PreconditionError("frequencies must be positive")
    return values


def check_disk_point(w) -> complex:
    """Validate strict membership |w| < 1 (with float slack)."""
    w = complex(w)
    if not abs(w) < 1 - MEMBERSHIP_TOL:
        raise PreconditionError(f"{w!r} is not strictly inside the unit disk")
    return w


def check_halfplane_point(z) -> complex:
    """Validate strict membership Im z > 0 (with float slack)."""
    z = complex(z)
    if not z.imag > MEMBERSHIP_TOL * max(1.0, abs(z)):
        raise PreconditionError(f"{z!r} is not strictly in the upper half plane")
    return z


# ---------------------------------------------------------------------
# the map itself
# ---------------------------------------------------------------------

def cayley_to_halfplane(w) -> complex:
    """Disk -> upper half plane, w -> -i (w+1)/(w-1)."""
    w = check_disk_point(w)
    return -1j * (w + 1) / (w - 1)


def halfplane_to_disk(z) -> complex:
    """Inverse Cayley transform, z -> (z-i)/(z+i)."""
    z = check_halfplane_point(z)
    return (z - 1j) / (z + 1j)


def torus_map(z, lam: Sequence[float]) -> tuple:
    """Component j is exp(i lam_j z); lands in the polydisk for Im z > 0."""
    z = check_halfplane_point(z)
    return tuple(cmath.exp(1j * l * z) for l in lam)


def torus_modulus(lam_j: float, tau: float) -> float:
    """Analytic modulus of a torus-map component on the line Im z = tau."""
    return math.exp(-lam_j * tau)


def pair_average(v: Sequence) -> tuple:
    """(v1+v2, v3+v4, ...)/2; halves the component count."""
    v = tuple(complex(x) for x in v)
    if len(v) % 2:
        raise PreconditionError("pair averaging needs an even component count")
    return tuple((v[2 * k] + v[2 * k + 1]) / 2 for k in range(len(v) // 2))


#: Frequencies of the fully explicit disk -> bidisk map.
EXPLICIT_FREQUENCIES = (1.0, math.sqrt(2.0), math.sqrt(3.0), math.sqrt(5.0))


def explicit_dense_map(w) -> tuple:
    """The closed-form dense map disk -> bidisk.

    Components (exp(zeta) + exp(sqrt2 zeta))/2 and
    (exp(sqrt3 zeta) + exp(sqrt5 zeta))/2 with zeta = (w+1)/(w-1); equal to
    pair_average(torus_map(cayley_to_halfplane(w), (1, sqrt2, sqrt3, sqrt5))).
    """
    w = check_disk_point(w)
    zeta = (w + 1) / (w - 1)
    return (
        (cmath.exp(zeta) + cmath.exp(math.sqrt(2.0) * zeta)) / 2,
        (cmath.exp(math.sqrt(3.0) * zeta) + cmath.exp(math.sqrt(5.0) * zeta)) / 2,
    )


# ---------------------------------------------------------------------
# preimage machinery
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class SearchBudget:
    """Limits for the preimage searches."""

    t_max: float = 2e5  # torus-line parameter range
    max_steps: int = 50_000_000  # hard cap on scanned grid points per search
    delta_shrinks: int = 3  # halvings of the angle tolerance on failure
    window_grid: int = 2048  # feasibility scan resolution for tau
    refine_points: int = 129  # local refinement density around a grid hit


def angle_solve(w, r: float, s: float) -> tuple[float, float]:
    """Angles with r e^(i alpha) + s e^(i beta) = 2w, by the law of cosines.

    Of the two mirror solutions returns the one with
    alpha - arg(2w) in [0, pi].  Requires r >= s > 0 and
    r - s <= |2w| <= r + s (up to float slack).
    """
    w = complex(w)
    if not (r >= s > 0):
        raise PreconditionError("need r >= s > 0")
    big = 2 * w
    length = abs(big)
    slack = 1e-12 * (r + s)
    if not (r - s - slack <= length <= r + s + slack):
        raise PreconditionError("|2w| outside the reachable annulus [r-s, r+s]")
    if length < 1e-300:
        # only reachable when r == s: opposite phases
        alpha, beta = 0.0, math.pi
    else:
        theta = cmath.phase(big)
        cos_a = (length * length + r * r - s * s) / (2 * length * r)
        cos_a = min(1.0, max(-1.0, cos_a))
        alpha = theta + math.acos(cos_a)
        rest = big - r * cmath.exp(1j * alpha)
        beta = cmath.phase(rest) if abs(rest) > 1e-300 else 0.0
    residual = abs(r * cmath.exp(1j * alpha) + s * cmath.exp(1j * beta) - big)
    if residual > 1e-10:
        raise CertificateError(f"angle re-substitution residual {residual:.3e}")
    if alpha > math.pi:
        alpha -= _TWO_PI
    return alpha, beta


def _window_feasible(tau: float, moduli, lam) -> bool:
    for k, m in enumerate(moduli):
        a = math.exp(-lam[2 * k] * tau)
        b = math.exp(-lam[2 * k + 1] * tau)
        if not ((a + b) / 2 > m > abs(a - b) / 2):
            return False
    return True


def radius_window_tau(moduli: Sequence[float], lam=None, budget: SearchBudget | None = None) -> float:
    """A tau making every target modulus reachable by its averaged pair.

    Feasibility of tau means, for every component k,
    (e^(-lam_{2k} tau) + e^(-lam_{2k-1} tau))/2 > m_k > |difference|/2.
    Found by scanning a fixed grid up to the first upper-constraint root
    and returning the midpoint of the feasible interval containing the
    first feasible grid point (deterministic).
    """
    budget = budget or SearchBudget()
    moduli = [float(m) for m in moduli]
    lam = _as_frequencies(lam, 2 * len(moduli))
    if any(not 0 < m < 1 for m in moduli):
        raise PreconditionError("target moduli must lie strictly in (0, 1)")

    # last tau at which every sum constraint can still hold (sums decrease)
    hi = 1.0
    for _ in range(200):
        if not all(
            (math.exp(-lam[2 * k] * hi) + math.exp(-lam[2 * k + 1] * hi)) / 2 > m
            for k, m in enumerate(moduli)
        ):
            break
        hi *= 2
    else:
        raise BudgetExhausted("no upper bound for the tau window found")
    lo = 0.0
    for _ in range(100):
        mid = (lo + hi) / 2
        if all(
            (math.exp(-lam[2 * k] * mid) + math.exp(-lam[2 * k + 1] * mid)) / 2 > m
            for k, m in enumerate(moduli)
        ):
            lo = mid
        else:
            hi = mid
    tau_sup = lo

    grid = budget.window_grid
    taus = [tau_sup * (i + 0.5) / grid for i in range(grid)]
    first = None
    for i, tau in enumerate(taus):
        if _window_feasible(tau, moduli, lam):
            first = i
            break
    if first is None:
        raise BudgetExhausted(
            "no feasible tau on the scan grid; targets hug degenerate radii"
        )

    def boundary(bad: float, good: float) -> float:
        for _ in range(60):
            mid = (bad + good) / 2
            if _window_feasible(mid, moduli, lam):
                good = mid
            else:
                bad = mid
        return (bad + good) / 2

    # lower edge of the feasible interval containing taus[first]
    lower = 0.0
    probe = taus[first]
    prev = taus[first - 1] if first > 0 else None
    if prev is not None:
        lower = boundary(prev, probe)
    else:
        # walk down; tiny tau is usually feasible, giving lower = 0
        cursor = probe
        for _ in range(48):
            cursor /= 2
            if not _window_feasible(cursor, moduli, lam):
                lower = boundary(cursor, probe)
                break
            probe = cursor
    # upper edge: walk the grid until infeasible (tau_sup itself is not)
    upper = tau_sup
    for j in range(first + 1, grid):
        if not _window_feasible(taus[j], moduli, lam):
            upper = boundary(taus[j], taus[j - 1])
            break
    return (lower + upper) / 2


def _worst_circle_distance(t: float, lam, theta) -> float:
    worst = 0.0
    for l, th in zip(lam, theta):
        d = math.fmod(l * t - th, _TWO_PI)
        if d < 0:
            d += _TWO_PI
        if d > math.pi:
            d = _TWO_PI - d
        if d > worst:
            worst = d
    return worst


def line_density_search(
    theta: Sequence[float],
    lam=None,
    delta: float = 0.1,
    t_max: float = 5e4,
    max_steps: int = 50_000_000,
) -> float:
    """Smallest |t| on the documented grid with all angles within delta.

    The grid has step delta / (2 max lam) and is scanned in the order
    0, +step, -step, +2 step, ...; ties between +t and -t go to +t.  The
    returned value is polished by a local two-stage refinement around the
    winning grid point (never leaving its admissible neighborhood).
    """
    theta = [float(x) for x in theta]
    lam = _as_frequencies(lam, len(theta))
    if not delta > 0:
        raise PreconditionError("delta must be positive")
    step = delta / (2 * max(lam))
    k_max = min(int(t_max / step), max_steps)
    k = scan_first_hit(lam, theta, delta, step, k_max)
    if k is None:
        raise BudgetExhausted(
            f"no admissible t with |t| <= {t_max} within {k_max} grid steps; "
            "increase the budget or delta"
        )
    t = k * step
    # two-stage deterministic refinement of the worst circle distance
    lam_arr = np.asarray(lam)
    theta_arr = np.asarray(theta)

    def batch_worst(ts):
        d = np.abs(np.remainder(np.outer(ts, lam_arr) - theta_arr, _TWO_PI))
        d = np.minimum(d, _TWO_PI - d)
        return d.max(axis=1)

    span = step
    best = t
    for _ in range(2):
        ts = np.linspace(best - span, best + span, 129)
        worst = batch_worst(ts)
        best = float(ts[int(np.argmin(worst))])
        span /= 64
    if _worst_circle_distance(best, lam, theta) <= _worst_circle_distance(t, lam, theta):
        t = best
    return t


@dataclass(frozen=True)
class PreimageResult:
    """A verified preimage: the solver never returns unchecked answers."""

    z: complex
    residual: float
    tau: float
    t: float
    delta: float
    image: tuple


def find_preimage(w: Sequence, eps: float, lam=None, budget: SearchBudget | None = None) -> PreimageResult:
    """Point z in the upper half plane with |pair_average(torus(z)) - w| < eps.

    tau comes from the radius window, the pair angles from the closed-form
    solve, and t from the torus-line search; the result is verified by
    direct evaluation before returning (the angle tolerance shrinks and
    retries on the rare float-edge failure).
    """
    budget = budget or SearchBudget()
    w = tuple(complex(x) for x in w)
    n = len(w)
    if n < 1:
        raise PreconditionError("target must have at least one component")
    lam = _as_frequencies(lam, 2 * n)
    moduli = [abs(x) for x in w]
    if any(not 0 < m < 1 for m in moduli):
        raise PreconditionError("target moduli must lie strictly in (0, 1)")

    tau = radius_window_tau(moduli, lam, budget)
    theta = [0.0] * (2 * n)
    for k in range(n):
        r = math.exp(-lam[2 * k] * tau)
        s = math.exp(-lam[2 * k + 1] * tau)
        if r >= s:
            alpha, beta = angle_solve(w[k], r, s)
        else:
            beta, alpha = angle_solve(w[k], s, r)
        theta[2 * k] = alpha
        theta[2 * k + 1] = beta

    delta = min(0.9 * eps, 1.5)
    for _ in range(budget.delta_shrinks + 1):
        t = line_density_search(theta, lam, delta, budget.t_max, budget.max_steps)
        z = complex(t, tau)
        image = pair_average(torus_map(z, lam))
        residual = max(abs(a - b) for a, b in zip(image, w))
        if residual < eps:
            return PreimageResult(
                z=z, residual=residual, tau=tau, t=t, delta=delta, image=image
            )
        delta /= 2
    raise BudgetExhausted("preimage verification failed within the retry budget")


# ---------------------------------------------------------------------
# empirical density certification
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class TargetOutcome:
    target: tuple
    ok: bool
    residual: float | None = None
    z: complex | None = None
    disk_point: complex | None = None
    reason: str | None = None


@dataclass(frozen=True)
class DensityReport:
    """Aggregated preimage successes over a grid of polydisk targets."""

    n: int
    frequencies: tuple
    explicit: bool
    eps: float
    grid: int
    total: int
    successes: int
    success_fraction: float
    max_residual: float | None
    outcomes: tuple
    elapsed_s: float


def density_certify(
    eps: float,
    grid: int,
    n: int | None = None,
    lam=None,
    explicit: bool = False,
    budget: SearchBudget | None = None,
    threads: int = 1,
) -> DensityReport:
    """Run find_preimage over a moduli x phase target grid and tally.

    Target moduli are equispaced over [0.1, 0.9] and phases over [0, 2pi),
    grid values each per component, in row-major product order.  Failures
    (budget exhaustions) are counted, never raised; every success carries
    its verified residual.
    """
    budget = budget or SearchBudget()
    if explicit:
        n = 2
        lam = EXPLICIT_FREQUENCIES
    if n is None:
        raise PreconditionError("need a component count n (or explicit=True)")
    lam = _as_frequencies(lam, 2 * n)
    if grid < 1:
        raise PreconditionError("grid must be >= 1")

    moduli = [0.1 + 0.8 * i / (grid - 1) for i in range(grid)] if grid > 1 else [0.5]
    phases = [_TWO_PI * j / grid for j in range(grid)]
    component_values = [m * cmath.exp(1j * p) for m in moduli for p in phases]
    targets = list(product(component_values, repeat=n))

    def attempt(target):
        try:
            res = find_preimage(target, eps, lam, budget)
        except (BudgetExhausted, PreconditionError) as e:
            return TargetOutcome(target=target, ok=False, reason=str(e))
        disk = halfplane_to_disk(res.z) if explicit else None
        return TargetOutcome(
            target=target,
            ok=True,
            residual=res.residual,
            z=res.z,
            disk_point=disk,
        )

    start = time.perf_counter()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = tuple(pool.map(attempt, targets))
    else:
        outcomes = tuple(attempt(t) for t in targets)
    elapsed = time.perf_counter() - start

    successes = sum(1 for o in outcomes if o.ok)
    residuals = [o.residual for o in outcomes if o.ok]
    return DensityReport(
        n=n,
        frequencies=tuple(lam),
        explicit=explicit,
        eps=float(eps),
        grid=grid,
        total=len(targets),
        successes=successes,
        success_fraction=successes / len(targets) if targets else 1.0,
        max_residual=max(residuals) if residuals else None,
        outcomes=outcomes,
        elapsed_s=elapsed,
    )
