"""Cayley/torus/pair-averaging pipeline and the preimage machinery."""

import cmath
import math
import random

import pytest

from nondegen.densedisk import (
    EXPLICIT_FREQUENCIES,
    SearchBudget,
    angle_solve,
    cayley_to_halfplane,
    default_frequencies,
    density_certify,
    explicit_dense_map,
    find_preimage,
    halfplane_to_disk,
    line_density_search,
    pair_average,
    radius_window_tau,
    torus_map,
    torus_modulus,
)
from nondegen.errors import BudgetExhausted, PreconditionError

TWO_PI = 2 * math.pi


def random_disk_point(rng, rmax=0.95):
    return cmath.rect(rng.uniform(0, rmax), rng.uniform(0, TWO_PI))


def circle_dist(a, b):
    d = math.fmod(a - b, TWO_PI)
    if d < 0:
        d += TWO_PI
    return min(d, TWO_PI - d)


# -- building blocks ----------------------------------------------------

def test_default_frequencies():
    assert default_frequencies(4) == (1.0, math.sqrt(2), math.sqrt(3), math.sqrt(5))
    assert default_frequencies(6)[5] == math.sqrt(11)


def test_cayley_values():
    assert cayley_to_halfplane(0) == pytest.approx(1j)
    assert cayley_to_halfplane(0.5) == pytest.approx(3j)


def test_cayley_roundtrip():
    rng = random.Random(1)
    for _ in range(100):
        w = random_disk_point(rng)
        z = cayley_to_halfplane(w)
        assert z.imag > 0
        assert abs(halfplane_to_disk(z) - w) < 1e-12


def test_cayley_rejects_boundary():
    with pytest.raises(PreconditionError):
        cayley_to_halfplane(1.0)
    with pytest.raises(PreconditionError):
        halfplane_to_disk(2.0 - 1j)


def test_torus_map_values():
    v = torus_map(1j, (1.0, math.sqrt(2)))
    assert v[0] == pytest.approx(math.exp(-1))
    assert v[1] == pytest.approx(math.exp(-math.sqrt(2)))


def test_torus_modulus_constant_on_lines():
    # |exp(i lam (t + i tau))| depends only on tau; compare the analytic
    # modulus against direct complex evaluation
    rng = random.Random(2)
    for _ in range(200):
        lam = rng.uniform(0.1, 4.0)
        tau = rng.uniform(0.05, 5.0)
        t = rng.uniform(-50, 50)
        direct = abs(cmath.exp(1j * lam * complex(t, tau)))
        assert abs(direct - torus_modulus(lam, tau)) < 1e-12


def test_torus_modulus_decreasing_in_tau():
    assert torus_modulus(1.3, 2.0) < torus_modulus(1.3, 1.0)


def test_pair_average():
    a, b = 0.3 + 0.1j, -0.2 + 0.4j
    assert pair_average((a, a, b, b)) == (a, b)
    assert pair_average((0.5, -0.5)) == (0.0,)
    with pytest.raises(PreconditionError):
        pair_average((1.0, 2.0, 3.0))


def test_explicit_map_value_at_zero():
    c1, c2 = explicit_dense_map(0)
    want1 = (math.exp(-1) + math.exp(-math.sqrt(2))) / 2
    want2 = (math.exp(-math.sqrt(3)) + math.exp(-math.sqrt(5))) / 2
    assert c1 == pytest.approx(want1, abs=1e-12)
    assert c2 == pytest.approx(want2, abs=1e-12)
    assert c1 == pytest.approx(0.3055, abs=5e-4)
    assert c2 == pytest.approx(0.1419, abs=5e-4)


def test_explicit_map_lands_in_bidisk():
    rng = random.Random(3)
    for _ in range(1000):
        w = random_disk_point(rng, rmax=0.999)
        c1, c2 = explicit_dense_map(w)
        assert abs(c1) < 1 and abs(c2) < 1


def test_explicit_map_equals_composition():
    rng = random.Random(4)
    for _ in range(1000):
        w = random_disk_point(rng)
        direct = explicit_dense_map(w)
        composed = pair_average(torus_map(cayley_to_halfplane(w), EXPLICIT_FREQUENCIES))
        assert abs(direct[0] - composed[0]) < 1e-12
        assert abs(direct[1] - composed[1]) < 1e-12


# -- angle solving -------------------------------------------------------

def test_angle_solve_symmetric_example():
    alpha, beta = angle_solve(0.5, 1.0, 1.0)
    assert alpha == pytest.approx(math.pi / 3)
    assert beta == pytest.approx(-math.pi / 3)


def test_angle_solve_outer_boundary():
    w = 0.35 * cmath.exp(0.7j)
    r, s = 0.4, 0.3
    alpha, beta = angle_solve(w, r, s)  # |2w| = r + s
    assert alpha == pytest.approx(0.7)
    assert beta == pytest.approx(0.7)


def test_angle_solve_inner_boundary():
    alpha, beta = angle_solve(0.05, 0.4, 0.3)  # |2w| = r - s, w real positive
    assert alpha == pytest.approx(0.0, abs=1e-9)
    assert beta == pytest.approx(math.pi, abs=1e-9)


def test_angle_solve_random_resubstitution():
    rng = random.Random(5)
    for _ in range(300):
        r = rng.uniform(0.1, 1.0)
        s = rng.uniform(0.01, r)
        length = rng.uniform(max(r - s, 0), r + s)
        w = cmath.rect(length / 2, rng.uniform(0, TWO_PI))
        alpha, beta = angle_solve(w, r, s)
        assert abs(r * cmath.exp(1j * alpha) + s * cmath.exp(1j * beta) - 2 * w) < 1e-10


def test_angle_solve_infeasible():
    with pytest.raises(PreconditionError):
        angle_solve(1.0, 0.4, 0.3)  # |2w| = 2 > r+s


# -- radius window -------------------------------------------------------

def test_radius_window_example():
    lam = (1.0, math.sqrt(2))
    tau = radius_window_tau([0.3], lam)
    # the returned tau is feasible
    a, b = math.exp(-tau), math.exp(-math.sqrt(2) * tau)
    assert (a + b) / 2 > 0.3 > abs(a - b) / 2
    # tau = 1 is feasible as well (0.3055 > 0.3 > 0.0624) and lies in the
    # same feasible interval: every tau between the two passes the window
    for frac in range(101):
        mid = tau + (1.0 - tau) * frac / 100
        a, b = math.exp(-mid), math.exp(-math.sqrt(2) * mid)
        assert (a + b) / 2 > 0.3 > abs(a - b) / 2


def test_radius_window_modulus_near_one_forces_tiny_tau():
    tau = radius_window_tau([0.99], (1.0, math.sqrt(2)))
    assert 0 < tau < 0.0101
    a, b = math.exp(-tau), math.exp(-math.sqrt(2) * tau)
    assert (a + b) / 2 > 0.99 > abs(a - b) / 2


def test_radius_window_rejects_zero_modulus():
    with pytest.raises(PreconditionError):
        radius_window_tau([0.0], (1.0, math.sqrt(2)))


# -- torus line search ----------------------------------------------------

def test_line_search_zero_angles():
    assert line_density_search([0.0, 0.0], (1.0, math.sqrt(2)), 0.3, 100.0) == 0.0


def test_line_search_matches_brute_force_oracle():
    lam = (1.0, math.sqrt(2))
    theta = (0.0, math.pi)
    delta = 0.5
    t = line_density_search(theta, lam, delta, 200.0)
    assert abs(t) <= 200
    assert all(circle_dist(l * t, th) < delta for l, th in zip(lam, theta))
    # brute-force oracle over the same documented grid
    step = delta / (2 * max(lam))
    oracle = None
    k = 0
    while oracle is None:
        k += 1
        for cand in (k * step, -k * step):
            if all(circle_dist(l * cand, th) < delta for l, th in zip(lam, theta)):
                oracle = cand
                break
    assert abs(t - oracle) <= step


def test_line_search_budget_exhaustion():
    with pytest.raises(BudgetExhausted):
        line_density_search([0.1, 2.0], (1.0, math.sqrt(2)), 1e-6, 1.0)


# -- preimages -------------------------------------------------------------

def test_find_preimage_single_component():
    res = find_preimage([0.3], 0.05, (1.0, math.sqrt(2)))
    assert res.residual < 0.05
    assert res.z.imag > 0
    direct = pair_average(torus_map(res.z, (1.0, math.sqrt(2))))
    assert abs(direct[0] - 0.3) < 0.05


def test_find_preimage_target_on_image():
    lam = (1.0, math.sqrt(2))
    z0 = complex(7.3, 0.8)
    target = pair_average(torus_map(z0, lam))
    assert 0 < abs(target[0]) < 1
    res = find_preimage(target, 1e-3, lam)
    assert res.residual < 1e-3


def test_find_preimage_rejects_zero_component():
    with pytest.raises(PreconditionError):
        find_preimage([0.0], 0.05, (1.0, math.sqrt(2)))


def test_density_certify_single_reachable_target():
    rep = density_certify(eps=0.05, grid=1, n=1, lam=(1.0, math.sqrt(2)))
    assert rep.total == 1
    assert rep.success_fraction == 1.0
    assert rep.max_residual < 0.05


def test_density_certify_budget_failures_counted_not_raised():
    tiny = SearchBudget(t_max=0.5, delta_shrinks=0)
    rep = density_certify(eps=1e-12, grid=2, n=1, lam=(1.0, math.sqrt(2)), budget=tiny)
    assert rep.success_fraction == 0.0
    assert all(not o.ok for o in rep.outcomes)
    assert all(o.reason for o in rep.outcomes)


def test_density_certify_threads_agree_with_serial():
    lam = (1.0, math.sqrt(2))
    a = density_certify(eps=0.05, grid=3, n=1, lam=lam, threads=1)
    b = density_certify(eps=0.05, grid=3, n=1, lam=lam, threads=4)
    assert [o.ok for o in a.outcomes] == [o.ok for o in b.outcomes]
    assert [o.z for o in a.outcomes] == [o.z for o in b.outcomes]
