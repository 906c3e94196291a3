import math

import numpy as np
import pytest
from conftest import constant_net, identity_net, nets
from hypothesis import given, settings, strategies as st
from oracles import (
    exact_inf_abs_1d,
    exact_lipschitz_1d,
    grid_max_quotient,
    mc_ball_integral,
    mc_box_double_integral,
    midpoint_sobolev_1d,
    sobolev_factor_branches,
)

from reluparam import (
    BoxDomain,
    DomainError,
    OrderViolation,
    ShallowNet,
    ball_integral,
    box_double_integral_bound,
    evaluate,
    flatten,
    gamma_fn,
    holder_comparison_factor,
    holder_norm_estimate,
    inf_abs_on_set,
    lipnorm,
    lipschitz_seminorm,
    param_lip_upper,
    param_lipnorm_upper,
    random_net,
    shrinking_slope_family,
    sobolev_comparison_factor,
    sobolev_slobodeckij_estimate,
)

UNIT1 = BoxDomain(0.0, 1.0, 1)
UNIT2 = BoxDomain(0.0, 1.0, 2)


def test_lipschitz_examples():
    assert lipschitz_seminorm(ShallowNet.zeros(2, 3), UNIT2)[0] == 0.0
    net = ShallowNet([[3.0, 4.0]], [-1.0], [2.0], 0.0)
    assert lipschitz_seminorm(net, UNIT2)[0] == 10.0
    # grid oracle converges to 10 from below
    assert 9.9 <= grid_max_quotient(net, 0.0, 1.0, 2, 41) <= 10.0 + 1e-12
    for n in (1, 3, 50):
        L, _ = lipschitz_seminorm(shrinking_slope_family(n, 2, 2), UNIT2)
        assert L == pytest.approx(1 / n, rel=1e-15)


@given(nets(max_d=1, max_h=6))
def test_lipschitz_matches_1d_oracle(net):
    box = BoxDomain(-1.0, 2.0, 1)
    L, _ = lipschitz_seminorm(net, box)
    want = exact_lipschitz_1d(net, -1.0, 2.0)
    scale = 1 + np.abs(net.v) @ np.abs(net.w[:, 0])
    assert abs(L - want) <= 1e-9 * scale


@given(nets(max_d=2, max_h=4))
@settings(max_examples=15)
def test_lipschitz_dominates_grid_quotients(net):
    box = BoxDomain(-1.0, 2.0, net.input_dim)
    L, _ = lipschitz_seminorm(net, box)
    n = 41 if net.input_dim == 2 else 401
    q = grid_max_quotient(net, -1.0, 2.0, net.input_dim, n)
    assert q <= L * (1 + 1e-9) + 1e-12


def test_inf_abs_examples():
    val, z = inf_abs_on_set(constant_net(7.0), UNIT1)
    assert val == 7.0 and UNIT1.contains(z)
    val, z = inf_abs_on_set(identity_net(), UNIT1)
    assert val == 0.0 and z[0] == pytest.approx(0.0, abs=1e-12)
    val, z = inf_abs_on_set(identity_net(), UNIT1, [[0.25], [0.75]])
    assert val == 0.25 and z[0] == 0.25


@given(nets(max_d=1, max_h=6))
def test_inf_abs_matches_1d_oracle(net):
    box = BoxDomain(-1.0, 2.0, 1)
    val, z = inf_abs_on_set(net, box)
    want = exact_inf_abs_1d(net, -1.0, 2.0)
    scale = 1e-9 * (1 + abs(net.c) + np.abs(net.v) @ (np.abs(net.b) + 2 * np.abs(net.w[:, 0])))
    assert abs(val - want) <= scale
    assert abs(abs(evaluate(net, z)) - want) <= scale
    assert -1.0 <= z[0] <= 2.0


@given(nets(max_d=3, max_h=4))
@settings(max_examples=25)
def test_inf_abs_below_samples(net):
    box = BoxDomain(-1.0, 2.0, net.input_dim)
    val, z = inf_abs_on_set(net, box)
    x = np.random.default_rng(3).uniform(-1, 2, (2000, net.input_dim))
    tol = 1e-9 * (1 + abs(net.c) + np.abs(net.v) @ (np.abs(net.b) + 2 * np.abs(net.w).sum(1)))
    assert val <= np.min(np.abs(evaluate(net, x))) + tol
    assert box.contains(z)


def test_lipnorm_examples():
    assert lipnorm(ShallowNet.zeros(1, 2), UNIT1).lipnorm_A == 0.0
    assert lipnorm(constant_net(7.0), UNIT1).lipnorm_A == 7.0
    rep = lipnorm(identity_net(), UNIT1, [[1.0]])
    assert rep.lipnorm_A == 2.0 and rep.inf_abs == 1.0 and rep.lip_seminorm == 1.0
    assert rep.lipnorm_A == rep.inf_abs + rep.lip_seminorm


def test_param_upper_examples():
    assert param_lip_upper(np.zeros(4)) == 0
    assert param_lip_upper([1.0, 2.0, 2.0]) == pytest.approx(9.0)
    assert param_lipnorm_upper(np.zeros(4), UNIT1) == 0
    assert param_lipnorm_upper([0.0, 1.0, 0.0, 0.0], UNIT1) == 4.0


@given(nets(max_h=5))
@settings(max_examples=30)
def test_parameter_upper_bounds(net):
    box = BoxDomain(-1.0, 2.0, net.input_dim)
    rep = lipnorm(net, box)
    p = flatten(net)
    assert rep.lip_seminorm <= param_lip_upper(p) * (1 + 1e-12) + 1e-12
    assert rep.lipnorm_A <= param_lipnorm_upper(p, box) * (1 + 1e-12) + 1e-12


def test_holder_examples():
    assert holder_norm_estimate(ShallowNet.zeros(1, 1), UNIT1, 0.5, 1.0, 11).value == 0.0
    assert holder_norm_estimate(constant_net(7.0), UNIT1, 0.5, 0.3, 11).value == 7.0
    est = holder_norm_estimate(identity_net(), UNIT1, 1.0, 1.0, 101)
    assert abs(est.value - 2.0) <= 1e-12


def test_holder_monotone_in_nested_grids(rng):
    for d in (1, 2):
        net = random_net(rng, d, 3)
        box = BoxDomain(-1.0, 2.0, d)
        vals = [holder_norm_estimate(net, box, 0.5, 0.5, n).value for n in (5, 9, 17, 33)]
        assert all(x <= y for x, y in zip(vals, vals[1:]))


@given(nets(max_d=2, max_h=3), st.floats(0, 1), st.floats(0, 1), st.floats(-1, 2))
@settings(max_examples=25)
def test_holder_comparison_on_grid(net, g1, g2, v):
    gamma, lam = min(g1, g2), max(g1, g2)
    box = BoxDomain(-1.0, 2.0, net.input_dim)
    lo = holder_norm_estimate(net, box, gamma, v, 9).value
    hi = holder_norm_estimate(net, box, lam, 2.0, 9).value
    fac = holder_comparison_factor(net.input_dim, -1.0, 2.0, gamma, lam)
    assert lo <= fac * hi * (1 + 1e-12) + 1e-12


def test_holder_high_dimension_sampled(rng):
    net = random_net(rng, 4, 2)
    est = holder_norm_estimate(net, BoxDomain(0, 1, 4), 0.5, 1.0, 5, n_pairs=2000, seed=1)
    assert est.method == "sampled" and est.value > 0
    again = holder_norm_estimate(net, BoxDomain(0, 1, 4), 0.5, 1.0, 5, n_pairs=2000, seed=1)
    assert again.value == est.value


def test_sobolev_examples():
    zero = sobolev_slobodeckij_estimate(ShallowNet.zeros(1, 1), UNIT1, 0.5, 2, 1000)
    assert zero.value == 0.0 and zero.lp_term == 0.0 and zero.seminorm_term == 0.0
    one = sobolev_slobodeckij_estimate(constant_net(1.0), UNIT1, 0.3, 2, 1000)
    assert one.lp_term == 1.0 and one.seminorm_term == 0.0


def test_sobolev_identity_against_quadrature():
    est = sobolev_slobodeckij_estimate(identity_net(), UNIT1, 0.5, 2, 1_000_000, seed=7)
    lp, semi = midpoint_sobolev_1d(lambda x: x, 0.0, 1.0, 0.5, 2, nodes=1000)
    # both integrands are known in closed form here: int x^2 = 1/3, kernel integrand = 1
    assert lp == pytest.approx(1 / math.sqrt(3), rel=1e-5)
    assert semi == pytest.approx(math.sqrt(1 - 1e-3), rel=1e-9)
    assert abs(est.value - (1 / math.sqrt(3) + 1.0)) <= 3 * est.stderr + 1e-12
    assert abs(est.value - (lp + 1.0)) <= 3 * est.stderr + 1e-5


def test_sobolev_nonlinear_against_quadrature():
    net = ShallowNet([[1.0], [-2.0]], [-0.3, 0.8], [2.0, 1.5], -0.4)
    est = sobolev_slobodeckij_estimate(net, UNIT1, 0.3, 1.5, 1_000_000, seed=2)
    f = lambda x: evaluate(net, x.reshape(-1, 1))  # noqa: E731
    lp, semi = midpoint_sobolev_1d(f, 0.0, 1.0, 0.3, 1.5, nodes=2000)
    assert abs(est.lp_term - lp) <= 3 * est.stderr + 1e-4
    assert abs(est.seminorm_term - semi) <= 3 * est.stderr + 1e-3


def test_sobolev_deterministic(rng):
    net = random_net(rng, 2, 3)
    box = BoxDomain(-1.0, 2.0, 2)
    e1 = sobolev_slobodeckij_estimate(net, box, 0.4, 2.0, 200_000, seed=11)
    e2 = sobolev_slobodeckij_estimate(net, box, 0.4, 2.0, 200_000, seed=11)
    assert e1 == e2
    e3 = sobolev_slobodeckij_estimate(net, box, 0.4, 2.0, 200_000, seed=12)
    assert e3.value != e1.value


def test_gamma_half_integers():
    assert gamma_fn(0.5) == math.sqrt(math.pi)
    assert gamma_fn(1) == 1.0 and gamma_fn(5) == 24.0
    for k in range(1, 40):
        assert gamma_fn(k / 2) == pytest.approx(math.gamma(k / 2), rel=1e-14)
    assert gamma_fn(2.3) == pytest.approx(math.gamma(2.3), rel=1e-15)


def test_ball_integral_trivial():
    assert ball_integral(2, 1.0, 0.0) == math.pi
    assert ball_integral(1, 2.0, 0.0) == 4.0
    assert ball_integral(3, 1.0, 0.0) == 4 * math.pi / 3
    with pytest.raises(DomainError):
        ball_integral(2, 1.0, -2.0)


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("gamma", [-0.5, 0.0, 1.0])
def test_ball_integral_monte_carlo(d, gamma):
    m, se = mc_ball_integral(d, 1.3, gamma, 1_000_000, seed=d)
    assert abs(m - ball_integral(d, 1.3, gamma)) <= 3 * se


def test_box_double_integral_examples():
    assert box_double_integral_bound(1, 0.0, 1.0, 0.0) == pytest.approx(2.0, rel=1e-15)
    assert box_double_integral_bound(2, 0.0, 1.0, -1.0) == pytest.approx(2 * math.sqrt(2) * math.pi,
                                                                         rel=1e-15)
    for d, g in ((1, 0.5), (2, -1.0), (3, 1.0)):
        r = box_double_integral_bound(d, 0.0, 2.0, g) / box_double_integral_bound(d, 0.0, 1.0, g)
        assert r == pytest.approx(2 ** (2 * d + g), rel=1e-13)
    with pytest.raises(DomainError):
        box_double_integral_bound(1, 0.0, 1.0, -1.0)


@pytest.mark.parametrize("d,gamma", [(1, 0.0), (2, -1.0), (2, 0.5), (3, -1.5)])
def test_box_double_integral_bounds_monte_carlo(d, gamma):
    m, se = mc_box_double_integral(d, 0.0, 1.0, gamma, 1_000_000, seed=5)
    assert m <= box_double_integral_bound(d, 0.0, 1.0, gamma) + 3 * se


def test_holder_factor_examples():
    assert holder_comparison_factor(3, 0.0, 5.0, 0.4, 0.4) == 1.0
    assert holder_comparison_factor(1, 2.0, 3.0, 0.1, 0.9) == 1.0
    assert holder_comparison_factor(4, 0.0, 2.0, 0.0, 1.0) == 4.0
    with pytest.raises(OrderViolation):
        holder_comparison_factor(1, 0.0, 1.0, 0.8, 0.2)


def test_sobolev_factor_examples():
    first, second = sobolev_factor_branches(1, 0.0, 1.0, 0.0, 1.0, 1.0, 2.0)
    assert first == 1.0 and second == pytest.approx(1.0, rel=1e-15)
    assert sobolev_comparison_factor(1, 0.0, 1.0, 0.0, 1.0, 1.0, 2.0) == pytest.approx(1.0,
                                                                                     rel=1e-15)
    vals = [sobolev_comparison_factor(2, 0.0, 1.0, 0.3, 0.3 + g, 1.0, 3.0)
            for g in (0.4, 0.2, 0.1, 0.05)]
    assert all(x < y for x, y in zip(vals, vals[1:]))
    with pytest.raises(OrderViolation):
        sobolev_comparison_factor(1, 0.0, 1.0, 0.5, 0.5, 1.0, 2.0)
    with pytest.raises(OrderViolation):
        sobolev_comparison_factor(1, 0.0, 1.0, 0.1, 0.5, 2.0, 2.0)


@given(st.integers(1, 4), st.floats(1.0, 3.0), st.floats(0, 0.9), st.floats(0.01, 1),
       st.floats(1, 3), st.floats(0.1, 3))
def test_sobolev_factor_matches_formula(d, width, gamma, dl, p, dq):
    lam, q = gamma + dl, p + dq
    got = sobolev_comparison_factor(d, 0.0, width, gamma, lam, p, q)
    first, second = sobolev_factor_branches(d, 0.0, width, gamma, lam, p, q)
    assert got == pytest.approx(max(first, second) ** ((q - p) / (q * p)), rel=1e-12)
    assert got >= 1.0 - 1e-12
