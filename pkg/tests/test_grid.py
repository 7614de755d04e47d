import numpy as np
import pytest

import piezowave as pw
from piezowave.grid import (coupled_laplacian, grad, grad_norm_sq, l2_norm_sq,
                            lp_norm_pow, quadratic_form, sine_modes)


def test_grid_basics():
    g = pw.Grid1D(2.0, 5)
    assert g.dx == 0.5
    assert np.allclose(g.nodes, [0.0, 0.5, 1.0, 1.5, 2.0])
    assert g.weights.sum() == pytest.approx(2.0)


def test_grid_validation():
    with pytest.raises(ValueError):
        pw.Grid1D(-1.0, 11)
    with pytest.raises(ValueError):
        pw.Grid1D(1.0, 2)


def test_trapezoid_quadrature_exact_on_linear():
    g = pw.Grid1D(1.0, 11)
    assert np.dot(g.weights, g.nodes) == pytest.approx(0.5, abs=1e-14)


def test_sine_modes_satisfy_boundary_conditions(ref_grid):
    u = sine_modes(ref_grid, [1.0, -0.5, 0.25])
    assert u[0] == 0.0
    # slope at x = L vanishes analytically; the one-sided difference is O(dx)
    assert abs((u[-1] - u[-2]) / ref_grid.dx) < 0.1


def test_l2_norm_of_first_mode(ref_grid):
    # int_0^1 sin^2(pi x / 2) dx = 1/2
    u = sine_modes(ref_grid, [1.0])
    assert l2_norm_sq(u, ref_grid) == pytest.approx(0.5, rel=1e-4)


def test_grad_norm_of_first_mode(ref_grid):
    # int_0^1 (pi/2)^2 cos^2(pi x / 2) dx = pi^2 / 8
    u = sine_modes(ref_grid, [1.0])
    assert grad_norm_sq(u, ref_grid) == pytest.approx(np.pi**2 / 8, rel=1e-4)


def test_lp_norm_pow_rejects_bad_exponent(ref_grid):
    with pytest.raises(ValueError):
        lp_norm_pow(np.ones(ref_grid.nx), 0.5, ref_grid)


def test_quadratic_form_decomposition(ref_params, ref_grid, rng):
    v = sine_modes(ref_grid, rng.standard_normal(3))
    p = sine_modes(ref_grid, rng.standard_normal(3))
    q = quadratic_form(v, p, ref_grid, ref_params)
    gv = grad(v, ref_grid)
    gp = grad(p, ref_grid)
    mix = ref_params.gamma * gv - gp
    expected = ref_grid.dx * (ref_params.alpha1 * np.dot(gv, gv)
                              + ref_params.beta * np.dot(mix, mix))
    assert q == pytest.approx(expected, rel=1e-14)
    assert q >= 0.0


def test_summation_by_parts_identity(ref_params, ref_grid, rng):
    """<L(v,p), (v,p)>_w = -Q(v,p) must hold to roundoff: this pairing is
    what makes the semi-discrete energy law exact."""
    for _ in range(20):
        v = rng.standard_normal(ref_grid.nx)
        p = rng.standard_normal(ref_grid.nx)
        v[0] = p[0] = 0.0
        lv, lp_ = coupled_laplacian(v, p, ref_grid, ref_params)
        w = ref_grid.weights
        inner = np.dot(w, lv * v) + np.dot(w, lp_ * p)
        q = quadratic_form(v, p, ref_grid, ref_params)
        assert inner == pytest.approx(-q, rel=1e-10, abs=1e-10)


def test_laplacian_second_order_convergence(ref_params):
    """Interior truncation error of the coupled operator halves twice per
    grid refinement on a smooth compatible field."""
    errs = []
    for nx in (51, 101, 201):
        g = pw.Grid1D(1.0, nx)
        x = g.nodes
        v = np.sin(0.5 * np.pi * x)
        p = np.sin(1.5 * np.pi * x)
        lv, lp_ = coupled_laplacian(v, p, g, ref_params)
        exact_v = (-ref_params.alpha * (0.5 * np.pi) ** 2 * v
                   + ref_params.gamma * ref_params.beta
                   * (1.5 * np.pi) ** 2 * p)
        errs.append(np.max(np.abs(lv - exact_v)[1:-1]))
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.1)
    assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.1)


def test_discrete_poincare_positivity(ref_grid, rng):
    """||u||_2 <= c ||u_x||_2 with the computed discrete constant."""
    c = pw.poincare_constant(ref_grid)
    assert c > 0
    for _ in range(20):
        u = rng.standard_normal(ref_grid.nx)
        u[0] = 0.0
        lhs = l2_norm_sq(u, ref_grid)
        rhs = c * c * grad_norm_sq(u, ref_grid)
        assert lhs <= rhs * (1.0 + 1e-12)


def test_state_copy_and_scaled(ref_grid):
    s = pw.state_from_modes(ref_grid, [1.0], [0.5], [0.2], [0.1])
    c = s.copy()
    c.v[0] = 99.0
    assert s.v[0] == 0.0
    d = s.scaled(2.0)
    assert np.allclose(d.p, 2.0 * s.p)


def test_zero_state(ref_grid):
    z = pw.zero_state(ref_grid)
    assert l2_norm_sq(z.v, ref_grid) == 0.0
