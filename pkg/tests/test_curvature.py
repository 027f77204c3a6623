import math

import numpy as np
import pytest

from lbverify.curvature import (
    alpha_deformation_sample,
    alpha_family_residual,
    covariant_divergence_radial,
    field_residual,
    field_residual_from_sample,
    ode_integrate_f,
    ricci_diagonal,
    ricci_diagonal_fd,
)
from lbverify.errors import DomainError, ParameterDomainError, ResolutionError
from lbverify.model import MetricSample, f_eval, metric_eval, params_from_xi
from lbverify.scalar_field import phi_prime_sq_constraint


def _metric_fn(params):
    def fn(r):
        m = metric_eval(params, r)
        return (-math.exp(m.u[0]), 1.0, math.exp(m.u[1]), math.exp(m.u[2]))

    return fn


def test_flat_metric_has_zero_ricci():
    zero = 0.0
    flat = MetricSample(
        r=0.0, f=0.0, f_p=0.0, f_pp=0.0,
        u=(zero,) * 3, u_p=(zero,) * 3, u_pp=(zero,) * 3,
        w=1.0, w_p=0.0, w_pp=0.0,
    )
    assert ricci_diagonal(flat) == (0.0, 0.0, 0.0, 0.0)


def test_dual_path_ricci_spot():
    params, _ = params_from_xi(3.0, 1.0)
    closed = ricci_diagonal(metric_eval(params, 0.3))
    fd = ricci_diagonal_fd(_metric_fn(params), 0.3)
    assert max(abs(float(c) - d) for c, d in zip(closed, fd)) < 1e-6


def test_dual_path_ricci_random_draws():
    rng = np.random.default_rng(61803)
    worst = 0.0
    for _ in range(100):
        lam = float(rng.uniform(0.75, 12.0))
        xi = float(rng.uniform(0.0, 2.0))
        params, _ = params_from_xi(lam, xi)
        r = float(rng.uniform(-params.a, params.a))
        closed = ricci_diagonal(metric_eval(params, r))
        fd = ricci_diagonal_fd(_metric_fn(params), r)
        worst = max(worst, max(abs(float(c) - d) for c, d in zip(closed, fd)))
    assert worst < 1e-6


def test_rr_component_reproduces_constraint():
    params, _ = params_from_xi(3.0, 1.0)
    for r in (-1.5, 0.0, 0.8):
        sample = metric_eval(params, r)
        _, r_rr, _, _ = ricci_diagonal(sample)
        assert abs((r_rr - params.lam) - phi_prime_sq_constraint(sample, params.lam)) < 1e-9


@pytest.mark.parametrize("lam,xi", [(0.75, 0.5), (3.0, 1.0), (12.0, 2.0)])
def test_exponent_system_reproduced(lam, xi):
    # 2 u_i'' + u_i' sum_j u_j' - 4 lambda = 0 on the closed form.
    params, _ = params_from_xi(lam, xi)
    grid = np.linspace(-2.0 * params.a, 2.0 * params.a, 1024)
    s = metric_eval(params, grid)
    total = s.u_p[0] + s.u_p[1] + s.u_p[2]
    for i in range(3):
        assert np.max(np.abs(2.0 * s.u_pp[i] + s.u_p[i] * total - 4.0 * lam)) < 1e-9


def test_field_residual_exact_solution():
    params, _ = params_from_xi(3.0, 1.0)
    assert field_residual(params, 0.0).max_abs < 1e-9


def test_field_residual_vacuum_member():
    # The xi = 0 member solves the vacuum equations with the constant term
    # exactly (within rounding): this is the scalar-free adjudication.
    params, _ = params_from_xi(3.0, 0.0)
    grid = np.linspace(-2.0, 2.0, 1024)
    assert field_residual(params, grid).max_abs < 1e-12


def test_field_residual_detects_corruption():
    params, _ = params_from_xi(3.0, 1.0)
    s = metric_eval(params, 0.4)
    corrupted = MetricSample(
        r=s.r, f=s.f, f_p=s.f_p, f_pp=s.f_pp,
        u=(s.u[0] * 1.01, s.u[1], s.u[2]),
        u_p=(s.u_p[0] * 1.01, s.u_p[1], s.u_p[2]),
        u_pp=(s.u_pp[0] * 1.01, s.u_pp[1], s.u_pp[2]),
        w=s.w, w_p=s.w_p, w_pp=s.w_pp,
    )
    assert field_residual_from_sample(corrupted, params.lam).max_abs > 1e-3


def test_ode_degenerate_interval():
    params, _ = params_from_xi(3.0, 1.0)
    rs, fs, fps = ode_integrate_f(params, 0.5, 0.5, 100)
    f0, fp0, _ = f_eval(params, 0.5)
    assert rs.tolist() == [0.5]
    assert fs[0] == f0 and fps[0] == fp0


def test_ode_matches_closed_form():
    params, _ = params_from_xi(3.0, 1.0)
    rs, fs, fps = ode_integrate_f(params, 0.0, 2.0, 10_000)
    f_end, fp_end, _ = f_eval(params, 2.0)
    assert abs(fs[-1] - f_end) < 1e-7
    assert abs(fps[-1] - fp_end) < 1e-7


def test_ode_convergence_order():
    params, _ = params_from_xi(3.0, 1.0)
    f_end, _, _ = f_eval(params, 2.0)
    steps = [100, 200, 400, 800]
    errors = []
    for n in steps:
        _, fs, _ = ode_integrate_f(params, 0.0, 2.0, n)
        errors.append(abs(fs[-1] - f_end))
    slope = np.polyfit(np.log([1.0 / n for n in steps]), np.log(errors), 1)[0]
    assert slope >= 3.5


def test_ode_too_few_steps():
    params, _ = params_from_xi(3.0, 1.0)
    with pytest.raises(ResolutionError):
        ode_integrate_f(params, 0.0, 1.0, 8)


def test_deformation_zero_reduces_to_base():
    params, _ = params_from_xi(3.0, 1.0)
    res = alpha_family_residual(params, (0.0, 0.0, 0.0), 0.4)
    assert res.max_abs < 1e-8
    sample = alpha_deformation_sample(params, (0.0, 0.0, 0.0), 0.4)
    base = metric_eval(params, 0.4)
    assert sample.u == base.u


def test_deformation_printed_form_breaks_equations_linearly():
    # The quoted deformation term is not a homogeneous solution on this
    # branch: the residual scales linearly with the deformation size.
    params, _ = params_from_xi(3.0, 1.0)
    eps_values = (1e-2, 1e-3, 1e-4)
    residuals = [
        alpha_family_residual(params, (e, -e, 0.0), -1.0, form="printed").max_abs
        for e in eps_values
    ]
    assert all(res > 0.0 for res in residuals)
    slope = np.polyfit(np.log(eps_values), np.log(residuals), 1)[0]
    assert slope == pytest.approx(1.0, abs=0.05)


def test_deformation_continued_form_solves_equations():
    # The analytic continuation of the same term is the true homogeneous
    # solution: any zero-sum deformation built with it stays a solution.
    params, _ = params_from_xi(3.0, 1.0)
    for eps in (1e-3, 0.1, 0.5):
        res = alpha_family_residual(params, (eps, -eps, 0.0), -1.0, form="arctan")
        assert res.max_abs < 1e-10
    res = alpha_family_residual(params, (0.3, 0.2, -0.5), 0.7, form="arctan")
    assert res.max_abs < 1e-10


def test_deformation_domain_error():
    params, _ = params_from_xi(3.0, 1.0)
    with pytest.raises(DomainError, match="admissible"):
        alpha_family_residual(params, (1.0, -1.0, 0.0), 0.0, form="printed")


def test_deformation_alpha_sum_enforced():
    params, _ = params_from_xi(3.0, 1.0)
    with pytest.raises(ParameterDomainError):
        alpha_family_residual(params, (1.0, 0.0, 0.0), -1.0)


def test_deformation_undefined_for_vacuum_member():
    params, _ = params_from_xi(3.0, 0.0)
    with pytest.raises(DomainError):
        alpha_family_residual(params, (1e-3, -1e-3, 0.0), -1.0)


def test_covariant_divergence_of_static_vector():
    # For sqrt|g| = r^2 and u^r = 1/r^2 the divergence vanishes.
    div = covariant_divergence_radial(lambda r: r * r, lambda r: 1.0 / (r * r), 2.0)
    assert abs(div) < 1e-10
