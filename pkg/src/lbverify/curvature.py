"""Independent curvature ground truth for the diagonal static ansatz.

Provides the diagonal Ricci tensor along two routes that share no code:

* closed forms in the exponents (u_i, u_i', u_i''), and
* a generic finite-difference assembly from the metric components alone
  (Christoffel contraction with numerically differentiated g_mu).

Sign convention (fixed, not an option): components are reported in the
convention for which the field equations of this family read
``R_mn = lambda g_mn + phi_,m phi_,n`` with signature (-,+,+,+).  That is
minus the sphere-positive convention, hence the leading signs below.
Off-diagonal components vanish identically for this ansatz (no Christoffel
symbol mixes r with two distinct non-radial axes), so only the four
diagonal entries are carried.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterDomainError, ResolutionError
from .model import MetricSample, SolutionParams, f_eval, metric_eval
from .numerics import FD_PAIR_STEP, central_diff, five_point_diffs, rk4
from .scalar_field import phi_prime_sq_constraint


@dataclass(frozen=True)
class FieldResidual:
    """Componentwise residual of the field equations at one radius."""

    r: float | np.ndarray
    res_tt: float | np.ndarray
    res_rr: float | np.ndarray
    res_phiphi: float | np.ndarray
    res_zz: float | np.ndarray
    max_abs: float


def ricci_diagonal(sample: MetricSample):
    """Closed-form diagonal Ricci (R_tt, R_rr, R_phiphi, R_zz)."""
    u1, u2, u3 = sample.u
    u1p, u2p, u3p = sample.u_p
    u1pp, u2pp, u3pp = sample.u_pp
    s = u1p + u2p + u3p
    # R_nn = (1/4) g_nn (2 u_n'' + u_n' s) for the non-radial axes; the tt
    # sign flips relative to phi/z because g_tt = -e^{u1} while the others
    # are +e^{u_i}.
    r_tt = -0.25 * np.exp(u1) * (2.0 * u1pp + u1p * s)
    r_rr = 0.5 * (u1pp + u2pp + u3pp) + 0.25 * (u1p**2 + u2p**2 + u3p**2)
    r_pp = 0.25 * np.exp(u2) * (2.0 * u2pp + u2p * s)
    r_zz = 0.25 * np.exp(u3) * (2.0 * u3pp + u3p * s)
    return r_tt, r_rr, r_pp, r_zz


def ricci_diagonal_fd(metric_fn: Callable[[float], tuple], r: float, h: float | None = None):
    """Diagonal Ricci from the metric components alone, by finite differences.

    ``metric_fn(r)`` must return the diagonal (g_tt, g_rr, g_phiphi, g_zz).
    First and second derivatives of each component come from one 5-point
    stencil with step ``eps**(1/5) * max(1, |r|)`` (second differences are
    rounding-dominated at the usual eps**(1/3) step).  Assembly is the
    generic Christoffel contraction for a diagonal r-dependent metric; the
    result is flipped to the convention documented in this module.
    """
    if h is None:
        h = FD_PAIR_STEP * max(1.0, abs(r))
    g = np.array(metric_fn(r), dtype=float)
    gp = np.empty(4)
    gpp = np.empty(4)
    for mu in range(4):
        gp[mu], gpp[mu] = five_point_diffs(lambda x, m=mu: metric_fn(x)[m], r, h)

    g1, g1p = g[1], gp[1]
    # Gamma^mu_{mu r} for all mu; Gamma^r_{nu nu} = -g_nu' / (2 g_rr) for nu != r.
    gamma_mur = gp / (2.0 * g)
    sum_gamma = float(np.sum(gamma_mur))

    ricci_std = np.empty(4)
    for nu in range(4):
        if nu == 1:
            d_gamma_rr_sum = float(np.sum(gpp / (2.0 * g) - gp**2 / (2.0 * g**2)))
            d_gamma_r_rr = gpp[1] / (2.0 * g1) - g1p**2 / (2.0 * g1**2)
            ricci_std[1] = (
                d_gamma_r_rr
                - d_gamma_rr_sum
                + sum_gamma * gamma_mur[1]
                - float(np.sum(gamma_mur**2))
            )
        else:
            gamma_r_nunu = -gp[nu] / (2.0 * g1)
            d_gamma_r_nunu = -gpp[nu] / (2.0 * g1) + gp[nu] * g1p / (2.0 * g1**2)
            ricci_std[nu] = (
                d_gamma_r_nunu + gamma_r_nunu * sum_gamma - 2.0 * gamma_mur[nu] * gamma_r_nunu
            )
    return tuple(-ricci_std)


def field_residual_from_sample(sample: MetricSample, lam: float) -> FieldResidual:
    """Residual of R_mn - lambda g_mn - phi_,m phi_,n for an arbitrary sample.

    phi'^2 is taken from the rr constraint, so the rr component vanishes by
    construction; the content of the check sits in the tt/phi/z components.
    """
    r_tt, r_rr, r_pp, r_zz = ricci_diagonal(sample)
    u1, u2, u3 = sample.u
    phi_p_sq = phi_prime_sq_constraint(sample, lam)
    res_tt = r_tt - lam * (-np.exp(u1))
    res_rr = r_rr - lam - phi_p_sq
    res_pp = r_pp - lam * np.exp(u2)
    res_zz = r_zz - lam * np.exp(u3)
    max_abs = float(
        max(
            np.max(np.abs(res_tt)),
            np.max(np.abs(res_rr)),
            np.max(np.abs(res_pp)),
            np.max(np.abs(res_zz)),
        )
    )
    return FieldResidual(sample.r, res_tt, res_rr, res_pp, res_zz, max_abs)


def field_residual(params: SolutionParams, r) -> FieldResidual:
    """Field-equation residual of the closed-form family member at r."""
    return field_residual_from_sample(metric_eval(params, r), params.lam)


def ode_integrate_f(params: SolutionParams, r0: float, r1: float, steps: int):
    """RK4 trajectory of f'' = 3 lambda - f'^2 started from the closed form.

    Returns (r_nodes, f_values, f_prime_values).  Fixed-step on purpose: the
    empirical convergence order of this integrator is itself a deliverable.
    """
    if steps < 16:
        raise ResolutionError(f"need at least 16 steps, got {steps}")
    f0, fp0, _ = f_eval(params, r0)
    if r0 == r1:
        return np.array([r0]), np.array([f0]), np.array([fp0])
    three_lam = 3.0 * params.lam

    def rhs(_r, y):
        return np.array([y[1], three_lam - y[1] ** 2])

    rs, ys = rk4(rhs, np.array([f0, fp0]), r0, r1, steps)
    return rs, ys[:, 0], ys[:, 1]


def alpha_deformation_sample(
    params: SolutionParams,
    alpha: tuple[float, float, float],
    r,
    form: str = "printed",
) -> MetricSample:
    """Metric sample with exponents u_i = base_i + alpha_i * T(r).

    ``form="printed"`` uses the quoted deformation term
    T = -(a / (3 |xi|)) artanh(|xi| e^{kr}), real only for |xi| e^{kr} < 1;
    ``form="arctan"`` uses its analytic continuation to this branch,
    T = -(a / (3 |xi|)) arctan(|xi| e^{kr}), which is the actual
    antiderivative of a multiple of e^{-f} here (T'' + f' T' = 0).
    """
    if abs(math.fsum(alpha)) > 1e-12:
        raise ParameterDomainError(f"alpha must sum to zero, got {alpha}")
    base = metric_eval(params, r)
    if all(a_i == 0.0 for a_i in alpha):
        return base
    if params.xi == 0.0:
        raise DomainError("the deformation term is undefined at xi = 0 (c1 = 0)")
    if form not in ("printed", "arctan"):
        raise ParameterDomainError(f"unknown deformation form {form!r}")
    k = params.k
    axi = abs(params.xi)
    m = axi * np.exp(k * np.asarray(r, dtype=float))
    if form == "printed":
        r_max = -math.log(axi) / k
        if np.any(m >= 1.0):
            raise DomainError(
                f"artanh argument |xi| e^(kr) >= 1; admissible interval is r < {r_max:.6g}"
            )
        t_val = -(params.a / (3.0 * axi)) * np.arctanh(m)
        t_p = -(m / axi) / (1.0 - m * m)  # equals -e^{kr}/(1 - xi^2 e^{2kr})
        t_pp = -k * (m / axi) * (1.0 + m * m) / (1.0 - m * m) ** 2
    else:
        t_val = -(params.a / (3.0 * axi)) * np.arctan(m)
        t_p = -(m / axi) / (1.0 + m * m)
        t_pp = -k * (m / axi) * (1.0 - m * m) / (1.0 + m * m) ** 2
    u = tuple(base.u[i] + alpha[i] * t_val for i in range(3))
    u_p = tuple(base.u_p[i] + alpha[i] * t_p for i in range(3))
    u_pp = tuple(base.u_pp[i] + alpha[i] * t_pp for i in range(3))
    return MetricSample(
        r=r,
        f=0.5 * (u[0] + u[1] + u[2]),
        f_p=base.f_p,
        f_pp=base.f_pp,
        u=u,
        u_p=u_p,
        u_pp=u_pp,
        w=np.exp(u[0]),
        w_p=np.exp(u[0]) * u_p[0],
        w_pp=np.exp(u[0]) * (u_pp[0] + u_p[0] ** 2),
    )


def alpha_family_residual(
    params: SolutionParams,
    alpha: tuple[float, float, float],
    r,
    form: str = "printed",
) -> FieldResidual:
    """Field residual of the alpha-deformed exponents (uniqueness experiment)."""
    return field_residual_from_sample(alpha_deformation_sample(params, alpha, r, form), params.lam)


def covariant_divergence_radial(
    sqrt_g_fn: Callable[[float], float],
    u_r_fn: Callable[[float], float],
    r: float,
    h: float | None = None,
) -> float:
    """(1/sqrt|g|) d/dr (sqrt|g| u^r) by central differences.

    For a static radial vector field this is the full covariant divergence.
    Pass a reduced step ``h`` when the flux has nearby singular structure
    (e.g. a congruence turning point).
    """
    flux = lambda x: sqrt_g_fn(x) * u_r_fn(x)
    return central_diff(flux, r, h) / sqrt_g_fn(r)
