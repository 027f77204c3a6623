"""Radial timelike and null congruences of the isotropic line element
``ds^2 = dr^2 + w(r)(-dt^2 + dphi^2 + dz^2)``.

Covers the 4-velocity of marginally bound radial geodesics, the potential
whose gradient they follow, the expansion scalar and its proper-time rate
(evaluated both directly from w and via the quoted closed form in the scaled
variables x = w/E^2, b = |xi/E|), the focusing polynomial and its root scan,
the tortoise coordinate, and the null expansion rate.

Quoted numeric anchors (root values 0.377 / 1.178 and the radius factor
0.0273) are never used as inputs; they live in comparison reports only.
Turning points (w = E^2) are flags, not exceptions, in the expansion-rate
evaluations: the divergence there is genuine, and scans exclude a relative
guard band ``TURNING_GUARD_REL`` around them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainError,
    ForbiddenRegionError,
    ParameterDomainError,
    PoleError,
    SpecialFunctionError,
)
from .model import SolutionParams, w_eval
from .numerics import adaptive_simpson, bisect, bracket_sign_changes, fd_step
from .special_functions import hyp2f1

#: Scans skip radii with |E^2 - w| < TURNING_GUARD_REL * E^2.
TURNING_GUARD_REL = 1e-10

#: Root values quoted for the focusing polynomial, and the radius factor
#: quoted for the larger one; recorded verbatim for comparison reports.
QUOTED_FOCUSING_ROOTS = (0.377, 1.178)
QUOTED_ROOT_RADIUS_FACTOR = 0.0273

#: Mutual tolerance of the two tortoise evaluation channels.
TORTOISE_CHANNEL_TOL = 1e-8


@dataclass(frozen=True)
class CongruenceConfig:
    """Conserved energy per unit rest mass and radial direction (+1 out, -1 in)."""

    e_tilde: float
    direction: int = 1

    def __post_init__(self):
        if abs(self.e_tilde) < 1.0:
            raise ParameterDomainError(
                f"|e_tilde| must be >= 1 for a real radial velocity, got {self.e_tilde}"
            )
        if self.direction not in (1, -1):
            raise ParameterDomainError(f"direction must be +1 or -1, got {self.direction}")


@dataclass(frozen=True)
class FocusingVars:
    """Scaled variables x = w/E^2, b = |xi/E|, y = sqrt(x^6 - 4 b^2 x^3)."""

    x: float
    b: float
    y: float
    a: float


@dataclass(frozen=True)
class KinematicsSample:
    r: float
    theta: float
    dtheta_dtau: float
    channel: str
    status: str  # "ok", "turning", "forbidden"


@dataclass(frozen=True)
class ScaledRateComparison:
    """Quoted-closed-form versus direct focusing rate at one radius."""

    quoted: float
    direct: float
    difference: float


@dataclass(frozen=True)
class FocusingRootScan:
    b: float
    roots: tuple[float, ...]
    boundary_roots: tuple[float, ...]
    reduced_discriminant: float | None
    reduced_roots: tuple[float, ...]


@dataclass(frozen=True)
class RadiusCandidates:
    """Both readings of "the radius where the profile equals X"."""

    from_exponential: float
    from_w: tuple[float, ...]


def _w_scalar(params: SolutionParams, r: float) -> float:
    return float(w_eval(params, r)[0])


def four_velocity(params: SolutionParams, cfg: CongruenceConfig, r: float):
    """u^mu = (E/w, dir * sqrt(E^2/w - 1), 0, 0); exactly normalized to -1."""
    w = _w_scalar(params, r)
    e2 = cfg.e_tilde**2
    if w > e2:
        raise ForbiddenRegionError(f"w(r) = {w:.6g} > E^2 = {e2:.6g} at r = {r:.6g}")
    u_r = cfg.direction * math.sqrt(max(e2 / w - 1.0, 0.0))
    return (cfg.e_tilde / w, u_r, 0.0, 0.0)


def _sqrt_integrand(params: SolutionParams, cfg: CongruenceConfig, r: float) -> float:
    w = _w_scalar(params, r)
    val = cfg.e_tilde**2 / w - 1.0
    if val < -1e-14 * cfg.e_tilde**2:
        raise ForbiddenRegionError(f"w > E^2 at r = {r:.6g} inside the integration interval")
    return math.sqrt(max(val, 0.0))


def hypersurface_potential(
    params: SolutionParams, cfg: CongruenceConfig, r0: float, r1: float, tol: float = 1e-10
) -> float:
    """Radial part of the potential the congruence is orthogonal to.

    Normalized so that the full potential is E * t + (this value) and the
    covector relation u_alpha = -d_alpha(potential) holds; the gauge is
    potential(r0) = 0.  An endpoint at a turning point is handled with the
    substitution r = r_end -/+ s^2, which removes the square-root cusp.
    """
    if r0 == r1:
        return 0.0
    g = lambda r: _sqrt_integrand(params, cfg, r)
    e2 = cfg.e_tilde**2
    turn0 = abs(e2 - _w_scalar(params, r0)) <= 1e-9 * e2
    turn1 = abs(e2 - _w_scalar(params, r1)) <= 1e-9 * e2
    if turn0 and turn1:
        mid = 0.5 * (r0 + r1)
        return hypersurface_potential(params, cfg, r0, mid, tol) + hypersurface_potential(
            params, cfg, mid, r1, tol
        )
    if turn1:
        span = r1 - r0
        s_max = math.sqrt(abs(span))
        sgn = 1.0 if span > 0 else -1.0
        integral = adaptive_simpson(
            lambda s: g(r1 - sgn * s * s) * 2.0 * s, 0.0, s_max, tol
        ) * sgn
    elif turn0:
        span = r1 - r0
        s_max = math.sqrt(abs(span))
        sgn = 1.0 if span > 0 else -1.0
        integral = adaptive_simpson(
            lambda s: g(r0 + sgn * s * s) * 2.0 * s, 0.0, s_max, tol
        ) * sgn
    else:
        integral = adaptive_simpson(g, r0, r1, tol)
    return -cfg.direction * integral


def expansion_timelike(params: SolutionParams, cfg: CongruenceConfig, r: float) -> float:
    """Expansion scalar theta = dir * w^{-3/2} d/dr (w sqrt(E^2 - w)).

    Evaluates to dir * w'(2E^2 - 3w) / (2 w^{3/2} sqrt(E^2 - w)); both terms
    of the derivative are proportional to w', so theta vanishes wherever w
    is stationary.  At a turning point the value diverges and +/-inf is
    returned as the flag.
    """
    w, w_p, _ = (float(v) for v in w_eval(params, r))
    e2 = cfg.e_tilde**2
    q2 = e2 - w
    if q2 < 0.0:
        raise ForbiddenRegionError(f"w(r) = {w:.6g} > E^2 = {e2:.6g} at r = {r:.6g}")
    numerator = cfg.direction * w_p * (2.0 * e2 - 3.0 * w)
    if q2 == 0.0:
        if numerator == 0.0:
            return math.nan
        return math.copysign(math.inf, numerator)
    return numerator / (2.0 * w**1.5 * math.sqrt(q2))


def chain_rule_fd_step(params: SolutionParams, cfg: CongruenceConfig, r: float) -> float:
    """Step for finite-differencing the expansion in r.

    The derivatives of theta grow like powers of w'/(E^2 - w) toward a
    turning point, so the usual eps^(1/3) step must shrink with the distance
    to it for the chain-rule oracle to keep its relative accuracy.
    """
    w, w_p, _ = (float(v) for v in w_eval(params, r))
    q2 = cfg.e_tilde**2 - w
    h = fd_step(r)
    if q2 > 0.0 and w_p != 0.0:
        h = min(h, 1e-4 * q2 / abs(w_p))
    return min(h, 0.02 * params.a)


def expansion_rate(params: SolutionParams, cfg: CongruenceConfig, r: float) -> float:
    """Proper-time rate of the expansion, d theta / d tau = theta' u^r.

    Closed form in (w, w', w''), independent of the congruence direction:

        [w''(2E^2 - 3w) - 3 w'^2] / (2 w^2)
          - w'^2 (2E^2 - 3w)(3E^2 - 4w) / (4 w^3 (E^2 - w)).
    """
    w, w_p, w_pp = (float(v) for v in w_eval(params, r))
    e2 = cfg.e_tilde**2
    q2 = e2 - w
    if q2 < 0.0:
        raise ForbiddenRegionError(f"w(r) = {w:.6g} > E^2 = {e2:.6g} at r = {r:.6g}")
    first = (w_pp * (2.0 * e2 - 3.0 * w) - 3.0 * w_p**2) / (2.0 * w * w)
    if q2 == 0.0:
        tail = -(w_p**2) * (2.0 * e2 - 3.0 * w) * (3.0 * e2 - 4.0 * w)
        if tail == 0.0:
            return math.nan
        return math.copysign(math.inf, tail)
    second = -(w_p**2) * (2.0 * e2 - 3.0 * w) * (3.0 * e2 - 4.0 * w) / (4.0 * w**3 * q2)
    return first + second


def focusing_vars(params: SolutionParams, cfg: CongruenceConfig, r: float) -> FocusingVars:
    """Scaled variables of the quoted focusing-rate form at radius r."""
    w = _w_scalar(params, r)
    e2 = cfg.e_tilde**2
    x = w / e2
    b = abs(params.xi / cfg.e_tilde)
    y_sq = x**6 - 4.0 * b * b * x**3
    if y_sq < 0.0:
        raise DomainError(f"y^2 = {y_sq:.6g} < 0 at r = {r:.6g} (x = {x:.6g}, b = {b:.6g})")
    return FocusingVars(x=x, b=b, y=math.sqrt(y_sq), a=params.a)


def focusing_polynomial(x: float, b: float) -> float:
    """The quoted rational form in (x, y(x, b)) whose sign decides focusing.

    y = sqrt(x^6 - 4 b^2 x^3); raises DomainError for y^2 < 0 and PoleError
    where the denominator 3 (x^3 + y) vanishes.
    """
    y_sq = x**6 - 4.0 * b * b * x**3
    # Clamp cancellation noise at the y = 0 domain edge; genuine violations
    # sit far above this scale.
    noise = 8.0 * np.finfo(float).eps * (abs(x) ** 6 + 4.0 * b * b * abs(x) ** 3)
    if y_sq < -noise:
        raise DomainError(f"y^2 = {y_sq:.6g} < 0 at x = {x:.6g}, b = {b:.6g}")
    y = math.sqrt(max(y_sq, 0.0))
    denominator = 3.0 * (x**3 + y)
    if denominator == 0.0:
        raise PoleError(f"x^3 + y = 0 at x = {x:.6g}, b = {b:.6g}")
    numerator = (
        (27.0 * x * x - 45.0 * x + 20.0) * y
        - 36.0 * b * b * x * x
        - 46.0 * x**4
        + 27.0 * x**5
        + 64.0 * b * b * x
        + 20.0 * x**3
        - 32.0 * b * b
    )
    return numerator / denominator


def focusing_polynomial_reduced(x: float) -> float:
    """The b = 0 reduction (54 x^2 - 91 x + 40) / 6 (y = x^3 for x > 0)."""
    return (54.0 * x * x - 91.0 * x + 40.0) / 6.0


def expansion_rate_scaled(
    params: SolutionParams, cfg: CongruenceConfig, r: float
) -> ScaledRateComparison:
    """Quoted closed form (lambda/2) * poly / (x (1 - x)) next to the direct rate.

    Both numbers are returned; at x = 1 the quoted form diverges through
    1/(1 - x) exactly where the direct rate diverges through the turning
    point, and both come back as inf flags.
    """
    fv = focusing_vars(params, cfg, r)
    poly = focusing_polynomial(fv.x, fv.b)
    denom = fv.x * (1.0 - fv.x)
    if denom == 0.0:
        quoted = math.copysign(math.inf, poly) if poly != 0.0 else math.nan
    else:
        quoted = 0.5 * params.lam * poly / denom
    direct = expansion_rate(params, cfg, r)
    return ScaledRateComparison(quoted=quoted, direct=direct, difference=quoted - direct)


def focusing_polynomial_roots(b: float, brackets: int = 4096) -> FocusingRootScan:
    """Bracketing + bisection root scan over the quoted domain x in (cbrt(4b^2), 1).

    For b = 0 the reduced quadratic 54 x^2 - 91 x + 40 is additionally
    solved in closed form and its discriminant reported.  An empty root list
    is a valid result; zeros sitting exactly on the domain boundary are
    reported separately.
    """
    if not 0.0 <= b <= 0.5:
        raise ParameterDomainError(f"b must lie in [0, 1/2], got {b}")
    lo = (4.0 * b * b) ** (1.0 / 3.0)
    hi = 1.0
    roots: list[float] = []
    boundary: list[float] = []
    if lo < hi:
        # Stay clear of x = 0 where the b = 0 expression is 0/0.
        scan_lo = lo if b > 0.0 else lo + (hi - lo) * 1e-9
        fn = lambda x: focusing_polynomial(x, b)
        for blo, bhi in bracket_sign_changes(fn, scan_lo, hi, brackets):
            root = blo if blo == bhi else bisect(fn, blo, bhi)
            if lo < root < hi:
                roots.append(root)
            else:
                boundary.append(root)
    for edge in {lo, hi}:
        if b > 0.0 or edge > 0.0:
            if abs(focusing_polynomial(edge, b)) <= 1e-12:
                boundary.append(edge)
    reduced_disc = None
    reduced_roots: tuple[float, ...] = ()
    if b == 0.0:
        reduced_disc = 91.0**2 - 4.0 * 54.0 * 40.0
        if reduced_disc >= 0.0:
            sq = math.sqrt(reduced_disc)
            reduced_roots = ((91.0 - sq) / 108.0, (91.0 + sq) / 108.0)
    return FocusingRootScan(
        b=b,
        roots=tuple(sorted(set(roots))),
        boundary_roots=tuple(sorted(set(boundary))),
        reduced_discriminant=reduced_disc,
        reduced_roots=reduced_roots,
    )


def radius_candidates(
    params: SolutionParams, X: float, half_width_in_a: float = 2.0, brackets: int = 4096
) -> RadiusCandidates:
    """Radii from both readings of "the profile equals X".

    Channel one solves e^{6r/a} = X, giving r = (a/6) ln X; channel two
    solves w(r) = X by bracketing bisection on the default window and may
    return zero, one or two radii (empty means no solution there).
    """
    if not X > 0.0:
        raise ParameterDomainError(f"X must be positive, got {X}")
    from_exponential = params.a / 6.0 * math.log(X)
    half = half_width_in_a * params.a
    fn = lambda r: _w_scalar(params, r) - X
    w_roots = []
    for blo, bhi in bracket_sign_changes(fn, -half, half, brackets):
        w_roots.append(blo if blo == bhi else bisect(fn, blo, bhi))
    return RadiusCandidates(from_exponential=from_exponential, from_w=tuple(sorted(set(w_roots))))


def tortoise_series(params: SolutionParams, r: float) -> float:
    """Tortoise coordinate a e^{r/a} F(1/6, 1/3; 7/6; -xi^2 e^{6r/a}).

    This is the antiderivative of 1/sqrt(w) that vanishes as r -> -inf.
    """
    a = params.a
    z = -params.xi**2 * math.exp(6.0 * r / a)
    return a * math.exp(r / a) * hyp2f1(1.0 / 6.0, 1.0 / 3.0, 7.0 / 6.0, z)


def tortoise_quadrature(params: SolutionParams, r: float, tol: float = 1e-11) -> float:
    """Tortoise coordinate as int_0^r dr'/sqrt(w) plus the r = 0 constant."""
    constant = params.a * hyp2f1(1.0 / 6.0, 1.0 / 3.0, 7.0 / 6.0, -params.xi**2)
    if r == 0.0:
        return constant
    integral = adaptive_simpson(lambda x: 1.0 / math.sqrt(_w_scalar(params, x)), 0.0, r, tol)
    return constant + integral


def tortoise(params: SolutionParams, r: float) -> float:
    """Tortoise coordinate with the two evaluation channels cross-checked.

    Returns the series value after verifying the quadrature channel agrees
    to TORTOISE_CHANNEL_TOL (absolute, scaled by max(1, |r*|)).
    """
    series_val = tortoise_series(params, r)
    quad_val = tortoise_quadrature(params, r)
    scale = max(1.0, abs(series_val))
    if abs(series_val - quad_val) > TORTOISE_CHANNEL_TOL * scale:
        raise SpecialFunctionError(
            f"tortoise channels disagree at r = {r:.6g}: "
            f"series {series_val!r} vs quadrature {quad_val!r}"
        )
    return series_val


def null_rate_bracket(params: SolutionParams, r: float) -> float:
    """The energy-independent bracket w'' - (3/2) w'^2 / w of the null rate."""
    w, w_p, w_pp = (float(v) for v in w_eval(params, r))
    return w_pp - 1.5 * w_p * w_p / w


def null_rate(params: SolutionParams, cfg: CongruenceConfig, r: float) -> float:
    """Null expansion rate as quoted: (1/w) sqrt(E^2 - w) [w'' - (3/2) w'^2 / w].

    Kept exactly as printed, including the energy factor (an affine-null
    congruence has no rest-mass normalization; the bracket alone carries the
    energy-independent content and is exposed separately).
    """
    w, _, _ = (float(v) for v in w_eval(params, r))
    e2 = cfg.e_tilde**2
    if w > e2:
        raise ForbiddenRegionError(f"w(r) = {w:.6g} > E^2 = {e2:.6g} at r = {r:.6g}")
    return math.sqrt(e2 - w) / w * null_rate_bracket(params, r)


def null_rate_sign_scan(
    params: SolutionParams, cfg: CongruenceConfig, r_grid
) -> list[KinematicsSample]:
    """Per-point sign map of the null rate over a grid.

    Radii in the forbidden region or inside the turning-point guard band are
    carried with the matching status and NaN values.
    """
    e2 = cfg.e_tilde**2
    out: list[KinematicsSample] = []
    for r in np.asarray(r_grid, dtype=float):
        r = float(r)
        w = _w_scalar(params, r)
        if w > e2:
            out.append(KinematicsSample(r, math.nan, math.nan, "null", "forbidden"))
        elif abs(e2 - w) < TURNING_GUARD_REL * e2:
            out.append(KinematicsSample(r, math.nan, math.nan, "null", "turning"))
        else:
            out.append(KinematicsSample(r, math.nan, null_rate(params, cfg, r), "null", "ok"))
    return out


def timelike_scan(
    params: SolutionParams, cfg: CongruenceConfig, r_grid
) -> list[KinematicsSample]:
    """Expansion and proper-time rate over a grid, with the same statuses."""
    e2 = cfg.e_tilde**2
    out: list[KinematicsSample] = []
    for r in np.asarray(r_grid, dtype=float):
        r = float(r)
        w = _w_scalar(params, r)
        if w > e2:
            out.append(KinematicsSample(r, math.nan, math.nan, "timelike", "forbidden"))
        elif abs(e2 - w) < TURNING_GUARD_REL * e2:
            out.append(KinematicsSample(r, math.nan, math.nan, "timelike", "turning"))
        else:
            theta = expansion_timelike(params, cfg, r)
            rate = expansion_rate(params, cfg, r)
            out.append(KinematicsSample(r, theta, rate, "timelike", "ok"))
    return out


def focusing_sign_map(
    b_values, nx: int = 512
) -> dict[float, tuple[np.ndarray, np.ndarray]]:
    """Values of the focusing polynomial on a grid over its quoted domain.

    Returns {b: (x_grid, values)}; cells with positive values contradict the
    quoted everywhere-negative claim and are itemized by the report layer.
    """
    out = {}
    for b in b_values:
        lo = (4.0 * b * b) ** (1.0 / 3.0)
        xs = np.linspace(lo, 1.0, nx + 2)[1:-1]
        vals = np.array([focusing_polynomial(float(x), float(b)) for x in xs])
        out[float(b)] = (xs, vals)
    return out
