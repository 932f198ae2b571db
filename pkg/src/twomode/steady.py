"""Steady-state branches of the two-mode optomechanical cavity.

Model: two optical modes with amplitude decay rates ``kappa_k`` are pumped
at detunings ``delta_k`` and couple, with strengths ``g_k``, to one
mechanical mode through radiation pressure.  In the rotating frames the
mean-field equations are

    da_k/dt = -(kappa_k + i (delta_k - g_k Q)) a_k + sqrt(kappa_e_k) E_k
    d2Q/dt2 + gamma_m dQ/dt + omega_m^2 Q
        = 2 omega_m (g_1 |a_1|^2 + s g_2 |a_2|^2)

where Q is the dimensionless mechanical displacement and ``s`` selects the
sign convention for the second mode's radiation-pressure push (``+1``, the
default, is the physical one; ``-1`` mirrors an alternative printed form
of the photon-number relations and is kept only for comparison).

A steady state satisfies the scalar fixed-point condition

    q = (2 / omega_m) * (g_1 n_1(q) + s g_2 n_2(q)),
    n_k(q) = kappa_e_k E_k^2 / (kappa_k^2 + (delta_k - g_k q)^2),

which clears to a polynomial in q of degree 1, 3, or 5.  The polynomial is
assembled in a nondimensionalized variable ``x = q / q_scale`` with every
rate divided by ``omega_m``; Lorentzian factors belonging to an uncoupled
mode (``g_k == 0``) are constants in q and are divided out exactly, which
keeps decoupled results bit-independent of the other mode's settings.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, SolverError
from .params import DrivePoint, SystemParams
from .polyroots import RealPolynomial, real_roots

_POLISH_MAX_ITER = 12
# Solver-level sanity ceiling on the steady-state self-consistency defect.
_RESIDUAL_CEILING = 1e-6


class Verdict(enum.IntEnum):
    """Dynamical stability of a branch; integer values match the CSV column."""

    STABLE = 0
    UNSTABLE = 1
    MARGINAL = 2


@dataclass(frozen=True)
class SolverOptions:
    """Numerical knobs shared by the solve, classify, and sweep layers."""

    sign: int = 1
    imag_tol: float = 1e-7
    dedup_rel: float = 1e-8
    marginal_band: float = 1e-9   # fraction of omega_m
    ode_rel_tol: float = 1e-8

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ParameterError(f"sign convention must be +1 or -1, got {self.sign!r}")
        if not 0.0 < self.imag_tol <= 1e-2:
            raise ParameterError(f"imag_tol out of range (0, 1e-2]: {self.imag_tol!r}")
        if not 0.0 < self.marginal_band <= 1e-3:
            raise ParameterError(
                f"marginal_band out of range (0, 1e-3]: {self.marginal_band!r}")
        if not 1e-12 <= self.ode_rel_tol <= 1e-3:
            raise ParameterError(
                f"ode_rel_tol out of range [1e-12, 1e-3]: {self.ode_rel_tol!r}")


@dataclass(frozen=True)
class SteadyBranch:
    """One self-consistent operating point at a fixed drive."""

    q_s: float
    amp1: complex
    amp2: complex
    n_p1: float
    n_p2: float
    delta1_eff: float
    delta2_eff: float
    verdict: Verdict | None = None
    max_re_eig: float = math.nan


@dataclass(frozen=True)
class ScaledPolynomial:
    """Fixed-point polynomial in x = q / q_scale."""

    poly: RealPolynomial
    q_scale: float


def effective_detunings(q, params: SystemParams, drive: DrivePoint):
    """Mechanically shifted detunings (delta_k - g_k q); q may be an array."""
    return drive.delta1 - params.g1 * q, drive.delta2 - params.g2 * q


def photon_numbers_from_q(q, params: SystemParams, drive: DrivePoint):
    """Intracavity photon numbers and effective detunings at displacement q."""
    d1, d2 = effective_detunings(q, params, drive)
    n1 = params.kappa_e1 * drive.amp_l**2 / (params.kappa1**2 + d1 * d1)
    n2 = params.kappa_e2 * drive.amp_r**2 / (params.kappa2**2 + d2 * d2)
    return n1, n2, d1, d2


def steady_amplitudes(q, params: SystemParams, drive: DrivePoint):
    """Complex mode amplitudes at displacement q."""
    d1, d2 = effective_detunings(q, params, drive)
    a1 = math.sqrt(params.kappa_e1) * drive.amp_l / (params.kappa1 + 1j * d1)
    a2 = math.sqrt(params.kappa_e2) * drive.amp_r / (params.kappa2 + 1j * d2)
    return a1, a2


def steady_residual(q, params: SystemParams, drive: DrivePoint, sign: int = 1):
    """Fixed-point defect f(q); zero exactly at steady states.

    Vectorized over q.  The sign of f flips across every transversal
    steady state, which is what the grid-scan oracles exploit.
    """
    n1, n2, _, _ = photon_numbers_from_q(q, params, drive)
    return q - (2.0 / params.omega_m) * (params.g1 * n1 + sign * params.g2 * n2)


def residual_derivative(q, params: SystemParams, drive: DrivePoint, sign: int = 1):
    """d f / d q, used by the Newton polish."""
    d1, d2 = effective_detunings(q, params, drive)
    den1 = params.kappa1**2 + d1 * d1
    den2 = params.kappa2**2 + d2 * d2
    a_1 = params.kappa_e1 * drive.amp_l**2
    a_2 = params.kappa_e2 * drive.amp_r**2
    dn1 = 2.0 * a_1 * params.g1 * d1 / (den1 * den1)
    dn2 = 2.0 * a_2 * params.g2 * d2 / (den2 * den2)
    return 1.0 - (2.0 / params.omega_m) * (params.g1 * dn1 + sign * params.g2 * dn2)


def q_upper_bound(params: SystemParams, drive: DrivePoint) -> float:
    """Bound on |q| over all steady states: each Lorentzian at its peak."""
    a_1 = params.kappa_e1 * drive.amp_l**2
    a_2 = params.kappa_e2 * drive.amp_r**2
    return (2.0 / params.omega_m) * (params.g1 * a_1 / params.kappa1**2
                                     + params.g2 * a_2 / params.kappa2**2)


def _tail_root_bound(params: SystemParams, drive: DrivePoint) -> float:
    """Alternative bound on |q|, tight at strong drive.

    Past |q| > 2|delta_k|/g_k every coupled Lorentzian is on its far tail,
    |delta_k - g_k q| >= g_k |q| / 2, so the total force magnitude is at
    most (8/(omega_m q^2)) * sum(A_k / g_k) and the residual cannot vanish
    once |q|^3 exceeds that sum scaled by 8/omega_m.
    """
    bound = 0.0
    tail_sum = 0.0
    for kappa_e, amp, g, delta in (
            (params.kappa_e1, drive.amp_l, params.g1, drive.delta1),
            (params.kappa_e2, drive.amp_r, params.g2, drive.delta2)):
        if g == 0.0:
            continue
        bound = max(bound, 2.0 * abs(delta) / g)
        tail_sum += kappa_e * amp * amp / g
    return max(bound, (8.0 * tail_sum / params.omega_m) ** (1.0 / 3.0))


def _assemble(params: SystemParams, drive: DrivePoint, sign: int,
              q_scale: float) -> ScaledPolynomial:
    om = params.omega_m
    modes = []
    for kappa, delta, g, kappa_e, amp, s in (
            (params.kappa1, drive.delta1, params.g1, params.kappa_e1, drive.amp_l, 1),
            (params.kappa2, drive.delta2, params.g2, params.kappa_e2, drive.amp_r, sign)):
        if g == 0.0:
            continue
        kt = kappa / om
        dt = delta / om
        gt = g * q_scale / om
        lorentz = RealPolynomial((kt * kt + dt * dt, -2.0 * dt * gt, gt * gt))
        c = 2.0 * g * (kappa_e * amp * amp) / (om**3 * q_scale)
        modes.append((lorentz, s * c))
    poly = RealPolynomial((0.0, 1.0))
    for lorentz, _ in modes:
        poly = poly * lorentz
    coeffs = list(poly.coeffs)
    for k, (_, signed_c) in enumerate(modes):
        term = RealPolynomial((1.0,))
        for j, (lorentz, _) in enumerate(modes):
            if j != k:
                term = term * lorentz
        for i, c in enumerate(term.coeffs):
            coeffs[i] -= signed_c * c
    return ScaledPolynomial(poly=RealPolynomial.from_coeffs(coeffs), q_scale=q_scale)


def assemble_fixed_point_polynomial(params: SystemParams, drive: DrivePoint,
                                    sign: int = 1) -> ScaledPolynomial:
    """Clear the fixed-point condition to a polynomial in x = q / q_scale.

    The real zeros of the result, rescaled by ``q_scale``, are exactly the
    zeros of :func:`steady_residual`.  Degree is ``1 + 2 * (number of
    modes with g_k != 0)``; with both couplings active the leading
    coefficient is ``(g1 g2 q_scale^2 / omega_m^2)^2 > 0``.  Lorentzian
    factors of uncoupled modes are constants and are divided out exactly
    rather than multiplied in, so their (varying) magnitude cannot perturb
    the coefficients of the part that matters.

    ``q_scale = max(q_upper_bound, 1)``.  At strong drive this is loose
    (the roots sit many decades below it); the branch solver then works on
    a tighter internal rescale, but this public form is the reference.
    """
    q_scale = max(q_upper_bound(params, drive), 1.0)
    return _assemble(params, drive, sign, q_scale)


def _polish_root(q: float, lo: float, hi: float, params, drive, sign) -> float:
    """Safeguarded Newton on the residual around a polynomial root."""
    best = q
    best_res = abs(steady_residual(q, params, drive, sign))
    x = q
    for _ in range(_POLISH_MAX_ITER):
        fx = steady_residual(x, params, drive, sign)
        if fx == 0.0:
            return x
        dfx = residual_derivative(x, params, drive, sign)
        if dfx == 0.0 or not math.isfinite(dfx):
            break
        step = fx / dfx
        x = min(max(x - step, lo), hi)
        res = abs(steady_residual(x, params, drive, sign))
        if res < best_res:
            best, best_res = x, res
        if abs(step) <= 1e-16 * (1.0 + abs(x)):
            break
    return best


def _branch_at(q: float, params: SystemParams, drive: DrivePoint) -> SteadyBranch:
    n1, n2, d1, d2 = photon_numbers_from_q(q, params, drive)
    a1, a2 = steady_amplitudes(q, params, drive)
    return SteadyBranch(q_s=q, amp1=a1, amp2=a2, n_p1=float(n1), n_p2=float(n2),
                        delta1_eff=float(d1), delta2_eff=float(d2))


def steady_branches(params: SystemParams, drive: DrivePoint,
                    options: SolverOptions = SolverOptions()) -> tuple:
    """All steady-state branches at one drive point, ascending in q_s.

    Stability verdicts are not filled in here; see the stability module.
    An undriven point short-circuits to the exact rest branch q = 0.
    """
    if not drive.driven:
        return (_branch_at(0.0, params, drive),)
    # Solve on the tightest valid root bound: at strong drive the peak
    # bound is decades above the actual roots and would wreck the
    # conditioning of the scaled polynomial.
    qb = min(q_upper_bound(params, drive), _tail_root_bound(params, drive))
    scaled = _assemble(params, drive, options.sign, max(qb, 1.0))
    roots_x = real_roots(scaled.poly, imag_tol=options.imag_tol)
    lo = -1.05 * qb if options.sign < 0 else 0.0
    hi = 1.05 * qb
    polished = sorted(_polish_root(float(x) * scaled.q_scale, lo, hi,
                                   params, drive, options.sign)
                      for x in roots_x)
    qs: list[float] = []
    for q in polished:
        if qs and abs(q - qs[-1]) <= options.dedup_rel * (1.0 + abs(q)):
            continue
        qs.append(q)
    branches = []
    for q in qs:
        defect = abs(steady_residual(q, params, drive, options.sign))
        if defect > _RESIDUAL_CEILING * (1.0 + abs(q)):
            raise SolverError(
                f"steady-state root q={q!r} fails self-consistency "
                f"(|f|={defect!r}) for drive {drive!r}")
        branches.append(_branch_at(q, params, drive))
    if not branches:
        raise SolverError(f"no steady-state branch found for drive {drive!r}")
    return tuple(branches)
