"""Dynamical stability of steady-state branches.

The classifier is fully algebraic: the analytic 6x6 Jacobian of the real
first-order system is built in omega_m-scaled units, its characteristic
polynomial is produced by the Faddeev-LeVerrier recurrence, and the
eigenvalues come from the package's own polynomial root finder.  A branch
is Stable when every eigenvalue real part sits below ``-eps``, Unstable
when one exceeds ``+eps``, Marginal in between, with ``eps =
marginal_band * omega_m``.

The folk rule for these systems ("outermost branches stable, middle ones
unstable", alternating) is computed alongside and compared; when it
disagrees with the eigenvalue verdicts the point is flagged as a
diagnostic, not an error, since the rule genuinely fails in anti-damped
(blue-detuned, strongly driven) regimes.

An adaptive explicit time integrator is included as an independent
verification oracle for the classifier; it shares no algebra with it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ClassificationError, IntegrationError, ParameterError, PolynomialError
from .params import DrivePoint, SystemParams
from .polyroots import RealPolynomial, all_roots
from .steady import SolverOptions, SteadyBranch, Verdict, steady_amplitudes, steady_branches

_DEFAULT_MAX_STEPS = 50_000_000


def branch_state(branch: SteadyBranch) -> np.ndarray:
    """Real 6-vector (Re a1, Im a1, Re a2, Im a2, Q, P) of a branch."""
    return np.array([branch.amp1.real, branch.amp1.imag,
                     branch.amp2.real, branch.amp2.imag,
                     branch.q_s, 0.0])


def vector_field(state, params: SystemParams, drive: DrivePoint,
                 sign: int = 1) -> np.ndarray:
    """Time derivative of the real first-order system, SI rates [1/s].

    State layout matches :func:`branch_state`; P is dQ/dt.
    """
    x1, y1, x2, y2, q, p = (float(v) for v in state)
    d1e = drive.delta1 - params.g1 * q
    d2e = drive.delta2 - params.g2 * q
    f1 = math.sqrt(params.kappa_e1) * drive.amp_l
    f2 = math.sqrt(params.kappa_e2) * drive.amp_r
    return np.array([
        -params.kappa1 * x1 + d1e * y1 + f1,
        -d1e * x1 - params.kappa1 * y1,
        -params.kappa2 * x2 + d2e * y2 + f2,
        -d2e * x2 - params.kappa2 * y2,
        p,
        -params.gamma_m * p - params.omega_m**2 * q
        + 2.0 * params.omega_m * (params.g1 * (x1 * x1 + y1 * y1)
                                  + sign * params.g2 * (x2 * x2 + y2 * y2)),
    ])


def jacobian(state, params: SystemParams, drive: DrivePoint,
             sign: int = 1) -> np.ndarray:
    """Analytic Jacobian of :func:`vector_field` at ``state`` [rad/s]."""
    x1, y1, x2, y2, q, _ = (float(v) for v in state)
    d1e = drive.delta1 - params.g1 * q
    d2e = drive.delta2 - params.g2 * q
    om = params.omega_m
    j = np.zeros((6, 6))
    j[0, 0] = -params.kappa1
    j[0, 1] = d1e
    j[0, 4] = -params.g1 * y1
    j[1, 0] = -d1e
    j[1, 1] = -params.kappa1
    j[1, 4] = params.g1 * x1
    j[2, 2] = -params.kappa2
    j[2, 3] = d2e
    j[2, 4] = -params.g2 * y2
    j[3, 2] = -d2e
    j[3, 3] = -params.kappa2
    j[3, 4] = params.g2 * x2
    j[4, 5] = 1.0
    j[5, 0] = 4.0 * om * params.g1 * x1
    j[5, 1] = 4.0 * om * params.g1 * y1
    j[5, 2] = 4.0 * sign * om * params.g2 * x2
    j[5, 3] = 4.0 * sign * om * params.g2 * y2
    j[5, 4] = -om * om
    j[5, 5] = -params.gamma_m
    return j


def _scaled_jacobian(state, params: SystemParams, drive: DrivePoint,
                     sign: int) -> np.ndarray:
    # Same matrix in units of omega_m with P likewise scaled; similar to
    # jacobian()/omega_m, so eigenvalues are exactly omega_m-scaled.
    x1, y1, x2, y2, q, _ = (float(v) for v in state)
    om = params.omega_m
    k1, k2 = params.kappa1 / om, params.kappa2 / om
    g1, g2 = params.g1 / om, params.g2 / om
    d1e = drive.delta1 / om - g1 * q
    d2e = drive.delta2 / om - g2 * q
    j = np.zeros((6, 6))
    j[0, 0] = -k1
    j[0, 1] = d1e
    j[0, 4] = -g1 * y1
    j[1, 0] = -d1e
    j[1, 1] = -k1
    j[1, 4] = g1 * x1
    j[2, 2] = -k2
    j[2, 3] = d2e
    j[2, 4] = -g2 * y2
    j[3, 2] = -d2e
    j[3, 3] = -k2
    j[3, 4] = g2 * x2
    j[4, 5] = 1.0
    j[5, 0] = 4.0 * g1 * x1
    j[5, 1] = 4.0 * g1 * y1
    j[5, 2] = 4.0 * sign * g2 * x2
    j[5, 3] = 4.0 * sign * g2 * y2
    j[5, 4] = -1.0
    j[5, 5] = -params.gamma_m / om
    return j


def characteristic_polynomial(matrix: np.ndarray) -> RealPolynomial:
    """Monic characteristic polynomial via the Faddeev-LeVerrier recurrence."""
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ParameterError(f"matrix must be square, got shape {m.shape}")
    n = m.shape[0]
    coeffs = np.zeros(n + 1)
    coeffs[n] = 1.0
    acc = np.eye(n)
    for k in range(1, n + 1):
        acc = m @ acc
        ck = -np.trace(acc) / k
        coeffs[n - k] = ck
        acc = acc + ck * np.eye(n)
    # Direct construction: the monic lead must survive even when lower
    # coefficients are huge, so no relative trimming here.
    return RealPolynomial(coeffs=tuple(coeffs))


def branch_eigenvalues(branch: SteadyBranch, params: SystemParams,
                       drive: DrivePoint, sign: int = 1) -> np.ndarray:
    """All six linearization eigenvalues at a branch [rad/s]."""
    jac = _scaled_jacobian(branch_state(branch), params, drive, sign)
    char = characteristic_polynomial(jac)
    try:
        lam = all_roots(char)
    except PolynomialError as exc:
        raise ClassificationError(str(exc), polynomial=char) from exc
    return lam * params.omega_m


def classify_stability(branch: SteadyBranch, params: SystemParams,
                       drive: DrivePoint,
                       options: SolverOptions = SolverOptions()) -> SteadyBranch:
    """Return the branch with its eigenvalue verdict and max Re(eig) filled."""
    lam = branch_eigenvalues(branch, params, drive, options.sign)
    max_re = float(np.max(lam.real))
    eps = options.marginal_band * params.omega_m
    if max_re < -eps:
        verdict = Verdict.STABLE
    elif max_re > eps:
        verdict = Verdict.UNSTABLE
    else:
        verdict = Verdict.MARGINAL
    return replace(branch, verdict=verdict, max_re_eig=max_re)


def ordering_rule(count: int) -> tuple:
    """Folk verdicts by branch position: stable at the ends, alternating."""
    return tuple(Verdict.STABLE if i % 2 == 0 else Verdict.UNSTABLE
                 for i in range(count))


def classify_branches(branches, params: SystemParams, drive: DrivePoint,
                      options: SolverOptions = SolverOptions()):
    """Classify every branch; also cross-check against the ordering rule.

    Returns (classified branches ascending in q_s, diagnostic strings).
    Ordering-rule disagreement is reported, never raised.
    """
    classified = tuple(classify_stability(b, params, drive, options)
                       for b in branches)
    diagnostics = []
    expected = ordering_rule(len(classified))
    actual = tuple(b.verdict for b in classified)
    if actual != expected:
        diagnostics.append(
            "ordering-rule disagreement at drive "
            f"(delta1={drive.delta1!r}, delta2={drive.delta2!r}, "
            f"power_l={drive.power_l!r}, power_r={drive.power_r!r}): "
            f"eigenvalues say {tuple(v.name for v in actual)}, "
            f"rule says {tuple(v.name for v in expected)}")
    return classified, tuple(diagnostics)


def solve_and_classify(params: SystemParams, drive: DrivePoint,
                       options: SolverOptions = SolverOptions()):
    """Steady branches at one drive point, classified; plus diagnostics."""
    branches = steady_branches(params, drive, options)
    return classify_branches(branches, params, drive, options)


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution of the time integration, SI units."""

    times: np.ndarray
    states: np.ndarray

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def integrate_dynamics(initial, params: SystemParams, drive: DrivePoint,
                       t_end: float, rel_tol: float | None = None,
                       sign: int = 1, n_samples: int = 129,
                       max_steps: int = _DEFAULT_MAX_STEPS) -> Trajectory:
    """Adaptive explicit integration of :func:`vector_field`.

    Classical RK4 with step-doubling: every step is checked against two
    half steps, so the local error is bounded against a half-step-size
    self-check at the requested relative tolerance.  Step-size underflow
    or an exhausted step budget raises ``IntegrationError`` (the stiff
    regime where an explicit method cannot proceed).
    """
    from . import _odekernel

    if rel_tol is None:
        rel_tol = SolverOptions().ode_rel_tol
    if not 1e-12 <= rel_tol <= 1e-3:
        raise ParameterError(f"rel_tol out of range [1e-12, 1e-3]: {rel_tol!r}")
    if not (math.isfinite(t_end) and t_end > 0.0):
        raise ParameterError(f"t_end must be positive and finite, got {t_end!r}")
    if n_samples < 2:
        raise ParameterError(f"need at least 2 samples, got {n_samples!r}")
    om = params.omega_m
    y0 = np.asarray(initial, dtype=float).copy()
    if y0.shape != (6,):
        raise ParameterError(f"initial state must have 6 components, got {y0.shape}")
    y0[5] /= om
    pv = np.array([params.kappa1 / om, drive.delta1 / om, params.g1 / om,
                   math.sqrt(params.kappa_e1) * drive.amp_l / om,
                   params.kappa2 / om, drive.delta2 / om, params.g2 / om,
                   math.sqrt(params.kappa_e2) * drive.amp_r / om,
                   params.gamma_m / om, float(sign)])
    # Error-control floors: the drive's own steady scale where available,
    # so decay-to-zero segments are not held to a purely relative target.
    a1, a2 = steady_amplitudes(0.0, params, drive)
    floor = max(abs(a1), abs(a2), float(np.max(np.abs(y0))), 1e-12)
    sc = np.maximum(np.abs(y0), 1e-3 * floor)
    taus = np.linspace(0.0, t_end * om, n_samples)
    status, states, _ = _odekernel.integrate(y0, taus, rel_tol, pv, sc,
                                             max_steps)
    if status == _odekernel.STATUS_STEP_UNDERFLOW:
        raise IntegrationError(
            f"step size underflow at rel_tol={rel_tol!r}; system too stiff "
            "for the explicit integrator")
    if status == _odekernel.STATUS_STEP_BUDGET:
        raise IntegrationError(
            f"step budget {max_steps} exhausted; system too stiff "
            "for the explicit integrator")
    out = states.copy()
    out[:, 5] *= om
    return Trajectory(times=taus / om, states=out)
