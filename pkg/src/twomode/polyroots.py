"""Real-coefficient polynomials and deterministic root extraction.

Coefficients are stored ascending (``coeffs[i]`` multiplies ``x**i``).
Root extraction goes through the balanced companion matrix (numpy's
eigenvalue path), followed by a residual audit; real-root selection adds a
Newton polish and tolerance-based deduplication.  Identical inputs produce
bit-identical outputs on a given platform: there is no randomness anywhere
in this module, and results are sorted canonically before they are
returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PolynomialError

# Relative magnitude below which a leading coefficient is treated as zero.
_TRIM_REL = 1e-14
# Residual acceptance for all_roots, relative to the local coefficient scale.
_ROOT_RESIDUAL_REL = 1e-10
# Newton polish targets for real_roots.
_POLISH_RESIDUAL_REL = 1e-13
_POLISH_MAX_ITER = 50
# Real roots closer than this (relative) are collapsed into one.
_DEDUP_REL = 1e-8


@dataclass(frozen=True)
class RealPolynomial:
    """Polynomial with real coefficients, ascending order, trimmed."""

    coeffs: tuple

    @classmethod
    def from_coeffs(cls, coeffs) -> "RealPolynomial":
        """Build from any coefficient sequence, trimming negligible leads.

        Leading (highest-degree) coefficients whose magnitude is below
        ``1e-14 * max|c|`` are dropped so the stored degree is honest.
        """
        arr = [float(c) for c in coeffs]
        if not arr:
            raise PolynomialError("empty coefficient sequence")
        if not all(math.isfinite(c) for c in arr):
            raise PolynomialError(f"non-finite coefficient in {arr!r}")
        top = max(abs(c) for c in arr)
        if top == 0.0:
            raise PolynomialError("zero polynomial has no defined roots")
        cut = _TRIM_REL * top
        last = len(arr) - 1
        while last > 0 and abs(arr[last]) <= cut:
            last -= 1
        return cls(coeffs=tuple(arr[:last + 1]))

    @classmethod
    def from_roots(cls, roots, leading: float = 1.0) -> "RealPolynomial":
        """Expand ``leading * prod(x - r)``; complex roots must pair up."""
        coeffs = np.array([leading], dtype=complex)
        for r in roots:
            coeffs = np.convolve(coeffs, np.array([-r, 1.0], dtype=complex))
        if np.max(np.abs(coeffs.imag)) > 1e-9 * max(np.max(np.abs(coeffs.real)), 1.0):
            raise PolynomialError("roots do not produce a real polynomial")
        return cls.from_coeffs(coeffs.real.tolist())

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        """Horner evaluation; accepts scalars or arrays, real or complex."""
        acc = x * 0.0 + self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def derivative(self) -> "RealPolynomial":
        if self.degree == 0:
            return RealPolynomial(coeffs=(0.0,))
        der = tuple(i * c for i, c in enumerate(self.coeffs) if i > 0)
        return RealPolynomial(coeffs=der)

    def __mul__(self, other):
        if isinstance(other, RealPolynomial):
            prod = np.convolve(np.asarray(self.coeffs), np.asarray(other.coeffs))
            return RealPolynomial.from_coeffs(prod.tolist())
        return RealPolynomial.from_coeffs([c * float(other) for c in self.coeffs])

    __rmul__ = __mul__

    def residual_scale(self, r) -> float:
        """max_i |c_i| * |r|**i, the natural size of p near r."""
        m = abs(r)
        best = 0.0
        power = 1.0
        for c in self.coeffs:
            best = max(best, abs(c) * power)
            power *= m
        return best


def all_roots(p: RealPolynomial) -> np.ndarray:
    """All complex roots, exactly ``p.degree`` of them, canonically sorted.

    Roots come from the balanced companion matrix.  Each is audited
    against ``|p(r)| <= 1e-10 * scale(r)``; a failing root gets a short
    complex-Newton rescue and a persistent failure raises
    ``PolynomialError``.  Complex roots of real polynomials arrive in
    conjugate pairs.
    """
    if p.degree < 1:
        raise PolynomialError(f"degree must be >= 1 to extract roots, got {p.degree}")
    try:
        roots = np.roots(np.asarray(p.coeffs[::-1], dtype=float))
    except np.linalg.LinAlgError as exc:
        raise PolynomialError(f"companion eigenvalue iteration failed: {exc}") from exc
    if len(roots) != p.degree:
        raise PolynomialError(
            f"expected {p.degree} roots, companion path produced {len(roots)}")
    dp = p.derivative()
    polished = []
    for r in roots:
        # the absolute floor keeps the bound satisfiable when the local
        # coefficient scale underflows (subnormal coefficients)
        limit = max(_ROOT_RESIDUAL_REL * p.residual_scale(r), 1e-290)
        if abs(p(r)) > limit:
            r = _newton(p, dp, complex(r), _ROOT_RESIDUAL_REL)
            limit = max(_ROOT_RESIDUAL_REL * p.residual_scale(r), 1e-290)
            if abs(p(r)) > limit:
                raise PolynomialError(
                    f"root {r!r} fails residual bound for {p.coeffs!r}")
        polished.append(complex(r))
    polished.sort(key=lambda z: (z.real, z.imag))
    return np.asarray(polished, dtype=complex)


def _newton(p: RealPolynomial, dp: RealPolynomial, x, target_rel: float):
    """Damped Newton refinement; returns the best iterate seen."""
    best, best_res = x, abs(p(x))
    for _ in range(_POLISH_MAX_ITER):
        scale = p.residual_scale(x)
        fx = p(x)
        if abs(fx) <= target_rel * scale:
            return x
        dfx = dp(x)
        if dfx == 0.0:
            break
        x = x - fx / dfx
        res = abs(p(x))
        if res < best_res:
            best, best_res = x, res
    return best


def real_roots(p: RealPolynomial, imag_tol: float = 1e-7) -> np.ndarray:
    """Distinct real roots of p, ascending.

    A complex root is accepted as real when ``|Im r| <= imag_tol * (1 +
    |Re r|)``.  Survivors are polished by real Newton iteration (at most
    50 steps, stopping at ``|p| <= 1e-13 * scale``) and deduplicated at
    relative distance 1e-8; a collapsed multiple root appears once.
    """
    if imag_tol <= 0.0:
        raise PolynomialError(f"imag_tol must be positive, got {imag_tol!r}")
    dp = p.derivative()
    candidates = []
    for r in all_roots(p):
        if abs(r.imag) <= imag_tol * (1.0 + abs(r.real)):
            x = float(_newton_real(p, dp, r.real))
            candidates.append(x)
    candidates.sort()
    out: list[float] = []
    for x in candidates:
        if out and abs(x - out[-1]) <= _DEDUP_REL * (1.0 + abs(x)):
            # Keep whichever representative has the smaller residual.
            if abs(p(x)) < abs(p(out[-1])):
                out[-1] = x
        else:
            out.append(x)
    return np.asarray(out, dtype=float)


def _newton_real(p: RealPolynomial, dp: RealPolynomial, x: float) -> float:
    best, best_res = x, abs(p(x))
    for _ in range(_POLISH_MAX_ITER):
        fx = p(x)
        if abs(fx) <= _POLISH_RESIDUAL_REL * p.residual_scale(x):
            return x
        dfx = dp(x)
        if dfx == 0.0:
            break
        x = x - fx / dfx
        res = abs(p(x))
        if res < best_res:
            best, best_res = x, res
    return best
