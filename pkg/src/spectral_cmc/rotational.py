"""Closed-form spectral data of rotational CMC cylinders in the 3-sphere.

The genus-0 family (homogeneous tori / their cylinder covers) and the
genus-1 family (Delaunay-type rotational cylinders) admit explicit spectral
data parametrized by the mean curvature H >= 0 and, for genus 1, a
branch-point parameter alpha >= 2; alpha = 2 degenerates to the genus-0
family with a double root of a at lambda = -1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curve import SpectralData
from .polynomials import Poly


class DomainError(ValueError):
    """Parameters outside the rotational family's domain."""


@dataclass(frozen=True)
class RotParams:
    """Parameters (H, alpha) of the rotational families, with the derived
    closing amplitudes beta0 (genus 0) and beta1 (genus 1)."""

    H: float
    alpha: float = 2.0

    def __post_init__(self):
        if not np.isfinite(self.H) or self.H < 0:
            raise DomainError("H must be finite and >= 0")
        if not np.isfinite(self.alpha) or self.alpha < 2:
            raise DomainError("alpha must be finite and >= 2")

    @property
    def beta0(self) -> float:
        s = np.hypot(self.H, 1.0)
        return float(np.pi * np.sqrt(s / (2.0 * (s + self.H))))

    @property
    def beta0_non_embedded(self) -> float:
        s = np.hypot(self.H, 1.0)
        return float(np.pi * np.sqrt(s / (2.0 * (s - self.H))))

    @property
    def beta1(self) -> float:
        s = np.hypot(self.H, 1.0)
        return float(np.pi * np.sqrt(s / (2.0 * self.H + self.alpha * s)))


def genus0(H: float, non_embedded: bool = False) -> SpectralData:
    """Genus-0 rotational spectral data: a = -1/16, b = beta0 (lambda - 1)/8.

    The default branch is the embedded family; `non_embedded` selects the
    second solution of the closing equation (related to the first by
    lambda -> -lambda), whose Sym points sit at -(H+i)/sqrt(H^2+1).
    """
    params = RotParams(H)
    s = np.hypot(H, 1.0)
    if non_embedded:
        beta = params.beta0_non_embedded
        lam1 = -(H + 1j) / s
    else:
        beta = params.beta0
        lam1 = (H - 1j) / s
    a = Poly([-1.0 / 16.0])
    b = Poly([-beta / 8.0, beta / 8.0])
    return SpectralData(a, b, lam1, 0)


def genus1(H: float, alpha: float) -> SpectralData:
    """Genus-1 rotational spectral data.

    a = -(lambda^2 + alpha lambda + 1)/16, b = beta1 (1 - lambda^2)/8 with
    beta1^2 = pi^2 sqrt(H^2+1) / (2H + alpha sqrt(H^2+1)); Sym points at
    (H -+ i)/sqrt(H^2+1).
    """
    params = RotParams(H, alpha)
    s = np.hypot(H, 1.0)
    beta = params.beta1
    a = Poly([-1.0 / 16.0, -alpha / 16.0, -1.0 / 16.0])
    b = Poly([beta / 8.0, 0.0, -beta / 8.0])
    lam1 = (H - 1j) / s
    return SpectralData(a, b, lam1, 1)


def embed_genus0_to_1(d: SpectralData) -> SpectralData:
    """Genus jump of genus-0 data into the genus-1 moduli boundary.

    (a, b) -> ((lambda+1)^2 a, (lambda+1) b); Sym points unchanged.  The
    image has a double root of a at lambda = -1 and coincides with the
    alpha = 2 stratum of the genus-1 family.
    """
    if d.g != 0:
        raise DomainError("embedding is defined only on genus-0 data")
    p = Poly([1.0, 1.0])
    return SpectralData((p * p) * d.a, p * d.b, d.lambda1, 1)


def genus0_closed_h(d: SpectralData, lam, nu):
    """Closed-form h for genus-0 rotational data, given the sheet choice nu.

    h = beta (lambda + 1) / (4 lambda nu) with beta = 8 * (linear coefficient
    of b); vanishes at lambda = -1, which is the quadrature anchor.
    """
    beta = 8.0 * d.b.coeff(1)
    return beta * (np.asarray(lam) + 1.0) / (4.0 * np.asarray(lam) * nu)


def genus1_closed_h(d: SpectralData, nu):
    """Closed-form h = 4 beta1 nu for genus-1 rotational data."""
    beta = -8.0 * d.b.coeff(2)
    return 4.0 * beta * nu


@dataclass(frozen=True)
class Membership:
    """Classification of spectral data against the rotational families."""

    kind: str  # one of "Rot0", "Rot1", "Boundary", "Outside"
    H: float | None = None
    alpha: float | None = None


def _recovered_H(d: SpectralData) -> complex:
    lam1, lam2 = d.lambda1, d.lambda2
    return 1j * (lam1 + lam2) / (lam2 - lam1)


def classify_membership(d: SpectralData, tol: float = 1e-8) -> Membership:
    """Match spectral data against the rotational closed forms.

    Recovers H from the Sym points and, for genus 1, alpha from the middle
    coefficient of -16a, then compares (a, b, lambda1) to the closed forms
    (the sign of b is a branch choice and is matched up to +-1).  Boundary
    is the stratum {alpha = 2} united with {H = 0}; anything that does not
    match (including the non-embedded genus-0 branch, which recovers H < 0)
    is Outside.
    """
    Hc = _recovered_H(d)
    if abs(Hc.imag) > tol:
        return Membership("Outside")
    H = float(Hc.real)
    if H < -tol:
        return Membership("Outside")
    H = max(H, 0.0)
    s = np.hypot(H, 1.0)
    lam1_expect = (H - 1j) / s
    if abs(d.lambda1 - lam1_expect) > 10 * tol:
        return Membership("Outside")

    def poly_close(p: Poly, q: Poly, t: float) -> bool:
        n = max(p.degree, q.degree) + 1
        return all(abs(p.coeff(k) - q.coeff(k)) <= t for k in range(n))

    if d.g == 0:
        ref = genus0(H)
        if poly_close(d.a, ref.a, tol) and (
            poly_close(d.b, ref.b, tol) or poly_close(d.b, -1 * ref.b, tol)
        ):
            if H <= tol:
                return Membership("Boundary", H=0.0, alpha=None)
            return Membership("Rot0", H=H)
        return Membership("Outside")

    if d.g == 1:
        alpha = float(np.real(-16.0 * d.a.coeff(1)))
        if abs(np.imag(-16.0 * d.a.coeff(1))) > tol or alpha < 2.0 - tol:
            return Membership("Outside")
        alpha = max(alpha, 2.0)
        try:
            ref = genus1(H, alpha)
        except DomainError:
            return Membership("Outside")
        if poly_close(d.a, ref.a, tol) and (
            poly_close(d.b, ref.b, tol) or poly_close(d.b, -1 * ref.b, tol)
        ):
            if H <= tol or alpha <= 2.0 + tol:
                return Membership("Boundary", H=H, alpha=alpha)
            return Membership("Rot1", H=H, alpha=alpha)
        return Membership("Outside")

    return Membership("Outside")
