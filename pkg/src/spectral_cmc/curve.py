"""Hyperelliptic spectral curve nu^2 = a(lambda)/lambda and its invariants.

Provides branch-continuous tracking of nu along lambda-paths, adaptive
quadrature of the Abelian differential dh = b(lambda) dlambda / (nu lambda^2),
the single-valued function Delta = 2 cosh(h), and the full validity checker
for spectral data (reality, segment integrals, h in i*pi*Z at branch points
and Sym points, normalization).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .polynomials import Poly, RealityClass, check_reality, roots

BRANCH_GUARD = 1e-6
DETOUR_RADIUS = 1e-3
_SEG_TOL = 1e-12


class BranchAmbiguity(ValueError):
    """Branch continuation step too large: both sheet choices equidistant."""


class PoleError(ValueError):
    """Evaluation at the pole lambda = 0 of the curve."""


class BranchProximity(ValueError):
    """Interior path point too close to a branch point."""


@dataclass(frozen=True)
class SpectralData:
    """Spectral data (a, b, lambda1, lambda2) of genus g; lambda2 = 1/lambda1."""

    a: Poly
    b: Poly
    lambda1: complex
    g: int

    def __post_init__(self):
        lam1 = complex(self.lambda1)
        object.__setattr__(self, "lambda1", lam1)
        if self.g < 0:
            raise ValueError("genus must be >= 0")
        if self.a.degree > 2 * self.g:
            raise ValueError(f"deg a = {self.a.degree} exceeds 2g = {2 * self.g}")
        if self.b.degree > self.g + 1:
            raise ValueError(f"deg b = {self.b.degree} exceeds g+1 = {self.g + 1}")
        if abs(abs(self.a.coeff(0)) - 1.0 / 16.0) > 1e-8:
            raise ValueError("|a(0)| must equal 1/16")
        if abs(abs(lam1) - 1.0) > 1e-8:
            raise ValueError("lambda1 must be unimodular")
        if lam1.imag >= 0:
            raise ValueError("Im(lambda1) must be negative")

    @property
    def lambda2(self) -> complex:
        return 1.0 / self.lambda1

    def nu_squared(self, lam):
        return self.a(lam) / lam

    def roots_of_a(self):
        if self.a.degree == 0:
            return []
        return roots(self.a)

    def branch_points(self):
        """Finite branch points: roots of a (odd multiplicity) plus 0."""
        return [r for r, _ in self.roots_of_a()] + [0.0 + 0.0j]


@dataclass(frozen=True)
class CurvePoint:
    lam: complex
    nu: complex


@dataclass(frozen=True)
class SheetPath:
    samples: tuple

    def __iter__(self):
        return iter(self.samples)

    def __len__(self):
        return len(self.samples)


def sigma(p: CurvePoint) -> CurvePoint:
    """Hyperelliptic involution (lambda, nu) -> (lambda, -nu)."""
    return CurvePoint(p.lam, -p.nu)


def H_from_sym(lam1: complex, lam2: complex) -> complex:
    """Mean curvature encoded by the Sym points: H = i(l1+l2)/(l2-l1)."""
    return 1j * (lam1 + lam2) / (lam2 - lam1)


def hopf_coefficient(lam1: complex, lam2: complex) -> complex:
    """Hopf differential coefficient Q = (i/16)(1/lam1 - 1/lam2)."""
    return 0.25j * 0.25 * (1.0 / lam1 - 1.0 / lam2)


def short_arc_length(data: SpectralData) -> float:
    """Anticlockwise arc length on S^1 from lambda1 to lambda2, in (0, 2pi).

    The data lies in the mean-convex class exactly when the result <= pi.
    """
    lam1, lam2 = data.lambda1, data.lambda2
    if abs(lam1 - lam2) < 1e-14:
        raise ValueError("Sym points coincide; arc undefined")
    return float((cmath.phase(lam2) - cmath.phase(lam1)) % (2.0 * np.pi))


# ---------------------------------------------------------------------------
# Branch tracking
# ---------------------------------------------------------------------------


def _track_signs(w: np.ndarray, seed: complex) -> np.ndarray:
    """Fix signs of principal square roots w to vary continuously from seed."""
    out = np.array(w, complex)
    flip = np.abs(out[1:] - out[:-1]) > np.abs(out[1:] + out[:-1])
    signs = np.cumprod(np.where(flip, -1.0, 1.0))
    out[1:] *= signs
    if abs(out[0] - seed) > abs(out[0] + seed):
        out = -out
    return out


def nu_continue(data: SpectralData, lam_samples, seed: CurvePoint) -> SheetPath:
    """Continue nu = sqrt(a(lambda)/lambda) continuously along lam_samples.

    The first sample must equal seed.lam; at each step the square root closer
    to the previous value is chosen.  Samples at declared endpoints may sit on
    branch points (nu set to 0 there); interior samples must keep the branch
    guard distance from roots of a and from 0.
    """
    lam = [complex(z) for z in lam_samples]
    if not lam:
        return SheetPath(())
    if abs(lam[0] - seed.lam) > 1e-10 * (1.0 + abs(seed.lam)):
        raise ValueError("first sample must coincide with the seed point")
    branch = data.branch_points()
    pts = []
    prev = complex(seed.nu)
    for k, z in enumerate(lam):
        if abs(z) < BRANCH_GUARD:
            if abs(z) == 0.0:
                raise PoleError("sample at lambda = 0")
            raise BranchProximity("sample within branch guard of lambda = 0")
        near_branch = min((abs(z - bp) for bp in branch), default=np.inf)
        endpoint = k == 0 or k == len(lam) - 1
        if near_branch < BRANCH_GUARD:
            if not endpoint:
                raise BranchProximity(
                    f"interior sample at {z} within {BRANCH_GUARD:g} of a branch point"
                )
            pts.append(CurvePoint(z, 0.0 + 0.0j))
            continue
        w = cmath.sqrt(data.nu_squared(z))
        dplus, dminus = abs(w - prev), abs(w + prev)
        if k > 0 and abs(prev) > 0 and abs(dplus - dminus) < 1e-9 * (abs(w) + abs(prev)):
            raise BranchAmbiguity(f"ambiguous sheet choice at sample {k} (lambda={z})")
        if dminus < dplus:
            w = -w
        pts.append(CurvePoint(z, w))
        prev = w
    return SheetPath(tuple(pts))


def _factored_a(data):
    """Evaluator of a(lambda) in root-factored form.

    Near a multiple root of a, Horner evaluation loses all significant digits
    to cancellation (absolute error ~eps while the value is ~|lambda-r|^m);
    the product over polished roots keeps full relative accuracy there, which
    the quadrature needs to meet 1e-9 residuals on degenerate data.
    """
    if data.a.degree < 1:
        c = complex(data.a.coeff(0))
        return lambda lam: np.full(np.shape(np.asarray(lam)), c, complex)
    rts = roots(data.a)
    lead = complex(data.a.coeff(data.a.degree))

    def ev(lam):
        lam = np.asarray(lam, complex)
        out = np.full(lam.shape, lead, complex)
        for r, m in rts:
            out *= (lam - r) ** m
        return out

    return ev


def _make_chord_branch(data, lam_of_t, seed_nu=None, seed_t=0.0, n_ref=256):
    """Branch-consistent nu(t) evaluator along a parametrized path.

    `seed_nu` fixes the sheet at parameter `seed_t`; when None (or when nu
    vanishes at the seed location, e.g. a branch endpoint) the sheet is
    chosen arbitrarily but consistently along the whole chord.
    """
    a_ev = _factored_a(data)
    t_ref = np.linspace(0.0, 1.0, n_ref + 1)
    lam_ref = lam_of_t(t_ref)
    w_ref = np.sqrt((a_ev(lam_ref) / lam_ref).astype(complex))
    nu_ref = _track_signs(w_ref, w_ref[int(np.argmax(np.abs(w_ref)))])
    if seed_nu is not None and abs(seed_nu) > 1e-13:
        idx = int(round(seed_t * n_ref))
        if abs(nu_ref[idx]) < 1e-13:
            idx = int(np.argmax(np.abs(nu_ref)))
        if abs(nu_ref[idx] - seed_nu) > abs(nu_ref[idx] + seed_nu):
            nu_ref = -nu_ref
    # Sign matching against a vanishing reference (a branch endpoint) is a
    # coin toss once a(lam)/lam carries rounding noise; substitute the nearest
    # reference sample of usable magnitude so the sheet stays coherent there.
    mags = np.abs(nu_ref)
    usable = np.where(mags > 1e-9 * mags.max())[0]
    pos = np.searchsorted(usable, np.arange(n_ref + 1))
    lo = usable[np.clip(pos - 1, 0, len(usable) - 1)]
    hi = usable[np.clip(pos, 0, len(usable) - 1)]
    grid = np.arange(n_ref + 1)
    nearest = np.where(np.abs(grid - lo) <= np.abs(hi - grid), lo, hi)
    nu_match = nu_ref[nearest]

    def nu_at(t):
        t = np.asarray(t, float)
        lam = lam_of_t(t)
        w = np.sqrt((a_ev(lam) / lam).astype(complex))
        idx = np.clip(np.rint(t * n_ref).astype(int), 0, n_ref)
        ref = nu_match[idx]
        return np.where(np.abs(w - ref) > np.abs(w + ref), -w, w)

    return nu_at, nu_ref


_GL_X, _GL_W = np.polynomial.legendre.leggauss(10)


def _composite_gl(f, panels: int):
    """Composite 10-point Gauss-Legendre of f over [0, 1] with `panels` panels."""
    edges = np.linspace(0.0, 1.0, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1] - edges[0])
    nodes = (mid[:, None] + half * _GL_X[None, :]).ravel()
    vals = f(nodes).reshape(panels, -1)
    return half * np.sum(vals @ _GL_W)


def _adaptive_integral(f, tol=_SEG_TOL, max_panels=2048):
    """Integrate f over [0,1], doubling panel count until converged."""
    panels = 4
    prev = _composite_gl(f, panels)
    err = np.inf
    while panels < max_panels:
        panels *= 2
        cur = _composite_gl(f, panels)
        err = abs(cur - prev)
        if err < tol * (1.0 + abs(cur)):
            return cur, err
        prev = cur
    return prev, err


def _chord_dh(data, z0, z1, nu_seed, branch_start, branch_end, tol=_SEG_TOL):
    """Integral of dh along the straight chord z0 -> z1.

    branch_start / branch_end flag endpoints lying on branch points of the
    curve (nu -> 0 there); the square-root substitution t = s^2 regularizes
    the integrable 1/nu endpoint singularity.  Returns (value, nu_at_end,
    error estimate).
    """
    if branch_start and branch_end:
        mid = 0.5 * (z0 + z1)
        v1, nu_mid, e1 = _chord_dh(data, z0, mid, None, True, False, tol)
        v2, nu_end, e2 = _chord_dh(data, mid, z1, nu_mid, False, True, tol)
        return v1 + v2, nu_end, e1 + e2
    if branch_end and not branch_start:
        # Integrate the reversed chord (branch at the start) and negate; the
        # seed applies at the far end of the reversed chord, which is z0.
        val, _, err = _chord_dh(data, z1, z0, nu_seed, True, False, tol)
        # nu at the branch endpoint is 0 by convention.
        return -val, 0.0 + 0.0j, err

    d = z1 - z0
    if branch_start:
        # t = s^2: lambda(s) = z0 + s^2 d, dlambda = 2 s d ds.
        def lam_of_t(s):
            return z0 + np.asarray(s) ** 2 * d

        nu_at, _ = _make_chord_branch(data, lam_of_t, seed_nu=nu_seed, seed_t=1.0)

        def f(s):
            lam = lam_of_t(s)
            return data.b(lam) / (nu_at(s) * lam**2) * (2.0 * np.asarray(s) * d)

        val, err = _adaptive_integral(f, tol)
        nu_end = complex(nu_at(np.array([1.0]))[0])
        return val, nu_end, err

    def lam_of_t(t):
        return z0 + np.asarray(t) * d

    nu_at, _ = _make_chord_branch(data, lam_of_t, seed_nu=nu_seed)

    def f(t):
        lam = lam_of_t(t)
        return data.b(lam) / (nu_at(t) * lam**2) * d

    val, err = _adaptive_integral(f, tol)
    nu_end = complex(nu_at(np.array([1.0]))[0])
    return val, nu_end, err


def _is_branch_point(data, z, tol=BRANCH_GUARD):
    return any(abs(z - bp) < tol for bp in data.branch_points() if abs(bp) > 0)


def integrate_dh(data: SpectralData, path: SheetPath):
    """Quadrature of dh = b/(nu lambda^2) dlambda along a tracked sheet path.

    Consecutive samples are joined by straight chords; endpoint samples may
    lie on branch points (handled with the square-root substitution).
    Returns (value, error estimate).
    """
    pts = list(path)
    if len(pts) < 2:
        return 0.0 + 0.0j, 0.0
    for p in pts[1:-1]:
        if _is_branch_point(data, p.lam) or abs(p.lam) < BRANCH_GUARD:
            raise BranchProximity(f"interior sample {p.lam} too close to a branch point")
    total = 0.0 + 0.0j
    total_err = 0.0
    nu_prev = pts[0].nu
    for k in range(len(pts) - 1):
        p0, p1 = pts[k], pts[k + 1]
        bs = abs(p0.nu) < 1e-13 and _is_branch_point(data, p0.lam)
        be = abs(p1.nu) < 1e-13 and _is_branch_point(data, p1.lam)
        seed = nu_prev if not bs else (p1.nu if abs(p1.nu) > 1e-13 else None)
        val, nu_end, err = _chord_dh(data, p0.lam, p1.lam, seed, bs, be)
        if not be and abs(p1.nu) > 1e-13:
            if abs(nu_end - p1.nu) > abs(nu_end + p1.nu):
                # The path sample sits on the other sheet than the chord
                # continuation; honour the path's declared branch.
                val = -val
                nu_end = -nu_end
        total += val
        total_err += err
        nu_prev = nu_end if abs(nu_end) > 1e-13 else p1.nu
    return total, total_err


# ---------------------------------------------------------------------------
# Guarded polylines
# ---------------------------------------------------------------------------


def _guarded_polyline(z0, z1, obstacles, radius=DETOUR_RADIUS, arc_pts=12):
    """Straight path z0 -> z1 with deterministic semicircular detours.

    Obstacles closer than `radius` to the segment are avoided by a circular
    arc of radius `radius` passed on the left of the travel direction.
    """
    d = z1 - z0
    L = abs(d)
    if L < 1e-14:
        return [z0]
    u = d / L
    events = []
    for c in obstacles:
        if abs(c - z0) < radius or abs(c - z1) < radius:
            continue
        t = ((c - z0) / u).real
        if 0.0 < t < L:
            foot = z0 + t * u
            if abs(foot - c) < radius:
                events.append((t, c))
    events.sort(key=lambda e: e[0])
    pts = [z0]
    for t, c in events:
        dist = abs(z0 + t * u - c)
        w = np.sqrt(max(radius**2 - dist**2, 0.0)) + 0.1 * radius
        A = z0 + (t - w) * u
        B = z0 + (t + w) * u
        rA, rB = abs(A - c), abs(B - c)
        thA, thB = cmath.phase(A - c), cmath.phase(B - c)
        thM = cmath.phase(1j * u)
        sweep_ccw = (thB - thA) % (2.0 * np.pi)
        on_ccw = (thM - thA) % (2.0 * np.pi) <= sweep_ccw
        sweep = sweep_ccw if on_ccw else sweep_ccw - 2.0 * np.pi
        pts.append(A)
        for j in range(1, arc_pts):
            s = j / arc_pts
            r = rA + s * (rB - rA)
            pts.append(c + r * cmath.exp(1j * (thA + s * sweep)))
        pts.append(B)
    pts.append(z1)
    return pts


def anchor_point(data: SpectralData) -> complex:
    """Base point where the additive constant of h is fixed to 0.

    For genus >= 1 this is the first root of a in the deterministic sort
    order (a branch point, so h = 0 is an i*pi*Z value).  For genus 0 it is
    the unimodular zero of conj(b1) * lambda + b1-reflection, i.e. the point
    where the closed-form primitive of dh for constant a vanishes.
    """
    if data.g >= 1:
        return data.roots_of_a()[0][0]
    beta = 8.0 * data.b.coeff(1)
    if abs(beta) < 1e-14:
        raise ValueError("b has no linear term; genus-0 anchor undefined")
    return -np.conj(beta) / beta


def h_values(data: SpectralData, targets, tol=_SEG_TOL):
    """h at each target point, integrated from the anchor (h(anchor) = 0).

    Returns a list of (h, nu_at_target, error) triples.  The overall sheet
    choice is fixed per path; all reported condition residuals are invariant
    under the global sign flip h -> -h.
    """
    z_anchor = anchor_point(data)
    obstacles = data.branch_points()
    out = []
    for z in targets:
        obs = [c for c in obstacles if abs(c - z_anchor) > 1e-9 and abs(c - z) > 1e-9]
        waypoints = _guarded_polyline(z_anchor, z, obs)
        total = 0.0 + 0.0j
        total_err = 0.0
        nu_prev = None
        for k in range(len(waypoints) - 1):
            w0, w1 = waypoints[k], waypoints[k + 1]
            bs = k == 0 and _is_branch_point(data, w0)
            be = k == len(waypoints) - 2 and _is_branch_point(data, w1)
            val, nu_end, err = _chord_dh(data, w0, w1, nu_prev, bs, be, tol)
            total += val
            total_err += err
            nu_prev = nu_end if abs(nu_end) > 1e-13 else None
        out.append((total, nu_prev if nu_prev is not None else 0.0 + 0.0j, total_err))
    return out


def delta_eval(data: SpectralData, lam: complex, base: CurvePoint, base_h=0.0 + 0.0j):
    """Delta = 2 cosh(h(lambda)) with h integrated from the base point.

    Delta is independent of the sheet since h flips sign under the
    hyperelliptic involution.
    """
    obstacles = [
        c
        for c in data.branch_points()
        if abs(c - base.lam) > 1e-9 and abs(c - lam) > 1e-9
    ]
    waypoints = _guarded_polyline(base.lam, lam, obstacles)
    total = 0.0 + 0.0j
    nu_prev = base.nu if abs(base.nu) > 1e-13 else None
    for k in range(len(waypoints) - 1):
        w0, w1 = waypoints[k], waypoints[k + 1]
        bs = k == 0 and _is_branch_point(data, w0)
        be = k == len(waypoints) - 2 and _is_branch_point(data, w1)
        val, nu_end, _ = _chord_dh(data, w0, w1, nu_prev, bs, be)
        total += val
        nu_prev = nu_end if abs(nu_end) > 1e-13 else None
    return 2.0 * np.cosh(base_h + total)


def h_on_circle(data: SpectralData, n: int = 4096):
    """h along the unit circle on a half-offset n-point grid.

    Returns (theta, h) arrays with the anchor normalization h(anchor) = 0.
    The half-step offset keeps grid points off double roots of a on S^1.
    """
    theta = 2.0 * np.pi * (np.arange(n) + 0.5) / n
    lam = np.exp(1j * theta)
    # h at the first grid point, from the anchor.
    (h0, nu0, _), = h_values(data, [lam[0]])
    # Branch-track nu around the circle (factored a: accurate near its roots).
    a_ev = _factored_a(data)
    w = np.sqrt((a_ev(lam) / lam).astype(complex))
    nu = _track_signs(w, nu0 if abs(nu0) > 1e-13 else w[0])
    # Cumulative chord quadrature with 4-point Gauss-Legendre per chord.
    gx, gw = np.polynomial.legendre.leggauss(4)
    lam_ext = np.append(lam, lam[0] * np.exp(2j * np.pi / n))
    dh_seg = np.empty(n, complex)
    z0 = lam_ext[:-1]
    z1 = lam_ext[1:]
    d = z1 - z0
    for_nodes = 0.5 * (1.0 + gx)
    nodes = z0[:, None] + for_nodes[None, :] * d[:, None]
    wvals = np.sqrt((a_ev(nodes) / nodes).astype(complex))
    # Align node branches with the tracked endpoint values.
    ref = np.append(nu, nu[0])[:-1][:, None]
    flip = np.abs(wvals - ref) > np.abs(wvals + ref)
    wvals = np.where(flip, -wvals, wvals)
    integrand = data.b(nodes) / (wvals * nodes**2)
    dh_seg = 0.5 * (integrand @ gw) * d
    h = h0 + np.concatenate(([0.0], np.cumsum(dh_seg)[:-1]))
    return theta, h


# ---------------------------------------------------------------------------
# Condition report
# ---------------------------------------------------------------------------


@dataclass
class ConditionReport:
    """Residuals and values for the five validity conditions of spectral data."""

    residuals: dict = field(default_factory=dict)
    passes: dict = field(default_factory=dict)
    h_at_roots: list = field(default_factory=list)
    h_sym: tuple = (0j, 0j)
    f_sym: tuple = (0j, 0j)
    g_sym: tuple = (0j, 0j)
    sym_integers: tuple = (0, 0)
    parity_even: bool = True
    sym_multiple_unit: bool = True
    quadrature_error: float = 0.0

    @property
    def all_pass(self) -> bool:
        return all(self.passes.values())

    def as_dict(self):
        return {
            "passes": {k: bool(v) for k, v in self.passes.items()},
            "residuals": {k: float(v) for k, v in self.residuals.items()},
            "h_at_roots": [[float(z.real), float(z.imag)] for z in self.h_at_roots],
            "h_sym": [[float(z.real), float(z.imag)] for z in self.h_sym],
            "f_sym": [[float(z.real), float(z.imag)] for z in self.f_sym],
            "g_sym": [[float(z.real), float(z.imag)] for z in self.g_sym],
            "sym_integers": [int(n) for n in self.sym_integers],
            "parity_even": bool(self.parity_even),
            "sym_multiple_unit": bool(self.sym_multiple_unit),
            "quadrature_error": float(self.quadrature_error),
            "all_pass": bool(self.all_pass),
        }


def _dist_to_pi_i_Z(h: complex) -> float:
    k = round(h.imag / np.pi)
    return abs(h - 1j * np.pi * k)


def check_conditions(data: SpectralData, tol: float = 1e-9) -> ConditionReport:
    """Evaluate the five validity conditions and return residuals.

    (i) coefficient reality of a and b; (ii) vanishing real part of the dh
    integral over each straight segment joining reflection-paired roots of a;
    (iii) h in i*pi*Z at every root of a (anchored at the first root);
    (iv) h in i*pi*Z at both Sym points; (v) |a(0)| = 1/16, lambda2 =
    1/lambda1 with Im(lambda1) < 0, Sym points unimodular.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    rep = ConditionReport()

    _, res_a = check_reality(data.a, RealityClass("A", data.g), max(tol, 1e-12))
    _, res_b = check_reality(data.b, RealityClass("B", data.g), max(tol, 1e-12))
    rep.residuals["i"] = max(res_a, res_b)
    rep.passes["i"] = rep.residuals["i"] < tol

    # (ii): straight segments between reflection-paired roots.
    from .polynomials import reflect_pairing

    res_ii = 0.0
    qerr = 0.0
    if data.g >= 1:
        pairs, _ = reflect_pairing(data.a, data.g)
        for (alpha, _m), (alpha2, _m2) in pairs:
            val, _nu, err = _chord_dh(data, alpha, alpha2, None, True, True)
            res_ii = max(res_ii, abs(val.real))
            qerr += err
    rep.residuals["ii"] = res_ii
    rep.passes["ii"] = res_ii < tol

    # (iii): h at every root of a, anchored so h(alpha_1) = 0.
    res_iii = 0.0
    rep.h_at_roots = []
    if data.g >= 1:
        root_pts = [r for r, _m in data.roots_of_a()]
        vals = h_values(data, root_pts[1:])
        rep.h_at_roots = [0.0 + 0.0j] + [v[0] for v in vals]
        qerr += sum(v[2] for v in vals)
        for h in rep.h_at_roots:
            res_iii = max(res_iii, _dist_to_pi_i_Z(h))
    rep.residuals["iii"] = res_iii
    rep.passes["iii"] = res_iii < tol

    # (iv): h at the Sym points.
    (h1, nu1, e1), (h2, nu2, e2) = h_values(data, [data.lambda1, data.lambda2])
    qerr += e1 + e2
    rep.h_sym = (h1, h2)
    rep.f_sym = (np.sinh(h1) / nu1, np.sinh(h2) / nu2)
    rep.g_sym = (np.cosh(h1), np.cosh(h2))
    m = round(h1.imag / np.pi)
    n = round(h2.imag / np.pi)
    rep.sym_integers = (m, n)
    rep.parity_even = (m - n) % 2 == 0
    rep.sym_multiple_unit = abs(m) == 1 and abs(n) == 1
    res_iv = max(_dist_to_pi_i_Z(h1), _dist_to_pi_i_Z(h2))
    rep.residuals["iv"] = res_iv
    rep.passes["iv"] = res_iv < tol

    # (v): normalization of a(0) and the Sym points.
    res_v = max(
        abs(abs(data.a.coeff(0)) - 1.0 / 16.0),
        abs(abs(data.lambda1) - 1.0),
        abs(data.lambda2 - 1.0 / data.lambda1),
    )
    rep.residuals["v"] = res_v
    rep.passes["v"] = res_v < tol and data.lambda1.imag < 0
    rep.quadrature_error = qerr
    return rep
