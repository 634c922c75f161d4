"""Whitham deformation flows on spectral data.

The deformation is generated by a polynomial c of degree <= g+1 obeying the
class-C reality symmetry; it moves (a, b, lambda1, lambda2) through the
mixed-partials identity

    2 bdot a - b adot = 2 lambda a c' - a c - lambda a' c

together with lambdadot_j / lambda_j = -c(lambda_j)/b(lambda_j).  The module
provides the tangent-vector solver, target interpolation for c, shipped
c-selection strategies, an RK4 flow driver with reality re-projection and
event monitoring, and the genus-jump transformations (a, b) <-> (p^2 a, p b).
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

import numpy as np

from .curve import SpectralData, h_values, short_arc_length
from .polynomials import Poly, RealityClass, RealityViolation, check_reality, roots

_COPRIME_TOL = 1e-7
_DELTA_EVENT_MARGIN = 1e-3
_COLLISION_DIST = 1e-4
_ARC_EVENT_TOL = 1e-3


class SingularVectorField(ValueError):
    """a and b share a root; the deformation field is singular."""


class SymSingularity(ValueError):
    """b vanishes at a Sym point."""


class NotSimple(ValueError):
    """b has a multiple root where simple roots are required."""


class StrategyError(ValueError):
    """Strategy inapplicable to the current state."""


class StepRejected(RuntimeError):
    """Reality re-projection exceeded its bound; retry with smaller dt."""


class JumpObstruction(ValueError):
    """Genus-jump precondition (sinh h = 0 at roots of p, pole bound) fails."""


class DivisionResidual(ValueError):
    """p does not divide b (or p^2 does not divide a) within tolerance."""


# ---------------------------------------------------------------------------
# Reality-class real parametrizations
# ---------------------------------------------------------------------------


def _class_b_basis(g: int):
    """Real basis of the class-B coefficient space (dim g+2)."""
    n = g + 2
    basis = []
    for k in range(n):
        mk = g + 1 - k
        if k < mk:
            e = np.zeros(n, complex)
            e[k] = 1.0
            e[mk] = -1.0
            basis.append(e)
            e = np.zeros(n, complex)
            e[k] = 1j
            e[mk] = 1j
            basis.append(e)
        elif k == mk:
            e = np.zeros(n, complex)
            e[k] = 1j
            basis.append(e)
    return basis


def _class_c_basis(g: int):
    """Real basis of the class-C coefficient space (dim g+2)."""
    n = g + 2
    basis = []
    for k in range(n):
        mk = g + 1 - k
        if k < mk:
            e = np.zeros(n, complex)
            e[k] = 1.0
            e[mk] = 1.0
            basis.append(e)
            e = np.zeros(n, complex)
            e[k] = 1j
            e[mk] = -1j
            basis.append(e)
        elif k == mk:
            e = np.zeros(n, complex)
            e[k] = 1.0
            basis.append(e)
    return basis


def _class_a_tangent_basis(a: Poly, g: int):
    """Real basis of class-A tangents preserving |a(0)| (dim 2g)."""
    n = 2 * g + 1
    basis = []
    if g == 0:
        return basis
    a0 = a.coeff(0)
    e = np.zeros(n, complex)
    e[0] = 1j * a0
    e[2 * g] = np.conj(1j * a0)
    basis.append(e)
    for k in range(1, g):
        e = np.zeros(n, complex)
        e[k] = 1.0
        e[2 * g - k] = 1.0
        basis.append(e)
        e = np.zeros(n, complex)
        e[k] = 1j
        e[2 * g - k] = -1j
        basis.append(e)
    e = np.zeros(n, complex)
    e[g] = 1.0
    basis.append(e)
    return basis


def _fit_class_c(g: int, points, values):
    """Least-squares class-C polynomial through (points, values).

    Returns (Poly, residual); the fit is minimum-norm in the real basis, so
    unconstrained directions (e.g. the i*b multiple) stay at zero.
    """
    basis = _class_c_basis(g)
    pts = np.asarray(points, complex)
    powers = pts[:, None] ** np.arange(g + 2)[None, :]
    cols = [powers @ e for e in basis]
    A = np.column_stack([np.concatenate([col.real, col.imag]) for col in cols])
    rhs_c = np.asarray(values, complex)
    rhs = np.concatenate([rhs_c.real, rhs_c.imag])
    x, _, _, _ = np.linalg.lstsq(A, rhs, rcond=None)
    coeffs = sum(xi * e for xi, e in zip(x, basis))
    residual = float(np.max(np.abs(A @ x - rhs))) if len(rhs) else 0.0
    return Poly(coeffs), residual


# ---------------------------------------------------------------------------
# CVector and the tangent solver
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CVector:
    """Deformation direction: class-C polynomial c of degree <= g+1."""

    c: Poly
    g: int

    def __post_init__(self):
        ok, res = check_reality(self.c, RealityClass("C", self.g), 1e-8)
        if self.c.degree > self.g + 1 or (not self.c.is_zero and not ok):
            raise RealityViolation(
                f"c is not class C({self.g}): residual {res:.3e}"
            )

    def __call__(self, lam):
        return self.c(lam)


def sym_normalization_defect(c: Poly, b: Poly, lam1: complex, lam2: complex) -> complex:
    """c(l1)/b(l1) + c(l2)/b(l2); zero for flows fixing lambda1*lambda2."""
    return c(lam1) / b(lam1) + c(lam2) / b(lam2)


def _derivative_raw(a: Poly, b: Poly, lam1, lam2, g: int, c: Poly):
    """Solve the mixed-partials identity for (adot, bdot, l1dot, l2dot)."""
    ra = roots(a) if a.degree >= 1 else []
    rb = roots(b) if b.degree >= 1 else []
    for za, _ in ra:
        for zb, _ in rb:
            if abs(za - zb) < _COPRIME_TOL:
                raise SingularVectorField(
                    f"a and b share the root {za} within {_COPRIME_TOL:g}"
                )
    if abs(b(lam1)) < 1e-12 or abs(b(lam2)) < 1e-12:
        raise SymSingularity("b vanishes at a Sym point")

    ncoef = 3 * g + 2  # identity degree <= 3g+1
    a_vec = np.array([a.coeff(k) for k in range(2 * g + 1)], complex)
    b_vec = np.array([b.coeff(k) for k in range(g + 2)], complex)

    def mul_coeffs(u, v, out_len):
        out = np.zeros(out_len, complex)
        for i, ui in enumerate(u):
            if ui != 0:
                hi = min(len(v), out_len - i)
                out[i : i + hi] += ui * v[:hi]
        return out

    cols = []
    a_basis = _class_a_tangent_basis(a, g)
    for e in a_basis:
        cols.append(-mul_coeffs(b_vec, e, ncoef))  # -b * adot
    b_basis = _class_b_basis(g)
    for e in b_basis:
        cols.append(2.0 * mul_coeffs(a_vec, e, ncoef))  # 2 a * bdot

    rhs_poly = 2 * Poly([0.0, 1.0]) * a * c.derivative() - a * c - Poly(
        [0.0, 1.0]
    ) * a.derivative() * c
    rhs = np.array([rhs_poly.coeff(k) for k in range(ncoef)], complex)

    A = np.column_stack(
        [np.concatenate([col.real, col.imag]) for col in cols]
    ) if cols else np.zeros((2 * ncoef, 0))
    r = np.concatenate([rhs.real, rhs.imag])
    x, _, _, _ = np.linalg.lstsq(A, r, rcond=None)
    residual = float(np.max(np.abs(A @ x - r))) if r.size else 0.0
    scale = max(1.0, float(np.max(np.abs(r))) if r.size else 0.0)
    if residual > 1e-9 * scale:
        raise SingularVectorField(
            f"tangent solve residual {residual:.3e} exceeds tolerance"
        )

    na = len(a_basis)
    adot_vec = sum(
        (xi * e for xi, e in zip(x[:na], a_basis)), np.zeros(2 * g + 1, complex)
    )
    bdot_vec = sum(
        (xi * e for xi, e in zip(x[na:], b_basis)), np.zeros(g + 2, complex)
    )
    l1dot = -lam1 * c(lam1) / b(lam1)
    l2dot = -lam2 * c(lam2) / b(lam2)
    return Poly(adot_vec), Poly(bdot_vec), l1dot, l2dot


def derivative(data: SpectralData, c: CVector):
    """Whitham tangent vector (adot, bdot, l1dot, l2dot) for direction c.

    adot is the unique class-A tangent preserving |a(0)| and bdot the unique
    class-B polynomial solving the mixed-partials identity; both are found by
    a real-parametrized least-squares solve whose residual is asserted to
    vanish.
    """
    return _derivative_raw(
        data.a, data.b, data.lambda1, data.lambda2, data.g, c.c
    )


def solve_c_for_targets(data: SpectralData, targets: dict, nu_at_roots=None) -> CVector:
    """Class-C polynomial c realizing desired values of d/dt h at roots of b.

    `targets` maps (approximate) roots of b to the desired time derivative of
    h at that root; since dh/dlambda vanishes at roots of b, this equals the
    full time derivative of h evaluated at the moving root.  The remaining
    i*b freedom is fixed by the Sym-point normalization.
    """
    if data.b.degree < 1:
        raise NotSimple("b is constant; no roots to target")
    rb = roots(data.b)
    if any(m > 1 for _, m in rb):
        raise NotSimple("b has a multiple root")
    root_pts = [r for r, _ in rb]
    matched = {}
    for key, w in targets.items():
        dists = [abs(complex(key) - r) for r in root_pts]
        i = int(np.argmin(dists))
        if dists[i] > 1e-5:
            raise ValueError(f"target key {key} matches no root of b")
        matched[i] = complex(w)
    if nu_at_roots is None:
        nu_at_roots = [v[1] for v in h_values(data, root_pts)]
    pts, vals = [], []
    for i, r in enumerate(root_pts):
        w = matched.get(i, 0.0 + 0.0j)
        # d/dt h(beta) = c(beta) / (nu(beta) * beta)  =>  c(beta) = w nu beta.
        pts.append(r)
        vals.append(w * nu_at_roots[i] * r)
    c0, residual = _fit_class_c(data.g, pts, vals)
    scale = max(1.0, float(np.max(np.abs(vals))) if vals else 0.0)
    if residual > 1e-8 * scale:
        raise RealityViolation(
            f"targets violate the class-C reality constraints "
            f"(interpolation residual {residual:.3e})"
        )
    S = sym_normalization_defect(c0, data.b, data.lambda1, data.lambda2)
    r_corr = float((1j * S / 2.0).real)
    c = c0 + r_corr * (1j * data.b)
    return CVector(c, data.g)


# ---------------------------------------------------------------------------
# Flow state, events, monitors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FlowEvent:
    kind: str
    location: complex
    time: float
    value: float = 0.0


@dataclass
class FlowState:
    """Spectral data along a Whitham trajectory.

    lambda2 is carried explicitly because non-normalized directions (such as
    the rotation flow c = i*b) move the Sym points off the lambda2 =
    1/lambda1 slice while remaining perfectly good deformations.
    """

    a: Poly
    b: Poly
    lam1: complex
    lam2: complex
    g: int
    t: float = 0.0
    events: list = field(default_factory=list)

    @classmethod
    def from_data(cls, d: SpectralData) -> "FlowState":
        return cls(d.a, d.b, d.lambda1, d.lambda2, d.g)

    def to_spectral_data(self) -> SpectralData:
        if abs(self.lam2 - 1.0 / self.lam1) > 1e-6:
            raise ValueError("state is off the normalized lambda2 = 1/lambda1 slice")
        return SpectralData(self.a, self.b, self.lam1, self.g)


def _project_reality(a: Poly, b: Poly, g: int):
    """Project (a, b) onto their coefficient symmetry classes and |a(0)|=1/16."""
    av = np.array([a.coeff(k) for k in range(2 * g + 1)], complex)
    av = 0.5 * (av + np.conj(av[::-1]))
    mag = abs(av[0])
    if mag > 0:
        av *= (1.0 / 16.0) / mag
    bv = np.array([b.coeff(k) for k in range(g + 2)], complex)
    bv = 0.5 * (bv - np.conj(bv[::-1]))
    return Poly(av), Poly(bv)


def monitors(state: FlowState) -> dict:
    """Diagnostics: Delta at roots of b, root distances, short-arc length.

    Threshold crossings are returned as FlowEvents in the "events" entry.
    """
    out: dict = {"t": state.t, "events": []}
    ra = roots(state.a) if state.a.degree >= 1 else []
    rb = roots(state.b) if state.b.degree >= 1 else []
    ra_pts = [r for r, m in ra for _ in range(m)]
    rb_pts = [r for r, m in rb for _ in range(m)]

    # Pairwise distances of roots of a.
    min_aa = np.inf
    for i in range(len(ra_pts)):
        for j in range(i + 1, len(ra_pts)):
            dist = abs(ra_pts[i] - ra_pts[j])
            if dist < min_aa:
                min_aa = dist
            if dist < _COLLISION_DIST:
                mid = 0.5 * (ra_pts[i] + ra_pts[j])
                on_circle = abs(abs(mid) - 1.0) < 1e-3
                out["events"].append(
                    FlowEvent(
                        "RootsOfACollideOnCircle" if on_circle else "RootsOfACollideOffCircle",
                        mid,
                        state.t,
                        dist,
                    )
                )
    # Multiple roots count as an existing collision.
    for r, m in ra:
        if m > 1:
            on_circle = abs(abs(r) - 1.0) < 1e-3
            out["events"].append(
                FlowEvent(
                    "RootsOfACollideOnCircle" if on_circle else "RootsOfACollideOffCircle",
                    r,
                    state.t,
                    0.0,
                )
            )
            min_aa = 0.0
    out["min_root_a_distance"] = float(min_aa)

    min_ab = np.inf
    for zb in rb_pts:
        for za in ra_pts:
            dist = abs(za - zb)
            if dist < min_ab:
                min_ab = dist
            if dist < _COLLISION_DIST:
                out["events"].append(FlowEvent("CommonRootOfAandB", zb, state.t, dist))
    out["min_root_ab_distance"] = float(min_ab)

    min_symb = np.inf
    for zb in rb_pts:
        for zs in (state.lam1, state.lam2):
            dist = abs(zb - zs)
            if dist < min_symb:
                min_symb = dist
            if dist < _COLLISION_DIST:
                out["events"].append(FlowEvent("SymPointMeetsRootOfB", zb, state.t, dist))
    out["min_sym_b_distance"] = float(min_symb)

    arc = None
    try:
        sd = state.to_spectral_data()
        arc = short_arc_length(sd)
    except ValueError:
        sd = None
    if arc is not None:
        out["short_arc_length"] = float(arc)
        if arc < _ARC_EVENT_TOL:
            out["events"].append(FlowEvent("ShortArcDegenerate", state.lam1, state.t, 0.0))
        elif abs(arc - np.pi) < _ARC_EVENT_TOL:
            out["events"].append(
                FlowEvent("ShortArcDegenerate", state.lam1, state.t, float(np.pi))
            )

    deltas = []
    if sd is not None and rb_pts and min_ab > 1e-3:
        for (h, _nu, _err), zb in zip(h_values(sd, rb_pts), rb_pts):
            delta = complex(2.0 * np.cosh(h))
            deltas.append(delta)
            if abs(delta.real) - 2.0 > -_DELTA_EVENT_MARGIN and abs(delta.imag) < 1e-6:
                out["events"].append(
                    FlowEvent("DeltaAtRootOfBNearPm2", zb, state.t, float(delta.real))
                )
    out["delta_at_roots_of_b"] = deltas
    return out


# ---------------------------------------------------------------------------
# Strategies
# ---------------------------------------------------------------------------


class FunctionStrategy:
    """Wrap a plain function state -> Poly as a strategy (used for custom
    directions such as the rotation flow c = i*b)."""

    def __init__(self, fn, kind="custom"):
        self.fn = fn
        self.kind = kind

    def c_for(self, state: FlowState) -> Poly:
        return self.fn(state)


class ShrinkShortArc:
    """Strictly decrease the anticlockwise arc from lambda1 to lambda2.

    Chooses the minimum-norm class-C c with c/b = -i*rate at lambda1 and
    +i*rate at lambda2: both Sym points then move so the short arc shrinks,
    and the Sym normalization holds by construction.
    """

    kind = "shrink"

    def __init__(self, rate: float = 1.0):
        self.rate = float(rate)

    def c_for(self, state: FlowState) -> Poly:
        b1, b2 = state.b(state.lam1), state.b(state.lam2)
        if abs(b1) < 1e-12 or abs(b2) < 1e-12:
            raise StrategyError("b vanishes at a Sym point")
        pts = [state.lam1, state.lam2]
        vals = [-1j * self.rate * b1, 1j * self.rate * b2]
        c, res = _fit_class_c(state.g, pts, vals)
        if res > 1e-8 * max(1.0, abs(b1), abs(b2)):
            raise StrategyError(f"no class-C direction fits (residual {res:.3e})")
        return c


def _solve_c_for_bdot(state: FlowState, constraints):
    """Class-C direction c realizing prescribed values of d/dt b at roots of b.

    At a root beta of b the structure identity 2*bdot*a - b*adot =
    2*lam*a*c' - a*c - lam*a'*c reduces to a real-linear map c -> bdot(beta);
    the map is inverted by least squares in the real class-C basis.  Raises
    StrategyError when the constraints are inconsistent with class C.
    """
    basis = _class_c_basis(state.g)
    rows, rhs = [], []
    for beta, bdot in constraints:
        a_val = state.a(beta)
        if abs(a_val) < 1e-12:
            raise StrategyError("root of b too close to a root of a")
        ap = state.a.derivative()(beta)
        row = []
        for e in basis:
            B = Poly(e)
            val = (
                beta * B.derivative()(beta)
                - 0.5 * B(beta)
                - beta * ap * B(beta) / (2.0 * a_val)
            )
            row.append(val)
        rows.append(row)
        rhs.append(complex(bdot))
    A_c = np.array(rows)
    A = np.vstack([A_c.real, A_c.imag])
    r = np.concatenate([np.asarray(rhs).real, np.asarray(rhs).imag])
    x, _, _, _ = np.linalg.lstsq(A, r, rcond=None)
    resid = float(np.max(np.abs(A @ x - r)))
    scale = max(1.0, float(np.max(np.abs(r))))
    if resid > 1e-8 * scale:
        raise StrategyError(
            f"prescribed root-of-b velocities are not realizable in class C "
            f"(residual {resid:.3e})"
        )
    return Poly(sum(xi * e for xi, e in zip(x, basis)))


class SeparateDoubleRootOfB:
    """Split a unit-circle double root beta of b along or off the circle.

    The root pair of the perturbed b sits at displacements delta with
    delta^2 = -bdot(beta) dt / q(beta), q = b''(beta)/2; prescribing
    bdot(beta) = sign * beta^2 q(beta) therefore separates tangentially
    (sign = +1, the pair stays on the circle) or radially (sign = -1, the
    pair leaves the circle as a reflection pair).  The double root location
    is latched at the first call; once split, the pair nearest the latched
    center keeps being driven apart at unit speed.
    """

    kind = "separate"

    def __init__(self, sign: int):
        if sign not in (1, -1):
            raise StrategyError("sign must be +1 or -1")
        self.sign = sign
        self._center = None

    def c_for(self, state: FlowState) -> Poly:
        rb = roots(state.b) if state.b.degree >= 1 else []
        pts = [r for r, m in rb for _ in range(m)]
        if self._center is None:
            doubles = [r for r, m in rb if m >= 2]
            if not doubles:
                raise StrategyError("b has no double root to separate")
            self._center = doubles[0]
        if len(pts) < 2:
            raise StrategyError("b has fewer than two roots")
        pts.sort(key=lambda r: abs(r - self._center))
        b1, b2 = pts[0], pts[1]
        self._center = 0.5 * (b1 + b2)
        if abs(b1 - b2) < 1e-6:
            beta = self._center
            q = 0.5 * state.b.derivative().derivative()(beta)
            constraints = [(beta, self.sign * beta**2 * q)]
        else:
            # Already split: keep moving the pair apart at unit speed (root
            # velocity = -bdot/b').  Class B admits only tangential motion of
            # unit-circle roots and radial motion of reflection pairs, so the
            # direction is picked by the pair's geometry, not the sign flag.
            on_circle = max(abs(abs(b1) - 1.0), abs(abs(b2) - 1.0)) < 1e-6
            if on_circle:
                # Both roots are involution-fixed circle points: constrain
                # each to move tangentially away from the other.
                pairs = ((b1, b2), (b2, b1))
            else:
                # Reflection pair: the inner root's velocity is slaved to the
                # outer one by class-B reality, so constrain only the outer.
                outer = b1 if abs(b1) >= abs(b2) else b2
                inner = b2 if outer is b1 else b1
                pairs = ((outer, inner),)
            constraints = []
            for beta, other in pairs:
                v = 1j * beta if on_circle else beta / abs(beta)
                if (v * np.conj(beta - other)).real < 0:
                    v = -v
                bp = state.b.derivative()(beta)
                constraints.append((beta, -v * bp))
        c0 = _solve_c_for_bdot(state, constraints)
        S = sym_normalization_defect(c0, state.b, state.lam1, state.lam2)
        return c0 + float((1j * S / 2.0).real) * (1j * state.b)


class MoveCircleRoot:
    """Move one simple root beta of b with c = dir*((lambda+beta)/(lambda-beta))*b.

    c vanishes at every other root of b, so their h-values are frozen.
    """

    kind = "move-root"

    def __init__(self, beta: complex, direction: float = 1.0):
        self.beta = complex(beta)
        self.direction = float(direction)

    def c_for(self, state: FlowState) -> Poly:
        rb = roots(state.b) if state.b.degree >= 1 else []
        if not rb:
            raise StrategyError("b has no roots")
        dists = [abs(r - self.beta) for r, _ in rb]
        i = int(np.argmin(dists))
        beta, mult = rb[i]
        if mult > 1:
            raise StrategyError("targeted root of b is not simple")
        if dists[i] > 0.5:
            raise StrategyError("no root of b near the requested location")
        self.beta = beta  # track the moving root between calls
        q, rem = state.b.divmod(Poly([-beta, 1.0]))
        c0 = self.direction * (Poly([beta, 1.0]) * q)
        cv = np.array([c0.coeff(k) for k in range(state.g + 2)], complex)
        cv = 0.5 * (cv + np.conj(cv[::-1]))
        c0 = Poly(cv)
        S = sym_normalization_defect(c0, state.b, state.lam1, state.lam2)
        return c0 + float((1j * S / 2.0).real) * (1j * state.b)


class TrackTargets:
    """Steer the h-values at the roots of b along prescribed curves.

    `curves` is a list of callables t -> desired h value, one per root of b
    in the deterministic root order at the first call; a proportional
    feedback term corrects integration drift.
    """

    kind = "track"

    def __init__(self, curves, gain: float = 1.0, dt_fd: float = 1e-6):
        self.curves = list(curves)
        self.gain = float(gain)
        self.dt_fd = float(dt_fd)
        self._root_ref = None
        self._h_ref = None

    def c_for(self, state: FlowState) -> Poly:
        sd = state.to_spectral_data()
        rb = roots(state.b)
        if any(m > 1 for _, m in rb):
            raise NotSimple("b has a multiple root")
        pts = [r for r, _ in rb]
        if self._root_ref is None:
            order = list(range(len(pts)))
        else:
            order = []
            for ref in self._root_ref:
                order.append(int(np.argmin([abs(p - ref) for p in pts])))
        pts = [pts[i] for i in order]
        if len(pts) != len(self.curves):
            raise StrategyError("number of curves must match the roots of b")
        self._root_ref = pts
        vals = h_values(sd, pts)
        h = np.array([v[0] for v in vals])
        nu = np.array([v[1] for v in vals])
        if self._h_ref is not None and np.linalg.norm(h - self._h_ref) > np.linalg.norm(
            h + self._h_ref
        ):
            h, nu = -h, -nu  # global sheet flip between calls
        self._h_ref = h
        targets = {}
        for k, (p, curve) in enumerate(zip(pts, self.curves)):
            want = complex(curve(state.t))
            want_dot = (complex(curve(state.t + self.dt_fd)) - want) / self.dt_fd
            targets[p] = want_dot + self.gain * (want - h[k])
        return solve_c_for_targets(sd, targets, nu_at_roots=list(nu)).c


_STRATEGY_KINDS = {
    "shrink": ShrinkShortArc,
    "separate": SeparateDoubleRootOfB,
    "move-root": MoveCircleRoot,
    "track": TrackTargets,
}


def make_strategy(kind: str, **params):
    """Construct a shipped strategy: shrink | separate | move-root | track."""
    if kind not in _STRATEGY_KINDS:
        raise StrategyError(f"unknown strategy kind {kind!r}")
    return _STRATEGY_KINDS[kind](**params)


# ---------------------------------------------------------------------------
# RK4 stepping
# ---------------------------------------------------------------------------


def _state_axpy(state: FlowState, dt: float, deriv) -> FlowState:
    adot, bdot, l1dot, l2dot = deriv
    return FlowState(
        state.a + dt * adot,
        state.b + dt * bdot,
        state.lam1 + dt * l1dot,
        state.lam2 + dt * l2dot,
        state.g,
        state.t + dt,
        state.events,
    )


def step(state: FlowState, strategy, dt: float, with_monitors: bool = True) -> FlowState:
    """One classical RK4 step of the Whitham flow, with reality projection.

    The direction c is re-evaluated from the strategy at every RK4 stage.
    After the step, a and b are projected back onto their reality classes
    and |a(0)| = 1/16; for normalized directions lambda2 is snapped back to
    1/lambda1.  A projection larger than 10*dt^4*scale raises StepRejected.
    """
    if dt == 0.0:
        return copy.copy(state)

    def F(s: FlowState):
        c = strategy.c_for(s)
        return _derivative_raw(s.a, s.b, s.lam1, s.lam2, s.g, c)

    c0 = strategy.c_for(state)
    normalized = (
        abs(sym_normalization_defect(c0, state.b, state.lam1, state.lam2)) < 1e-8
    )

    k1 = _derivative_raw(state.a, state.b, state.lam1, state.lam2, state.g, c0)
    k2 = F(_state_axpy(state, 0.5 * dt, k1))
    k3 = F(_state_axpy(state, 0.5 * dt, k2))
    k4 = F(_state_axpy(state, dt, k3))
    comb = tuple(
        (1.0 / 6.0) * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]) for j in range(4)
    )
    new = _state_axpy(state, dt, comb)

    a_proj, b_proj = _project_reality(new.a, new.b, new.g)
    l1 = new.lam1 / abs(new.lam1)
    l2 = new.lam2 / abs(new.lam2)
    if normalized:
        l2 = 1.0 / l1
    scale = max(
        1.0,
        max((abs(z) for z in new.a.coeffs), default=0.0),
        max((abs(z) for z in new.b.coeffs), default=0.0),
    )
    proj = max(
        max(
            (abs(a_proj.coeff(k) - new.a.coeff(k)) for k in range(2 * new.g + 1)),
            default=0.0,
        ),
        max(
            (abs(b_proj.coeff(k) - new.b.coeff(k)) for k in range(new.g + 2)),
            default=0.0,
        ),
        abs(l1 - new.lam1),
        abs(l2 - new.lam2),
    )
    # Floor the bound: flows through root collisions have sqrt-type local
    # behaviour, so the pure dt^4 heuristic would reject arbitrarily small
    # steps even though the projection is already at roundoff level.
    bound = max(10.0 * dt**4, 1e-8) * scale
    if proj > bound:
        raise StepRejected(
            f"reality projection {proj:.3e} exceeds bound {bound:.3e}"
        )
    out = FlowState(a_proj, b_proj, l1, l2, new.g, state.t + dt, list(state.events))
    out.events.append(("projection", out.t, proj))
    if with_monitors:
        mon = monitors(out)
        out.events.extend(mon["events"])
    return out


def run_flow(state: FlowState, strategy, dt: float, steps: int,
             with_monitors: bool = True, max_halvings: int = 8):
    """Integrate `steps` steps of size dt; on StepRejected a step is retried
    as two half steps (recursively, up to max_halvings).  Returns the list of
    states including the initial one."""

    def one_step(s, h, depth):
        try:
            return step(s, strategy, h, with_monitors=with_monitors)
        except StepRejected:
            if depth >= max_halvings:
                raise
            mid = one_step(s, 0.5 * h, depth + 1)
            return one_step(mid, 0.5 * h, depth + 1)

    traj = [state]
    for _ in range(steps):
        traj.append(one_step(traj[-1], dt, 0))
    return traj


# ---------------------------------------------------------------------------
# Genus jumps
# ---------------------------------------------------------------------------


def _pole_bound_ok(d: SpectralData, r: complex, m_p: int, tol=1e-6) -> bool:
    """Check b/((l-l1)(l-l2) l^2 a p) has at worst a simple pole at r."""
    m_a = sum(m for z, m in (roots(d.a) if d.a.degree >= 1 else []) if abs(z - r) < tol)
    m_b = sum(m for z, m in (roots(d.b) if d.b.degree >= 1 else []) if abs(z - r) < tol)
    return m_a + m_p - m_b <= 1


def genus_jump_up(d: SpectralData, p: Poly) -> SpectralData:
    """(a, b) -> (p^2 a, p b): raise the genus by deg p.

    Requires p in class P (reflection-symmetric with |p(0)| = 1), sinh(h) = 0
    at every root of p (h in i*pi*Z, checked by quadrature), and the pole
    bound mult_a + mult_p - mult_b <= 1 at each root of p.
    """
    deg = p.degree
    if deg < 1:
        raise ValueError("p must be non-constant")
    ok, res = check_reality(p, RealityClass("P", deg), 1e-8)
    if not ok:
        raise RealityViolation(f"p is not class P: residual {res:.3e}")
    root_list = roots(p)
    for r, m in root_list:
        if not _pole_bound_ok(d, r, m):
            raise JumpObstruction(f"pole bound violated at root {r} of p")
    targets = [r for r, _ in root_list]
    for (h, _nu, _err), r in zip(h_values(d, targets), targets):
        k = round(h.imag / np.pi)
        if abs(h - 1j * np.pi * k) > 1e-8:
            raise JumpObstruction(
                f"sinh(h) != 0 at root {r} of p (h = {h:.6g})"
            )
    return SpectralData((p * p) * d.a, p * d.b, d.lambda1, d.g + deg)


def _infer_jump_divisor(d: SpectralData) -> Poly:
    """Class-P divisor from the declared multiple roots of a."""
    if d.a.degree < 1:
        raise JumpObstruction("a has no roots; nothing to divide out")
    factors = []
    for r, m in roots(d.a):
        factors.extend([r] * (m // 2))
    if not factors:
        raise JumpObstruction("a has no multiple roots; no jump divisor")
    q = Poly.from_roots(factors)
    # Unimodular rescale making q class P: the root set is reflection
    # symmetric, so the reflected polynomial is conj(q(0)) * q.
    kappa = complex(np.conj(q.coeff(0)))
    if abs(abs(kappa) - 1.0) > 1e-6:
        raise JumpObstruction("multiple-root set is not reflection symmetric")
    phase = np.exp(0.5j * np.angle(kappa))
    return phase * q


def genus_jump_down(d: SpectralData, p: Poly | None = None):
    """(p^2 a, p b) -> (a, b): lower the genus by deg p.

    When p is omitted it is inferred from the clustered multiple roots of a.
    Returns (data, p); raises DivisionResidual when p^2 does not divide a or
    p does not divide b within 1e-8.
    """
    if p is None:
        p = _infer_jump_divisor(d)
    deg = p.degree
    if deg < 1 or deg > d.g:
        raise ValueError("divisor degree must be in [1, g]")
    a2, ra = d.a.divmod(p * p)
    b2, rb = d.b.divmod(p)
    scale = max(1.0, max((abs(z) for z in d.a.coeffs), default=0.0))
    res = max(
        max((abs(z) for z in ra.coeffs), default=0.0),
        max((abs(z) for z in rb.coeffs), default=0.0),
    )
    if res > 1e-8 * scale:
        raise DivisionResidual(
            f"p does not divide (a, b): residual {res:.3e}"
        )
    return SpectralData(a2, b2, d.lambda1, d.g - deg), p
