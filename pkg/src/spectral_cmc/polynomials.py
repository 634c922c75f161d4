"""Complex polynomial arithmetic with reality-symmetry classes.

Polynomials are stored lowest-degree-first as tuples of complex numbers.
Four symmetry classes under the reflection lambda -> 1/conj(lambda) are
supported; they are the coefficient-level constraints satisfied by the
polynomials a, b, c, p that make up spectral data of finite-type CMC
cylinders in the 3-sphere:

    A(g):  lambda^{2g}  conj(a(1/conj(lambda))) =  a(lambda),
           and lambda^{-g} a(lambda) <= 0 on the unit circle
    B(g):  lambda^{g+1} conj(b(1/conj(lambda))) = -b(lambda)
    C(g):  lambda^{g+1} conj(c(1/conj(lambda))) =  c(lambda)
    P(n):  lambda^{n}   conj(p(1/conj(lambda))) =  p(lambda), |p(0)| = 1
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ROOT_CLUSTER_TOL = 1e-7
_SIGN_GRID = 1024


class DegreeError(ValueError):
    """Reflection degree smaller than the polynomial degree."""


class DegenerateError(ValueError):
    """Operation undefined for the zero polynomial."""


class RealityViolation(ValueError):
    """A reality-symmetry constraint is violated beyond tolerance."""


class Poly:
    """Immutable complex polynomial, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = [complex(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @property
    def degree(self) -> int:
        return max(len(self.coeffs) - 1, 0)

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def __call__(self, lam):
        acc = 0.0 + 0.0j if np.isscalar(lam) else np.zeros(np.shape(lam), complex)
        for c in reversed(self.coeffs):
            acc = acc * lam + c
        return acc

    def coeff(self, k: int) -> complex:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0.0 + 0.0j

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self.coeff(k) + other.coeff(k) for k in range(n)])

    def __sub__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self.coeff(k) - other.coeff(k) for k in range(n)])

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, Poly):
            if self.is_zero or other.is_zero:
                return Poly([])
            out = [0j] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, ci in enumerate(self.coeffs):
                for j, cj in enumerate(other.coeffs):
                    out[i + j] += ci * cj
            return Poly(out)
        return Poly([complex(other) * c for c in self.coeffs])

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({list(self.coeffs)!r})"

    def derivative(self) -> "Poly":
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:])

    def shift(self, n: int) -> "Poly":
        """Multiply by lambda^n (n >= 0)."""
        return Poly([0j] * n + list(self.coeffs))

    def divmod(self, divisor: "Poly") -> tuple["Poly", "Poly"]:
        """Long division; returns (quotient, remainder)."""
        if divisor.is_zero:
            raise DegenerateError("division by zero polynomial")
        rem = list(self.coeffs)
        d = divisor.degree
        lead = divisor.coeffs[-1]
        quot = [0j] * max(len(rem) - d, 0)
        for k in range(len(rem) - 1, d - 1, -1):
            q = rem[k] / lead
            quot[k - d] = q
            for j in range(d + 1):
                rem[k - d + j] -= q * divisor.coeffs[j]
        return Poly(quot), Poly(rem[:d])

    @staticmethod
    def from_roots(root_list, leading=1.0 + 0.0j) -> "Poly":
        p = Poly([leading])
        for r in root_list:
            p = p * Poly([-r, 1.0])
        return p


def eval(p: Poly, lam):  # noqa: A001 - module-level name required by API
    """Horner evaluation of p at lam (scalar or array)."""
    return p(lam)


def conjugate_reflect(p: Poly, n: int) -> Poly:
    """Return lambda -> lambda^n * conj(p(1/conj(lambda))).

    Coefficient k of the result is the conjugate of coefficient n-k of the
    input; requires n >= degree(p).
    """
    if n < p.degree:
        raise DegreeError(f"reflection degree {n} < polynomial degree {p.degree}")
    return Poly([np.conj(p.coeff(n - k)) for k in range(n + 1)])


@dataclass(frozen=True)
class RealityClass:
    """Symmetry class selector: kind in {"A","B","C","P"} plus its degree.

    For A/B/C the parameter is the spectral genus g; for P it is deg p.
    """

    kind: str
    g: int

    def __post_init__(self):
        if self.kind not in ("A", "B", "C", "P"):
            raise ValueError(f"unknown reality class {self.kind!r}")
        if self.g < 0:
            raise ValueError("class parameter must be >= 0")

    @property
    def reflection_degree(self) -> int:
        if self.kind == "A":
            return 2 * self.g
        if self.kind == "P":
            return self.g
        return self.g + 1

    @property
    def reflection_sign(self) -> float:
        return -1.0 if self.kind == "B" else 1.0


def check_reality(p: Poly, cls: RealityClass, tol: float) -> tuple[bool, float]:
    """Check the coefficient symmetry of `cls` (and its side conditions).

    Returns (passed, max residual).  The residual combines the coefficient
    symmetry defect with, for class A, any positive excursion of
    lambda^{-g} a on a 1024-point unit-circle grid, and for class P the
    defect of |p(0)| = 1.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = cls.reflection_degree
    if p.degree > n:
        return False, float("inf")
    refl = conjugate_reflect(p, n)
    target = cls.reflection_sign * p
    residual = max(
        (abs(refl.coeff(k) - target.coeff(k)) for k in range(n + 1)), default=0.0
    )
    passed = residual < tol
    if cls.kind == "A":
        lam = np.exp(2j * np.pi * np.arange(_SIGN_GRID) / _SIGN_GRID)
        vals = np.real(p(lam) * lam ** (-cls.g))
        excess = float(max(vals.max(), 0.0))
        residual = max(residual, excess)
        passed = passed and excess < tol
    elif cls.kind == "P":
        defect = abs(abs(p.coeff(0)) - 1.0)
        residual = max(residual, defect)
        passed = passed and defect < tol
    return passed, residual


def roots(p: Poly, cluster_tol: float = ROOT_CLUSTER_TOL):
    """All roots with multiplicities, clustered at relative `cluster_tol`.

    Companion-matrix eigenvalues with two Newton polish steps; clustered
    groups of m nearby eigenvalues are reported as one root of multiplicity
    m, re-polished on the (m-1)-th derivative so declared multiple roots are
    accurate to machine precision.
    """
    if p.is_zero:
        raise DegenerateError("zero polynomial has no well-defined root set")
    if p.degree == 0:
        return []
    monic = np.array(p.coeffs, complex) / p.coeffs[-1]
    n = p.degree
    comp = np.zeros((n, n), complex)
    comp[1:, :-1] = np.eye(n - 1)
    comp[:, -1] = -monic[:-1]
    eig = np.linalg.eigvals(comp)
    dp = p.derivative()
    for _ in range(2):
        fv = p(eig)
        dv = dp(eig)
        ok = np.abs(dv) > 1e-300
        eig = np.where(ok, eig - np.where(ok, fv / np.where(ok, dv, 1.0), 0.0), eig)

    # Greedy clustering at relative tolerance.
    remaining = list(eig)
    clusters: list[list[complex]] = []
    while remaining:
        seed = remaining.pop(0)
        group = [seed]
        scale = max(abs(seed), 1.0)
        keep = []
        for z in remaining:
            if abs(z - seed) <= cluster_tol * scale:
                group.append(z)
            else:
                keep.append(z)
        remaining = keep
        clusters.append(group)

    out = []
    for group in clusters:
        m = len(group)
        z = complex(np.mean(group))
        if m > 1:
            # Newton on the (m-1)-th derivative recovers full precision at
            # an m-fold root.
            q = p
            for _ in range(m - 1):
                q = q.derivative()
            dq = q.derivative()
            for _ in range(3):
                d = dq(z)
                if abs(d) < 1e-300:
                    break
                z -= q(z) / d
        out.append((z, m))
    out.sort(key=lambda rm: (rm[0].real, rm[0].imag))
    return out


def reflect_pairing(a: Poly, g: int, tol: float = 1e-8):
    """Pair the roots of a class-A(g) polynomial under lambda -> 1/conj(lambda).

    Returns (pairs, circle_roots): `pairs` is a list of ((alpha, m), (alpha',
    m)) with alpha' ~ 1/conj(alpha) off the unit circle; `circle_roots` lists
    the self-paired unimodular roots as (alpha, m).  Raises RealityViolation
    if some root has no partner within tolerance.
    """
    ok, res = check_reality(a, RealityClass("A", g), max(tol, 1e-8))
    if not ok:
        raise RealityViolation(f"polynomial is not class A({g}): residual {res:.3e}")
    root_list = roots(a)
    pairs = []
    circle = []
    used = [False] * len(root_list)
    for i, (alpha, m) in enumerate(root_list):
        if used[i]:
            continue
        if abs(abs(alpha) - 1.0) <= tol:
            used[i] = True
            circle.append((alpha, m))
            continue
        mirror = 1.0 / np.conj(alpha)
        partner = None
        for j in range(i + 1, len(root_list)):
            beta, mj = root_list[j]
            if used[j] or mj != m:
                continue
            if abs(beta - mirror) <= tol * max(abs(mirror), 1.0):
                partner = j
                break
        if partner is None:
            raise RealityViolation(
                f"root {alpha} has no reflection partner within {tol:g}"
            )
        used[i] = used[partner] = True
        pairs.append(((alpha, m), (root_list[partner][0], m)))
    return pairs, circle
