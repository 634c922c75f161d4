"""Potentials, polynomial Killing fields, frames, and surface synthesis core.

A potential is a 2x2 Laurent matrix polynomial xi(lambda) = sum_{d=-1}^{g}
xi_d lambda^d with xi_{-1} = r [[0, i], [0, 0]] (r > 0) and the reality
condition xi_d = -xi_{g-1-d}^dagger.  The polynomial Killing field zeta(z)
solves the Lax equation d zeta = [zeta, alpha(zeta)], where alpha is the
connection form built from the lambda^{-1} and constant Laurent entries of
zeta; extended frames F_lambda solve dF = F alpha_lambda, and the immersion
into S^3 is f = F_{lambda1} F_{lambda2}^{-1}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm, polar

from .polynomials import Poly, conjugate_reflect, reflect_pairing, roots

_UNITARITY_CADENCE = 16


class SelectionError(ValueError):
    """Invalid root selection for the off-diagonal potential."""


class IntegratorDrift(RuntimeError):
    """Reality or unitarity drift exceeded its bound during integration."""


class GaugeError(ValueError):
    """A gauge-dependent quantity is outside its normalized form."""


class NotPeriodic(ValueError):
    """The Killing field is not periodic with the requested period."""


class PeriodNotFound(RuntimeError):
    """Period search failed to reach the closing threshold."""


# ---------------------------------------------------------------------------
# Potential
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Potential:
    """Laurent coefficients xi_{-1}, ..., xi_g (index 0 holds power -1)."""

    xi: tuple

    def __post_init__(self):
        mats = tuple(np.array(m, complex).reshape(2, 2) for m in self.xi)
        object.__setattr__(self, "xi", mats)
        if len(mats) < 2:
            raise ValueError("potential needs Laurent powers -1..g with g >= 0")
        lead = mats[0]
        if abs(lead[0, 0]) + abs(lead[1, 0]) + abs(lead[1, 1]) > 1e-10:
            raise GaugeError("xi_{-1} must be strictly upper triangular")
        if not (lead[0, 1].imag > 0 and abs(lead[0, 1].real) < 1e-10):
            raise GaugeError("xi_{-1} upper-right entry must lie in i*R+")
        res = self.reality_residual()
        if res > 1e-8:
            raise GaugeError(f"reality condition violated: residual {res:.3e}")

    @property
    def g(self) -> int:
        return len(self.xi) - 2

    def coeff(self, d: int) -> np.ndarray:
        """Laurent coefficient of lambda^d (zero outside -1..g)."""
        idx = d + 1
        if 0 <= idx < len(self.xi):
            return self.xi[idx]
        return np.zeros((2, 2), complex)

    def __call__(self, lam: complex) -> np.ndarray:
        return sum(
            m * lam**d for d, m in zip(range(-1, self.g + 1), self.xi)
        )

    def reality_residual(self) -> float:
        res = 0.0
        for d in range(-1, self.g + 1):
            defect = self.coeff(d) + self.coeff(self.g - 1 - d).conj().T
            res = max(res, float(np.max(np.abs(defect))))
        return res

    def a_poly(self) -> Poly:
        """a(lambda) = -lambda det xi(lambda), as an exact polynomial."""
        entries = {}
        for i in range(2):
            for j in range(2):
                entries[i, j] = Poly([self.coeff(d)[i, j] for d in range(-1, self.g + 1)])
        det_shifted = entries[0, 0] * entries[1, 1] - entries[0, 1] * entries[1, 0]
        # det_shifted = lambda^2 det xi; its constant term vanishes.
        coeffs = list(det_shifted.coeffs)
        if coeffs and abs(coeffs[0]) > 1e-10:
            raise GaugeError("lambda^2 det xi has a nonzero constant term")
        return Poly([-z for z in coeffs[1:]])

    def trace_normalization(self) -> complex:
        return np.trace(self.xi[0] @ self.xi[1])


def offdiag_potential(a: Poly, g: int, selection=None) -> Potential:
    """Off-diagonal potential xi = [[0, beta/lambda], [gamma, 0]] with
    beta*gamma = a and gamma = -lambda^g * reflection of beta.

    `selection` optionally lists the chosen root of each off-circle
    reflection pair of a (default: the root inside the unit disk);
    even-order unit-circle roots contribute half their multiplicity to beta.
    """
    if a.degree >= 1:
        pairs, circle = reflect_pairing(a, g)
    else:
        pairs, circle = [], []
    chosen = []
    if selection is not None:
        selection = [complex(s) for s in selection]
        for (r1, m), (r2, _m) in pairs:
            near1 = any(abs(s - r1) < 1e-6 for s in selection)
            near2 = any(abs(s - r2) < 1e-6 for s in selection)
            if near1 and near2:
                raise SelectionError(
                    f"both roots of the pair ({r1}, {r2}) selected"
                )
            chosen.extend([r1 if near1 or not near2 else r2] * m)
    else:
        for (r1, m), (r2, _m) in pairs:
            chosen.extend([r1 if abs(r1) < abs(r2) else r2] * m)
    for r, m in circle:
        if m % 2 != 0:
            raise SelectionError(
                f"unit-circle root {r} of odd order {m} admits no split"
            )
        chosen.extend([r] * (m // 2))
    if len(chosen) > g:
        raise SelectionError("selected root count exceeds the genus")

    m_poly = Poly.from_roots(chosen)
    # beta*gamma = -|kappa|^2 m * reflect(m), so a / (m * (-reflect(m))) must
    # be a positive real constant |kappa|^2.
    prod = m_poly * (-1 * conjugate_reflect(m_poly, g))
    lam_probe = np.exp(1j * np.sqrt(2.0) * np.arange(1, 4))
    ratios = a(lam_probe) / prod(lam_probe)
    if np.max(np.abs(ratios - ratios[0])) > 1e-8 * max(1.0, abs(ratios[0])):
        raise SelectionError("selection does not reproduce a up to a constant")
    ratio = complex(np.mean(ratios))
    if not (ratio.real > 0 and abs(ratio.imag) < 1e-8 * ratio.real):
        raise SelectionError("a is not expressible as beta*gamma for this selection")
    mod = np.sqrt(ratio.real)
    phase = np.exp(1j * (np.pi / 2.0 - np.angle(m_poly.coeff(0))))
    beta = (mod * phase) * m_poly
    if beta.coeff(0).imag < 0:
        beta = -1 * beta
    gamma = -1 * conjugate_reflect(beta, g)
    xi = []
    for d in range(-1, g + 1):
        xi.append(
            np.array(
                [[0.0, beta.coeff(d + 1)], [gamma.coeff(d), 0.0]], complex
            )
        )
    return Potential(tuple(xi))


# ---------------------------------------------------------------------------
# Lax flow
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KillingSample:
    z: complex
    zeta: tuple  # Laurent coefficients, index 0 <-> power -1

    def coeff(self, d: int) -> np.ndarray:
        idx = d + 1
        if 0 <= idx < len(self.zeta):
            return self.zeta[idx]
        return np.zeros((2, 2), complex)


def _alpha_coeffs(zeta, dz):
    """Laurent coefficients (powers -1, 0, 1) of alpha(zeta) dz + c.c. part.

    alpha(zeta) = [[a0, b_{-1}/lambda], [g0, -a0]] dz
                - [[conj(a0), conj(g0)], [conj(b_{-1}) lambda, -conj(a0)]] dzbar.
    """
    b_m1 = zeta[0][0, 1]
    a0 = zeta[1][0, 0]
    g0 = zeta[1][1, 0]
    dzb = np.conj(dz)
    M_m1 = np.array([[0.0, b_m1], [0.0, 0.0]], complex) * dz
    M_0 = (
        np.array([[a0, 0.0], [g0, -a0]], complex) * dz
        - np.array([[np.conj(a0), np.conj(g0)], [0.0, -np.conj(a0)]], complex) * dzb
    )
    M_1 = -np.array([[0.0, 0.0], [np.conj(b_m1), 0.0]], complex) * dzb
    return M_m1, M_0, M_1


def _lax_rhs(zeta, dz):
    """[zeta, alpha] for an increment dz, coefficientwise in lambda."""
    M_m1, M_0, M_1 = _alpha_coeffs(zeta, dz)
    n = len(zeta)
    zero = np.zeros((2, 2), complex)

    def zc(idx):
        return zeta[idx] if 0 <= idx < n else zero

    out = []
    for idx in range(n):
        z_up, z_mid, z_dn = zc(idx + 1), zc(idx), zc(idx - 1)
        m = (
            z_up @ M_m1 - M_m1 @ z_up
            + z_mid @ M_0 - M_0 @ z_mid
            + z_dn @ M_1 - M_1 @ z_dn
        )
        out.append(m)
    return out


def _frame_rhs(F, zeta, lam, dz):
    M_m1, M_0, M_1 = _alpha_coeffs(zeta, dz)
    alpha_lam = M_m1 / lam + M_0 + M_1 * lam
    return F @ alpha_lam


def _project_su2(F):
    """Nearest special-unitary matrix (polar factor with unit determinant)."""
    U, _ = polar(F)
    d = np.linalg.det(U)
    return U / np.sqrt(d)


def lax_flow(xi: Potential, z_path, drift_tol: float = 1e-5):
    """Integrate the Lax equation along z_path (starting at 0) with RK4.

    Returns a list of KillingSample; raises IntegratorDrift when the reality
    residual of zeta exceeds drift_tol.
    """
    z_path = [complex(z) for z in z_path]
    if abs(z_path[0]) > 1e-12:
        raise ValueError("z_path must start at 0")
    zeta = [m.copy() for m in xi.xi]
    g = xi.g
    samples = [KillingSample(z_path[0], tuple(m.copy() for m in zeta))]
    for k in range(len(z_path) - 1):
        dz = z_path[k + 1] - z_path[k]
        k1 = _lax_rhs(zeta, dz)
        y2 = [z + 0.5 * d for z, d in zip(zeta, k1)]
        k2 = _lax_rhs(y2, dz)
        y3 = [z + 0.5 * d for z, d in zip(zeta, k2)]
        k3 = _lax_rhs(y3, dz)
        y4 = [z + d for z, d in zip(zeta, k3)]
        k4 = _lax_rhs(y4, dz)
        zeta = [
            z + (a + 2 * b + 2 * c + d) / 6.0
            for z, a, b, c, d in zip(zeta, k1, k2, k3, k4)
        ]
        res = 0.0
        for d in range(-1, g + 1):
            defect = zeta[d + 1] + zeta[g - d].conj().T
            res = max(res, float(np.max(np.abs(defect))))
        if res > drift_tol:
            raise IntegratorDrift(
                f"reality drift {res:.3e} at z = {z_path[k + 1]}"
            )
        samples.append(KillingSample(z_path[k + 1], tuple(m.copy() for m in zeta)))
    return samples


def extract_omega(sample: KillingSample):
    """(omega, omega_z) from a Killing sample.

    The conformal factor is carried by the modulus of the lowest
    off-diagonal entry: omega = log(4 |beta_{-1}|), with omega_z equal to
    the leading diagonal entry alpha_0.  The phase of beta_{-1} is not
    constant along the flow (it drifts anti-holomorphically), so only the
    modulus is gauge-invariant; a vanishing beta_{-1} means the sample has
    left the off-diagonal gauge entirely and raises GaugeError.
    """
    b_m1 = sample.zeta[0][0, 1]
    mod = abs(b_m1)
    if not mod > 0.0 or not np.isfinite(mod):
        raise GaugeError(f"beta_{{-1}} = {b_m1} has no usable modulus")
    omega = float(np.log(4.0 * mod))
    omega_z = complex(sample.zeta[1][0, 0])
    return omega, omega_z


def frame_integrate(xi: Potential, z_path, lam: complex, drift_tol: float = 1e-5):
    """Extended frame F_lambda along z_path (F(0) = 1), by joint RK4 with the
    Killing field; unitarity is re-projected every 16 steps (corrections are
    available via frame_integrate_multi)."""
    frames, _ = frame_integrate_multi(xi, z_path, [lam], drift_tol=drift_tol)
    return frames[0]


def frame_integrate_multi(xi: Potential, z_path, lams, drift_tol: float = 1e-5):
    """Frames at several lambda values in one pass.

    Returns (frames, info): frames[i] is the list of F_{lams[i]}(z) along the
    path; info holds the Killing samples and the logged unitarity corrections.
    """
    z_path = [complex(z) for z in z_path]
    if abs(z_path[0]) > 1e-12:
        raise ValueError("z_path must start at 0")
    lams = [complex(l) for l in lams]
    zeta = [m.copy() for m in xi.xi]
    g = xi.g
    eye = np.eye(2, dtype=complex)
    Fs = [eye.copy() for _ in lams]
    frames = [[eye.copy()] for _ in lams]
    samples = [KillingSample(0.0, tuple(m.copy() for m in zeta))]
    corrections = []
    for k in range(len(z_path) - 1):
        dz = z_path[k + 1] - z_path[k]

        def rhs(state):
            zs, fs = state
            dzeta = _lax_rhs(zs, dz)
            dfs = [_frame_rhs(f, zs, lam, dz) for f, lam in zip(fs, lams)]
            return dzeta, dfs

        def add(state, coeff, delta):
            zs, fs = state
            dzeta, dfs = delta
            return (
                [z + coeff * d for z, d in zip(zs, dzeta)],
                [f + coeff * d for f, d in zip(fs, dfs)],
            )

        y0 = (zeta, Fs)
        k1 = rhs(y0)
        k2 = rhs(add(y0, 0.5, k1))
        k3 = rhs(add(y0, 0.5, k2))
        k4 = rhs(add(y0, 1.0, k3))
        zeta = [
            z + (a + 2 * b + 2 * c + d) / 6.0
            for z, a, b, c, d in zip(zeta, k1[0], k2[0], k3[0], k4[0])
        ]
        Fs = [
            f + (a + 2 * b + 2 * c + d) / 6.0
            for f, a, b, c, d in zip(Fs, k1[1], k2[1], k3[1], k4[1])
        ]
        res = 0.0
        for d in range(-1, g + 1):
            defect = zeta[d + 1] + zeta[g - d].conj().T
            res = max(res, float(np.max(np.abs(defect))))
        if res > drift_tol:
            raise IntegratorDrift(f"reality drift {res:.3e} at z = {z_path[k + 1]}")
        if (k + 1) % _UNITARITY_CADENCE == 0:
            new_Fs = []
            for f in Fs:
                u = _project_su2(f)
                corrections.append(float(np.max(np.abs(u - f))))
                new_Fs.append(u)
            Fs = new_Fs
        for i, f in enumerate(Fs):
            frames[i].append(f.copy())
        samples.append(KillingSample(z_path[k + 1], tuple(m.copy() for m in zeta)))
    info = {"samples": samples, "unitarity_corrections": corrections}
    return frames, info


def sym_bobenko(F1: np.ndarray, F2: np.ndarray) -> np.ndarray:
    """Point of S^3 in R^4 from the frames at the two Sym points.

    f = F1 F2^{-1} in SU(2); coordinates (Re f00, Im f00, Re f01, Im f01).
    """
    f = F1 @ np.linalg.inv(F2)
    return np.array([f[0, 0].real, f[0, 0].imag, f[0, 1].real, f[0, 1].imag])


def _is_stationary(xi: Potential, tol: float = 1e-12) -> bool:
    rhs = _lax_rhs([m.copy() for m in xi.xi], 1.0)
    rhs2 = _lax_rhs([m.copy() for m in xi.xi], 1j)
    mx = max(float(np.max(np.abs(m))) for m in rhs + rhs2)
    return mx < tol


def _frame_at(xi: Potential, tau: complex, lams, dz_max: float = 2e-3):
    """Frames F_lam(tau) along the straight path 0 -> tau, plus the terminal
    Killing coefficients.  Uses the closed-form matrix exponential when the
    potential is a fixed point of the Lax flow."""
    if _is_stationary(xi):
        M_m1, M_0, M_1 = _alpha_coeffs([m.copy() for m in xi.xi], tau)
        out = [expm(M_m1 / lam + M_0 + M_1 * lam) for lam in lams]
        return out, [m.copy() for m in xi.xi]
    n = max(64, int(np.ceil(abs(tau) / dz_max)))
    path = np.linspace(0.0, tau, n + 1)
    frames, info = frame_integrate_multi(xi, path, lams)
    zeta_end = list(info["samples"][-1].zeta)
    return [fr[-1] for fr in frames], zeta_end


def monodromy(xi: Potential, tau: complex, lam: complex, dz_max: float = 2e-3):
    """Monodromy M_lambda(tau) = F_lambda(tau), with the Killing field checked
    to be tau-periodic within 1e-6.  Returns (M, commutator_norm)."""
    if abs(tau) < 1e-14:
        return np.eye(2, dtype=complex), 0.0
    (M,), zeta_end = _frame_at(xi, tau, [lam], dz_max)
    drift = max(
        float(np.max(np.abs(ze - m)))
        for ze, m in zip(zeta_end, xi.xi)
    )
    if drift > 1e-6:
        raise NotPeriodic(f"zeta is not tau-periodic: drift {drift:.3e}")
    xival = xi(lam)
    comm = M @ xival - xival @ M
    return M, float(np.linalg.norm(comm))


def find_period(xi: Potential, lam1: complex, lam2: complex, guess: complex,
                dz_max: float = 2e-3, threshold: float = 1e-6) -> complex:
    """Closing period tau near guess: minimizes ||M_{l1} -+ 1|| + ||M_{l2} -+ 1||
    over tau (two real parameters) and the common sign."""
    from scipy.optimize import minimize

    eye = np.eye(2)

    def objective(v):
        tau = complex(v[0], v[1])
        (M1, M2), _ = _frame_at(xi, tau, [lam1, lam2], dz_max)
        vals = [
            np.linalg.norm(M1 - s * eye) + np.linalg.norm(M2 - s * eye)
            for s in (1.0, -1.0)
        ]
        return float(min(vals))

    res = minimize(
        objective,
        [complex(guess).real, complex(guess).imag],
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 400},
    )
    if res.fun > threshold:
        raise PeriodNotFound(
            f"closing objective {res.fun:.3e} above threshold {threshold:g}"
        )
    tau = complex(res.x[0], res.x[1])
    # tau = 0 closes trivially; a search that collapses there found no period.
    if abs(tau) < 1e-3 * abs(complex(guess)):
        raise PeriodNotFound("search collapsed to the trivial period tau = 0")
    return tau


# ---------------------------------------------------------------------------
# Isospectral action
# ---------------------------------------------------------------------------


def isospectral_step(xi: Potential, direction: int, dt: float,
                     constant_split: str = "borel") -> Potential:
    """First-order isospectral step xi <- xi + dt [xi, u].

    u is the loop-unitary part of lambda^{-direction} xi under the Iwasawa
    splitting: negative powers x_k contribute x_k lambda^k - x_k^dagger
    lambda^{-k}; the constant term is split against the Borel subalgebra of
    upper-triangular matrices with real diagonal ("borel", default) or into
    its anti-Hermitian part ("antihermitian").  a(lambda) = -lambda det xi is
    preserved to O(dt^2).
    """
    if abs(dt) > 1e-2:
        raise ValueError("dt must satisfy |dt| <= 1e-2")
    g = xi.g
    if not 0 <= direction <= max(g - 1, 0):
        raise ValueError(f"direction must lie in 0..{max(g - 1, 0)}")
    i = direction
    # Laurent coefficients of x = lambda^{-i} xi: x_k = xi_{k+i}.
    u = {}
    for k in range(-1 - i, 0):
        x_k = xi.coeff(k + i)
        u[k] = u.get(k, np.zeros((2, 2), complex)) + x_k
        u[-k] = u.get(-k, np.zeros((2, 2), complex)) - x_k.conj().T
    x0 = xi.coeff(i)
    if constant_split == "borel":
        im_diag = 1j * x0[0, 0].imag
        u0 = np.array(
            [[im_diag, -np.conj(x0[1, 0])], [x0[1, 0], -im_diag]], complex
        )
    elif constant_split == "antihermitian":
        u0 = 0.5 * (x0 - x0.conj().T)
    else:
        raise ValueError("constant_split must be 'borel' or 'antihermitian'")
    u[0] = u.get(0, np.zeros((2, 2), complex)) + u0

    # Commutator [xi, u] in Laurent coefficients.
    comm = {}
    for d in range(-1, g + 1):
        xd = xi.coeff(d)
        for k, uk in u.items():
            m = xd @ uk - uk @ xd
            if np.max(np.abs(m)) > 0:
                comm[d + k] = comm.get(d + k, np.zeros((2, 2), complex)) + m
    scale = max(float(np.max(np.abs(m))) for m in xi.xi)
    for p, m in comm.items():
        if (p < -1 or p > g) and float(np.max(np.abs(m))) > 1e-8 * scale:
            raise GaugeError(
                f"isospectral direction leaves the potential space at power {p}"
            )
    new = []
    for d in range(-1, g + 1):
        new.append(xi.coeff(d) + dt * comm.get(d, np.zeros((2, 2), complex)))
    # Project back onto the Potential invariants.
    proj = []
    for d in range(-1, g + 1):
        md = new[d + 1]
        mr = new[g - d]
        proj.append(0.5 * (md - mr.conj().T))
    top = proj[0]
    offpart = np.array([[0.0, 1j * top[0, 1].imag], [0.0, 0.0]], complex)
    if float(np.max(np.abs(top - offpart))) > max(10.0 * abs(dt) ** 2 * scale, 1e-9):
        raise GaugeError("projection of xi_{-1} onto i*R+ nilpotent failed")
    proj[0] = offpart
    proj[-1] = -offpart.conj().T
    return Potential(tuple(proj))


# ---------------------------------------------------------------------------
# Pinkall-Sterling fields
# ---------------------------------------------------------------------------


def _dz_grid(f: np.ndarray, h: float) -> np.ndarray:
    """(d/dx - i d/dy)/2 by central differences; axis 0 is x, axis 1 is y."""
    fx = np.gradient(f, h, axis=0)
    fy = np.gradient(f, h, axis=1)
    return 0.5 * (fx - 1j * fy)


def pinkall_sterling_fields(omega: np.ndarray, h: float):
    """First three Jacobi fields of the sinh-Gordon hierarchy on an omega grid.

    u1 = omega_z, u2 = omega_zzz - 2 omega_z^3,
    u3 = omega_zzzzz - 10 omega_z^2 omega_zzz - 10 omega_z omega_zz^2
         + 6 omega_z^5.
    Returns (u1, u2, u3, residuals) where residuals maps "u1".."u3" to the
    grids of |L u| = |Lap(u) + u cosh(2 omega)| evaluated on the interior
    (borders are unreliable for finite differences and set to 0).
    """
    w = np.asarray(omega, float).astype(complex)
    wz = _dz_grid(w, h)
    wzz = _dz_grid(wz, h)
    wzzz = _dz_grid(wzz, h)
    wzzzz = _dz_grid(wzzz, h)
    wzzzzz = _dz_grid(wzzzz, h)
    u1 = wz
    u2 = wzzz - 2.0 * wz**3
    u3 = wzzzzz - 10.0 * wz**2 * wzzz - 10.0 * wz * wzz**2 + 6.0 * wz**5
    cosh2w = np.cosh(2.0 * w.real)

    def laplacian(f):
        fxx = np.gradient(np.gradient(f, h, axis=0), h, axis=0)
        fyy = np.gradient(np.gradient(f, h, axis=1), h, axis=1)
        return fxx + fyy

    residuals = {}
    for name, u, margin in (("u1", u1, 4), ("u2", u2, 6), ("u3", u3, 9)):
        res = np.abs(laplacian(u) + u * cosh2w)
        mask = np.zeros_like(res)
        if res.shape[0] > 2 * margin and res.shape[1] > 2 * margin:
            mask[margin:-margin, margin:-margin] = res[margin:-margin, margin:-margin]
        residuals[name] = mask
    return u1, u2, u3, residuals
