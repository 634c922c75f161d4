"""Spectral-curve layer: condition checks against the closed-form rotational
families, branch-continued square roots, and circle scans of Delta."""

import numpy as np
import pytest

from spectral_cmc.curve import (
    BranchProximity,
    CurvePoint,
    H_from_sym,
    SpectralData,
    anchor_point,
    check_conditions,
    delta_eval,
    h_on_circle,
    h_values,
    nu_continue,
    short_arc_length,
    sigma,
)
from spectral_cmc.polynomials import Poly
from spectral_cmc.rotational import genus0, genus1


def test_conditions_pass_on_rotational_families():
    for d in (genus0(1.0), genus1(1.0, 3.0), genus1(0.0, 2.5)):
        rep = check_conditions(d)
        assert rep.all_pass
        assert max(rep.residuals.values()) < 1e-9


def test_sym_points_close_to_pi_i(rot1):
    vals = h_values(rot1, [rot1.lambda1, rot1.lambda2])
    for h, _nu, err in vals:
        assert abs(abs(h.imag) - np.pi) < 1e-9
        assert abs(h.real) < 1e-9
        assert err < 1e-9


def test_corrupted_b_fails_condition_iv(rot1):
    bad = SpectralData(rot1.a, rot1.b + Poly([0.05]), rot1.lambda1, rot1.g)
    rep = check_conditions(bad)
    assert not rep.passes["iv"]
    assert not rep.all_pass


def test_anchor_has_zero_h(rot1):
    z = anchor_point(rot1)
    (h, _nu, err), = h_values(rot1, [z])
    assert abs(h) < 1e-9
    assert err < 1e-9


def test_h_from_sym_recovers_mean_curvature():
    for H, d in ((0.5, genus0(0.5)), (2.0, genus1(2.0, 3.0))):
        assert abs(H_from_sym(d.lambda1, d.lambda2) - H) < 1e-12


def test_short_arc_matches_angular_gap(rot1):
    gap = (np.angle(rot1.lambda2) - np.angle(rot1.lambda1)) % (2.0 * np.pi)
    arc = short_arc_length(rot1)
    assert abs(arc - min(gap, 2.0 * np.pi - gap)) < 1e-12


def _two_paths(z0, z1, mids, n=400):
    t = np.linspace(0.0, 1.0, n)
    for mid in mids:
        yield np.concatenate([z0 + (mid - z0) * t, mid + (z1 - mid) * t[1:]])


def test_nu_continue_stays_on_curve(rot1):
    z0 = 2.0 + 0.0j
    seed = CurvePoint(z0, np.sqrt(rot1.a(z0) / z0))
    path = next(_two_paths(z0, -2.5j, [3.0 - 2.0j]))
    sheet = nu_continue(rot1, path, seed)
    for pt in sheet:
        assert abs(pt.nu**2 - rot1.a(pt.lam) / pt.lam) < 1e-10


def test_nu_continue_homotopy_invariance(rot1):
    z0, z1 = 2.0 + 0.0j, -2.5j
    seed = CurvePoint(z0, np.sqrt(rot1.a(z0) / z0))
    ends = [
        nu_continue(rot1, p, seed).samples[-1].nu
        for p in _two_paths(z0, z1, [3.0 - 2.0j, 2.2 - 0.5j])
    ]
    assert abs(ends[0] - ends[1]) < 1e-8


def test_nu_continue_rejects_branch_graze(rot1):
    r = rot1.roots_of_a()[0][0]
    z0 = r + 1.0
    seed = CurvePoint(z0, np.sqrt(rot1.a(z0) / z0))
    path = [z0, r + 1e-8j, z0 + 0.5]  # interior sample grazes a branch point
    with pytest.raises(BranchProximity):
        nu_continue(rot1, path, seed)


def test_sigma_is_involution():
    p = CurvePoint(1.2 + 0.3j, 0.5 - 0.1j)
    q = sigma(sigma(p))
    assert q.lam == p.lam and q.nu == p.nu
    assert sigma(p).nu == -p.nu


def test_delta_is_pm2_at_sym_points(rot1):
    z0 = anchor_point(rot1)
    base = CurvePoint(z0, 0.0)
    for lam in (rot1.lambda1, rot1.lambda2):
        delta = delta_eval(rot1, lam, base)
        assert abs(abs(delta) - 2.0) < 1e-8


def test_h_on_circle_matches_pointwise_quadrature(rot1):
    theta, h = h_on_circle(rot1, 512)
    picks = [37, 150, 400]
    targets = [np.exp(1j * theta[i]) for i in picks]
    vals = h_values(rot1, targets)
    for i, (hv, _nu, _err) in zip(picks, vals):
        assert min(abs(h[i] - hv), abs(h[i] + hv)) < 1e-7
