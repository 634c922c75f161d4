"""Deformation flows: rotation-flow closed-form oracle, direction solver,
shipped strategies, step control, monitors, and genus jumps."""

import numpy as np
import pytest

from spectral_cmc.curve import SpectralData, h_values, short_arc_length
from spectral_cmc.polynomials import Poly, RealityClass, check_reality, roots
from spectral_cmc.rotational import embed_genus0_to_1, genus0, genus1
from spectral_cmc.whitham import (
    CVector,
    DivisionResidual,
    FlowState,
    FunctionStrategy,
    JumpObstruction,
    MoveCircleRoot,
    NotSimple,
    SeparateDoubleRootOfB,
    StrategyError,
    TrackTargets,
    derivative,
    genus_jump_down,
    genus_jump_up,
    make_strategy,
    monitors,
    run_flow,
    solve_c_for_targets,
    step,
)


def _double_root_state(t=0.4):
    """Genus-1 data whose b has a double root at +1 on the unit circle."""
    a = Poly([-1 / 16, -3 / 16, -1 / 16])
    b = Poly([1j * t, -2j * t, 1j * t])
    return SpectralData(a, b, -1j, 1)


def test_rotation_flow_matches_closed_form(rot1):
    # The direction c = i*b rotates the picture rigidly:
    # a(t, lam) = e^{-i g t} a0(lam e^{i t}), lambda1(t) = lambda1 e^{-i t}.
    st = FlowState.from_data(rot1)
    dt, steps = 5e-3, 20
    traj = run_flow(st, FunctionStrategy(lambda s: 1j * s.b), dt, steps,
                    with_monitors=False)
    end = traj[-1]
    t = dt * steps
    lam = np.exp(0.4j) * 1.1
    want_a = np.exp(-1j * rot1.g * t) * rot1.a(lam * np.exp(1j * t))
    assert abs(end.a(lam) - want_a) < 1e-10
    assert abs(end.lam1 - rot1.lambda1 * np.exp(-1j * t)) < 1e-10


def test_derivative_tangents_live_in_reality_classes(rot1):
    from spectral_cmc.polynomials import conjugate_reflect

    c = CVector(1j * rot1.b, rot1.g)
    adot, bdot, _l1, _l2 = derivative(rot1, c)
    # adot satisfies the coefficient symmetry of class A (the pointwise sign
    # condition constrains a itself, not its tangent vectors).
    refl = conjugate_reflect(adot, 2 * rot1.g)
    assert max(abs(refl.coeff(k) - adot.coeff(k))
               for k in range(2 * rot1.g + 1)) < 1e-10
    ok_b, res_b = check_reality(bdot, RealityClass("B", rot1.g), 1e-7)
    assert ok_b, res_b


def test_solve_c_for_targets_zero_targets(rot1):
    c = solve_c_for_targets(rot1, {})
    assert max((abs(z) for z in c.c.coeffs), default=0.0) < 1e-12


def test_solve_c_for_targets_freezes_other_roots(rot1):
    rb = [r for r, _ in roots(rot1.b)]
    beta = rb[0]
    c = solve_c_for_targets(rot1, {beta: 1.0j})
    for other in rb[1:]:
        assert abs(c.c(other)) < 1e-9


def test_solve_c_for_targets_realized_h_derivative(rot1):
    rb = [r for r, _ in roots(rot1.b)]
    beta, w = rb[0], 0.3j
    c = solve_c_for_targets(rot1, {beta: w})
    dt = 1e-4
    st = step(FlowState.from_data(rot1), FunctionStrategy(lambda s: c.c), dt,
              with_monitors=False)
    d_new = st.to_spectral_data()
    new_beta = min((r for r, _ in roots(d_new.b)), key=lambda r: abs(r - beta))
    (h0, _n0, _e0), = h_values(rot1, [beta])
    (h1, _n1, _e1), = h_values(d_new, [new_beta])
    rate = (h1 - h0) / dt
    assert min(abs(rate - w), abs(rate + w)) < 1e-2 * max(1.0, abs(w))


def test_solve_c_for_targets_requires_simple_roots():
    with pytest.raises(NotSimple):
        solve_c_for_targets(_double_root_state(), {1.0: 1.0})


def test_shrink_decreases_short_arc():
    st = FlowState.from_data(genus1(0.0, 3.0))
    traj = run_flow(st, make_strategy("shrink", rate=1.0), 2e-3, 20,
                    with_monitors=False)
    arcs = [short_arc_length(s.to_spectral_data()) for s in traj]
    assert all(a1 < a0 for a0, a1 in zip(arcs, arcs[1:]))


def test_move_root_freezes_other_h(rot1):
    rb = [r for r, _ in roots(rot1.b)]
    beta = rb[1]
    others = [r for r in rb if abs(r - beta) > 1e-9]
    h_before = [v[0] for v in h_values(rot1, others)]
    traj = run_flow(FlowState.from_data(rot1), MoveCircleRoot(beta), 1e-3, 20,
                    with_monitors=False)
    d_new = traj[-1].to_spectral_data()
    rb_new = [r for r, _ in roots(d_new.b)]
    moved = {min(range(len(rb_new)), key=lambda i: abs(rb_new[i] - beta))}
    frozen = [rb_new[i] for i in range(len(rb_new)) if i not in moved]
    h_after = [v[0] for v in h_values(d_new, frozen)]
    for h0, h1 in zip(sorted(h_before, key=abs), sorted(h_after, key=abs)):
        assert min(abs(h1 - h0), abs(h1 + h0)) < 1e-7


def test_track_holds_constant_targets(rot1):
    rb = [r for r, _ in roots(rot1.b)]
    h0 = [v[0] for v in h_values(rot1, rb)]
    curves = [lambda t, v=v: v for v in h0]
    traj = run_flow(FlowState.from_data(rot1), TrackTargets(curves), 2e-3, 20,
                    with_monitors=False)
    d_new = traj[-1].to_spectral_data()
    rb_new = sorted((r for r, _ in roots(d_new.b)), key=np.angle)
    h1 = [v[0] for v in h_values(d_new, rb_new)]
    for a, b in zip(sorted(h0, key=abs), sorted(h1, key=abs)):
        assert min(abs(a - b), abs(a + b)) < 1e-8


def test_separation_dichotomy_both_modes():
    d = _double_root_state()
    for sign, on_circle in ((1, True), (-1, False)):
        traj = run_flow(FlowState.from_data(d), SeparateDoubleRootOfB(sign),
                        1e-3, 40, with_monitors=False)
        rb = roots(traj[-1].b)
        assert all(m == 1 for _, m in rb)
        radii = sorted(abs(r) for r, _ in rb)
        if on_circle:
            assert all(abs(r - 1.0) < 1e-6 for r in radii)
        else:
            assert radii[0] < 1.0 - 1e-4 < 1.0 + 1e-4 < radii[1]
            assert abs(radii[0] * radii[1] - 1.0) < 1e-6


def test_separation_preserves_sym_closing():
    d = _double_root_state()
    h0 = [v[0] for v in h_values(d, [d.lambda1, d.lambda2])]
    traj = run_flow(FlowState.from_data(d), SeparateDoubleRootOfB(1), 1e-3, 40,
                    with_monitors=False)
    df = traj[-1].to_spectral_data()
    h1 = [v[0] for v in h_values(df, [df.lambda1, df.lambda2])]
    for a, b in zip(h0, h1):
        assert min(abs(a - b), abs(a + b)) < 1e-6


def test_separate_requires_double_root(rot1):
    with pytest.raises(StrategyError):
        run_flow(FlowState.from_data(rot1), SeparateDoubleRootOfB(1), 1e-3, 1)


def test_make_strategy_kinds():
    assert make_strategy("shrink", rate=2.0).rate == 2.0
    with pytest.raises(StrategyError):
        make_strategy("no-such-strategy")


def test_step_zero_dt_is_identity(rot1):
    st = FlowState.from_data(rot1)
    out = step(st, make_strategy("shrink"), 0.0)
    assert out.a == st.a and out.b == st.b
    assert out.lam1 == st.lam1 and out.t == st.t


def test_monitors_keys_and_finiteness(rot1):
    m = monitors(FlowState.from_data(rot1))
    for key in ("min_root_a_distance", "min_root_ab_distance",
                "min_sym_b_distance", "short_arc_length"):
        assert np.isfinite(m[key])
    assert isinstance(m["events"], list)


def test_genus_jump_round_trip_exact():
    d0 = genus0(1.0)
    p = Poly([1.0, 1.0])
    d1 = genus_jump_up(d0, p)
    assert d1.g == 1
    back, p_used = genus_jump_down(d1, p)
    assert back.g == 0
    assert all(back.a.coeff(k) == d0.a.coeff(k) for k in range(d0.a.degree + 1))
    assert all(back.b.coeff(k) == d0.b.coeff(k) for k in range(d0.b.degree + 1))
    assert back.lambda1 == d0.lambda1


def test_genus_jump_down_boundary_recovers_genus0():
    d0 = genus0(1.0)
    down, p = genus_jump_down(embed_genus0_to_1(d0))
    assert max(abs(down.a.coeff(k) - d0.a.coeff(k)) for k in range(2)) < 1e-8
    assert max(abs(down.b.coeff(k) - d0.b.coeff(k)) for k in range(2)) < 1e-8
    assert sorted(np.round(np.real(p.coeffs), 8)) == [1.0, 1.0]


def test_genus_jump_up_rejects_open_h():
    # Class-P divisor with roots e^{+-0.7i}, where h is not a half-period.
    p = Poly([1.0, -2.0 * np.cos(0.7), 1.0])
    with pytest.raises(JumpObstruction):
        genus_jump_up(genus0(1.0), p)


def test_genus_jump_down_rejects_non_divisor(rot1):
    with pytest.raises(DivisionResidual):
        genus_jump_down(rot1, Poly([1.0, 1.0]))
