"""Closed-form rotational families: Sym-point structure, closed-form h
against quadrature, the boundary embedding, and membership classification."""

import numpy as np
import pytest

from spectral_cmc.curve import H_from_sym, check_conditions, h_values
from spectral_cmc.rotational import (
    DomainError,
    classify_membership,
    embed_genus0_to_1,
    genus0,
    genus0_closed_h,
    genus1,
    genus1_closed_h,
)


def test_sym_points_unimodular_and_conjugate():
    for d in (genus0(0.0), genus0(2.0), genus1(0.5, 4.0)):
        assert abs(abs(d.lambda1) - 1.0) < 1e-14
        assert abs(d.lambda2 - 1.0 / d.lambda1) < 1e-14
        assert abs(H_from_sym(d.lambda1, d.lambda2).imag) < 1e-12


def test_genus0_closed_h_matches_quadrature():
    for H in (0.0, 0.5, 1.0, 2.0, 5.0):
        d = genus0(H)
        targets = [d.lambda1, d.lambda2, 0.3 + 0.4j, -1.5]
        for z, (h_quad, nu, _err) in zip(targets, h_values(d, targets)):
            h_closed = genus0_closed_h(d, z, nu)
            assert min(abs(h_quad - h_closed), abs(h_quad + h_closed)) < 1e-8


def test_genus1_closed_h_matches_quadrature():
    d = genus1(1.0, 3.0)
    targets = [d.lambda1, d.lambda2]
    for (h_quad, nu, _err) in h_values(d, targets):
        h_closed = genus1_closed_h(d, nu)
        assert min(abs(h_quad - h_closed), abs(h_quad + h_closed)) < 1e-8


def test_alpha_two_equals_embedded_genus0():
    for H in (0.0, 1.0, 5.0):
        via_alpha = genus1(H, 2.0)
        via_embed = embed_genus0_to_1(genus0(H))
        for k in range(3):
            assert via_alpha.a.coeff(k) == via_embed.a.coeff(k)
        # b is determined only up to a global sign.
        same = all(via_alpha.b.coeff(k) == via_embed.b.coeff(k) for k in range(3))
        flipped = all(via_alpha.b.coeff(k) == -via_embed.b.coeff(k) for k in range(3))
        assert same or flipped
        assert via_alpha.lambda1 == via_embed.lambda1


def test_embedded_boundary_satisfies_conditions():
    rep = check_conditions(embed_genus0_to_1(genus0(1.0)))
    assert rep.all_pass


def test_classify_membership_kinds():
    assert classify_membership(genus0(1.0)).kind == "Rot0"
    assert classify_membership(genus1(1.0, 3.0)).kind == "Rot1"
    assert classify_membership(embed_genus0_to_1(genus0(1.0))).kind == "Boundary"
    assert classify_membership(genus0(1.0, non_embedded=True)).kind == "Outside"


def test_classify_membership_reports_parameters():
    m = classify_membership(genus1(2.0, 3.5))
    assert m.H is not None and abs(m.H - 2.0) < 1e-8
    assert m.alpha is not None and abs(m.alpha - 3.5) < 1e-8


def test_domain_errors():
    with pytest.raises(DomainError):
        genus0(-0.5)
    with pytest.raises(DomainError):
        genus1(1.0, 1.5)
    with pytest.raises(DomainError):
        genus1(float("nan"), 3.0)
