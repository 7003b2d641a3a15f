"""Operators: finite differences, literal application and commutator identities."""

from __future__ import annotations

import json
import math

import numpy as np
import pytest

from gup3d.model import AnsatzModel
from gup3d.operators import (
    L,
    OperatorTag,
    P,
    X,
    apply,
    commutator_apply,
    covering_rule,
    finite_difference,
    p,
    verify_xp_identity,
    verify_xx_identity,
    x,
)
from gup3d.states import (
    AccuracyWarning,
    GaussianState,
    Measure,
    Superposition,
    grid_axes,
    integrate,
    sample,
    sample_to_grid,
)

KINDS = ("identity", "tanh", "arctan", "kmm-g", "kmm-h")
MIXED = Superposition(
    (GaussianState.isotropic(0.4, (0.3, 0.1, 0.0)), GaussianState([0.0, -0.2, 0.1], [0.3, 0.5, 0.4])),
    (1.0, 0.5j),
)
SINGLE = GaussianState.isotropic(0.5, (0.2, 0.1, -0.1))


def _values(state):
    return state.amplitudes if hasattr(state, "amplitudes") else state.value


def _grid(state, n, order=4):
    return sample_to_grid(state, grid_axes(state.center, state.widths, n), order)


# -- finite differences -----------------------------------------------------


@pytest.mark.parametrize("order,degree", [(2, 2), (4, 4)])
def test_finite_difference_exact_on_polynomials(order, degree):
    # central stencils and the one-sided closures are exact up to their degree
    h = 0.1
    t = np.arange(20) * h
    rng = np.random.default_rng(1)
    c = rng.normal(size=degree + 1)
    f = np.polyval(c, t)
    df = np.polyval(np.polyder(c), t)
    assert np.max(np.abs(finite_difference(f, 0, h, order) - df)) < 1e-10


@pytest.mark.parametrize("order", [2, 4])
def test_finite_difference_convergence_order(order):
    errs = []
    for n in (40, 80):
        t = np.linspace(0.0, 2.0, n)
        h = t[1] - t[0]
        errs.append(np.max(np.abs(finite_difference(np.sin(t), 0, h, order) - np.cos(t))))
    rate = math.log2(errs[0] / errs[1])
    assert abs(rate - order) < 0.35


def test_finite_difference_along_axis():
    t = np.linspace(-1, 1, 17)
    f = np.multiply.outer(t**2, np.ones(5))
    d = finite_difference(f, 0, t[1] - t[0])
    assert np.allclose(d, np.multiply.outer(2 * t, np.ones(5)), atol=1e-12)
    assert np.allclose(finite_difference(f, 1, 0.1), 0.0)


def test_finite_difference_validation():
    with pytest.raises(ValueError):
        finite_difference(np.zeros(16), 0, 0.1, order=3)
    with pytest.raises(ValueError):
        finite_difference(np.zeros(16), 0, 0.0)


# -- tags and single applications -------------------------------------------


def test_operator_tags():
    assert X(1).kind.value == "X" and P(3).axis == 3
    assert str(L(2)) == "l2"
    with pytest.raises(ValueError):
        OperatorTag("X", 0)
    with pytest.raises(ValueError):
        X(4)


@pytest.mark.parametrize("kind", ["tanh", "arctan", "kmm-g"])
def test_modified_position_on_gaussian(kind):
    # X_i psi = i hbar G d_i psi, d_i psi = -(p_i - c_i)/(2 s^2) psi
    m = AnsatzModel.of(kind, hbar=0.7)
    out = apply(X(2), m, SINGLE)
    pts = out.rule.points
    r = np.linalg.norm(pts, axis=1)
    psi = SINGLE.value(pts)
    ref = 1j * 0.7 * m.G(r) * (-(pts[:, 1] - 0.1) / (2 * 0.25)) * psi
    assert np.allclose(out.value, ref, rtol=1e-13, atol=1e-300)


@pytest.mark.parametrize("kind", KINDS)
def test_modified_momentum_on_gaussian(kind):
    m = AnsatzModel.of(kind)
    out = apply(P(1), m, SINGLE)
    pts = out.rule.points
    r = np.linalg.norm(pts, axis=1)
    h = np.ones_like(r) if kind in ("identity", "kmm-g") else m.H(r)
    assert np.allclose(out.value, pts[:, 0] * h * SINGLE.value(pts), rtol=1e-14, atol=0)


def test_angular_momentum_annihilates_isotropic_centred_gaussian():
    out = apply(L(3), None, GaussianState.isotropic(0.6))
    assert np.max(np.abs(out.value)) < 1e-15


# -- commutators on jet states ----------------------------------------------


JET_CASES = [(k, SINGLE) for k in KINDS] + [("tanh", MIXED), ("arctan", MIXED)]
JET_IDS = [f"single-{k}" for k in KINDS] + ["mixed-tanh", "mixed-arctan"]


@pytest.mark.parametrize("kind,state", JET_CASES, ids=JET_IDS)
def test_xp_identity_on_jets(kind, state):
    m = AnsatzModel.of(kind)
    for i, j in [(1, 1), (2, 3), (3, 1)]:
        assert verify_xp_identity(m, state, i, j).residual < 1e-13


@pytest.mark.parametrize("kind,state", JET_CASES[1:], ids=JET_IDS[1:])
def test_xx_identity_on_jets(kind, state):
    m = AnsatzModel.of(kind)
    for i, j in [(1, 2), (2, 3), (3, 1)]:
        assert verify_xx_identity(m, state, i, j).residual < 1e-13


def test_xx_identity_rejects_equal_axes():
    with pytest.raises(ValueError):
        verify_xx_identity(AnsatzModel.of("tanh"), SINGLE, 2, 2)


def test_canonical_commutator():
    out = commutator_apply(x(1), p(1), None, MIXED)
    psi = MIXED.value(out.rule.points)
    assert np.allclose(out.value, 1j * psi, rtol=1e-13, atol=1e-16)


@pytest.mark.parametrize("kind", KINDS)
def test_momenta_commute_to_machine_precision(kind):
    # p1 H (p2 H psi) and p2 H (p1 H psi) differ only by rounding
    m = AnsatzModel.of(kind)
    for state in (SINGLE, _grid(SINGLE, 16)):
        out = commutator_apply(P(1), P(2), m, state)
        one = apply(P(1), m, apply(P(2), m, state))
        assert np.max(np.abs(_values(out))) <= 4 * np.finfo(float).eps * np.max(np.abs(_values(one)))


def test_xx_antisymmetry():
    m = AnsatzModel.of("tanh")
    grid = _grid(SINGLE, 16)
    with pytest.warns(AccuracyWarning):
        a = commutator_apply(X(1), X(2), m, grid).amplitudes
        b = commutator_apply(X(2), X(1), m, grid).amplitudes
    assert np.array_equal(a, -b)


def test_off_diagonal_kernel_vanishes_on_axis():
    # a narrow state on the p1 axis: [X_1, P_2] psi is small compared to psi
    m = AnsatzModel.of("tanh")
    g = GaussianState.isotropic(0.02, (0.8, 0.0, 0.0))
    out = commutator_apply(X(1), P(2), m, g)
    ratio = np.sqrt(np.sum(out.rule.weights * np.abs(out.value) ** 2))
    assert ratio < 0.05


@pytest.mark.parametrize("kind", ["tanh", "arctan"])
def test_modified_position_symmetric_under_weighted_measure(kind):
    m = AnsatzModel.of(kind)
    measure = Measure.weighted(m)
    phi = GaussianState([0.1, 0.2, -0.1], [0.3, 0.4, 0.35])
    psi = GaussianState.isotropic(0.45, (-0.2, 0.0, 0.1)).scaled(0.5 - 1j)
    rule = covering_rule(Superposition((phi, psi), (1.0, 1.0)), m, measure)
    a, b = sample(phi, rule), sample(psi, rule)
    for k in (1, 2, 3):
        xa, xb = apply(X(k), m, a), apply(X(k), m, b)
        lhs = integrate(a, np.conj(xa.value) * b.value, measure)
        rhs = integrate(a, np.conj(a.value) * xb.value, measure)
        assert abs(lhs - rhs) < 1e-10 * max(abs(lhs), 1e-3)


# -- grid identities --------------------------------------------------------


def test_grid_xp_identity_converges_at_fourth_order():
    rep = verify_xp_identity(AnsatzModel.of("tanh"), _grid(SINGLE, 32), 1, 1)
    assert rep.order == 4
    assert rep.points == 32**3 and rep.refined_points == 64**3
    # frozen from this implementation; the observed ratio must match (h1/h2)^4
    assert rep.residual == pytest.approx(0.0192021, rel=1e-4)
    assert rep.ratio == pytest.approx(rep.expected_ratio, rel=0.3)
    assert rep.expected_ratio == pytest.approx((63 / 31) ** 4, rel=1e-12)


def test_grid_xp_identity_second_order():
    rep = verify_xp_identity(AnsatzModel.of("arctan"), _grid(SINGLE, 32, order=2), 1, 1)
    assert rep.ratio == pytest.approx(rep.expected_ratio, rel=0.3)
    assert rep.expected_ratio == pytest.approx((63 / 31) ** 2, rel=1e-12)


def test_identity_kind_off_diagonal_grid_residual_is_zero():
    rep = verify_xp_identity(AnsatzModel.of("identity"), _grid(SINGLE, 16), 1, 2, refine=False)
    assert rep.residual < 1e-15


def test_identity_kind_xx_is_zero():
    rep = verify_xx_identity(AnsatzModel.of("identity"), _grid(SINGLE, 16), 1, 2, refine=False)
    assert rep.residual < 1e-15


def test_report_serialises():
    rep = verify_xp_identity(AnsatzModel.of("tanh"), _grid(SINGLE, 16), 1, 1, refine=False)
    d = json.loads(rep.to_json())
    assert d["identity"] == "xp" and d["model"] == "tanh"
    assert d["refined_residual"] is None and d["points"] == 16**3
