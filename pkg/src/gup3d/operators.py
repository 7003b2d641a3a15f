"""Canonical and modified operators acting on momentum-space states.

Operators are applied literally (multiply, differentiate) to either a jet
state (values with exact gradient and Hessian on quadrature nodes) or a grid
state (central finite differences).  Commutators are formed by applying two
operators in both orders, so the analytic kernels of :mod:`gup3d.model` stay
independent oracles.
"""

from __future__ import annotations

import enum
import json
import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .model import AnsatzModel, Kind, KernelForm, _check_axis, commutator_kernel
from .quadrature import Rule, box_rule, envelope_rule
from .states import (
    DECAY_THRESHOLD,
    AccuracyWarning,
    GaussianState,
    GridState,
    Measure,
    RuleSpec,
    SampledState,
    Superposition,
    _closed,
    _terms,
    integrate,
    sample,
    sample_to_grid,
)

# -- operator tags ----------------------------------------------------------


class OpKind(str, enum.Enum):
    CANONICAL_POSITION = "x"
    CANONICAL_MOMENTUM = "p"
    MODIFIED_POSITION = "X"
    MODIFIED_MOMENTUM = "P"
    ANGULAR_MOMENTUM = "l"


@dataclass(frozen=True)
class OperatorTag:
    kind: OpKind
    axis: int  # 1-based

    def __post_init__(self):
        object.__setattr__(self, "kind", OpKind(self.kind))
        if not (isinstance(self.axis, (int, np.integer)) and 1 <= self.axis <= 3):
            raise ValueError(f"axis must be in 1..3, got {self.axis!r}")

    def __str__(self):
        return f"{self.kind.value}{self.axis}"


def x(i: int) -> OperatorTag:
    return OperatorTag(OpKind.CANONICAL_POSITION, i)


def p(i: int) -> OperatorTag:
    return OperatorTag(OpKind.CANONICAL_MOMENTUM, i)


def X(i: int) -> OperatorTag:
    return OperatorTag(OpKind.MODIFIED_POSITION, i)


def P(i: int) -> OperatorTag:
    return OperatorTag(OpKind.MODIFIED_MOMENTUM, i)


def L(k: int) -> OperatorTag:
    return OperatorTag(OpKind.ANGULAR_MOMENTUM, k)


# -- finite differences -----------------------------------------------------

_CENTRAL = {2: (np.array([-1.0, 0.0, 1.0]) / 2.0), 4: (np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0)}
# one-sided closures for the first rows (the last rows use the mirrored, negated stencils)
_CLOSURE = {
    2: [np.array([-3.0, 4.0, -1.0]) / 2.0],
    4: [np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0, np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / 12.0],
}


def finite_difference(f: np.ndarray, axis: int, h: float, order: int = 4) -> np.ndarray:
    """First derivative along ``axis`` (0-based) by central differences.

    Interior rows use the centred stencil of the given order; the boundary
    rows use one-sided stencils of the same order.
    """
    if order not in _CENTRAL:
        raise ValueError("derivative order must be 2 or 4")
    if not (math.isfinite(h) and h > 0):
        raise ValueError(f"grid step must be finite and positive, got {h!r}")
    g = np.moveaxis(f, axis, 0)
    n = g.shape[0]
    half = order // 2
    out = np.empty_like(g)
    stencil = _CENTRAL[order]
    acc = np.zeros_like(g[half : n - half])
    for s, coef in zip(range(-half, half + 1), stencil):
        if coef:
            acc += coef * g[half + s : n - half + s]
    out[half : n - half] = acc
    for row, st in enumerate(_CLOSURE[order]):
        m = st.shape[0]
        out[row] = np.tensordot(st, g[:m], axes=(0, 0))
        out[n - 1 - row] = -np.tensordot(st, g[n - m :][::-1], axes=(0, 0))
    return np.moveaxis(out / h, 0, axis)


# -- field algebra ----------------------------------------------------------


def _coords(state):
    return state.coords


def _radius(coords):
    return np.sqrt(sum(c**2 for c in coords))


def _derivative(state, k: int):
    """d/dp_k (0-based k)."""
    if isinstance(state, GridState):
        if state.boundary_ratio() > DECAY_THRESHOLD:
            warnings.warn(
                f"field differentiated along axis {k + 1} does not decay at the grid boundary "
                f"(|f|^2 edge/peak = {state.boundary_ratio():.2e})",
                AccuracyWarning,
                stacklevel=4,
            )
        a = state.axes[k]
        return state.with_amplitudes(finite_difference(state.amplitudes, k, a.step, state.derivative_order))
    if state.grad is None:
        raise ValueError("jet state carries no derivative information at this order")
    return SampledState(state.rule, state.grad[k], None if state.hess is None else state.hess[k], None)


def _multiply(state, f, f_grad=None):
    """Pointwise product with a function f (gradient f_grad, shape (d, ...))."""
    if isinstance(state, GridState):
        return state.with_amplitudes(f * state.amplitudes)
    grad = None
    if state.grad is not None and f_grad is not None:
        grad = f_grad * state.value + f * state.grad
    return SampledState(state.rule, f * state.value, grad, None)


def _scale(state, c: complex):
    return state.scaled(c)


def _lincomb(a, b, ca: complex = 1.0, cb: complex = 1.0):
    if isinstance(a, GridState):
        return a.with_amplitudes(ca * a.amplitudes + cb * b.amplitudes)
    grad = None if a.grad is None or b.grad is None else ca * a.grad + cb * b.grad
    hess = None if a.hess is None or b.hess is None else ca * a.hess + cb * b.hess
    return SampledState(a.rule, ca * a.value + cb * b.value, grad, hess)


def _unit(k: int, coords):
    d = len(coords)
    return np.stack([np.broadcast_to(np.float64(a == k), np.shape(coords[0])) for a in range(d)])


def _momentum_multiplier(model: Optional[AnsatzModel], k: int, coords):
    """p_k H(|p|) and its gradient (H = 1 when ``model`` is None)."""
    pk = coords[k]
    if model is None or model.kind in (Kind.IDENTITY, Kind.KMM_POSITION):
        return pk, _unit(k, coords)
    r = _radius(coords)
    h = model.H(r)
    dh = model.dH_over_r(r)
    grad = np.stack([pk * dh * c + (h if a == k else 0.0) for a, c in enumerate(coords)])
    return pk * h, grad


def _position_multiplier(model: Optional[AnsatzModel], coords):
    """G(|p|) and its gradient (G = 1 when ``model`` is None)."""
    if model is None or model.kind in (Kind.IDENTITY, Kind.KMM_MOMENTUM):
        one = np.ones(np.broadcast(*coords).shape)
        return one, np.zeros((len(coords),) + one.shape)
    r = _radius(coords)
    with np.errstate(over="ignore"):
        g = model.G(r)
        dg = model.dG_over_r(r)
        return g, np.stack([dg * c for c in coords])


def _as_field(state, model: Optional[AnsatzModel], order: int = 2):
    if _closed(state):
        return sample(state, covering_rule(state, model), order)
    return state


def covering_rule(state, model: Optional[AnsatzModel] = None, measure: Optional[Measure] = None) -> Rule:
    """A quadrature rule covering every component of a closed-form state."""
    spec = RuleSpec.for_(model, measure)
    terms = _terms(state)
    if len(terms) == 1:
        g = terms[0][1]
        return envelope_rule(g.center, g.widths / math.sqrt(2.0), spec.growth, spec.strip, spec.cap)
    centers = [g.center for _, g in terms]
    taus = [g.widths / math.sqrt(2.0) for _, g in terms]
    return box_rule(centers, taus, spec.growth, spec.strip, spec.cap)


def apply(tag: OperatorTag, model: Optional[AnsatzModel], state):
    """Apply one operator; the result is not normalized.

    Closed-form states are sampled on a covering quadrature rule first and
    the result is a jet state on that rule.
    """
    field_ = _as_field(state, model)
    coords = _coords(field_)
    d = len(coords)
    k = _check_axis(tag.axis, d)
    hbar = 1.0 if model is None else model.hbar
    kind = tag.kind
    if kind is OpKind.CANONICAL_MOMENTUM:
        return _multiply(field_, coords[k], _unit(k, coords))
    if kind is OpKind.MODIFIED_MOMENTUM:
        f, fg = _momentum_multiplier(model, k, coords)
        return _multiply(field_, f, fg)
    if kind is OpKind.CANONICAL_POSITION:
        return _scale(_derivative(field_, k), 1j * hbar)
    if kind is OpKind.MODIFIED_POSITION:
        f, fg = _position_multiplier(model, coords)
        return _scale(_multiply(_derivative(field_, k), f, fg), 1j * hbar)
    # angular momentum l_k = -i hbar eps_kab p_a d_b
    if d != 3:
        raise ValueError("angular momentum needs three dimensions")
    a, b = (k + 1) % 3, (k + 2) % 3
    t1 = _multiply(_derivative(field_, b), coords[a], _unit(a, coords))
    t2 = _multiply(_derivative(field_, a), coords[b], _unit(b, coords))
    return _scale(_lincomb(t1, t2, 1.0, -1.0), -1j * hbar)


def commutator_apply(A: OperatorTag, B: OperatorTag, model: Optional[AnsatzModel], state):
    """A(B psi) - B(A psi) by literal double application."""
    field_ = _as_field(state, model)
    ab = apply(A, model, apply(B, model, field_))
    ba = apply(B, model, apply(A, model, field_))
    return _lincomb(ab, ba, 1.0, -1.0)


def norm(state, measure: Optional[Measure] = None) -> float:
    measure = measure or Measure.flat()
    return math.sqrt(max(integrate(state, np.abs(state.value) ** 2, measure).real, 0.0))


# -- identity checks --------------------------------------------------------


@dataclass
class ResidualReport:
    identity: str
    model: str
    i: int
    j: int
    residual: float
    points: int
    order: Optional[int] = None
    refined_residual: Optional[float] = None
    refined_points: Optional[int] = None
    ratio: Optional[float] = None
    expected_ratio: Optional[float] = None
    warnings: list = field(default_factory=list)

    def to_dict(self):
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(_finite(self.to_dict()), sort_keys=True)


def _finite(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def _stack_points(coords):
    shape = np.broadcast(*coords).shape
    return np.stack([np.broadcast_to(c, shape) for c in coords], axis=-1)


def _relative(diff, ref, measure) -> float:
    return norm(diff, measure) / norm(ref, measure)


def _xp_residual(model, state, i, j, measure):
    f = _as_field(state, model)
    lhs = commutator_apply(X(i), P(j), model, f)
    k = commutator_kernel(model, KernelForm.EXACT, _stack_points(f.coords), i, j)
    rhs = _multiply(f, 1j * model.hbar * k)
    return _relative(_lincomb(lhs, rhs, 1.0, -1.0), f, measure), f


def _xx_residual(model, state, i, j, measure):
    f = _as_field(state, model)
    lhs = commutator_apply(X(i), X(j), model, f)
    (k,) = {1, 2, 3} - {i, j}
    eps = _levi_civita(i, j, k)
    coords = f.coords
    r = _radius(coords)
    with np.errstate(over="ignore", invalid="ignore"):
        factor = -1j * model.hbar * model.G(r) * model.dG_over_r(r) * eps
    rhs = _multiply(apply(L(k), model, f), factor)
    return _relative(_lincomb(lhs, rhs, 1.0, -1.0), f, measure), f


def _levi_civita(i, j, k) -> int:
    return int(np.sign((j - i) * (k - i) * (k - j)))


def _points(f) -> int:
    return int(np.prod(f.shape)) if isinstance(f, GridState) else len(f.rule)


def _refined(grid: GridState) -> Optional[GridState]:
    if grid.source is None:
        return None
    axes = tuple((a.lo, a.hi, 2 * a.n) for a in grid.axes)
    return sample_to_grid(grid.source, axes, grid.derivative_order)


def _verify(name, fn, model, state, i, j, measure, refine):
    measure = measure or Measure.flat()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", AccuracyWarning)
        res, f = fn(model, state, i, j, measure)
        report = ResidualReport(name, model.kind.value, i, j, float(res), _points(f))
        if isinstance(f, GridState):
            report.order = f.derivative_order
            fine = _refined(f) if refine else None
            if fine is not None:
                res2, _ = fn(model, fine, i, j, measure)
                report.refined_residual = float(res2)
                report.refined_points = _points(fine)
                report.ratio = float(res / res2) if res2 > 0 else math.inf
                h1, h2 = f.steps[0], fine.steps[0]
                report.expected_ratio = float((h1 / h2) ** f.derivative_order)
    report.warnings = sorted({str(w.message) for w in caught})
    for msg in report.warnings:
        warnings.warn(msg, AccuracyWarning, stacklevel=3)
    return report


def verify_xp_identity(model: AnsatzModel, state, i: int, j: int, measure: Optional[Measure] = None, refine: bool = True):
    """Relative L2 residual of [X_i, P_j] psi against i hbar k_exact(p) psi.

    For grid states built by :func:`sample_to_grid` the residual is repeated
    at doubled resolution and the observed and expected ratios are reported.
    """
    return _verify("xp", _xp_residual, model, state, i, j, measure, refine)


def verify_xx_identity(model: AnsatzModel, state, i: int, j: int, measure: Optional[Measure] = None, refine: bool = True):
    """Relative L2 residual of [X_i, X_j] psi against -i hbar G G'/|p| eps_ijk l_k psi."""
    if i == j:
        raise ValueError("verify_xx_identity needs i != j")
    _check_axis(i), _check_axis(j)
    return _verify("xx", _xx_residual, model, state, i, j, measure, refine)


__all__ = [
    "OpKind",
    "OperatorTag",
    "ResidualReport",
    "X",
    "P",
    "L",
    "x",
    "p",
    "apply",
    "commutator_apply",
    "covering_rule",
    "finite_difference",
    "norm",
    "verify_xp_identity",
    "verify_xx_identity",
]
