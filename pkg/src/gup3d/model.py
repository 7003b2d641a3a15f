"""Scalar layer: physical scales, ansatz families (G, H) and commutator kernels.

Every function here is pure and vectorised over numpy arrays.  Momenta are
passed in physical units; the dimensionless ratio ``x = |p| / p_max`` is
formed internally.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

# Below this value of |p|/p_max the removable singularities are evaluated from
# their Taylor forms.
SMALL_X = 1e-8
# Derivative ratios such as H'(r)/r lose digits to cancellation much earlier,
# so they switch to a longer series at a larger threshold.
SERIES_X = 5e-2

HALF_PI = 0.5 * math.pi


class DomainError(ValueError):
    """Raised when a scalar map is evaluated outside its domain."""


@dataclass(frozen=True)
class PhysicalScales:
    """Reduced Planck constant and momentum cap; together they fix all units."""

    hbar: float = 1.0
    p_max: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "p_max"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be finite and positive, got {value!r}")

    @property
    def length(self) -> float:
        """Derived length scale hbar / p_max."""
        return self.hbar / self.p_max

    @property
    def beta(self) -> float:
        return 1.0 / self.p_max**2


class Kind(str, enum.Enum):
    IDENTITY = "identity"
    TANH = "tanh"
    ARCTAN = "arctan"
    KMM_POSITION = "kmm-g"
    KMM_MOMENTUM = "kmm-h"

    @property
    def capped(self) -> bool:
        return self in (Kind.TANH, Kind.ARCTAN)


class KernelForm(str, enum.Enum):
    EXACT = "exact"
    PAPER_SECOND_ORDER = "paper2nd"
    TAYLOR_SECOND_ORDER = "taylor2nd"
    SQRT_LOWER_BOUND = "sqrt-bound"


# Coefficient c of c*(|p|/p_max)^2 in the transverse part of the kernel.
_SECOND_ORDER = {
    (Kind.TANH, KernelForm.PAPER_SECOND_ORDER): 0.5,
    (Kind.TANH, KernelForm.TAYLOR_SECOND_ORDER): 2.0 / 3.0,
    (Kind.ARCTAN, KernelForm.PAPER_SECOND_ORDER): (2.0 / 3.0) * HALF_PI**2,
    (Kind.ARCTAN, KernelForm.TAYLOR_SECOND_ORDER): (2.0 / 3.0) * HALF_PI**2,
}


def _as_norm(p_norm) -> np.ndarray:
    p = np.asarray(p_norm, dtype=float)
    if np.any(p < 0) or np.any(np.isnan(p)):
        raise DomainError("momentum magnitude must be non-negative")
    return p


def _ret(value, like):
    """Return a Python float for scalar input, an array otherwise."""
    return float(value) if np.ndim(like) == 0 else value


def _tanh_over_x(x):
    small = x < SMALL_X
    xs = np.where(small, 1.0, x)
    return np.where(small, 1.0 - x**2 / 3.0, np.tanh(xs) / xs)


def _arctan_over_x(y):
    small = y < SMALL_X
    ys = np.where(small, 1.0, y)
    return np.where(small, 1.0 - y**2 / 3.0, np.arctan(ys) / ys)


def _sinh2x_over_2x(x):
    """sinh(x) cosh(x) / x."""
    small = x < SMALL_X
    xs = np.where(small, 1.0, x)
    return np.where(small, 1.0 + 2.0 * x**2 / 3.0, np.sinh(2.0 * xs) / (2.0 * xs))


@dataclass(frozen=True)
class AnsatzModel:
    """A named pair (G, H): X_i = i hbar G(|p|) d/dp_i and P_i = p_i H(|p|)."""

    kind: Kind = Kind.TANH
    scales: PhysicalScales = PhysicalScales()

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))

    @classmethod
    def of(cls, kind, hbar: float = 1.0, p_max: float = 1.0) -> "AnsatzModel":
        return cls(Kind(kind), PhysicalScales(hbar, p_max))

    @property
    def hbar(self) -> float:
        return self.scales.hbar

    @property
    def p_max(self) -> float:
        return self.scales.p_max

    # -- scalar maps --------------------------------------------------------

    def G(self, r):
        x = np.asarray(r, dtype=float) / self.p_max
        k = self.kind
        if k is Kind.TANH:
            with np.errstate(over="ignore"):  # G = inf past |p| ~ 355 p_max
                out = np.cosh(x) ** 2
        elif k is Kind.ARCTAN:
            out = 1.0 + (HALF_PI * x) ** 2
        elif k is Kind.KMM_POSITION:
            out = 1.0 + x**2
        else:
            out = np.ones_like(x)
        return out

    def H(self, r):
        x = np.asarray(r, dtype=float) / self.p_max
        k = self.kind
        if k is Kind.TANH:
            out = _tanh_over_x(x)
        elif k is Kind.ARCTAN:
            out = _arctan_over_x(HALF_PI * x)
        elif k is Kind.KMM_MOMENTUM:
            out = 1.0 + x**2 / 3.0
        else:
            out = np.ones_like(x)
        return out

    def dG_over_r(self, r):
        """G'(r)/r, regular at r = 0; the gradient of G is this times p."""
        x = np.asarray(r, dtype=float) / self.p_max
        k = self.kind
        scale = 1.0 / self.p_max**2
        if k is Kind.TANH:
            # G' / r = sinh(2x) / (x p_max^2)
            return scale * 2.0 * _sinh2x_over_2x(x)
        if k is Kind.ARCTAN:
            return scale * 2.0 * HALF_PI**2 * np.ones_like(x)
        if k is Kind.KMM_POSITION:
            return scale * 2.0 * np.ones_like(x)
        return np.zeros_like(x)

    def dH_over_r(self, r):
        """H'(r)/r, regular at r = 0."""
        x = np.asarray(r, dtype=float) / self.p_max
        k = self.kind
        scale = 1.0 / self.p_max**2
        if k is Kind.TANH:
            return scale * _tanh_dh_over_x(x)
        if k is Kind.ARCTAN:
            return scale * HALF_PI**2 * _arctan_dh_over_y(HALF_PI * x)
        if k is Kind.KMM_MOMENTUM:
            return scale * (2.0 / 3.0) * np.ones_like(x)
        return np.zeros_like(x)

    def d_rH(self, r):
        """Radial derivative d/dr [r H(r)], in closed form per kind."""
        x = np.asarray(r, dtype=float) / self.p_max
        k = self.kind
        if k is Kind.TANH:
            return 1.0 / np.cosh(x) ** 2
        if k is Kind.ARCTAN:
            return 1.0 / (1.0 + (HALF_PI * x) ** 2)
        if k is Kind.KMM_MOMENTUM:
            return 1.0 + x**2
        return np.ones_like(x)

    def transverse(self, r):
        """G(r) H(r): kernel coefficient on the projector orthogonal to p."""
        x = np.asarray(r, dtype=float) / self.p_max
        k = self.kind
        if k is Kind.TANH:
            return _sinh2x_over_2x(x)
        if k is Kind.ARCTAN:
            y = HALF_PI * x
            return (1.0 + y**2) * _arctan_over_x(y)
        if k is Kind.KMM_POSITION:
            return 1.0 + x**2
        if k is Kind.KMM_MOMENTUM:
            return 1.0 + x**2 / 3.0
        return np.ones_like(x)

    def longitudinal(self, r):
        """G(r) d/dr[r H(r)]: kernel coefficient along p."""
        x = np.asarray(r, dtype=float) / self.p_max
        k = self.kind
        if k in (Kind.TANH, Kind.ARCTAN, Kind.IDENTITY):
            return np.ones_like(x)
        return 1.0 + x**2

    def growth_rate(self) -> float:
        """Exponential growth rate of G in 1/momentum (0 for polynomial G)."""
        return 2.0 / self.p_max if self.kind is Kind.TANH else 0.0


def _tanh_dh_over_x(x):
    # d/dx[tanh x / x] / x = (x sech^2 x - tanh x) / x^3
    small = x < SERIES_X
    xs = np.where(small, 1.0, x)
    e = np.exp(-2.0 * xs)
    sech2 = 4.0 * e / (1.0 + e) ** 2  # no overflow for large x
    direct = (xs * sech2 - np.tanh(xs)) / xs**3
    x2 = x * x
    series = -2.0 / 3.0 + x2 * (8.0 / 15.0 + x2 * (-34.0 / 105.0 + x2 * 496.0 / 2835.0))
    return np.where(small, series, direct)


def _arctan_dh_over_y(y):
    # d/dy[arctan y / y] / y = (y - (1 + y^2) arctan y) / (y^3 (1 + y^2))
    small = y < SERIES_X
    ys = np.where(small, 1.0, y)
    direct = (ys - (1.0 + ys**2) * np.arctan(ys)) / (ys**3 * (1.0 + ys**2))
    y2 = y * y
    series = (-2.0 / 3.0 + y2 * (2.0 / 15.0 + y2 * (-2.0 / 35.0 + y2 * 2.0 / 63.0))) / (1.0 + y2)
    return np.where(small, series, direct)


# -- public operations ------------------------------------------------------


def eval_G(model: AnsatzModel, p_norm):
    p = _as_norm(p_norm)
    return _ret(model.G(p), p_norm)


def eval_H(model: AnsatzModel, p_norm):
    p = _as_norm(p_norm)
    return _ret(model.H(p), p_norm)


def capped_momentum(model: AnsatzModel, p_vec):
    """Modified momentum p_i H(|p|) for one vector (last axis) or a stack."""
    p = np.asarray(p_vec, dtype=float)
    r = np.linalg.norm(p, axis=-1, keepdims=True)
    return p * model.H(r)


def condition_residual_1d(model: AnsatzModel, p):
    """G(p) d/dp[p H(p)] - 1 from analytic derivatives."""
    pp = np.asarray(p, dtype=float)
    if np.any(pp <= 0):
        raise DomainError("condition residual needs p > 0")
    return _ret(model.G(pp) * model.d_rH(pp) - 1.0, p)


def _check_axis(axis: int, dim: int = 3) -> int:
    if not (isinstance(axis, (int, np.integer)) and 1 <= axis <= dim):
        raise ValueError(f"axis must be in 1..{dim}, got {axis!r}")
    return int(axis) - 1


def commutator_kernel(model: AnsatzModel, form, p_vec, i: int, j: int):
    """Scalar k with [X_i, P_j] psi = i hbar k psi, at momentum ``p_vec``.

    ``p_vec`` may be a single 3-vector or an array with the components on the
    last axis.  Axes are 1-based.
    """
    form = KernelForm(form)
    kind = model.kind
    if form is KernelForm.SQRT_LOWER_BOUND and kind is not Kind.ARCTAN:
        raise ValueError("sqrt lower bound is only defined for the arctan model")
    if form in (KernelForm.PAPER_SECOND_ORDER, KernelForm.TAYLOR_SECOND_ORDER) and not kind.capped:
        raise ValueError(f"{form.value} kernel is only defined for tanh and arctan models")
    p = np.asarray(p_vec, dtype=float)
    dim = p.shape[-1]
    a, b = _check_axis(i, dim), _check_axis(j, dim)
    r = np.linalg.norm(p, axis=-1)
    x = r / model.p_max
    delta = 1.0 if a == b else 0.0
    zero = r == 0
    rs = np.where(zero, 1.0, r)
    nn = np.where(zero, 0.0, p[..., a] * p[..., b] / rs**2)
    proj = delta - nn

    if form is KernelForm.EXACT:
        out = model.transverse(r) * proj + model.longitudinal(r) * nn
    elif form is KernelForm.SQRT_LOWER_BOUND:
        out = np.sqrt(1.0 + (HALF_PI * x) ** 2) * proj + nn
    else:
        out = delta + _SECOND_ORDER[(kind, form)] * x**2 * proj
    out = np.where(zero, delta, out)
    return float(out) if out.ndim == 0 else out


class Bound(str, enum.Enum):
    """Scalar inequalities used in the uncertainty estimates."""

    TANH_SQUARED = "tanh2-le-x2"  # tanh^2 x <= x^2
    ARCTAN_SQRT = "arctan-ge-sqrt"  # (1+x^2) arctan(x)/x >= sqrt(1+x^2)
    SQRT_GE_ONE = "sqrt-ge-1"  # sqrt(1+x^2) >= 1
    SINHCOSH_QUADRATIC = "sinhcosh-ge-quadratic"  # sinh x cosh x / x >= 1 + x^2/2
    ARCTAN_GE_ONE = "arctan-ge-1"  # (1+x^2) arctan(x)/x >= 1


def scalar_bound_check(bound_id, x):
    """Signed slack of one inequality; non-negative means the bound holds."""
    try:
        bound = Bound(bound_id)
    except ValueError:
        raise ValueError(f"unknown bound id {bound_id!r}") from None
    xx = np.asarray(x, dtype=float)
    if np.any(xx <= 0):
        raise DomainError("bounds are checked for x > 0")
    if bound is Bound.TANH_SQUARED:
        out = xx**2 - np.tanh(xx) ** 2
    elif bound is Bound.ARCTAN_SQRT:
        out = (1.0 + xx**2) * _arctan_over_x(xx) - np.sqrt(1.0 + xx**2)
    elif bound is Bound.SQRT_GE_ONE:
        out = np.sqrt(1.0 + xx**2) - 1.0
    elif bound is Bound.SINHCOSH_QUADRATIC:
        out = _sinh2x_over_2x(xx) - (1.0 + 0.5 * xx**2)
    else:
        out = (1.0 + xx**2) * _arctan_over_x(xx) - 1.0
    return _ret(out, x)
