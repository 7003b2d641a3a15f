"""Momentum-space wave functions, measures, quadrature and moments.

Three representations are used:

* ``GaussianState`` / ``Superposition`` -- closed forms with exact derivatives;
* ``SampledState`` -- a closed form evaluated on a quadrature rule together
  with its gradient and Hessian (a second-order jet), so operators can be
  applied without finite differences;
* ``GridState`` -- amplitudes on a uniform tensor grid; derivatives by central
  differences.
"""

from __future__ import annotations

import csv
import io
import math
import struct
import warnings
from dataclasses import dataclass, field, replace
from typing import Iterator, NamedTuple, Optional, Sequence

import numpy as np

from .model import AnsatzModel, Kind
from .quadrature import ENVELOPE_WIDTHS, Rule, envelope_rule, trapezoid_weights

DECAY_THRESHOLD = 1e-10
COVERAGE_WIDTHS = 8.0
MIN_POINTS = 16


class AccuracyWarning(UserWarning):
    """A numerical result may not meet its stated tolerance."""


class AccuracyError(ArithmeticError):
    """A numerical result is outside what round-off can explain."""


# -- measures ---------------------------------------------------------------


@dataclass(frozen=True)
class Measure:
    """Integration weight: 1 (flat) or 1/G(|p|) for a given model."""

    model: Optional[AnsatzModel] = None

    @classmethod
    def flat(cls) -> "Measure":
        return cls(None)

    @classmethod
    def weighted(cls, model: AnsatzModel) -> "Measure":
        return cls(model)

    @property
    def is_flat(self) -> bool:
        return self.model is None or self.model.kind in (Kind.IDENTITY, Kind.KMM_MOMENTUM)

    @property
    def name(self) -> str:
        return "flat" if self.model is None else "weighted"

    def weight(self, r):
        if self.model is None:
            return np.ones_like(np.asarray(r, dtype=float))
        return 1.0 / self.model.G(r)


def _strip(model: Optional[AnsatzModel]) -> float:
    """Half-width of the strip around the real axis where G, H and 1/G are analytic."""
    if model is None:
        return math.inf
    k, pm = model.kind, model.p_max
    if k is Kind.TANH:
        return 0.5 * math.pi * pm
    if k is Kind.ARCTAN:
        return 2.0 / math.pi * pm
    if k is Kind.KMM_POSITION:
        return pm
    return math.inf


def _cap(model: Optional[AnsatzModel]) -> float:
    # cosh(x)^2 stays finite up to x ~ 355
    if model is not None and model.kind is Kind.TANH:
        return 340.0 * model.p_max
    return math.inf


@dataclass(frozen=True)
class RuleSpec:
    """How to adapt envelope rules to the functions appearing in integrands."""

    growth: float = 0.0
    strip: float = math.inf
    cap: float = math.inf

    @classmethod
    def for_(cls, model: Optional[AnsatzModel] = None, measure: Optional[Measure] = None) -> "RuleSpec":
        models = [m for m in (model, measure.model if measure else None) if m is not None]
        growth = 0.0
        if model is not None:
            # |X psi|^2 carries G^2 / G_measure
            growth = 2.0 * model.growth_rate()
            if measure is not None and measure.model is not None:
                growth -= measure.model.growth_rate()
        strip = min([_strip(m) for m in models], default=math.inf)
        cap = min([_cap(m) for m in models], default=math.inf)
        return cls(max(growth, 0.0), strip, cap)

    def overflows(self, center, tau) -> bool:
        """True when an envelope rule would have to reach past ``cap``.

        Without growth the integrand decays at least like the envelope times
        the measure weight, so a rule clipped at ``cap`` loses nothing.
        """
        if self.growth <= 0.0:
            return False
        reach = ENVELOPE_WIDTHS * np.max(tau) + 2.0 * self.growth * np.max(tau) ** 2
        return float(np.linalg.norm(center)) + reach > self.cap


# -- closed forms -----------------------------------------------------------


def _vec(v, dim=None) -> np.ndarray:
    a = np.atleast_1d(np.asarray(v, dtype=float))
    if dim is not None and a.shape[0] == 1 and dim > 1:
        a = np.full(dim, a[0])
    return a


@dataclass(frozen=True)
class GaussianState:
    """psi(p) = amplitude * exp(-sum_k (p_k - c_k)^2 / (4 sigma_k^2)).

    ``|psi|^2`` has standard deviation ``sigma_k`` along axis k.  With the
    default amplitude the state has unit norm under the flat measure.
    """

    center: np.ndarray
    widths: np.ndarray
    amplitude: complex = None

    def __post_init__(self):
        c = _vec(self.center)
        w = _vec(self.widths, c.shape[0])
        if c.shape != w.shape or c.shape[0] not in (1, 3):
            raise ValueError("center and widths must both have 1 or 3 components")
        if np.any(~np.isfinite(w)) or np.any(w <= 0):
            raise ValueError("widths must be strictly positive")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "widths", w)
        if self.amplitude is None:
            amp = float(np.prod((2.0 * np.pi * w**2) ** -0.25))
            object.__setattr__(self, "amplitude", complex(amp))
        else:
            object.__setattr__(self, "amplitude", complex(self.amplitude))

    @classmethod
    def isotropic(cls, sigma: float, center=(0.0, 0.0, 0.0)) -> "GaussianState":
        c = _vec(center)
        return cls(c, np.full(c.shape[0], float(sigma)))

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    @property
    def is_isotropic(self) -> bool:
        return bool(np.ptp(self.widths) == 0.0)

    def __eq__(self, other):
        return (
            isinstance(other, GaussianState)
            and np.array_equal(self.center, other.center)
            and np.array_equal(self.widths, other.widths)
            and self.amplitude == other.amplitude
        )

    def __hash__(self):
        return hash((self.center.tobytes(), self.widths.tobytes(), self.amplitude))

    def scaled(self, factor: complex) -> "GaussianState":
        return replace(self, amplitude=self.amplitude * factor)

    def value(self, points) -> np.ndarray:
        q = np.asarray(points, dtype=float) - self.center
        return self.amplitude * np.exp(-np.sum(q**2 / (4.0 * self.widths**2), axis=-1))

    def jet(self, points, order: int = 2):
        """Value (N,), gradient (d, N) and Hessian (d, d, N) at ``points``.

        Entries above ``order`` are returned as None.
        """
        q = (np.asarray(points, dtype=float) - self.center).T  # (d, N)
        inv = 1.0 / (2.0 * self.widths**2)
        v = self.amplitude * np.exp(-0.5 * np.sum(q**2 * inv[:, None], axis=0))
        s = -q * inv[:, None]  # d(log psi)/dp_k
        grad = s * v if order >= 1 else None
        hess = None
        if order >= 2:
            hess = (s[:, None, :] * s[None, :, :] - np.diag(inv)[:, :, None]) * v
        return v, grad, hess


@dataclass(frozen=True)
class Superposition:
    """Finite linear combination of Gaussian states."""

    components: tuple
    coefficients: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        coefs = tuple(complex(c) for c in self.coefficients)
        if not comps or len(comps) != len(coefs):
            raise ValueError("need one coefficient per component")
        if len({c.dim for c in comps}) != 1:
            raise ValueError("components must share a dimension")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "coefficients", coefs)

    @property
    def dim(self) -> int:
        return self.components[0].dim

    def scaled(self, factor: complex) -> "Superposition":
        return Superposition(self.components, tuple(c * factor for c in self.coefficients))

    def value(self, points):
        return sum(c * g.value(points) for c, g in zip(self.coefficients, self.components))


def _terms(state):
    if isinstance(state, GaussianState):
        return [(1.0 + 0j, state)]
    return list(zip(state.coefficients, state.components))


def envelope(a: GaussianState, b: GaussianState):
    """Centre, width and log-prefactor of conj(psi_a) psi_b as a Gaussian."""
    va, vb = a.widths**2, b.widths**2
    tau2 = va * vb / (va + vb)
    center = tau2 * (a.center / va + b.center / vb)
    log_pref = -np.sum((a.center - b.center) ** 2 / (4.0 * (va + vb)))
    return center, np.sqrt(tau2), float(log_pref)


def gaussian_overlap(a: GaussianState, b: GaussianState) -> complex:
    """Closed-form flat-measure overlap <a, b>."""
    _, tau, log_pref = envelope(a, b)
    return complex(np.conj(a.amplitude) * b.amplitude * np.exp(log_pref) * np.prod(2.0 * math.sqrt(math.pi) * tau))


# -- sampled jets -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SampledState:
    """A field on quadrature nodes, optionally carrying gradient and Hessian."""

    rule: Rule
    value: np.ndarray
    grad: Optional[np.ndarray] = None
    hess: Optional[np.ndarray] = None

    @property
    def dim(self) -> int:
        return self.rule.dim

    @property
    def coords(self):
        return tuple(self.rule.points.T)

    def scaled(self, factor: complex) -> "SampledState":
        return SampledState(
            self.rule,
            self.value * factor,
            None if self.grad is None else self.grad * factor,
            None if self.hess is None else self.hess * factor,
        )


def sample(state, rule: Rule, order: int = 2) -> SampledState:
    """Evaluate a closed-form state and its derivatives up to ``order`` on ``rule``."""
    v = g = h = 0
    for coef, comp in _terms(state):
        cv, cg, ch = comp.jet(rule.points, order)
        v = v + coef * cv
        if order >= 1:
            g = g + coef * cg
        if order >= 2:
            h = h + coef * ch
    return SampledState(rule, v, g if order >= 1 else None, h if order >= 2 else None)


# -- grids ------------------------------------------------------------------


class Axis(NamedTuple):
    lo: float
    hi: float
    n: int

    @property
    def step(self) -> float:
        return (self.hi - self.lo) / (self.n - 1)

    def nodes(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n)


@dataclass(frozen=True, eq=False)
class GridState:
    """Complex amplitudes on a uniform tensor grid (row-major, axis 1 slowest)."""

    axes: tuple
    amplitudes: np.ndarray
    derivative_order: int = 4
    source: object = field(default=None, repr=False)

    def __post_init__(self):
        axes = tuple(Axis(float(a[0]), float(a[1]), int(a[2])) for a in self.axes)
        amps = np.asarray(self.amplitudes, dtype=complex)
        if len(axes) not in (1, 3):
            raise ValueError("grids are 1D or 3D")
        for a in axes:
            if a.n < MIN_POINTS:
                raise ValueError(f"need at least {MIN_POINTS} points per axis, got {a.n}")
            if not a.hi > a.lo:
                raise ValueError("axis extent must be positive")
        if amps.shape != tuple(a.n for a in axes):
            raise ValueError(f"amplitude shape {amps.shape} does not match axes")
        if self.derivative_order not in (2, 4):
            raise ValueError("derivative order must be 2 or 4")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def shape(self):
        return self.amplitudes.shape

    @property
    def value(self) -> np.ndarray:
        return self.amplitudes

    @property
    def steps(self):
        return tuple(a.step for a in self.axes)

    @property
    def coords(self):
        return tuple(np.meshgrid(*[a.nodes() for a in self.axes], indexing="ij", sparse=True))

    def weights(self) -> np.ndarray:
        w = trapezoid_weights(self.axes[0].n, self.axes[0].step)
        for a in self.axes[1:]:
            w = np.multiply.outer(w, trapezoid_weights(a.n, a.step))
        return w

    def with_amplitudes(self, amplitudes) -> "GridState":
        return GridState(self.axes, amplitudes, self.derivative_order, self.source)

    def scaled(self, factor: complex) -> "GridState":
        return self.with_amplitudes(self.amplitudes * factor)

    def compatible(self, other: "GridState") -> bool:
        return self.axes == other.axes

    def boundary_ratio(self, values=None, axes=None) -> float:
        """max |f|^2 on the boundary faces over max |f|^2 on the grid."""
        f2 = np.abs(self.amplitudes if values is None else values) ** 2
        peak = f2.max()
        if peak == 0:
            return 0.0
        edge = 0.0
        for ax in range(f2.ndim) if axes is None else axes:
            g = np.moveaxis(f2, ax, 0)
            edge = max(edge, g[0].max(), g[-1].max())
        return float(edge / peak)

    def decays(self) -> bool:
        return self.boundary_ratio() <= DECAY_THRESHOLD


def grid_axes(center, widths, n: int = 64, extent: float = COVERAGE_WIDTHS):
    """Axes spanning ``center +- extent * widths`` with ``n`` points each."""
    c = _vec(center)
    w = _vec(widths, c.shape[0])
    return tuple(Axis(ci - extent * wi, ci + extent * wi, n) for ci, wi in zip(c, w))


def sample_to_grid(g, axes, derivative_order: int = 4) -> GridState:
    """Sample a closed-form state on a grid covering each centre +- 8 widths."""
    axes = tuple(Axis(float(a[0]), float(a[1]), int(a[2])) for a in axes)
    if len(axes) != g.dim:
        raise ValueError("grid dimension does not match the state")
    for coef, comp in _terms(g):
        lo = comp.center - COVERAGE_WIDTHS * comp.widths
        hi = comp.center + COVERAGE_WIDTHS * comp.widths
        for k, a in enumerate(axes):
            slack = 1e-12 * max(1.0, abs(lo[k]), abs(hi[k]))
            if a.lo > lo[k] + slack or a.hi < hi[k] - slack:
                raise ValueError(
                    f"axis {k + 1} [{a.lo}, {a.hi}] does not cover centre +- {COVERAGE_WIDTHS:g} widths"
                )
    mesh = np.meshgrid(*[a.nodes() for a in axes], indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=1)
    values = g.value(points).reshape(tuple(a.n for a in axes))
    return GridState(axes, values, derivative_order, source=g)


# -- inner products and moments ---------------------------------------------


def _closed(state) -> bool:
    return isinstance(state, (GaussianState, Superposition))


def _radius(coords):
    return np.sqrt(sum(c**2 for c in coords))


def integrate(state, integrand, measure: Measure) -> complex:
    """Sum of weight * measure * integrand over the nodes of a sampled/grid state."""
    r = _radius(state.coords)
    if isinstance(state, GridState):
        w = state.weights()
    else:
        w = state.rule.weights
    return complex(np.sum(w * measure.weight(r) * integrand))


def _raw_inner(a, b, measure: Measure) -> complex:
    return integrate(a, np.conj(a.value) * b.value, measure)


def pair_samples(state, measure: Measure, model: Optional[AnsatzModel] = None, order: int = 0) -> Iterator:
    """Yield (c_ab, c_ba, a, b) so a sesquilinear form F is the sum of
    c_ab F(a, b) + c_ba F(b, a) over the yielded pairs.

    For a closed form each unordered pair of Gaussian components is sampled
    once on a rule adapted to the product envelope (c_ba = 0 on the
    diagonal); pairs with negligible overlap are skipped.  Any other state is
    yielded as the single pair (1, 0, state, state).
    """
    if not _closed(state):
        yield 1.0 + 0j, 0j, state, state
        return
    spec = RuleSpec.for_(model, measure)
    terms = _terms(state)
    for ia, (ca, a) in enumerate(terms):
        for ib in range(ia, len(terms)):
            cb, b = terms[ib]
            center, tau, log_pref = envelope(a, b)
            if log_pref < -60.0:
                continue
            if spec.overflows(center, tau):
                raise OverflowError("integrand grows past the double-precision range of the rule")
            rule = envelope_rule(center, tau, spec.growth, spec.strip, spec.cap)
            sa = sample(a, rule, order)
            sb = sa if ib == ia else sample(b, rule, order)
            yield np.conj(ca) * cb, (np.conj(cb) * ca if ib != ia else 0j), sa, sb


def norm_squared(state, measure: Measure) -> float:
    if _closed(state) and measure.is_flat:
        return float(inner_product(state, state, measure).real)
    total = 0j
    for cab, cba, x, y in pair_samples(state, measure):
        total += hermitian_sum(cab, cba, _raw_inner(x, y, measure))
    return float(np.real(total))


def hermitian_sum(cab: complex, cba: complex, value: complex) -> complex:
    """c_ab F(a, b) + c_ba F(b, a) for a Hermitian form, F(b, a) = conj(F(a, b))."""
    return cab * value + cba * np.conj(value)


def normalize(state, measure: Optional[Measure] = None):
    """Rescale so the squared norm is 1 under ``measure`` (flat by default)."""
    measure = measure or Measure.flat()
    n2 = norm_squared(state, measure)
    if not (n2 > 0 and math.isfinite(n2)):
        raise ValueError("cannot normalize a state with zero or non-finite norm")
    return state.scaled(1.0 / math.sqrt(n2))


def inner_product(a, b, measure: Optional[Measure] = None) -> complex:
    """<a, b> under ``measure``, conjugate-linear in ``a``."""
    measure = measure or Measure.flat()
    if _closed(a) and _closed(b):
        if a.dim != b.dim:
            raise ValueError("states have different dimensions")
        total = 0j
        for ca, ga in _terms(a):
            for cb, gb in _terms(b):
                if measure.is_flat:
                    total += np.conj(ca) * cb * gaussian_overlap(ga, gb)
                else:
                    total += np.conj(ca) * cb * _weighted_overlap(ga, gb, measure)
        return complex(total)
    if isinstance(a, GridState) and isinstance(b, GridState):
        if not a.compatible(b):
            raise ValueError("grid states live on different grids")
        return _raw_inner(a, b, measure)
    if isinstance(a, SampledState) and isinstance(b, SampledState):
        if a.rule is not b.rule:
            raise ValueError("sampled states live on different rules")
        return _raw_inner(a, b, measure)
    raise ValueError("inner product needs two states of the same representation")


def _weighted_overlap(a: GaussianState, b: GaussianState, measure: Measure) -> complex:
    center, tau, log_pref = envelope(a, b)
    if log_pref < -700.0:
        return 0j
    spec = RuleSpec.for_(None, measure)
    rule = envelope_rule(center, tau, 0.0, spec.strip, spec.cap)
    r = np.linalg.norm(rule.points, axis=1)
    f = np.conj(a.value(rule.points)) * b.value(rule.points)
    return complex(np.sum(rule.weights * measure.weight(r) * f))


@dataclass(frozen=True)
class Moments:
    """Canonical momentum moments of a state."""

    mean: np.ndarray  # <p_i>
    second: np.ndarray  # <p_i p_j>
    axis: int

    @property
    def p_squared(self) -> float:
        return float(np.trace(self.second))

    @property
    def p_perp_squared(self) -> float:
        k = self.axis - 1
        return self.p_squared - float(self.second[k, k])

    def to_dict(self):
        return {
            "mean": self.mean.tolist(),
            "second": self.second.tolist(),
            "p_squared": self.p_squared,
            "p_perp_squared": self.p_perp_squared,
            "axis": self.axis,
        }


def canonical_moments(state, measure: Optional[Measure] = None, axis: int = 1) -> Moments:
    """<p_i>, <p_i p_j>, <|p|^2> and <p_perp^2> about ``axis`` (1-based)."""
    measure = measure or Measure.flat()
    d = state.dim
    if not 1 <= axis <= d:
        raise ValueError(f"axis must be in 1..{d}")
    norm = 0j
    mean = np.zeros(d, dtype=complex)
    second = np.zeros((d, d), dtype=complex)
    for cab, cba, x, y in pair_samples(state, measure):
        dens = np.conj(x.value) * y.value
        coords = x.coords
        norm += hermitian_sum(cab, cba, integrate(x, dens, measure))
        for i in range(d):
            mean[i] += hermitian_sum(cab, cba, integrate(x, coords[i] * dens, measure))
            for j in range(i, d):
                second[i, j] += hermitian_sum(cab, cba, integrate(x, coords[i] * coords[j] * dens, measure))
    second = np.triu(second) + np.triu(second, 1).T
    n = norm.real
    return Moments(mean.real / n, second.real / n, axis)


# -- serialisation ----------------------------------------------------------

MAGIC = b"GUPGRID\x01"


def save_grid(state: GridState, path) -> None:
    """Binary layout: magic, uint32 dim, uint32 order, per axis (f8 lo, f8 hi,
    u8 n), then complex128 amplitudes in row-major order; all little-endian."""
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", state.dim, state.derivative_order))
        for a in state.axes:
            fh.write(struct.pack("<ddQ", a.lo, a.hi, a.n))
        fh.write(np.ascontiguousarray(state.amplitudes, dtype="<c16").tobytes())


def load_grid(path) -> GridState:
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:8] != MAGIC:
        raise ValueError("not a grid file")
    dim, order = struct.unpack_from("<II", data, 8)
    off = 16
    axes = []
    for _ in range(dim):
        axes.append(Axis(*struct.unpack_from("<ddQ", data, off)))
        off += 24
    shape = tuple(a.n for a in axes)
    amps = np.frombuffer(data, dtype="<c16", offset=off).reshape(shape)
    return GridState(tuple(axes), amps.astype(complex), order)


def grid_to_csv(state: GridState, path=None) -> Optional[str]:
    """Columns p1[,p2,p3],re,im; one row per node in row-major order."""
    names = [f"p{k + 1}" for k in range(state.dim)]
    mesh = np.meshgrid(*[a.nodes() for a in state.axes], indexing="ij")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names + ["re", "im"])
    flat = state.amplitudes.ravel()
    cols = [m.ravel() for m in mesh]
    for n in range(flat.size):
        w.writerow([repr(float(c[n])) for c in cols] + [repr(float(flat[n].real)), repr(float(flat[n].imag))])
    text = buf.getvalue()
    if path is None:
        return text
    with open(path, "w") as fh:
        fh.write(text)
    return None


def grid_from_csv(path_or_text, derivative_order: int = 4) -> GridState:
    if "\n" in str(path_or_text):
        text = str(path_or_text)
    else:
        with open(path_or_text) as fh:
            text = fh.read()
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], np.array(rows[1:], dtype=float)
    dim = len(header) - 2
    axes = []
    for k in range(dim):
        nodes = np.unique(body[:, k])
        axes.append(Axis(float(nodes[0]), float(nodes[-1]), nodes.size))
    shape = tuple(a.n for a in axes)
    amps = (body[:, dim] + 1j * body[:, dim + 1]).reshape(shape)
    return GridState(tuple(axes), amps, derivative_order)


def warn_accuracy(message: str) -> None:
    warnings.warn(message, AccuracyWarning, stacklevel=3)


__all__ = [
    "AccuracyError",
    "AccuracyWarning",
    "Axis",
    "GaussianState",
    "GridState",
    "Measure",
    "Moments",
    "SampledState",
    "Superposition",
    "canonical_moments",
    "envelope",
    "gaussian_overlap",
    "grid_axes",
    "grid_from_csv",
    "grid_to_csv",
    "inner_product",
    "integrate",
    "load_grid",
    "normalize",
    "norm_squared",
    "pair_samples",
    "sample",
    "sample_to_grid",
    "save_grid",
]
