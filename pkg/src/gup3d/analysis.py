"""Uncertainty pipelines, bound functions and variational scans."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields
from typing import Callable, Optional, Sequence

import numpy as np

from .model import HALF_PI, AnsatzModel, Kind
from .operators import OperatorTag, OpKind, P, X, _position_multiplier, apply, commutator_apply
from .states import (
    canonical_moments,
    AccuracyError,
    GaussianState,
    GridState,
    Measure,
    SampledState,
    Superposition,
    hermitian_sum,
    pair_samples,
)

NEGATIVE_VARIANCE = 1e-10
SCAN_POINTS = 40
SCAN_TOL = 1e-6
BOUND_TOL = 1e-10
ROBERTSON_TOL = 1e-8
CAP_TOL = 1e-10
GOLDEN = 0.5 * (math.sqrt(5.0) - 1.0)

INTERIOR = "interior minimum"
NO_INTERIOR = "no interior minimum"


# -- uncertainty reports ----------------------------------------------------


@dataclass
class UncertaintyReport:
    """Uncertainties of X_i and P_j on one state (axes are 1-based).

    ``commutator_expectation`` is <[X_i, P_j]>/i, in units of action.
    ``canonical_delta_p`` is the standard deviation of p_j and
    ``canonical_rms_p`` the root mean square sqrt(<p_j^2>).
    """

    i: int
    j: int
    delta_x: float
    delta_p: float
    commutator_expectation: float
    robertson_slack: float
    mean_x: float
    mean_p: float
    canonical_delta_p: float
    canonical_rms_p: float

    def __post_init__(self):
        for f in fields(self):
            cast = int if f.name in ("i", "j") else float
            object.__setattr__(self, f.name, cast(getattr(self, f.name)))

    def to_dict(self):
        return asdict(self)


def _variance(second: float, mean: complex, label: str) -> float:
    if not math.isfinite(second):
        return math.inf
    var = second - abs(mean) ** 2
    scale = max(abs(second), np.finfo(float).tiny)
    if var < 0:
        if var / scale < -NEGATIVE_VARIANCE:
            raise AccuracyError(f"negative variance for {label}: {var:.3e} (relative {var / scale:.3e})")
        var = 0.0
    return var


@dataclass
class _Sums:
    norm: complex = 0j
    x1: dict = field(default_factory=dict)  # <X_i>
    x2: dict = field(default_factory=dict)  # ||X_i psi||^2
    p1: dict = field(default_factory=dict)
    p2: dict = field(default_factory=dict)
    q1: dict = field(default_factory=dict)  # canonical <p_j>
    q2: dict = field(default_factory=dict)
    comm: dict = field(default_factory=dict)  # <[X_i, P_j]>

    def add(self, store, key, value):
        store[key] = store.get(key, 0j) + value


def _h_parts(model: AnsatzModel, r):
    if model.kind in (Kind.IDENTITY, Kind.KMM_POSITION):
        return np.ones_like(r), np.zeros_like(r)
    return model.H(r), model.dH_over_r(r)


def _jet_pair(model, a, b, cab, cba, measure, xs, ps, comms, sums: _Sums, with_x: bool):
    """Accumulate c_ab F(a, b) + c_ba F(b, a) for every form F on one rule."""
    coords = a.coords
    r = np.sqrt(sum(c**2 for c in coords))
    w = a.rule.weights * measure.weight(r)
    both = cba != 0
    va, vb = a.value, b.value
    ca, cb = np.conj(va), np.conj(vb)
    dens = ca * vb

    def herm(store, key, integrand):
        sums.add(store, key, hermitian_sum(cab, cba, np.sum(w * integrand)))

    sums.norm += hermitian_sum(cab, cba, np.sum(w * dens))
    h, dh = _h_parts(model, r)
    f = {}
    for j in ps:
        pj = coords[j - 1]
        f[j] = pj * h
        herm(sums.p1, j, f[j] * dens)
        herm(sums.p2, j, f[j] ** 2 * dens)
        herm(sums.q1, j, pj * dens)
        herm(sums.q2, j, pj**2 * dens)
    if not with_x:
        return
    ih = 1j * model.hbar
    with np.errstate(over="ignore", invalid="ignore"):
        g, _ = _position_multiplier(model, coords)
        xa, xb = {}, {}
        for i in xs:
            xb[i] = ih * g * b.grad[i - 1]
            xa[i] = ih * g * a.grad[i - 1] if both else None
            s_ab = np.sum(w * ca * xb[i])
            s_ba = np.sum(w * cb * xa[i]) if both else 0j
            sums.add(sums.x1, i, cab * s_ab + cba * s_ba)
            herm(sums.x2, i, np.conj(xa[i] if both else xb[i]) * xb[i])
        for i, j in comms:
            # X_i (P_j psi) - P_j (X_i psi), with d_i(p_j H) = delta_ij H + p_j p_i H'/|p|
            df = coords[j - 1] * coords[i - 1] * dh + (h if i == j else 0.0)
            comm_b = ih * g * (df * vb + f[j] * b.grad[i - 1]) - f[j] * xb[i]
            s_ab = np.sum(w * ca * comm_b)
            s_ba = 0j
            if both:
                comm_a = ih * g * (df * va + f[j] * a.grad[i - 1]) - f[j] * xa[i]
                s_ba = np.sum(w * cb * comm_a)
            sums.add(sums.comm, (i, j), cab * s_ab + cba * s_ba)


def _grid_terms(model, a, measure, xs, ps, comms, sums: _Sums, with_x: bool):
    """Same forms on a grid state, with every operator applied through :func:`apply`."""
    w = a.weights() * measure.weight(np.sqrt(sum(c**2 for c in a.coords)))
    ca = np.conj(a.value)
    sums.norm += np.sum(w * ca * a.value)
    for j in ps:
        pa = apply(P(j), model, a).value
        qa = apply(OperatorTag(OpKind.CANONICAL_MOMENTUM, j), model, a).value
        sums.add(sums.p1, j, np.sum(w * ca * pa))
        sums.add(sums.p2, j, np.sum(w * np.abs(pa) ** 2))
        sums.add(sums.q1, j, np.sum(w * ca * qa))
        sums.add(sums.q2, j, np.sum(w * np.abs(qa) ** 2))
    if not with_x:
        return
    with np.errstate(over="ignore", invalid="ignore"):
        for i in xs:
            xa = apply(X(i), model, a).value
            sums.add(sums.x1, i, np.sum(w * ca * xa))
            sums.add(sums.x2, i, np.sum(w * np.abs(xa) ** 2))
        for i, j in comms:
            sums.add(sums.comm, (i, j), np.sum(w * ca * commutator_apply(X(i), P(j), model, a).value))


def _accumulate(model, state, measure, xs, ps, comms, with_x=True) -> _Sums:
    sums = _Sums()
    if isinstance(state, GridState):
        _grid_terms(model, state, measure, xs, ps, comms, sums, with_x)
        return sums
    src_model = model if with_x else None
    for cab, cba, a, b in pair_samples(state, measure, src_model, order=1):
        _jet_pair(model, a, b, cab, cba, measure, xs, ps, comms, sums, with_x)
    return sums


def uncertainty_reports(model: AnsatzModel, state, measure: Optional[Measure] = None, pairs=((1, 1),)):
    """Reports for several (i, j) pairs sharing one pass over the state."""
    measure = Measure.weighted(model) if measure is None else measure
    pairs = [tuple(int(v) for v in pr) for pr in pairs]
    d = state.dim
    for i, j in pairs:
        if not (1 <= i <= d and 1 <= j <= d):
            raise ValueError(f"axes must be in 1..{d}")
    xs = sorted({i for i, _ in pairs})
    ps = sorted({j for _, j in pairs})
    try:
        sums = _accumulate(model, state, measure, xs, ps, pairs)
        overflow = False
    except OverflowError:
        # the position part does not fit in double precision; keep the momentum part
        sums = _accumulate(model, state, measure, xs, ps, pairs, with_x=False)
        overflow = True
    n = sums.norm.real
    if not n > 0:
        raise ValueError("state has zero norm")
    out = []
    for i, j in pairs:
        mp = sums.p1[j].real / n
        dp = math.sqrt(_variance(sums.p2[j].real / n, mp, f"P{j}"))
        mq = sums.q1[j].real / n
        rms = math.sqrt(max(sums.q2[j].real / n, 0.0))
        dq = math.sqrt(_variance(sums.q2[j].real / n, mq, f"p{j}"))
        if overflow:
            mx, dx, comm = math.nan, math.inf, math.nan
        else:
            mxc = sums.x1[i] / n
            dx = math.sqrt(_variance(sums.x2[i].real / n, mxc, f"X{i}"))
            mx = mxc.real
            comm = (sums.comm[(i, j)] / n / 1j).real
        slack = dx * dp - 0.5 * abs(comm) if math.isfinite(comm) else math.inf
        if not math.isfinite(dx):
            slack = math.inf
        out.append(UncertaintyReport(i, j, dx, dp, comm, slack, mx, mp, dq, rms))
    return out


def uncertainty_report(model: AnsatzModel, state, measure: Optional[Measure] = None, i: int = 1, j: int = 1):
    """Delta X_i, Delta P_j, <[X_i, P_j]>/i and the Robertson slack on ``state``.

    The state need not be normalized; expectations are divided by the
    squared norm.  The default measure is the weighted one.
    """
    return uncertainty_reports(model, state, measure, [(i, j)])[0]


# -- bound functions --------------------------------------------------------


@dataclass(frozen=True)
class BoundFunction:
    """Delta X(s) = (hbar/2)(1/s + c s) over s = Delta p > 0."""

    c: float
    hbar: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.c) and self.c > 0):
            raise ValueError("bound coefficient must be finite and positive")
        if not (math.isfinite(self.hbar) and self.hbar > 0):
            raise ValueError("hbar must be finite and positive")

    @classmethod
    def tanh(cls, model: AnsatzModel) -> "BoundFunction":
        return cls(1.0 / model.p_max**2, model.hbar)

    @classmethod
    def arctan(cls, model: AnsatzModel) -> "BoundFunction":
        return cls(math.pi**2 / (8.0 * model.p_max**2), model.hbar)

    @classmethod
    def for_model(cls, model: AnsatzModel) -> "BoundFunction":
        if model.kind is Kind.TANH:
            return cls.tanh(model)
        if model.kind is Kind.ARCTAN:
            return cls.arctan(model)
        raise ValueError("bound functions are defined for the tanh and arctan models")

    def value(self, s):
        s = np.asarray(s, dtype=float)
        out = 0.5 * self.hbar * (1.0 / s + self.c * s)
        return float(out) if out.ndim == 0 else out

    def difference(self, s: float, u: float) -> float:
        """value(s) - value(u), without cancellation."""
        return 0.5 * self.hbar * (s - u) * (self.c - 1.0 / (s * u))

    @property
    def analytic_argmin(self) -> float:
        return 1.0 / math.sqrt(self.c)

    @property
    def analytic_min(self) -> float:
        return self.hbar * math.sqrt(self.c)


def second_order_coefficient(model: AnsatzModel) -> float:
    """c in (hbar/2)(1 + c <p_perp^2>) for the expanded commutators."""
    if model.kind is Kind.TANH:
        return 0.5 / model.p_max**2
    if model.kind is Kind.ARCTAN:
        return 0.5 * (HALF_PI / model.p_max) ** 2
    raise ValueError("second-order forms are defined for the tanh and arctan models")


# -- scans ------------------------------------------------------------------


@dataclass
class ScanResult:
    parameter: str
    samples: list  # (parameter value, objective value)
    argmin: float
    min: float
    tolerance: float
    status: str
    evaluations: int
    rows: list = field(default_factory=list)

    @property
    def interior(self) -> bool:
        return self.status == INTERIOR

    def to_dict(self):
        return asdict(self)


def golden_section(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    rel_tol: float = BOUND_TOL,
    less: Optional[Callable[[float, float], bool]] = None,
    max_iter: int = 200,
    abs_tol: float = 0.0,
):
    """Minimise a unimodal ``f`` on [lo, hi].

    ``less(a, b)`` decides whether f(a) < f(b); pass a cancellation-free
    comparison to resolve the argmin below the square root of machine
    precision.  Iteration stops once the bracket is narrower than
    ``max(abs_tol, rel_tol * |x|)``.  Returns (argmin, iterations, final
    bracket width).
    """
    cache = {}

    def fv(t):
        if t not in cache:
            cache[t] = f(t)
        return cache[t]

    if less is None:

        def less(a, b):
            return fv(a) < fv(b)

    a, b = float(lo), float(hi)
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    it = 0
    while abs(b - a) > max(abs_tol, rel_tol * max(abs(c), abs(d))) and it < max_iter:
        if less(c, d):
            b, d = d, c
            c = b - GOLDEN * (b - a)
        else:
            a, c = c, d
            d = a + GOLDEN * (b - a)
        it += 1
    return 0.5 * (a + b), it, abs(b - a)


def log_scan(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    parameter: str = "s",
    n: int = SCAN_POINTS,
    rel_tol: float = SCAN_TOL,
    less_log: Optional[Callable[[float, float], bool]] = None,
) -> ScanResult:
    """Log-spaced scan followed by golden-section refinement of the best bracket.

    The refinement runs in log(parameter); an argmin on either end of the
    grid is reported with status "no interior minimum".
    """
    if not (0 < lo < hi):
        raise ValueError("scan range must satisfy 0 < lo < hi")
    grid = np.geomspace(lo, hi, n)
    values = [float(f(float(s))) for s in grid]
    clean = np.array([v if math.isfinite(v) else math.inf for v in values])
    k = int(np.argmin(clean))
    samples = [(float(s), v) for s, v in zip(grid, values)]
    if k == 0 or k == n - 1:
        return ScanResult(parameter, samples, float(grid[k]), float(clean[k]), 0.0, NO_INTERIOR, n)
    evals = {}

    def g(t):
        if t not in evals:
            evals[t] = float(f(math.exp(t)))
            if not math.isfinite(evals[t]):
                evals[t] = math.inf
        return evals[t]

    less = None if less_log is None else (lambda a, b: less_log(math.exp(a), math.exp(b)))
    # in log s an absolute bracket width is a relative width in s
    t, _, width = golden_section(g, math.log(grid[k - 1]), math.log(grid[k + 1]), 0.0, less, abs_tol=rel_tol)
    s = math.exp(t)
    fmin = float(f(s))
    tol = float(math.expm1(width))
    if fmin > clean[k]:
        s, fmin = float(grid[k]), float(clean[k])
    samples.extend((math.exp(tt), v) for tt, v in sorted(evals.items()))
    samples.sort()
    return ScanResult(parameter, samples, s, fmin, tol, INTERIOR, n + len(evals) + 1)


def minimize_bound(bound: BoundFunction, n: int = SCAN_POINTS, rel_tol: float = BOUND_TOL) -> ScanResult:
    """Scan s over [1e-3, 1e3] / sqrt(c) and refine; compare with (1/sqrt c, hbar sqrt c).

    The range is fixed by dimensional analysis alone (c is the only scale).
    """
    scale = 1.0 / math.sqrt(bound.c)
    res = log_scan(bound.value, 1e-3 * scale, 1e3 * scale, "delta_p", n, rel_tol, lambda a, b: bound.difference(a, b) < 0.0)
    res.min = float(bound.value(res.argmin))
    return res


# -- experiments ------------------------------------------------------------


def _sigma_bounds(model: AnsatzModel, sigma_range) -> tuple:
    lo, hi = sigma_range
    if not (0 < lo < hi):
        raise ValueError("sigma range must satisfy 0 < lo < hi")
    return lo * model.p_max, hi * model.p_max


def _centered(model, sigma, p1=0.0):
    return GaussianState.isotropic(sigma, (p1, 0.0, 0.0))


def spherical_experiment(
    model: AnsatzModel,
    sigma_range=(0.05, 20.0),
    measure: Optional[Measure] = None,
    axis: int = 1,
    n: int = SCAN_POINTS,
    rel_tol: float = SCAN_TOL,
) -> ScanResult:
    """Minimise Delta X_axis over centred isotropic Gaussians of width sigma.

    ``sigma_range`` is in units of p_max.  Each row also carries the
    Robertson right-hand side, the second-order right-hand side
    (hbar/2)(1 + c <p_perp^2>), the bound function at the canonical Delta p
    and the rough estimate hbar/(2 p_max).
    """
    measure = Measure.weighted(model) if measure is None else measure
    lo, hi = _sigma_bounds(model, sigma_range)
    cache = {}

    def report(sigma):
        if sigma not in cache:
            cache[sigma] = uncertainty_report(model, _centered(model, sigma), measure, axis, axis)
        return cache[sigma]

    res = log_scan(lambda s: report(s).delta_x, lo, hi, "sigma", n, rel_tol)
    capped = model.kind.capped
    c2 = second_order_coefficient(model) if capped else None
    bound = BoundFunction.for_model(model) if capped else None
    for sigma in sorted(cache):
        rep = report(sigma)
        # <p_perp^2> for a centred isotropic state is twice <p_axis^2>
        perp = 2.0 * rep.canonical_rms_p**2
        res.rows.append(
            {
                "sigma": sigma,
                "delta_x": rep.delta_x,
                "delta_p": rep.delta_p,
                "canonical_delta_p": rep.canonical_delta_p,
                "robertson_bound": 0.5 * abs(rep.commutator_expectation) / rep.delta_p if rep.delta_p > 0 else math.inf,
                "second_order_bound": 0.5 * model.hbar * (1.0 + c2 * perp) / rep.delta_p if capped else None,
                "bound_value": bound.value(rep.canonical_delta_p) if capped else None,
                "rough_estimate": 0.5 * model.hbar / model.p_max,
            }
        )
    return res


def boosted_coefficient(model: AnsatzModel) -> float:
    """c in (hbar / 2 p_max)(1 + c <|p|^2>) for the orthogonal directions."""
    return second_order_coefficient(model)


@dataclass
class BoostedResult:
    p1: float
    x1: ScanResult
    x2: ScanResult
    ratio: float
    estimate_state: float  # (hbar/2p_M)(1 + c <|p|^2>) at the direction-2 argmin
    estimate_p1: float  # (hbar/2p_M)(1 + c p1^2)
    factor_p1: float

    @property
    def interior(self) -> bool:
        return self.x1.interior and self.x2.interior

    def to_dict(self):
        return asdict(self)


def boosted_experiment(
    model: AnsatzModel,
    p1: float,
    sigma_range=(0.05, 20.0),
    measure: Optional[Measure] = None,
    n: int = SCAN_POINTS,
    rel_tol: float = SCAN_TOL,
) -> BoostedResult:
    """Minimise Delta X_1 and Delta X_2 over isotropic Gaussians centred at (p1, 0, 0).

    ``p1`` is in physical momentum units; ``sigma_range`` in units of p_max.
    """
    if not (math.isfinite(p1) and p1 >= 0):
        raise ValueError("p1 must be finite and non-negative")
    measure = Measure.weighted(model) if measure is None else measure
    lo, hi = _sigma_bounds(model, sigma_range)
    cache = {}

    def reports(sigma):
        if sigma not in cache:
            cache[sigma] = uncertainty_reports(model, _centered(model, sigma, p1), measure, [(1, 1), (2, 2)])
        return cache[sigma]

    s1 = log_scan(lambda s: reports(s)[0].delta_x, lo, hi, "sigma", n, rel_tol)
    s2 = log_scan(lambda s: reports(s)[1].delta_x, lo, hi, "sigma", n, rel_tol)
    for scan, k in ((s1, 0), (s2, 1)):
        for sigma in sorted(cache):
            rep = cache[sigma][k]
            scan.rows.append({"sigma": sigma, **rep.to_dict()})
    ratio = s2.min / s1.min if s1.min > 0 else math.inf
    if model.kind.capped:
        c = boosted_coefficient(model)
        sigma2 = s2.argmin
        p_sq = _mean_p_squared(model, _centered(model, sigma2, p1), measure)
        base = 0.5 * model.hbar / model.p_max
        est_state = base * (1.0 + c * p_sq)
        est_p1 = base * (1.0 + c * p1**2)
        factor = 1.0 + c * p1**2
    else:
        est_state = est_p1 = factor = math.nan
    return BoostedResult(float(p1), s1, s2, float(ratio), est_state, est_p1, factor)


def _mean_p_squared(model, state, measure) -> float:
    return canonical_moments(state, measure).p_squared


# -- Robertson suite --------------------------------------------------------

CENTER_RANGE = 2.0
WIDTH_RANGE = (0.1, 2.0)
MAX_COMPONENTS = 4


def random_state(rng: np.random.Generator, model: AnsatzModel) -> Superposition:
    """1-4 isotropic Gaussians; centres in [-2, 2]^3 p_max, widths log-uniform in [0.1, 2] p_max."""
    k = int(rng.integers(1, MAX_COMPONENTS + 1))
    pm = model.p_max
    comps = []
    for _ in range(k):
        c = rng.uniform(-CENTER_RANGE, CENTER_RANGE, 3) * pm
        s = math.exp(rng.uniform(math.log(WIDTH_RANGE[0]), math.log(WIDTH_RANGE[1]))) * pm
        comps.append(GaussianState(c, np.full(3, s)))
    coefs = rng.normal(size=k) + 1j * rng.normal(size=k)
    return Superposition(tuple(comps), tuple(coefs))


@dataclass
class RobertsonSummary:
    model: str
    measure: str
    n_states: int
    seed: int
    robertson_violations: int
    min_slack: float
    cap_violations: int
    max_cap_excess: float
    rms_violations: int
    max_rms_excess: float
    variance_form_violations: int
    max_variance_form_excess: float
    pure_states: int
    max_pure_diagonal_slack: float
    accuracy_failures: list
    states: list

    @property
    def passed(self) -> bool:
        return self.robertson_violations == 0 and self.cap_violations == 0 and self.rms_violations == 0 and not self.accuracy_failures

    def to_dict(self):
        out = asdict(self)
        out["passed"] = self.passed
        return out


def robertson_suite(model: AnsatzModel, n_states: int = 200, seed: int = 0, measure: Optional[Measure] = None):
    """Uncertainty reports for all nine (i, j) pairs on seeded random states."""
    if n_states < 1:
        raise ValueError("n_states must be at least 1")
    measure = Measure.weighted(model) if measure is None else measure
    hbar, pm = model.hbar, model.p_max
    children = np.random.SeedSequence(seed).spawn(n_states)
    pairs = [(i, j) for i in (1, 2, 3) for j in (1, 2, 3)]
    rob = cap = rms = var_form = pure = 0
    min_slack = math.inf
    cap_ex = rms_ex = var_ex = -math.inf
    pure_slack = 0.0
    failures = []
    rows = []
    for n, child in enumerate(children):
        state = random_state(np.random.default_rng(child), model)
        try:
            reps = uncertainty_reports(model, state, measure, pairs)
        except AccuracyError as exc:
            failures.append({"state": n, "error": str(exc)})
            continue
        slacks = [r.robertson_slack for r in reps]
        s_min = min(slacks)
        min_slack = min(min_slack, s_min)
        rob += sum(s < -ROBERTSON_TOL * hbar for s in slacks)
        for r in reps:
            if model.kind.capped:
                ex = r.delta_p - pm
                cap_ex = max(cap_ex, ex)
                cap += ex > CAP_TOL * pm
            ex = r.delta_p - r.canonical_rms_p
            rms_ex = max(rms_ex, ex)
            rms += ex > CAP_TOL * max(r.canonical_rms_p, pm)
            ex = r.delta_p - r.canonical_delta_p
            var_ex = max(var_ex, ex)
            var_form += ex > CAP_TOL * max(r.canonical_rms_p, pm)
        k = len(state.components)
        if k == 1:
            pure += 1
            diag = max(abs(r.robertson_slack) for r in reps if r.i == r.j)
            pure_slack = max(pure_slack, diag)
        rows.append({"state": n, "components": k, "min_slack": float(s_min), "max_delta_p": float(max(r.delta_p for r in reps))})
    return RobertsonSummary(
        model.kind.value,
        measure.name,
        int(n_states),
        int(seed),
        int(rob),
        float(min_slack),
        int(cap),
        float(cap_ex),
        int(rms),
        float(rms_ex),
        int(var_form),
        float(var_ex),
        int(pure),
        float(pure_slack),
        failures,
        rows,
    )


__all__ = [
    "BoostedResult",
    "BoundFunction",
    "RobertsonSummary",
    "ScanResult",
    "UncertaintyReport",
    "boosted_experiment",
    "golden_section",
    "log_scan",
    "minimize_bound",
    "random_state",
    "robertson_suite",
    "second_order_coefficient",
    "spherical_experiment",
    "uncertainty_report",
    "uncertainty_reports",
]
