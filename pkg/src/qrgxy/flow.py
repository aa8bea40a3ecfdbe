"""Observables along the coupling flow, their gamma-derivatives, and scaling fits.

A bare anisotropy ``gamma0`` is pushed through ``n`` applications of the
model's recursion; observables are then evaluated on the block ground state at
the renormalised anisotropy. The effective size after ``n`` steps is
``3**(n+1)`` sites in 1D and ``5**(n+1)`` in 2D.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import optimize, stats

from . import model1d, model2d, observables
from .errors import AnalysisError
from .model1d import Couplings

OBSERVABLES = ("trace-distance", "tau")


@dataclass(frozen=True)
class Model:
    name: str
    rg_gamma: Callable[[float], float]
    size_base: int
    # finite-difference step is base_step * step_shrink**-n
    step_shrink: float
    # gamma values where central differences must not straddle
    singular_points: tuple[float, ...]
    _state: Callable[[float, int], tuple[np.ndarray, bool]] = field(repr=False)
    _observables: dict = field(repr=False)

    def state(self, gamma: float, which: int = 0) -> tuple[np.ndarray, bool]:
        return self._state(gamma, which)

    def observable(self, name: str) -> Callable[[np.ndarray], float]:
        try:
            return self._observables[name]
        except KeyError:
            raise AnalysisError(f"unknown observable {name!r}; expected one of {OBSERVABLES}") from None

    def effective_size(self, n: int) -> float:
        return float(self.size_base ** (n + 1))


def _state_1d(gamma: float, which: int) -> tuple[np.ndarray, bool]:
    pair = model1d.ground_pair_1d(Couplings(1.0, gamma))
    return (pair.phi0, pair.phi1)[which], True


def _state_2d(gamma: float, which: int) -> tuple[np.ndarray, bool]:
    pair = model2d.ground_pair_2d(gamma)
    return (pair.upsilon0, pair.upsilon1)[which], pair.analytic


MODELS = {
    "1d": Model(
        "1d",
        model1d.rg_gamma_1d,
        size_base=3,
        step_shrink=3.0,
        singular_points=(0.0,),
        _state=_state_1d,
        _observables={
            "trace-distance": observables.trace_distance_1d,
            "tau": lambda psi: observables.tau_1d(psi).tau,
        },
    ),
    "2d": Model(
        "2d",
        model2d.rg_gamma_2d,
        size_base=5,
        step_shrink=10.0,
        singular_points=(0.0, model2d.ZERO_BRANCH, -model2d.ZERO_BRANCH),
        _state=_state_2d,
        _observables={
            "trace-distance": observables.trace_distance_2d,
            "tau": lambda psi: observables.tau_2d(psi).tau,
        },
    ),
}


def get_model(model: str | Model) -> Model:
    if isinstance(model, Model):
        return model
    try:
        return MODELS[model]
    except KeyError:
        raise AnalysisError(f"unknown model {model!r}; expected one of {sorted(MODELS)}") from None


@dataclass(frozen=True)
class FlowPoint:
    step: int
    gamma_bare: float
    gamma_renormalized: float
    effective_size: float


@dataclass(frozen=True)
class SweepRecord:
    model: str
    observable: str
    step: int
    gamma: float
    value: float
    derivative: float
    one_sided: bool = False
    analytic: bool = True


@dataclass(frozen=True)
class Derivative:
    value: float
    one_sided: bool


@dataclass(frozen=True)
class ScalingFit:
    theta: float
    c: float
    r_squared: float
    points: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class PseudoCriticalPoint:
    gamma_m: float
    max_abs_derivative: float


def renormalized_gamma(model, gamma0: float, n: int) -> float:
    if n < 0:
        raise AnalysisError(f"step count must be >= 0, got {n}")
    rg = get_model(model).rg_gamma
    g = float(gamma0)
    for _ in range(n):
        g = rg(g)
    return g


def flow_point(model, gamma0: float, n: int) -> FlowPoint:
    m = get_model(model)
    return FlowPoint(n, float(gamma0), renormalized_gamma(m, gamma0, n), m.effective_size(n))


def observable_at_step(model, observable: str, gamma0: float, n: int, which: int = 0) -> float:
    m = get_model(model)
    f = m.observable(observable)
    psi, _ = m.state(renormalized_gamma(m, gamma0, n), which)
    return float(f(psi))


def difference_step(model, n: int) -> float:
    m = get_model(model)
    return max(1e-12, 1e-6 * m.step_shrink ** (-n))


def derivative_wrt_gamma(model, observable: str, gamma0: float, n: int) -> Derivative:
    """d(observable)/d(gamma0) after ``n`` steps, by Richardson-extrapolated differences.

    Central differences are replaced by one-sided ones (pointing away from
    zero) when the stencil would come within ``10 h`` of a singular point of
    the model; the result is then flagged ``one_sided``.
    """
    m = get_model(model)
    h = difference_step(m, n)

    def f(g: float) -> float:
        return observable_at_step(m, observable, g, n)

    g0 = float(gamma0)
    one_sided = any(abs(g0 - s) < 10 * h for s in m.singular_points)
    if one_sided:
        d = 1.0 if g0 >= 0 else -1.0
        f0 = f(g0)

        def rule(step: float) -> float:
            return (-3 * f0 + 4 * f(g0 + d * step) - f(g0 + 2 * d * step)) / (2 * d * step)
    else:
        def rule(step: float) -> float:
            return (f(g0 + step) - f(g0 - step)) / (2 * step)

    coarse = rule(h)
    fine = rule(h / 2)
    return Derivative((4 * fine - coarse) / 3, one_sided)


def chain_rule_derivative_1d(observable: str, gamma0: float, n: int) -> float:
    """1D derivative via the product of recursion slopes times the step-0 derivative."""
    g = float(gamma0)
    factor = 1.0
    for _ in range(n):
        factor *= model1d.rg_step_derivative_1d(g)
        g = model1d.rg_gamma_1d(g)
    return factor * derivative_wrt_gamma("1d", observable, g, 0).value


def sweep(model, observable_names: Sequence[str], steps: Iterable[int], gammas: Iterable[float]) -> list[SweepRecord]:
    """One record per (step, gamma, observable), sorted by step then gamma."""
    m = get_model(model)
    for name in observable_names:
        m.observable(name)
    steps = sorted(set(int(s) for s in steps))
    gammas = sorted(float(g) for g in gammas)
    records = []
    for n in steps:
        for g in gammas:
            _, analytic = m.state(renormalized_gamma(m, g, n))
            for name in observable_names:
                value = observable_at_step(m, name, g, n)
                d = derivative_wrt_gamma(m, name, g, n)
                records.append(SweepRecord(m.name, name, n, g, value, d.value, d.one_sided, analytic))
    return records


def search_grid(lo: float, hi: float, points: int = 801, per_decade: int = 40, smallest: float = 1e-10) -> np.ndarray:
    """Uniform grid on ``[lo, hi]`` merged with log-spaced points around zero.

    Derivative peaks narrow geometrically with the step count; the log-spaced
    part keeps them resolved once they are narrower than the uniform spacing.
    """
    grid = [np.linspace(lo, hi, points)]
    if lo < 0 < hi or lo == 0 or hi == 0:
        for sign, edge in ((1.0, hi), (-1.0, -lo)):
            if edge > smallest:
                decades = math.log10(edge / smallest)
                k = max(2, int(round(decades * per_decade)) + 1)
                grid.append(sign * np.geomspace(smallest, edge, k))
    return np.unique(np.concatenate(grid))


def pseudo_critical_point(
    model,
    observable: str,
    n: int,
    search_range: tuple[float, float] = (-1.5, 1.5),
    tol: float = 1e-9,
) -> PseudoCriticalPoint:
    """Location and height of the largest ``|d observable / d gamma|`` after ``n`` steps."""
    if n < 1:
        raise AnalysisError("pseudo-critical search needs n >= 1")
    lo, hi = search_range
    if not lo < hi:
        raise AnalysisError(f"empty search range {search_range}")
    m = get_model(model)

    def neg_abs(g: float) -> float:
        return -abs(derivative_wrt_gamma(m, observable, g, n).value)

    grid = search_grid(lo, hi)
    vals = np.array([-neg_abs(g) for g in grid])
    best = float(vals.max())
    # finite-difference noise is ~1e-10, so mirror-image points tie at 1e-8
    ties = np.flatnonzero(vals >= best - 1e-8 * max(1.0, abs(best)))
    # smaller |gamma| wins; on an exact +/- tie the positive one
    i = int(min(ties, key=lambda j: (abs(grid[j]), -grid[j])))
    if i == 0 or i == grid.size - 1:
        raise AnalysisError(
            f"derivative peak for {m.name}/{observable} at n={n} lies on the search boundary {grid[i]!r}"
        )
    a, b, c = float(grid[i - 1]), float(grid[i]), float(grid[i + 1])
    try:
        res = optimize.minimize_scalar(
            neg_abs, bracket=(a, b, c), method="golden", options={"xtol": tol}
        )
        x, fx = float(res.x), float(res.fun)
        if not a <= x <= c:
            raise ValueError("golden search left the bracket")
    except ValueError:
        res = optimize.minimize_scalar(neg_abs, bounds=(a, c), method="bounded", options={"xatol": tol})
        x, fx = float(res.x), float(res.fun)
    # keep the grid point if refinement did not improve on it
    if -fx < vals[i]:
        x, fx = b, -float(vals[i])
    return PseudoCriticalPoint(x, -fx)


def scaling_fit(points: Sequence[tuple[float, float]]) -> ScalingFit:
    """Least-squares line through ``(ln N, ln y)``."""
    pts = [(float(n), float(y)) for n, y in points]
    if len(pts) < 3:
        raise AnalysisError("scaling fit needs at least 3 points")
    if any(n <= 0 or y <= 0 for n, y in pts):
        raise AnalysisError("scaling fit needs positive N and y")
    x = np.log([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    if np.ptp(x) == 0:
        raise AnalysisError("scaling fit is degenerate: all N equal")
    res = stats.linregress(x, y)
    r2 = min(1.0, max(0.0, float(res.rvalue) ** 2))
    return ScalingFit(float(res.slope), float(res.intercept), r2, tuple(zip(x.tolist(), y.tolist())))


@dataclass(frozen=True)
class ScalingRow:
    n: int
    size: float
    gamma_m: float
    max_abs_derivative: float


@dataclass(frozen=True)
class ScalingStudy:
    model: str
    observable: str
    rows: tuple[ScalingRow, ...]
    peak_fit: ScalingFit
    drift_fit: ScalingFit | None


def scaling_study(model, observable: str, max_steps: int, search_range=(-1.5, 1.5)) -> ScalingStudy:
    """Pseudo-critical points for ``n = 1..max_steps`` and their log-log fits.

    The drift fit (``|gamma_m|`` against N) is only made for the 2D model.
    """
    if max_steps < 3:
        raise AnalysisError("scaling study needs max_steps >= 3")
    m = get_model(model)
    rows = []
    for n in range(1, max_steps + 1):
        p = pseudo_critical_point(m, observable, n, search_range)
        rows.append(ScalingRow(n, m.effective_size(n), p.gamma_m, p.max_abs_derivative))
    peak = scaling_fit([(r.size, r.max_abs_derivative) for r in rows])
    drift = None
    if m.name == "2d":
        drift = scaling_fit([(r.size, abs(r.gamma_m)) for r in rows])
    return ScalingStudy(m.name, observable, tuple(rows), peak, drift)


def fixed_points(model, lo: float = -1.5, hi: float = 1.5, points: int = 301, xtol: float = 1e-12):
    """Roots of ``rg(gamma) - gamma`` on ``[lo, hi]`` by sign-change bisection.

    Returns ``(root, slope, stable)`` tuples; ``stable`` means ``|slope| < 1``.
    """
    m = get_model(model)

    def f(g: float) -> float:
        return m.rg_gamma(g) - g

    grid = np.linspace(lo, hi, points)
    vals = [f(g) for g in grid]
    roots: list[float] = []
    for k, (g, v) in enumerate(zip(grid, vals)):
        if v == 0.0:
            roots.append(float(g))
        elif k + 1 < len(grid) and v * vals[k + 1] < 0:
            roots.append(float(optimize.bisect(f, g, grid[k + 1], xtol=xtol)))
    merged: list[float] = []
    for r in sorted(roots):
        if not merged or r - merged[-1] > 1e-8:
            merged.append(r)
    out = []
    for r in merged:
        slope = rg_slope(m, r)
        out.append((r, slope, abs(slope) < 1))
    return out


def rg_slope(model, gamma: float) -> float:
    m = get_model(model)
    if m.name == "1d":
        return model1d.rg_step_derivative_1d(gamma)
    return model2d.rg_step_derivative_2d(gamma)
