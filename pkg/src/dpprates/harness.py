"""Rate-of-convergence experiments: trace norms and W1 across N, with fits.

For each regime and each N the harness discretizes the scaled finite-N
kernel and its limiting kernel on one shared grid, records the trace norm
of the difference and the exact W1 distance between the two point-count
laws, then fits a log-log slope.  Grids grow (node doubling) until the
trace norm is stable to 0.5%, so reported numbers are discretization-
converged by construction.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from . import kernels, nystrom, pointcount

REGIMES = ("gue_bulk", "lue_hard", "gue_soft", "lue_soft", "jue_soft")

GRID_RTOL = 0.005  # converged when doubling moves the trace norm < 0.5%
GRID_ATOL = 1e-10  # below this the norm sits at the float64 eigensum floor
LEMMA_SLACK = 1e-8
_MAX_DOUBLINGS = 4

# slope acceptance bands per regime (two-sided: the rates are conjectured
# optimal, so the measured slope should hit the theoretical exponent)
SLOPE_BANDS = {
    "gue_bulk": (-1.2, -0.8),
    "lue_hard": (-2.3, -1.7),
    "gue_soft": (-0.82, -0.52),
    "lue_soft": (-0.87, -0.47),
    "jue_soft": (-0.87, -0.47),
}


def parse_rule(rule: str):
    """Parameter-sequence rule: an integer, 'floor(c*N)', or 'ceil(c*N)'."""
    text = rule.strip().replace(" ", "")
    m = re.fullmatch(r"[+-]?\d+", text)
    if m:
        value = int(text)
        return lambda n: value
    m = re.fullmatch(r"(floor|ceil)\(([0-9.]+)\*?N\)", text)
    if m:
        fn = math.floor if m.group(1) == "floor" else math.ceil
        coef = float(m.group(2))
        return lambda n: int(fn(coef * n))
    m = re.fullmatch(r"([0-9.]+)\*?N", text)
    if m:
        coef = float(m.group(1))
        return lambda n: int(math.floor(coef * n))
    raise ValueError(f"cannot parse parameter rule {rule!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    """One rate experiment: regime, sizes, window, parameter rules."""

    regime: str
    n_values: tuple[int, ...]
    set_interval: tuple[float, float]
    a_rule: str = "0"
    b_rule: str = "0"
    nodes: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise ValueError(f"regime must be one of {REGIMES}")
        ns = tuple(int(n) for n in self.n_values)
        if len(ns) < 4:
            raise ValueError("need at least 4 matrix sizes")
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("n_values must be strictly increasing")
        object.__setattr__(self, "n_values", ns)
        lo, hi = (float(self.set_interval[0]), float(self.set_interval[1]))
        if not lo < hi:
            raise ValueError("set interval must satisfy lo < hi")
        if self.regime == "lue_hard" and lo < 0:
            raise ValueError("hard-edge sets live in [0, s]")
        if self.regime.endswith("_soft") and hi > kernels.SOFT_TAIL_CUTOFF + 1e-9:
            raise ValueError(
                f"soft-edge sets are truncated at T = {kernels.SOFT_TAIL_CUTOFF}"
            )
        object.__setattr__(self, "set_interval", (lo, hi))
        parse_rule(self.a_rule)
        parse_rule(self.b_rule)

    def params_at(self, n: int) -> tuple[int, int]:
        return parse_rule(self.a_rule)(n), parse_rule(self.b_rule)(n)


@dataclass(frozen=True)
class RateSeries:
    """Per-N trace norms and W1 values for one experiment."""

    config: ExperimentConfig
    n_values: tuple[int, ...]
    trace_norms: tuple[float, ...]
    w1_values: tuple[float, ...]
    grid_nodes_used: tuple[int, ...]
    statuses: tuple[str, ...]

    def ok_cells(self):
        return [i for i, s in enumerate(self.statuses) if s == "ok"]


@dataclass(frozen=True)
class RateFit:
    """Least-squares line on (log N, log value)."""

    slope: float
    intercept: float
    r_squared: float
    per_point_residuals: tuple[float, ...] = field(default=())


def _kernel_pair(config: ExperimentConfig, n: int):
    """(finite spec, limit spec) for one cell."""
    lo, hi = config.set_interval
    a_n, b_n = config.params_at(n)
    if config.regime == "gue_bulk":
        s = max(abs(lo), abs(hi))
        fin = kernels.bulk_spec(n, s)
        lim = kernels.limit_spec("sine", interval=(-s, s))
    elif config.regime == "lue_hard":
        fin = kernels.hard_spec(n, a_n, hi)
        lim = kernels.limit_spec("bessel", a=float(a_n), interval=(0.0, hi))
    else:
        if config.regime == "gue_soft":
            params = kernels.EnsembleParams(kind=kernels.GUE, n=n)
        elif config.regime == "lue_soft":
            params = kernels.EnsembleParams(kind=kernels.LUE, n=n, a=float(a_n))
        else:
            params = kernels.EnsembleParams(
                kind=kernels.JUE, n=n, a=float(a_n), b=float(b_n)
            )
        fin = kernels.soft_spec(params, (lo, hi))
        lim = kernels.limit_spec("airy", interval=(lo, hi))
    return fin, lim


def _cell(config: ExperimentConfig, n: int):
    """One (regime, N) cell: converged trace norm, W1, and node count."""
    lo, hi = config.set_interval
    if config.nodes is not None:
        node_plan = [int(config.nodes)]
    else:
        base = nystrom.default_node_count(lo, hi)
        node_plan = [base * 2 ** k for k in range(_MAX_DOUBLINGS + 1)]
    fin, lim = _kernel_pair(config, n)
    prev_tn = None
    for idx, nn in enumerate(node_plan):
        grid = nystrom.gauss_legendre(nn, lo, hi)
        op_fin = nystrom.discretize(fin, grid)
        op_lim = nystrom.discretize(lim, grid)
        tn = nystrom.trace_norm_diff(op_fin, op_lim)
        if prev_tn is not None and abs(tn - prev_tn) <= GRID_RTOL * tn + GRID_ATOL:
            break
        if config.nodes is not None:
            break
        prev_tn = tn
    eig_fin = pointcount.restricted_spectrum(op_fin)
    eig_lim = pointcount.restricted_spectrum(op_lim)
    w1 = pointcount.w1_counts(pointcount.count_pmf(eig_fin), pointcount.count_pmf(eig_lim))
    if w1 > tn + LEMMA_SLACK:
        raise pointcount.ValidityError(
            f"W1={w1:.3e} exceeds trace norm {tn:.3e} beyond slack"
        )
    return tn, w1, nn


def run_roc(config: ExperimentConfig) -> RateSeries:
    """Run all cells; per-cell failures are recorded, not raised."""
    tns, w1s, nodes, statuses = [], [], [], []
    for n in config.n_values:
        try:
            tn, w1, nn = _cell(config, n)
            tns.append(tn)
            w1s.append(w1)
            nodes.append(nn)
            statuses.append("ok")
        except (pointcount.ValidityError, ValueError, FloatingPointError) as exc:
            tns.append(float("nan"))
            w1s.append(float("nan"))
            nodes.append(0)
            statuses.append(f"failed: {exc}")
    return RateSeries(
        config=config,
        n_values=config.n_values,
        trace_norms=tuple(tns),
        w1_values=tuple(w1s),
        grid_nodes_used=tuple(nodes),
        statuses=tuple(statuses),
    )


def fit_loglog(series: RateSeries, use: str = "trace") -> RateFit:
    """Slope of log(value) against log(N) over the completed cells."""
    if use not in ("trace", "w1"):
        raise ValueError("use must be 'trace' or 'w1'")
    idx = series.ok_cells()
    values = [
        (series.trace_norms if use == "trace" else series.w1_values)[i] for i in idx
    ]
    ns = [series.n_values[i] for i in idx]
    if len(values) < 2:
        raise ValueError("need at least 2 completed cells to fit")
    if any(not (v > 0) for v in values):
        raise ValueError("log-log fit needs positive values")
    lx = np.log(np.asarray(ns, dtype=float))
    ly = np.log(np.asarray(values, dtype=float))
    slope, intercept = np.polyfit(lx, ly, 1)
    pred = slope * lx + intercept
    ss_res = float(np.sum((ly - pred) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else max(0.0, min(1.0, 1.0 - ss_res / ss_tot))
    return RateFit(
        slope=float(slope),
        intercept=float(intercept),
        r_squared=r2,
        per_point_residuals=tuple(float(r) for r in (ly - pred)),
    )


def self_test_series(config: ExperimentConfig) -> RateSeries:
    """Limit kernel against itself: every norm must vanish to roundoff."""
    lo, hi = config.set_interval
    tns, w1s, nodes, statuses = [], [], [], []
    for n in config.n_values:
        _, lim = _kernel_pair(config, n)
        nn = config.nodes or nystrom.default_node_count(lo, hi)
        grid = nystrom.gauss_legendre(nn, lo, hi)
        op = nystrom.discretize(lim, grid)
        tns.append(nystrom.trace_norm_diff(op, op))
        eig = pointcount.restricted_spectrum(op)
        pmf = pointcount.count_pmf(eig)
        w1s.append(pointcount.w1_counts(pmf, pmf))
        nodes.append(nn)
        statuses.append("ok")
    return RateSeries(
        config=config,
        n_values=config.n_values,
        trace_norms=tuple(tns),
        w1_values=tuple(w1s),
        grid_nodes_used=tuple(nodes),
        statuses=tuple(statuses),
    )


def edge_cdf_compare(regime: str, s_grid, n: int, a: int = 0, b: int = 0,
                     n_nodes: int | None = None):
    """(s, finite CDF, limit CDF, |diff|) rows for the extreme-eigenvalue laws."""
    if regime not in ("hard_least", "gue_soft", "lue_soft", "jue_soft"):
        raise ValueError("regime must be hard_least or one of the soft regimes")
    rows = []
    for s in s_grid:
        s = float(s)
        if regime == "hard_least":
            fin = kernels.hard_spec(n, a, max(s, 1e-6))
            lim = kernels.limit_spec("bessel", a=float(a), interval=(0.0, max(s, 1e-6)))
            kind = "hard_least"
        else:
            if regime == "gue_soft":
                params = kernels.EnsembleParams(kind=kernels.GUE, n=n)
            elif regime == "lue_soft":
                params = kernels.EnsembleParams(kind=kernels.LUE, n=n, a=float(a))
            else:
                params = kernels.EnsembleParams(kind=kernels.JUE, n=n, a=float(a), b=float(b))
            hi = kernels.SOFT_TAIL_CUTOFF
            fin = kernels.soft_spec(params, (min(s, hi - 1.0), hi))
            lim = kernels.limit_spec("airy", interval=(min(s, hi - 1.0), hi))
            kind = "soft_largest"
        fc = pointcount.gap_cdf(kind, fin, s, n_nodes=n_nodes)
        lc = pointcount.gap_cdf(kind, lim, s, n_nodes=n_nodes)
        rows.append((s, fc, lc, abs(fc - lc)))
    return rows


def preset_config(regime: str, preset: str | None = None) -> ExperimentConfig:
    """The acceptance-grade experiment configurations."""
    if regime == "gue_bulk":
        return ExperimentConfig(
            regime="gue_bulk", n_values=(64, 128, 256, 512), set_interval=(-1.0, 1.0)
        )
    if regime == "lue_hard":
        a_rule = preset if preset is not None else "0"
        return ExperimentConfig(
            regime="lue_hard",
            n_values=(32, 64, 128, 256),
            set_interval=(0.0, 1.0),
            a_rule=a_rule,
        )
    if regime == "gue_soft":
        return ExperimentConfig(
            regime="gue_soft", n_values=(64, 128, 256, 512), set_interval=(0.0, 12.0)
        )
    if regime == "lue_soft":
        a_rule = "0" if preset in (None, "gamma1") else "floor(1*N)"
        return ExperimentConfig(
            regime="lue_soft",
            n_values=(64, 128, 256, 512),
            set_interval=(0.0, 12.0),
            a_rule=a_rule,
        )
    if regime == "jue_soft":
        return ExperimentConfig(
            regime="jue_soft",
            n_values=(64, 128, 256, 512),
            set_interval=(0.0, 12.0),
            a_rule="floor(1*N)",
            b_rule="ceil(0.5*N)",
        )
    raise ValueError(f"unknown regime {regime!r}")
