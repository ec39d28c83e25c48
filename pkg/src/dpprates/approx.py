"""Checkable forms of the quantitative approximation facts.

Four computations: the Hermite-to-cosine residual in the bulk scaling, a
sharp two-sided Stirling check, the d_N e_N lambda_N normalization constant
with its parity-specific brackets, and the weighted Laguerre expansion
residual at the hard edge through the 1/n^2 terms.  Scan helpers collect
residuals over parameter ranges and fit nonnegative-coefficient envelope
polynomials to the scaled residuals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog, nnls

from . import specfun


@dataclass(frozen=True)
class ResidualScan:
    """Residuals over a parameter sweep, with residual * N^order alongside."""

    parameter_values: np.ndarray
    residuals: np.ndarray
    scaled_residuals: np.ndarray
    order: float

    def __post_init__(self):
        p = np.asarray(self.parameter_values, dtype=float)
        r = np.asarray(self.residuals, dtype=float)
        s = np.asarray(self.scaled_residuals, dtype=float)
        if not (p.shape == r.shape == s.shape):
            raise ValueError("scan arrays must have equal length")
        if np.any(r < 0):
            raise ValueError("residuals are absolute values")
        object.__setattr__(self, "parameter_values", p)
        object.__setattr__(self, "residuals", r)
        object.__setattr__(self, "scaled_residuals", s)


def hermite_cosine_residual(n: int, x, use_prev: bool = False):
    """|pi^(1/2) (n/2)^(1/4) psi_m(x / sqrt(2n)) - cos(x - m pi/2)|.

    m = n, or m = n-1 with use_prev (the second display of the bound).
    """
    if n < 2:
        raise ValueError("the bound assumes n >= 2")
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    arg = x / math.sqrt(2.0 * n)
    prev, cur = specfun.psi_pair(n, arg)
    psi = prev if use_prev else cur
    m = n - 1 if use_prev else n
    res = np.abs(math.sqrt(math.pi) * (n / 2.0) ** 0.25 * psi - np.cos(x - 0.5 * m * math.pi))
    return float(res[0]) if scalar else res


def stirling_check(n: int) -> tuple[bool, bool]:
    """Two-sided sharp Stirling bounds on n!, verified in log space."""
    if n < 1:
        raise ValueError("n must be positive")
    log_fact = math.lgamma(n + 1.0)
    base = 0.5 * math.log(2.0 * math.pi) + (n + 0.5) * math.log(n) - n
    lower = base + 1.0 / (12.0 * n + 1.0)
    upper = base + 1.0 / (12.0 * n)
    return (lower <= log_fact, log_fact <= upper)


def normalization_constant(n: int) -> float:
    """d_n e_n lambda_n, the cosine-matching constant, computed via log-gamma.

    d_n = pi^(1/2) (n/2)^(1/4); e_n = pi^(-1/4) 2^(-n/2) (n!)^(-1/2);
    lambda_n is the leading cosine coefficient of the Hermite expansion,
    parity-dependent.  Satisfies 1 - 1/n <= value <= 1 for even n and
    1 - 2/n <= value <= 1 + 1/n for odd n.
    """
    if n < 2:
        raise ValueError("the brackets assume n >= 2")
    log_d = 0.5 * math.log(math.pi) + 0.25 * math.log(n / 2.0)
    log_e = -0.25 * math.log(math.pi) - 0.5 * n * math.log(2.0) - 0.5 * math.lgamma(n + 1.0)
    if n % 2 == 0:
        log_lam = math.lgamma(n + 1.0) - math.lgamma(n / 2.0 + 1.0)
    else:
        log_lam = (
            math.lgamma(n + 2.0)
            - math.lgamma((n + 1.0) / 2.0 + 1.0)
            - 0.5 * math.log(2.0 * n + 1.0)
        )
    return math.exp(log_d + log_e + log_lam)


def normalization_bracket(n: int) -> tuple[float, float]:
    if n % 2 == 0:
        return 1.0 - 1.0 / n, 1.0
    return 1.0 - 2.0 / n, 1.0 + 1.0 / n


def laguerre_expansion_residual(n: int, a: float, x: float) -> float:
    """Residual of the weighted Laguerre expansion through the 1/n^2 terms.

    LHS = e^{-x/8n} x^{a/2} L_n^a(x/4n) / (2n)^a; RHS keeps J_a(sqrt x),
    the 1/n term, and all three displayed 1/n^2 terms; the gap is O(n^-3)
    uniformly on compact x-windows.  Requires a > 0 (the expansion's
    hypothesis; J_{a-1} must have nonnegative order here).
    """
    if n < 1:
        raise ValueError("n must be positive")
    if a <= 0:
        raise ValueError("the expansion assumes a > 0")
    if not 0.0 < x <= 50.0:
        raise ValueError("x must lie in the compact window (0, 50]")
    lhs = (
        math.exp(-x / (8.0 * n))
        * x ** (0.5 * a)
        * float(specfun.laguerre(n, a, x / (4.0 * n)))
        / (2.0 * n) ** a
    )
    sx = math.sqrt(x)
    ja = float(specfun.bessel_j(a, sx))
    jm = float(specfun.bessel_j(a - 1.0, sx))
    n2 = float(n) * n
    rhs = (
        ja
        + (a + 1.0) / (4.0 * n) * sx * jm
        - (3.0 * a * a + 5.0 * a + 2.0) / (96.0 * n2) * x * ja
        - x ** 1.5 / (96.0 * n2) * jm
        + (3.0 * a ** 3 + 2.0 * a * a - 3.0 * a - 2.0) / (48.0 * n2) * sx * jm
    )
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# scans and envelope fits
# ---------------------------------------------------------------------------

def _psi_batch_at_scaled(ns: np.ndarray, x_grid: np.ndarray, use_prev: bool) -> np.ndarray:
    """psi_m(x_j / sqrt(2 n_i)) for all (i, j) in one recurrence sweep.

    The recurrence coefficients depend only on the step index, so every
    row iterates under one schedule; row i is harvested at step n_i.
    """
    ns = np.asarray(ns, dtype=int)
    args = x_grid[None, :] / np.sqrt(2.0 * ns[:, None])
    out = np.empty_like(args)
    targets = ns - 1 if use_prev else ns
    pm = np.zeros_like(args)
    pc = math.pi ** -0.25 * np.exp(-0.5 * args * args)
    if np.any(targets == 0):
        out[targets == 0] = pc[targets == 0]
    for k in range(int(targets.max())):
        pm, pc = pc, args * math.sqrt(2.0 / (k + 1)) * pc - math.sqrt(k / (k + 1.0)) * pm
        hit = targets == k + 1
        if hit.any():
            out[hit] = pc[hit]
    return out


def scan_hermite_cosine(
    n_values, x_grid=None, use_prev: bool = False
) -> ResidualScan:
    """Max-over-x Hermite-cosine residual per n, scaled by n (order-1 bound)."""
    ns = np.asarray(sorted(set(int(n) for n in n_values)), dtype=int)
    if np.any(ns < 2):
        raise ValueError("the bound assumes n >= 2")
    if x_grid is None:
        x_grid = np.linspace(0.0, 10.0, 101)
    x_grid = np.asarray(x_grid, dtype=float)
    psi = _psi_batch_at_scaled(ns, x_grid, use_prev)
    m = (ns - 1 if use_prev else ns).astype(float)
    pref = math.sqrt(math.pi) * (ns / 2.0) ** 0.25
    res = np.abs(pref[:, None] * psi - np.cos(x_grid[None, :] - 0.5 * m[:, None] * math.pi))
    worst = res.max(axis=1)
    return ResidualScan(
        parameter_values=ns.astype(float),
        residuals=worst,
        scaled_residuals=ns * worst,
        order=1.0,
    )


def hermite_cosine_envelope(n_values, x_grid=None, use_prev: bool = False):
    """Pointwise-in-x envelope of n * residual, per x in the scan window."""
    ns = np.asarray(sorted(set(int(n) for n in n_values)), dtype=int)
    if x_grid is None:
        x_grid = np.linspace(0.0, 10.0, 101)
    x_grid = np.asarray(x_grid, dtype=float)
    psi = _psi_batch_at_scaled(ns, x_grid, use_prev)
    m = (ns - 1 if use_prev else ns).astype(float)
    pref = math.sqrt(math.pi) * (ns / 2.0) ** 0.25
    res = np.abs(pref[:, None] * psi - np.cos(x_grid[None, :] - 0.5 * m[:, None] * math.pi))
    return x_grid, (ns[:, None] * res).max(axis=0)


def fit_envelope_cubic(x, values) -> np.ndarray:
    """Nonnegative-coefficient cubic dominating the data points.

    Minimizes the integrated over-approximation subject to p(x_j) >=
    values_j and c >= 0 (a small LP); falls back to a scaled nonnegative
    least-squares fit if the LP solver declines.
    """
    x = np.asarray(x, dtype=float)
    v = np.asarray(values, dtype=float)
    vand = np.vander(x, 4, increasing=True)
    res = linprog(
        c=vand.sum(axis=0),
        A_ub=-vand,
        b_ub=-v,
        bounds=[(0, None)] * 4,
        method="highs",
    )
    if res.success:
        return np.asarray(res.x, dtype=float)
    coef, _ = nnls(vand, v)
    fit = vand @ coef
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.max(np.where(fit > 0, v / np.where(fit > 0, fit, 1.0), np.inf))
    if not math.isfinite(ratio):
        raise RuntimeError("degenerate envelope fit")
    return coef * max(1.0, ratio)


def scan_normalization(n_values) -> ResidualScan:
    """|d_n e_n lambda_n - 1| with its n-scaled version (bracket width order)."""
    ns = np.asarray(sorted(set(int(n) for n in n_values)), dtype=int)
    vals = np.array([abs(normalization_constant(int(n)) - 1.0) for n in ns])
    return ResidualScan(
        parameter_values=ns.astype(float),
        residuals=vals,
        scaled_residuals=ns * vals,
        order=1.0,
    )


def scan_laguerre_expansion(n_values, a: float, x: float) -> ResidualScan:
    """Expansion residual per n, scaled by n^3 (the remainder order)."""
    ns = np.asarray(sorted(set(int(n) for n in n_values)), dtype=int)
    vals = np.array([laguerre_expansion_residual(int(n), a, x) for n in ns])
    return ResidualScan(
        parameter_values=ns.astype(float),
        residuals=vals,
        scaled_residuals=ns.astype(float) ** 3 * vals,
        order=3.0,
    )
