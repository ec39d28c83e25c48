"""Scalar kernels of the unitary-ensemble point processes and their limits.

Every kernel is exposed through one evaluation contract: a KernelSpec whose
``eval(x, y)`` returns a real number and whose ``matrix(xs)`` evaluates the
kernel on a grid.  Finite-N Christoffel-Darboux kernels are built from the
weighted orthonormal recurrences in :mod:`dpprates.specfun`; the diagonal
uses the derivative (Wronskian) form, and near-diagonal arguments are
blended through the midpoint diagonal to avoid the 0/0 quotient.

Scaling conventions:

* bulk (GUE):   K(x, y) = c_N K_G(c_N x, c_N y),  c_N = pi / sqrt(2N)
* hard (LUE):   K(x, y) = (tau/4N) K_L(tau x/4N, tau y/4N), tau = 1 - a/2N
* soft (GUE/LUE): K(x, y) = sigma K(mu + sigma x, mu + sigma y)
* soft (JUE):   K(x, y) = sqrt(t'(x) t'(y)) K_J(t(x), t(y)), t = tanh(mu + sigma x)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import specfun
from .specfun import DomainError

GUE = "GUE"
LUE = "LUE"
JUE = "JUE"
_ENSEMBLES = frozenset({GUE, LUE, JUE})

FINITE_FAMILIES = frozenset(
    {"cd_bulk_gue", "cd_hard_lue", "cd_soft_gue", "cd_soft_lue", "cd_soft_jue"}
)
LIMIT_FAMILIES = frozenset({"sine", "airy", "bessel"})

# Soft-edge kernels on [s, inf) are truncated at T; the Airy diagonal at
# T = 12 is below 1e-14, so restricted-trace quantities cannot see the tail.
SOFT_TAIL_CUTOFF = 12.0

_NEAR_DIAG = 1e-6


@dataclass(frozen=True)
class EnsembleParams:
    """Which ensemble, its matrix size, and its weight parameters."""

    kind: str
    n: int
    a: float = 0.0
    b: float = 0.0

    def __post_init__(self):
        if self.kind not in _ENSEMBLES:
            raise ValueError(f"kind must be one of {sorted(_ENSEMBLES)}")
        if self.n < 1:
            raise ValueError("matrix size n must be positive")
        if self.kind == LUE and self.a <= -self.n:
            raise ValueError("LUE requires a > -N")
        if self.kind == JUE and (self.a < 0 or self.b < 0):
            raise ValueError("JUE requires a >= 0 and b >= 0")


@dataclass(frozen=True)
class SoftEdgeScaling:
    """Soft-edge change of variables t(x) and its derivative factor."""

    mu: float
    sigma: float
    map_kind: str = "affine"  # or "tanh"
    u: float = 0.0
    v: float = 0.0

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.map_kind not in ("affine", "tanh"):
            raise ValueError("map_kind must be 'affine' or 'tanh'")

    def map(self, x):
        if self.map_kind == "affine":
            return self.mu + self.sigma * np.asarray(x, dtype=float)
        return np.tanh(self.mu + self.sigma * np.asarray(x, dtype=float))

    def dmap(self, x):
        if self.map_kind == "affine":
            return np.full_like(np.asarray(x, dtype=float), self.sigma)
        t = np.tanh(self.mu + self.sigma * np.asarray(x, dtype=float))
        return self.sigma * (1.0 - t * t)


def gue_soft_scaling(n: int) -> SoftEdgeScaling:
    mu = 0.5 * (math.sqrt(2 * n + 1) + math.sqrt(2 * n - 1))
    sigma = 2.0 ** -0.5 * n ** (-1.0 / 6.0)
    return SoftEdgeScaling(mu=mu, sigma=sigma)


def _lue_mu_tilde(n: float, m: float) -> float:
    return (math.sqrt(n + 0.5) + math.sqrt(m + 0.5)) ** 2


def _lue_sigma_tilde(n: float, m: float) -> float:
    return (math.sqrt(n + 0.5) + math.sqrt(m + 0.5)) * (
        (n + 0.5) ** -0.5 + (m + 0.5) ** -0.5
    ) ** (1.0 / 3.0)


def lue_soft_scaling(n: int, a: float) -> SoftEdgeScaling:
    m1 = _lue_mu_tilde(n - 1, n + a)
    s1 = _lue_sigma_tilde(n - 1, n + a)
    m2 = _lue_mu_tilde(n, n + a - 1)
    s2 = _lue_sigma_tilde(n, n + a - 1)
    gam = (m1 * math.sqrt(s2)) / (m2 * math.sqrt(s1))
    mu = (1.0 / math.sqrt(s1) + 1.0 / math.sqrt(s2)) / (
        1.0 / (m1 * math.sqrt(s1)) + 1.0 / (m2 * math.sqrt(s2))
    )
    sigma = (1.0 + gam) / (1.0 / s1 + gam / s2)
    return SoftEdgeScaling(mu=mu, sigma=sigma)


def jue_edge_params(a: float, b: float, n: int) -> tuple[float, float]:
    """(u_n, v_n) of the JUE soft-edge map at polynomial degree n.

    tanh(u_n) is the spectrum edge; v_n is the Airy scale in atanh
    coordinates, v = y / (1 - x^2)^(2/3).
    """
    p = a + b + 2.0 * n + 1.0
    cos_phi = (a - b) / p
    cos_theta = (a + b) / p
    if not (-1.0 <= cos_phi <= 1.0 and -1.0 <= cos_theta <= 1.0):
        raise ValueError("JUE trig parameters left [-1, 1]")
    phi = math.acos(cos_phi)
    theta = math.acos(cos_theta)
    x = -math.cos(phi + theta)
    sin_pt = math.sin(phi + theta)
    if sin_pt <= 0 or math.sin(phi) <= 0 or math.sin(theta) <= 0:
        raise ValueError("degenerate JUE angles")
    y3 = 2.0 * sin_pt ** 2 / (p * p * math.sin(phi) * math.sin(theta))
    y = y3 ** (1.0 / 3.0)
    u = math.atanh(x)
    v = y / (1.0 - x * x) ** (2.0 / 3.0)
    return u, v


def jue_soft_scaling(n: int, a: float, b: float) -> SoftEdgeScaling:
    u1, v1 = jue_edge_params(a, b, n)
    u0, v0 = jue_edge_params(a, b, n - 1)
    mu = (u1 / v1 + u0 / v0) / (1.0 / v1 + 1.0 / v0)
    sigma = 2.0 / (1.0 / v1 + 1.0 / v0)
    return SoftEdgeScaling(mu=mu, sigma=sigma, map_kind="tanh", u=u1, v=v1)


def soft_scaling(params: EnsembleParams) -> SoftEdgeScaling:
    """Soft-edge centering/scale for the given ensemble."""
    if params.kind == GUE:
        return gue_soft_scaling(params.n)
    if params.kind == LUE:
        return lue_soft_scaling(params.n, params.a)
    return jue_soft_scaling(params.n, params.a, params.b)


# ---------------------------------------------------------------------------
# unscaled Christoffel-Darboux kernels
# ---------------------------------------------------------------------------

def _cd_values(params: EnsembleParams, u: np.ndarray):
    """(A_{N-1}, A_N, A'_{N-1}, A'_N, prefactor) at the points u."""
    n = params.n
    if params.kind == GUE:
        pair = specfun.psi_pair(n, u, deriv=True)
        pref = specfun.cd_prefactor("gue", n)
    elif params.kind == LUE:
        pair = specfun.laguerre_pair(n, params.a, u, deriv=True)
        pref = specfun.cd_prefactor("lue", n, params.a)
    else:
        pair = specfun.jacobi_pair(n, params.a, params.b, u, deriv=True)
        pref = specfun.cd_prefactor("jue", n, params.a, params.b)
    return (*pair, pref)


def cd_matrix(params: EnsembleParams, u) -> np.ndarray:
    """Unscaled CD kernel matrix K_N(u_i, u_j), diagonal by the Wronskian."""
    u = np.asarray(u, dtype=float)
    am, ac, dm, dc, pref = _cd_values(params, u)
    diff = u[:, None] - u[None, :]
    num = ac[:, None] * am[None, :] - ac[None, :] * am[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        k = num / diff
    diag = dc * am - ac * dm
    np.fill_diagonal(k, diag)
    # off-diagonal entries of nearly coincident points fall back to the
    # midpoint diagonal (first-order blend around the 0/0 quotient)
    close = (np.abs(diff) < _NEAR_DIAG * np.maximum(1.0, np.abs(u)[None, :])) & (diff != 0.0)
    if close.any():
        i, j = np.nonzero(close)
        mid = 0.5 * (u[i] + u[j])
        amm, acm, dmm, dcm, _ = _cd_values(params, mid)
        k[i, j] = dcm * amm - acm * dmm
    return pref * k


def cd_diag(params: EnsembleParams, u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    am, ac, dm, dc, pref = _cd_values(params, u)
    return pref * (dc * am - ac * dm)


# ---------------------------------------------------------------------------
# limiting kernels
# ---------------------------------------------------------------------------

def _sine_matrix(xs: np.ndarray) -> np.ndarray:
    return np.sinc(xs[:, None] - xs[None, :])


def _airy_matrix(xs: np.ndarray) -> np.ndarray:
    ai, aip = specfun.airy(xs)
    diff = xs[:, None] - xs[None, :]
    num = ai[:, None] * aip[None, :] - ai[None, :] * aip[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        k = num / diff
    np.fill_diagonal(k, aip * aip - xs * ai * ai)
    close = (np.abs(diff) < _NEAR_DIAG) & (diff != 0.0)
    if close.any():
        i, j = np.nonzero(close)
        mid = 0.5 * (xs[i] + xs[j])
        aim, aipm = specfun.airy(mid)
        k[i, j] = aipm * aipm - mid * aim * aim
    return k


def _bessel_matrix(a: float, xs: np.ndarray) -> np.ndarray:
    sx = np.sqrt(xs)
    j = specfun.bessel_j(a, sx)
    jp = specfun.bessel_j_prime(a, sx)
    sjp = sx * jp
    diff = xs[:, None] - xs[None, :]
    num = j[:, None] * sjp[None, :] - j[None, :] * sjp[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        k = num / (2.0 * diff)
    with np.errstate(divide="ignore", invalid="ignore"):
        diag = 0.25 * ((1.0 - a * a / np.where(xs > 0, xs, 1.0)) * j * j + jp * jp)
    diag = np.where(xs > 0, diag, 0.25 if a == 0.0 else 0.0)
    np.fill_diagonal(k, diag)
    return k


def limit_kernel(family: str, a: float, x: float, y: float) -> float:
    """Sine, Airy, or Bessel kernel value; analytic diagonal on x == y."""
    if family not in LIMIT_FAMILIES:
        raise ValueError(f"family must be one of {sorted(LIMIT_FAMILIES)}")
    if family == "bessel":
        if min(x, y) < 0:
            raise DomainError("Bessel kernel needs x, y >= 0")
        interval = (0.0, max(x, y, 1.0))
    else:
        interval = (min(x, y, 0.0) - 1.0, max(x, y, 0.0) + 1.0)
    spec = limit_spec(family, a=a, interval=interval)
    return spec.eval(x, y)


# ---------------------------------------------------------------------------
# KernelSpec: the single evaluation contract
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KernelSpec:
    """A concrete scalar kernel on an interval.

    ``family`` is one of the finite CD families or a limiting family;
    ``params`` carries ensemble data for the finite kernels or the Bessel
    parameter for the limit; ``interval`` is the working window.
    """

    family: str
    interval: tuple[float, float]
    params: EnsembleParams | None = None
    a: float = 0.0
    scaling: SoftEdgeScaling | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.family not in FINITE_FAMILIES | LIMIT_FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}")
        lo, hi = self.interval
        if not lo < hi:
            raise ValueError("interval must satisfy lo < hi")
        if self.family in FINITE_FAMILIES and self.params is None:
            raise ValueError("finite kernels need EnsembleParams")

    # -- evaluation ---------------------------------------------------------

    def _check_window(self, xs: np.ndarray):
        lo, hi = self.interval
        eps = 1e-9 * max(1.0, abs(lo), abs(hi))
        if np.any(xs < lo - eps) or np.any(xs > hi + eps):
            raise DomainError("point outside the kernel's interval")
        if self.family == "bessel" and np.any(xs < 0):
            raise DomainError("Bessel kernel needs x, y >= 0")

    def matrix(self, xs) -> np.ndarray:
        """K(x_i, x_j) for the grid xs (1-d, inside the interval)."""
        xs = np.asarray(xs, dtype=float)
        self._check_window(xs)
        if self.family == "sine":
            return _sine_matrix(xs)
        if self.family == "airy":
            return _airy_matrix(xs)
        if self.family == "bessel":
            return _bessel_matrix(self.a, xs)
        p = self.params
        if self.family == "cd_bulk_gue":
            c = math.pi / math.sqrt(2.0 * p.n)
            return c * cd_matrix(p, c * xs)
        if self.family == "cd_hard_lue":
            tau = 1.0 - p.a / (2.0 * p.n)
            sc = tau / (4.0 * p.n)
            return sc * cd_matrix(p, sc * xs)
        sc = self.scaling
        t = sc.map(xs)
        if self.family == "cd_soft_jue":
            if np.any(np.abs(t) >= 1.0):
                raise DomainError("JUE soft map left (-1, 1)")
            dt = sc.dmap(xs)
            jac = np.sqrt(np.outer(dt, dt))
            return jac * cd_matrix(p, t)
        return sc.sigma * cd_matrix(p, t)

    def diag(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        self._check_window(xs)
        if self.family == "sine":
            return np.ones_like(xs)
        if self.family == "airy":
            ai, aip = specfun.airy(xs)
            return aip * aip - xs * ai * ai
        if self.family == "bessel":
            return np.diagonal(_bessel_matrix(self.a, xs)).copy()
        p = self.params
        if self.family == "cd_bulk_gue":
            c = math.pi / math.sqrt(2.0 * p.n)
            return c * cd_diag(p, c * xs)
        if self.family == "cd_hard_lue":
            tau = 1.0 - p.a / (2.0 * p.n)
            sc = tau / (4.0 * p.n)
            return sc * cd_diag(p, sc * xs)
        sc = self.scaling
        t = sc.map(xs)
        if self.family == "cd_soft_jue":
            return sc.dmap(xs) * cd_diag(p, t)
        return sc.sigma * cd_diag(p, t)

    def eval(self, x: float, y: float) -> float:
        """Scalar kernel value K(x, y)."""
        x = float(x)
        y = float(y)
        if abs(x - y) < _NEAR_DIAG * max(1.0, abs(x)):
            return float(self.diag(np.array([0.5 * (x + y)]))[0])
        return float(self.matrix(np.array([x, y]))[0, 1])

    __call__ = eval


def limit_spec(family: str, a: float = 0.0, interval: tuple[float, float] | None = None) -> KernelSpec:
    """KernelSpec for a limiting kernel (sine / airy / bessel)."""
    if family not in LIMIT_FAMILIES:
        raise ValueError(f"family must be one of {sorted(LIMIT_FAMILIES)}")
    if interval is None:
        interval = {
            "sine": (-1.0, 1.0),
            "airy": (-8.0, SOFT_TAIL_CUTOFF),
            "bessel": (0.0, 1.0),
        }[family]
    if family == "bessel":
        if a < 0:
            raise ValueError("Bessel kernel parameter must be nonnegative")
        if interval[0] < 0:
            raise ValueError("Bessel kernel lives on [0, inf)")
    return KernelSpec(family=family, interval=interval, a=a)


def bulk_spec(n: int, s: float = 1.0) -> KernelSpec:
    """Bulk-scaled GUE kernel on [-s, s]."""
    if s <= 0:
        raise ValueError("s must be positive")
    return KernelSpec(
        family="cd_bulk_gue",
        interval=(-s, s),
        params=EnsembleParams(kind=GUE, n=n),
    )


def hard_spec(n: int, a: int, s: float = 1.0) -> KernelSpec:
    """Hard-edge-scaled LUE kernel on [0, s]; a must be a nonnegative integer."""
    if s <= 0:
        raise ValueError("s must be positive")
    if a < 0 or int(a) != a:
        raise ValueError("hard edge needs a nonnegative integer a")
    if 1.0 - a / (2.0 * n) <= 0:
        raise ValueError("tau_N = 1 - a/2N must be positive")
    return KernelSpec(
        family="cd_hard_lue",
        interval=(0.0, s),
        params=EnsembleParams(kind=LUE, n=n, a=float(a)),
    )


def soft_spec(params: EnsembleParams, interval: tuple[float, float] | None = None) -> KernelSpec:
    """Soft-edge-scaled kernel for any of the three ensembles."""
    family = {GUE: "cd_soft_gue", LUE: "cd_soft_lue", JUE: "cd_soft_jue"}[params.kind]
    if interval is None:
        interval = (0.0, SOFT_TAIL_CUTOFF)
    return KernelSpec(
        family=family,
        interval=interval,
        params=params,
        scaling=soft_scaling(params),
    )


def finite_kernel(spec: KernelSpec, x: float, y: float) -> float:
    """Scaled Christoffel-Darboux kernel value for a finite-N spec."""
    if spec.family not in FINITE_FAMILIES:
        raise ValueError("finite_kernel needs a finite CD family")
    return spec.eval(x, y)
