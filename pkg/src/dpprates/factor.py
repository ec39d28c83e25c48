"""Operator factorizations behind the rate proofs, in checkable form.

Each target kernel is written as a signed sum of compositions of factor
operators whose kernels have the product form m(x*y), so composing their
Nystrom matrices reproduces the target matrix up to quadrature error:

* sine     = C C + S S                     on [-s, s]
* GUE bulk = E_N E_N + E_{N-1} E_{N-1}
             - F_N G_{N-1} - F_{N-1} G_N
             - G_{N-1} F_N - G_N F_{N-1}   on [-s, s]
* LUE hard = H_N M_N + M_N H_N             on [0, s]
* Bessel   = B_a B_a                       on [0, s]

The combination is stored as data (ordered signed factor pairs) so one
verifier covers all four decompositions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels, nystrom, specfun

FACTOR_KINDS = ("sine_cs", "gue_bulk", "lue_hard", "bessel")


@dataclass(frozen=True)
class FactorSet:
    """Named product-form factors plus the signed composition recipe."""

    kind: str
    factors: dict[str, Callable[[np.ndarray], np.ndarray]]
    combination: tuple[tuple[str, str, float], ...]
    target: kernels.KernelSpec
    s: float

    def factor_matrix(self, name: str, xs: np.ndarray) -> np.ndarray:
        """Kernel matrix of one factor: profile evaluated at x_i * x_j."""
        prod = np.outer(xs, xs)
        return self.factors[name](prod)


def _psi_profile(n: int, scale: float, pref: float):
    def profile(p):
        _, val = specfun.psi_pair(n, scale * p)
        return pref * val

    return profile


def _phi_profile(n: int, a: float, scale: float, pref: float):
    def profile(p):
        return pref * specfun.laguerre(n, a, scale * p, weighted=True)

    return profile


def build_factors(kind: str, s: float, n: int | None = None, a: float | None = None) -> FactorSet:
    """Factor set for one decomposition at window parameter s > 0."""
    if kind not in FACTOR_KINDS:
        raise ValueError(f"kind must be one of {FACTOR_KINDS}")
    if s <= 0:
        raise ValueError("s must be positive")

    if kind == "sine_cs":
        pref = 1.0 / math.sqrt(2.0 * s)
        omega = math.pi / s
        factors = {
            "C": lambda p: pref * np.cos(omega * p),
            "S": lambda p: pref * np.sin(omega * p),
        }
        comb = (("C", "C", 1.0), ("S", "S", 1.0))
        target = kernels.KernelSpec(family="sine", interval=(-s, s))
        return FactorSet(kind, factors, comb, target, s)

    if kind == "bessel":
        if a is None or a < 0:
            raise ValueError("bessel factors need a >= 0")
        pref = 1.0 / (2.0 * math.sqrt(s))

        def b_profile(p):
            return pref * specfun.bessel_j(a, np.sqrt(np.maximum(p, 0.0) / s))

        factors = {"B": b_profile}
        comb = (("B", "B", 1.0),)
        target = kernels.limit_spec("bessel", a=a, interval=(0.0, s))
        return FactorSet(kind, factors, comb, target, s)

    if kind == "gue_bulk":
        if n is None or n < 1:
            raise ValueError("gue_bulk factors need a matrix size n >= 1")
        c_n = math.pi / math.sqrt(2.0 * n)
        scale = c_n / s
        e_pref = math.sqrt(math.pi / (2.0 * s)) * (n / 2.0) ** 0.25
        fg_pref = (math.pi / (2.0 * s)) * (1.0 / (2.0 * n)) ** 0.25
        en = _psi_profile(n, scale, e_pref)
        en1 = _psi_profile(n - 1, scale, e_pref)
        gn = _psi_profile(n, scale, fg_pref)
        gn1 = _psi_profile(n - 1, scale, fg_pref)
        factors = {
            "E_N": en,
            "E_Nm1": en1,
            "F_N": lambda p: p * gn(p),
            "F_Nm1": lambda p: p * gn1(p),
            "G_N": gn,
            "G_Nm1": gn1,
        }
        # cross terms carry minus signs (the t(x+y) term of the derivative
        # identity); the plain sum reproduces only the E-part
        comb = (
            ("E_N", "E_N", 1.0),
            ("E_Nm1", "E_Nm1", 1.0),
            ("F_N", "G_Nm1", -1.0),
            ("F_Nm1", "G_N", -1.0),
            ("G_Nm1", "F_N", -1.0),
            ("G_N", "F_Nm1", -1.0),
        )
        target = kernels.bulk_spec(n, s)
        return FactorSet(kind, factors, comb, target, s)

    # lue_hard
    if n is None or n < 1:
        raise ValueError("lue_hard factors need a matrix size n >= 1")
    if a is None or a < 0 or int(a) != a:
        raise ValueError("lue_hard factors need a nonnegative integer a")
    tau = 1.0 - a / (2.0 * n)
    if tau <= 0:
        raise ValueError("tau_N = 1 - a/2N must be positive")
    pref = math.sqrt(
        tau * math.exp(math.lgamma(n) - math.lgamma(n + a)) / (8.0 * s)
    )
    scale = tau / (4.0 * s * n)
    factors = {
        "H_N": _phi_profile(n, float(a), scale, pref),
        "M_N": _phi_profile(n - 1, float(a), scale, pref),
    }
    comb = (("H_N", "M_N", 1.0), ("M_N", "H_N", 1.0))
    target = kernels.hard_spec(n, int(a), s)
    return FactorSet("lue_hard", factors, comb, target, s)


def verify_factorization(fs: FactorSet, grid: nystrom.QuadratureGrid) -> float:
    """Max entrywise deviation of the composed factors from the target.

    Factors and target are discretized in the symmetrized sqrt(w_i w_j)
    form; composition is then plain matrix multiplication.
    """
    lo, hi = fs.target.interval
    tol = 1e-9 * max(1.0, abs(lo), abs(hi))
    if grid.lo < lo - tol or grid.hi > hi + tol:
        raise ValueError("grid does not match the factorization window")
    xs = grid.nodes
    sw = np.sqrt(grid.weights)
    disc = {}
    for name in fs.factors:
        k = fs.factor_matrix(name, xs)
        a = k * sw[:, None] * sw[None, :]
        disc[name] = 0.5 * (a + a.T)
    composed = np.zeros((grid.n, grid.n))
    for left, right, sign in fs.combination:
        composed += sign * (disc[left] @ disc[right])
    target = nystrom.discretize(fs.target, grid).matrix
    return float(np.max(np.abs(composed - target)))


def factor_hs_norm(fs: FactorSet, name: str, grid: nystrom.QuadratureGrid) -> float:
    """Hilbert-Schmidt norm of one factor under the grid's quadrature."""
    k = fs.factor_matrix(name, grid.nodes)
    w = grid.weights
    return float(np.sqrt(np.einsum("i,j,ij->", w, w, k * k)))


def factor_pair_hs_distance(
    fs: FactorSet, name1: str, name2: str, grid: nystrom.QuadratureGrid, sign: float = 1.0
) -> float:
    """||F1 + sign*F2||_2 under the grid's quadrature (for the pairing tests)."""
    k = fs.factor_matrix(name1, grid.nodes) + sign * fs.factor_matrix(name2, grid.nodes)
    w = grid.weights
    return float(np.sqrt(np.einsum("i,j,ij->", w, w, k * k)))


def sine_reference_factors(s: float):
    """C and S discretizers for the parity-pairing diagnostics."""
    fs = build_factors("sine_cs", s)
    return fs.factors["C"], fs.factors["S"]
