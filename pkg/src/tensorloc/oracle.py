"""Independent ground truth: power iteration for ρ(A) and τ(A).

Nothing here reads the localization sets or the closed-form bounds; the
estimates exist to check them.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import LengthMismatch, NotConverged, NotNonnegative, NotZTensor
from .regions import CHAIN, RegionKind, region
from .tensor import SubsetPartition, Tensor, is_nonnegative, is_weakly_irreducible, is_z_tensor, m_tensor_split

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10**5
PERTURBATION = 1e-12


def apply_tensor(t: Tensor, x) -> np.ndarray:
    """A x^{m-1}: contract every mode but the first with ``x``."""
    x = np.asarray(x)
    if x.shape != (t.dim,):
        raise LengthMismatch(f"vector of length {x.shape} does not match dimension {t.dim}")
    y = t.data
    for _ in range(t.order - 1):
        y = y @ x
    return y


def _apply(a: np.ndarray, x: np.ndarray) -> np.ndarray:
    y = a
    for _ in range(a.ndim - 1):
        y = y @ x
    return y


@dataclass
class EigenPairEstimate:
    lam: float
    vector: np.ndarray
    residual: float
    iterations: int
    converged: bool
    lower: float
    upper: float
    perturbation_delta: float = 0.0
    bracket_monotone: bool = True
    shift: float | None = None
    strong_m: bool | None = None
    order: int = 2

    @property
    def uncertainty(self) -> float:
        """Half-width of the bracket plus the perturbation allowance and a few ulps of rounding."""
        n = len(self.vector)
        rounding = 8 * np.finfo(float).eps * max(1.0, abs(self.lam))
        return 0.5 * (self.upper - self.lower) + self.perturbation_delta * n ** (self.order - 1) + rounding

    def to_dict(self) -> dict:
        out = {
            "lambda": self.lam,
            "vector": self.vector.tolist(),
            "residual": self.residual,
            "iterations": self.iterations,
            "converged": self.converged,
            "perturbation_delta": self.perturbation_delta,
            "bracket": [self.lower, self.upper],
        }
        if self.strong_m is not None:
            out["shift"] = self.shift
            out["strong_m"] = self.strong_m
        return out


def _residual(a: np.ndarray, lam: float, x: np.ndarray) -> float:
    m = a.ndim
    return float(np.max(np.abs(_apply(a, x) - lam * x ** (m - 1))))


def spectral_radius_nonneg(
    t: Tensor,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    strict: bool = False,
) -> EigenPairEstimate:
    """Collatz-Wielandt bracketed power iteration for a nonnegative tensor.

    Each step computes y = A x^{m-1}; min and max of y_i / x_i^{m-1} bracket
    ρ(A). Tensors that are not weakly irreducible are iterated with every
    entry raised by ``PERTURBATION`` so the iterates stay positive.
    """
    if not is_nonnegative(t):
        raise NotNonnegative("power iteration needs a nonnegative tensor")
    n, m = t.dim, t.order
    a = t.data
    delta = 0.0
    if not is_weakly_irreducible(t):
        delta = PERTURBATION
        a = a + delta
    x = np.ones(n)
    lo, hi = -np.inf, np.inf
    monotone = True
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        y = _apply(a, x)
        xp = x ** (m - 1)
        ratios = y / xp
        new_lo, new_hi = float(ratios.min()), float(ratios.max())
        slack = 1e-12 * max(1.0, abs(new_hi))
        if new_lo < lo - slack or new_hi > hi + slack:
            monotone = False
        lo, hi = max(lo, new_lo), min(hi, new_hi)
        if hi - lo <= tol:
            converged = True
            break
        assert np.all(y >= 0), "negative iterate from a nonnegative tensor"
        x = y ** (1.0 / (m - 1))
        x /= x.max()
    lam = 0.5 * (lo + hi)
    est = EigenPairEstimate(
        lam=lam,
        vector=x.copy(),
        residual=_residual(t.data, lam, x),
        iterations=it,
        converged=converged,
        lower=lo,
        upper=hi,
        perturbation_delta=delta,
        bracket_monotone=monotone,
        order=m,
    )
    if not converged:
        log.warning("power iteration stopped after %d steps with bracket [%g, %g]", it, lo, hi)
        if strict:
            raise NotConverged(f"bracket width {hi - lo:g} > tol {tol:g} after {it} steps", est)
    return est


def tau_strong_m(
    t: Tensor,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    strict: bool = False,
) -> EigenPairEstimate:
    """τ(A) = s - ρ(B) for the split A = sI - B."""
    if not is_z_tensor(t):
        raise NotZTensor("τ oracle needs a Z-tensor")
    split = m_tensor_split(t)
    inner = spectral_radius_nonneg(split.b, tol=tol, max_iter=max_iter, strict=strict)
    s = split.s
    lam = s - inner.lam
    return EigenPairEstimate(
        lam=lam,
        vector=inner.vector,
        residual=_residual(t.data, lam, inner.vector),
        iterations=inner.iterations,
        converged=inner.converged,
        lower=s - inner.upper,
        upper=s - inner.lower,
        perturbation_delta=inner.perturbation_delta,
        bracket_monotone=inner.bracket_monotone,
        shift=s,
        strong_m=bool(s > inner.upper + inner.perturbation_delta * t.dim ** (t.order - 1)),
        order=t.order,
    )


@dataclass
class ContainmentReport:
    lam: float
    uncertainty: float
    results: list  # (partition members or None, region kind value, in_set)

    @property
    def failures(self) -> list:
        return [r for r in self.results if not r[2]]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "uncertainty": self.uncertainty,
            "checked": len(self.results),
            "failures": [{"partition": list(p) if p else None, "region": k} for p, k, _ in self.failures],
        }


def _member_within(reg, lam: float, uncertainty: float) -> bool:
    if reg.mask(np.array([lam], dtype=complex))[0]:
        return True
    if uncertainty <= 0:
        return False
    lo, hi = lam - uncertainty, lam + uncertainty
    # every component is centred on diagonal entries, so test those too
    diag = reg.tensor.diagonal()
    pts = np.concatenate([np.linspace(lo, hi, 201), diag[(diag >= lo) & (diag <= hi)]])
    return bool(reg.mask(pts.astype(complex)).any())


def verify_eigenvalue_in_regions(
    t: Tensor,
    lam: float,
    partitions: Sequence[SubsetPartition],
    uncertainty: float = 0.0,
) -> ContainmentReport:
    """Check that the real eigenvalue ``lam`` lies in all five sets for each partition.

    With ``uncertainty`` > 0 a set passes when any point of
    [lam - uncertainty, lam + uncertainty] belongs to it.
    """
    results = []
    for kind in (RegionKind.GAMMA, RegionKind.BRAUER_K):
        results.append((None, kind.value, _member_within(region(t, kind), lam, uncertainty)))
    for part in partitions:
        for kind in CHAIN[2:]:
            ok = _member_within(region(t, kind, part), lam, uncertainty)
            results.append((part.members, kind.value, ok))
    return ContainmentReport(lam, uncertainty, results)
