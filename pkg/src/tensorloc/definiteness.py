"""Sufficient conditions for positive (semi-)definiteness of even-order symmetric tensors.

A failed precondition (odd order, asymmetry, bad diagonal) yields an
INCONCLUSIVE verdict with a machine-readable reason instead of an error,
so subset searches can move on.
"""

from __future__ import annotations

import enum
import operator
from dataclasses import dataclass, field

import numpy as np

from .tensor import SubsetPartition, Tensor, all_partitions, is_symmetric, row_sums


class Status(enum.Enum):
    POSITIVE_DEFINITE = "POSITIVE_DEFINITE"
    POSITIVE_SEMI_DEFINITE = "POSITIVE_SEMI_DEFINITE"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class InequalityCheck:
    condition: str
    i: int
    j: int | None
    lhs: float
    rhs: float
    strict: bool
    holds: bool
    alternative: "InequalityCheck | None" = None

    @property
    def passed(self) -> bool:
        return self.holds or (self.alternative is not None and self.alternative.holds)

    def to_dict(self) -> dict:
        out = {
            "condition": self.condition,
            "i": self.i,
            "j": self.j,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "relation": ">" if self.strict else ">=",
            "holds": self.holds,
            "passed": self.passed,
        }
        if self.alternative is not None:
            out["alternative"] = self.alternative.to_dict()
        return out


@dataclass
class DefinitenessVerdict:
    status: Status
    certifying_s: SubsetPartition | None = None
    trace: list[InequalityCheck] = field(default_factory=list)
    reason: str | None = None
    method: str = "subset"
    mode: str | None = None
    tried: int = 0

    @property
    def certified(self) -> bool:
        return self.status is not Status.INCONCLUSIVE

    def find(self, condition: str, i: int, j: int | None = None) -> InequalityCheck:
        for check in self.trace:
            if check.condition == condition and check.i == i and check.j == j:
                return check
        raise KeyError((condition, i, j))

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "method": self.method,
            "certifying_s": list(self.certifying_s.members) if self.certifying_s else None,
            "reason": self.reason,
            "mode": self.mode,
            "tried": self.tried,
            "trace": [c.to_dict() for c in self.trace],
        }


def _precondition(t: Tensor, semi: bool) -> str | None:
    if t.order % 2:
        return "odd_order"
    if not is_symmetric(t):
        return "not_symmetric"
    diag = t.diagonal()
    if semi and np.any(diag < 0):
        return "negative_diagonal"
    if not semi and np.any(diag <= 0):
        return "nonpositive_diagonal"
    return None


def _subset_check(t: Tensor, part: SubsetPartition, semi: bool) -> DefinitenessVerdict:
    reason = _precondition(t, semi)
    if reason:
        return DefinitenessVerdict(Status.INCONCLUSIVE, reason=reason)
    cmp = operator.ge if semi else operator.gt
    rs = row_sums(t, part)
    a = rs.diag
    trace = []

    def check(cond, i, j, lhs, rhs, alt=None):
        lhs, rhs = float(lhs), float(rhs)
        trace.append(InequalityCheck(cond, i + 1, None if j is None else j + 1,
                                     lhs, rhs, not semi, bool(cmp(lhs, rhs)), alt))

    def alt(cond, i):
        return InequalityCheck(cond, i + 1, None, float(a[i]), float(rs.r[i]), not semi,
                               bool(cmp(a[i], rs.r[i])))

    for i in part.s_idx:
        check("i", i, None, a[i], rs.r_t_bar[i])
    for i in part.sbar_idx:
        check("ii", i, None, a[i], rs.r_s_bar[i])
    for i in part.s_idx:
        for j in part.sbar_idx:
            check("iii", i, j, (a[i] - rs.r_t_bar[i]) * (a[j] - rs.r_t[j]),
                  rs.r_t[i] * rs.r_t_bar[j], alt("iii-alt", i))
    for i in part.sbar_idx:
        for j in part.s_idx:
            check("iv", i, j, (a[i] - rs.r_s_bar[i]) * (a[j] - rs.r_s[j]),
                  rs.r_s[i] * rs.r_s_bar[j], alt("iv-alt", i))
    if all(c.passed for c in trace):
        status = Status.POSITIVE_SEMI_DEFINITE if semi else Status.POSITIVE_DEFINITE
        return DefinitenessVerdict(status, part, trace, tried=1)
    failed = next(c for c in trace if not c.passed)
    return DefinitenessVerdict(Status.INCONCLUSIVE, None, trace,
                               reason=f"condition_{failed.condition}_fails", tried=1)


def check_pd(t: Tensor, part: SubsetPartition) -> DefinitenessVerdict:
    """Subset-based sufficient condition for positive definiteness (strict inequalities)."""
    return _subset_check(t, part, semi=False)


def check_psd(t: Tensor, part: SubsetPartition) -> DefinitenessVerdict:
    """Subset-based sufficient condition for positive semi-definiteness (non-strict)."""
    return _subset_check(t, part, semi=True)


def check_pd_diagonal_dominance(t: Tensor) -> DefinitenessVerdict:
    """Baseline: a_{i...i} > r_i for every i puts Γ(A) in the open right half-plane."""
    reason = _precondition(t, semi=False)
    if reason and reason != "nonpositive_diagonal":
        return DefinitenessVerdict(Status.INCONCLUSIVE, reason=reason, method="diagonal_dominance")
    rs = row_sums(t)
    trace = [
        InequalityCheck("dd", i + 1, None, float(rs.diag[i]), float(rs.r[i]), True,
                        bool(rs.diag[i] > rs.r[i]))
        for i in range(t.dim)
    ]
    ok = all(c.holds for c in trace)
    return DefinitenessVerdict(
        Status.POSITIVE_DEFINITE if ok else Status.INCONCLUSIVE,
        trace=trace,
        reason=None if ok else "not_diagonally_dominant",
        method="diagonal_dominance",
    )


def _heuristic_subsets(t: Tensor):
    """Grow S one index at a time by decreasing a_{i...i} / r_i."""
    rs = row_sums(t)
    with np.errstate(divide="ignore"):
        ratio = np.where(rs.r > 0, rs.diag / np.where(rs.r > 0, rs.r, 1.0), np.inf)
    order = sorted(range(t.dim), key=lambda k: (-ratio[k], k))
    for size in range(1, t.dim):
        yield SubsetPartition(t.dim, tuple(k + 1 for k in order[:size]))


def search_pd_certificate(
    t: Tensor,
    max_dim_exhaustive: int = 20,
    semi: bool = False,
) -> DefinitenessVerdict:
    """First S (by size, then lexicographic) whose conditions certify the tensor.

    The conditions are invariant under swapping S and its complement, so
    each unordered pair {S, S̄} is tried once. Above ``max_dim_exhaustive``
    a greedy chain of n - 1 nested subsets is tried instead.
    """
    reason = _precondition(t, semi)
    if reason:
        return DefinitenessVerdict(Status.INCONCLUSIVE, reason=reason, mode="precondition")
    exhaustive = t.dim <= max_dim_exhaustive
    candidates = all_partitions(t.dim, up_to_complement=True) if exhaustive else _heuristic_subsets(t)
    mode = "exhaustive" if exhaustive else "heuristic"
    tried = 0
    for part in candidates:
        tried += 1
        verdict = _subset_check(t, part, semi)
        if verdict.certified:
            verdict.mode, verdict.tried = mode, tried
            return verdict
    return DefinitenessVerdict(Status.INCONCLUSIVE, reason="no_certifying_subset", mode=mode, tried=tried)
