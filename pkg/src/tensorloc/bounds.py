"""Bounds on ρ(A) for nonnegative tensors and τ(A) for strong M-tensors.

Closed forms (``eta_max``, ``pi_min``, ``r_max_bound``, ``r_min_bound``) and
a generic extractor that reads the extreme real point off any localization
set (``region_scan_bound``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionTooLargeForExhaustiveCheck, InvalidInput, NotNonnegative, NotZTensor, PreconditionViolated
from .regions import Region, RegionKind, RegionSpec
from .tensor import SubsetPartition, Tensor, all_partitions, is_nonnegative, is_weakly_irreducible, is_z_tensor, row_sums

SCAN_GRID = 10**4
SCAN_BISECTIONS = 60
DEFAULT_SCAN_TOL = 1e-4


class BoundKind(enum.Enum):
    RHO_UPPER = "rho_upper"
    TAU_LOWER = "tau_lower"


class Method(enum.Enum):
    ETA_MAX = "eta_max"
    PI_MIN = "pi_min"
    R_MAX = "r_max"
    R_MIN = "r_min"
    REGION_SCAN = "region_scan"


@dataclass
class BoundReport:
    value: float
    kind: BoundKind
    method: Method
    partition: SubsetPartition | None = None
    region: RegionKind | None = None
    components: dict = field(default_factory=dict)
    degenerate: bool = False

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError(f"bound value must be finite, got {self.value}")

    @property
    def label(self) -> str:
        if self.method is Method.REGION_SCAN:
            return f"region_scan({self.region.value})"
        return self.method.value

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "kind": self.kind.value,
            "method": self.method.value,
            "region": self.region.value if self.region else None,
            "partition": list(self.partition.members) if self.partition else None,
            "degenerate": self.degenerate,
            "components": self.components,
        }


def _require_nonnegative(t: Tensor) -> None:
    if not is_nonnegative(t):
        raise NotNonnegative("tensor has a negative entry")


def _require_z(t: Tensor) -> None:
    if not is_z_tensor(t):
        raise NotZTensor("tensor has a positive off-diagonal entry")


def _check_row_identity(rs, sign: int) -> None:
    # R_i = a_i...i + sign * r_i for nonnegative (+1) and Z (-1) tensors
    expected = rs.diag + sign * rs.r
    scale = np.maximum(1.0, np.abs(rs.diag) + rs.r)
    if np.any(np.abs(rs.big_r - expected) > 1e-12 * scale):
        raise ArithmeticError("signed row sums disagree with diagonal +/- off-diagonal sums")


def _pair_key(i: int, j: int) -> str:
    return f"{i + 1},{j + 1}"


def _quadratic_terms(rs, pairs, c_i, c_j, prod_i, prod_j, sign):
    """Per-pair root term and discriminant.

    sign=+1 gives the upper root ½(a_i + a_j + c_i + c_j + sqrt(D)) with
    D = (a_i - a_j + c_i - c_j)² + 4 p_i p_j; sign=-1 the lower root with
    the signs of c flipped.
    """
    roots, discs = {}, {}
    for i, j in pairs:
        ai, aj = rs.diag[i], rs.diag[j]
        disc = (ai - aj + sign * (c_i[i] - c_j[j])) ** 2 + 4.0 * prod_i[i] * prod_j[j]
        root = 0.5 * (ai + aj + sign * (c_i[i] + c_j[j]) + sign * math.sqrt(disc))
        discs[_pair_key(i, j)] = float(disc)
        roots[_pair_key(i, j)] = float(root)
    return roots, discs


def eta_max(t: Tensor, part: SubsetPartition) -> BoundReport:
    """Upper bound on the spectral radius of a nonnegative tensor from Υ^S."""
    _require_nonnegative(t)
    rs = row_sums(t, part)
    _check_row_identity(rs, +1)
    s, sb = part.s_idx, part.sbar_idx
    fwd = [(i, j) for i in s for j in sb]
    bwd = [(i, j) for i in sb for j in s]
    eta1 = float(np.max(rs.diag[s] + rs.r_t_bar[s]))
    eta2 = float(np.max(rs.diag[sb] + rs.r_s_bar[sb]))
    roots3, phi = _quadratic_terms(rs, fwd, rs.r_t_bar, rs.r_t, rs.r_t, rs.r_t_bar, +1)
    roots4, pi_ = _quadratic_terms(rs, bwd, rs.r_s_bar, rs.r_s, rs.r_s, rs.r_s_bar, +1)
    terms3 = {k: min(roots3[k], float(rs.big_r[int(k.split(",")[0]) - 1])) for k in roots3}
    terms4 = {k: min(roots4[k], float(rs.big_r[int(k.split(",")[0]) - 1])) for k in roots4}
    eta3, eta4 = max(terms3.values()), max(terms4.values())
    return BoundReport(
        value=max(eta1, eta2, eta3, eta4),
        kind=BoundKind.RHO_UPPER,
        method=Method.ETA_MAX,
        partition=part,
        components={
            "eta1": eta1, "eta2": eta2, "eta3": eta3, "eta4": eta4,
            "eta3_terms": terms3, "eta4_terms": terms4,
            "phi": phi, "pi": pi_,
        },
    )


def pi_min(t: Tensor, part: SubsetPartition, check_structure: bool = False) -> BoundReport:
    """Lower bound on τ(A) for a weakly irreducible strong M-tensor from Υ^S.

    Only the Z-pattern is enforced by default. With ``check_structure`` the
    weak irreducibility and strong-M status are verified as well (the latter
    through the power-iteration oracle).
    """
    _require_z(t)
    if check_structure:
        if not is_weakly_irreducible(t):
            raise PreconditionViolated("tensor is not weakly irreducible")
        from .oracle import tau_strong_m

        if not tau_strong_m(t).strong_m:
            raise PreconditionViolated("tensor is not a strong M-tensor")
    rs = row_sums(t, part)
    _check_row_identity(rs, -1)
    s, sb = part.s_idx, part.sbar_idx
    fwd = [(i, j) for i in s for j in sb]
    bwd = [(i, j) for i in sb for j in s]
    pi1 = float(np.min(rs.diag[s] - rs.r_t_bar[s]))
    pi2 = float(np.min(rs.diag[sb] - rs.r_s_bar[sb]))
    roots3, theta = _quadratic_terms(rs, fwd, rs.r_t_bar, rs.r_t, rs.r_t, rs.r_t_bar, -1)
    roots4, lam = _quadratic_terms(rs, bwd, rs.r_s_bar, rs.r_s, rs.r_s, rs.r_s_bar, -1)
    terms3 = {k: max(roots3[k], float(rs.big_r[int(k.split(",")[0]) - 1])) for k in roots3}
    terms4 = {k: max(roots4[k], float(rs.big_r[int(k.split(",")[0]) - 1])) for k in roots4}
    pi3, pi4 = min(terms3.values()), min(terms4.values())
    return BoundReport(
        value=min(pi1, pi2, pi3, pi4),
        kind=BoundKind.TAU_LOWER,
        method=Method.PI_MIN,
        partition=part,
        components={
            "pi1": pi1, "pi2": pi2, "pi3": pi3, "pi4": pi4,
            "pi3_terms": terms3, "pi4_terms": terms4,
            "theta": theta, "lambda": lam,
        },
    )


def r_max_bound(t: Tensor) -> BoundReport:
    _require_nonnegative(t)
    big_r = row_sums(t).big_r
    return BoundReport(float(big_r.max()), BoundKind.RHO_UPPER, Method.R_MAX,
                       components={"row_sums": big_r.tolist()})


def r_min_bound(t: Tensor) -> BoundReport:
    _require_z(t)
    big_r = row_sums(t).big_r
    return BoundReport(float(big_r.min()), BoundKind.TAU_LOWER, Method.R_MIN,
                       components={"row_sums": big_r.tolist()})


def region_scan_bound(
    t: Tensor,
    spec: RegionSpec,
    kind: BoundKind,
    tolerance: float = DEFAULT_SCAN_TOL,
    grid: int = SCAN_GRID,
    bisections: int = SCAN_BISECTIONS,
) -> BoundReport:
    """Extreme real point of a localization set on the admissible interval.

    For ρ the interval is [max diagonal, R_max] scanned from the top down;
    for τ it is [R_min, min diagonal] scanned from the bottom up. The first
    member found is refined by bisection against its non-member neighbour,
    then widened outward by ``tolerance`` (never past the interval end).
    """
    if tolerance < 0:
        raise InvalidInput("tolerance must be nonnegative")
    rs = row_sums(t)
    if kind is BoundKind.RHO_UPPER:
        _require_nonnegative(t)
        start, stop = float(rs.big_r.max()), float(rs.diag.max())
    else:
        _require_z(t)
        start, stop = float(rs.big_r.min()), float(rs.diag.min())
    outward = 1.0 if kind is BoundKind.RHO_UPPER else -1.0
    info = {"interval": sorted([start, stop]), "tolerance": tolerance}

    def report(value, degenerate=False, **extra):
        info.update(extra)
        return BoundReport(value, kind, Method.REGION_SCAN, spec.partition, spec.kind, info, degenerate)

    # start is the far end (R_max or R_min), stop the end forced by the diagonal
    if outward * (start - stop) <= 0:
        return report(stop, degenerate=True)
    reg = Region(t, spec)
    xs = np.linspace(start, stop, grid + 1)
    hits = np.flatnonzero(reg.mask(xs.astype(complex)))
    if hits.size == 0:
        # the spectrum lies in the set, so this only happens when a component
        # falls between grid points; fall back on the interval end
        return report(start, no_member_found=True)
    k = int(hits[0])
    if k == 0:
        return report(start, extreme_member=start)
    inside, outside = xs[k], xs[k - 1]
    for _ in range(bisections):
        mid = 0.5 * (inside + outside)
        if reg.mask(np.array([mid], dtype=complex))[0]:
            inside = mid
        else:
            outside = mid
    value = inside + outward * tolerance
    value = min(value, start) if outward > 0 else max(value, start)
    return report(float(value), extreme_member=float(inside))


def best_bound_over_s(t: Tensor, method: Method | str, max_dim_exhaustive: int = 20) -> BoundReport:
    """Tightest closed-form bound over every nonempty proper S (first wins ties)."""
    method = Method(method.lower()) if isinstance(method, str) else method
    if method not in (Method.ETA_MAX, Method.PI_MIN):
        raise InvalidInput(f"best_bound_over_s supports eta_max and pi_min, not {method.value}")
    if t.dim > max_dim_exhaustive:
        raise DimensionTooLargeForExhaustiveCheck(
            f"dimension {t.dim} exceeds exhaustive limit {max_dim_exhaustive}"
        )
    fn = eta_max if method is Method.ETA_MAX else pi_min
    better = (lambda a, b: a < b) if method is Method.ETA_MAX else (lambda a, b: a > b)
    best = None
    for part in all_partitions(t.dim):
        rep = fn(t, part)
        if best is None or better(rep.value, best.value):
            best = rep
    return best
