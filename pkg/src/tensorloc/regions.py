"""Membership tests for the five eigenvalue localization sets.

Every set is a finite union of closed components. A component is a
vectorised predicate over complex points; a :class:`Region` bundles the
components of one set for one tensor so that repeated queries (rasters,
scans, sampling) reuse the row sums.

All inequalities are non-strict and compared without any epsilon.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidInput, WindowDegenerate
from .tensor import RowSums, SubsetPartition, Tensor, row_sums


class RegionKind(enum.Enum):
    GAMMA = "gamma"
    BRAUER_K = "k"
    K_S = "ks"
    OMEGA_S = "omega"
    UPSILON_S = "upsilon"

    @property
    def needs_partition(self) -> bool:
        return self in (RegionKind.K_S, RegionKind.OMEGA_S, RegionKind.UPSILON_S)

    @classmethod
    def parse(cls, name: str) -> "RegionKind":
        key = name.strip().lower()
        for kind in cls:
            if key in (kind.value, kind.name.lower()):
                return kind
        raise InvalidInput(f"unknown region {name!r}")


# Chain order, loosest first.
CHAIN = (RegionKind.GAMMA, RegionKind.BRAUER_K, RegionKind.K_S, RegionKind.OMEGA_S, RegionKind.UPSILON_S)


@dataclass(frozen=True)
class RegionSpec:
    kind: RegionKind
    partition: SubsetPartition | None = None

    def __post_init__(self):
        if self.kind.needs_partition and self.partition is None:
            raise InvalidInput(f"region {self.kind.name} needs a partition S")
        if not self.kind.needs_partition and self.partition is not None:
            raise InvalidInput(f"region {self.kind.name} takes no partition")


@dataclass(frozen=True)
class MembershipWitness:
    in_set: bool
    component: str | None = None

    def __bool__(self) -> bool:
        return self.in_set


@dataclass(frozen=True)
class Component:
    family: str
    i: int
    j: int | None
    test: Callable[[np.ndarray], np.ndarray]
    # (slack_a, slack_b) for intersections, used to name the binding condition
    slacks: Callable[[complex], tuple[float, float]] | None = None

    def describe(self, z: complex) -> str:
        where = f"i={self.i}" if self.j is None else f"(i,j)=({self.i},{self.j})"
        text = f"{self.family} at {where}"
        if self.slacks is not None:
            oval, disk = self.slacks(z)
            text += ", binding " + ("Γ" if disk <= oval else self.family.split("∩")[0])
        return text


def _as_points(z) -> np.ndarray:
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise InvalidInput("query points must be finite")
    return arr


def _gamma_components(rs: RowSums) -> list[Component]:
    comps = []
    for i in range(len(rs.diag)):
        a, r = rs.diag[i], rs.r[i]
        comps.append(Component("Γ", i + 1, None, lambda z, a=a, r=r: np.abs(z - a) <= r))
    return comps


def _brauer(rs: RowSums, i: int, j: int) -> Component:
    ai, aj = rs.diag[i], rs.diag[j]
    rij, rhs = rs.r_minus(i, j), rs.pure[i, j] * rs.r[j]
    return Component(
        "K", i + 1, j + 1,
        lambda z: (np.abs(z - ai) - rij) * np.abs(z - aj) <= rhs,
    )


def _brauer_components(rs: RowSums, pairs) -> list[Component]:
    return [_brauer(rs, i, j) for i, j in pairs]


def _cross_pairs(part: SubsetPartition):
    s, sb = part.s_idx, part.sbar_idx
    return [(i, j) for i in s for j in sb], [(i, j) for i in sb for j in s]


def _omega_components(rs: RowSums, part: SubsetPartition) -> list[Component]:
    forward, backward = _cross_pairs(part)
    comps = []
    # Ω^S_{i,j}, i in S, j in S̄: uses r_j^{Δ^S} and r_j^{complement Δ^S}
    for i, j in forward:
        ai, aj = rs.diag[i], rs.diag[j]
        rj_out, rhs = rs.r_s_bar[j], rs.r[i] * rs.r_s[j]
        comps.append(Component(
            "Ω^S", i + 1, j + 1,
            lambda z, ai=ai, aj=aj, c=rj_out, rhs=rhs: np.abs(z - ai) * (np.abs(z - aj) - c) <= rhs,
        ))
    for i, j in backward:
        ai, aj = rs.diag[i], rs.diag[j]
        rj_out, rhs = rs.r_t_bar[j], rs.r[i] * rs.r_t[j]
        comps.append(Component(
            "Ω^S̄", i + 1, j + 1,
            lambda z, ai=ai, aj=aj, c=rj_out, rhs=rhs: np.abs(z - ai) * (np.abs(z - aj) - c) <= rhs,
        ))
    return comps


def _upsilon_components(rs: RowSums, part: SubsetPartition) -> list[Component]:
    """Disks Υ̂ first, then the oval-disk intersections Υ̃ ∩ Γ_i."""
    forward, backward = _cross_pairs(part)
    comps = []
    for i in part.s_idx:
        a, rad = rs.diag[i], rs.r_t_bar[i]
        comps.append(Component("Υ̂¹", i + 1, None, lambda z, a=a, rad=rad: np.abs(z - a) <= rad))
    for i in part.sbar_idx:
        a, rad = rs.diag[i], rs.r_s_bar[i]
        comps.append(Component("Υ̂²", i + 1, None, lambda z, a=a, rad=rad: np.abs(z - a) <= rad))

    def oval(family, i, j, ci, cj, rhs):
        ai, aj, ri = rs.diag[i], rs.diag[j], rs.r[i]

        def test(z):
            di = np.abs(z - ai)
            return ((di - ci) * (np.abs(z - aj) - cj) <= rhs) & (di <= ri)

        def slacks(z):
            di = abs(z - ai)
            return rhs - (di - ci) * (abs(z - aj) - cj), ri - di

        return Component(family, i + 1, j + 1, test, slacks)

    for i, j in forward:
        comps.append(oval("Υ̃¹∩Γ", i, j, rs.r_t_bar[i], rs.r_t[j], rs.r_t[i] * rs.r_t_bar[j]))
    for i, j in backward:
        comps.append(oval("Υ̃²∩Γ", i, j, rs.r_s_bar[i], rs.r_s[j], rs.r_s[i] * rs.r_s_bar[j]))
    return comps


def upsilon_component_counts(part: SubsetPartition) -> dict[str, int]:
    """Number of elementary sets making up Υ^S, by family."""
    k, n = len(part.members), part.n
    return {"Υ̃¹": k * (n - k), "Υ̃²": k * (n - k), "Υ̂¹": k, "Υ̂²": n - k, "Γ": n}


class Region:
    """One localization set of one tensor, ready for repeated queries."""

    def __init__(self, t: Tensor, spec: RegionSpec):
        if spec.partition is not None and spec.partition.n != t.dim:
            raise InvalidInput(f"partition over 1..{spec.partition.n} does not fit dimension {t.dim}")
        self.tensor = t
        self.spec = spec
        rs = row_sums(t, spec.partition)
        n = t.dim
        kind = spec.kind
        if kind is RegionKind.GAMMA:
            comps = _gamma_components(rs)
        elif kind is RegionKind.BRAUER_K:
            comps = _brauer_components(rs, [(i, j) for i in range(n) for j in range(n) if i != j])
        elif kind is RegionKind.K_S:
            forward, backward = _cross_pairs(spec.partition)
            comps = _brauer_components(rs, forward + backward)
        elif kind is RegionKind.OMEGA_S:
            comps = _omega_components(rs, spec.partition)
        else:
            comps = _upsilon_components(rs, spec.partition)
        self.components = comps

    @property
    def kind(self) -> RegionKind:
        return self.spec.kind

    def mask(self, z) -> np.ndarray:
        pts = _as_points(z)
        out = np.zeros(pts.shape, dtype=bool)
        for comp in self.components:
            out |= comp.test(pts)
        return out

    def witness(self, z) -> MembershipWitness:
        pt = complex(_as_points(z))
        arr = np.asarray(pt)
        for comp in self.components:
            if bool(comp.test(arr)):
                return MembershipWitness(True, comp.describe(pt))
        return MembershipWitness(False)

    def __contains__(self, z) -> bool:
        return bool(self.witness(z))


def region(t: Tensor, kind: RegionKind | str, partition: SubsetPartition | None = None) -> Region:
    if isinstance(kind, str):
        kind = RegionKind.parse(kind)
    return Region(t, RegionSpec(kind, partition if kind.needs_partition else None))


def gamma_contains(t: Tensor, z) -> MembershipWitness:
    return region(t, RegionKind.GAMMA).witness(z)


def brauer_contains(t: Tensor, z) -> MembershipWitness:
    return region(t, RegionKind.BRAUER_K).witness(z)


def k_s_contains(t: Tensor, part: SubsetPartition, z) -> MembershipWitness:
    return region(t, RegionKind.K_S, part).witness(z)


def omega_s_contains(t: Tensor, part: SubsetPartition, z) -> MembershipWitness:
    return region(t, RegionKind.OMEGA_S, part).witness(z)


def upsilon_s_contains(t: Tensor, part: SubsetPartition, z) -> MembershipWitness:
    return region(t, RegionKind.UPSILON_S, part).witness(z)


@dataclass(frozen=True)
class Window:
    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        vals = (self.x0, self.x1, self.y0, self.y1)
        if not all(np.isfinite(v) for v in vals):
            raise WindowDegenerate("window bounds must be finite")
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise WindowDegenerate(f"window {vals} has zero or negative extent")

    @classmethod
    def parse(cls, text: str) -> "Window":
        try:
            parts = [float(tok) for tok in text.split(",")]
        except ValueError:
            raise InvalidInput(f"cannot parse window {text!r}")
        if len(parts) != 4:
            raise InvalidInput("window needs four numbers x0,x1,y0,y1")
        return cls(*parts)

    @classmethod
    def square(cls, center: float, half_width: float) -> "Window":
        return cls(center - half_width, center + half_width, -half_width, half_width)


def default_window(t: Tensor) -> Window:
    """Square around the mean diagonal entry, 1.25 times the widest Gershgorin reach."""
    rs = row_sums(t)
    half = 1.25 * float(np.max(np.abs(rs.diag) + rs.r))
    if half == 0.0:
        half = 1.0
    return Window.square(float(np.mean(rs.diag)), half)


@dataclass(frozen=True)
class ChainViolation:
    index: int
    point: complex
    step: tuple[str, str]


@dataclass
class InclusionReport:
    partition: SubsetPartition
    window: Window
    sample_count: int
    counts: dict[str, int]
    violations: int
    first_violation: ChainViolation | None

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        first = None
        if self.first_violation is not None:
            v = self.first_violation
            first = {"index": v.index, "re": v.point.real, "im": v.point.imag,
                     "inner": v.step[0], "outer": v.step[1]}
        return {
            "partition": list(self.partition.members),
            "window": [self.window.x0, self.window.x1, self.window.y0, self.window.y1],
            "samples": self.sample_count,
            "counts": dict(self.counts),
            "violations": self.violations,
            "first_violation": first,
        }


def sample_points(window: Window, count: int, seed: int = 0) -> np.ndarray:
    """Half (rounded down to a square) on a uniform grid, the rest uniform random."""
    if count < 1:
        raise InvalidInput("sample count must be >= 1")
    side = int(np.sqrt(count / 2))
    pts = []
    if side >= 2:
        xs = np.linspace(window.x0, window.x1, side)
        ys = np.linspace(window.y1, window.y0, side)
        gx, gy = np.meshgrid(xs, ys)
        pts.append((gx + 1j * gy).ravel())
    rest = count - (side * side if side >= 2 else 0)
    rng = np.random.default_rng(seed)
    re = rng.uniform(window.x0, window.x1, rest)
    im = rng.uniform(window.y0, window.y1, rest)
    pts.append(re + 1j * im)
    return np.concatenate(pts)


def chain_masks(t: Tensor, part: SubsetPartition, z) -> dict[RegionKind, np.ndarray]:
    return {kind: region(t, kind, part).mask(z) for kind in CHAIN}


def verify_inclusion_chain(
    t: Tensor,
    part: SubsetPartition,
    sample_count: int = 10**5,
    window: Window | None = None,
    seed: int = 0,
) -> InclusionReport:
    """Check Υ^S ⊆ Ω^S ⊆ K^S ⊆ K ⊆ Γ pointwise on sampled points."""
    window = window or default_window(t)
    z = sample_points(window, sample_count, seed)
    masks = chain_masks(t, part, z)
    bad = np.zeros(z.shape, dtype=bool)
    step_of = np.full(z.shape, -1)
    for k in range(len(CHAIN) - 1, 0, -1):
        inner, outer = masks[CHAIN[k]], masks[CHAIN[k - 1]]
        viol = inner & ~outer
        step_of[viol & ~bad] = k
        bad |= viol
    first = None
    if bad.any():
        idx = int(np.flatnonzero(bad)[0])
        k = int(step_of[idx])
        first = ChainViolation(idx, complex(z[idx]), (CHAIN[k].value, CHAIN[k - 1].value))
    return InclusionReport(
        partition=part,
        window=window,
        sample_count=int(z.size),
        counts={kind.value: int(masks[kind].sum()) for kind in CHAIN},
        violations=int(bad.sum()),
        first_violation=first,
    )


@dataclass
class Raster:
    xs: np.ndarray
    ys: np.ndarray
    masks: dict[RegionKind, np.ndarray]

    def counts(self) -> dict[str, int]:
        return {kind.value: int(m.sum()) for kind, m in self.masks.items()}


def raster(
    t: Tensor,
    regions: Sequence[RegionSpec],
    window: Window,
    resolution: int | tuple[int, int],
) -> Raster:
    """Evaluate each region on a grid; rows run from the top (y1) down, columns left to right."""
    nx, ny = (resolution, resolution) if np.isscalar(resolution) else resolution
    if nx < 2 or ny < 2:
        raise WindowDegenerate(f"resolution must be >= 2 per axis, got {nx}x{ny}")
    xs = np.linspace(window.x0, window.x1, int(nx))
    ys = np.linspace(window.y1, window.y0, int(ny))
    z = xs[None, :] + 1j * ys[:, None]
    return Raster(xs, ys, {spec.kind: Region(t, spec).mask(z) for spec in regions})


_CSV_COLUMNS = ("gamma", "k", "ks", "omega", "upsilon")


def write_csv(r: Raster, path) -> None:
    cols = [c for c in _CSV_COLUMNS if RegionKind(c) in r.masks]
    lines = ["x,y," + ",".join(cols)]
    for row, y in enumerate(r.ys):
        for col, x in enumerate(r.xs):
            bits = ",".join("1" if r.masks[RegionKind(c)][row, col] else "0" for c in cols)
            lines.append(f"{float(x)!r},{float(y)!r},{bits}")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_pgm(bitmap: np.ndarray, path) -> None:
    """Binary PGM (P5), 255 for members and 0 elsewhere."""
    h, w = bitmap.shape
    body = np.where(bitmap, 255, 0).astype(np.uint8).tobytes()
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii") + body)
