"""Dense tensors, subset partitions, row sums and structural tests.

Indices are 1-based on every public surface (constructors, partitions,
aggregates, reports) and 0-based inside numpy arrays.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import (
    DimensionTooLargeForExhaustiveCheck,
    DuplicateEntry,
    DuplicateKey,
    IndexOutOfRange,
    InvalidInput,
    NotZTensor,
    PreconditionViolated,
    StorageCapExceeded,
    UnsortedKey,
)

DEFAULT_MAX_DENSE = 10**8
MAX_DIM_IRREDUCIBLE = 20


def max_dense_entries() -> int:
    """Storage cap on n**m, overridable through ``TENSORLOC_MAX_DENSE``."""
    raw = os.environ.get("TENSORLOC_MAX_DENSE")
    if raw is None:
        return DEFAULT_MAX_DENSE
    try:
        cap = int(raw)
    except ValueError:
        raise InvalidInput(f"TENSORLOC_MAX_DENSE must be an integer, got {raw!r}")
    if cap < 1:
        raise InvalidInput("TENSORLOC_MAX_DENSE must be positive")
    return cap


def _check_shape(order: int, dim: int) -> None:
    if int(order) != order or order < 2:
        raise InvalidInput(f"order must be an integer >= 2, got {order}")
    if int(dim) != dim or dim < 2:
        raise InvalidInput(f"dim must be an integer >= 2, got {dim}")
    cap = max_dense_entries()
    if dim**order > cap:
        raise StorageCapExceeded(
            f"dense storage of {dim}**{order} entries exceeds the cap of {cap}"
        )


class Tensor:
    """Immutable dense real tensor of order ``m`` and dimension ``n``."""

    __slots__ = ("_data",)

    def __init__(self, data):
        arr = np.array(data, dtype=float, copy=True)
        if arr.ndim < 2:
            raise InvalidInput("a tensor needs order >= 2")
        n = arr.shape[0]
        if any(s != n for s in arr.shape):
            raise InvalidInput(f"all modes must share one dimension, got shape {arr.shape}")
        _check_shape(arr.ndim, n)
        if not np.all(np.isfinite(arr)):
            raise InvalidInput("tensor entries must be finite")
        arr.setflags(write=False)
        self._data = arr

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def order(self) -> int:
        return self._data.ndim

    @property
    def dim(self) -> int:
        return self._data.shape[0]

    def __getitem__(self, index) -> float:
        """1-based entry access: ``t[1, 3, 2]``."""
        index = tuple(index) if isinstance(index, (tuple, list)) else (index,)
        _check_index(index, self.order, self.dim)
        return float(self._data[tuple(k - 1 for k in index)])

    def diagonal(self) -> np.ndarray:
        n = self.dim
        return self._data[(np.arange(n),) * self.order].copy()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return self._data.shape == other._data.shape and bool(
            np.array_equal(self._data, other._data)
        )

    def __hash__(self) -> int:
        return hash((self._data.shape, self._data.tobytes()))

    def __repr__(self) -> str:
        return f"Tensor(order={self.order}, dim={self.dim})"

    @classmethod
    def zeros(cls, order: int, dim: int) -> "Tensor":
        _check_shape(order, dim)
        return cls(np.zeros((dim,) * order))

    @classmethod
    def unit(cls, order: int, dim: int, scale: float = 1.0) -> "Tensor":
        """``scale`` times the unit tensor (ones on the superdiagonal)."""
        _check_shape(order, dim)
        arr = np.zeros((dim,) * order)
        arr[(np.arange(dim),) * order] = scale
        return cls(arr)


def _check_index(index, order: int, dim: int) -> None:
    if len(index) != order:
        raise IndexOutOfRange(f"index {tuple(index)} has {len(index)} components, expected {order}")
    for k in index:
        if int(k) != k or not 1 <= k <= dim:
            raise IndexOutOfRange(f"index {tuple(index)} outside 1..{dim}")


def build_tensor(order: int, dim: int, entries: Iterable[tuple[Iterable[int], float]] = ()) -> Tensor:
    """Dense tensor from a sparse ``(multi-index, value)`` list; missing entries are zero."""
    _check_shape(order, dim)
    arr = np.zeros((dim,) * order)
    seen = set()
    for index, value in entries:
        index = tuple(int(k) for k in index)
        _check_index(index, order, dim)
        if index in seen:
            raise DuplicateEntry(f"entry {index} listed twice")
        seen.add(index)
        arr[tuple(k - 1 for k in index)] = value
    return Tensor(arr)


def symmetrize_from_representatives(
    order: int,
    dim: int,
    representatives: Mapping[tuple[int, ...], float] | Iterable[tuple[Iterable[int], float]],
) -> Tensor:
    """Symmetric tensor whose every index permutation of a key carries its value.

    Keys are 1-based and must be non-decreasing.
    """
    _check_shape(order, dim)
    items = representatives.items() if isinstance(representatives, Mapping) else representatives
    arr = np.zeros((dim,) * order)
    seen = set()
    for key, value in items:
        key = tuple(int(k) for k in key)
        _check_index(key, order, dim)
        if list(key) != sorted(key):
            raise UnsortedKey(f"representative key {key} is not non-decreasing")
        if key in seen:
            raise DuplicateKey(f"representative key {key} listed twice")
        seen.add(key)
        for perm in set(itertools.permutations(key)):
            arr[tuple(k - 1 for k in perm)] = value
    return Tensor(arr)


@dataclass(frozen=True)
class SubsetPartition:
    """A nonempty proper subset S of {1..n} together with its complement."""

    n: int
    members: tuple[int, ...]
    complement: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        members = tuple(sorted(set(int(k) for k in self.members)))
        if len(members) != len(self.members):
            raise InvalidInput(f"subset {self.members} repeats an index")
        if not members or len(members) >= self.n:
            raise InvalidInput(f"S must be a nonempty proper subset of 1..{self.n}, got {members}")
        if members[0] < 1 or members[-1] > self.n:
            raise IndexOutOfRange(f"subset {members} outside 1..{self.n}")
        object.__setattr__(self, "members", members)
        object.__setattr__(
            self, "complement", tuple(k for k in range(1, self.n + 1) if k not in members)
        )

    @classmethod
    def parse(cls, text: str, n: int) -> "SubsetPartition":
        """Parse a comma-separated 1-based index list such as ``"1,2"``."""
        try:
            members = tuple(int(tok) for tok in text.split(",") if tok.strip())
        except ValueError:
            raise InvalidInput(f"cannot parse subset {text!r}")
        return cls(n, members)

    @property
    def s_idx(self) -> np.ndarray:
        return np.array(self.members) - 1

    @property
    def sbar_idx(self) -> np.ndarray:
        return np.array(self.complement) - 1

    def swapped(self) -> "SubsetPartition":
        return SubsetPartition(self.n, self.complement)

    def label(self) -> str:
        return "{" + ",".join(map(str, self.members)) + "}"

    def __str__(self) -> str:
        return ",".join(map(str, self.members))


def all_partitions(n: int, up_to_complement: bool = False) -> Iterator[SubsetPartition]:
    """Nonempty proper subsets of {1..n}, by size then lexicographically.

    With ``up_to_complement`` a subset is skipped when its complement was
    already produced.
    """
    seen = set()
    for size in range(1, n):
        for members in itertools.combinations(range(1, n + 1), size):
            if up_to_complement:
                comp = tuple(k for k in range(1, n + 1) if k not in members)
                if comp in seen:
                    continue
                seen.add(members)
            yield SubsetPartition(n, members)


def _tuple_mask(n: int, order: int, idx: np.ndarray) -> np.ndarray:
    """Boolean mask over (i2..im) that is True when every component lies in ``idx``."""
    inside = np.zeros(n, dtype=bool)
    inside[idx] = True
    mask = inside
    for _ in range(order - 2):
        mask = np.multiply.outer(mask, inside)
    return mask


def _abs_off_diagonal(t: Tensor) -> np.ndarray:
    a = np.abs(t.data)
    a[(np.arange(t.dim),) * t.order] = 0.0
    return a


@dataclass(frozen=True)
class RowSums:
    """All row aggregates of a tensor, as length-n arrays (0-based positions).

    ``r_s``/``r_s_bar`` are r^{Δ^S} and r^{complement Δ^S}; ``r_t``/``r_t_bar``
    are the same quantities for the complement set S̄. ``pure[i, j]`` holds
    ``|a_{ij...j}|`` (zero on the diagonal).
    """

    diag: np.ndarray
    big_r: np.ndarray
    r: np.ndarray
    pure: np.ndarray
    r_s: np.ndarray | None = None
    r_s_bar: np.ndarray | None = None
    r_t: np.ndarray | None = None
    r_t_bar: np.ndarray | None = None

    def r_minus(self, i: int, j: int) -> float:
        """r_i^j for 0-based ``i != j``."""
        return float(self.r[i] - self.pure[i, j])


def row_sums(t: Tensor, part: SubsetPartition | None = None) -> RowSums:
    n, m = t.dim, t.order
    off = _abs_off_diagonal(t)
    flat = off.reshape(n, -1)
    big_r = t.data.reshape(n, -1).sum(axis=1)
    r = flat.sum(axis=1)
    pure = off[(np.arange(n)[:, None],) + (np.arange(n)[None, :],) * (m - 1)]
    extra = {}
    if part is not None:
        if part.n != n:
            raise InvalidInput(f"partition is over 1..{part.n} but tensor dimension is {n}")
        for name, idx in (("s", part.s_idx), ("t", part.sbar_idx)):
            mask = _tuple_mask(n, m, idx).ravel()
            extra[f"r_{name}"] = flat[:, mask].sum(axis=1)
            extra[f"r_{name}_bar"] = flat[:, ~mask].sum(axis=1)
    return RowSums(diag=t.diagonal(), big_r=big_r, r=r, pure=pure, **extra)


@dataclass(frozen=True)
class RowAggregates:
    """Row sums for one 1-based row ``i`` relative to a partition."""

    i: int
    big_r: float
    r: float
    r_delta_s: float
    r_delta_s_bar: float
    pure: tuple[float, ...]

    def r_minus_j(self, j: int) -> float:
        """r_i^j = r_i - |a_{ij...j}| for 1-based ``j != i``."""
        if j == self.i or not 1 <= j <= len(self.pure):
            raise IndexOutOfRange(f"j={j} must differ from i={self.i} and lie in 1..{len(self.pure)}")
        return self.r - self.pure[j - 1]


def row_aggregates(t: Tensor, i: int, part: SubsetPartition) -> RowAggregates:
    if not 1 <= i <= t.dim:
        raise IndexOutOfRange(f"row {i} outside 1..{t.dim}")
    rs = row_sums(t, part)
    k = i - 1
    return RowAggregates(
        i=i,
        big_r=float(rs.big_r[k]),
        r=float(rs.r[k]),
        r_delta_s=float(rs.r_s[k]),
        r_delta_s_bar=float(rs.r_s_bar[k]),
        pure=tuple(float(v) for v in rs.pure[k]),
    )


@dataclass(frozen=True)
class Classification:
    nonnegative: bool
    z_tensor: bool
    symmetric: bool
    positive_diagonal: bool

    def as_dict(self) -> dict:
        return {
            "nonnegative": self.nonnegative,
            "z_tensor": self.z_tensor,
            "symmetric": self.symmetric,
            "positive_diagonal": self.positive_diagonal,
        }


def is_nonnegative(t: Tensor) -> bool:
    return bool(np.all(t.data >= 0))


def is_z_tensor(t: Tensor) -> bool:
    off = t.data.copy()
    off[(np.arange(t.dim),) * t.order] = 0.0
    return bool(np.all(off <= 0))


def is_symmetric(t: Tensor) -> bool:
    """Compare every entry with the entry at its sorted multi-index."""
    shape = t.data.shape
    idx = np.indices(shape).reshape(t.order, -1)
    rep = np.sort(idx, axis=0)
    flat = t.data.ravel()
    return bool(
        np.array_equal(flat[np.ravel_multi_index(idx, shape)], flat[np.ravel_multi_index(rep, shape)])
    )


def classify(t: Tensor) -> Classification:
    return Classification(
        nonnegative=is_nonnegative(t),
        z_tensor=is_z_tensor(t),
        symmetric=is_symmetric(t),
        positive_diagonal=bool(np.all(t.diagonal() > 0)),
    )


def representation_digraph(t: Tensor) -> np.ndarray:
    """Adjacency matrix with ``adj[i, j]`` when row i has a nonzero entry involving j."""
    n, m = t.dim, t.order
    nz = t.data != 0
    adj = np.zeros((n, n), dtype=bool)
    for axis in range(1, m):
        others = tuple(k for k in range(1, m) if k != axis)
        adj |= nz.any(axis=others) if others else nz
    np.fill_diagonal(adj, False)
    return adj


def strongly_connected_components(adj: np.ndarray) -> list[list[int]]:
    """Tarjan's algorithm, iterative, on a dense boolean adjacency matrix."""
    n = adj.shape[0]
    succ = [np.flatnonzero(adj[v]).tolist() for v in range(n)]
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pos = work.pop()
            if pos == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            for k in range(pos, len(succ[v])):
                w = succ[v][k]
                if index[w] == -1:
                    work.append((v, k + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comps


def is_weakly_irreducible(t: Tensor) -> bool:
    return len(strongly_connected_components(representation_digraph(t))) == 1


def is_irreducible(t: Tensor) -> bool:
    """Exhaustive search for a reducing index set J (bitmask over subsets).

    Row i blocks J when every nonzero a_{i i2...im} has some i_k in J, i.e.
    no nonzero tuple avoids J entirely.
    """
    n, m = t.dim, t.order
    if n > MAX_DIM_IRREDUCIBLE:
        raise DimensionTooLargeForExhaustiveCheck(
            f"irreducibility check enumerates 2**n subsets; n={n} exceeds {MAX_DIM_IRREDUCIBLE}"
        )
    weights = 1 << np.arange(n)
    supports = []
    for i in range(n):
        tuples = np.argwhere(t.data[i] != 0)
        masks = {int(np.bitwise_or.reduce(weights[row])) for row in tuples} if len(tuples) else set()
        supports.append(sorted(masks))
    for J in range(1, (1 << n) - 1):
        if all(
            all(mask & J for mask in supports[i]) for i in range(n) if J >> i & 1
        ):
            return False
    return True


@dataclass(frozen=True)
class MTensorSplit:
    """A = s*I - B with B entrywise nonnegative."""

    s: float
    b: Tensor

    def reconstruct(self) -> Tensor:
        return Tensor(Tensor.unit(self.b.order, self.b.dim, self.s).data - self.b.data)


def m_tensor_split(t: Tensor) -> MTensorSplit:
    if not is_z_tensor(t):
        raise NotZTensor("tensor has a positive off-diagonal entry")
    diag = t.diagonal()
    s = float(diag.max())
    if s <= 0:
        raise PreconditionViolated("Z-tensor split needs at least one positive diagonal entry")
    b = -t.data.copy()
    b[(np.arange(t.dim),) * t.order] += s
    # exact: s - a_ii >= 0 for the diagonal, -a >= 0 off it
    return MTensorSplit(s=s, b=Tensor(b))
