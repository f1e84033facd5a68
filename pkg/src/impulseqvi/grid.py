"""Rectangular node-centered grids, scalar node fields, difference quotients, norms.

Everything downstream (intervention operator, obstacle solves, regularity
scans) works on these two value types.  Grids are axis-aligned boxes in 1 to 3
dimensions with at least 3 nodes per axis; fields are one finite float64 per
node, immutable after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GridError, GridMismatchError

__all__ = [
    "Grid",
    "GridField",
    "second_difference",
    "discrete_laplacian",
    "sup_norm",
    "sup_dist",
    "write_field_csv",
    "read_field_csv",
]


@dataclass(frozen=True)
class Grid:
    """Axis-aligned box [lo_1,hi_1] x ... x [lo_n,hi_n] with m_i nodes per axis.

    Node (i_1,...,i_n) sits at lo_k + i_k * h_k with h_k = (hi_k-lo_k)/(m_k-1).
    Boundary nodes are those with any index at 0 or m_k-1.
    """

    bounds: tuple[tuple[float, float], ...]
    counts: tuple[int, ...]

    def __post_init__(self):
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        counts = tuple(int(m) for m in self.counts)
        object.__setattr__(self, "bounds", bounds)
        object.__setattr__(self, "counts", counts)
        n = len(bounds)
        if not 1 <= n <= 3:
            raise GridError(f"dimension must be 1..3, got {n}")
        if len(counts) != n:
            raise GridError(f"{n} bounds but {len(counts)} counts")
        for k, ((lo, hi), m) in enumerate(zip(bounds, counts)):
            if m < 3:
                raise GridError(f"axis {k}: need at least 3 nodes, got {m}")
            if not (math.isfinite(lo) and math.isfinite(hi) and hi > lo):
                raise GridError(f"axis {k}: bad interval [{lo}, {hi}]")

    @property
    def n(self) -> int:
        return len(self.counts)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.counts

    @property
    def num_nodes(self) -> int:
        return int(np.prod(self.counts))

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple((hi - lo) / (m - 1) for (lo, hi), m in zip(self.bounds, self.counts))

    def axis_coords(self, k: int) -> np.ndarray:
        lo, hi = self.bounds[k]
        return np.linspace(lo, hi, self.counts[k])

    def meshgrid(self) -> list[np.ndarray]:
        """Coordinate arrays of shape `counts`, one per axis ('ij' indexing)."""
        return list(np.meshgrid(*(self.axis_coords(k) for k in range(self.n)), indexing="ij"))

    def node_coords(self, index) -> np.ndarray:
        self._check_index(index)
        return np.array([lo + i * h for (lo, _), i, h in zip(self.bounds, index, self.spacing)])

    def contains_index(self, index) -> bool:
        return len(index) == self.n and all(0 <= i < m for i, m in zip(index, self.counts))

    def is_interior(self, index) -> bool:
        return all(1 <= i < m - 1 for i, m in zip(index, self.counts))

    def _check_index(self, index):
        if not self.contains_index(index):
            raise GridError(f"index {tuple(index)} out of range for counts {self.counts}")

    def boundary_mask(self) -> np.ndarray:
        """Boolean array over nodes, True where any index touches a face."""
        mask = np.zeros(self.counts, dtype=bool)
        for k in range(self.n):
            sl_lo = tuple(0 if a == k else slice(None) for a in range(self.n))
            sl_hi = tuple(-1 if a == k else slice(None) for a in range(self.n))
            mask[sl_lo] = True
            mask[sl_hi] = True
        return mask

    def interior_mask(self) -> np.ndarray:
        return ~self.boundary_mask()

    def refine(self) -> "Grid":
        """Halve every spacing (m -> 2m-1); coarse nodes embed exactly."""
        return Grid(self.bounds, tuple(2 * m - 1 for m in self.counts))

    def coarsen(self) -> "Grid":
        """Inverse of refine; requires every count odd."""
        for m in self.counts:
            if m % 2 == 0 or (m - 1) // 2 + 1 < 3:
                raise GridError(f"counts {self.counts} cannot be coarsened")
        return Grid(self.bounds, tuple((m - 1) // 2 + 1 for m in self.counts))


@dataclass(frozen=True, eq=False)
class GridField:
    """One finite float64 per grid node, shaped like the grid; read-only."""

    grid: Grid
    values: np.ndarray
    name: str = field(default="", compare=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.shape != self.grid.shape:
            raise GridError(f"values shape {vals.shape} != grid shape {self.grid.shape}")
        if not np.all(np.isfinite(vals)):
            bad = np.argwhere(~np.isfinite(vals))[0]
            raise GridError(f"non-finite value at node {tuple(int(i) for i in bad)}")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, grid: Grid, fn, name: str = "") -> "GridField":
        """Sample fn(x_1,...,x_n) (vectorized over coordinate arrays) at nodes."""
        coords = grid.meshgrid()
        vals = np.asarray(fn(*coords), dtype=np.float64)
        vals = np.broadcast_to(vals, grid.shape)
        return cls(grid, vals, name)

    @classmethod
    def from_flat(cls, grid: Grid, flat, name: str = "") -> "GridField":
        return cls(grid, np.asarray(flat, dtype=np.float64).reshape(grid.shape), name)

    @property
    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)

    def with_values(self, values, name=None) -> "GridField":
        return GridField(self.grid, values, self.name if name is None else name)


def _same_grid(u: GridField, v: GridField):
    if u.grid != v.grid:
        raise GridMismatchError(f"grids differ: {u.grid.counts} vs {v.grid.counts}")


def second_difference(u: GridField, x, h) -> float:
    """Second incremental quotient (u(x+h) + u(x-h) - 2u(x)) / |h|^2.

    h is an integer offset (components may be negative); |h| is the Euclidean
    length of the physical displacement (h_k * spacing_k per axis).  Exact for
    sampled quadratics; annihilates affine functions.
    """
    g = u.grid
    x = tuple(int(i) for i in x)
    h = tuple(int(d) for d in h)
    if len(h) != g.n or all(d == 0 for d in h):
        raise GridError(f"bad offset {h}")
    xp = tuple(i + d for i, d in zip(x, h))
    xm = tuple(i - d for i, d in zip(x, h))
    if not (g.contains_index(x) and g.contains_index(xp) and g.contains_index(xm)):
        raise GridError(f"stencil x={x}, h={h} leaves the grid")
    hsq = sum((d * s) ** 2 for d, s in zip(h, g.spacing))
    return (u.values[xp] + u.values[xm] - 2.0 * u.values[x]) / hsq


def discrete_laplacian(u: GridField, x) -> float:
    """Sum of axis-aligned unit-step second differences at an interior node."""
    g = u.grid
    x = tuple(int(i) for i in x)
    g._check_index(x)
    if not g.is_interior(x):
        raise GridError(f"node {x} is not interior")
    total = 0.0
    for k in range(g.n):
        e = tuple(1 if a == k else 0 for a in range(g.n))
        total += second_difference(u, x, e)
    return total


def laplacian_field(u: GridField) -> np.ndarray:
    """discrete_laplacian at every interior node, NaN on the boundary."""
    g = u.grid
    out = np.full(g.shape, np.nan)
    inner = tuple(slice(1, -1) for _ in range(g.n))
    acc = np.zeros_like(u.values[inner])
    for k in range(g.n):
        up = tuple(slice(2, None) if a == k else slice(1, -1) for a in range(g.n))
        dn = tuple(slice(0, -2) if a == k else slice(1, -1) for a in range(g.n))
        acc += (u.values[up] + u.values[dn] - 2.0 * u.values[inner]) / g.spacing[k] ** 2
    out[inner] = acc
    return out


def sup_norm(u: GridField) -> float:
    return float(np.max(np.abs(u.values)))


def sup_dist(u: GridField, v: GridField) -> float:
    _same_grid(u, v)
    return float(np.max(np.abs(u.values - v.values)))


# ---------------------------------------------------------------------------
# CSV dump format: one comment header line, then one row per node in row-major
# (last axis fastest) order: index tuple, physical coordinates, value.  Values
# are written with 17 significant digits, which round-trips float64 exactly.


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_field_csv(u: GridField, path) -> None:
    g = u.grid
    counts = ",".join(str(m) for m in g.counts)
    bounds = ",".join(f"{_fmt(lo)}:{_fmt(hi)}" for lo, hi in g.bounds)
    lines = [f"# grid n={g.n} counts={counts} bounds={bounds}"]
    coords = [c.reshape(-1) for c in g.meshgrid()]
    idx = [a.reshape(-1) for a in np.meshgrid(*(np.arange(m) for m in g.counts), indexing="ij")]
    vals = u.flat
    for r in range(g.num_nodes):
        parts = [str(int(idx[k][r])) for k in range(g.n)]
        parts += [_fmt(float(coords[k][r])) for k in range(g.n)]
        parts.append(_fmt(float(vals[r])))
        lines.append(",".join(parts))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_field_csv(path, name: str = "") -> GridField:
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("# grid "):
            raise GridError(f"{path}: missing grid header")
        fields = dict(part.split("=", 1) for part in header[len("# grid "):].split())
        n = int(fields["n"])
        counts = tuple(int(t) for t in fields["counts"].split(","))
        bounds = tuple(tuple(float(s) for s in t.split(":")) for t in fields["bounds"].split(","))
        if len(counts) != n or len(bounds) != n:
            raise GridError(f"{path}: inconsistent header")
        grid = Grid(bounds, counts)
        vals = np.empty(grid.num_nodes)
        r = 0
        for line in fh:
            line = line.strip()
            if not line:
                continue
            vals[r] = float(line.split(",")[-1])
            r += 1
        if r != grid.num_nodes:
            raise GridError(f"{path}: {r} rows for {grid.num_nodes} nodes")
    return GridField(grid, vals.reshape(grid.shape), name)
