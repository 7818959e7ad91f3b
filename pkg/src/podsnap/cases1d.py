"""1D snapshot generators: heat diffusion and advected step families.

Three families of snapshot matrices whose singular-value decay spans
the smooth-to-discontinuous range:

* :func:`solve_heat1d` -- homogeneous-Dirichlet heat equation started
  from a rectangle pulse (fast, near-exponential decay);
* :func:`gen_sigmoid` -- step front ``1 / (1 + exp(-k (t - x)))``
  advected across the unit interval, with tunable steepness ``k``
  (decay slows as ``k`` grows);
* :func:`gen_advected_jump` -- the discontinuous limit ``u = 1 if
  x <= t else 0`` (slow, algebraic decay).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.special import expit

from .errors import ArgumentError, DataError, StabilityError
from .grids import Grid1D
from .snapshots import FieldLayout, SnapshotMatrix, assemble

# Steepness defaults for the two sigmoid variants: "steep" is visually
# close to a discontinuity at 256-node resolution, "stretched" spreads
# the front over a quarter of the domain.
STEEP_K = 100.0
STRETCHED_K = 15.0


@dataclass(frozen=True)
class InitialCondition1D:
    """Rectangle pulse or directly sampled initial values.

    The rectangle is ``height`` on ``[left, right]`` and zero outside;
    its support must lie strictly inside the domain so the homogeneous
    Dirichlet boundary holds at t = 0.
    """

    kind: str = "rectangle"
    left: float = 0.25
    right: float = 0.75
    height: float = 1.0
    values: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ("rectangle", "custom"):
            raise ArgumentError(f"unknown initial condition kind {self.kind!r}")
        if self.kind == "rectangle":
            if not (self.left < self.right):
                raise ArgumentError("rectangle needs left < right")
            if not np.isfinite(self.height):
                raise DataError("rectangle height must be finite")
        elif self.values is None:
            raise ArgumentError("custom initial condition needs sampled values")

    def sample(self, grid: Grid1D) -> np.ndarray:
        x = grid.nodes()
        if self.kind == "rectangle":
            if not (grid.x_min < self.left and self.right < grid.x_max):
                raise ArgumentError(
                    f"rectangle [{self.left}, {self.right}] must lie strictly inside "
                    f"({grid.x_min}, {grid.x_max})"
                )
            return np.where((x >= self.left) & (x <= self.right), self.height, 0.0)
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != x.shape:
            raise ArgumentError(
                f"custom values have length {values.size}, grid has {x.size} nodes"
            )
        if not np.all(np.isfinite(values)):
            raise DataError("custom initial condition contains non-finite values")
        if values[0] != 0.0 or values[-1] != 0.0:
            raise DataError("custom initial condition must vanish on the boundary")
        return values.copy()


@dataclass(frozen=True)
class Heat1DConfig:
    """Heat equation run: du/dt = alpha * d2u/dx2, u = 0 on the boundary.

    The explicit scheme is only accepted when dt satisfies its stability
    bound dt <= dx^2 / (2 alpha); the implicit default has no such limit.
    """

    alpha: float = 1.0
    dt: float = 1e-3
    grid: Grid1D = field(default_factory=lambda: Grid1D(256))
    n_snaps: int = 128
    ic: InitialCondition1D = field(default_factory=InitialCondition1D)
    scheme: str = "implicit_euler"

    def __post_init__(self):
        if self.alpha <= 0:
            raise ArgumentError(f"alpha must be positive, got {self.alpha}")
        if self.dt <= 0:
            raise ArgumentError(f"dt must be positive, got {self.dt}")
        if self.n_snaps < 1:
            raise ArgumentError(f"n_snaps must be at least 1, got {self.n_snaps}")
        if self.scheme not in ("explicit_euler", "implicit_euler"):
            raise ArgumentError(f"unknown scheme {self.scheme!r}")
        if self.scheme == "explicit_euler":
            limit = self.grid.spacing**2 / (2.0 * self.alpha)
            if self.dt > limit:
                raise StabilityError(
                    f"explicit Euler needs dt <= dx^2 / (2 alpha) = {limit:.3e}, "
                    f"got dt = {self.dt:.3e}"
                )


def solve_heat1d(cfg: Heat1DConfig) -> SnapshotMatrix:
    """March the heat equation and collect every step as a column.

    Column j is the solution after j steps (column 0 is the initial
    condition), labelled with t_j = j * dt. Both boundary rows are
    exactly zero in every column.
    """
    n = cfg.grid.n_nodes
    dx = cfg.grid.spacing
    r = cfg.alpha * cfg.dt / dx**2
    u = cfg.ic.sample(cfg.grid)
    u[0] = u[-1] = 0.0
    columns = [u.copy()]

    if cfg.scheme == "implicit_euler":
        # (I + r * tridiag(-1, 2, -1)) u_new = u_old on interior nodes
        n_int = n - 2
        bands = np.zeros((3, n_int))
        bands[0, 1:] = -r
        bands[1, :] = 1.0 + 2.0 * r
        bands[2, :-1] = -r
        for _ in range(cfg.n_snaps - 1):
            u[1:-1] = scipy.linalg.solve_banded((1, 1), bands, u[1:-1])
            columns.append(u.copy())
    else:
        for _ in range(cfg.n_snaps - 1):
            u[1:-1] += r * (u[2:] - 2.0 * u[1:-1] + u[:-2])
            columns.append(u.copy())

    labels = cfg.dt * np.arange(cfg.n_snaps)
    layout = FieldLayout.single("u", n)
    return assemble(columns, layout, labels)


def _advection_times(n_snaps: int) -> np.ndarray:
    if n_snaps < 2:
        raise ArgumentError(f"need at least 2 snapshots, got {n_snaps}")
    return np.arange(n_snaps) / (n_snaps - 1)


def gen_advected_jump(grid: Grid1D, n_snaps: int = 128) -> SnapshotMatrix:
    """Advected discontinuity: entry (i, j) = 1 if x_i <= t_j else 0.

    The front positions t_j sample [0, 1] uniformly, so the grid must
    span exactly the unit interval.
    """
    if grid.x_min != 0.0 or grid.x_max != 1.0:
        raise ArgumentError(
            f"advected jump is defined on [0, 1], grid spans [{grid.x_min}, {grid.x_max}]"
        )
    t = _advection_times(n_snaps)
    x = grid.nodes()
    data = (x[:, None] <= t[None, :]).astype(np.float64)
    return SnapshotMatrix(data, FieldLayout.single("u", grid.n_nodes), t)


def gen_sigmoid(grid: Grid1D, n_snaps: int = 128, k: float = STEEP_K) -> SnapshotMatrix:
    """Advected smooth step: entry (i, j) = 1 / (1 + exp(-k (t_j - x_i))).

    ``k`` is the front steepness; the advected jump is the k -> infinity
    limit. Saturation is handled by the numerically stable logistic, so
    any positive ``k`` is safe.
    """
    if k <= 0:
        raise ArgumentError(f"steepness must be positive, got {k}")
    t = _advection_times(n_snaps)
    x = grid.nodes()
    data = expit(k * (t[None, :] - x[:, None]))
    return SnapshotMatrix(data, FieldLayout.single("u", grid.n_nodes), t)
