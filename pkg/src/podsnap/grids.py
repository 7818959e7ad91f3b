"""Structured grids: 1D node grids and the 2D staggered (MAC) layout."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError


@dataclass(frozen=True)
class Grid1D:
    """Uniform 1D grid of ``n_nodes`` nodes spanning [x_min, x_max]."""

    n_nodes: int
    x_min: float = 0.0
    x_max: float = 1.0

    def __post_init__(self):
        if self.n_nodes < 2:
            raise ArgumentError(f"need at least 2 nodes, got {self.n_nodes}")
        if not self.x_max > self.x_min:
            raise ArgumentError(f"x_max must exceed x_min, got [{self.x_min}, {self.x_max}]")

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.n_nodes - 1)

    def nodes(self) -> np.ndarray:
        """Node coordinates x_i = x_min + i * spacing."""
        return np.linspace(self.x_min, self.x_max, self.n_nodes)


@dataclass(frozen=True)
class StaggeredGrid2D:
    """MAC-staggered layout on a rectangle of ``nx`` x ``ny`` cells.

    Pressure and temperature live at cell centers (shape ``(ny, nx)``,
    row index along y), the x-velocity u at vertical faces
    (``(ny, nx + 1)``), and the y-velocity v at horizontal faces
    (``(ny + 1, nx)``).
    """

    nx: int
    ny: int
    lx: float = 1.0
    ly: float = 1.0

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ArgumentError(f"need at least 2x2 cells, got {self.nx}x{self.ny}")
        if self.lx <= 0 or self.ly <= 0:
            raise ArgumentError("domain extents must be positive")

    @property
    def dx(self) -> float:
        return self.lx / self.nx

    @property
    def dy(self) -> float:
        return self.ly / self.ny

    @property
    def u_shape(self) -> tuple[int, int]:
        return (self.ny, self.nx + 1)

    @property
    def v_shape(self) -> tuple[int, int]:
        return (self.ny + 1, self.nx)

    @property
    def cell_shape(self) -> tuple[int, int]:
        return (self.ny, self.nx)

    @property
    def n_u(self) -> int:
        return self.ny * (self.nx + 1)

    @property
    def n_v(self) -> int:
        return (self.ny + 1) * self.nx

    @property
    def n_cells(self) -> int:
        return self.ny * self.nx

    def cell_centers(self) -> tuple[np.ndarray, np.ndarray]:
        """(x, y) coordinates of cell centers as 1D arrays."""
        x = (np.arange(self.nx) + 0.5) * self.dx
        y = (np.arange(self.ny) + 0.5) * self.dy
        return x, y

    def u_locations(self) -> tuple[np.ndarray, np.ndarray]:
        """(x, y) coordinates of u faces."""
        return np.arange(self.nx + 1) * self.dx, (np.arange(self.ny) + 0.5) * self.dy

    def v_locations(self) -> tuple[np.ndarray, np.ndarray]:
        """(x, y) coordinates of v faces."""
        return (np.arange(self.nx) + 0.5) * self.dx, np.arange(self.ny + 1) * self.dy
