"""Plain-text configuration files for the 2D cavity cases.

``key = value`` lines grouped under bracketed section headers; the five
sections and their keys map one-to-one onto :class:`SimConfig`:

* ``[grid]`` nx, ny, lx, ly
* ``[time]`` dt, n_steps, inner_iterations
* ``[material]`` viscosity_model (mushy | sharp_jump), mu_liquid,
  t_freeze, jump_factor, mu_cap, thermal_diffusivity, buoyancy_coeff,
  t_ref, initial_temp
* ``[boundary]`` right_wall (robin | dirichlet), h, t_ambient, t_cold,
  wall_tangential (no_slip | free_slip)
* ``[output]`` snap_every

Every key is optional (defaults apply); unknown sections or keys are
format errors.
"""

from __future__ import annotations

import configparser

from ..errors import FormatError
from ..grids import StaggeredGrid2D
from .model import CoolingWall, SimConfig, ViscosityModel

_INT_KEYS = {"nx", "ny", "n_steps", "inner_iterations", "snap_every"}
_STR_KEYS = {"viscosity_model", "right_wall", "wall_tangential"}

_SCHEMA = {
    "grid": ("nx", "ny", "lx", "ly"),
    "time": ("dt", "n_steps", "inner_iterations"),
    "material": (
        "viscosity_model",
        "mu_liquid",
        "t_freeze",
        "jump_factor",
        "mu_cap",
        "thermal_diffusivity",
        "buoyancy_coeff",
        "t_ref",
        "initial_temp",
    ),
    "boundary": ("right_wall", "h", "t_ambient", "t_cold", "wall_tangential"),
    "output": ("snap_every",),
}


def parse_config_text(text: str, base: SimConfig | None = None) -> SimConfig:
    """Build a :class:`SimConfig` from config-file text.

    Values override the corresponding fields of ``base`` (package
    defaults when omitted).
    """
    parser = configparser.ConfigParser(delimiters=("=",), interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise FormatError(f"malformed config file: {exc}") from exc

    values: dict[str, object] = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise FormatError(
                f"unknown section [{section}]; expected one of {sorted(_SCHEMA)}"
            )
        for key, raw in parser.items(section):
            if key not in _SCHEMA[section]:
                raise FormatError(f"unknown key {key!r} in section [{section}]")
            try:
                if key in _STR_KEYS:
                    values[key] = raw.strip()
                elif key in _INT_KEYS:
                    values[key] = int(raw)
                else:
                    values[key] = float(raw)
            except ValueError as exc:
                raise FormatError(f"bad value for {key!r}: {raw!r}") from exc

    base = SimConfig() if base is None else base
    grid = StaggeredGrid2D(
        nx=int(values.get("nx", base.grid.nx)),
        ny=int(values.get("ny", base.grid.ny)),
        lx=float(values.get("lx", base.grid.lx)),
        ly=float(values.get("ly", base.grid.ly)),
    )
    viscosity = ViscosityModel(
        kind=str(values.get("viscosity_model", base.viscosity.kind)),
        mu_liquid=float(values.get("mu_liquid", base.viscosity.mu_liquid)),
        t_freeze=float(values.get("t_freeze", base.viscosity.t_freeze)),
        jump_factor=float(values.get("jump_factor", base.viscosity.jump_factor)),
        mu_cap=float(values["mu_cap"]) if "mu_cap" in values else base.viscosity.mu_cap,
    )
    wall = CoolingWall(
        kind=str(values.get("right_wall", base.right_wall.kind)),
        h=float(values.get("h", base.right_wall.h)),
        t_ambient=float(values.get("t_ambient", base.right_wall.t_ambient)),
        t_cold=float(values.get("t_cold", base.right_wall.t_cold)),
    )
    return SimConfig(
        grid=grid,
        dt=float(values.get("dt", base.dt)),
        n_steps=int(values.get("n_steps", base.n_steps)),
        snap_every=int(values.get("snap_every", base.snap_every)),
        viscosity=viscosity,
        buoyancy_coeff=float(values.get("buoyancy_coeff", base.buoyancy_coeff)),
        t_ref=float(values.get("t_ref", base.t_ref)),
        thermal_diffusivity=float(values.get("thermal_diffusivity", base.thermal_diffusivity)),
        initial_temp=float(values.get("initial_temp", base.initial_temp)),
        right_wall=wall,
        inner_iterations=int(values.get("inner_iterations", base.inner_iterations)),
        wall_tangential=str(values.get("wall_tangential", base.wall_tangential)),
    )


def read_config(path, base: SimConfig | None = None) -> SimConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read(), base=base)


def write_config(cfg: SimConfig, path) -> None:
    """Write the full configuration (inverse of :func:`read_config`)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(config_text(cfg))


def config_text(cfg: SimConfig) -> str:
    lines = [
        "[grid]",
        f"nx = {cfg.grid.nx}",
        f"ny = {cfg.grid.ny}",
        f"lx = {cfg.grid.lx!r}",
        f"ly = {cfg.grid.ly!r}",
        "",
        "[time]",
        f"dt = {cfg.dt!r}",
        f"n_steps = {cfg.n_steps}",
        f"inner_iterations = {cfg.inner_iterations}",
        "",
        "[material]",
        f"viscosity_model = {cfg.viscosity.kind}",
        f"mu_liquid = {cfg.viscosity.mu_liquid!r}",
        f"t_freeze = {cfg.viscosity.t_freeze!r}",
        f"jump_factor = {cfg.viscosity.jump_factor!r}",
        f"mu_cap = {cfg.viscosity.mu_cap!r}",
        f"thermal_diffusivity = {cfg.thermal_diffusivity!r}",
        f"buoyancy_coeff = {cfg.buoyancy_coeff!r}",
        f"t_ref = {cfg.t_ref!r}",
        f"initial_temp = {cfg.initial_temp!r}",
        "",
        "[boundary]",
        f"right_wall = {cfg.right_wall.kind}",
        f"h = {cfg.right_wall.h!r}",
        f"t_ambient = {cfg.right_wall.t_ambient!r}",
        f"t_cold = {cfg.right_wall.t_cold!r}",
        f"wall_tangential = {cfg.wall_tangential}",
        "",
        "[output]",
        f"snap_every = {cfg.snap_every}",
        "",
    ]
    return "\n".join(lines)
