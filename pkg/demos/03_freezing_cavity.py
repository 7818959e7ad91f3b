"""A unit square of melt freezing from the right wall, two ways.

The cavity starts as quiescent liquid at 700 degC; Robin cooling on the
right wall pulls it toward 550 degC. Below the 650 degC freezing point
viscosity rises and flow stops. The alloy (mushy) variant ramps
viscosity quadratically, so a partly-mobile mushy band sweeps the
cavity; the pure-metal variant jumps viscosity a million-fold within
one cell, a hard moving interface.

This demo runs both at a reduced 32 x 32 scale (about 15 s), shows the
freezing history, and compares how many modes each case needs: the
smooth mushy front is dramatically cheaper to compress.

Run:  python demos/03_freezing_cavity.py
"""

import dataclasses

import numpy as np

from podsnap import StaggeredGrid2D, decompose, modes_for_energy
from podsnap.pod import component_split
from podsnap.snapshots import matrix_from_array
from podsnap.solidify2d import default_mushy_config, default_pure_metal_config, run_case

small_grid = StaggeredGrid2D(32, 32)


def shrink(cfg):
    return dataclasses.replace(cfg, grid=small_grid, n_steps=600, snap_every=3)


def weighted_modes(matrix, threshold=0.9999):
    """Mode count on the full state with each field scaled to unit
    energy, so velocity, pressure, and temperature weigh equally."""
    blocks = [p.data / np.linalg.norm(p.data) for p in component_split(matrix).values()]
    spectrum = decompose(matrix_from_array(np.vstack(blocks))).spectrum
    return modes_for_energy(spectrum, threshold).modes_needed


results = {}
for label, cfg in (
    ("mushy alloy", shrink(default_mushy_config())),
    ("pure metal", shrink(default_pure_metal_config())),
):
    history = []
    matrix = run_case(cfg, observer=lambda s: history.append((s.time, s.temp)))
    print(f"--- {label} ({cfg.viscosity.kind}) ---")
    for time, temp in history[:: len(history) // 5]:
        frozen = np.mean(temp < cfg.viscosity.t_freeze)
        bar = "#" * int(40 * frozen)
        print(f"  t = {time:5.1f}  frozen {frozen:5.1%} |{bar:<40s}|")
    results[label] = weighted_modes(matrix)
    print(f"  modes for 99.99% energy (unit-weighted state): {results[label]}")
    print()

ratio = results["mushy alloy"] / results["pure metal"]
print(f"mushy / pure mode ratio = {ratio:.2f}")
print("The mushy zone smooths the velocity cutoff at the front, so the")
print("solution manifold stays nearly low-rank; the sharp interface does not.")
