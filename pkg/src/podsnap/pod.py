"""Proper orthogonal decomposition of snapshot matrices.

Computes the SVD ``X = U S V^T`` of a snapshot matrix either directly or
via the method of snapshots (eigendecomposition of the small Gram matrix
``X^T X``), and provides energy-capture accounting, optimal truncation,
and per-field splitting of multi-quantity matrices.

"Energy" throughout is the cumulative sum of squared singular values
over their total; the spectrum normalization exposed to reports is
``sigma_i / sigma_1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ArgumentError,
    DataError,
    DegenerateSpectrumError,
    DimensionError,
    NumericalError,
)
from .snapshots import FieldLayout, SnapshotMatrix

# Gram eigenvalues below RANK_CLAMP * lambda_max are round-off; clamp to
# zero before the square root so near-null directions never go negative.
RANK_CLAMP = 1e-14

ORTHO_TOL = 1e-10


@dataclass(frozen=True)
class PodSpectrum:
    """Non-increasing singular values of one snapshot matrix."""

    sigma: np.ndarray
    source_label: str = ""

    def __post_init__(self):
        sigma = np.asarray(self.sigma, dtype=np.float64)
        sigma.setflags(write=False)
        object.__setattr__(self, "sigma", sigma)
        if sigma.ndim != 1 or sigma.size < 1:
            raise DimensionError("spectrum needs at least one value")
        if not np.all(np.isfinite(sigma)):
            raise DataError("spectrum contains non-finite values")
        if np.any(sigma < 0):
            raise DataError("singular values must be non-negative")
        if np.any(np.diff(sigma) > 0):
            raise DataError("singular values must be non-increasing")

    def __len__(self) -> int:
        return self.sigma.size


@dataclass(frozen=True)
class EnergyReport:
    """Minimal mode count reaching an energy-capture threshold."""

    threshold: float
    modes_needed: int
    cumulative: np.ndarray = field(repr=False)


class PodBasis:
    """Left singular vectors, scaled coefficients, and the spectrum.

    ``modes`` has orthonormal columns; ``coeffs`` holds the rows of
    ``S V^T``, so ``modes @ coeffs`` reconstructs the snapshot matrix.
    The spectrum may be longer than the mode count when trailing
    singular values were clamped to zero (method of snapshots).
    """

    def __init__(self, modes, coeffs, spectrum: PodSpectrum):
        modes = np.asarray(modes, dtype=np.float64)
        coeffs = np.asarray(coeffs, dtype=np.float64)
        if modes.ndim != 2 or coeffs.ndim != 2:
            raise DimensionError("modes and coeffs must be 2D")
        r = modes.shape[1]
        if coeffs.shape[0] != r:
            raise DimensionError(
                f"{r} modes but {coeffs.shape[0]} coefficient rows"
            )
        if r > min(modes.shape[0], coeffs.shape[1]):
            raise DimensionError("more modes than min(n_dof, n_snaps)")
        if len(spectrum) < r:
            raise DimensionError("spectrum shorter than mode count")
        gram_defect = modes.T @ modes - np.eye(r)
        defect = float(np.linalg.norm(gram_defect))
        if defect > ORTHO_TOL:
            raise NumericalError(
                f"mode columns are not orthonormal: ||U^T U - I||_F = {defect:.3e}"
            )
        modes.setflags(write=False)
        coeffs.setflags(write=False)
        self.modes = modes
        self.coeffs = coeffs
        self.spectrum = spectrum

    @property
    def n_modes(self) -> int:
        return self.modes.shape[1]

    @property
    def n_dof(self) -> int:
        return self.modes.shape[0]

    @property
    def n_snaps(self) -> int:
        return self.coeffs.shape[1]

    def reconstruct(self) -> np.ndarray:
        return self.modes @ self.coeffs


def _fix_signs(modes: np.ndarray, coeffs: np.ndarray) -> None:
    """Make each mode's largest-magnitude entry positive (in place)."""
    for k in range(modes.shape[1]):
        pivot = np.argmax(np.abs(modes[:, k]))
        if modes[pivot, k] < 0:
            modes[:, k] *= -1.0
            coeffs[k, :] *= -1.0


def decompose(m: SnapshotMatrix, method: str = "auto") -> PodBasis:
    """POD of a snapshot matrix.

    Parameters
    ----------
    m : SnapshotMatrix
    method : {"auto", "direct", "method_of_snapshots"}
        ``direct`` runs a dense thin SVD. ``method_of_snapshots``
        solves the n_snaps x n_snaps Gram eigenproblem and lifts the
        eigenvectors, which is much cheaper when n_dof >> n_snaps.
        ``auto`` picks the method of snapshots when n_dof > 4 * n_snaps.

    Both methods share a deterministic sign convention (largest-
    magnitude entry of each mode positive), so they agree mode by mode.
    """
    if method == "auto":
        method = "method_of_snapshots" if m.n_dof > 4 * m.n_snaps else "direct"
    if method not in ("direct", "method_of_snapshots"):
        raise ArgumentError(f"unknown method {method!r}")
    x = np.asarray(m.data)

    if method == "direct":
        try:
            modes, sigma, vt = np.linalg.svd(x, full_matrices=False)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"SVD did not converge: {exc}") from exc
        coeffs = sigma[:, None] * vt
        modes = np.ascontiguousarray(modes)
        _fix_signs(modes, coeffs)
        return PodBasis(modes, coeffs, PodSpectrum(sigma))

    try:
        lam, vecs = np.linalg.eigh(x.T @ x)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Gram eigenproblem did not converge: {exc}") from exc
    order = np.argsort(lam)[::-1]
    lam = lam[order]
    vecs = vecs[:, order]
    lam[lam < RANK_CLAMP * max(lam[0], 0.0)] = 0.0
    lam[lam < 0.0] = 0.0
    sigma = np.sqrt(lam)[: min(m.n_dof, m.n_snaps)]
    positive = sigma > 0
    n_pos = int(np.count_nonzero(positive))
    if n_pos == 0:
        raise DegenerateSpectrumError("matrix is numerically zero")
    v_pos = vecs[:, :n_pos]
    lifted = (x @ v_pos) / sigma[:n_pos]
    # lifting loses orthogonality near the clamp level; a QR pass
    # restores it without rotating well-separated modes
    modes, r_factor = np.linalg.qr(lifted)
    flip = np.where(np.diag(r_factor) < 0, -1.0, 1.0)
    modes = modes * flip
    coeffs = sigma[:n_pos, None] * v_pos.T
    _fix_signs(modes, coeffs)
    return PodBasis(modes, coeffs, PodSpectrum(sigma))


def normalized_spectrum(s: PodSpectrum) -> np.ndarray:
    """Decay normalized to the leading value, ``sigma_i / sigma_1``."""
    if s.sigma[0] <= 0.0:
        raise DegenerateSpectrumError("cannot normalize an all-zero spectrum")
    return s.sigma / s.sigma[0]


def modes_for_energy(s: PodSpectrum, threshold: float) -> EnergyReport:
    """Minimal N with ``sum_{i<=N} sigma_i^2 / sum sigma_i^2 >= threshold``."""
    if not 0.0 < threshold <= 1.0:
        raise ArgumentError(f"threshold must be in (0, 1], got {threshold}")
    energy = np.cumsum(s.sigma**2)
    total = energy[-1]
    if total <= 0.0:
        raise DegenerateSpectrumError("all-zero spectrum has no energy")
    cumulative = energy / total
    modes_needed = int(np.searchsorted(cumulative, threshold, side="left")) + 1
    modes_needed = min(modes_needed, len(s))
    return EnergyReport(threshold, modes_needed, cumulative)


def truncate(b: PodBasis, r: int) -> PodBasis:
    """Keep the first r modes (the optimal rank-r approximation)."""
    if not 1 <= r <= b.n_modes:
        raise ArgumentError(f"rank {r} outside [1, {b.n_modes}]")
    return PodBasis(
        b.modes[:, :r],
        b.coeffs[:r, :],
        PodSpectrum(b.spectrum.sigma[:r], b.spectrum.source_label),
    )


def component_split(m: SnapshotMatrix) -> dict[str, SnapshotMatrix]:
    """One single-segment snapshot matrix per layout segment.

    Row order and column labels are preserved; vertically stacking the
    results in layout order reproduces the input exactly.
    """
    out = {}
    for name, offset, count in m.layout.segments:
        sub = m.data[offset : offset + count, :]
        out[name] = SnapshotMatrix(sub, FieldLayout.single(name, count), m.column_labels)
    return out


def write_spectrum_csv(s: PodSpectrum, path) -> None:
    """Export ``index,sigma,sigma_norm,cumulative_energy`` rows.

    Indices start at 1; floats carry 17 significant digits so the file
    round-trips float64 exactly.
    """
    norm = normalized_spectrum(s)
    cumulative = modes_for_energy(s, 1.0).cumulative
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("index,sigma,sigma_norm,cumulative_energy\n")
        for i in range(len(s)):
            fh.write(
                f"{i + 1},{s.sigma[i]:.17g},{norm[i]:.17g},{cumulative[i]:.17g}\n"
            )


def read_spectrum_csv(path, source_label: str = "") -> PodSpectrum:
    """Parse a spectrum CSV written by :func:`write_spectrum_csv`."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "index,sigma,sigma_norm,cumulative_energy":
            raise DataError(f"unexpected spectrum CSV header: {header!r}")
        sigma = []
        for line_no, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            parts = line.split(",")
            if len(parts) != 4:
                raise DataError(f"line {line_no}: expected 4 fields, got {len(parts)}")
            sigma.append(float(parts[1]))
    if not sigma:
        raise DataError("spectrum CSV has no data rows")
    return PodSpectrum(np.asarray(sigma), source_label)
