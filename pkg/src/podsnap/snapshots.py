"""Snapshot matrices, row layouts, and the SNAP1 binary file format.

A snapshot matrix stores one discrete solution per column; rows are
degrees of freedom, grouped into named contiguous segments by a
:class:`FieldLayout` (e.g. ``u``/``v``/``p``/``T`` blocks of a coupled
solve). Matrices round-trip bit-exactly through :func:`write_snap` /
:func:`read_snap`.

SNAP1 format, little-endian, no padding:

* bytes 0-7: magic ASCII ``PODSNAP1``
* u32 n_dof, u32 n_snaps, u32 n_segments
* per segment: u16 name length, UTF-8 name, u32 row_offset, u32 row_count
* n_snaps f64 column labels
* n_dof * n_snaps f64 values, column-major
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import DataError, DimensionError, FormatError

MAGIC = b"PODSNAP1"


@dataclass(frozen=True)
class FieldLayout:
    """Ordered, contiguous partition of the row range into named segments."""

    segments: tuple[tuple[str, int, int], ...]

    def __post_init__(self):
        if not self.segments:
            raise DimensionError("layout needs at least one segment")
        names = [name for name, _, _ in self.segments]
        if len(set(names)) != len(names):
            raise DimensionError(f"duplicate field names in layout: {names}")
        expected = 0
        for name, offset, count in self.segments:
            if offset != expected:
                raise DimensionError(
                    f"segment {name!r} starts at row {offset}, expected {expected}"
                )
            if count < 1:
                raise DimensionError(f"segment {name!r} has row count {count}")
            expected = offset + count

    @classmethod
    def from_sizes(cls, sizes) -> "FieldLayout":
        """Build a layout from ``[(name, row_count), ...]`` pairs."""
        segments = []
        offset = 0
        for name, count in sizes:
            segments.append((str(name), offset, int(count)))
            offset += int(count)
        return cls(tuple(segments))

    @classmethod
    def single(cls, name: str, n_rows: int) -> "FieldLayout":
        return cls.from_sizes([(name, n_rows)])

    @property
    def n_rows(self) -> int:
        _, offset, count = self.segments[-1]
        return offset + count

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _, _ in self.segments)

    def rows(self, name: str) -> slice:
        """Row slice of the named segment."""
        for seg_name, offset, count in self.segments:
            if seg_name == name:
                return slice(offset, offset + count)
        raise KeyError(name)


class SnapshotMatrix:
    """Dense n_dof x n_snaps matrix of solution snapshots.

    Column j holds the snapshot at ``column_labels[j]`` (a time or
    parameter value). Data is float64 and immutable after construction.
    """

    def __init__(self, data, layout: FieldLayout, column_labels):
        data = np.ascontiguousarray(data, dtype=np.float64)
        labels = np.ascontiguousarray(column_labels, dtype=np.float64)
        if data.ndim != 2:
            raise DimensionError(f"data must be 2D, got shape {data.shape}")
        if data.shape[0] < 1 or data.shape[1] < 1:
            raise DimensionError(f"empty snapshot matrix: shape {data.shape}")
        if data.shape[0] != layout.n_rows:
            raise DimensionError(
                f"layout covers {layout.n_rows} rows but data has {data.shape[0]}"
            )
        if labels.shape != (data.shape[1],):
            raise DimensionError(
                f"{data.shape[1]} columns need {data.shape[1]} labels, got {labels.shape}"
            )
        if not np.all(np.isfinite(data)):
            raise DataError("snapshot matrix contains non-finite entries")
        if not np.all(np.isfinite(labels)):
            raise DataError("column labels contain non-finite entries")
        data.setflags(write=False)
        labels.setflags(write=False)
        self.data = data
        self.layout = layout
        self.column_labels = labels

    @property
    def n_dof(self) -> int:
        return self.data.shape[0]

    @property
    def n_snaps(self) -> int:
        return self.data.shape[1]

    def field(self, name: str) -> np.ndarray:
        """Rows of the named layout segment (read-only view)."""
        return self.data[self.layout.rows(name), :]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SnapshotMatrix):
            return NotImplemented
        return (
            self.layout == other.layout
            and np.array_equal(self.data, other.data)
            and np.array_equal(self.column_labels, other.column_labels)
        )


def assemble(columns, layout: FieldLayout, labels) -> SnapshotMatrix:
    """Stack flat solution vectors into a snapshot matrix.

    Parameters
    ----------
    columns : sequence of 1D arrays
        One snapshot per entry, each of length ``layout.n_rows``.
    layout : FieldLayout
        Row partition shared by every column.
    labels : sequence of float
        Strictly increasing time/parameter value per column.
    """
    cols = [np.asarray(c, dtype=np.float64).ravel() for c in columns]
    if not cols:
        raise DimensionError("need at least one column")
    for j, c in enumerate(cols):
        if c.shape[0] != layout.n_rows:
            raise DimensionError(
                f"column {j} has {c.shape[0]} rows, layout expects {layout.n_rows}"
            )
    labels = np.asarray(labels, dtype=np.float64)
    if labels.shape != (len(cols),):
        raise DimensionError(f"{len(cols)} columns need {len(cols)} labels")
    if np.any(np.diff(labels) <= 0):
        raise DataError("column labels must be strictly increasing")
    return SnapshotMatrix(np.column_stack(cols), layout, labels)


def matrix_from_array(data, name: str = "field", column_labels=None) -> SnapshotMatrix:
    """Wrap a plain 2D array as a single-segment snapshot matrix.

    Labels default to the column indices 0, 1, ....
    """
    data = np.asarray(data, dtype=np.float64)
    if data.ndim != 2:
        raise DimensionError(f"data must be 2D, got shape {data.shape}")
    if column_labels is None:
        column_labels = np.arange(data.shape[1], dtype=np.float64)
    return SnapshotMatrix(data, FieldLayout.single(name, data.shape[0]), column_labels)


def write_snap(m: SnapshotMatrix, path) -> None:
    """Write a snapshot matrix in SNAP1 format."""
    parts = [MAGIC]
    parts.append(struct.pack("<III", m.n_dof, m.n_snaps, len(m.layout.segments)))
    for name, offset, count in m.layout.segments:
        encoded = name.encode("utf-8")
        if len(encoded) > 0xFFFF:
            raise FormatError(f"field name too long to encode: {name!r}")
        parts.append(struct.pack("<H", len(encoded)))
        parts.append(encoded)
        parts.append(struct.pack("<II", offset, count))
    parts.append(np.asarray(m.column_labels, dtype="<f8").tobytes())
    parts.append(np.asfortranarray(m.data).astype("<f8", copy=False).tobytes(order="F"))
    with open(path, "wb") as fh:
        fh.write(b"".join(parts))


def read_snap(path) -> SnapshotMatrix:
    """Read a SNAP1 file; inverse of :func:`write_snap`, bit-exact."""
    with open(path, "rb") as fh:
        blob = fh.read()

    def take(n, offset, what):
        if offset + n > len(blob):
            raise FormatError(f"truncated file while reading {what}", offset=offset)
        return blob[offset : offset + n], offset + n

    raw, pos = take(8, 0, "magic")
    if raw != MAGIC:
        raise FormatError(f"bad magic {raw!r}, expected {MAGIC!r}", offset=0)
    raw, pos = take(12, pos, "header")
    n_dof, n_snaps, n_segments = struct.unpack("<III", raw)
    segments = []
    for k in range(n_segments):
        raw, pos = take(2, pos, f"segment {k} name length")
        (name_len,) = struct.unpack("<H", raw)
        raw, pos = take(name_len, pos, f"segment {k} name")
        try:
            name = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError(f"segment {k} name is not UTF-8", offset=pos - name_len) from exc
        raw, pos = take(8, pos, f"segment {k} extent")
        offset, count = struct.unpack("<II", raw)
        segments.append((name, offset, count))
    try:
        layout = FieldLayout(tuple(segments))
    except DimensionError as exc:
        raise FormatError(f"invalid layout in file: {exc}", offset=pos) from exc
    if layout.n_rows != n_dof:
        raise FormatError(
            f"layout covers {layout.n_rows} rows but header declares {n_dof}", offset=pos
        )
    raw, pos = take(8 * n_snaps, pos, "column labels")
    labels = np.frombuffer(raw, dtype="<f8")
    raw, pos = take(8 * n_dof * n_snaps, pos, "matrix payload")
    data = np.frombuffer(raw, dtype="<f8").reshape((n_dof, n_snaps), order="F")
    if pos != len(blob):
        raise FormatError(f"{len(blob) - pos} trailing bytes after payload", offset=pos)
    try:
        return SnapshotMatrix(data, layout, labels)
    except (DataError, DimensionError) as exc:
        raise FormatError(f"invalid payload: {exc}", offset=pos) from exc
