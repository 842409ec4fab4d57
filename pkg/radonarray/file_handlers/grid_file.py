from logging import getLogger
from pathlib import Path
from typing import Literal, NoReturn

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

from ..errors import GridFileError, InvalidArgumentError
from ..models import LocalizationResult, RadonGrid, SemblanceGrid, SpaceTimeGrid
from ..models.grids import _fmt, uniform_axis

logger = getLogger(__name__)

FORMAT = "radonarray-grid"
VERSION = "1"
ENCODING = "float64-le"
PRODUCER = "radonarray"
KINDS = ("spacetime", "radon", "semblance", "envelope")
REQUIRED_KEYS = (
    "format",
    "version",
    "kind",
    "n_rows",
    "n_cols",
    "row_start",
    "row_step",
    "col_start",
    "col_step",
    "encoding",
)
AXIS_KEYS = ("row_start", "row_step", "col_start", "col_step")
KIND_KEYS = {"spacetime": ("carrier_wavelength",)}
POSITIVE_KEYS = ("row_step", "col_step", "carrier_wavelength")

ExportFormat = Literal["csv", "binary"]
Grid = SpaceTimeGrid | RadonGrid | SemblanceGrid


class GridFile(BaseModel):
    """A self-describing grid: ASCII key=value header plus float64 payload."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    header: dict[str, str]
    payload: np.ndarray

    @field_validator("payload", mode="before")
    @classmethod
    def _payload_as_matrix(cls, value) -> np.ndarray:
        matrix = np.array(value, dtype=np.float64, copy=True)
        if matrix.ndim == 1:
            matrix = matrix[:, None]
        matrix.setflags(write=False)
        return matrix

    @property
    def kind(self) -> str:
        return self.header["kind"]

    @property
    def row_axis(self) -> np.ndarray:
        return uniform_axis(
            float(self.header["row_start"]), float(self.header["row_step"]), self.payload.shape[0]
        )

    @property
    def col_axis(self) -> np.ndarray:
        return uniform_axis(
            float(self.header["col_start"]), float(self.header["col_step"]), self.payload.shape[1]
        )

    @classmethod
    def from_grid(cls, grid: Grid, scenario_hash: str = "") -> "GridFile":
        payload = grid.values if isinstance(grid, SemblanceGrid) else grid.samples
        return cls(header=_header(grid.header_fields(), payload, scenario_hash), payload=payload)

    @classmethod
    def from_localization(cls, result: LocalizationResult, scenario_hash: str = "") -> "GridFile":
        """Envelope of a localized source as a one-column grid."""
        fields = {
            "kind": "envelope",
            "row_start": _fmt(result.t_start),
            "row_step": _fmt(result.dt),
            "row_unit": "s",
            "col_start": _fmt(0.0),
            "col_step": _fmt(1.0),
            "col_unit": "trace",
            "x0": _fmt(result.position.x0),
            "z0": _fmt(result.position.z0),
            "peak_time": _fmt(result.peak_time),
            "coherent_gain": _fmt(result.coherent_gain),
            "subarray_count": str(result.subarray_count),
        }
        payload = result.envelope[:, None]
        return cls(header=_header(fields, payload, scenario_hash), payload=payload)

    def to_grid(self) -> Grid:
        """Typed grid for the spacetime, radon and semblance kinds.

        Raises
        ------
        GridFileError: The header values do not describe a valid grid of its kind.
        InvalidArgumentError: The kind holds no typed grid (envelope).
        """
        grid_types = {"spacetime": SpaceTimeGrid, "radon": RadonGrid, "semblance": SemblanceGrid}
        if self.kind not in grid_types:
            msg = f"a {self.kind} file does not hold a typed grid"
            raise InvalidArgumentError(msg)
        try:
            return grid_types[self.kind].from_header(self.header, self.payload)
        except (ValidationError, KeyError) as e:
            msg = f"{self.kind} header does not describe a valid grid: {e}"
            raise GridFileError(msg) from e

    def to_bytes(self) -> bytes:
        text = "".join(f"{key}={value}\n" for key, value in self.header.items()) + "\n"
        return text.encode("ascii") + self.payload.astype("<f8").tobytes(order="C")


def _header(fields: dict[str, str], payload: np.ndarray, scenario_hash: str) -> dict[str, str]:
    n_rows, n_cols = np.shape(payload)
    header = {
        "format": FORMAT,
        "version": VERSION,
        "kind": fields["kind"],
        "n_rows": str(n_rows),
        "n_cols": str(n_cols),
    }
    header.update({key: value for key, value in fields.items() if key != "kind"})
    header.update({"encoding": ENCODING, "producer": PRODUCER, "scenario_hash": scenario_hash})
    return header


def write_grid(path: str | Path, grid_file: GridFile) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(grid_file.to_bytes())
    logger.debug(f"Wrote {grid_file.kind} grid {grid_file.payload.shape} to {path}")
    return path


def parse_grid(data: bytes) -> GridFile:
    """Decode GridFile bytes.

    Raises
    ------
    GridFileError: The header or payload is malformed; `line` is the 1-based
        header line at fault (the line after the header for payload errors).
    """
    header: dict[str, str] = {}
    lines: dict[str, int] = {}
    offset = 0
    line_number = 0
    while True:
        line_number += 1
        end = data.find(b"\n", offset)
        if end < 0:
            msg = "header is not terminated by a blank line"
            raise GridFileError(msg, line_number)
        raw = data[offset:end]
        offset = end + 1
        if raw == b"":
            break
        try:
            text = raw.decode("ascii")
        except UnicodeDecodeError as e:
            msg = "header line is not ASCII"
            raise GridFileError(msg, line_number) from e
        key, sep, value = text.partition("=")
        if not sep or not key:
            msg = f"expected key=value, got {text!r}"
            raise GridFileError(msg, line_number)
        header[key] = value
        lines[key] = line_number

    for key in (*REQUIRED_KEYS, *KIND_KEYS.get(header.get("kind", ""), ())):
        if key not in header:
            msg = f"missing header key {key!r}"
            raise GridFileError(msg, line_number)

    def fail(key: str, problem: str) -> NoReturn:
        msg = f"{key}: {problem}"
        raise GridFileError(msg, lines[key])

    if header["format"] != FORMAT:
        fail("format", f"unsupported format {header['format']!r}")
    if header["version"] != VERSION:
        fail("version", f"unsupported version {header['version']!r}")
    if header["kind"] not in KINDS:
        fail("kind", f"unknown grid kind {header['kind']!r}")
    if header["encoding"] != ENCODING:
        fail("encoding", f"unsupported encoding {header['encoding']!r}")

    shape = []
    for key in ("n_rows", "n_cols"):
        try:
            count = int(header[key])
        except ValueError:
            fail(key, f"not an integer: {header[key]!r}")
        if count < 1:
            fail(key, f"must be positive, got {count}")
        shape.append(count)
    for key in (*AXIS_KEYS, *KIND_KEYS.get(header["kind"], ())):
        try:
            number = float(header[key])
        except ValueError:
            fail(key, f"not a number: {header[key]!r}")
        if not np.isfinite(number):
            fail(key, f"must be finite, got {number}")
        if key in POSITIVE_KEYS and number <= 0:
            fail(key, f"must be positive, got {number}")

    payload = data[offset:]
    expected = 8 * shape[0] * shape[1]
    if len(payload) != expected:
        msg = f"payload holds {len(payload)} bytes, header implies {expected}"
        raise GridFileError(msg, line_number + 1)

    values = np.frombuffer(payload, dtype="<f8").reshape(shape)
    if not np.all(np.isfinite(values)):
        msg = "payload holds non-finite values"
        raise GridFileError(msg, line_number + 1)
    return GridFile(header=header, payload=values)


def read_grid(path: str | Path) -> GridFile:
    return parse_grid(Path(path).read_bytes())


def export_plot_data(grid_path: str | Path, out: str | Path, fmt: ExportFormat = "csv") -> Path:
    """Re-emit a grid file as CSV text or as its binary GridFile form.

    The CSV's first row holds the column axis (after a leading row-axis
    label); every following row starts with its row-axis value. Values are
    written with 17 significant digits, enough to read back every float64
    exactly.
    """
    grid_file = read_grid(grid_path)
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)

    if fmt == "binary":
        return write_grid(out, grid_file)
    if fmt != "csv":
        msg = f"unknown export format {fmt!r}"
        raise InvalidArgumentError(msg)

    table = np.column_stack((grid_file.row_axis, grid_file.payload))
    axis_row = ",".join(
        [f"{grid_file.header.get('row_unit', 'row')}\\{grid_file.header.get('col_unit', 'col')}"]
        + [f"{value:.17g}" for value in grid_file.col_axis]
    )
    np.savetxt(out, table, fmt="%.17g", delimiter=",", header=axis_row, comments="")
    logger.info(f"Exported {grid_file.kind} grid to {out} as csv")
    return out


def read_csv_export(path: str | Path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(row_axis, col_axis, values) of a CSV written by export_plot_data."""
    with Path(path).open() as file:
        first = file.readline().rstrip("\n").split(",")
    col_axis = np.array([float(value) for value in first[1:]])
    table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return table[:, 0], col_axis, table[:, 1:]
