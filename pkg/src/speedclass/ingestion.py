"""Loading and column selection for real-driving recordings.

A recording is a channel-by-sample matrix: one row per measured channel,
one column per time sample.  On disk it is a UTF-8 CSV with one *column*
per channel (header = channel names from the registry below, ``,``
delimiter, ``.`` decimal point, empty cell = missing value); loading
transposes into the channel-major :class:`RecordingMatrix`.

The channel registry is the toolkit's data dictionary: 27 channels, of
which seven (ids 16, 17, 18, 19, 22, 23, 26) feed the prediction model and
channel 9 (``velocity_kmh_raw``) is the target the labels derive from.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError, MissingChannelError, SchemaError

SELECTED_CHANNEL_IDS = (16, 17, 18, 19, 22, 23, 26)
TARGET_CHANNEL_ID = 9
TIME_CHANNEL_ID = 2


@dataclass(frozen=True)
class ChannelEntry:
    id: int
    name: str
    description: str
    selected: bool

    @property
    def is_target(self) -> bool:
        return self.id == TARGET_CHANNEL_ID


@dataclass(frozen=True)
class ChannelTable:
    entries: tuple[ChannelEntry, ...]

    def by_id(self, channel_id: int) -> ChannelEntry:
        return self.entries[channel_id - 1]

    def by_name(self, name: str) -> ChannelEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    @property
    def names(self) -> list[str]:
        return [e.name for e in self.entries]


_CHANNELS = (
    (1, "velocity_raw", "Raw imported vehicle speed"),
    (2, "t", "Time"),
    (3, "speed_raw", "Engine speed imported"),
    (4, "alt_raw", "Altitude imported"),
    (5, "lat_raw", "Latitude imported"),
    (6, "lon_raw", "Longitude imported"),
    (7, "sat_raw", "Nbr of satellite used for the measurement"),
    (8, "d_integrated_raw", "Distance calculated out of the imported vehicle speed integration"),
    (9, "velocity_kmh_raw", "Raw imported vehicle speed"),
    (10, "d_raw", "Distance calculated out of the latitude and the longitude"),
    (11, "lat", "Snapped latitude"),
    (12, "lon", "Snapped longitude"),
    (13, "alt", "Altitude from Here Maps"),
    (14, "d", "Distance out of snapped longitude and latitude"),
    (15, "here_slope", "Slope from Here Maps"),
    (16, "spd_lim", "Speed limit from regulation"),
    (17, "tfc_flw", "Average speed from Here Maps"),
    (18, "traf_lig", "Traffic light index (until 6) to indicate the number of traffic lights"),
    (19, "tfc_sgn", "Traffic sign index"),
    (20, "sgn_loc", "Localisation of the traffic sign (1=Left, 2=right, 3=above)"),
    (21, "conf", "Confidence value from the snapping"),
    (22, "toll_booth", "Index for toll booth"),
    (23, "curvature", "Road curvature in 1/m"),
    (24, "curvature_rad", "Road curvature in rad"),
    (25, "bearing", "Yaw of the vehicle"),
    (26, "slope", "Slope calculated from the Here Maps altitude"),
    (27, "alt_corr", "Corrected altitude"),
)

_REGISTRY = ChannelTable(
    entries=tuple(
        ChannelEntry(id=i, name=n, description=d, selected=i in SELECTED_CHANNEL_IDS)
        for i, n, d in _CHANNELS
    )
)

_NAME_TO_ID = {e.name: e.id for e in _REGISTRY.entries}


def channel_registry() -> ChannelTable:
    """The fixed 27-channel registry."""
    return _REGISTRY


@dataclass(frozen=True)
class RecordingMatrix:
    """Channel-major recording: ``values[i]`` is the full sample series of
    the channel with id ``channel_ids[i]``.  Missing entries are NaN."""

    values: np.ndarray  # (M, N) float64, NaN = missing
    channel_ids: tuple[int, ...]  # length M
    sample_rate: float  # Hz, in [1, 10]

    @property
    def channels(self) -> int:
        return self.values.shape[0]

    @property
    def samples(self) -> int:
        return self.values.shape[1]

    def row(self, channel_id: int) -> np.ndarray:
        """The sample series of one channel."""
        try:
            i = self.channel_ids.index(channel_id)
        except ValueError:
            name = _REGISTRY.by_id(channel_id).name
            raise MissingChannelError(
                f"channel {name!r} (id {channel_id}) not present in recording"
            ) from None
        return self.values[i]

    def has_channel(self, channel_id: int) -> bool:
        return channel_id in self.channel_ids


@dataclass(frozen=True)
class LabeledDataset:
    """Selected feature columns plus one discretized speed class per row.
    Contains no missing values."""

    features: np.ndarray  # (N, F) float64
    labels: np.ndarray  # (N,) int64
    feature_names: tuple[str, ...]

    def __post_init__(self):
        if self.features.shape[0] != self.labels.shape[0]:
            raise ValueError("features and labels row counts differ")


def load_recording(source, sample_rate: float | None = None) -> RecordingMatrix:
    """Load a recording CSV from a path, text, or binary/text stream.

    The header row must contain registry channel names only; order is free
    and duplicates are rejected.  Blank cells become NaN.  When
    ``sample_rate`` is not given it is inferred from the time channel
    (median spacing), defaulting to 1 Hz if no time channel is present.
    """
    if isinstance(source, (str, Path)):
        with open(source, "rb") as f:
            return load_recording(f, sample_rate=sample_rate)
    if isinstance(source, (bytes, bytearray)):
        source = io.BytesIO(source)
    if hasattr(source, "read") and "b" in getattr(source, "mode", "b"):
        source = io.TextIOWrapper(source, encoding="utf-8")
    elif isinstance(source, io.BytesIO):
        source = io.TextIOWrapper(source, encoding="utf-8")

    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise FormatError("empty file: no header row") from None
    header = [h.strip() for h in header]

    unknown = [h for h in header if h not in _NAME_TO_ID]
    if unknown:
        raise SchemaError(
            f"unknown channel name(s) {unknown}; valid channel names: {_REGISTRY.names}"
        )
    if len(set(header)) != len(header):
        dupes = sorted({h for h in header if header.count(h) > 1})
        raise SchemaError(f"duplicate channel name(s) in header: {dupes}")

    width = len(header)
    columns: list[list[float]] = []
    for row_no, row in enumerate(reader, start=2):  # 1-based, header is row 1
        if len(row) != width:
            raise FormatError(
                f"row {row_no}: expected {width} cells, found {len(row)}"
            )
        try:
            columns.append([float(c) if c.strip() != "" else np.nan for c in row])
        except ValueError:
            for col_no, c in enumerate(row, start=1):
                if c.strip() != "":
                    try:
                        float(c)
                    except ValueError:
                        raise FormatError(
                            f"row {row_no}, column {col_no} ({header[col_no - 1]}): "
                            f"non-numeric cell {c!r}"
                        ) from None
            raise

    if not columns:
        raise FormatError("no data rows after header")

    values = np.asarray(columns, dtype=np.float64).T  # (M, N)
    channel_ids = tuple(_NAME_TO_ID[h] for h in header)

    if sample_rate is None:
        if TIME_CHANNEL_ID in channel_ids:
            t = values[channel_ids.index(TIME_CHANNEL_ID)]
            dt = np.diff(t[np.isfinite(t)])
            dt = dt[dt > 0]
            sample_rate = float(1.0 / np.median(dt)) if dt.size else 1.0
        else:
            sample_rate = 1.0
    if not 1.0 <= sample_rate <= 10.0:
        raise FormatError(f"sample rate {sample_rate:g} Hz outside the supported [1, 10] range")

    return RecordingMatrix(values=values, channel_ids=channel_ids, sample_rate=sample_rate)


def write_recording(rec: RecordingMatrix, destination) -> None:
    """Write ``rec`` as CSV; inverse of :func:`load_recording` to at least
    15 significant digits.  NaN entries become empty cells."""
    if isinstance(destination, (str, Path)):
        with open(destination, "w", encoding="utf-8", newline="") as f:
            write_recording(rec, f)
        return
    names = [_REGISTRY.by_id(cid).name for cid in rec.channel_ids]
    destination.write(",".join(names) + "\n")
    for j in range(rec.samples):
        cells = []
        for i in range(rec.channels):
            v = rec.values[i, j]
            cells.append("" if np.isnan(v) else format(v, ".17g"))
        destination.write(",".join(cells) + "\n")


def extract_target(rec: RecordingMatrix) -> np.ndarray:
    """The raw target speeds (km/h): channel 9's sample series, missing
    entries preserved as NaN."""
    return rec.row(TARGET_CHANNEL_ID).copy()


def select_features(rec: RecordingMatrix, discretized_labels: np.ndarray) -> LabeledDataset:
    """Project the recording onto the seven model features and attach labels.

    Feature columns are ordered by ascending channel id (spd_lim, tfc_flw,
    traf_lig, tfc_sgn, toll_booth, curvature, slope).  Any sample with a
    missing value in a selected channel, in the target channel, or in the
    label vector is dropped, labels in lockstep.
    """
    labels = np.asarray(discretized_labels)
    if labels.shape[0] != rec.samples:
        raise ValueError(
            f"labels length {labels.shape[0]} does not match sample count {rec.samples}"
        )

    rows = []
    for cid in SELECTED_CHANNEL_IDS:
        if not rec.has_channel(cid):
            raise MissingChannelError(
                f"selected channel {_REGISTRY.by_id(cid).name!r} (id {cid}) "
                f"not present in recording"
            )
        rows.append(rec.row(cid))
    target = rec.row(TARGET_CHANNEL_ID)

    features = np.stack(rows, axis=1).astype(np.float64)  # (N, F)
    keep = ~np.isnan(features).any(axis=1) & ~np.isnan(target)
    if np.issubdtype(labels.dtype, np.floating):
        keep &= ~np.isnan(labels)

    names = tuple(_REGISTRY.by_id(cid).name for cid in SELECTED_CHANNEL_IDS)
    return LabeledDataset(
        features=features[keep],
        labels=labels[keep].astype(np.int64),
        feature_names=names,
    )
