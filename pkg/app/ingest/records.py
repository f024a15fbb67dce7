"""Occupancy and transaction records and their file readers.

Files are delimited text with a header row. Column names are mapped to the
canonical ``timestamp``, ``lot_id``, ``occupied`` and ``capacity`` through a
ColumnMap, so exports with other headers (for example the city's paid
occupancy export) parse without code changes.
"""
import logging
import os
from dataclasses import dataclass
from datetime import datetime
from typing import Any, Dict, Optional

import pandas as pd
import yaml
from pydantic import BaseModel, ConfigDict

from app.errors import ConfigError, DataFileError
from app.utils.infrastructure.cache import cached_parse

logger = logging.getLogger(__name__)

OCCUPANCY_COLUMNS = ["timestamp", "lot_id", "occupied", "capacity"]
TRANSACTION_COLUMNS = ["timestamp", "lot_id"]


@dataclass(frozen=True)
class OccupancyRecord:
    timestamp: datetime
    lot_id: str
    occupied: int
    capacity: int


@dataclass(frozen=True)
class TransactionRecord:
    timestamp: datetime
    lot_id: str


class ColumnMap(BaseModel):
    """Source column name for each canonical column."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    timestamp: str = "timestamp"
    lot_id: str = "lot_id"
    occupied: str = "occupied"
    capacity: str = "capacity"
    delimiter: str = ","

    @classmethod
    def load(cls, path: Optional[str]) -> "ColumnMap":
        """Column map from a YAML file with an optional ``columns`` section."""
        if not path:
            return cls()
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = yaml.safe_load(fh) or {}
        except (OSError, yaml.YAMLError) as e:
            raise ConfigError(f"cannot read column map {path}: {e}")
        try:
            return cls.model_validate(data.get("columns", data))
        except Exception as e:
            raise ConfigError(f"invalid column map {path}", [str(e)])


# Paid occupancy export of the Seattle Department of Transportation
SDOT_COLUMNS = ColumnMap(
    timestamp="OccupancyDateTime",
    lot_id="SourceElementKey",
    occupied="PaidOccupancy",
    capacity="ParkingSpaceCount",
)


def _read(path: str, wanted: Dict[str, str], delimiter: str) -> pd.DataFrame:
    if not os.path.exists(path):
        raise DataFileError(f"data file not found: {path}")
    try:
        raw = pd.read_csv(path, sep=delimiter, dtype=str)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise DataFileError(f"cannot parse {path}: {e}")
    missing = [src for src in wanted.values() if src not in raw.columns]
    if missing:
        raise DataFileError(f"{path} lacks columns {missing}; found {list(raw.columns)}")
    frame = raw[list(wanted.values())].rename(columns={src: dst for dst, src in wanted.items()})
    frame["timestamp"] = pd.to_datetime(frame["timestamp"], errors="coerce")
    bad = int(frame["timestamp"].isna().sum())
    if bad:
        logger.warning(f"Dropping {bad} rows with unparseable timestamps from {path}")
        frame = frame.dropna(subset=["timestamp"])
    frame["lot_id"] = frame["lot_id"].astype(str).str.strip()
    return frame


def _parse_occupancy(path: str, columns: ColumnMap) -> pd.DataFrame:
    wanted = {c: getattr(columns, c) for c in OCCUPANCY_COLUMNS}
    frame = _read(path, wanted, columns.delimiter)
    for col in ("occupied", "capacity"):
        frame[col] = pd.to_numeric(frame[col], errors="coerce")
    invalid = frame["occupied"].isna() | frame["capacity"].isna() | (frame["occupied"] < 0) | (frame["capacity"] < 1)
    if invalid.any():
        logger.warning(f"Dropping {int(invalid.sum())} occupancy rows with invalid counts from {path}")
        frame = frame[~invalid]
    frame = frame.astype({"occupied": int, "capacity": int})
    return frame.sort_values(["lot_id", "timestamp"], kind="mergesort").reset_index(drop=True)


def _parse_transactions(path: str, columns: ColumnMap) -> pd.DataFrame:
    wanted = {c: getattr(columns, c) for c in TRANSACTION_COLUMNS}
    frame = _read(path, wanted, columns.delimiter)
    return frame.sort_values(["timestamp", "lot_id"], kind="mergesort").reset_index(drop=True)


def read_occupancy(path: str, columns: Optional[ColumnMap] = None) -> pd.DataFrame:
    """Occupancy rows with canonical columns, sorted by lot and time."""
    columns = columns or ColumnMap()
    frame = cached_parse(path, lambda p: _parse_occupancy(p, columns), "occupancy", columns.model_dump_json())
    return frame.copy()


def read_transactions(path: str, columns: Optional[ColumnMap] = None) -> pd.DataFrame:
    """Transaction rows with canonical columns, sorted by time."""
    columns = columns or ColumnMap()
    frame = cached_parse(path, lambda p: _parse_transactions(p, columns), "transactions", columns.model_dump_json())
    return frame.copy()


def occupancy_frame(records: Any) -> pd.DataFrame:
    """Canonical frame from a frame or a sequence of OccupancyRecord."""
    if isinstance(records, pd.DataFrame):
        return records
    return pd.DataFrame([vars(r) for r in records], columns=OCCUPANCY_COLUMNS)


def transaction_frame(records: Any) -> pd.DataFrame:
    if isinstance(records, pd.DataFrame):
        return records
    return pd.DataFrame([vars(r) for r in records], columns=TRANSACTION_COLUMNS)


def load_lot_map(path: Optional[str]) -> Dict[str, str]:
    """Mapping from source lot ids to model lot ids, from a YAML ``lots`` section."""
    if not path:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh) or {}
    except (OSError, yaml.YAMLError) as e:
        raise ConfigError(f"cannot read lot map {path}: {e}")
    lots = data.get("lots", data)
    mapping = {}
    for target, sources in lots.items():
        for src in (sources if isinstance(sources, list) else [sources]):
            mapping[str(src)] = str(target)
    return mapping
