"""
Services - Input/Output

Loads polynomial, sequence and series JSON files through their pydantic
schemas and writes byte-stable JSON, CSV and text artifacts.
"""

import csv
import json
import logging
from pathlib import Path
from typing import Any, Iterable, List, Sequence, Union

from pydantic import BaseModel

from src.division.series import PowerSeries2
from src.poly.parampoly import ParamPoly
from src.schemas import PolySpec, SeriesSpec, SequenceSpec
from src.sequences.dcseq import DCSequence

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def load_poly(path: PathLike) -> ParamPoly:
    """Read a Weierstrass polynomial JSON file."""
    spec = PolySpec.model_validate_json(Path(path).read_text())
    return ParamPoly.from_spec(spec)


def load_sequence(path: PathLike) -> DCSequence:
    """Read a weight sequence JSON file."""
    spec = SequenceSpec.model_validate_json(Path(path).read_text())
    return DCSequence.from_spec(spec)


def load_series(path: PathLike) -> PowerSeries2:
    """Read a truncated power series JSON file."""
    spec = SeriesSpec.model_validate_json(Path(path).read_text())
    return PowerSeries2.from_spec(spec)


def to_jsonable(payload: Any) -> Any:
    if isinstance(payload, BaseModel):
        return payload.model_dump(mode="json")
    if isinstance(payload, dict):
        return {str(k): to_jsonable(v) for k, v in payload.items()}
    if isinstance(payload, (list, tuple)):
        return [to_jsonable(v) for v in payload]
    return payload


def dumps(payload: Any) -> str:
    """Deterministic JSON text (sorted keys, fixed indentation)."""
    return json.dumps(to_jsonable(payload), sort_keys=True, indent=2) + "\n"


def write_json(path: PathLike, payload: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(payload))
    logger.info("wrote %s", path)
    return path


def write_csv(path: PathLike, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    logger.info("wrote %s", path)
    return path


def write_text(path: PathLike, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def list_json(directory: PathLike) -> List[Path]:
    return sorted(Path(directory).glob("*.json"))
