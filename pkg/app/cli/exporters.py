"""CSV and JSON writers for command output.

Floats are written in their shortest round-trip form so identical runs
produce identical bytes.
"""

import csv
import json
import sys
from contextlib import contextmanager
from typing import Any, Iterable, Iterator, Optional, Sequence, TextIO

import numpy as np

from app.core.constants import CSV_COLUMNS, DIAGONAL_COLUMNS
from app.core.utils import format_float
from app.schemas.field_dto import DiagonalValue, FieldSample
from app.schemas.oracle_dto import DiscreteSolution


@contextmanager
def open_output(path: Optional[str]) -> Iterator[TextIO]:
    """Yield the destination stream; stdout when no path is given."""
    if path is None:
        yield sys.stdout
        return
    with open(path, "w", newline="", encoding="utf-8") as stream:
        yield stream


def write_json(payload: Any, stream: TextIO) -> None:
    """Write one JSON document followed by a newline."""
    stream.write(json.dumps(payload, indent=2, ensure_ascii=False))
    stream.write("\n")


def _writer(stream: TextIO, header: Sequence[str]):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    return writer


# ==================== Field samples ====================

def write_samples_csv(samples: Iterable[FieldSample], stream: TextIO) -> None:
    """Rows x, y, u, ux, uy, region; gradient cells stay empty where it is undefined."""
    writer = _writer(stream, CSV_COLUMNS)
    for sample in samples:
        ux, uy = sample.grad if sample.grad is not None else (None, None)
        writer.writerow([
            format_float(sample.point.x),
            format_float(sample.point.y),
            format_float(sample.u),
            format_float(ux),
            format_float(uy),
            sample.region_tag.value,
        ])


def samples_to_json(samples: Iterable[FieldSample]) -> list:
    return [sample.model_dump(mode="json") for sample in samples]


# ==================== Diagonal ====================

def write_diagonal_csv(values: Iterable[DiagonalValue], stream: TextIO) -> None:
    writer = _writer(stream, DIAGONAL_COLUMNS)
    for value in values:
        writer.writerow([
            format_float(value.s),
            format_float(value.g),
            format_float(value.u),
            format_float(value.g_prime),
        ])


def diagonal_to_json(values: Iterable[DiagonalValue]) -> list:
    return [
        {"s": value.s, "g": value.g, "u": value.u, "g_prime": value.g_prime}
        for value in values
    ]


# ==================== Discrete grid ====================

def write_discrete_csv(solution: DiscreteSolution, regions: np.ndarray, stream: TextIO) -> None:
    """Discrete values in the analytic layout; the oracle carries no gradient."""
    writer = _writer(stream, CSV_COLUMNS)
    coords = solution.coordinates
    for j, y in enumerate(coords):
        for i, x in enumerate(coords):
            writer.writerow([
                format_float(x),
                format_float(y),
                format_float(solution.values[j, i]),
                "",
                "",
                regions[j, i],
            ])


def discrete_to_json(solution: DiscreteSolution, regions: np.ndarray) -> list:
    coords = solution.coordinates
    return [
        {"x": float(x), "y": float(y), "u": float(solution.values[j, i]), "region_tag": str(regions[j, i])}
        for j, y in enumerate(coords)
        for i, x in enumerate(coords)
    ]
