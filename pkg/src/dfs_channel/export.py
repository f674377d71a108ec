import csv
import json
import logging
from collections.abc import Iterable, Sequence
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Any, TextIO

from .multiplicity import GridPoint, SupportPoint
from .types import MultiplicityTable, SpinLabel

_logger = logging.getLogger(__name__)

FORMATS = ("csv", "json")

RECORD_FIELDS = (
    "n_uses",
    "total_excitations",
    "two_j",
    "multiplicity",
    "irrep_dimension",
)
GRID_FIELDS = ("kind", "l_prime", "two_j_prime", "j_prime")
GRID_3D_FIELDS = ("kind", "l_prime", "j_prime", "j")


@dataclass(frozen=True)
class OutputRecord:
    n_uses: int
    total_excitations: int
    two_j: int
    # Decimal string, the values leave the exactly representable float range
    multiplicity: str
    irrep_dimension: int

    @classmethod
    def build(cls, n: int, L: int, two_j: int, k: int) -> "OutputRecord":
        return cls(n, L, two_j, str(k), two_j + 1)

    @property
    def value(self) -> int:
        return int(self.multiplicity)


def table_records(table: MultiplicityTable) -> list[OutputRecord]:
    return [OutputRecord.build(*entry) for entry in table.entries()]


def capacity_records(
    n_uses: int, profile: Iterable[tuple[int, SpinLabel, int]]
) -> list[OutputRecord]:
    return [
        OutputRecord.build(n_uses, L, spin.two_j, k) for L, spin, k in profile
    ]


def rational(x: Fraction | int) -> str:
    """Exact rendering like 3, 1/2 or 5/4"""
    return str(Fraction(x))


def grid_rows(
    points: Sequence[SupportPoint], vertices: Sequence[tuple[Fraction, Fraction]]
) -> list[dict[str, str]]:
    rows = []
    for Lp, two_jp in points:
        rows.append(
            {
                "kind": "point",
                "l_prime": rational(Lp),
                "two_j_prime": rational(two_jp),
                "j_prime": rational(Fraction(two_jp, 2)),
            }
        )
    for Lp, jp in vertices:
        rows.append(
            {
                "kind": "vertex",
                "l_prime": rational(Lp),
                "two_j_prime": rational(2 * jp),
                "j_prime": rational(jp),
            }
        )
    return rows


def grid_3d_rows(
    points: Sequence[GridPoint],
    vertices: Sequence[tuple[Fraction, Fraction, Fraction]],
) -> list[dict[str, str]]:
    rows = []
    for Lp, two_jp, two_j in points:
        rows.append(
            {
                "kind": "point",
                "l_prime": rational(Lp),
                "j_prime": rational(Fraction(two_jp, 2)),
                "j": rational(Fraction(two_j, 2)),
            }
        )
    for Lp, jp, j in vertices:
        rows.append(
            {
                "kind": "vertex",
                "l_prime": rational(Lp),
                "j_prime": rational(jp),
                "j": rational(j),
            }
        )
    return rows


def write_rows(
    rows: Sequence[dict[str, Any]],
    fields: Sequence[str],
    fmt: str,
    stream: TextIO,
    **meta: Any,
) -> None:
    """Write rows as CSV with a header line or as one JSON document

    The JSON document is {**meta, "fields": [...], "records": [...]}
    """
    if fmt == "csv":
        writer = csv.DictWriter(stream, fieldnames=list(fields), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    elif fmt == "json":
        document = dict(meta, fields=list(fields), records=list(rows))
        stream.write(json.dumps(document, indent=2, ensure_ascii=False))
        stream.write("\n")
    else:
        raise ValueError(f"Unknown format {fmt}, expected one of {FORMATS}")

    _logger.debug(f"Wrote {len(rows)} {fmt} rows")


def write_records(
    records: Sequence[OutputRecord], fmt: str, stream: TextIO, **meta: Any
) -> None:
    write_rows([asdict(r) for r in records], RECORD_FIELDS, fmt, stream, **meta)


def read_records(fmt: str, stream: TextIO) -> list[OutputRecord]:
    """Parse the output of write_records back"""
    if fmt == "csv":
        rows: Iterable[dict[str, Any]] = csv.DictReader(stream)
    else:
        rows = json.load(stream)["records"]

    return [
        OutputRecord(
            int(row["n_uses"]),
            int(row["total_excitations"]),
            int(row["two_j"]),
            str(row["multiplicity"]),
            int(row["irrep_dimension"]),
        )
        for row in rows
    ]
