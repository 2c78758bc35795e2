"""Dataset ingestion and k-mer position clouds over the nucleotide alphabet.

T and U are one token class (``TU``): DNA and RNA sequences are handled by a
single alphabet {A, C, G, T/U}, and a sequence mixing T with U is treated as
corrupt and rejected at parse time.
"""

from __future__ import annotations

import csv
import io
from bisect import bisect_left
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError, DataError

NUCLEOTIDES = frozenset("ACGTU")
TOKEN_CLASSES = ("A", "C", "G", "TU")
LABEL_UNITS = ("pkd", "dg_kcal_per_mol")
AMBIGUOUS_LABEL_MARKERS = ("~", "<", ">")
MIN_SEQUENCE_LENGTH = 5

REQUIRED_COLUMNS = ("id", "na_sequence", "protein_sequence", "label", "label_unit")


def token_class(letter: str) -> str:
    """Canonical class of a single nucleotide letter (T and U collapse to TU)."""
    if letter in ("T", "U"):
        return "TU"
    if letter in ("A", "C", "G"):
        return letter
    raise DataError(f"not a nucleotide: {letter!r}")


@dataclass(frozen=True)
class PositionCloud:
    """Strictly increasing 1-based positions of one token in a sequence."""

    positions: tuple[int, ...]

    def __post_init__(self) -> None:
        prev = 0
        for p in self.positions:
            if p <= prev:
                raise DataError(f"positions must be strictly increasing and >= 1: {self.positions}")
            prev = p

    def __len__(self) -> int:
        return len(self.positions)

    def __iter__(self):
        return iter(self.positions)

    @property
    def span(self) -> int:
        """Largest pairwise distance; 0 for clouds with fewer than two points."""
        if len(self.positions) < 2:
            return 0
        return self.positions[-1] - self.positions[0]

    def subset(self, members) -> "PositionCloud":
        members = sorted(set(members))
        missing = [m for m in members if not self.contains(m)]
        if missing:
            raise ConfigError(f"not members of the cloud: {missing}")
        return PositionCloud(tuple(members))

    def contains(self, position: int) -> bool:
        i = bisect_left(self.positions, position)
        return i < len(self.positions) and self.positions[i] == position


@dataclass(frozen=True)
class ComplexRecord:
    """One dataset row: a protein-nucleic-acid complex with its affinity label."""

    id: str
    na_sequence: str
    protein_sequence: str
    label_value: float
    label_unit: str


@dataclass(frozen=True)
class RowRejection:
    line_no: int
    row_id: str
    reason: str


@dataclass
class ParsedDataset:
    records: list[ComplexRecord]
    rejections: list[RowRejection]


def validate_na_sequence(seq: str) -> str | None:
    """Return a rejection reason for an invalid nucleotide sequence, else None."""
    if len(seq) < MIN_SEQUENCE_LENGTH:
        return f"sequence shorter than {MIN_SEQUENCE_LENGTH} nt"
    bad = sorted(set(seq) - NUCLEOTIDES)
    if bad:
        return f"non-alphabet characters: {''.join(bad)}"
    if "T" in seq and "U" in seq:
        return "hybrid-bases (both T and U present)"
    return None


def _sniff_delimiter(header_line: str) -> str:
    return "\t" if "\t" in header_line else ","


def parse_dataset(path: str | Path) -> ParsedDataset:
    """Parse a delimited dataset file, applying the curation rules row by row.

    Rows failing curation (hybrid bases, short sequences, ambiguous or
    malformed labels, unknown units, non-alphabet characters) are skipped and
    reported in ``rejections``; structural problems (missing columns,
    duplicate ids) abort the whole parse.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"dataset file not found: {path}")
    raw_lines = path.read_text(encoding="utf-8").splitlines()
    content: list[tuple[int, str]] = [
        (no, line)
        for no, line in enumerate(raw_lines, start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not content:
        raise ConfigError(f"dataset file has no header: {path}")

    header_no, header_line = content[0]
    delim = _sniff_delimiter(header_line)
    reader = csv.reader(io.StringIO(header_line), delimiter=delim)
    columns = [c.strip() for c in next(reader)]
    missing = [c for c in REQUIRED_COLUMNS if c not in columns]
    if missing:
        raise ConfigError(f"dataset header missing columns: {', '.join(missing)}")
    col_index = {c: columns.index(c) for c in REQUIRED_COLUMNS}

    records: list[ComplexRecord] = []
    rejections: list[RowRejection] = []
    seen_ids: set[str] = set()

    for line_no, line in content[1:]:
        cells = next(csv.reader(io.StringIO(line), delimiter=delim))
        if len(cells) < len(columns):
            rejections.append(RowRejection(line_no, "", "wrong number of fields"))
            continue
        get = lambda name: cells[col_index[name]].strip()  # noqa: E731
        row_id = get("id")
        if not row_id:
            rejections.append(RowRejection(line_no, "", "empty id"))
            continue
        if row_id in seen_ids:
            raise DataError(f"duplicate id {row_id!r} at line {line_no}")
        seen_ids.add(row_id)

        seq = get("na_sequence").upper()
        reason = validate_na_sequence(seq)
        if reason is not None:
            rejections.append(RowRejection(line_no, row_id, reason))
            continue

        protein = get("protein_sequence").upper()
        if not protein or not protein.isalpha():
            rejections.append(RowRejection(line_no, row_id, "invalid protein sequence"))
            continue

        label = get("label")
        if any(m in label for m in AMBIGUOUS_LABEL_MARKERS):
            rejections.append(RowRejection(line_no, row_id, "ambiguous label marker"))
            continue
        try:
            value = float(label)
        except ValueError:
            rejections.append(RowRejection(line_no, row_id, f"malformed label: {label!r}"))
            continue

        unit = get("label_unit")
        if unit not in LABEL_UNITS:
            rejections.append(RowRejection(line_no, row_id, f"unknown label unit: {unit!r}"))
            continue

        records.append(ComplexRecord(row_id, seq, protein, value, unit))

    return ParsedDataset(records, rejections)


def extract_positions(sequence: str, token: str, k: int = 1) -> PositionCloud:
    """1-based start positions of ``token`` in ``sequence``.

    For k=1 the tokens T and U match either letter (the TU class); longer
    tokens match exactly. A token longer than the sequence yields an empty
    cloud.
    """
    if k < 1:
        raise ConfigError(f"k must be >= 1, got {k}")
    if len(token) != k:
        raise ConfigError(f"token length {len(token)} does not match k={k}")
    if k == 1 and token in ("T", "U"):
        hits = tuple(i + 1 for i, c in enumerate(sequence) if c in ("T", "U"))
    else:
        hits = tuple(
            i + 1 for i in range(len(sequence) - k + 1) if sequence[i : i + k] == token
        )
    return PositionCloud(hits)


def class_clouds(sequence: str) -> dict[str, PositionCloud]:
    """Position clouds for the four token classes; keys ordered A, C, G, TU."""
    reason = None
    bad = sorted(set(sequence) - NUCLEOTIDES)
    if bad:
        reason = f"non-alphabet characters: {''.join(bad)}"
    elif "T" in sequence and "U" in sequence:
        reason = "hybrid-bases (both T and U present)"
    if reason is not None:
        raise DataError(f"invalid sequence: {reason}")
    return {cls: extract_positions(sequence, cls[0], 1) for cls in TOKEN_CLASSES}


def alphabet_kind(sequence: str) -> str:
    """'dna', 'rna', or 'either' when the sequence contains neither T nor U."""
    has_t = "T" in sequence
    has_u = "U" in sequence
    if has_t and has_u:
        raise DataError("hybrid sequence contains both T and U")
    if has_t:
        return "dna"
    if has_u:
        return "rna"
    return "either"
