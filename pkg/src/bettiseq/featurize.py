"""Fixed-length feature vectors from per-nucleotide Betti curves.

The feature layout is the global key union: every (i, j) that is nonzero
anywhere in the corpus for some token class gets a column per grid point,
ordered class-major (A, C, G, TU), then key, then epsilon. The constant
(0, 0) entry is excluded. Protein embeddings, when present, are appended
after the nucleic block, and columns identically zero across the corpus are
pruned once, recorded in the schema's kept-column mask so inference vectors
align with training columns exactly.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import ConfigError, DataError, JoinError
from .fastbetti import BettiCurve, betti_curve
from .seqdata import TOKEN_CLASSES, ComplexRecord, class_clouds

SCHEMA_FORMAT = "bettiseq-schema/1"
DEFAULT_GRID = tuple(range(10))
DEFAULT_EMBEDDING_WIDTH = 2560


@dataclass(frozen=True)
class FeatureSchema:
    """Alignment contract between corpora: grid, key lists, kept columns."""

    grid: tuple[int, ...]
    keys: dict[str, tuple[tuple[int, int], ...]]
    embedding_width: int
    kept_columns: tuple[bool, ...]

    def __post_init__(self) -> None:
        if tuple(self.keys) != TOKEN_CLASSES:
            raise ConfigError(f"schema classes must be {TOKEN_CLASSES} in order, got {tuple(self.keys)}")
        for cls, keys in self.keys.items():
            if (0, 0) in keys:
                raise ConfigError("(0, 0) is excluded from feature keys")
            if list(keys) != sorted(keys):
                raise ConfigError(f"keys for class {cls} must be sorted")
        if self.embedding_width < 0:
            raise ConfigError("embedding_width must be non-negative")
        if len(self.kept_columns) != self.total_width:
            raise ConfigError(
                f"kept_columns has length {len(self.kept_columns)}, expected {self.total_width}"
            )

    @property
    def nucleic_width(self) -> int:
        return sum(len(k) for k in self.keys.values()) * len(self.grid)

    @property
    def total_width(self) -> int:
        return self.nucleic_width + self.embedding_width

    @property
    def kept_width(self) -> int:
        return sum(self.kept_columns)

    def column_names(self) -> list[str]:
        names = [
            f"{cls}:{i}:{j}:e{eps}"
            for cls in TOKEN_CLASSES
            for (i, j) in self.keys[cls]
            for eps in self.grid
        ]
        names.extend(f"emb:{k}" for k in range(self.embedding_width))
        return names

    def kept_column_names(self) -> list[str]:
        return [n for n, keep in zip(self.column_names(), self.kept_columns) if keep]

    def to_json(self) -> str:
        payload = {
            "format": SCHEMA_FORMAT,
            "grid": list(self.grid),
            "keys": {cls: [list(k) for k in self.keys[cls]] for cls in TOKEN_CLASSES},
            "embedding_width": self.embedding_width,
            "kept_columns": [int(b) for b in self.kept_columns],
        }
        return json.dumps(payload, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "FeatureSchema":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DataError(f"schema file is not valid JSON: {exc}") from None
        if payload.get("format") != SCHEMA_FORMAT:
            raise DataError(f"unsupported schema format: {payload.get('format')!r}")
        return cls(
            grid=tuple(payload["grid"]),
            keys={c: tuple(tuple(k) for k in payload["keys"][c]) for c in TOKEN_CLASSES},
            embedding_width=int(payload["embedding_width"]),
            kept_columns=tuple(bool(b) for b in payload["kept_columns"]),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "FeatureSchema":
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"schema file not found: {path}")
        return cls.from_json(path.read_text(encoding="utf-8"))


@dataclass(frozen=True)
class RecordCurves:
    """Per-class Betti curves for one record."""

    id: str
    curves: dict[str, BettiCurve]


def curves_for_sequence(sequence: str, grid: tuple[int, ...]) -> dict[str, BettiCurve]:
    clouds = class_clouds(sequence)
    return {cls: betti_curve(clouds[cls], grid) for cls in TOKEN_CLASSES}


def compute_record_curves(record: ComplexRecord, grid: tuple[int, ...]) -> RecordCurves:
    return RecordCurves(record.id, curves_for_sequence(record.na_sequence, grid))


def _check_grids(record_curves: list[RecordCurves], grid: tuple[int, ...]) -> None:
    for rc in record_curves:
        for cls, curve in rc.curves.items():
            if curve.grid != grid:
                raise ConfigError(
                    f"record {rc.id} class {cls} evaluated on grid {curve.grid}, expected {grid}"
                )


def build_schema(
    record_curves: list[RecordCurves],
    grid: tuple[int, ...] = DEFAULT_GRID,
    embedding_width: int = DEFAULT_EMBEDDING_WIDTH,
) -> FeatureSchema:
    """Global union of nonzero (i, j) keys per class, kept columns all-true."""
    grid = tuple(int(g) for g in grid)
    _check_grids(record_curves, grid)
    unions: dict[str, set[tuple[int, int]]] = {cls: set() for cls in TOKEN_CLASSES}
    for rc in record_curves:
        for cls in TOKEN_CLASSES:
            unions[cls].update(rc.curves[cls].nonzero_keys())
    keys = {cls: tuple(sorted(unions[cls] - {(0, 0)})) for cls in TOKEN_CLASSES}
    width = sum(len(k) for k in keys.values()) * len(grid) + embedding_width
    return FeatureSchema(grid, keys, embedding_width, tuple([True] * width))


def vectorize(rc: RecordCurves, schema: FeatureSchema) -> np.ndarray:
    """Nucleic feature block for one record, before column pruning.

    Each (class, key, eps) cell is the table entry at that grid point;
    plateau constancy makes this identical to carrying the last observed
    value forward, with keys absent from a table reading zero.
    """
    _check_grids([rc], schema.grid)
    out = np.empty(schema.nucleic_width, dtype=np.float64)
    pos = 0
    for cls in TOKEN_CLASSES:
        curve = rc.curves[cls]
        for (i, j) in schema.keys[cls]:
            for table in curve.tables:
                out[pos] = float(table.get(i, j))
                pos += 1
    return out


def _embedding_block(
    record_curves: list[RecordCurves],
    schema: FeatureSchema,
    embeddings: dict[str, np.ndarray] | None,
) -> np.ndarray | None:
    if schema.embedding_width == 0:
        return None
    if embeddings is None:
        raise JoinError(
            "schema expects embeddings of width "
            f"{schema.embedding_width} but none were supplied"
        )
    missing = [rc.id for rc in record_curves if rc.id not in embeddings]
    if missing:
        raise JoinError(f"no embedding for record(s): {', '.join(missing)}")
    block = np.empty((len(record_curves), schema.embedding_width), dtype=np.float64)
    for row, rc in enumerate(record_curves):
        vec = np.asarray(embeddings[rc.id], dtype=np.float64)
        if vec.shape != (schema.embedding_width,):
            raise JoinError(
                f"embedding for {rc.id} has width {vec.shape[0] if vec.ndim == 1 else vec.shape},"
                f" expected {schema.embedding_width}"
            )
        block[row] = vec
    return block


def _full_matrix(
    record_curves: list[RecordCurves],
    schema: FeatureSchema,
    embeddings: dict[str, np.ndarray] | None,
) -> np.ndarray:
    nucleic = np.vstack([vectorize(rc, schema) for rc in record_curves]) if record_curves else np.empty((0, schema.nucleic_width))
    emb = _embedding_block(record_curves, schema, embeddings)
    if emb is None:
        return nucleic
    return np.hstack([nucleic, emb])


def assemble_design_matrix(
    record_curves: list[RecordCurves],
    schema: FeatureSchema,
    embeddings: dict[str, np.ndarray] | None = None,
) -> tuple[np.ndarray, FeatureSchema]:
    """Stack rows in input order, prune all-zero columns, record the mask."""
    full = _full_matrix(record_curves, schema, embeddings)
    kept = tuple(bool(b) for b in (full != 0.0).any(axis=0))
    updated = replace(schema, kept_columns=kept)
    return full[:, np.asarray(kept, dtype=bool)], updated


def apply_schema(
    record_curves: list[RecordCurves],
    schema: FeatureSchema,
    embeddings: dict[str, np.ndarray] | None = None,
) -> np.ndarray:
    """Vectorize against a frozen schema, applying its stored column mask."""
    full = _full_matrix(record_curves, schema, embeddings)
    return full[:, np.asarray(schema.kept_columns, dtype=bool)]


def write_matrix(path: str | Path, ids: list[str], matrix: np.ndarray, names: list[str]) -> None:
    if matrix.shape != (len(ids), len(names)):
        raise ConfigError(f"matrix shape {matrix.shape} does not match ids x names")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("id\t" + "\t".join(names) + "\n")
        for row_id, row in zip(ids, matrix):
            fh.write(row_id + "\t" + "\t".join(repr(float(v)) for v in row) + "\n")


def read_matrix(path: str | Path) -> tuple[list[str], np.ndarray, list[str]]:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"matrix file not found: {path}")
    lines = [l for l in path.read_text(encoding="utf-8").splitlines() if l and not l.startswith("#")]
    if not lines:
        raise DataError(f"matrix file is empty: {path}")
    header = lines[0].split("\t")
    if header[:1] != ["id"]:
        raise DataError("matrix header must start with an 'id' column")
    names = header[1:]
    ids: list[str] = []
    rows: list[list[float]] = []
    for line_no, line in enumerate(lines[1:], 2):
        cells = line.split("\t")
        if len(cells) != len(header):
            raise DataError(f"matrix row at line {line_no} has {len(cells)} fields, expected {len(header)}")
        ids.append(cells[0])
        rows.append([float(c) for c in cells[1:]])
    matrix = np.asarray(rows, dtype=np.float64) if rows else np.empty((0, len(names)))
    return ids, matrix, names


def read_embeddings(path: str | Path) -> tuple[dict[str, np.ndarray], int]:
    """Parse an embedding file: 'id,dim=N' header, one comma row per record."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"embeddings file not found: {path}")
    lines = [
        l for l in path.read_text(encoding="utf-8").splitlines()
        if l.strip() and not l.lstrip().startswith("#")
    ]
    if not lines:
        raise DataError(f"embeddings file has no header: {path}")
    header = lines[0].strip()
    parts = header.split(",")
    if len(parts) != 2 or parts[0] != "id" or not parts[1].startswith("dim="):
        raise DataError(f"bad embeddings header: {header!r} (expected 'id,dim=N')")
    try:
        width = int(parts[1][4:])
    except ValueError:
        raise DataError(f"bad embeddings header: {header!r}") from None
    out: dict[str, np.ndarray] = {}
    for line_no, line in enumerate(lines[1:], 2):
        cells = line.split(",")
        rec_id = cells[0].strip()
        if rec_id in out:
            raise DataError(f"duplicate embedding id {rec_id!r} at line {line_no}")
        values = cells[1:]
        if len(values) != width:
            raise DataError(
                f"embedding row {rec_id!r} has {len(values)} values, expected {width}"
            )
        out[rec_id] = np.asarray([float(v) for v in values], dtype=np.float64)
    return out, width


def write_embeddings(
    path: str | Path,
    vectors: dict[str, np.ndarray],
    width: int,
    header_comments: tuple[str, ...] = (),
) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for comment in header_comments:
            fh.write(f"# {comment}\n")
        fh.write(f"id,dim={width}\n")
        for rec_id, vec in vectors.items():
            vec = np.asarray(vec, dtype=np.float64)
            if vec.shape != (width,):
                raise ConfigError(f"vector for {rec_id!r} has shape {vec.shape}, expected ({width},)")
            fh.write(rec_id + "," + ",".join(repr(float(v)) for v in vec) + "\n")


def synthetic_embeddings(
    records: list[ComplexRecord],
    width: int = DEFAULT_EMBEDDING_WIDTH,
    seed: int = 0,
) -> dict[str, np.ndarray]:
    """Deterministic stand-in embeddings derived from the protein sequence.

    Identical proteins get identical vectors; intended for tests and for
    exercising the combined-feature path without a language model.
    """
    out: dict[str, np.ndarray] = {}
    for record in records:
        digest = hashlib.sha256(
            f"{seed}:{record.protein_sequence}".encode("utf-8")
        ).digest()
        rng = np.random.Generator(np.random.PCG64(int.from_bytes(digest[:8], "big")))
        out[record.id] = rng.standard_normal(width)
    return out
