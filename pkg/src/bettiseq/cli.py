"""Command-line surface: featurize, curves, mutate-compare, validate-engine,
ideal-stats, train, evaluate, predict.

Every file-writing command drops a ``<output>.manifest.json`` next to its
primary output recording the command, flags, input hashes, and outputs.
Outputs carry no timestamps, so identical inputs and flags reproduce
byte-identical files. Exit codes are stable per error family: 2 config,
3 data, 4 join mismatch, 5 engine mismatch, 1 unexpected.
"""

from __future__ import annotations

import functools
import hashlib
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from pathlib import Path

import click
import numpy as np

from . import __version__
from .boost import (
    GbdtConfig,
    cross_validate,
    load_model,
    save_model,
    to_delta_g,
    train_affinity_model,
)
from .errors import BettiseqError, ConfigError, DataError, EngineMismatch, JoinError
from .featurize import (
    DEFAULT_EMBEDDING_WIDTH,
    FeatureSchema,
    RecordCurves,
    apply_schema,
    assemble_design_matrix,
    build_schema,
    curves_for_sequence,
    read_embeddings,
    read_matrix,
    synthetic_embeddings,
    write_matrix,
)
from .mutscan import compare, default_grid, series_rows, single_series
from .seqdata import NUCLEOTIDES, ComplexRecord, parse_dataset
from .simplex import load_complex_text, minimal_nonfaces, GapGraph
from .seqdata import PositionCloud
from .validate import run_equivalence_sweep

NONFACE_NAMES = {2: "quadric", 3: "cubic", 4: "quartic"}


def _handle_errors(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except BettiseqError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(exc.exit_code)

    return wrapper


def parse_grid(text: str) -> tuple[int, ...]:
    """Grids come as 'a..b' (inclusive), 'a:b', or a comma list."""
    text = text.strip()
    for sep in ("..", ":"):
        if sep in text and "," not in text:
            lo_s, hi_s = text.split(sep, 1)
            try:
                lo, hi = int(lo_s), int(hi_s)
            except ValueError:
                raise ConfigError(f"bad grid: {text!r}") from None
            if hi < lo:
                raise ConfigError(f"bad grid range: {text!r}")
            return tuple(range(lo, hi + 1))
    try:
        values = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise ConfigError(f"bad grid: {text!r}") from None
    return values


def parse_seeds(text: str) -> tuple[int, ...]:
    return parse_grid(text)


def _default_jobs() -> int:
    env = os.environ.get("BETTISEQ_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"bad BETTISEQ_JOBS value: {env!r}") from None
    return min(os.cpu_count() or 1, 8)


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _write_manifest(primary_out: Path, command: str, params: dict, inputs: list, outputs: list) -> Path:
    manifest = {
        "tool": f"bettiseq {__version__}",
        "command": command,
        "parameters": params,
        "inputs": {str(p): _sha256(Path(p)) for p in inputs},
        "outputs": [str(p) for p in outputs],
    }
    path = Path(str(primary_out) + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def _echo_rejections(parsed) -> None:
    for rej in parsed.rejections:
        tag = f" [{rej.row_id}]" if rej.row_id else ""
        click.echo(f"skipped line {rej.line_no}{tag}: {rej.reason}", err=True)


def _curves_worker(args):
    sequence, grid = args
    return curves_for_sequence(sequence, grid)


def _series_worker(args):
    tag, sequence, grid = args
    return single_series(tag, sequence, grid)


def _compute_curves(records: list[ComplexRecord], grid, jobs: int) -> list[RecordCurves]:
    if jobs > 1 and len(records) > 3:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            curve_dicts = list(pool.map(_curves_worker, [(r.na_sequence, grid) for r in records]))
    else:
        curve_dicts = [curves_for_sequence(r.na_sequence, grid) for r in records]
    return [RecordCurves(r.id, curves) for r, curves in zip(records, curve_dicts)]


def _write_labels(path: Path, records: list[ComplexRecord]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("id\tlabel_value\tlabel_unit\tdg_kcal_per_mol\n")
        for r in records:
            dg = to_delta_g(r.label_value, r.label_unit)
            fh.write(f"{r.id}\t{r.label_value!r}\t{r.label_unit}\t{dg!r}\n")


def _read_labels(path: str | Path) -> dict[str, float]:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"labels file not found: {path}")
    lines = [l for l in path.read_text(encoding="utf-8").splitlines() if l and not l.startswith("#")]
    if not lines:
        raise DataError(f"labels file is empty: {path}")
    header = lines[0].split("\t")
    try:
        id_col = header.index("id")
        dg_col = header.index("dg_kcal_per_mol")
    except ValueError:
        raise DataError("labels file needs 'id' and 'dg_kcal_per_mol' columns") from None
    out: dict[str, float] = {}
    for line in lines[1:]:
        cells = line.split("\t")
        out[cells[id_col]] = float(cells[dg_col])
    return out


def _write_series_file(out, rows) -> None:
    header = "sequence_tag\ttoken_class\tseries_kind\ti\tj\tepsilon\tvalue\n"
    body = "".join(
        f"{tag}\t{cls}\t{kind}\t{i}\t{j}\t{eps}\t{value}\n"
        for tag, cls, kind, i, j, eps, value in rows
    )
    if out == "-":
        sys.stdout.write(header + body)
    else:
        Path(out).write_text(header + body, encoding="utf-8")


def _gbdt_options(func):
    options = [
        click.option("--trees", default=10_000, show_default=True, help="Boosting stages."),
        click.option("--max-depth", default=7, show_default=True),
        click.option("--min-split", default=3, show_default=True, help="Minimum rows a node needs to split."),
        click.option("--learning-rate", default=0.01, show_default=True),
        click.option("--max-features", default="sqrt", show_default=True, help="'sqrt' or an integer."),
        click.option("--subsample", default=0.7, show_default=True),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _config_from_flags(trees, max_depth, min_split, learning_rate, max_features, subsample, seed) -> GbdtConfig:
    if max_features != "sqrt":
        try:
            max_features = int(max_features)
        except ValueError:
            raise ConfigError(f"--max-features must be 'sqrt' or an integer: {max_features!r}") from None
    return GbdtConfig(
        n_estimators=trees,
        max_depth=max_depth,
        min_samples_split=min_split,
        learning_rate=learning_rate,
        max_features=max_features,
        subsample=subsample,
        seed=seed,
    )


@click.group()
@click.version_option(__version__, prog_name="bettiseq")
def main() -> None:
    """Graded Betti features for nucleotide sequences and affinity regression."""


@main.command()
@click.argument("dataset", type=click.Path())
@click.option("--grid", default="0..9", show_default=True, help="Integer filtration grid.")
@click.option("--embeddings", "embeddings_path", type=click.Path(), default=None,
              help="Embedding file to join by record id.")
@click.option("--synthetic-embeddings", "use_synthetic", is_flag=True,
              help="Use deterministic stand-in embeddings (testing mode).")
@click.option("--no-embeddings", is_flag=True, help="Nucleic-only matrix (the default).")
@click.option("--embedding-width", default=DEFAULT_EMBEDDING_WIDTH, show_default=True)
@click.option("--embedding-seed", default=0, show_default=True)
@click.option("--apply-schema", "apply_schema_path", type=click.Path(), default=None,
              help="Align to a saved schema instead of building one.")
@click.option("--schema-out", type=click.Path(), default=None)
@click.option("--matrix-out", type=click.Path(), required=True)
@click.option("--labels-out", type=click.Path(), default=None)
@click.option("--jobs", default=None, type=int, help="Worker processes (default: auto).")
@_handle_errors
def featurize(dataset, grid, embeddings_path, use_synthetic, no_embeddings,
              embedding_width, embedding_seed, apply_schema_path, schema_out,
              matrix_out, labels_out, jobs):
    """Dataset file -> feature matrix (+ schema, labels, manifest)."""
    modes = sum([embeddings_path is not None, use_synthetic, no_embeddings])
    if modes > 1:
        raise ConfigError("pick one of --embeddings, --synthetic-embeddings, --no-embeddings")
    grid_values = parse_grid(grid)
    jobs = jobs or _default_jobs()

    parsed = parse_dataset(dataset)
    _echo_rejections(parsed)
    records = parsed.records
    record_curves = _compute_curves(records, grid_values, jobs)

    if embeddings_path is not None:
        embeddings, width = read_embeddings(embeddings_path)
    elif use_synthetic:
        embeddings, width = synthetic_embeddings(records, embedding_width, embedding_seed), embedding_width
    else:
        embeddings, width = None, 0

    if apply_schema_path is not None:
        schema = FeatureSchema.load(apply_schema_path)
        matrix = apply_schema(record_curves, schema, embeddings)
    else:
        schema = build_schema(record_curves, grid_values, embedding_width=width)
        matrix, schema = assemble_design_matrix(record_curves, schema, embeddings)

    ids = [rc.id for rc in record_curves]
    write_matrix(matrix_out, ids, matrix, schema.kept_column_names())
    outputs = [matrix_out]
    if schema_out is not None:
        schema.save(schema_out)
        outputs.append(schema_out)
    if labels_out is not None:
        _write_labels(Path(labels_out), records)
        outputs.append(labels_out)

    inputs = [dataset] + ([embeddings_path] if embeddings_path else []) \
        + ([apply_schema_path] if apply_schema_path else [])
    params = {
        "grid": list(grid_values),
        "embedding_mode": ("file" if embeddings_path else "synthetic" if use_synthetic else "none"),
        "embedding_width": width,
        "applied_schema": bool(apply_schema_path),
    }
    _write_manifest(Path(matrix_out), "featurize", params, inputs, outputs)
    click.echo(f"matrix {matrix.shape[0]} x {matrix.shape[1]} -> {matrix_out}")


@main.command()
@click.argument("source")
@click.option("--grid", default="0..9", show_default=True)
@click.option("--out", required=True, help="Long-format TSV path, or '-' for stdout.")
@click.option("--figure/--no-figure", default=True, show_default=True)
@click.option("--jobs", default=None, type=int)
@_handle_errors
def curves(source, grid, out, figure, jobs):
    """Betti curves for a dataset file or a literal sequence."""
    from .plotting import save_curves_figure

    grid_values = parse_grid(grid)
    jobs = jobs or _default_jobs()
    path = Path(source)
    all_series = []
    inputs = []
    if path.exists():
        parsed = parse_dataset(path)
        _echo_rejections(parsed)
        tasks = [(r.id, r.na_sequence, grid_values) for r in parsed.records]
        if jobs > 1 and len(tasks) > 3:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                for chunk in pool.map(_series_worker, tasks):
                    all_series.extend(chunk)
        else:
            for task in tasks:
                all_series.extend(_series_worker(task))
        inputs.append(source)
    elif set(source.upper()) <= NUCLEOTIDES:
        all_series = single_series("SEQ", source.upper(), grid_values)
    else:
        raise ConfigError(
            f"{source!r} is neither an existing file nor a plain A/C/G/T/U sequence"
        )

    _write_series_file(out, series_rows(all_series))
    if out == "-":
        return
    outputs = [out]
    if figure:
        tags = sorted({s.sequence_tag for s in all_series})
        for tag in tags:
            subset = [s for s in all_series if s.sequence_tag == tag]
            suffix = f"_{tag}" if len(tags) > 1 else ""
            fig_path = Path(out).with_suffix("").as_posix() + f"{suffix}.png"
            save_curves_figure(subset, fig_path, title=tag)
            outputs.append(fig_path)
    _write_manifest(Path(out), "curves", {"grid": list(grid_values)}, inputs, outputs)


@main.command("mutate-compare")
@click.argument("ref_seq")
@click.argument("mut_seq")
@click.option("--grid", default=None, help="Defaults to 0..(max span + 1), capped at sequence length.")
@click.option("--out", required=True, help="Long-format TSV path, or '-' for stdout.")
@click.option("--figure/--no-figure", default=True, show_default=True)
@_handle_errors
def mutate_compare(ref_seq, mut_seq, grid, out, figure):
    """Reference-vs-mutant curve comparison of two literal sequences."""
    from .plotting import save_curves_figure

    ref_seq = ref_seq.upper()
    mut_seq = mut_seq.upper()
    grid_values = parse_grid(grid) if grid else default_grid(ref_seq, mut_seq)
    series = compare(ref_seq, mut_seq, grid_values)
    _write_series_file(out, series_rows(series))
    if out == "-":
        return
    outputs = [out]
    if figure:
        fig_path = Path(out).with_suffix("").as_posix() + ".png"
        save_curves_figure(series, fig_path, title="REF vs MUT")
        outputs.append(fig_path)
    _write_manifest(Path(out), "mutate-compare", {"grid": list(grid_values)}, [], outputs)


@main.command("validate-engine")
@click.option("--max-n", default=12, show_default=True)
@click.option("--trials", default=200, show_default=True)
@click.option("--seed", default=7, show_default=True)
@click.option("--self-test", is_flag=True, help="Corrupt one fast table to prove the harness detects it.")
@_handle_errors
def validate_engine(max_n, trials, seed, self_test):
    """Randomized fast-engine vs brute-force equivalence sweep."""
    report = run_equivalence_sweep(
        max_n=max_n,
        trials=trials,
        seed=seed,
        corrupt_self_test=self_test,
        progress=lambda done, total: click.echo(f"checked {done}/{total} clouds", err=True),
    )
    click.echo(
        f"clouds={report.clouds_checked} tables={report.tables_checked} "
        f"mismatches={len(report.mismatches)}"
    )
    if not report.passed:
        worst = report.mismatches[0]
        raise EngineMismatch(
            f"fast != oracle for cloud {worst.positions} at K={worst.threshold}: "
            f"fast={worst.fast} oracle={worst.oracle}"
        )
    click.echo("engine equivalence: PASS")


@main.command("ideal-stats")
@click.argument("complex_file", required=False, type=click.Path())
@click.option("--complete", "complete_n", type=int, default=None,
              help="Census of the complete threshold graph on N vertices.")
@_handle_errors
def ideal_stats(complex_file, complete_n):
    """Census of the Stanley-Reisner generators (minimal nonfaces)."""
    if (complex_file is None) == (complete_n is None):
        raise ConfigError("pass exactly one of COMPLEX_FILE or --complete N")
    if complete_n is not None:
        if complete_n < 1:
            raise ConfigError("--complete needs N >= 1")
        cloud = PositionCloud(tuple(range(1, complete_n + 1)))
        nonfaces = minimal_nonfaces(GapGraph(cloud, complete_n))
        source = f"complete threshold graph on {complete_n} vertices"
    else:
        nonfaces = minimal_nonfaces(load_complex_text(complex_file))
        source = str(complex_file)
    census: dict[int, int] = {}
    for f in nonfaces:
        census[len(f)] = census.get(len(f), 0) + 1
    click.echo(f"minimal nonfaces of {source}: {len(nonfaces)}")
    for size in sorted(census):
        name = NONFACE_NAMES.get(size, f"degree-{size}")
        click.echo(f"  size {size} ({name}): {census[size]}")


@main.command()
@click.argument("matrix", type=click.Path())
@click.argument("labels", type=click.Path())
@_gbdt_options
@click.option("--seed", default=0, show_default=True)
@click.option("--model-out", required=True, type=click.Path())
@_handle_errors
def train(matrix, labels, trees, max_depth, min_split, learning_rate, max_features,
          subsample, seed, model_out):
    """Fit the standardizer + boosted ensemble on a full matrix."""
    ids, X, _ = read_matrix(matrix)
    label_map = _read_labels(labels)
    missing = [i for i in ids if i not in label_map]
    if missing:
        raise JoinError(f"no label for record(s): {', '.join(missing)}")
    y = np.asarray([label_map[i] for i in ids], dtype=np.float64)
    config = _config_from_flags(trees, max_depth, min_split, learning_rate, max_features, subsample, seed)
    model = train_affinity_model(X, y, config)
    save_model(model, model_out)
    _write_manifest(Path(model_out), "train",
                    {"config": asdict(config) | {"max_features": str(config.max_features)}},
                    [matrix, labels], [model_out])
    click.echo(f"model on {X.shape[0]} x {X.shape[1]} -> {model_out}")


@main.command()
@click.argument("matrix", type=click.Path())
@click.argument("labels", type=click.Path())
@_gbdt_options
@click.option("--folds", default=10, show_default=True)
@click.option("--seeds", default="0..19", show_default=True)
@click.option("--report-out", required=True, type=click.Path())
@click.option("--figure/--no-figure", default=True, show_default=True)
@_handle_errors
def evaluate(matrix, labels, trees, max_depth, min_split, learning_rate, max_features,
             subsample, folds, seeds, report_out, figure):
    """Shuffled k-fold cross-validation averaged over seeds."""
    from .plotting import save_scatter_figure

    ids, X, _ = read_matrix(matrix)
    label_map = _read_labels(labels)
    missing = [i for i in ids if i not in label_map]
    if missing:
        raise JoinError(f"no label for record(s): {', '.join(missing)}")
    y = np.asarray([label_map[i] for i in ids], dtype=np.float64)
    seed_values = parse_seeds(seeds)
    config = _config_from_flags(trees, max_depth, min_split, learning_rate, max_features, subsample, 0)
    report = cross_validate(X, y, n_folds=folds, seeds=seed_values, config=config)

    lines = ["scope\tseed\tfold\tmetric\tvalue"]
    lines.append(f"aggregate\t\t\tpearson_r\t{report.pearson_r:.6g}")
    lines.append(f"aggregate\t\t\trmse_kcal\t{report.rmse:.6g}")
    for s in report.per_seed:
        lines.append(f"seed\t{s.seed}\t\tpearson_r\t{s.pearson_r:.6g}")
        lines.append(f"seed\t{s.seed}\t\trmse_kcal\t{s.rmse:.6g}")
    for f in report.folds:
        r = "" if f.pearson_r is None else f"{f.pearson_r:.6g}"
        lines.append(f"fold\t{f.seed}\t{f.fold_index}\tpearson_r\t{r}")
        lines.append(f"fold\t{f.seed}\t{f.fold_index}\trmse_kcal\t{f.rmse:.6g}")
        members = ";".join(ids[i] for i in f.test_indices)
        lines.append(f"fold\t{f.seed}\t{f.fold_index}\ttest_ids\t{members}")
    Path(report_out).write_text("\n".join(lines) + "\n", encoding="utf-8")

    outputs = [report_out]
    if figure:
        fig_path = Path(report_out).with_suffix("").as_posix() + ".png"
        save_scatter_figure(
            y, report.oof_mean, report.pearson_r, report.rmse, fig_path,
            title=f"Rp={report.pearson_r:.3f}  RMSE={report.rmse:.3f} kcal/mol",
        )
        outputs.append(fig_path)
    _write_manifest(Path(report_out), "evaluate",
                    {"folds": folds, "seeds": list(seed_values), "trees": trees},
                    [matrix, labels], outputs)
    click.echo(f"pearson_r={report.pearson_r:.6g} rmse_kcal={report.rmse:.6g}")


@main.command()
@click.argument("matrix", type=click.Path())
@click.option("--model", "model_path", required=True, type=click.Path())
@click.option("--out", required=True, help="Predictions TSV path, or '-' for stdout.")
@_handle_errors
def predict(matrix, model_path, out):
    """Predict with a saved model; reproduces training predictions bit-exactly."""
    ids, X, _ = read_matrix(matrix)
    model = load_model(model_path)
    if X.shape[1] != model.means.size:
        raise JoinError(
            f"matrix has {X.shape[1]} columns but the model expects {model.means.size}"
        )
    preds = model.predict(X)
    body = "id\tprediction\n" + "".join(
        f"{i}\t{p!r}\n" for i, p in zip(ids, (float(p) for p in preds))
    )
    if out == "-":
        sys.stdout.write(body)
        return
    Path(out).write_text(body, encoding="utf-8")
    _write_manifest(Path(out), "predict", {}, [matrix, model_path], [out])
    click.echo(f"{len(ids)} predictions -> {out}")


if __name__ == "__main__":
    main()
