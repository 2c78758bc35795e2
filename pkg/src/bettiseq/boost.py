"""Least-squares gradient-boosted regression trees, deterministic end to end.

Each stage fits a depth-capped regression tree to the current residuals on a
seeded row subsample (without replacement); every split considers a seeded
sample of ceil(sqrt(p)) candidate features and all midpoints between
consecutive distinct values, maximizing variance reduction with ties broken
toward the lowest feature index and then the lowest threshold. Updates are
shrunk by the learning rate. Identical inputs, config, and seed give
bit-identical models, and the serialized model file round-trips exactly.

RNG consumption order (part of the determinism contract): one row
permutation per stage, then one feature draw per evaluated split, in tree
construction order (parent before children, left before right).

Cross-validation derives the per-fold model seed as
``cv_seed * 10007 + fold_index`` so folds are independent but reproducible.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from .errors import ConfigError, DataError

PKD_TO_KCAL_PER_MOL = 1.3633
DEFAULT_SEEDS = tuple(range(20))


def to_delta_g(label_value: float, label_unit: str) -> float:
    """Binding free energy in kcal/mol; pKd values convert by -1.3633 * pKd."""
    if label_unit == "pkd":
        return -PKD_TO_KCAL_PER_MOL * label_value
    if label_unit == "dg_kcal_per_mol":
        return float(label_value)
    raise ConfigError(f"unknown label unit: {label_unit!r}")


def pearson(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1 or a.size < 2:
        raise ConfigError("pearson needs two equal-length 1-D arrays of size >= 2")
    da = a - a.mean()
    db = b - b.mean()
    denom = math.sqrt(float(da @ da) * float(db @ db))
    if denom == 0.0:
        raise ConfigError("pearson is undefined when either input has zero variance")
    return float(da @ db) / denom


def rmse(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1 or a.size == 0:
        raise ConfigError("rmse needs two equal-length nonempty 1-D arrays")
    diff = a - b
    return math.sqrt(float(diff @ diff) / a.size)


def standardize_fit(matrix) -> tuple[np.ndarray, np.ndarray]:
    """Per-column mean and population standard deviation."""
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.size == 0:
        raise ConfigError("cannot standardize an empty matrix")
    return matrix.mean(axis=0), matrix.std(axis=0)


def standardize_apply(matrix, means, stds) -> np.ndarray:
    """Z-score with the given statistics; zero-variance columns map to 0."""
    matrix = np.asarray(matrix, dtype=np.float64)
    stds = np.asarray(stds, dtype=np.float64)
    inv = np.where(stds == 0.0, 0.0, np.divide(1.0, stds, where=stds != 0.0))
    return (matrix - np.asarray(means, dtype=np.float64)) * inv


@dataclass(frozen=True)
class GbdtConfig:
    n_estimators: int = 10_000
    max_depth: int = 7
    min_samples_split: int = 3
    learning_rate: float = 0.01
    max_features: str | int = "sqrt"
    subsample: float = 0.7
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_estimators < 1 or self.max_depth < 1 or self.min_samples_split < 2:
            raise ConfigError("n_estimators, max_depth >= 1 and min_samples_split >= 2 required")
        if not (0.0 < self.learning_rate):
            raise ConfigError("learning_rate must be positive")
        if not (0.0 < self.subsample <= 1.0):
            raise ConfigError("subsample must be in (0, 1]")
        if isinstance(self.max_features, int) and self.max_features < 1:
            raise ConfigError("max_features must be 'sqrt' or a positive integer")

    def n_candidate_features(self, p: int) -> int:
        if self.max_features == "sqrt":
            return min(p, math.ceil(math.sqrt(p)))
        return min(p, int(self.max_features))


@dataclass
class RegressionTree:
    """Array-encoded binary tree; feature == -1 marks a leaf."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    def predict(self, matrix: np.ndarray) -> np.ndarray:
        node = np.zeros(matrix.shape[0], dtype=np.int64)
        active = self.feature[node] >= 0
        while active.any():
            idx = np.flatnonzero(active)
            cur = node[idx]
            goes_left = matrix[idx, self.feature[cur]] <= self.threshold[cur]
            node[idx] = np.where(goes_left, self.left[cur], self.right[cur])
            active = self.feature[node] >= 0
        return self.value[node]


class _TreeBuilder:
    def __init__(self, X, residual, config: GbdtConfig, rng: np.random.Generator):
        self.X = X
        self.residual = residual
        self.config = config
        self.rng = rng
        self.n_candidates = config.n_candidate_features(X.shape[1])
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[float] = []

    def build(self, rows: np.ndarray) -> RegressionTree:
        self._grow(rows, depth=0)
        return RegressionTree(
            feature=np.asarray(self.feature, dtype=np.int64),
            threshold=np.asarray(self.threshold, dtype=np.float64),
            left=np.asarray(self.left, dtype=np.int64),
            right=np.asarray(self.right, dtype=np.int64),
            value=np.asarray(self.value, dtype=np.float64),
        )

    def _add_node(self) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(0.0)
        return len(self.feature) - 1

    def _grow(self, rows: np.ndarray, depth: int) -> int:
        node = self._add_node()
        r = self.residual[rows]
        if (
            depth >= self.config.max_depth
            or rows.size < self.config.min_samples_split
            or np.all(r == r[0])
        ):
            self.value[node] = float(r.mean())
            return node
        split = self._best_split(rows, r)
        if split is None:
            self.value[node] = float(r.mean())
            return node
        f, thr = split
        goes_left = self.X[rows, f] <= thr
        self.feature[node] = f
        self.threshold[node] = thr
        self.left[node] = self._grow(rows[goes_left], depth + 1)
        self.right[node] = self._grow(rows[~goes_left], depth + 1)
        return node

    def _best_split(self, rows: np.ndarray, r: np.ndarray) -> tuple[int, float] | None:
        candidates = np.sort(self.rng.choice(self.X.shape[1], size=self.n_candidates, replace=False))
        n = rows.size
        total = float(r.sum())
        parent_score = total * total / n
        best_gain = 0.0
        best: tuple[int, float] | None = None
        for f in candidates:
            x = self.X[rows, f]
            order = np.argsort(x, kind="stable")
            xs = x[order]
            boundaries = np.flatnonzero(xs[1:] != xs[:-1])
            if boundaries.size == 0:
                continue
            left_sum = np.cumsum(r[order])[boundaries]
            left_n = boundaries + 1.0
            score = left_sum**2 / left_n + (total - left_sum) ** 2 / (n - left_n)
            gain = score - parent_score
            pick = int(np.argmax(gain))
            if gain[pick] > best_gain:
                best_gain = float(gain[pick])
                b = boundaries[pick]
                best = (int(f), float((xs[b] + xs[b + 1]) / 2.0))
        return best


@dataclass
class GbdtModel:
    config: GbdtConfig
    baseline: float
    trees: list[RegressionTree]
    train_sse: list[float] = field(default_factory=list)

    def predict(self, matrix) -> np.ndarray:
        matrix = np.asarray(matrix, dtype=np.float64)
        out = np.full(matrix.shape[0], self.baseline, dtype=np.float64)
        lr = self.config.learning_rate
        for tree in self.trees:
            out += lr * tree.predict(matrix)
        return out


def gbdt_train(X, y, config: GbdtConfig) -> GbdtModel:
    """Stagewise least-squares boosting; see the module docstring for the
    determinism contract."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.size:
        raise ConfigError(f"bad shapes: X {X.shape}, y {y.shape}")
    if y.size < 2:
        raise ConfigError("training needs at least two rows")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise DataError("training inputs contain non-finite values")

    n = y.size
    rng = np.random.Generator(np.random.PCG64(config.seed))
    n_sub = max(1, int(config.subsample * n))
    baseline = float(y.mean())
    current = np.full(n, baseline, dtype=np.float64)
    model = GbdtModel(config, baseline, [])
    for _ in range(config.n_estimators):
        rows = rng.permutation(n)[:n_sub]
        rows.sort()
        residual = y - current
        tree = _TreeBuilder(X, residual, config, rng).build(rows)
        current += config.learning_rate * tree.predict(X)
        model.trees.append(tree)
        diff = y - current
        model.train_sse.append(float(diff @ diff))
    return model


def gbdt_predict(model: GbdtModel, X) -> np.ndarray:
    return model.predict(X)


MODEL_FORMAT = "bettiseq-model/1"


@dataclass
class AffinityModel:
    """A fitted standardizer plus the boosted ensemble, as saved to disk."""

    means: np.ndarray
    stds: np.ndarray
    gbdt: GbdtModel

    def predict(self, matrix) -> np.ndarray:
        return self.gbdt.predict(standardize_apply(matrix, self.means, self.stds))


def train_affinity_model(X, y, config: GbdtConfig) -> AffinityModel:
    means, stds = standardize_fit(X)
    gbdt = gbdt_train(standardize_apply(X, means, stds), y, config)
    return AffinityModel(means, stds, gbdt)


def save_model(model: AffinityModel, path: str | Path) -> None:
    # JSON floats use shortest round-trip repr, so reload is bit-exact.
    payload = {
        "format": MODEL_FORMAT,
        "config": asdict(model.gbdt.config),
        "scaler": {
            "means": model.means.tolist(),
            "stds": model.stds.tolist(),
        },
        "baseline": model.gbdt.baseline,
        "trees": [
            {
                "feature": tree.feature.tolist(),
                "threshold": tree.threshold.tolist(),
                "left": tree.left.tolist(),
                "right": tree.right.tolist(),
                "value": tree.value.tolist(),
            }
            for tree in model.gbdt.trees
        ],
    }
    Path(path).write_text(json.dumps(payload, indent=1) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> AffinityModel:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"model file not found: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"model file is not valid JSON: {exc}") from None
    if payload.get("format") != MODEL_FORMAT:
        raise DataError(f"unsupported model format: {payload.get('format')!r}")
    cfg_raw = dict(payload["config"])
    config = GbdtConfig(**cfg_raw)
    trees = [
        RegressionTree(
            feature=np.asarray(t["feature"], dtype=np.int64),
            threshold=np.asarray([float(v) for v in t["threshold"]], dtype=np.float64),
            left=np.asarray(t["left"], dtype=np.int64),
            right=np.asarray(t["right"], dtype=np.int64),
            value=np.asarray([float(v) for v in t["value"]], dtype=np.float64),
        )
        for t in payload["trees"]
    ]
    gbdt = GbdtModel(config, float(payload["baseline"]), trees)
    means = np.asarray([float(v) for v in payload["scaler"]["means"]], dtype=np.float64)
    stds = np.asarray([float(v) for v in payload["scaler"]["stds"]], dtype=np.float64)
    return AffinityModel(means, stds, gbdt)


@dataclass
class FoldRecord:
    seed: int
    fold_index: int
    test_indices: tuple[int, ...]
    scaler_means: np.ndarray
    scaler_stds: np.ndarray
    rmse: float
    pearson_r: float | None


@dataclass
class SeedResult:
    seed: int
    pearson_r: float
    rmse: float


@dataclass
class EvalReport:
    pearson_r: float
    rmse: float
    n_folds: int
    per_seed: list[SeedResult]
    folds: list[FoldRecord]
    oof_mean: np.ndarray | None = None


def cross_validate(
    X,
    y,
    n_folds: int = 10,
    seeds: tuple[int, ...] = DEFAULT_SEEDS,
    config: GbdtConfig = GbdtConfig(),
    standardize: bool = True,
    model_factory=None,
) -> EvalReport:
    """Shuffled k-fold CV repeated over seeds; metrics averaged over seeds.

    Per seed the rows are shuffled once and chunked into near-equal folds;
    each fold is predicted by a model trained on the remaining rows with the
    standardizer fit on those rows only. Per-seed metrics are computed over
    the concatenated out-of-fold predictions. ``model_factory(config, seed)``
    must return an object with fit(X, y) and predict(X); the default wraps
    the boosted ensemble.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.shape[0] != y.size:
        raise ConfigError("X and y row counts differ")
    if X.shape[0] < n_folds:
        raise ConfigError(f"{X.shape[0]} rows cannot fill {n_folds} folds")

    if model_factory is None:
        model_factory = _default_model_factory

    per_seed: list[SeedResult] = []
    folds: list[FoldRecord] = []
    oof_sum = np.zeros_like(y)
    for seed in seeds:
        rng = np.random.Generator(np.random.PCG64(seed))
        perm = rng.permutation(X.shape[0])
        chunks = np.array_split(perm, n_folds)
        oof = np.empty_like(y)
        for fold_index, test_idx in enumerate(chunks):
            train_idx = np.setdiff1d(perm, test_idx)
            if standardize:
                means, stds = standardize_fit(X[train_idx])
                X_train = standardize_apply(X[train_idx], means, stds)
                X_test = standardize_apply(X[test_idx], means, stds)
            else:
                means = np.zeros(X.shape[1])
                stds = np.ones(X.shape[1])
                X_train, X_test = X[train_idx], X[test_idx]
            model = model_factory(config, seed * 10007 + fold_index)
            model.fit(X_train, y[train_idx])
            preds = np.asarray(model.predict(X_test), dtype=np.float64)
            oof[test_idx] = preds
            try:
                fold_r = pearson(y[test_idx], preds)
            except ConfigError:
                fold_r = None
            folds.append(
                FoldRecord(
                    seed=seed,
                    fold_index=fold_index,
                    test_indices=tuple(int(i) for i in test_idx),
                    scaler_means=means,
                    scaler_stds=stds,
                    rmse=rmse(y[test_idx], preds),
                    pearson_r=fold_r,
                )
            )
        per_seed.append(SeedResult(seed, pearson(y, oof), rmse(y, oof)))
        oof_sum += oof

    return EvalReport(
        pearson_r=float(np.mean([s.pearson_r for s in per_seed])),
        rmse=float(np.mean([s.rmse for s in per_seed])),
        n_folds=n_folds,
        per_seed=per_seed,
        folds=folds,
        oof_mean=oof_sum / len(per_seed),
    )


class _GbdtRegressor:
    """fit/predict adapter over gbdt_train for cross_validate."""

    def __init__(self, config: GbdtConfig):
        self.config = config
        self.model: GbdtModel | None = None

    def fit(self, X, y) -> "_GbdtRegressor":
        self.model = gbdt_train(X, y, self.config)
        return self

    def predict(self, X) -> np.ndarray:
        if self.model is None:
            raise ConfigError("predict before fit")
        return self.model.predict(X)


def _default_model_factory(config: GbdtConfig, fold_seed: int) -> _GbdtRegressor:
    return _GbdtRegressor(GbdtConfig(**{**asdict(config), "seed": fold_seed}))
