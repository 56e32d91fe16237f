"""Experiment harness: datasets, k-shot splits, simplex grid search, reports.

The search protocol: for every seed, draw a k-shot split, score every mixing
configuration on the validation nodes, keep the configuration with the best
validation accuracy (ties to the earliest in enumeration order), and report
its test accuracy; aggregate mean and sample standard deviation over seeds.

``run_config`` and ``grid_search`` share one evaluation path built on a
precomputed per-hop feature basis (X, A1 X, A2 X), so re-running any selected
configuration reproduces the grid's numbers bit for bit.
"""

from __future__ import annotations

import json
import time
import warnings
from dataclasses import dataclass

import numpy as np

from .classifier import (
    Prediction,
    Split,
    TrainingParams,
    normalize_rows,
    predict,
    tcs_weights,
    train_weights_gd,
)
from .errors import ConfigError, DatasetError, SplitError
from .hypergraph import (
    Hypergraph,
    LabelSet,
    load_features,
    load_hypergraph,
    load_labels,
)
from .propagation import (
    BaselineRecipe,
    NormalizationKind,
    PropagationConfig,
    build_A1_star,
    build_A2_star,
    build_baseline_adjacency,
    plain_adjacency,
)

VARIANTS = ("full", "no_rap", "no_tcs", "no_both", "linearized_hgnn")

# which variants mix hops with alphas, and which train weights by descent
_ALPHA_MIXING = {"full": True, "no_rap": True, "no_tcs": True, "no_both": True,
                 "linearized_hgnn": False}
_GD_WEIGHTS = {"full": False, "no_rap": False, "no_tcs": True, "no_both": True,
               "linearized_hgnn": True}


@dataclass(frozen=True)
class Dataset:
    """A hypergraph with per-node features and labels, plus printable names."""

    name: str
    hypergraph: Hypergraph
    features: np.ndarray
    labels: LabelSet
    feature_names: tuple[str, ...] | None = None

    def __post_init__(self):
        X = np.asarray(self.features, dtype=np.float64)
        object.__setattr__(self, "features", X)
        n = self.hypergraph.num_nodes
        if X.ndim != 2 or X.shape[0] != n:
            raise DatasetError(
                f"features have shape {X.shape}, expected ({n}, num_features)"
            )
        if self.labels.num_nodes != n:
            raise DatasetError(
                f"{self.labels.num_nodes} labels for {n} nodes"
            )
        if self.feature_names is not None and len(self.feature_names) != X.shape[1]:
            raise DatasetError(
                f"{len(self.feature_names)} feature names for {X.shape[1]} features"
            )

    @property
    def num_nodes(self) -> int:
        return self.hypergraph.num_nodes

    @property
    def num_features(self) -> int:
        return self.features.shape[1]


def load_dataset(edges_path, features_path, labels_path, name: str | None = None) -> Dataset:
    """Assemble a Dataset from the three on-disk pieces.

    Features are used exactly as stored (no scaling or binarization at
    ingestion); the classifier's row normalization after propagation is the
    only rescaling anywhere in the pipeline.
    """
    hg = load_hypergraph(edges_path)
    X, feature_names = load_features(features_path)
    if X.shape[0] != hg.num_nodes:
        raise DatasetError(
            f"{features_path}: {X.shape[0]} feature rows for {hg.num_nodes} nodes"
        )
    labels = load_labels(labels_path, hg.num_nodes)
    if name is None:
        import os
        name = os.path.splitext(os.path.basename(str(edges_path)))[0]
    return Dataset(name=name, hypergraph=hg, features=X, labels=labels,
                   feature_names=feature_names)


@dataclass(frozen=True)
class SimplexGrid:
    """Lattice of mixing-weight triples on the probability simplex."""

    alphas: tuple[tuple[float, float, float], ...]
    denominator: int

    def __len__(self) -> int:
        return len(self.alphas)

    def __iter__(self):
        return iter(self.alphas)


def simplex_grid(denominator: int) -> SimplexGrid:
    """All triples (a/q, b/q, c/q) with nonnegative integers a+b+c = q.

    Enumerated lexicographically by (a, b); the count is (q+1)(q+2)/2, which
    is 55 at the default denominator 9.
    """
    if not isinstance(denominator, (int, np.integer)) or denominator < 1:
        raise ConfigError(f"denominator must be a positive integer, got {denominator!r}")
    q = int(denominator)
    triples = []
    for a in range(q + 1):
        for b in range(q - a + 1):
            c = q - a - b
            triples.append((a / q, b / q, c / q))
    return SimplexGrid(alphas=tuple(triples), denominator=q)


def make_kshot_split(labels: LabelSet, k: int, seed: int) -> Split:
    """Sample k training and k validation nodes per class; the rest is test.

    Within each class (taken in ascending id order) 2k members are drawn
    without replacement from the seeded generator; the first k go to train,
    the next k to validation. Deterministic per (labels, k, seed).
    """
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ConfigError(f"k must be a positive integer, got {k!r}")
    rng = np.random.Generator(np.random.Philox(key=seed))
    n = labels.num_nodes
    train = np.zeros(n, dtype=bool)
    val = np.zeros(n, dtype=bool)
    for cls in range(labels.num_classes):
        members = np.flatnonzero(labels.labels == cls)
        if members.size < 2 * k:
            raise SplitError(
                f"class {cls} has {members.size} member(s), needs at least {2 * k} "
                f"for a {k}-shot split"
            )
        pick = rng.choice(members, size=2 * k, replace=False)
        train[pick[:k]] = True
        val[pick[k:]] = True
    test = ~(train | val)
    if not test.any():
        warnings.warn("every node is in train or validation; test mask is empty",
                      stacklevel=2)
    return Split(train_mask=train, val_mask=val, test_mask=test)


def evaluate_accuracy(pred: Prediction, mask: np.ndarray, labels: LabelSet) -> float:
    """Fraction of masked nodes whose hard label matches the truth."""
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise SplitError("cannot evaluate accuracy on an empty mask")
    return float(np.mean(pred.hard_labels[mask] == labels.labels[mask]))


def _variant_basis(
    dataset: Dataset, kind: NormalizationKind, variant: str
) -> list[np.ndarray]:
    """Precompute the propagated feature blocks a variant mixes.

    Alpha-mixing variants get [X, A1 X, A2 X] with the variant's one- and
    two-hop matrices; linearized_hgnn gets the single block of its fixed
    two-hop propagation.
    """
    if variant not in VARIANTS:
        raise ConfigError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    X = dataset.features
    hg = dataset.hypergraph
    if variant in ("full", "no_tcs"):
        A1 = build_A1_star(hg, kind)
        A2 = build_A2_star(hg, kind, A1)
        return [X, np.asarray(A1 @ X), np.asarray(A2 @ X)]
    if variant in ("no_rap", "no_both"):
        A = plain_adjacency(hg, kind)
        X1 = np.asarray(A @ X)
        return [X, X1, np.asarray(A @ X1)]
    A = build_baseline_adjacency(hg, BaselineRecipe.HGNN, 1)
    return [np.asarray(A @ (A @ X))]


def _mixed_embedding(basis: list[np.ndarray], alphas) -> np.ndarray:
    if len(basis) == 1:
        mixed = basis[0]
    else:
        a0, a1, a2 = alphas
        mixed = a0 * basis[0] + a1 * basis[1] + a2 * basis[2]
    return normalize_rows(mixed)


def _weights_for(Z, split, labels, variant, training):
    if _GD_WEIGHTS[variant]:
        return train_weights_gd(Z, split, labels, training or TrainingParams())
    return tcs_weights(Z, split, labels)


def _eval_config(
    basis: list[np.ndarray],
    alphas: tuple[float, float, float],
    split: Split,
    labels: LabelSet,
    variant: str,
    training: TrainingParams | None,
) -> tuple[float, float]:
    """One (alphas, variant) evaluation; the single arithmetic path everywhere."""
    Z = _mixed_embedding(basis, alphas)
    W = _weights_for(Z, split, labels, variant, training)
    pred = predict(Z, W)
    return (
        evaluate_accuracy(pred, split.val_mask, labels),
        evaluate_accuracy(pred, split.test_mask, labels),
    )


def config_weights(
    dataset: Dataset,
    config: PropagationConfig,
    split: Split,
    variant: str = "full",
    training: TrainingParams | None = None,
) -> np.ndarray:
    """The weight matrix run_config would use for this configuration."""
    basis = _variant_basis(dataset, config.normalization, variant)
    Z = _mixed_embedding(basis, config.alphas)
    return _weights_for(Z, split, dataset.labels, variant, training)


def run_config(
    dataset: Dataset,
    config: PropagationConfig,
    split: Split,
    variant: str = "full",
    training: TrainingParams | None = None,
) -> tuple[float, float]:
    """Validation and test accuracy of one configuration under one split.

    The variant picks the propagation route (redundancy-removed hops for
    full/no_tcs, plain normalization for no_rap/no_both, fixed two-hop
    HGNN normalization with no mixing for linearized_hgnn) and the weight
    route (closed form for full/no_rap, gradient descent otherwise).
    config.alphas and config.normalization are honored; the propagation
    route follows the variant.
    """
    basis = _variant_basis(dataset, config.normalization, variant)
    return _eval_config(basis, config.alphas, split, dataset.labels, variant, training)


@dataclass(frozen=True)
class SeedResult:
    seed: int
    selected_alphas: tuple[float, float, float]
    val_acc: float
    test_acc: float


@dataclass(frozen=True)
class RunResult:
    """Grid-search outcome: one selected configuration per seed plus aggregates."""

    dataset: str
    k: int
    variant: str
    grid_denominator: int
    seeds: tuple[int, ...]
    per_seed: tuple[SeedResult, ...]
    mean_test: float
    std_test: float
    timing_ms: dict

    def to_json(self, include_timing: bool = False) -> str:
        """Serialize with a fixed key order; timing is null unless asked for,
        so identical runs serialize to identical bytes."""
        payload = {
            "dataset": self.dataset,
            "k": self.k,
            "variant": self.variant,
            "grid_denominator": self.grid_denominator,
            "seeds": list(self.seeds),
            "per_seed": [
                {
                    "seed": r.seed,
                    "selected_alphas": list(r.selected_alphas),
                    "val_acc": r.val_acc,
                    "test_acc": r.test_acc,
                }
                for r in self.per_seed
            ],
            "mean_test": self.mean_test,
            "std_test": self.std_test,
            "timing_ms": dict(self.timing_ms) if include_timing else None,
        }
        return json.dumps(payload, indent=2) + "\n"


def grid_search(
    dataset: Dataset,
    grid: SimplexGrid,
    k: int,
    seeds,
    variant: str = "full",
    normalization: NormalizationKind = NormalizationKind.SYMMETRIC,
    training: TrainingParams | None = None,
) -> RunResult:
    """Best-validation selection over the grid, independently per seed.

    Every configuration is evaluated for every seed; within a seed the
    configuration with the highest validation accuracy wins, earliest first
    on ties. The reported spread is the sample standard deviation (ddof=1)
    over seeds, or 0.0 for a single seed.
    """
    seeds = tuple(int(s) for s in seeds)
    if len(grid) == 0 or len(seeds) == 0:
        raise ConfigError("grid and seeds must both be nonempty")
    t0 = time.perf_counter()
    basis = _variant_basis(dataset, normalization, variant)
    t1 = time.perf_counter()
    per_seed = []
    for seed in seeds:
        split = make_kshot_split(dataset.labels, k, seed)
        best_idx, best_val, best_test = -1, -np.inf, 0.0
        for idx, alphas in enumerate(grid):
            val_acc, test_acc = _eval_config(
                basis, alphas, split, dataset.labels, variant, training
            )
            if val_acc > best_val:
                best_idx, best_val, best_test = idx, val_acc, test_acc
        per_seed.append(SeedResult(
            seed=seed,
            selected_alphas=grid.alphas[best_idx],
            val_acc=float(best_val),
            test_acc=float(best_test),
        ))
    t2 = time.perf_counter()
    tests = np.array([r.test_acc for r in per_seed], dtype=np.float64)
    std = float(np.std(tests, ddof=1)) if tests.size > 1 else 0.0
    timing = {"propagation_ms": (t1 - t0) * 1e3, "search_ms": (t2 - t1) * 1e3}
    return RunResult(
        dataset=dataset.name,
        k=int(k),
        variant=variant,
        grid_denominator=grid.denominator,
        seeds=seeds,
        per_seed=tuple(per_seed),
        mean_test=float(tests.mean()),
        std_test=std,
        timing_ms=timing,
    )


@dataclass(frozen=True)
class WeightReport:
    """Weight matrix entries with per-feature ranks across classes.

    ranks[i, j] = 1 means class j has the largest weight in feature i's row
    (ties go to the lower class id), mirroring how shaded importance tables
    are read row by row.
    """

    values: np.ndarray
    feature_names: tuple[str, ...]
    class_names: tuple[str, ...]
    ranks: np.ndarray

    def to_csv(self) -> str:
        import csv as _csv
        import io
        buf = io.StringIO()
        writer = _csv.writer(buf, lineterminator="\n")
        writer.writerow(["feature", *self.class_names])
        for i, name in enumerate(self.feature_names):
            writer.writerow([name, *[repr(float(v)) for v in self.values[i]]])
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {
            "features": list(self.feature_names),
            "classes": list(self.class_names),
            "values": [[float(v) for v in row] for row in self.values],
            "ranks": [[int(r) for r in row] for row in self.ranks],
        }
        return json.dumps(payload, indent=2) + "\n"


def explain_weights(
    W: np.ndarray,
    feature_names=None,
    class_names=None,
) -> WeightReport:
    """Tabulate a (features x classes) weight matrix as an importance report.

    Missing name lists fall back to generic f0.., c0..; provided lists must
    match the matrix dimensions.
    """
    W = np.asarray(W, dtype=np.float64)
    if W.ndim != 2:
        raise DatasetError(f"weight matrix must be 2-d, got shape {W.shape}")
    d, c = W.shape
    if feature_names is None:
        feature_names = tuple(f"f{i}" for i in range(d))
    else:
        feature_names = tuple(str(s) for s in feature_names)
        if len(feature_names) != d:
            raise DatasetError(f"{len(feature_names)} feature names for {d} rows")
    if class_names is None:
        class_names = tuple(f"c{i}" for i in range(c))
    else:
        class_names = tuple(str(s) for s in class_names)
        if len(class_names) != c:
            raise DatasetError(f"{len(class_names)} class names for {c} columns")
    ranks = np.empty_like(W, dtype=np.int64)
    for i in range(d):
        order = np.argsort(-W[i], kind="stable")
        ranks[i, order] = np.arange(1, c + 1)
    return WeightReport(values=W.copy(), feature_names=feature_names,
                        class_names=class_names, ranks=ranks)
