"""Linear readout and expressivity diagnostics.

Training is a single pseudo-inverse: W = Y O^+ with singular values below
rcond times the largest discarded.  Expressivity is quantified by the
normalised singular-value spectrum of the Gram matrix O O^H and the
conditioned rank, the count of normalised singular values exceeding
k / n_samp.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_RCOND = 1e-10
DEFAULT_K = 3.0
SPECTRUM_FLOOR = 1e-6


@dataclass
class DesignMatrix:
    values: np.ndarray  # rows: features (+ trailing bias row); cols: points
    row_labels: list
    xs: np.ndarray
    flagged_columns: list

    @property
    def feature_rows(self) -> np.ndarray:
        """Rows excluding the bias row."""
        return self.values[:-1]


@dataclass
class ReadoutWeights:
    weights: np.ndarray  # outputs x features
    rcond: float
    rank_used: int


@dataclass
class RankReport:
    singular_values: np.ndarray  # descending, normalised to sum to 1
    conditioned_rank: int
    threshold: float


def design_matrix(evaluator, xs) -> DesignMatrix:
    """Stack feature vectors produced by `evaluator(x)` as columns and
    append a constant bias row.

    The evaluator returns a feature vector, or None for the all-rejected
    empty-feature condition; such columns are zeroed and flagged.
    """
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        raise ValueError("xs must be non-empty")
    columns = []
    flagged = []
    labels = None
    for j, x in enumerate(xs):
        result = evaluator(x)
        if result is None:
            flagged.append(j)
            columns.append(None)
            continue
        vec, row_labels = result
        if labels is None:
            labels = list(row_labels)
        columns.append(np.asarray(vec, dtype=float))
    if labels is None:
        raise ValueError("every column was rejected")
    n_rows = len(labels)
    values = np.zeros((n_rows + 1, len(xs)))
    values[-1, :] = 1.0
    for j, col in enumerate(columns):
        if col is not None:
            values[:-1, j] = col
    return DesignMatrix(
        values=values,
        row_labels=labels + ["bias"],
        xs=xs,
        flagged_columns=flagged,
    )


def train(matrix, labels, rcond: float = DEFAULT_RCOND) -> ReadoutWeights:
    """Least-squares readout via the singular-value-thresholded
    pseudo-inverse of the design matrix."""
    values = matrix.values if isinstance(matrix, DesignMatrix) else np.asarray(matrix)
    labels = np.atleast_2d(np.asarray(labels, dtype=float))
    if labels.shape[1] != values.shape[1]:
        raise ValueError("label count must match the number of columns")
    if not np.any(values):
        raise ValueError("design matrix is identically zero")
    u, s, vt = np.linalg.svd(values, full_matrices=False)
    keep = s > rcond * s[0]
    rank = int(np.count_nonzero(keep))
    s_inv = np.zeros_like(s)
    s_inv[keep] = 1.0 / s[keep]
    pinv = vt.T @ np.diag(s_inv) @ u.T
    return ReadoutWeights(weights=labels @ pinv, rcond=rcond, rank_used=rank)


def predict(weights: ReadoutWeights, features) -> np.ndarray:
    if isinstance(features, DesignMatrix):
        features = features.values
    features = np.asarray(features, dtype=float)
    if features.shape[0] != weights.weights.shape[1]:
        raise ValueError("feature dimension does not match the weights")
    return weights.weights @ features


def classify(weights: ReadoutWeights, features) -> np.ndarray:
    """Argmax decision over predicted class scores; ties break to the
    lowest class index."""
    scores = predict(weights, features)
    return np.argmax(scores, axis=0)


def conditioned_rank(
    matrix, n_samp: int, k: float = DEFAULT_K
) -> RankReport:
    """Count the normalised singular values of O O^H above k / n_samp."""
    if n_samp < 1:
        raise ValueError("n_samp must be >= 1")
    if k <= 0:
        raise ValueError("k must be positive")
    values = matrix.values if isinstance(matrix, DesignMatrix) else np.asarray(matrix)
    gram = values @ values.conj().T
    svals = np.linalg.svd(gram, compute_uv=False)
    svals = svals / svals.sum()
    threshold = k / n_samp
    return RankReport(
        singular_values=svals,
        conditioned_rank=int(np.count_nonzero(svals > threshold)),
        threshold=threshold,
    )


def fourier_spectrum(xs, values, floor: float = SPECTRUM_FLOOR):
    """Discrete Fourier spectrum of output functions on a uniform grid.

    Returns (frequencies, magnitudes, n_omega): non-negative frequency
    bins, per-row magnitudes, and the number of distinct non-DC bins whose
    magnitude (in any row) exceeds `floor` times the overall maximum.
    """
    xs = np.asarray(xs, dtype=float)
    values = np.atleast_2d(np.asarray(values, dtype=float))
    if values.shape[1] != xs.size:
        raise ValueError("values must have one column per grid point")
    if xs.size < 2:
        raise ValueError("grid must contain at least two points")
    steps = np.diff(xs)
    if not np.allclose(steps, steps[0], rtol=0, atol=1e-12 * max(1.0, abs(steps[0]))):
        raise ValueError("grid must be uniform")
    n = xs.size
    freqs = np.fft.rfftfreq(n, d=steps[0])
    mags = np.abs(np.fft.rfft(values, axis=1)) / n
    peak = mags.max()
    if peak == 0.0:
        return freqs, mags, 0
    above = (mags[:, 1:] > floor * peak).any(axis=0)
    return freqs, mags, int(np.count_nonzero(above))


def max_frequency(xs, values, floor: float = SPECTRUM_FLOOR) -> float:
    """Largest non-DC frequency with spectral weight above the floor."""
    freqs, mags, n_omega = fourier_spectrum(xs, values, floor)
    if n_omega == 0:
        return 0.0
    above = (mags[:, 1:] > floor * mags.max()).any(axis=0)
    return float(freqs[1:][above].max())


def metrics(predictions, labels, task: str) -> dict:
    """Task metrics: MSE for regression; accuracy, confusion matrix,
    multiclass MCC and the majority-class baseline for classification."""
    predictions = np.asarray(predictions)
    labels = np.asarray(labels)
    if predictions.size == 0 or labels.size == 0:
        raise ValueError("metrics require non-empty inputs")
    if predictions.shape[-1] != labels.shape[-1]:
        raise ValueError("predictions and labels must have equal length")
    if task == "regression":
        return {"mse": float(np.mean((predictions - labels) ** 2))}
    if task != "classification":
        raise ValueError(f"unknown task {task!r}")
    classes = int(max(predictions.max(), labels.max())) + 1
    confusion = np.zeros((classes, classes), dtype=int)
    for p, t in zip(predictions.astype(int), labels.astype(int)):
        confusion[t, p] += 1
    majority = int(np.argmax(np.bincount(labels.astype(int))))
    return {
        "accuracy": float(np.mean(predictions == labels)),
        "confusion": confusion,
        "mcc": matthews_corrcoef(confusion),
        "majority_class": majority,
        "majority_accuracy": float(np.mean(labels == majority)),
    }


def matthews_corrcoef(confusion) -> float:
    """Generalised multiclass MCC from a confusion matrix (true x predicted);
    degenerate denominators give 0."""
    c = np.asarray(confusion, dtype=float)
    t = c.sum(axis=1)  # true counts
    p = c.sum(axis=0)  # predicted counts
    s = c.sum()
    correct = np.trace(c)
    num = correct * s - p @ t
    den = np.sqrt((s**2 - p @ p) * (s**2 - t @ t))
    if den == 0:
        return 0.0
    return float(num / den)


@dataclass
class PCAModel:
    mean: np.ndarray
    components: np.ndarray  # n_components x features
    eigenvalues: np.ndarray

    def transform(self, data) -> np.ndarray:
        return (np.asarray(data, dtype=float) - self.mean) @ self.components.T


def pca(train_features, n_components: int) -> PCAModel:
    """Mean-centred principal components, eigenvalues descending, with the
    largest-magnitude entry of each component made positive."""
    data = np.asarray(train_features, dtype=float)
    if n_components > min(data.shape):
        raise ValueError("n_components exceeds the available rank")
    mean = data.mean(axis=0)
    centred = data - mean
    _, s, vt = np.linalg.svd(centred, full_matrices=False)
    components = vt[:n_components]
    for i, row in enumerate(components):
        j = int(np.argmax(np.abs(row)))
        if row[j] < 0:
            components[i] = -row
    eigenvalues = s[:n_components] ** 2 / max(1, data.shape[0] - 1)
    return PCAModel(mean=mean, components=components, eigenvalues=eigenvalues)
