"""Statistical analysis pipeline over performance datasets.

Correlations are Pearson correlations between order columns (each column is
an efficiency profile over the dataset functions; steps and efficiency
differ only by an affine map, so the coefficients coincide). Clustering is
agglomerative with Euclidean distance and average linkage on row-mean-
centered data; ties break toward the lowest cluster index. PCA is
covariance-based without variable standardization, the only choice under
which the baseline dataset's total variance reproduces. ANOVA p-values come
from the regularized incomplete beta form of the F survival function, and
Tukey adjusted p-values from the studentized range distribution.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import special
from scipy import stats as _scipy_stats

from .algebra import Dataset
from .errors import InsufficientData, ValidationError
from .search import PerfMatrix

#: Eigenvalues closer than this are treated as one degenerate block.
DEGENERACY_TOL = 1e-9

QUARTILE_METHOD = "linear interpolation of order statistics (R-7)"


# ---------------------------------------------------------------------------
# correlation


@dataclass(frozen=True)
class CorrelationMatrix:
    """Symmetric Pearson matrix; undefined cells (zero variance) are None."""

    labels: tuple[str, ...]
    cells: tuple[tuple[float | None, ...], ...]
    zero_variance: tuple[str, ...] = ()

    def cell(self, a: str, b: str) -> float | None:
        return self.cells[self.labels.index(a)][self.labels.index(b)]

    def to_csv(self, decimals: int = 4) -> str:
        lines = ["," + ",".join(self.labels)]
        for lab, row in zip(self.labels, self.cells):
            cells = ["" if c is None else f"{c:.{decimals}f}" for c in row]
            lines.append(lab + "," + ",".join(cells))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {
                "labels": list(self.labels),
                "cells": [list(row) for row in self.cells],
                "zero_variance": list(self.zero_variance),
            },
            sort_keys=True,
        )


def correlation_matrix(dataset: Dataset | PerfMatrix) -> CorrelationMatrix:
    """Pearson correlation between every pair of order columns."""
    matrix = dataset.eff if isinstance(dataset, Dataset) else dataset
    data = np.asarray(matrix.as_floats(), dtype=float)
    if data.shape[0] < 2:
        raise InsufficientData("correlation needs at least two rows")
    labels = matrix.col_labels
    cols = data.T
    centered = cols - cols.mean(axis=1, keepdims=True)
    norms = np.sqrt((centered**2).sum(axis=1))
    zero_var = [labels[j] for j in range(len(labels)) if norms[j] == 0.0]
    k = len(labels)
    cells: list[list[float | None]] = [[None] * k for _ in range(k)]
    for a in range(k):
        for b in range(a, k):
            if norms[a] == 0.0 or norms[b] == 0.0:
                value = None
            elif np.array_equal(centered[a], centered[b]):
                value = 1.0
            elif np.array_equal(centered[a], -centered[b]):
                value = -1.0
            else:
                value = float(centered[a] @ centered[b] / (norms[a] * norms[b]))
                value = min(1.0, max(-1.0, value))
            cells[a][b] = cells[b][a] = value
    return CorrelationMatrix(labels, tuple(tuple(row) for row in cells), tuple(zero_var))


def row_mean_center(matrix: PerfMatrix) -> PerfMatrix:
    """Subtract each row's mean; every output row sums to zero exactly."""
    if not matrix.cells:
        raise ValidationError("cannot center an empty matrix")
    cells = []
    for row in matrix.cells:
        mean = Fraction(sum(Fraction(c) for c in row), len(row))
        cells.append(tuple(Fraction(c) - mean for c in row))
    return PerfMatrix(matrix.row_labels, matrix.col_labels, tuple(cells), kind="centered")


# ---------------------------------------------------------------------------
# hierarchical clustering


@dataclass(frozen=True)
class Dendrogram:
    """Merge history of agglomerative clustering.

    Leaves are numbered 0..L-1 in ``leaf_labels`` order; the cluster formed
    by merge step i (0-based) gets id L + i, as in the usual linkage-matrix
    convention.
    """

    leaf_labels: tuple[str, ...]
    merges: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        if len(self.merges) != len(self.leaf_labels) - 1:
            raise ValidationError("a dendrogram over L leaves needs exactly L-1 merges")

    def to_csv(self) -> str:
        lines = ["step,cluster_a,cluster_b,distance"]
        for i, (a, b, d) in enumerate(self.merges, 1):
            lines.append(f"{i},{a},{b},{d!r}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {"leaf_labels": list(self.leaf_labels), "merges": [list(m) for m in self.merges]},
            sort_keys=True,
        )

    def members_of(self, cluster_id: int) -> frozenset[int]:
        """Leaf indices contained in a cluster id (leaf ids map to themselves)."""
        n = len(self.leaf_labels)
        if cluster_id < n:
            return frozenset([cluster_id])
        a, b, _ = self.merges[cluster_id - n]
        return self.members_of(a) | self.members_of(b)

    def merge_step_joining(self, leaf_a: int, leaf_b: int) -> int:
        """1-based step at which two leaves first share a cluster."""
        n = len(self.leaf_labels)
        for i, (a, b, _) in enumerate(self.merges, 1):
            members = self.members_of(n + i - 1)
            if leaf_a in members and leaf_b in members:
                return i
        raise ValidationError("leaves never merge")  # unreachable on a full dendrogram


def hierarchical_cluster(matrix: PerfMatrix, axis: str = "cols") -> Dendrogram:
    """Average-linkage agglomeration over row-mean-centered data.

    ``axis="cols"`` clusters the order columns (the usual view), ``"rows"``
    the function rows. Distances are Euclidean; with average linkage the
    merge distances are non-decreasing. Ties pick the pair with the lowest
    cluster indices.
    """
    if axis not in ("rows", "cols"):
        raise ValidationError("axis must be 'rows' or 'cols'")
    centered = np.asarray(row_mean_center(matrix).as_floats(), dtype=float)
    items = centered.T if axis == "cols" else centered
    labels = matrix.col_labels if axis == "cols" else matrix.row_labels
    n = items.shape[0]
    if n < 2:
        raise InsufficientData("clustering needs at least two items")

    # distance lookup between live clusters, Lance-Williams average update
    dist: dict[tuple[int, int], float] = {}
    for i in range(n):
        for j in range(i + 1, n):
            dist[(i, j)] = float(np.linalg.norm(items[i] - items[j]))
    sizes = {i: 1 for i in range(n)}
    merges = []
    next_id = n
    for _ in range(n - 1):
        (a, b), d = min(dist.items(), key=lambda kv: (kv[1], kv[0]))
        merges.append((a, b, d))
        new_size = sizes[a] + sizes[b]
        for c in list(sizes):
            if c in (a, b):
                continue
            da = dist.pop((min(a, c), max(a, c)))
            db = dist.pop((min(b, c), max(b, c)))
            dist[(c, next_id)] = (sizes[a] * da + sizes[b] * db) / new_size
        del dist[(a, b)]
        del sizes[a], sizes[b]
        sizes[next_id] = new_size
        next_id += 1
    return Dendrogram(tuple(labels), tuple(merges))


# ---------------------------------------------------------------------------
# PCA


@dataclass(frozen=True)
class PcaResult:
    eigenvalues: tuple[float, ...]
    explained_ratio: tuple[float, ...]
    loadings: np.ndarray  # variables x components
    scores: np.ndarray  # observations x components
    total_variance: float
    variable_labels: tuple[str, ...]
    observation_labels: tuple[str, ...]
    degenerate_leading_block: int  # size of the leading equal-eigenvalue block

    def aggregated_squared_loadings(self, components: int | None = None) -> dict[str, float]:
        """Per-variable summed squared loadings over the leading components.

        Within a degenerate eigenvalue block individual axes are arbitrary,
        but the summed squared loadings over the block are rotation
        invariant, so they are the reportable quantity.
        """
        k = components if components is not None else max(1, self.degenerate_leading_block)
        agg = (self.loadings[:, :k] ** 2).sum(axis=1)
        return {lab: float(v) for lab, v in zip(self.variable_labels, agg)}

    def to_json(self) -> str:
        obj = {
            "eigenvalues": list(self.eigenvalues),
            "explained_ratio": list(self.explained_ratio),
            "total_variance": self.total_variance,
            "variable_labels": list(self.variable_labels),
            "observation_labels": list(self.observation_labels),
            "degenerate_leading_block": self.degenerate_leading_block,
            "loadings": self.loadings.tolist(),
            "scores": self.scores.tolist(),
            "aggregated_squared_loadings": self.aggregated_squared_loadings(),
        }
        return json.dumps(obj, sort_keys=True)

    def loadings_csv(self) -> str:
        comps = [f"pc{c + 1}" for c in range(self.loadings.shape[1])]
        lines = ["variable," + ",".join(comps)]
        for lab, row in zip(self.variable_labels, self.loadings):
            lines.append(lab + "," + ",".join(repr(float(x)) for x in row))
        return "\n".join(lines) + "\n"

    def scores_csv(self) -> str:
        comps = [f"pc{c + 1}" for c in range(self.scores.shape[1])]
        lines = ["observation," + ",".join(comps)]
        for lab, row in zip(self.observation_labels, self.scores):
            lines.append(lab + "," + ",".join(repr(float(x)) for x in row))
        return "\n".join(lines) + "\n"


def pca_matrix(
    data: np.ndarray,
    variable_labels: Sequence[str] | None = None,
    observation_labels: Sequence[str] | None = None,
) -> PcaResult:
    """Covariance PCA of an observations x variables array (no scaling).

    Variables are mean-centered; the sample covariance (divisor N-1) is
    eigendecomposed; eigenvalues are reported non-increasing and each
    eigenvector's sign is fixed so its largest-magnitude entry is positive.
    """
    x = np.asarray(data, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise InsufficientData("PCA needs at least two observations")
    nobs, nvar = x.shape
    centered = x - x.mean(axis=0)
    cov = centered.T @ centered / (nobs - 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals = eigvals[order]
    eigvecs = eigvecs[:, order]
    eigvals = np.maximum(eigvals, 0.0)  # covariance is PSD; negatives are rounding noise
    for c in range(eigvecs.shape[1]):
        col = eigvecs[:, c]
        if col[np.argmax(np.abs(col))] < 0:
            eigvecs[:, c] = -col
    total = float(eigvals.sum())
    ratios = tuple(float(v / total) for v in eigvals) if total > 0 else tuple(0.0 for _ in eigvals)
    block = 1
    while block < len(eigvals) and abs(eigvals[block] - eigvals[block - 1]) < DEGENERACY_TOL:
        block += 1
    return PcaResult(
        eigenvalues=tuple(float(v) for v in eigvals),
        explained_ratio=ratios,
        loadings=eigvecs,
        scores=centered @ eigvecs,
        total_variance=total,
        variable_labels=tuple(variable_labels or [f"x{i + 1}" for i in range(nvar)]),
        observation_labels=tuple(observation_labels or [f"obs{i + 1}" for i in range(nobs)]),
        degenerate_leading_block=block,
    )


def pca(dataset: Dataset | PerfMatrix) -> PcaResult:
    """Dataset PCA: observations are the orders, variables are the functions."""
    matrix = dataset.eff if isinstance(dataset, Dataset) else dataset
    data = np.asarray(matrix.as_floats(), dtype=float).T
    return pca_matrix(data, variable_labels=matrix.row_labels, observation_labels=matrix.col_labels)


# ---------------------------------------------------------------------------
# ANOVA / Tukey


@dataclass(frozen=True)
class AnovaTable:
    ss_between: float
    ss_within: float
    ss_total: float
    df_between: int
    df_within: int
    df_total: int
    ms_between: float
    ms_within: float
    f_stat: float
    p_value: float

    @property
    def df(self) -> tuple[int, int, int]:
        return (self.df_between, self.df_within, self.df_total)

    def to_json(self) -> str:
        return json.dumps(
            {
                "ss_between": self.ss_between,
                "ss_within": self.ss_within,
                "ss_total": self.ss_total,
                "df": [self.df_between, self.df_within, self.df_total],
                "ms_between": self.ms_between,
                "ms_within": self.ms_within,
                "f_stat": self.f_stat,
                "p_value": self.p_value,
            },
            sort_keys=True,
        )

    def to_csv(self) -> str:
        lines = [
            "source,ss,df,ms,f,p",
            f"between,{self.ss_between!r},{self.df_between},{self.ms_between!r},"
            f"{self.f_stat!r},{self.p_value!r}",
            f"within,{self.ss_within!r},{self.df_within},{self.ms_within!r},,",
            f"total,{self.ss_total!r},{self.df_total},,,",
        ]
        return "\n".join(lines) + "\n"


def _f_sf(f: float, df1: int, df2: int) -> float:
    """Survival function of the F distribution via the regularized incomplete beta."""
    if math.isinf(f):
        return 0.0
    if f <= 0:
        return 1.0
    x = df2 / (df2 + df1 * f)
    return float(special.betainc(df2 / 2.0, df1 / 2.0, x))


def anova_oneway(groups: Sequence[Sequence[float]]) -> AnovaTable:
    """One-way ANOVA by the standard sum-of-squares decomposition."""
    if len(groups) < 2 or any(len(g) < 2 for g in groups):
        raise InsufficientData("ANOVA needs >= 2 groups with >= 2 values each")
    data = [np.asarray(g, dtype=float) for g in groups]
    k = len(data)
    n_total = sum(len(g) for g in data)
    grand = math.fsum(float(g.sum()) for g in data) / n_total
    ssb = math.fsum(len(g) * (float(g.mean()) - grand) ** 2 for g in data)
    ssw = math.fsum(float(((g - g.mean()) ** 2).sum()) for g in data)
    df_b, df_w = k - 1, n_total - k
    msb, msw = ssb / df_b, ssw / df_w
    if msw == 0.0:
        f = 0.0 if msb == 0.0 else math.inf
    else:
        f = msb / msw
    return AnovaTable(
        ss_between=ssb,
        ss_within=ssw,
        ss_total=ssb + ssw,
        df_between=df_b,
        df_within=df_w,
        df_total=n_total - 1,
        ms_between=msb,
        ms_within=msw,
        f_stat=f,
        p_value=_f_sf(f, df_b, df_w),
    )


@dataclass(frozen=True)
class TukeyRow:
    pair: tuple[str, str]
    mean_difference: float
    ci_low: float
    ci_high: float
    p_adjusted: float


def tukey_rows_json(rows: Sequence[TukeyRow]) -> str:
    return json.dumps(
        [
            {
                "pair": list(r.pair),
                "mean_difference": r.mean_difference,
                "ci_low": r.ci_low,
                "ci_high": r.ci_high,
                "p_adjusted": r.p_adjusted,
            }
            for r in rows
        ],
        sort_keys=True,
    )


def tukey_rows_csv(rows: Sequence[TukeyRow]) -> str:
    lines = ["group_a,group_b,mean_difference,ci_low,ci_high,p_adjusted"]
    for r in rows:
        lines.append(
            f"{r.pair[0]},{r.pair[1]},{r.mean_difference!r},{r.ci_low!r},{r.ci_high!r},{r.p_adjusted!r}"
        )
    return "\n".join(lines) + "\n"


def tukey_hsd(
    groups: Sequence[Sequence[float]],
    alpha: float = 0.05,
    labels: Sequence[str] | None = None,
) -> list[TukeyRow]:
    """All pairwise mean comparisons after one-way ANOVA.

    The adjusted p-value of a pair is the studentized-range survival value
    of q = |diff| / sqrt(MSW/2 * (1/n_i + 1/n_j)); the confidence bounds use
    the alpha critical value of the same distribution.
    """
    if not 0 < alpha < 1:
        raise ValidationError("alpha must lie in (0, 1)")
    table = anova_oneway(groups)
    data = [np.asarray(g, dtype=float) for g in groups]
    k = len(data)
    names = list(labels) if labels is not None else [f"group{i + 1}" for i in range(k)]
    if len(names) != k:
        raise ValidationError("one label per group required")
    msw, dfw = table.ms_within, table.df_within
    q_crit = float(_scipy_stats.studentized_range.ppf(1 - alpha, k, dfw))
    rows = []
    for i in range(k):
        for j in range(i + 1, k):
            diff = float(data[i].mean() - data[j].mean())
            se = math.sqrt(msw / 2.0 * (1.0 / len(data[i]) + 1.0 / len(data[j])))
            if se == 0.0:
                p = 1.0 if diff == 0.0 else 0.0
                half = 0.0
            else:
                q = abs(diff) / se
                p = float(_scipy_stats.studentized_range.sf(q, k, dfw))
                p = min(1.0, max(0.0, p))
                half = q_crit * se
            rows.append(TukeyRow((names[i], names[j]), diff, diff - half, diff + half, p))
    return rows


# ---------------------------------------------------------------------------
# boxplot


@dataclass(frozen=True)
class BoxplotSummary:
    q1: float
    median: float
    q3: float
    iqr: float
    whisker_low: float
    whisker_high: float
    outliers: tuple[float, ...]
    method: str = QUARTILE_METHOD

    def to_json(self) -> str:
        return json.dumps(
            {
                "q1": self.q1,
                "median": self.median,
                "q3": self.q3,
                "iqr": self.iqr,
                "whisker_low": self.whisker_low,
                "whisker_high": self.whisker_high,
                "outliers": list(self.outliers),
                "method": self.method,
            },
            sort_keys=True,
        )

    def to_csv(self) -> str:
        header = "q1,median,q3,iqr,whisker_low,whisker_high,outliers"
        outliers = ";".join(repr(v) for v in self.outliers)
        row = (
            f"{self.q1!r},{self.median!r},{self.q3!r},{self.iqr!r},"
            f"{self.whisker_low!r},{self.whisker_high!r},{outliers}"
        )
        return header + "\n" + row + "\n"


def boxplot_summary(values: Sequence[float]) -> BoxplotSummary:
    """Five-number summary with 1.5 IQR fences; points beyond are outliers."""
    if len(values) == 0:
        raise InsufficientData("boxplot needs at least one value")
    data = np.sort(np.asarray(values, dtype=float))
    q1, med, q3 = (float(q) for q in np.quantile(data, [0.25, 0.5, 0.75], method="linear"))
    iqr = q3 - q1
    lo_fence, hi_fence = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    inside = data[(data >= lo_fence) & (data <= hi_fence)]
    outliers = tuple(float(v) for v in data[(data < lo_fence) | (data > hi_fence)])
    return BoxplotSummary(
        q1=q1,
        median=med,
        q3=q3,
        iqr=iqr,
        whisker_low=float(inside.min()),
        whisker_high=float(inside.max()),
        outliers=outliers,
    )
