import math
import random
from fractions import Fraction

import numpy as np
import pytest
import scipy.cluster.hierarchy as sch
import scipy.stats

from permbench.algebra import build_dataset
from permbench.errors import InsufficientData, ValidationError
from permbench.search import PerfMatrix
from permbench.stats import (
    anova_oneway,
    boxplot_summary,
    correlation_matrix,
    hierarchical_cluster,
    pca,
    pca_matrix,
    row_mean_center,
    tukey_hsd,
)

from .oracles import anova_by_hand, cophenetic_matrix

DATA1 = build_dataset("Data1")


def frac_matrix(rows, row_labels=None, col_labels=None, kind="efficiency"):
    cells = tuple(tuple(Fraction(c) for c in row) for row in rows)
    row_labels = row_labels or tuple(f"r{i}" for i in range(len(rows)))
    col_labels = col_labels or tuple(f"c{j}" for j in range(len(rows[0])))
    return PerfMatrix(tuple(row_labels), tuple(col_labels), cells, kind)


# ---------------------------------------------------------------------------
# correlation


def test_correlation_unit_diagonal_and_symmetry():
    corr = correlation_matrix(DATA1)
    for lab in corr.labels:
        assert corr.cell(lab, lab) == pytest.approx(1.0, abs=1e-12)
    for a in corr.labels[:6]:
        for b in corr.labels[:6]:
            assert corr.cell(a, b) == corr.cell(b, a)


def test_correlation_near_perfect_pair_on_baseline():
    corr = correlation_matrix(DATA1)
    value = round(corr.cell("a1", "a2"), 4)
    assert 0.9 < value < 1.0
    data = np.asarray(DATA1.eff.as_floats())
    assert value == round(float(np.corrcoef(data[:, 0], data[:, 1])[0, 1]), 4)


def test_correlation_identical_columns_give_exactly_one():
    m = frac_matrix([[0, 0, 1], [1, 1, 0], [Fraction(1, 2), Fraction(1, 2), 1]])
    corr = correlation_matrix(m)
    assert corr.cell("c0", "c1") == 1.0


def test_correlation_zero_variance_reported_as_none():
    m = frac_matrix([[1, 0], [1, 1], [1, Fraction(1, 2)]])
    corr = correlation_matrix(m)
    assert corr.zero_variance == ("c0",)
    assert corr.cell("c0", "c1") is None
    assert corr.cell("c0", "c0") is None
    assert "" in corr.to_csv().splitlines()[1].split(",")


def test_correlation_invariant_under_row_permutation():
    rng = random.Random(12)
    rows = list(DATA1.eff.cells)
    rng.shuffle(rows)
    shuffled = PerfMatrix(
        DATA1.eff.row_labels, DATA1.eff.col_labels, tuple(rows), "efficiency"
    )
    a = np.asarray(correlation_matrix(shuffled).cells, dtype=float)
    b = np.asarray(correlation_matrix(DATA1).cells, dtype=float)
    assert a == pytest.approx(b, abs=1e-12)


def test_correlation_matrix_is_positive_semidefinite():
    corr = correlation_matrix(DATA1)
    eigs = np.linalg.eigvalsh(np.asarray(corr.cells, dtype=float))
    assert eigs.min() > -1e-9


def test_correlation_sorted_profiles_coincide_for_reordered_orders():
    # a19/a21/a23 differ from a3/a4 only in how their correlation values are
    # assigned to partners: the sorted profiles are identical
    corr = correlation_matrix(DATA1)
    profiles = {
        lab: np.sort(np.asarray(corr.cells[corr.labels.index(lab)], dtype=float))
        for lab in ("a3", "a4", "a19", "a21", "a23")
    }
    base = profiles["a19"]
    for lab in ("a21", "a23", "a3", "a4"):
        assert profiles[lab] == pytest.approx(base, abs=1e-12)
    unsorted_a19 = np.asarray(corr.cells[corr.labels.index("a19")], dtype=float)
    unsorted_a3 = np.asarray(corr.cells[corr.labels.index("a3")], dtype=float)
    assert not np.allclose(unsorted_a19, unsorted_a3)


# ---------------------------------------------------------------------------
# centering


def test_row_mean_center_worked_example():
    m = frac_matrix([[1, 0, Fraction(1, 2)]])
    centered = row_mean_center(m)
    assert centered.cells[0] == (Fraction(1, 2), Fraction(-1, 2), 0)


def test_row_mean_center_constant_row_and_zero_sums():
    m = frac_matrix([[1, 1, 1], [0, Fraction(1, 3), Fraction(2, 3)]])
    centered = row_mean_center(m)
    assert centered.cells[0] == (0, 0, 0)
    assert all(sum(row) == 0 for row in centered.cells)


# ---------------------------------------------------------------------------
# clustering


def test_cluster_identical_rows_merge_first_at_zero():
    m = frac_matrix([[0, 1, 0], [0, 1, 0], [1, 0, 1]])
    dendro = hierarchical_cluster(m, axis="rows")
    a, b, dist = dendro.merges[0]
    assert {a, b} == {0, 1} and dist == 0.0


def test_cluster_baseline_a1_a2_join_before_a9():
    dendro = hierarchical_cluster(DATA1.eff, axis="cols")
    step_a1_a2 = dendro.merge_step_joining(0, 1)
    step_a1_a9 = dendro.merge_step_joining(0, 8)
    assert step_a1_a2 < step_a1_a9


def test_cluster_equidistant_ties_break_by_lowest_index():
    # three items pairwise at the same distance after row centering
    m = frac_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]], kind="efficiency")
    dendro = hierarchical_cluster(m, axis="rows")
    assert dendro.merges[0][:2] == (0, 1)


def test_cluster_average_linkage_distances_non_decreasing():
    rng = np.random.default_rng(21)
    for _ in range(10):
        data = rng.random((9, 5))
        m = frac_matrix([[Fraction(str(round(x, 6))) for x in row] for row in data], kind="centered")
        dendro = hierarchical_cluster(m, axis="rows")
        dists = [d for _, _, d in dendro.merges]
        assert all(a <= b + 1e-12 for a, b in zip(dists, dists[1:]))


def test_cluster_matches_scipy_average_linkage():
    rng = np.random.default_rng(33)
    for _ in range(5):
        data = rng.random((8, 6))
        m = frac_matrix(
            [[Fraction(str(round(x, 9))) for x in row] for row in data], kind="centered"
        )
        dendro = hierarchical_cluster(m, axis="rows")
        centered = np.asarray(m.as_floats()) - np.asarray(m.as_floats()).mean(axis=1, keepdims=True)
        link = sch.linkage(centered, method="average", metric="euclidean")
        mine = np.asarray(cophenetic_matrix(dendro))
        theirs = sch.cophenet(link)
        iu = np.triu_indices(8, k=1)
        assert mine[iu] == pytest.approx(theirs, abs=1e-9)


def test_cluster_needs_two_items():
    with pytest.raises(InsufficientData):
        hierarchical_cluster(frac_matrix([[1, 2]], kind="centered"), axis="rows")


def test_dendrogram_csv_layout():
    dendro = hierarchical_cluster(DATA1.eff, axis="cols")
    lines = dendro.to_csv().strip().splitlines()
    assert lines[0] == "step,cluster_a,cluster_b,distance"
    assert len(lines) == 24  # header + 23 merges


# ---------------------------------------------------------------------------
# PCA


def test_pca_baseline_eigenstructure():
    result = pca(DATA1)
    ratios = [r * 100 for r in result.explained_ratio[:3]]
    for r in ratios:
        assert abs(r - 30.22) <= 0.05
    assert abs(result.eigenvalues[0] - result.eigenvalues[1]) < 1e-9
    assert abs(result.eigenvalues[1] - result.eigenvalues[2]) < 1e-9
    assert result.degenerate_leading_block == 3
    assert abs(result.total_variance - 1.053) <= 0.002


def test_pca_baseline_aggregated_loading_tiers():
    agg = pca(DATA1).aggregated_squared_loadings(3)
    for lab in ("f8", "f12", "f14", "f15"):
        assert abs(agg[lab] - 0.439) <= 0.002
    for lab in ("f4", "f6", "f7", "f10", "f11", "f13"):
        assert abs(agg[lab] - 0.173) <= 0.002
    for lab in ("f2", "f3", "f5", "f9"):
        assert abs(agg[lab] - 0.052) <= 0.002


def test_pca_collinear_observations():
    data = np.array([[x, 2 * x] for x in (0.0, 1.0, 2.0, 3.0)])
    result = pca_matrix(data)
    assert result.explained_ratio[0] == pytest.approx(1.0, abs=1e-12)


def test_pca_internal_consistency_invariants():
    rng = np.random.default_rng(8)
    data = rng.random((12, 5))
    result = pca_matrix(data)
    assert sum(result.explained_ratio) == pytest.approx(1.0, abs=1e-9)
    assert sum(result.eigenvalues) == pytest.approx(result.total_variance, abs=1e-12)
    assert result.scores.mean(axis=0) == pytest.approx(np.zeros(5), abs=1e-9)
    centered = data - data.mean(axis=0)
    assert result.scores @ result.loadings.T == pytest.approx(centered, abs=1e-9)
    score_cov = result.scores.T @ result.scores / (len(data) - 1)
    assert score_cov == pytest.approx(np.diag(result.eigenvalues), abs=1e-7)
    for c in range(result.loadings.shape[1]):
        col = result.loadings[:, c]
        assert col[np.argmax(np.abs(col))] >= 0


def test_pca_needs_two_observations():
    with pytest.raises(InsufficientData):
        pca_matrix(np.array([[1.0, 2.0]]))


# ---------------------------------------------------------------------------
# ANOVA


FIXTURE_GROUPS = [[1, 2, 3], [2, 3, 4], [6, 7, 8]]


def test_anova_hand_fixture():
    ssb, ssw, f, df = anova_by_hand(FIXTURE_GROUPS)
    table = anova_oneway(FIXTURE_GROUPS)
    assert table.ss_between == pytest.approx(ssb, abs=1e-12)
    assert table.ss_within == pytest.approx(ssw, abs=1e-12)
    assert (table.df_between, table.df_within) == df == (2, 6)
    assert table.f_stat == pytest.approx(f, abs=1e-12)
    assert ssw == pytest.approx(6.0)
    scipy_f, scipy_p = scipy.stats.f_oneway(*FIXTURE_GROUPS)
    assert table.f_stat == pytest.approx(scipy_f, abs=1e-9)
    assert table.p_value == pytest.approx(scipy_p, abs=1e-12)


def test_anova_identical_groups():
    table = anova_oneway([[1, 2, 3], [1, 2, 3], [1, 2, 3]])
    assert table.f_stat == 0.0
    assert table.p_value == 1.0


def test_anova_paper_shaped_degrees_of_freedom():
    groups = [[0.5] * 335 + [0.4], [0.6] * 335 + [0.7], [0.5] * 335 + [0.3]]
    table = anova_oneway(groups)
    assert table.df == (2, 1005, 1007)


def test_anova_ss_identity_on_random_groups():
    rng = random.Random(77)
    for _ in range(1000):
        k = rng.randrange(2, 5)
        groups = [
            [rng.uniform(-10, 10) for _ in range(rng.randrange(2, 7))] for _ in range(k)
        ]
        table = anova_oneway(groups)
        assert table.ss_total == pytest.approx(table.ss_between + table.ss_within, abs=1e-9)
        assert table.df_between + table.df_within == table.df_total


def test_anova_f_invariance_under_shift_and_scale():
    rng = random.Random(13)
    groups = [[rng.uniform(0, 1) for _ in range(8)] for _ in range(3)]
    base = anova_oneway(groups).f_stat
    shifted = anova_oneway([[x + 100.0 for x in g] for g in groups]).f_stat
    scaled = anova_oneway([[7.5 * x for x in g] for g in groups]).f_stat
    assert shifted == pytest.approx(base, rel=1e-9)
    assert scaled == pytest.approx(base, rel=1e-9)


def test_anova_p_matches_scipy_f_sf():
    rng = random.Random(2)
    for _ in range(25):
        groups = [[rng.gauss(mu, 1) for _ in range(6)] for mu in (0.0, 0.3, 1.1)]
        table = anova_oneway(groups)
        assert table.p_value == pytest.approx(
            float(scipy.stats.f.sf(table.f_stat, table.df_between, table.df_within)), abs=1e-12
        )


def test_anova_insufficient_data():
    with pytest.raises(InsufficientData):
        anova_oneway([[1, 2]])
    with pytest.raises(InsufficientData):
        anova_oneway([[1, 2], [3]])


# ---------------------------------------------------------------------------
# Tukey


def test_tukey_identical_groups():
    rows = tukey_hsd([[1, 2, 3], [1, 2, 3]], alpha=0.05)
    for r in rows:
        assert r.mean_difference == 0.0
        assert r.p_adjusted == pytest.approx(1.0, abs=1e-9)


def test_tukey_fixture_significance_pattern():
    rows = {r.pair: r for r in tukey_hsd(FIXTURE_GROUPS, alpha=0.05, labels=["g1", "g2", "g3"])}
    assert rows[("g1", "g3")].p_adjusted < 0.05
    assert rows[("g1", "g2")].p_adjusted > 0.05
    # studentized-range table: q(0.05; k=3, df=6) = 4.339
    se = math.sqrt(1.0 / 3.0)
    assert abs(rows[("g1", "g3")].mean_difference) / se > 4.339
    assert abs(rows[("g1", "g2")].mean_difference) / se < 4.339


def test_tukey_matches_scipy():
    rng = random.Random(31)
    groups = [[rng.gauss(mu, 1) for _ in range(10)] for mu in (0.0, 0.5, 2.0)]
    rows = tukey_hsd(groups, alpha=0.05)
    ref = scipy.stats.tukey_hsd(*groups)
    pairs = {(0, 1): 0, (0, 2): 1, (1, 2): 2}
    for (i, j), k in pairs.items():
        assert rows[k].mean_difference == pytest.approx(
            float(np.mean(groups[i]) - np.mean(groups[j])), abs=1e-12
        )
        assert rows[k].p_adjusted == pytest.approx(float(ref.pvalue[i][j]), abs=1e-7)
        lo, hi = ref.confidence_interval(0.95).low[i][j], ref.confidence_interval(0.95).high[i][j]
        assert rows[k].ci_low == pytest.approx(float(lo), abs=1e-7)
        assert rows[k].ci_high == pytest.approx(float(hi), abs=1e-7)


def test_tukey_p_symmetric_in_pair_order():
    groups = [[1.0, 2.0, 3.5], [2.0, 2.5, 4.0]]
    forward = tukey_hsd(groups)
    backward = tukey_hsd(groups[::-1])
    assert forward[0].p_adjusted == pytest.approx(backward[0].p_adjusted, abs=1e-12)
    assert forward[0].mean_difference == pytest.approx(-backward[0].mean_difference, abs=1e-12)


def test_tukey_ci_contains_difference_and_shrinks_with_size():
    rng = random.Random(17)
    small = [[rng.gauss(0, 1) for _ in range(5)] for _ in range(3)]
    big = [[rng.gauss(0, 1) for _ in range(120)] for _ in range(3)]
    widths_small = [r.ci_high - r.ci_low for r in tukey_hsd(small)]
    widths_big = [r.ci_high - r.ci_low for r in tukey_hsd(big)]
    for r in tukey_hsd(small) + tukey_hsd(big):
        assert r.ci_low <= r.mean_difference <= r.ci_high
        assert 0.0 <= r.p_adjusted <= 1.0
    assert max(widths_big) < min(widths_small)


def test_tukey_alpha_validation():
    with pytest.raises(ValidationError):
        tukey_hsd(FIXTURE_GROUPS, alpha=1.5)


# ---------------------------------------------------------------------------
# boxplot


def test_boxplot_worked_example():
    box = boxplot_summary([1, 2, 3, 4, 5])
    assert (box.q1, box.median, box.q3) == (2.0, 3.0, 4.0)
    assert box.iqr == 2.0
    assert box.outliers == ()
    assert (box.whisker_low, box.whisker_high) == (1.0, 5.0)


def test_boxplot_constant_data():
    box = boxplot_summary([3.5] * 7)
    assert box.iqr == 0.0
    assert box.whisker_low == box.whisker_high == 3.5
    assert box.outliers == ()


def test_boxplot_flags_far_point():
    box = boxplot_summary([0, 1, 1, 1, 10])
    assert 10.0 in box.outliers


def test_boxplot_fence_property_on_random_data():
    rng = random.Random(41)
    for _ in range(50):
        data = [rng.gauss(0, 1) for _ in range(rng.randrange(1, 40))]
        box = boxplot_summary(data)
        lo = box.q1 - 1.5 * box.iqr
        hi = box.q3 + 1.5 * box.iqr
        for x in data:
            if x in box.outliers:
                assert x < lo or x > hi
            else:
                assert lo <= x <= hi
        assert box.q1 <= box.median <= box.q3
        assert box.iqr == pytest.approx(box.q3 - box.q1, abs=1e-12)
