"""The statistics pipeline on the benchmark datasets."""

from permbench import (
    anova_oneway,
    boxplot_summary,
    build_dataset,
    correlation_matrix,
    hierarchical_cluster,
    pca,
    row_mean_center,
    tukey_hsd,
)

data1 = build_dataset("Data1")

# Pearson correlations between order columns
corr = correlation_matrix(data1)
print("corr(a1, a2) =", round(corr.cell("a1", "a2"), 4))
print("corr(a1, a9) =", round(corr.cell("a1", "a9"), 4))

# average-linkage clustering of the orders over row-mean-centered profiles
centered = row_mean_center(data1.eff)
print("\ncentered row f2 sums to", sum(centered.row("f2")))
dendro = hierarchical_cluster(data1.eff, axis="cols")
first = dendro.merges[0]
print("first merge:", dendro.leaf_labels[first[0]], "+", dendro.leaf_labels[first[1]], "at", round(first[2], 4))
print("a1 and a2 join at step", dendro.merge_step_joining(0, 1), "; a1 and a9 at step", dendro.merge_step_joining(0, 8))

# covariance PCA with a three-fold degenerate leading block
result = pca(data1)
print("\nexplained ratios (%):", [round(r * 100, 2) for r in result.explained_ratio[:4]])
print("total variance:", round(result.total_variance, 3))
print("leading degenerate block size:", result.degenerate_leading_block)
agg = result.aggregated_squared_loadings(3)
print("aggregated squared loadings over the block:")
for lab in ("f8", "f4", "f2"):
    print(f"  {lab}: {agg[lab]:.3f}")

# pooled ANOVA and Tukey over the three datasets (here the recombined
# datasets coincide with the baseline, so the test finds nothing)
groups = [
    [float(c) for row in build_dataset(name).eff.cells for c in row]
    for name in ("Data1", "Data2", "Data3")
]
table = anova_oneway(groups)
print("\nANOVA df:", table.df, " F:", round(table.f_stat, 4), " p:", round(table.p_value, 4))
for row in tukey_hsd(groups, labels=["Data1", "Data2", "Data3"]):
    print("Tukey", row.pair, "diff", round(row.mean_difference, 5), "p", round(row.p_adjusted, 5))

# distribution summary of the baseline efficiencies
box = boxplot_summary(groups[0])
print("\nData1 boxplot: q1", box.q1, "median", box.median, "q3", box.q3, "outliers", len(box.outliers))
