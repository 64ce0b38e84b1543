"""Published reference values this package checks its outputs against.

The constants below are the values reported by the reference study of
evaluation-order search on the n = 4 binary family. Orders are listed in
lexicographic rank order of their sequences (the source lists the sequences
(4,2,3,1) and (4,2,1,3) in the opposite order at ranks 21/22; the two
columns are given here under their lexicographic labels).

``REFERENCE_ONLY`` collects reported values whose construction is not
documented precisely enough to recompute; the reproduction report carries
them for comparison without asserting them.
"""

from __future__ import annotations

from fractions import Fraction

# steps-to-minimum of every order (columns a1..a24) on every function
# (rows f1..f16); column totals are all 30
STEPS_TABLE_N4: tuple[tuple[int, ...], ...] = (
    (1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1),
    (2, 2, 2, 2, 2, 2, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1),
    (1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1),
    (3, 3, 2, 2, 2, 2, 3, 3, 2, 2, 2, 2, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1),
    (1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 1, 1, 1, 1, 1, 1),
    (2, 2, 3, 3, 2, 2, 1, 1, 1, 1, 1, 1, 3, 3, 2, 2, 2, 2, 1, 1, 1, 1, 1, 1),
    (1, 1, 1, 1, 1, 1, 2, 2, 3, 3, 2, 2, 2, 2, 3, 3, 2, 2, 1, 1, 1, 1, 1, 1),
    (4, 3, 4, 3, 2, 2, 4, 3, 4, 3, 2, 2, 4, 3, 4, 3, 2, 2, 1, 1, 1, 1, 1, 1),
    (1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2),
    (2, 2, 2, 2, 3, 3, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 3, 3, 2, 2, 2, 2),
    (1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 1, 1, 1, 1, 1, 1, 2, 2, 3, 3, 2, 2),
    (3, 4, 2, 2, 4, 3, 3, 4, 2, 2, 4, 3, 1, 1, 1, 1, 1, 1, 4, 3, 4, 3, 2, 2),
    (1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 2, 2, 2, 2, 3, 3),
    (2, 2, 3, 4, 3, 4, 1, 1, 1, 1, 1, 1, 3, 4, 2, 2, 4, 3, 3, 4, 2, 2, 4, 3),
    (1, 1, 1, 1, 1, 1, 2, 2, 3, 4, 3, 4, 2, 2, 3, 4, 3, 4, 2, 2, 3, 4, 3, 4),
    (4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4),
)

STEPS_COLUMN_TOTAL = 30

EFFICIENCY_TABLE_N4: tuple[tuple[Fraction, ...], ...] = tuple(
    tuple(Fraction(4 - s, 3) for s in row) for row in STEPS_TABLE_N4
)

MEAN_EFFICIENCY = {2: Fraction(1, 2), 3: Fraction(5, 8), 4: Fraction(17, 24)}

# covariance PCA of the baseline dataset (24 order observations over the 14
# non-constant functions): a three-fold degenerate leading eigenvalue block
PCA_DATA1 = {
    "explained_ratio_top3_percent": 30.22,
    "explained_ratio_tolerance_pp": 0.05,
    "total_variance": 1.053,
    "total_variance_tolerance": 0.002,
    "aggregated_loading_tiers": {
        0.439: ("f8", "f12", "f14", "f15"),
        0.173: ("f4", "f6", "f7", "f10", "f11", "f13"),
        0.052: ("f2", "f3", "f5", "f9"),
    },
    "tier_tolerance": 0.002,
}

# the additivity spotlight: order a4 on the pointwise sum f5 + f10 (= f14)
ADDITIVITY_SPOTLIGHT = {"order": "a4", "fi": "f5", "fj": "f10", "lhs": 4, "rhs": 3}

# reported values that cannot be recomputed from the documented construction
REFERENCE_ONLY = {
    "data2_data3_cells": {
        "reason": "under-specified construction: the documented pointwise recipes "
        "reproduce the baseline tables identically, so the recombined datasets "
        "cannot differ from the baseline",
    },
    "delta_heatmaps": {
        "reported": "large structured deviations between recombined and baseline datasets",
        "reason": "under-specified construction: documented recipes force all-zero deltas",
    },
    "anova_f": {
        "reported_f": 110.68,
        "reported_p": 3.59965e-44,
        "reported_ss": {"between": 24.533, "within": 111.379, "total": 135.913},
        "reason": "under-specified construction of the recombined datasets",
    },
    "tukey_differences": {
        "reported": {
            ("Data1", "Data2"): {"diff": 0.32639, "ci": (0.26619, 0.38658), "p": 0.0},
            ("Data1", "Data3"): {"diff": 0.33532, "ci": (0.27512, 0.39551), "p": 0.0},
            ("Data2", "Data3"): {"diff": 0.00893, "ci": (-0.05127, 0.06912), "p": 0.93556},
        },
        "reason": "under-specified construction of the recombined datasets",
    },
    "mc_percentages": {
        "reported_mean_percent_at_n30": {
            "balanced": 63.4,
            "strongly_unbalanced": 49.5,
            "hamming_symmetric": 70.6,
        },
        "reason": "under-specified sampling protocol for large domains",
    },
}

ANOVA_PAPER_SHAPE_DF = (2, 1005, 1007)
