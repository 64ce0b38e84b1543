"""Evaluation-order search on finite binary objective functions.

Exhaustive benchmarks over small domains, closure-under-permutation
machinery, algebraically recombined datasets, a statistics pipeline
(correlation, clustering, PCA, ANOVA, Tukey, boxplots) and seeded Monte
Carlo experiments for large bitstring domains.
"""

__version__ = "0.1.0"

from .algebra import (
    BenchmarkRecipe,
    Dataset,
    build_dataset,
    custom_dataset,
    delta_matrix,
    parse_recipe,
    pointwise_diff,
    pointwise_sum,
)
from .closure import (
    CupReport,
    PermutationMap,
    check_observation1,
    cup_report,
    is_cup,
    permutation_closure,
    permute_function,
    weight_orbit,
)
from .core import (
    UNKNOWN,
    Domain,
    EvalOrder,
    FunctionFamily,
    PartialData,
    PolicyNode,
    PolicyTree,
    ValueTable,
    enumerate_functions,
    enumerate_orders,
    fixed_order_as_tree,
    function_from_index,
)
from .measures import (
    AdditivityAudit,
    CharacteristicFunction,
    EfficiencyValue,
    additivity_audit,
    efficiency,
    efficiency_matrix,
    measure_M,
    shapley_value,
    shapley_values,
)
from .montecarlo import (
    FunctionClassSpec,
    ImplicitFunction,
    McConfig,
    McReport,
    generate_function,
    run_mc,
    validate_function,
)
from .search import (
    PerfMatrix,
    SearchTrace,
    build_perf_matrix,
    parse_matrix_csv,
    run_order,
    run_policy_tree,
)
from .stats import (
    AnovaTable,
    BoxplotSummary,
    CorrelationMatrix,
    Dendrogram,
    PcaResult,
    TukeyRow,
    anova_oneway,
    boxplot_summary,
    correlation_matrix,
    hierarchical_cluster,
    pca,
    pca_matrix,
    row_mean_center,
    tukey_hsd,
)
