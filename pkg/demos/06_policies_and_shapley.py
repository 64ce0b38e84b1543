"""Adaptive policy trees and exact Shapley values."""

from permbench import (
    CharacteristicFunction,
    Domain,
    EvalOrder,
    PolicyNode,
    PolicyTree,
    fixed_order_as_tree,
    function_from_index,
    run_order,
    run_policy_tree,
    shapley_values,
)

# a fixed order is a degenerate policy tree: same trace, observation-blind
order = EvalOrder((2, 4, 1, 3))
tree = fixed_order_as_tree(order)
f6 = function_from_index(6, 4)
assert run_policy_tree(tree, f6, target=0).sampled == run_order(order, f6, target=0).sampled
print("degenerate tree reproduces the fixed order on f6")

# a genuinely adaptive policy: start at 1, branch on what was seen
adaptive = PolicyTree(
    root=PolicyNode(
        point=1,
        children=(
            (0, PolicyNode(point=2, children=((0, None), (1, None)))),
            (1, PolicyNode(point=3, children=((0, None), (1, None)))),
        ),
    ),
    domain=Domain(4),
)
for i in (2, 5):
    f = function_from_index(i, 4)
    trace = run_policy_tree(adaptive, f, target=0)
    print(f"adaptive policy on {f.label}: sampled {[p for p, _ in trace.sampled]}, hit at {trace.hit_step}")

# exact Shapley values of a three-player majority game
majority = CharacteristicFunction.from_callable(3, lambda c: 1.0 if len(c) >= 2 else 0.0)
print("\nmajority game Shapley values:", shapley_values(majority))

# an airport-style cost game: the largest requirement dominates
costs = {1: 1.0, 2: 1.0, 3: 4.0}
airport = CharacteristicFunction.from_callable(
    3, lambda c: max((costs[p] for p in c), default=0.0)
)
print("airport game Shapley values:", [round(x, 4) for x in shapley_values(airport)])
