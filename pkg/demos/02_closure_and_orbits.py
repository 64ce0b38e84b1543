"""Closure under permutation: orbits, witnesses, and transformed families."""

from permbench import (
    Domain,
    FunctionFamily,
    PermutationMap,
    check_observation1,
    cup_report,
    function_from_index,
    is_cup,
    permutation_closure,
    permute_function,
    weight_orbit,
)
from permbench.algebra import data3_recipe, recipe_family

f2 = function_from_index(2, 4)
print("f2 =", f2.values)

# relabelling the domain moves the single 1 around
swap = PermutationMap.transposition(4, 1, 2)
print("f2 after swapping points 1 and 2:", permute_function(f2, swap).values)

# a singleton one-hot family is therefore not closed under permutation
single = FunctionFamily(Domain(4), (f2,))
report = cup_report(single)
print("is_cup({f2}):", report.is_cup)
print(
    "witness:",
    report.witness_function.values,
    "escapes via",
    report.witness_permutation.mapping,
)

# its closure is the full weight-1 orbit
closed = permutation_closure(single)
print("closure({f2}):", sorted(t.label for t in closed))
assert closed.value_set() == weight_orbit(Domain(4), 1).value_set()
assert is_cup(closed)

# closures are unions of weight orbits: check every weight at n=4
for w in range(5):
    orbit = weight_orbit(Domain(4), w)
    print(f"weight-{w} orbit has {len(orbit)} tables; closed: {is_cup(orbit)}")

# applying a benchmark recipe to the closed baseline family f2..f15 and
# asking whether the result is still closed
base = FunctionFamily(Domain(4), tuple(function_from_index(i, 4) for i in range(2, 16)))
obs = check_observation1(base, lambda fam: recipe_family(data3_recipe()))
print("\nrecipe-transformed family closed:", obs.transformed_is_cup)
print("readings not evaluated here:", obs.unevaluated_readings)
