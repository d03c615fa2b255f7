# %% [markdown]
# # A six-variable graph against three colours
#
# The left structure is a small directed graph on A..F. Its cores, the
# tree projections it admits and the output sets that are tp-covered all
# come out of a handful of calls.

# %%
from tpenum import (
    RelationalStructure,
    ViewPair,
    compute_cores,
    find_tree_projection,
    hypergraph_of,
    is_tp_covered,
)

edges = [("F", "E"), ("A", "E"), ("A", "C"), ("A", "B"), ("B", "C"), ("D", "B"), ("D", "C")]
A = RelationalStructure({"R": 2}, "ABCDEF", {"R": edges})
B = RelationalStructure({"R": 2}, [1, 2, 3], {"R": [(a, b) for a in (1, 2, 3) for b in (1, 2, 3) if a != b]})

# %% [markdown]
# ## Cores
# Two triangles, A'={A,B,C} and A''={B,C,D}, are both retracts of A.

# %%
for core in compute_cores(A):
    print(sorted(core.tuples("R")))

# %% [markdown]
# ## Hand-built views
# One base view per edge plus three wider views. No tree projection exists
# for the whole graph, but the triangle A' fits inside the view {A,B,C,F}.

# %%
scopes = {f"R#{i}": t for i, t in enumerate(A.tuples("R"))}
base = list(scopes)
scopes.update({"R1": ("A", "E", "F"), "R2": ("A", "B", "C", "F"), "R3": ("C", "D", "F")})
V = ViewPair(scopes, {}, base_view_names=base, base_atoms={n: ("R", scopes[n]) for n in base})
views = V.hypergraph()

print("H_A:", find_tree_projection(hypergraph_of(A), views))
triangle = RelationalStructure({"R": 2}, "ABC", {"R": [("A", "B"), ("A", "C"), ("B", "C")]})
print("H_A':", find_tree_projection(hypergraph_of(triangle), views))

# %%
print("{A,B,C} covered:", is_tp_covered(A, views, {"A", "B", "C"}))
print("{B,C,D} covered:", is_tp_covered(A, views, {"B", "C", "D"}))
