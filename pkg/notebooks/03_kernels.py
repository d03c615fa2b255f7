# %% [markdown]
# # Kernels: GAC, hypergraphs and the test generators

# %%
import random

from tpenum import (
    Hypergraph,
    MethodSpec,
    ViewPair,
    build_join_tree,
    build_views,
    compute_cores,
    gac,
    gen_3col,
    gen_grid,
    is_acyclic,
    oracle_enumerate,
)
from tpenum.structures import enumerate_endomorphisms
from tpenum.testkit import random_instance

# %% [markdown]
# ## Pairwise consistency
# Two unary views on X agree only on the value 2.

# %%
V = ViewPair({"p": ("X",), "q": ("X",)}, {"p": [(1,), (2,)], "q": [(2,), (3,)]})
print(gac(V).tuples)

# %% [markdown]
# On a random instance, every view shrinks but keeps each solution tuple.

# %%
rng = random.Random(0)
A, B, O = random_instance(rng, n_vars=5, n_values=3)
V = build_views(A, B, MethodSpec("hw", 2))
W = gac(V)
print(sum(map(len, V.tuples.values())), "->", sum(map(len, W.tuples.values())), "tuples")

# %% [markdown]
# ## Acyclicity and join trees

# %%
chain = Hypergraph.from_edges([{"A", "B"}, {"B", "C"}, {"C", "D"}])
cycle = Hypergraph.from_edges([{"A", "B"}, {"B", "C"}, {"A", "C"}])
print(is_acyclic(chain), build_join_tree(chain).tree_edges)
print(is_acyclic(cycle))

# %% [markdown]
# ## Rigid grids
# Pinning the corners of a grid leaves the identity as its only endomorphism.

# %%
G = gen_grid(3, 3, restrict_corners=True)
print(len(list(enumerate_endomorphisms(G))), compute_cores(G) == [G])

# %% [markdown]
# ## The 3-colouring gadget
# Triangle-free graphs get a triangle attached so that colours are
# pinned by the gadget rather than by the target.

# %%
for edges in ([(1, 2), (2, 3), (1, 3)], [(u, v) for u in range(4) for v in range(u + 1, 4)]):
    A, B = gen_3col(edges)
    print(len(edges), "edges, colourable:", bool(oracle_enumerate(A, B, [])))
