"""
Conley index of a hyperbolic saddle
===================================

The linear saddle x' = x, y' = -y on [-1, 1]^2 is covered by a 16 x 16
grid. We build the combinatorial transition graph, an index pair, and read
off the index from the stabilized slice homology.
"""

from conley.dynamics import Grid, VectorFieldSpec, build_transition_graph
from conley.index import conley_index, slice_homology_system
from conley.pairs import SlicedCubeSet, build_index_pair, isolating_check, thicken_exit

grid = Grid((-1.0, -1.0), (1.0, 1.0), (16, 16))
G = build_transition_graph(VectorFieldSpec("saddle2d"), grid, tau=0.2, K=20)
N = SlicedCubeSet.constant(grid.cells(), G.nslices)
print("isolating:", isolating_check(N, G))

# N1 is the forward hull of the invariant part, N2 the cells that leave
P = build_index_pair(N, G)
print("cells in N1 / N2 at slice 10:", len(P.N1[10]), len(P.N2[10]))

# thicken the exit set by one step so the exit set is a neighbourhood
Pm = thicken_exit(P, 1)
S = slice_homology_system(Pm, first=10)
for k, ranks in S.rank_history()[:4]:
    print("slice", k, "ranks", ranks)

res = conley_index(N, G, m=1)
print("index ranks:", res.ranks, "stable from slice", res.k0)
