"""
A connecting orbit in the logistic equation
===========================================

For x' = x(1 - x) the fixed point 0 repels and 1 attracts. The connecting
homomorphism of the attractor-repeller sequence is nonzero, which forces an
orbit running from a neighbourhood of 0 to a neighbourhood of 1. We compute
it and ask the graph for a concrete witness path.
"""

from conley.dynamics import Grid, VectorFieldSpec, build_transition_graph
from conley.index import analyze_connection
from conley.pairs import SlicedCubeSet

grid = Grid((-0.5,), (1.5,), (40,))
G = build_transition_graph(VectorFieldSpec("logistic1d"), grid, tau=0.25, K=24)


def box(lo, hi):
    return SlicedCubeSet.from_boxes(grid, [((lo,), (hi,))], G.nslices)


N = SlicedCubeSet.constant(grid.cells(), G.nslices)
rep = analyze_connection(G, N, N_A=box(0.7, 1.3), N_R=box(-0.3, 0.3),
                         U_A=box(0.8, 1.2), U_R=box(-0.2, 0.2))

L = rep.les
print("H(attractor)", L.h_attractor.ranks, "H(total)", L.h_total.ranks,
      "H(repeller)", L.h_repeller.ranks)
print("boundary ranks:", rep.boundary_ranks, "exact:", L.exact)
print("verdict:", rep.connectedness.verdict)

# cells of the witness, as intervals in x
w = rep.connection
for k, (i,) in w.cells[::4]:
    lo, hi = grid.cell_box((i,))
    print(f"slice {k:2d}: [{lo[0]:+.2f}, {hi[0]:+.2f}]")
