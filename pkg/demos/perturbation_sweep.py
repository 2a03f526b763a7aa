"""
Persistence under periodic forcing
==================================

Add eps * sin(t) to the logistic equation and repeat the connection
analysis for a few amplitudes. Small forcing keeps the connecting
homomorphism and the witnesses; large forcing destroys isolation.
"""

from conley.dynamics import Grid, VectorFieldSpec
from conley.index import perturbation_sweep
from conley.pairs import SlicedCubeSet

grid = Grid((-0.5,), (1.5,), (40,))
K = 24


def box(lo, hi):
    return SlicedCubeSet.from_boxes(grid, [((lo,), (hi,))], K + 1)


N = SlicedCubeSet.constant(grid.cells(), K + 1)
rows = perturbation_sweep(VectorFieldSpec("logistic1d"), grid, 0.25, K, N,
                          box(0.7, 1.3), box(-0.3, 0.3), box(0.8, 1.2), box(-0.2, 0.2),
                          amplitudes=[0.0, 0.02, 0.05, 0.2, 1.0])

for row in rows:
    if row.error is not None:
        print(f"eps={row.amplitude:<5} error: {row.error}")
        continue
    ranks = row.report.boundary_ranks if row.report else None
    print(f"eps={row.amplitude:<5} isolating={row.isolating} boundary={ranks} "
          f"persists={row.persists}")
