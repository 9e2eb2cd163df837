"""Neon-like 2p momentum map at 800 nm, 8e14 W/cm2, compared with the tunneling model
along the polarization axis."""

import numpy as np

from sfarates import LaserInput, MomentumGrid, derive_params, momentum_map, tunneling_comparator
from sfarates.bound_states import NEON_2P_EB, BoundStateModel
from sfarates.rates import channel_momentum

fp = derive_params(LaserInput.from_intensity(0.057, 8e14, unit="W/cm2"), NEON_2P_EB)
grid = momentum_map(fp, BoundStateModel.neon(), "linear", MomentumGrid(1.5, 1.0, 121, 81))

row = grid.row(0.0)
comp = tunneling_comparator(fp, grid.p_par)
mid = np.argmin(np.abs(grid.p_par))
print(f"channels {grid.meta['channels']}, first ring at |p| = {channel_momentum(fp, fp.n0):.3f}")
print(" p_par     map     tunneling   ratio")
for j in range(mid, len(grid.p_par), 6):
    a, b = row[j] / row[mid], comp[j] / comp[mid]
    ratio = a / b if b > 0 else float("inf")
    print(f"{grid.p_par[j]:6.3f} {a:9.3e} {b:9.3e} {ratio:9.3g}")
# close to p_par = 0 the two agree; further out the ring structure takes over
