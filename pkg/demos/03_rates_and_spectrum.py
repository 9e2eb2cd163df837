"""Angular distribution and channel spectrum of hydrogen in circular and linear fields."""

import numpy as np

from sfarates import LaserInput, derive_params, dW_dOmega_circular, dW_dOmega_linear, spectrum
from sfarates.bound_states import BoundStateModel

h = BoundStateModel.hydrogen()
theta = np.linspace(0, np.pi, 7)

circ = derive_params(LaserInput(0.1, up=0.3, polarization="circular"), 0.5)
lin = derive_params(LaserInput(0.1, up=0.3), 0.5)
wc = dW_dOmega_circular(circ, h, theta)
wl = dW_dOmega_linear(lin, h, theta)
print("theta/pi   circular dW/dOmega   linear dW/dOmega")
for t, a, b in zip(theta / np.pi, wc, wl):
    print(f"{t:8.3f}   {a:18.6e}   {b:16.6e}")
# circular light pushes electrons into the polarization plane; linear light along the field

for fp, label in [(circ, "circular"), (lin, "linear")]:
    spec = spectrum(fp, h)
    print(f"\n{label}: n0 = {fp.n0}, peak at n = {spec.peak_order}, total W = {spec.total:.6e} a.u.")
    for n, w in list(spec)[:8]:
        print(f"  n = {n:3d}  E_kin = {n * fp.omega - fp.up - fp.eb:6.3f}  W_n = {w:.4e}")
