"""Does the rate look like exp(-C/E)?  Fit both polarizations over a tunneling-regime sweep."""

from sfarates import exponent_sweep, tunneling_exponent_fit
from sfarates.bound_states import BoundStateModel

h = BoundStateModel.hydrogen()
lin = exponent_sweep(0.057, h, "linear", quantity="lowest_channel")
circ = exponent_sweep(0.057, h, "circular", quantity="total")

print(f"{'E':>8} {'gamma_K':>8} {'n0':>4} {'W lin (n0)':>12} {'W circ':>12}")
for a, b in zip(lin, circ):
    print(f"{a.e_field:8.4f} {a.gamma_k:8.3f} {a.n0:4d} {a.rate:12.4e} {b.rate:12.4e}")

for pts, label in [(lin, "linear, lowest channel"), (circ, "circular, total")]:
    fit = tunneling_exponent_fit([(p.e_field, p.rate) for p in pts])
    print(f"{label:24s} C = {fit.C:.4f} (tunneling value 2/3)  residual {fit.residual_norm:.3g}")
