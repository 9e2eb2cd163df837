"""Ordinary and generalized Bessel functions: recurrence vs quadrature, and how good
the leading large-order form is."""

import math

from sfarates import bessel_asymptotic, bessel_j, bessel_j_quad, gen_bessel_j, gen_bessel_j_quad
from sfarates.bessel import log_bessel_j, log_bessel_sq_printed

for n, x in [(5, 2.0), (100, 50.0), (500, 480.0), (300, 20.0)]:
    a, b = bessel_j(n, x), bessel_j_quad(n, x)
    print(f"J_{n}({x:g}) = {a:.15e}   quadrature differs by {abs(a - b) / abs(b):.1e} rel")

# far below double range the log is still available
logabs, sign = log_bessel_j(2000, 10.0)
print(f"log|J_2000(10)| = {logabs:.6f}  (value ~ 10^{logabs / math.log(10):.0f})")

print()
for n in (20, 40, 80, 160):
    err = abs(bessel_asymptotic(n, n / 2) / bessel_j(n, n / 2) - 1)
    print(f"leading asymptotic form at x = n/2, n = {n:3d}: rel error {err:.2e}")
gap = (log_bessel_sq_printed(100, 50.0) - 2 * math.log(bessel_j(100, 50.0))) / math.log(10)
print(f"writing exp(n^2 - x^2) for exp(2 sqrt(n^2 - x^2)) at (100, 50) is off by {gap:.0f} decades")

print()
for n, u, v in [(3, 2.0, -1.5), (-40, 60.0, 25.0), (150, 90.0, -70.0)]:
    a, b = gen_bessel_j(n, u, v), gen_bessel_j_quad(n, u, v)
    print(f"J_{n}({u:g}, {v:g}) = {a: .12e}   |decomposition - integral| = {abs(a - b):.1e}")
