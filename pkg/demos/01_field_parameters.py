"""Derived intensity parameters for a few common laser settings, and where they sit
on the (photon energy, intensity) plane."""

from sfarates import LaserInput, classify_regime, derive_params, tunneling_conditions

EB_H = 0.5

# 800 nm and 1.6 um drivers, plus a UV harmonic
settings = [(0.057, 1e14), (0.057, 8e14), (0.0285, 4e14), (0.3, 1e15)]

print(f"{'omega':>7} {'I [W/cm2]':>10} {'U_p':>8} {'z':>8} {'gamma_K':>8} {'n0':>4}  regime")
for omega, intensity in settings:
    fp = derive_params(LaserInput.from_intensity(omega, intensity, unit="W/cm2"), EB_H)
    cell = classify_regime(omega, fp.intensity_au, EB_H)
    print(f"{omega:7.4f} {intensity:10.1e} {fp.up:8.4f} {fp.z:8.3f} {fp.gamma_k:8.3f} {fp.n0:4d}  {cell.label}")

# the tunneling picture wants both z1 and E_B/omega large
fp = derive_params(LaserInput.from_intensity(0.057, 8e14, unit="W/cm2"), EB_H)
rep = tunneling_conditions(fp)
print()
print(f"at 8e14 W/cm2, 800 nm: z1={rep.z1:.2f} E_B/omega={rep.eb_over_omega:.2f} "
      f"(threshold {rep.threshold:g}) -> tunneling regime: {rep.tunneling_regime}")
