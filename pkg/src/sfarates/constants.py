"""Physical constants and unit conversions (atomic units throughout)."""

#: Speed of light in atomic units.
C_AU = 137.035999

#: One atomic unit of intensity expressed in W/cm^2.
INTENSITY_AU_WCM2 = 3.50945e16

#: One hartree in eV.
HARTREE_EV = 27.211386245988


def wcm2_to_au(intensity):
    return intensity / INTENSITY_AU_WCM2


def au_to_wcm2(intensity):
    return intensity * INTENSITY_AU_WCM2
