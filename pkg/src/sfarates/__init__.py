"""Velocity-gauge strong-field ionization rates and the special functions behind them."""

__version__ = "0.1.0"

from .bessel import (
    bessel_asymptotic,
    bessel_j,
    bessel_j_orders,
    bessel_sq_asymptotic,
    gen_bessel_j,
    log_bessel_asymptotic,
    log_bessel_j,
    log_bessel_sq_printed,
)
from .bound_states import BoundStateModel, momentum_density, momentum_wavefunction
from .errors import AccuracyError, DomainError, FitError, InvariantViolation, RangeError, UnderflowWarning
from .momentum import MomentumGrid, RateGrid, momentum_map
from .params import (
    FieldParams,
    LaserInput,
    classify_regime,
    derive_params,
    regime_map,
    tunneling_conditions,
)
from .quadrature import bessel_j_quad, gen_bessel_j_quad
from .rates import (
    QuadSpec,
    Spectrum,
    channels,
    dW_dOmega_circular,
    dW_dOmega_linear,
    partial_rate,
    spectrum,
    total_rate,
)
from .tunneling import (
    exponent_sweep,
    toll_wheeler_factor,
    tunneling_comparator,
    tunneling_exponent_fit,
    tunneling_rate_factor,
)
