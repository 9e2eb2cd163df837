import math

import numpy as np
import pytest

from sfarates.bound_states import BoundStateModel
from sfarates.errors import DomainError
from sfarates.momentum import MomentumGrid, energy_kernel, momentum_map
from sfarates.params import LaserInput, derive_params
from sfarates.rates import channel_momentum, dW_dOmega_linear

H = BoundStateModel.hydrogen()


@pytest.fixture(scope="module")
def fp():
    return derive_params(LaserInput(0.1, up=0.3), 0.5)


@pytest.fixture(scope="module")
def smooth(fp):
    return momentum_map(fp, H, "linear", MomentumGrid(1.6, 1.2, 81, 61))


def test_axes_contain_zero_and_are_odd(smooth):
    assert len(smooth.p_par) % 2 == 1 and len(smooth.p_perp) % 2 == 1
    assert 0.0 in smooth.p_par and 0.0 in smooth.p_perp
    assert smooth.values.shape == (len(smooth.p_perp), len(smooth.p_par))


def test_mirror_symmetry(smooth):
    v = smooth.values
    np.testing.assert_allclose(v, v[::-1, :], rtol=1e-12, atol=0)


def test_values_finite_non_negative(smooth):
    assert np.all(np.isfinite(smooth.values)) and np.all(smooth.values >= 0)


def test_default_kernel_width(fp, smooth):
    assert smooth.meta["kernel_width"] == 0.5 * fp.omega


def test_exact_rings(fp):
    grid = MomentumGrid(1.2, 1.2, 121, 121)
    g = momentum_map(fp, H, "linear", grid, kernel_width=0.0)
    pz, px = np.meshgrid(g.p_par, g.p_perp)
    p = np.hypot(pz, px)
    step = g.p_par[1] - g.p_par[0]
    n_top = math.ceil((0.5 * (p.max() + step) ** 2 + fp.up + fp.eb) / fp.omega)
    rings = [channel_momentum(fp, n) for n in range(fp.n0, n_top + 1)]
    near = np.zeros(p.shape, dtype=bool)
    for pn in rings:
        near |= np.abs(p - pn) <= 0.5 * step
    assert np.all(g.values[~near] == 0.0)
    assert np.any(g.values[near] > 0)


def test_ring_values_are_channel_densities(fp):
    # one ring cell on the p_perp = 0 row equals that channel's term at theta = 0
    grid = MomentumGrid(1.2, 1.2, 241, 5)
    g = momentum_map(fp, H, "linear", grid, kernel_width=0.0)
    row = g.row(0.0)
    p10 = channel_momentum(fp, 10)
    j = int(np.argmin(np.abs(g.p_par - p10)))
    total = dW_dOmega_linear(fp, H, 0.0)
    assert 0 < row[j] < total


def test_kernel_normalized():
    e = np.linspace(-2, 2, 4001)
    assert np.trapezoid(energy_kernel(e, 0.1, 0.05), e) == pytest.approx(1.0, rel=1e-10)


def test_longitudinal_projection(smooth):
    lon = smooth.longitudinal()
    assert lon.shape == smooth.p_par.shape
    np.testing.assert_allclose(lon, lon[::-1], rtol=1e-10)


def test_circular_map_symmetric():
    cfp = derive_params(LaserInput(0.1, up=0.3, polarization="circular"), 0.5)
    g = momentum_map(cfp, H, grid=MomentumGrid(1.2, 1.2, 41, 41))
    np.testing.assert_allclose(g.values, g.values[::-1, :], rtol=1e-12)
    # no emission along the propagation axis
    assert np.all(g.row(0.0) == 0.0)


def test_grid_validation(fp):
    with pytest.raises(DomainError):
        MomentumGrid(-1.0, 1.0)
    with pytest.raises(DomainError):
        MomentumGrid(1.0, 1.0, 2, 5)
    with pytest.raises(DomainError):
        momentum_map(fp, H, "linear", MomentumGrid(1.0, 1.0, 5, 5), kernel_width=-0.1)
    with pytest.raises(DomainError):
        momentum_map(fp, H, "elliptic")


def test_default_grid(fp):
    g = momentum_map(fp, H)
    assert g.p_par[-1] == pytest.approx(1.2 * math.sqrt(2 * 2 * fp.up))
