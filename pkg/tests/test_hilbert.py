import numpy as np
import pytest
from scipy.special import dawsn

from kkphase.exceptions import InvalidRangeError, NonFiniteValueError
from kkphase.hilbert import (
    HilbertConfig,
    constant_truncation_bound,
    hilbert_pv_oracle,
    hilbert_zhou,
    zhou_sum,
)
from kkphase.spectral import SampledFunction, integrate, make_uniform_grid

EPS = np.finfo(float).eps
# scipy quad(weight="cauchy") on [0, 1], converted to the (1/pi) int f/(x-t) convention
GAUSS_AT_03 = -0.510636643937


def gaussian(center=0.5, sigma=0.1):
    return lambda t: np.exp(-((t - center) ** 2) / (2 * sigma**2))


def test_config_validation():
    with pytest.raises(InvalidRangeError):
        HilbertConfig(0)
    with pytest.raises(InvalidRangeError):
        HilbertConfig(3, 1.0, 0.0)
    with pytest.raises(InvalidRangeError):
        HilbertConfig(1, 0.0, 0.5)


def test_kernel_range_excludes_boundaries():
    assert HilbertConfig(3, 0.0, 1.0).kernel_range() == (1, 7)
    assert HilbertConfig(3, -0.1, 1.0).kernel_range() == (0, 7)
    np.testing.assert_array_equal(HilbertConfig(2, 0, 1).kernel_points(), [0.375, 0.625, 0.875])


def test_zero_input():
    grid = make_uniform_grid(0, 1, 101)
    out = hilbert_zhou(lambda t: np.zeros_like(t), HilbertConfig(12), grid)
    np.testing.assert_array_equal(out.values, 0.0)


@pytest.mark.parametrize("j", [4, 9, 13])
def test_fast_matches_direct_sum(j):
    grid = make_uniform_grid(0, 1, 257)
    f = lambda t: np.sin(7 * t) + t**2
    cfg = HilbertConfig(j)
    fast = hilbert_zhou(f, cfg, grid).values
    direct = hilbert_zhou(f, cfg, grid, method="direct").values
    np.testing.assert_allclose(fast, direct, rtol=0, atol=1e-12)


def test_fast_matches_direct_sum_j17_spot_checks():
    grid = make_uniform_grid(0, 1, 10000)
    cfg = HilbertConfig(17)
    fast = hilbert_zhou(gaussian(), cfg, grid).values
    t = cfg.kernel_points()
    sel = np.r_[0:3, 1234, 5000, 7777, 9997:10000]
    direct = zhou_sum(gaussian()(t), cfg.kernel_range()[0], 17, grid.nodes[sel], method="direct")
    np.testing.assert_allclose(fast[sel], direct, rtol=0, atol=1e-12)


def test_sign_matches_oracle_and_closed_form():
    # the positive-sign log-kernel sum reproduces H[f] = (1/pi) PV int f(t)/(x-t) dt
    f = gaussian()
    grid = make_uniform_grid(0.3, 0.7, 5)
    zhou = hilbert_zhou(f, HilbertConfig(17), grid).values[0]
    oracle = hilbert_pv_oracle(f, 0.3, (0.0, 1.0))
    assert abs(oracle - GAUSS_AT_03) < 1e-6
    assert abs(zhou - oracle) < 1e-4
    closed = 2 / np.sqrt(np.pi) * dawsn(-0.2 / (np.sqrt(2) * 0.1))
    assert np.sign(zhou) == np.sign(closed) == -1


def test_even_input_vanishes_at_center():
    grid = make_uniform_grid(0, 1, 10001)
    out = hilbert_zhou(gaussian(), HilbertConfig(17), grid)
    assert abs(out.values[5000]) < 1e-6


def test_singular_lattice_hits_are_finite():
    # x = 0.5 and x = 1 sit exactly on kernel cell edges
    grid = make_uniform_grid(0, 1, 3)
    out = hilbert_zhou(lambda t: 1 + t, HilbertConfig(10), grid)
    assert np.all(np.isfinite(out.values))


def test_nonfinite_input_rejected():
    grid = make_uniform_grid(0, 1, 5)
    with pytest.raises(NonFiniteValueError):
        hilbert_zhou(lambda t: np.where(t > 0.5, np.nan, t), HilbertConfig(3), grid)


def test_output_grid_outside_domain():
    with pytest.raises(InvalidRangeError):
        hilbert_zhou(np.cos, HilbertConfig(8, 0, 1), make_uniform_grid(-0.5, 1, 5))


def test_linearity():
    grid = make_uniform_grid(0, 1, 2000)
    cfg = HilbertConfig(17)
    f, g = gaussian(), lambda t: np.sin(5 * t)
    a, b = 2.5, -0.75
    hf = hilbert_zhou(f, cfg, grid).values
    hg = hilbert_zhou(g, cfg, grid).values
    hc = hilbert_zhou(lambda t: a * f(t) + b * g(t), cfg, grid).values
    # FFT round-off is relative to the array's peak, not to each node
    scale = np.max(np.abs(a * hf) + np.abs(b * hg))
    assert np.max(np.abs(hc - (a * hf + b * hg))) <= 8 * EPS * scale


def test_constant_annihilation_wide_domain():
    grid = make_uniform_grid(0, 1, 201)
    cfg = HilbertConfig(10, -50.0, 51.0)
    c = 3.0
    out = hilbert_zhou(lambda t: np.full_like(t, c), cfg, grid)
    bound = constant_truncation_bound(cfg, grid)
    assert bound <= 0.01
    assert np.max(np.abs(out.values)) <= c * bound * (1 + 1e-9)


def test_parity_duality():
    grid = make_uniform_grid(0, 1, 10001)
    cfg = HilbertConfig(17)
    even = hilbert_zhou(gaussian(sigma=0.05), cfg, grid).values
    odd_in = lambda t: (t - 0.5) * np.exp(-((t - 0.5) ** 2) / (2 * 0.05**2))
    odd = hilbert_zhou(odd_in, cfg, grid).values
    assert np.max(np.abs(even + even[::-1])) < 1e-6
    assert np.max(np.abs(odd - odd[::-1])) < 1e-6


def test_pv_oracle_constant():
    val = hilbert_pv_oracle(lambda t: np.full_like(t, 2.0), 0.0, (-1e3, 1e3), quad_points=200_000)
    assert abs(val) < 1e-9


def test_pv_oracle_lorentzian():
    val = hilbert_pv_oracle(lambda t: 1 / (1 + t**2), 1.0, (-200.0, 200.0))
    assert abs(val - 0.5) < 2e-2
    # much tighter against adaptive Cauchy-weight quadrature (0.500000026526)
    assert abs(val - 0.500000026526) < 1e-5


def test_pv_oracle_odd_about_x():
    f = lambda t: t * np.exp(-(t**2))
    x, w, L, n = 0.0, 1e-3, 5.0, 400_000
    two_sided = hilbert_pv_oracle(f, x, (-L, L), exclusion_half_width=w, quad_points=2 * n)
    ds = (L - w) / n
    s = w + (np.arange(n) + 0.5) * ds
    one_sided = np.sum(f(s) / s) * ds
    slope = (f(np.array([w]))[0] - f(np.array([-w]))[0]) / (2 * w)
    expected = (-2 * one_sided - 2 * w * slope) / np.pi
    assert abs(two_sided - expected) <= 8 * EPS * abs(expected)


def test_pv_oracle_errors():
    with pytest.raises(InvalidRangeError):
        hilbert_pv_oracle(np.cos, 0.0, (0.0, 1.0))
    with pytest.raises(InvalidRangeError):
        hilbert_pv_oracle(np.cos, 0.5, (0.0, 1.0), exclusion_half_width=0.6)
    with pytest.raises(NonFiniteValueError), np.errstate(invalid="ignore"):
        hilbert_pv_oracle(lambda t: np.log(t), 0.5, (-1.0, 1.0), quad_points=1000)


def _decaying_gaussian_transforms():
    # sigma = 0.004 on [0, 1]: exp(-0.25 / (2 * 0.004**2)) is far below 1e-8
    grid = make_uniform_grid(0, 1, 10000)
    cfg = HilbertConfig(17)
    f = gaussian(sigma=0.004)
    hf = hilbert_zhou(f, cfg, grid)
    hhf = hilbert_zhou(hf, cfg, grid)
    return grid, f(grid.nodes), hf, hhf


def test_parseval_and_anti_involution():
    grid, fvals, hf, hhf = _decaying_gaussian_transforms()
    e_f = integrate(SampledFunction(grid, fvals**2))
    e_h = integrate(SampledFunction(grid, hf.values**2))
    assert abs(e_h - e_f) / e_f < 0.01
    central = slice(2500, 7500)
    assert np.max(np.abs(hhf.values[central] + fvals[central])) < 0.01 * fvals.max()
