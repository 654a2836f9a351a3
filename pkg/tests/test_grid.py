import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcmap.grid import (
    Field,
    FrequencyMultiplier,
    apply_multiplier,
    bilinear,
    dz,
    dzbar,
    l2_norm,
    make_grid,
    read_field,
    sample,
    write_field,
)


def test_make_grid_spacing():
    g = make_grid(0.0, 4.0, 16)
    assert g.spacing == pytest.approx(0.5)


@pytest.mark.parametrize("bad_n", [15, 100, 8, 0])
def test_make_grid_rejects_bad_n(bad_n):
    with pytest.raises(ValueError):
        make_grid(0.0, 4.0, bad_n)


def test_make_grid_rejects_bad_half_width():
    with pytest.raises(ValueError):
        make_grid(0.0, -1.0, 64)


def test_grid_covers_shifted_box():
    g = make_grid(1 + 1j, 8.0, 1024)
    t = g.axis()
    assert t[0] == pytest.approx(-8.0)
    assert t[-1] == pytest.approx(8.0 - g.spacing)
    z = g.nodes()
    assert z[0, 0] == pytest.approx(1 + 1j - 8 - 8j)
    # covers [-7, 9] x [-7, 9] up to the excluded endpoint
    assert z[0, 0].real == pytest.approx(-7.0)
    assert z[-1, -1].real == pytest.approx(9.0 - g.spacing)


def test_sample_zero_and_identity():
    g = make_grid(0.0, 2.0, 16)
    zero = sample(lambda z: 0.0 * z, g)
    assert np.all(zero.values == 0)
    ident = sample(lambda z: z, g)
    assert np.array_equal(ident.values, g.nodes())


def test_sample_rejects_nonfinite():
    g = make_grid(0.0, 2.0, 16)
    with pytest.raises(ValueError):
        sample(lambda z: np.where(z == z[0, 0] * np.ones_like(z), np.inf, 1.0), g)


def test_disc_indicator_mean_matches_area():
    # pixel-counting oracle: mean of the sampled indicator estimates pi / 64
    g = make_grid(0.0, 4.0, 1024)
    f = sample(lambda z: (np.abs(z) < 1.0).astype(complex), g)
    assert float(f.values.real.mean()) == pytest.approx(np.pi / 64.0, rel=0.01)


def test_multiplier_identity_roundtrip(grid256):
    rng = np.random.default_rng(3)
    f = Field(grid256, rng.standard_normal((256, 256)) + 1j * rng.standard_normal((256, 256)))
    one = FrequencyMultiplier(lambda a, b: np.ones_like(a, dtype=complex), 1.0)
    out = apply_multiplier(f, one)
    assert l2_norm(Field(grid256, out.values - f.values)) <= 1e-12 * l2_norm(f)


def test_multiplier_zero(grid256):
    f = sample(lambda z: np.exp(-np.abs(z) ** 2), grid256)
    zero = FrequencyMultiplier(lambda a, b: np.zeros_like(a, dtype=complex), 0.0)
    assert np.all(apply_multiplier(f, zero).values == 0)


def test_parseval(grid256):
    rng = np.random.default_rng(5)
    v = rng.standard_normal((256, 256)) + 1j * rng.standard_normal((256, 256))
    f = Field(grid256, v)
    fourier = np.fft.fft2(v) / 256  # unitary normalization for the check
    assert np.linalg.norm(fourier) == pytest.approx(np.linalg.norm(v), rel=1e-10)


@settings(max_examples=20, deadline=None)
@given(
    a=st.complex_numbers(min_magnitude=0.1, max_magnitude=3, allow_nan=False, allow_infinity=False),
    b=st.complex_numbers(min_magnitude=0.1, max_magnitude=3, allow_nan=False, allow_infinity=False),
    seed=st.integers(0, 2**16),
)
def test_multiplier_linearity(a, b, seed):
    g = make_grid(0.0, 2.0, 32)
    rng = np.random.default_rng(seed)
    f = Field(g, rng.standard_normal((32, 32)) + 1j * rng.standard_normal((32, 32)))
    h = Field(g, rng.standard_normal((32, 32)) + 1j * rng.standard_normal((32, 32)))
    m = FrequencyMultiplier(lambda p, q: np.exp(1j * np.arctan2(q, p)), 0.3)
    lhs = apply_multiplier(Field(g, a * f.values + b * h.values), m).values
    rhs = a * apply_multiplier(f, m).values + b * apply_multiplier(h, m).values
    scale = max(l2_norm(f), l2_norm(h))
    assert l2_norm(Field(g, lhs - rhs)) <= 1e-10 * (abs(a) + abs(b)) * scale


def test_unimodular_multiplier_is_isometry(grid256):
    rng = np.random.default_rng(7)
    f = Field(grid256, rng.standard_normal((256, 256)) + 1j * rng.standard_normal((256, 256)))
    m = FrequencyMultiplier(lambda p, q: np.exp(2j * np.arctan2(q, p)), 1.0)
    out = apply_multiplier(f, m)
    assert l2_norm(out) == pytest.approx(l2_norm(f), rel=1e-10)


def test_beurling_multiplier_disc_value():
    # indicator of the unit disc maps to -1/z^2 outside: check at z = 2
    g = make_grid(0.0, 8.0, 512)
    f = sample(lambda z: (np.abs(z) < 1.0).astype(complex), g)
    m = FrequencyMultiplier(
        lambda p, q: np.where(p + 1j * q != 0, (p - 1j * q) / np.where(p + 1j * q != 0, p + 1j * q, 1), 0),
        0.0,
    )
    out = apply_multiplier(f, m)
    j = np.argmin(np.abs(g.nodes().ravel() - 2.0))
    assert abs(out.values.ravel()[j] - (-0.25)) <= 0.02 * 0.25


def test_spectral_derivatives():
    g = make_grid(0.0, 4.0, 128)
    f = sample(lambda z: np.exp(-np.abs(z) ** 2) * z, g)
    # d/dzbar of z * g(|z|^2) with g = exp(-r^2): z * (-z) * g ... check against
    # finite differences instead of a closed form
    s = g.spacing
    v = f.values
    ddx = (np.roll(v, -1, axis=1) - np.roll(v, 1, axis=1)) / (2 * s)
    ddy = (np.roll(v, -1, axis=0) - np.roll(v, 1, axis=0)) / (2 * s)
    assert np.max(np.abs(dz(f).values - (ddx - 1j * ddy) / 2)) <= 1e-2
    assert np.max(np.abs(dzbar(f).values - (ddx + 1j * ddy) / 2)) <= 1e-2


def test_field_serialization_roundtrip(tmp_path):
    g = make_grid(0.5 + 0.25j, 3.0, 32)
    rng = np.random.default_rng(11)
    f = Field(g, rng.standard_normal((32, 32)) + 1j * rng.standard_normal((32, 32)))
    write_field(f, tmp_path / "field")
    back = read_field(tmp_path / "field")
    assert back.grid == g
    assert np.array_equal(back.values, f.values)


def test_bilinear_interpolation_linear_exact():
    g = make_grid(0.0, 2.0, 64)
    f = sample(lambda z: 2.0 * z + 1.0, g)
    pts = np.array([0.13 + 0.21j, -0.76 + 0.4j, 1.1 - 0.9j])
    assert np.allclose(bilinear(f, pts), 2.0 * pts + 1.0, atol=1e-12)


def test_field_shape_validation():
    g = make_grid(0.0, 2.0, 16)
    with pytest.raises(ValueError):
        Field(g, np.zeros((8, 8)))
    with pytest.raises(ValueError):
        Field(g, np.full((16, 16), np.nan))
