import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kkmodem import channel
from kkmodem.channel import ChannelConfig
from kkmodem.errors import InvalidParameterError
from kkmodem.sigcore import RealWaveform


def test_response_reference_points():
    f3 = 1e9
    assert channel.gaussian_response(0.0, f3) == 1.0
    assert channel.gaussian_response(f3, f3) ** 2 == pytest.approx(0.5, abs=1e-15)
    h2 = channel.gaussian_response(2e9, f3)
    assert h2 == pytest.approx(0.25, abs=1e-15)
    assert 20 * math.log10(h2) == pytest.approx(-12.04, abs=0.01)


def test_lowpass_spectrum_is_scaled_input_spectrum():
    rng = np.random.default_rng(0)
    x = RealWaveform(rng.standard_normal(4096), 8e9)
    y = channel.gaussian_lowpass(x, 1e9)
    f = np.fft.fftfreq(x.samples.size, 1 / x.sample_rate)
    expect = np.abs(np.fft.fft(x.samples)) * 2 ** (-((f / 1e9) ** 2) / 2)
    np.testing.assert_allclose(np.abs(np.fft.fft(y.samples)), expect, atol=1e-9)


def test_lowpass_is_real_and_zero_phase():
    rng = np.random.default_rng(1)
    x = rng.standard_normal(1001)
    f = np.fft.fftfreq(x.size, 1 / 4e9)
    full = np.fft.ifft(np.fft.fft(x) * channel.gaussian_response(np.abs(f), 0.7e9))
    assert np.max(np.abs(full.imag)) < 1e-12
    y = channel.gaussian_lowpass(RealWaveform(x, 4e9), 0.7e9).samples
    np.testing.assert_allclose(y, full.real, atol=1e-12)


@given(seed=st.integers(0, 2**32 - 1), a=st.floats(-5, 5), b=st.floats(-5, 5))
@settings(max_examples=30, deadline=None)
def test_lowpass_linear(seed, a, b):
    rng = np.random.default_rng(seed)
    x, y = rng.standard_normal((2, 300))
    lp = lambda v: channel.gaussian_lowpass(RealWaveform(v, 1e9), 1e8).samples  # noqa: E731
    np.testing.assert_allclose(lp(a * x + b * y), a * lp(x) + b * lp(y), atol=1e-9)


def test_unlimited_bandwidth_is_identity():
    x = RealWaveform(np.arange(10.0), 1.0)
    np.testing.assert_array_equal(channel.gaussian_lowpass(x, math.inf).samples, x.samples)


def test_noiseless_scales_exactly():
    x = RealWaveform(np.random.default_rng(2).standard_normal(500), 8e9)
    out = channel.add_noise(x, ChannelConfig(power_scale=0.3))
    np.testing.assert_array_equal(out.samples, 0.3 * x.samples)


def test_measured_snr_matches_formula():
    rng = np.random.default_rng(3)
    fs = 12e9
    x = RealWaveform(2.0 * rng.standard_normal(1_000_000), fs)
    cfg = ChannelConfig(osnr_db=12.0, seed=9)
    noise = channel.add_noise(x, cfg).samples - x.samples
    p_sig = np.mean(x.samples**2)
    expected_db = 12.0 - 10 * math.log10(cfg.ref_bandwidth / (fs / 2))
    measured_db = 10 * math.log10(p_sig / np.mean(noise**2))
    assert abs(measured_db - expected_db) < 0.1


def test_noise_referred_to_unscaled_power():
    rng = np.random.default_rng(4)
    x = RealWaveform(rng.standard_normal(200_000), 8e9)
    a = channel.add_noise(x, ChannelConfig(osnr_db=10, seed=1)).samples - x.samples
    b = channel.add_noise(x, ChannelConfig(osnr_db=10, seed=1, power_scale=0.1)).samples - 0.1 * x.samples
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_fixed_noise_reference():
    x = RealWaveform(np.zeros(100_000), 10e9)
    cfg = ChannelConfig(osnr_db=20, seed=2, noise_reference_power=0.125)
    sigma2 = channel.noise_variance(0.125, 10e9, cfg)
    assert sigma2 == pytest.approx(0.125 * (12.5e9 / 5e9) / 100)
    out = channel.add_noise(x, cfg).samples
    assert np.var(out) == pytest.approx(sigma2, rel=0.02)


def test_seed_determinism():
    x = RealWaveform(np.ones(1000), 1e9)
    a = channel.transmit(x, ChannelConfig(osnr_db=5, seed=7)).samples
    b = channel.transmit(x, ChannelConfig(osnr_db=5, seed=7)).samples
    c = channel.transmit(x, ChannelConfig(osnr_db=5, seed=8)).samples
    assert a.tobytes() == b.tobytes()
    assert not np.array_equal(a, c)


@pytest.mark.parametrize(
    "kwargs", [{"f3db": 0}, {"f3db": -1}, {"ref_bandwidth": 0}, {"power_scale": -0.1}]
)
def test_config_rejects(kwargs):
    with pytest.raises(InvalidParameterError):
        ChannelConfig(**kwargs)
