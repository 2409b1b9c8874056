"""
Bandwidth-limited IM/DD link: Gaussian low-pass response, a received-power
scale and additive white Gaussian noise set by an OSNR figure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .sigcore import RealWaveform

LN2 = math.log(2.0)


@dataclass(frozen=True)
class ChannelConfig:
    """Link parameters.

    ``f3db`` and ``osnr_db`` may be ``math.inf`` for an unlimited or
    noiseless link. ``noise_reference_power`` pins the signal power the
    OSNR is referred to; left as ``None`` it is measured from the input.
    """

    f3db: float = 1e9
    osnr_db: float = math.inf
    ref_bandwidth: float = 12.5e9
    power_scale: float = 1.0
    seed: int = 0
    noise_reference_power: float | None = None

    def __post_init__(self):
        if not self.f3db > 0:
            raise InvalidParameterError("f3db must be > 0")
        if not self.ref_bandwidth > 0:
            raise InvalidParameterError("ref_bandwidth must be > 0")
        if not self.power_scale >= 0:
            raise InvalidParameterError("power_scale must be >= 0")


def gaussian_response(freq, f3db: float) -> np.ndarray:
    """Amplitude response ``2 ** (-(f/f3db)**2 / 2)``: unity at DC, -3 dB power at ``f3db``."""
    freq = np.asarray(freq, dtype=float)
    if math.isinf(f3db):
        return np.ones_like(freq)
    return np.exp(-0.5 * LN2 * (freq / f3db) ** 2)


def gaussian_lowpass(x: RealWaveform, f3db: float) -> RealWaveform:
    """Zero-phase Gaussian low-pass filter applied on the whole frame."""
    if not f3db > 0:
        raise InvalidParameterError("f3db must be > 0")
    if math.isinf(f3db):
        return x.with_samples(x.samples.copy())
    n = len(x)
    freq = np.fft.rfftfreq(n, d=1.0 / x.sample_rate)
    y = np.fft.irfft(np.fft.rfft(x.samples) * gaussian_response(freq, f3db), n=n)
    return x.with_samples(y)


def noise_variance(signal_power: float, sample_rate: float, cfg: ChannelConfig) -> float:
    """Per-sample noise variance for ``cfg.osnr_db``.

    ``sigma^2 = P * (ref_bandwidth / (sample_rate / 2)) / 10**(osnr_db / 10)``
    """
    if math.isinf(cfg.osnr_db) and cfg.osnr_db > 0:
        return 0.0
    osnr = 10.0 ** (cfg.osnr_db / 10.0)
    return signal_power * (cfg.ref_bandwidth / (sample_rate / 2.0)) / osnr


def add_noise(x: RealWaveform, cfg: ChannelConfig) -> RealWaveform:
    """Scale by ``power_scale`` and add white Gaussian noise.

    The noise level is referred to the unscaled signal (or to
    ``cfg.noise_reference_power``), so lowering ``power_scale`` lowers the SNR
    the way attenuating the received optical power would.
    """
    scaled = cfg.power_scale * x.samples
    if math.isinf(cfg.osnr_db) and cfg.osnr_db > 0:
        return x.with_samples(scaled)
    p_ref = cfg.noise_reference_power
    if p_ref is None:
        p_ref = float(np.mean(x.samples**2))
    sigma = math.sqrt(noise_variance(p_ref, x.sample_rate, cfg))
    rng = np.random.default_rng(cfg.seed)
    return x.with_samples(scaled + sigma * rng.standard_normal(scaled.size))


def transmit(x: RealWaveform, cfg: ChannelConfig) -> RealWaveform:
    """Full link: low-pass, then power scale and noise."""
    return add_noise(gaussian_lowpass(x, cfg.f3db), cfg)
