"""
Reference modems: PAM-4 and CAP-16.

Both reuse the RRC pulse from :mod:`kkmodem.sigcore` and the same drive
normalization as the KK modulator (rails carry symbol power per sample),
so waveforms from all three formats are directly comparable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import sigcore
from .equalizer import EqualizerConfig, EqualizerState, equalize_aligned, train_lms
from .errors import InvalidParameterError, LengthError
from .kkmod import Alphabet, SymbolFrame, demap_bits, map_bits
from .sigcore import RealWaveform

PAM4_ALPHABET = Alphabet.for_levels(4)


@dataclass(frozen=True)
class PamConfig:
    symbol_rate: float = 1.25e9
    rolloff: float = 0.1
    span_symbols: int = 30
    samples_per_symbol: int = 8

    def __post_init__(self):
        if self.symbol_rate <= 0 or self.samples_per_symbol < 1:
            raise InvalidParameterError("symbol_rate must be > 0 and samples_per_symbol >= 1")

    levels = PAM4_ALPHABET.levels
    bits_per_symbol = 2

    @property
    def sample_rate(self) -> float:
        return self.symbol_rate * self.samples_per_symbol

    @property
    def pulse(self) -> sigcore.PulseShape:
        return sigcore.rrc_taps(self.rolloff, self.span_symbols, self.samples_per_symbol)

    @property
    def drive_gain(self) -> float:
        return math.sqrt(self.samples_per_symbol)


@dataclass(frozen=True)
class CapConfig:
    """CAP-16 settings. ``center_frequency`` defaults to ``R_s (1 + rolloff) / 2``."""

    symbol_rate: float = 0.625e9
    rolloff: float = 0.1
    # the filter pair stays orthogonal to ~1e-4 at 60 symbols; 30 leaks ~4e-3
    span_symbols: int = 60
    samples_per_symbol: int = 4
    center_frequency: float | None = None

    def __post_init__(self):
        if self.symbol_rate <= 0:
            raise InvalidParameterError("symbol_rate must be > 0")
        if self.samples_per_symbol < 2:
            raise InvalidParameterError("CAP needs samples_per_symbol >= 2")

    bits_per_symbol = 4

    @property
    def carrier_frequency(self) -> float:
        if self.center_frequency is not None:
            return self.center_frequency
        return self.symbol_rate * (1 + self.rolloff) / 2

    @property
    def sample_rate(self) -> float:
        return self.symbol_rate * self.samples_per_symbol

    @property
    def pulse(self) -> sigcore.PulseShape:
        return sigcore.rrc_taps(self.rolloff, self.span_symbols, self.samples_per_symbol)

    @property
    def drive_gain(self) -> float:
        return math.sqrt(self.samples_per_symbol)


def _bits(bits, multiple):
    bits = np.asarray(bits, dtype=np.int64).ravel()
    if bits.size == 0 or bits.size % multiple:
        raise LengthError(f"bit count {bits.size} is not a positive multiple of {multiple}")
    return bits


def _receive_real(x: np.ndarray, pulse, n_symbols, drive_gain):
    sps = pulse.samples_per_symbol
    y = sigcore.matched_filter(x, pulse) / drive_gain
    first = 2 * pulse.delay
    off = sigcore.best_timing_offset(y, first, n_symbols, sps)
    return sigcore.downsample(y, first + off, n_symbols, sps)


def _eye_agc(soft: np.ndarray) -> np.ndarray:
    """Scale so the mean absolute sample matches the mean |level| of {+-1, +-3}."""
    m = float(np.mean(np.abs(soft)))
    return soft * (2.0 / m) if m > 0 else soft


# -- PAM-4 -------------------------------------------------------------------


def pam4_symbols(bits) -> np.ndarray:
    return PAM4_ALPHABET.encode(_bits(bits, 2))


def pam4_modulate(bits, config: PamConfig) -> RealWaveform:
    """Gray-map bit pairs onto {-3, -1, +1, +3} and RRC-shape them."""
    sym = pam4_symbols(bits)
    wf = sigcore.shape(sym, config.pulse, config.symbol_rate)
    return wf.with_samples(config.drive_gain * wf.samples)


def pam4_receive(waveform: RealWaveform, config: PamConfig, n_symbols: int | None = None):
    """Matched filter, timing pick and symbol-rate sampling; soft symbols out."""
    pulse = config.pulse
    if n_symbols is None:
        n_symbols = sigcore.symbols_in(len(waveform), pulse)
    x = waveform.samples - np.mean(waveform.samples)
    return _receive_real(x, pulse, n_symbols, config.drive_gain)


def pam4_demodulate(
    waveform: RealWaveform,
    config: PamConfig,
    training=None,
    equalizer: EqualizerConfig | None = None,
    n_symbols: int | None = None,
) -> np.ndarray:
    """Recover bits from a PAM-4 waveform.

    With ``training`` (the first transmitted symbols) a single-channel FFE is
    trained on them and applied before slicing.
    """
    soft = equalize_pam(pam4_receive(waveform, config, n_symbols), training, equalizer)[0]
    return PAM4_ALPHABET.decode(soft)


def equalize_pam(soft, training=None, equalizer: EqualizerConfig | None = None):
    """Single-rail use of the cross-coupled equalizer (no cross taps, zero Q rail)."""
    soft = _eye_agc(np.asarray(soft, dtype=float))
    if training is None or len(training) == 0:
        return soft, None
    cfg = replace(equalizer or EqualizerConfig(), cross_taps=0)
    n = len(training)
    zeros = np.zeros(n)
    state = train_lms(soft[:n], zeros, training, zeros, cfg)
    out, _ = equalize_aligned(soft, np.zeros_like(soft), state)
    return out, state


# -- CAP-16 ------------------------------------------------------------------


def cap_filters(config: CapConfig) -> tuple[np.ndarray, np.ndarray]:
    """In-phase / quadrature CAP shaping filters, each with unit energy.

    ``f_I = g cos(2 pi f_c t)`` and ``f_Q = g sin(2 pi f_c t)`` with ``g`` the
    RRC taps and ``t`` measured from the filter centre.
    """
    g = config.pulse.taps
    t = (np.arange(g.size) - (g.size - 1) / 2) / config.sample_rate
    arg = 2 * np.pi * config.carrier_frequency * t
    f_i = g * np.cos(arg)
    f_q = g * np.sin(arg)
    return f_i / np.linalg.norm(f_i), f_q / np.linalg.norm(f_q)


def cap16_modulate(bits, config: CapConfig) -> RealWaveform:
    """Two Gray-mapped 4-level rails through the CAP filter pair: ``I*f_I - Q*f_Q``."""
    frame = map_bits(_bits(bits, 4), 4)
    f_i, f_q = cap_filters(config)
    sps = config.samples_per_symbol
    tx = np.convolve(sigcore.upsample(frame.i_symbols, sps), f_i) - np.convolve(
        sigcore.upsample(frame.q_symbols, sps), f_q
    )
    return RealWaveform(config.drive_gain * tx, config.sample_rate)


def cap16_receive(
    waveform: RealWaveform, config: CapConfig, n_symbols: int | None = None
) -> SymbolFrame:
    """The two matched filters, timing pick, symbol-rate sampling and a joint AGC."""
    f_i, f_q = cap_filters(config)
    sps = config.samples_per_symbol
    if n_symbols is None:
        n_symbols = (len(waveform) - f_i.size) // sps + 1
    x = waveform.samples - np.mean(waveform.samples)
    r = (np.convolve(x, f_i[::-1]) - 1j * np.convolve(x, f_q[::-1])) / config.drive_gain
    first = f_i.size - 1
    off = sigcore.best_timing_offset(r, first, n_symbols, sps)
    soft = sigcore.downsample(r, first + off, n_symbols, sps)
    # one gain for both rails so the I/Q balance is left to the equalizer
    m = float(np.mean(np.abs(soft.real)) + np.mean(np.abs(soft.imag))) / 2
    if m > 0:
        soft = soft * (2.0 / m)
    return SymbolFrame(soft.real, soft.imag, PAM4_ALPHABET)


def cap16_demodulate(
    waveform: RealWaveform,
    config: CapConfig,
    training: SymbolFrame | None = None,
    equalizer: EqualizerConfig | None = None,
    n_symbols: int | None = None,
) -> np.ndarray:
    """Recover bits from a CAP-16 waveform, equalizing with the 2x2 FFE if trained."""
    soft, _ = equalize_cap(cap16_receive(waveform, config, n_symbols), training, equalizer)
    return demap_bits(soft)


def equalize_cap(
    soft: SymbolFrame, training: SymbolFrame | None = None, equalizer: EqualizerConfig | None = None
) -> tuple[SymbolFrame, EqualizerState | None]:
    if training is None or len(training) == 0:
        return soft, None
    n = len(training)
    state = train_lms(
        soft.i_symbols[:n],
        soft.q_symbols[:n],
        training.i_symbols,
        training.q_symbols,
        equalizer or EqualizerConfig(),
    )
    r_i, r_q = equalize_aligned(soft.i_symbols, soft.q_symbols, state)
    return SymbolFrame(r_i, r_q, soft.alphabet), state
