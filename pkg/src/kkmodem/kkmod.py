"""
Kramers-Kronig intensity modulation and phase-retrieval demodulation.

The transmitter builds the single-sideband field ``h(t) = A + s(t) exp(iwt)``
with ``s = I - iQ`` and sends only its modulus,

    y(t) = sqrt((I + A cos wt)^2 + (Q + A sin wt)^2),

with the mean removed. When ``h`` is minimum phase (its trajectory does not
wind around the origin) the receiver recovers the phase as the Hilbert
transform of ``log|h|`` and unwinds the carrier to get ``I`` and ``Q`` back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import sigcore
from .errors import DemodulationError, OriginCrossingError, InvalidParameterError, LengthError
from .sigcore import ComplexWaveform, RealWaveform

# Gray labels per rail, most significant bit first.
GRAY_4 = {(0, 0): -3.0, (0, 1): -1.0, (1, 1): 1.0, (1, 0): 3.0}
GRAY_2 = {(0,): -1.0, (1,): 1.0}


@dataclass(frozen=True)
class Alphabet:
    """Ordered per-rail level set with Gray bit labels."""

    levels: tuple
    labels: tuple

    @classmethod
    def for_levels(cls, levels_per_rail: int) -> "Alphabet":
        table = {4: GRAY_4, 2: GRAY_2}.get(levels_per_rail)
        if table is None:
            raise InvalidParameterError(f"levels_per_rail must be 2 or 4, got {levels_per_rail}")
        pairs = sorted(table.items(), key=lambda kv: kv[1])
        return cls(tuple(v for _, v in pairs), tuple(k for k, _ in pairs))

    @property
    def bits_per_level(self) -> int:
        return len(self.labels[0])

    def encode(self, bits: np.ndarray) -> np.ndarray:
        k = self.bits_per_level
        groups = np.asarray(bits, dtype=np.int64).reshape(-1, k)
        index = groups @ (1 << np.arange(k - 1, -1, -1))
        lut = np.empty(1 << k)
        for label, level in zip(self.labels, self.levels):
            lut[int("".join(map(str, label)), 2)] = level
        return lut[index]

    def slice(self, soft) -> np.ndarray:
        """Nearest-level hard decision."""
        levels = np.asarray(self.levels)
        thresholds = (levels[1:] + levels[:-1]) / 2
        return levels[np.searchsorted(thresholds, np.asarray(soft, dtype=float))]

    def decode(self, symbols) -> np.ndarray:
        levels = np.asarray(self.levels)
        thresholds = (levels[1:] + levels[:-1]) / 2
        idx = np.searchsorted(thresholds, np.asarray(symbols, dtype=float))
        table = np.asarray(self.labels, dtype=np.uint8)
        return table[idx].reshape(-1)


@dataclass(frozen=True)
class KkConfig:
    """Parameters of the KK modulator.

    The carrier is derived from the symbol rate: ``f_c = R_s (1 + rolloff) / 2``
    so the single-sideband spectrum of ``s(t) exp(iwt)`` sits in ``[0, R_s(1+rolloff)]``.
    """

    amplitude_A: float = 20.0
    symbol_rate: float = 1e9
    rolloff: float = 0.1
    span_symbols: int = 30
    samples_per_symbol: int = 8
    levels_per_rail: int = 4

    def __post_init__(self):
        if self.amplitude_A < 0:
            raise InvalidParameterError("amplitude_A must be >= 0")
        if self.symbol_rate <= 0:
            raise InvalidParameterError("symbol_rate must be > 0")
        if self.samples_per_symbol < 2:
            raise InvalidParameterError("samples_per_symbol must be >= 2")
        if self.levels_per_rail not in (2, 4):
            raise InvalidParameterError("levels_per_rail must be 2 or 4")
        if self.sample_rate <= 2 * self.carrier_frequency:
            raise InvalidParameterError("carrier is not representable at this sample rate")

    @property
    def carrier_frequency(self) -> float:
        return self.symbol_rate * (1 + self.rolloff) / 2

    @property
    def sample_rate(self) -> float:
        return self.symbol_rate * self.samples_per_symbol

    @property
    def bits_per_symbol(self) -> int:
        return 2 * int(math.log2(self.levels_per_rail))

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet.for_levels(self.levels_per_rail)

    @property
    def pulse(self) -> sigcore.PulseShape:
        return sigcore.rrc_taps(self.rolloff, self.span_symbols, self.samples_per_symbol)

    @property
    def drive_gain(self) -> float:
        """Scale applied to the unit-energy RRC rails.

        With it the shaped rails carry the symbol power per sample, so the
        constellation keeps the same amplitude for any oversampling ratio.
        """
        return math.sqrt(self.samples_per_symbol)


@dataclass(frozen=True)
class SymbolFrame:
    """Paired I/Q symbol streams (hard or soft) with their alphabet."""

    i_symbols: np.ndarray = field(repr=False)
    q_symbols: np.ndarray = field(repr=False)
    alphabet: Alphabet

    def __post_init__(self):
        i = np.asarray(self.i_symbols, dtype=float)
        q = np.asarray(self.q_symbols, dtype=float)
        if i.shape != q.shape or i.ndim != 1:
            raise LengthError("I and Q symbol streams must be 1-D and of equal length")
        object.__setattr__(self, "i_symbols", i)
        object.__setattr__(self, "q_symbols", q)

    def __len__(self):
        return self.i_symbols.size

    @property
    def complex(self) -> np.ndarray:
        return self.i_symbols + 1j * self.q_symbols

    def is_hard(self) -> bool:
        levels = np.asarray(self.alphabet.levels)
        return bool(
            np.isin(self.i_symbols, levels).all() and np.isin(self.q_symbols, levels).all()
        )

    def sliced(self) -> "SymbolFrame":
        return SymbolFrame(
            self.alphabet.slice(self.i_symbols), self.alphabet.slice(self.q_symbols), self.alphabet
        )

    def subframe(self, start: int, stop: int) -> "SymbolFrame":
        return SymbolFrame(self.i_symbols[start:stop], self.q_symbols[start:stop], self.alphabet)


@dataclass(frozen=True)
class ModulatedFrame:
    """Bias-free drive waveform ``y'(t)`` plus what the receiver needs to undo it."""

    waveform: RealWaveform
    bias: float
    peak_to_peak: float
    min_phase_ok: bool
    config: KkConfig
    tx_rms: float
    winding: int | None
    field: ComplexWaveform = field(repr=False)
    n_symbols: int = 0


def map_bits(bits, levels_per_rail: int = 4) -> SymbolFrame:
    """Split ``bits`` alternately into I and Q streams and Gray-map each rail."""
    bits = np.asarray(bits, dtype=np.int64).ravel()
    alphabet = Alphabet.for_levels(levels_per_rail)
    per_symbol = 2 * alphabet.bits_per_level
    if bits.size == 0 or bits.size % per_symbol:
        raise LengthError(f"bit count {bits.size} is not a positive multiple of {per_symbol}")
    if np.any((bits != 0) & (bits != 1)):
        raise InvalidParameterError("bits must be 0 or 1")
    return SymbolFrame(alphabet.encode(bits[0::2]), alphabet.encode(bits[1::2]), alphabet)


def demap_bits(frame: SymbolFrame) -> np.ndarray:
    """Inverse of :func:`map_bits`; soft symbols are sliced first."""
    i_bits = frame.alphabet.decode(frame.i_symbols)
    q_bits = frame.alphabet.decode(frame.q_symbols)
    out = np.empty(i_bits.size * 2, dtype=np.uint8)
    out[0::2] = i_bits
    out[1::2] = q_bits
    return out


def shaped_rails(frame: SymbolFrame, config: KkConfig) -> tuple[RealWaveform, RealWaveform]:
    pulse = config.pulse
    i_t = sigcore.shape(frame.i_symbols, pulse, config.symbol_rate)
    q_t = sigcore.shape(frame.q_symbols, pulse, config.symbol_rate)
    g = config.drive_gain
    return i_t.with_samples(g * i_t.samples), q_t.with_samples(g * q_t.samples)


def kk_field(frame: SymbolFrame, config: KkConfig) -> ComplexWaveform:
    """The minimum-phase candidate ``h(t) = A + (I - iQ) exp(iwt)``."""
    i_t, q_t = shaped_rails(frame, config)
    s = ComplexWaveform(i_t.samples - 1j * q_t.samples, i_t.sample_rate)
    return s.with_samples(config.amplitude_A + sigcore.mix(s, config.carrier_frequency, +1).samples)


def kk_modulate(frame: SymbolFrame, config: KkConfig) -> ModulatedFrame:
    """Synthesize the KK intensity waveform for ``frame``.

    A trajectory that winds around the origin is reported through
    ``min_phase_ok`` rather than raised, so undersized ``A`` can be studied.
    """
    h = kk_field(frame, config)
    y = np.abs(h.samples)
    bias = float(np.mean(y))
    y_ac = y - bias
    try:
        winding = sigcore.winding_number(h)
    except OriginCrossingError:
        winding = None
    return ModulatedFrame(
        waveform=RealWaveform(y_ac, h.sample_rate),
        bias=bias,
        peak_to_peak=float(np.max(y) - np.min(y)),
        min_phase_ok=winding == 0,
        config=config,
        tx_rms=float(np.sqrt(np.mean(y_ac**2))),
        winding=winding,
        field=h,
        n_symbols=len(frame),
    )


class PhaseRetrieval(NamedTuple):
    phase: RealWaveform
    clamped: int


def kk_phase_retrieve(magnitude: RealWaveform, floor: float = 1e-6) -> PhaseRetrieval:
    """Recover the phase of a minimum-phase signal from its modulus.

    ``phase = hilbert(log |h|)``. Samples below ``floor * mean(|h|)`` are
    clamped before the logarithm; the number clamped is returned.
    """
    v = magnitude.samples
    eps = floor * float(np.mean(np.abs(v)))
    if eps <= 0:
        eps = floor
    low = v < eps
    clamped = int(np.count_nonzero(low))
    v = np.where(low, eps, v)
    phase = sigcore.hilbert(RealWaveform(np.log(v), magnitude.sample_rate))
    return PhaseRetrieval(phase, clamped)


@dataclass(frozen=True)
class Demodulated:
    symbols: SymbolFrame
    clamped: int
    gain: float
    timing_offset: int


def kk_demodulate(
    received: RealWaveform,
    bias: float,
    config: KkConfig,
    tx_rms: float | None = None,
    n_symbols: int | None = None,
) -> Demodulated:
    """Turn a received bias-free intensity waveform back into soft symbols.

    Parameters
    ----------
    received : RealWaveform
        Detected waveform with the bias removed (``y'`` after the channel).
    bias : float
        Transmitter mean ``mean(y)`` carried out of band.
    config : KkConfig
        Modulator settings; ``amplitude_A`` must match the transmitter.
    tx_rms : float, optional
        RMS of the transmitted ``y'``; when given the waveform is rescaled to
        it before the bias is restored (undoes any link gain).
    n_symbols : int, optional
        Frame length in symbols; inferred from the waveform length if omitted.

    Returns
    -------
    Demodulated
        Soft symbols at the best timing phase, before equalization.
    """
    if not math.isclose(received.sample_rate, config.sample_rate, rel_tol=1e-9):
        raise InvalidParameterError(
            f"received rate {received.sample_rate:g} Hz does not match config {config.sample_rate:g} Hz"
        )
    pulse = config.pulse
    sps = config.samples_per_symbol
    x = received.samples
    if n_symbols is None:
        n_symbols = sigcore.symbols_in(x.size, pulse)
    if n_symbols < 1:
        raise LengthError("received waveform is shorter than one symbol")

    gain = 1.0
    if tx_rms is not None:
        rx_rms = float(np.sqrt(np.mean((x - np.mean(x)) ** 2)))
        if rx_rms > 0:
            gain = tx_rms / rx_rms
    if not gain > 0:
        raise DemodulationError(f"AGC gain estimate {gain} is not positive")

    magnitude = RealWaveform(gain * (x - np.mean(x)) + bias, received.sample_rate)
    phase, clamped = kk_phase_retrieve(magnitude)
    h_hat = magnitude.samples * np.exp(1j * phase.samples)
    s_hat = sigcore.mix(
        ComplexWaveform(h_hat - config.amplitude_A, received.sample_rate),
        config.carrier_frequency,
        -1,
    ).samples
    # s = I - iQ
    baseband = s_hat.real - 1j * s_hat.imag
    filtered = sigcore.matched_filter(baseband, pulse) / config.drive_gain
    first = 2 * pulse.delay
    offset = sigcore.best_timing_offset(filtered, first, n_symbols, sps)
    soft = sigcore.downsample(filtered, first + offset, n_symbols, sps)
    frame = SymbolFrame(soft.real, soft.imag, config.alphabet)
    return Demodulated(frame, clamped, gain, offset)


def evm(received: SymbolFrame, reference: SymbolFrame) -> float:
    """Error vector magnitude in percent, symbols taken as ``I + iQ``."""
    if len(received) != len(reference) or len(reference) == 0:
        raise LengthError("EVM needs two non-empty frames of equal length")
    ref = reference.complex
    ref_energy = float(np.sum(np.abs(ref) ** 2))
    if ref_energy == 0:
        raise ZeroDivisionError("reference frame has zero energy")
    err = float(np.sum(np.abs(received.complex - ref) ** 2))
    return 100.0 * math.sqrt(err) / math.sqrt(ref_energy)
