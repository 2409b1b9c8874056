"""
Signal-processing primitives shared by every modem in the package.

Waveform containers, root-raised-cosine pulse shaping, the discrete Hilbert
transform, carrier mixing and the winding-number test used to decide whether
a complex trajectory is minimum phase.

All functions are pure; arrays passed in are never modified.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AliasingError, InvalidParameterError, OriginCrossingError


@dataclass(frozen=True)
class RealWaveform:
    """Uniformly sampled real signal.

    Parameters
    ----------
    samples : np.ndarray
        Real sample values.
    sample_rate : float
        Sampling rate [Hz].
    """

    samples: np.ndarray = field(repr=False)
    sample_rate: float

    def __post_init__(self):
        samples = np.asarray(self.samples)
        if np.iscomplexobj(samples):
            raise InvalidParameterError("RealWaveform samples must be real")
        object.__setattr__(self, "samples", samples.astype(float, copy=False))
        _check_rate(self.sample_rate)

    def __len__(self):
        return self.samples.size

    @property
    def time(self) -> np.ndarray:
        return np.arange(self.samples.size) / self.sample_rate

    def with_samples(self, samples) -> "RealWaveform":
        return RealWaveform(samples, self.sample_rate)


@dataclass(frozen=True)
class ComplexWaveform:
    """Uniformly sampled complex signal."""

    samples: np.ndarray = field(repr=False)
    sample_rate: float

    def __post_init__(self):
        samples = np.asarray(self.samples).astype(complex, copy=False)
        object.__setattr__(self, "samples", samples)
        _check_rate(self.sample_rate)

    def __len__(self):
        return self.samples.size

    @property
    def time(self) -> np.ndarray:
        return np.arange(self.samples.size) / self.sample_rate

    def with_samples(self, samples) -> "ComplexWaveform":
        return ComplexWaveform(samples, self.sample_rate)


def _check_rate(rate):
    if not (np.isfinite(rate) and rate > 0):
        raise InvalidParameterError(f"sample_rate must be positive and finite, got {rate!r}")


@dataclass(frozen=True)
class PulseShape:
    """Root-raised-cosine FIR taps plus the parameters that produced them."""

    taps: np.ndarray = field(repr=False)
    samples_per_symbol: int
    rolloff: float
    span_symbols: int

    @property
    def delay(self) -> int:
        """Group delay of one pass through the filter [samples]."""
        return (self.taps.size - 1) // 2


def _rrc_unit(t, rolloff):
    """Unnormalized RRC impulse response at times ``t`` given in symbol periods."""
    t = np.abs(np.asarray(t, dtype=float))
    a = rolloff
    h = np.empty_like(t)
    at_zero = t < 1e-12
    if a > 0:
        at_sing = np.abs(t - 1.0 / (4.0 * a)) < 1e-9
    else:
        at_sing = np.zeros_like(t, dtype=bool)
    regular = ~(at_zero | at_sing)
    tr = t[regular]
    num = np.sin(np.pi * tr * (1 - a)) + 4 * a * tr * np.cos(np.pi * tr * (1 + a))
    den = np.pi * tr * (1 - (4 * a * tr) ** 2)
    h[regular] = num / den
    h[at_zero] = 1 - a + 4 * a / np.pi
    if at_sing.any():
        h[at_sing] = (a / np.sqrt(2)) * (
            (1 + 2 / np.pi) * np.sin(np.pi / (4 * a))
            + (1 - 2 / np.pi) * np.cos(np.pi / (4 * a))
        )
    return h


def rrc_taps(rolloff: float, span_symbols: int, samples_per_symbol: int) -> PulseShape:
    """Design a unit-energy root-raised-cosine filter.

    Parameters
    ----------
    rolloff : float
        Excess-bandwidth factor in ``[0, 1]``.
    span_symbols : int
        Filter length in symbol periods; the filter has
        ``span_symbols * samples_per_symbol + 1`` taps.
    samples_per_symbol : int
        Oversampling ratio.

    Returns
    -------
    PulseShape
        Even-symmetric taps normalized so that ``sum(taps**2) == 1``.

    Notes
    -----
    The removable singularities at ``t = 0`` and ``t = +-T/(4*rolloff)`` are
    filled with their analytic limits.
    """
    if not 0.0 <= rolloff <= 1.0:
        raise InvalidParameterError(f"rolloff must lie in [0, 1], got {rolloff}")
    if int(span_symbols) != span_symbols or span_symbols < 2:
        raise InvalidParameterError(f"span_symbols must be an integer >= 2, got {span_symbols}")
    if int(samples_per_symbol) != samples_per_symbol or samples_per_symbol < 1:
        raise InvalidParameterError(
            f"samples_per_symbol must be an integer >= 1, got {samples_per_symbol}"
        )
    span_symbols = int(span_symbols)
    samples_per_symbol = int(samples_per_symbol)
    n = span_symbols * samples_per_symbol + 1
    # symmetric time grid in symbol periods; evaluated on |t| so taps are exactly even
    t = (np.arange(n) - (n - 1) / 2) / samples_per_symbol
    h = _rrc_unit(t, float(rolloff))
    h = h / np.sqrt(np.sum(h**2))
    return PulseShape(h, samples_per_symbol, float(rolloff), span_symbols)


def upsample(symbols, samples_per_symbol: int) -> np.ndarray:
    """Zero-stuff without trailing zeros: ``(n - 1) * sps + 1`` samples."""
    symbols = np.asarray(symbols)
    out = np.zeros((symbols.size - 1) * samples_per_symbol + 1, dtype=symbols.dtype)
    out[::samples_per_symbol] = symbols
    return out


def shape(symbols, pulse: PulseShape, symbol_rate: float = 1.0) -> RealWaveform:
    """Zero-stuff ``symbols`` and filter them with ``pulse``.

    The output has ``(len(symbols) - 1) * sps + len(taps)`` samples and
    symbol ``k`` is centred on sample ``k * sps + pulse.delay``.
    """
    symbols = np.asarray(symbols, dtype=float)
    if symbols.size == 0:
        raise InvalidParameterError("cannot shape an empty symbol sequence")
    sps = pulse.samples_per_symbol
    y = np.convolve(upsample(symbols, sps), pulse.taps)
    return RealWaveform(y, symbol_rate * sps)


def symbols_in(n_samples: int, pulse: PulseShape) -> int:
    """Inverse of the :func:`shape` length rule."""
    return (n_samples - pulse.taps.size) // pulse.samples_per_symbol + 1


def matched_filter(x: np.ndarray, pulse: PulseShape) -> np.ndarray:
    """Full convolution with the time-reversed taps (RRC taps are even)."""
    return np.convolve(x, pulse.taps[::-1])


def best_timing_offset(x: np.ndarray, first: int, count: int, sps: int) -> int:
    """Pick the sampling offset that maximizes mean symbol-point energy.

    Candidate offsets are ``-sps//2 ... sps - sps//2 - 1`` around the nominal
    first-symbol index ``first``.
    """
    offsets = np.arange(sps) - sps // 2
    energies = []
    for off in offsets:
        start = first + off
        idx = start + sps * np.arange(count)
        idx = idx[(idx >= 0) & (idx < x.size)]
        energies.append(np.mean(np.abs(x[idx]) ** 2) if idx.size else -np.inf)
    return int(offsets[int(np.argmax(energies))])


def downsample(x: np.ndarray, first: int, count: int, sps: int) -> np.ndarray:
    idx = first + sps * np.arange(count)
    out = np.zeros(count, dtype=x.dtype)
    ok = (idx >= 0) & (idx < x.size)
    out[ok] = x[idx[ok]]
    return out


def hilbert(x: RealWaveform) -> RealWaveform:
    """Discrete Hilbert transform, with ``hilbert(cos) == sin``.

    Computed on the whole frame through the analytic signal: negative
    frequency bins are zeroed, positive ones doubled, DC and Nyquist left
    untouched. The frame is implicitly treated as one period.
    """
    v = x.samples if isinstance(x, RealWaveform) else np.asarray(x, dtype=float)
    n = v.size
    if n < 4:
        raise InvalidParameterError("hilbert needs at least 4 samples")
    spectrum = np.fft.fft(v)
    weights = np.zeros(n)
    weights[0] = 1.0
    if n % 2 == 0:
        weights[n // 2] = 1.0
        weights[1 : n // 2] = 2.0
    else:
        weights[1 : (n + 1) // 2] = 2.0
    analytic = np.fft.ifft(spectrum * weights)
    out = analytic.imag
    if isinstance(x, RealWaveform):
        return x.with_samples(out)
    return RealWaveform(out, 1.0)


def winding_number(h: ComplexWaveform, eps: float = 1e-12) -> int:
    """Net number of turns the trajectory makes around the origin.

    Sums principal-value phase increments between consecutive samples, so
    the trajectory has to be sampled finely enough that no single step turns
    by more than half a revolution.

    Raises
    ------
    OriginCrossingError
        If any sample magnitude falls below ``eps``.
    """
    z = h.samples if isinstance(h, ComplexWaveform) else np.asarray(h, dtype=complex)
    if np.any(np.abs(z) < eps):
        raise OriginCrossingError("trajectory passes through the origin")
    if z.size < 2:
        return 0
    steps = np.angle(z[1:] / z[:-1])
    return int(np.rint(np.sum(steps) / (2 * np.pi)))


def mix(x, freq: float, sign: int = 1) -> ComplexWaveform:
    """Multiply by ``exp(sign * 2j*pi*freq*t)``, with ``t = 0`` at sample 0."""
    if sign not in (1, -1):
        raise InvalidParameterError("sign must be +1 or -1")
    if abs(freq) >= x.sample_rate / 2:
        raise AliasingError(
            f"mixing frequency {freq:g} Hz is not below Nyquist ({x.sample_rate / 2:g} Hz)"
        )
    t = np.arange(len(x)) / x.sample_rate
    return ComplexWaveform(x.samples * np.exp(sign * 2j * np.pi * freq * t), x.sample_rate)
