"""
Kramers-Kronig intensity-modulation modem: modulator, link model,
phase-retrieval demodulator, cross-coupled equalizer, baselines and an
experiment harness.
"""

from .baselines import CapConfig, PamConfig, cap16_demodulate, cap16_modulate
from .baselines import pam4_demodulate, pam4_modulate
from .bench import BerReport, ComparisonConfig, ExperimentConfig, compare_formats
from .bench import dac_budget, emit, run_point, run_sweep
from .channel import ChannelConfig, transmit
from .equalizer import EqualizerConfig, EqualizerState, equalize, train_lms
from .errors import (
    AliasingError,
    DemodulationError,
    DivergenceError,
    InvalidParameterError,
    KkError,
    LengthError,
    OriginCrossingError,
)
from .kkmod import KkConfig, SymbolFrame, demap_bits, evm, kk_demodulate, kk_modulate
from .kkmod import kk_phase_retrieve, map_bits
from .sigcore import ComplexWaveform, PulseShape, RealWaveform, hilbert, rrc_taps
from .sigcore import winding_number

__version__ = "0.1.0"
