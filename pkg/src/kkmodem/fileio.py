"""
Waveform files and their JSON sidecars.

Binary layout, all little-endian::

    magic      4s   b"KKWV"
    version    u16
    channels   u8
    complex    u8   (0 or 1)
    rate       f64  [Hz]
    count      u64  samples per channel
    payload    f32  (re, im interleaved when complex)
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .errors import KkError
from .sigcore import ComplexWaveform, RealWaveform

MAGIC = b"KKWV"
VERSION = 1
HEADER = struct.Struct("<4sHBBdQ")

# sidecar keys read back by the demodulator; modem config fields ride alongside
SIDECAR_FIELDS = ("format", "bias", "tx_rms", "frame_symbols", "seed")


class WaveformFileError(KkError, ValueError):
    pass


def write_waveform(path, waveform) -> Path:
    path = Path(path)
    is_complex = isinstance(waveform, ComplexWaveform)
    data = np.asarray(waveform.samples)
    if is_complex:
        payload = np.empty(data.size * 2, dtype="<f4")
        payload[0::2] = data.real
        payload[1::2] = data.imag
    else:
        payload = data.astype("<f4")
    header = HEADER.pack(MAGIC, VERSION, 1, int(is_complex), float(waveform.sample_rate), data.size)
    path.write_bytes(header + payload.tobytes())
    return path


def read_waveform(path):
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < HEADER.size:
        raise WaveformFileError(f"{path}: file too short for a waveform header")
    magic, version, channels, is_complex, rate, count = HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise WaveformFileError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise WaveformFileError(f"{path}: unsupported format version {version}")
    if channels != 1:
        raise WaveformFileError(f"{path}: only single-channel files are supported, got {channels}")
    values = count * (2 if is_complex else 1)
    if len(raw) - HEADER.size != 4 * values:
        raise WaveformFileError(
            f"{path}: payload has {len(raw) - HEADER.size} bytes, header promises {4 * values}"
        )
    payload = np.frombuffer(raw, dtype="<f4", count=values, offset=HEADER.size)
    payload = payload.astype(float)
    if is_complex:
        return ComplexWaveform(payload[0::2] + 1j * payload[1::2], rate)
    return RealWaveform(payload, rate)


def write_sidecar(path, record: dict) -> Path:
    path = Path(path)
    missing = [k for k in SIDECAR_FIELDS if k not in record]
    if missing:
        raise WaveformFileError(f"sidecar record lacks {missing}")
    path.write_text(json.dumps(record, indent=2, sort_keys=True) + "\n")
    return path


def read_sidecar(path) -> dict:
    path = Path(path)
    record = json.loads(path.read_text())
    missing = [k for k in SIDECAR_FIELDS if k not in record]
    if missing:
        raise WaveformFileError(f"{path}: sidecar lacks {missing}")
    if record.get("format") not in ("kk", "pam4", "cap16"):
        raise WaveformFileError(f"{path}: unknown format {record.get('format')!r}")
    return record
