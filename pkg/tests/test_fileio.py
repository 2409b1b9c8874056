import struct

import numpy as np
import pytest

from kkmodem import fileio
from kkmodem.fileio import WaveformFileError
from kkmodem.sigcore import ComplexWaveform, RealWaveform


def test_real_round_trip(tmp_path):
    x = np.random.default_rng(0).standard_normal(1000)
    path = fileio.write_waveform(tmp_path / "a.kkw", RealWaveform(x, 8e9))
    back = fileio.read_waveform(path)
    assert isinstance(back, RealWaveform)
    assert back.sample_rate == 8e9
    np.testing.assert_array_equal(back.samples, x.astype(np.float32))


def test_complex_round_trip(tmp_path):
    rng = np.random.default_rng(1)
    z = rng.standard_normal(300) + 1j * rng.standard_normal(300)
    back = fileio.read_waveform(fileio.write_waveform(tmp_path / "c.kkw", ComplexWaveform(z, 1e6)))
    assert isinstance(back, ComplexWaveform)
    np.testing.assert_allclose(back.samples, z, rtol=1e-6)


def test_header_layout(tmp_path):
    path = fileio.write_waveform(tmp_path / "h.kkw", RealWaveform([1.0, -2.0], 2.5e9))
    raw = path.read_bytes()
    magic, version, channels, cplx, rate, count = struct.unpack_from("<4sHBBdQ", raw)
    assert (magic, version, channels, cplx, rate, count) == (b"KKWV", 1, 1, 0, 2.5e9, 2)
    assert len(raw) == 24 + 8
    assert struct.unpack_from("<2f", raw, 24) == (1.0, -2.0)


@pytest.mark.parametrize(
    "mutate",
    [
        lambda raw: raw[:10],
        lambda raw: b"XXXX" + raw[4:],
        lambda raw: raw[:4] + struct.pack("<H", 9) + raw[6:],
        lambda raw: raw[:6] + b"\x02" + raw[7:],
        lambda raw: raw[:-4],
    ],
)
def test_corrupt_files_rejected(tmp_path, mutate):
    path = fileio.write_waveform(tmp_path / "x.kkw", RealWaveform(np.ones(8), 1.0))
    path.write_bytes(mutate(path.read_bytes()))
    with pytest.raises(WaveformFileError):
        fileio.read_waveform(path)


def test_sidecar_round_trip(tmp_path):
    rec = {"format": "kk", "bias": 20.1, "tx_rms": 3.2, "frame_symbols": 100, "seed": 4, "amplitude_A": 20.0}
    assert fileio.read_sidecar(fileio.write_sidecar(tmp_path / "s.json", rec)) == rec


def test_sidecar_validation(tmp_path):
    with pytest.raises(WaveformFileError):
        fileio.write_sidecar(tmp_path / "s.json", {"format": "kk"})
    (tmp_path / "t.json").write_text('{"format": "ook", "bias": 0, "tx_rms": 0, "frame_symbols": 1, "seed": 0}')
    with pytest.raises(WaveformFileError):
        fileio.read_sidecar(tmp_path / "t.json")
