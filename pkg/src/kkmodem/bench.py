"""
Experiment harness: modem -> link -> equalizer -> metrics, over parameter sweeps.

A sweep is described by :class:`ExperimentConfig` (JSON-serializable) and
produces a :class:`BerReport`, which :func:`emit` writes as CSV, JSON and
figures. Everything is deterministic given the config seed.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import baselines, channel, kkmod
from .baselines import CapConfig, PamConfig
from .channel import ChannelConfig
from .equalizer import EqualizerConfig, equalize_aligned, train_lms
from .errors import DivergenceError, InvalidParameterError, KkError
from .kkmod import KkConfig, SymbolFrame

HD_FEC = 3.8e-3
# mean power of a sine with unit peak-to-peak
FULL_SCALE_POWER = 0.125
FORMATS = ("kk", "pam4", "cap16")
AXES = ("amplitude_A", "osnr_db", "symbol_rate", "main_taps", "cross_taps", "power_scale")
CSV_HEADER = (
    "grid_value",
    "ber",
    "bits",
    "errors",
    "evm_pct",
    "ser",
    "min_phase_rate",
    "clamped_samples",
)

# Hardware results quoted for context only; a desk simulation cannot reproduce them.
HARDWARE_REFERENCE = {
    "sensitivity_gain_db": {"vs_pam4": 0.6, "vs_cap16": 1.5},
    "kk_sensitivity_dbm_2p5gbps": {"A=8": -31.5, "A=10": -32.0, "A=20": -33.0},
    "kk_sensitivity_dbm_5gbps": -27.5,
    "note": "measured on an optical wireless link; not reproducible in this simulation",
}

_MODEM_TYPES = {"kk": KkConfig, "pam4": PamConfig, "cap16": CapConfig}


class ExperimentError(KkError, ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: a modem, a link, an equalizer and an optional sweep.

    ``frame_symbols`` defaults to 30 000 bits per frame. ``guard_symbols``
    (default: the RRC span) are dropped at both frame edges. With
    ``hold_sample_rate`` a ``symbol_rate`` sweep keeps the converter rate
    fixed and changes the oversampling ratio instead. ``unit_swing``
    rescales every drive waveform to unit peak-to-peak before the link.
    """

    format: str = "kk"
    modem: object = field(default_factory=KkConfig)
    channel: ChannelConfig = field(default_factory=ChannelConfig)
    equalizer: EqualizerConfig = field(default_factory=EqualizerConfig)
    frame_symbols: int | None = None
    frames: int = 10
    seed: int = 1
    sweep_axis: str | None = None
    grid: tuple = ()
    guard_symbols: int | None = None
    hold_sample_rate: bool = True
    unit_swing: bool = False

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ExperimentError(f"unknown format {self.format!r}; expected one of {FORMATS}")
        if not isinstance(self.modem, _MODEM_TYPES[self.format]):
            raise ExperimentError(f"modem config does not match format {self.format!r}")
        if self.frames < 1:
            raise ExperimentError("frames must be >= 1")
        if self.sweep_axis is not None:
            if self.sweep_axis not in AXES:
                raise ExperimentError(f"unknown sweep axis {self.sweep_axis!r}")
            if len(self.grid) == 0:
                raise ExperimentError("sweep grid must be non-empty")
            if self.sweep_axis == "amplitude_A" and self.format != "kk":
                raise ExperimentError("amplitude_A sweeps only apply to the kk format")
        object.__setattr__(self, "grid", tuple(self.grid))
        if self.n_symbols <= self.training_stop + self.guard:
            raise ExperimentError("frame too short for guard + training + payload")

    @property
    def bits_per_symbol(self) -> int:
        return self.modem.bits_per_symbol

    @property
    def n_symbols(self) -> int:
        if self.frame_symbols is not None:
            return int(self.frame_symbols)
        return 30000 // self.bits_per_symbol

    @property
    def guard(self) -> int:
        return self.modem.span_symbols if self.guard_symbols is None else int(self.guard_symbols)

    @property
    def training_stop(self) -> int:
        return self.guard + self.equalizer.training_symbols

    def to_dict(self) -> dict:
        out = {
            "format": self.format,
            "modem": asdict(self.modem),
            "channel": _finite(asdict(self.channel)),
            "equalizer": asdict(self.equalizer),
            "frame_symbols": self.frame_symbols,
            "frames": self.frames,
            "seed": self.seed,
            "sweep_axis": self.sweep_axis,
            "grid": list(self.grid),
            "guard_symbols": self.guard_symbols,
            "hold_sample_rate": self.hold_sample_rate,
            "unit_swing": self.unit_swing,
        }
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        fmt = d.get("format", "kk")
        if fmt not in FORMATS:
            raise ExperimentError(f"unknown format {fmt!r}; expected one of {FORMATS}")
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ExperimentError(f"unknown config keys: {sorted(extra)}")
        d["modem"] = _build(_MODEM_TYPES[fmt], d.get("modem", {}))
        d["channel"] = _build(ChannelConfig, _infinite(d.get("channel", {})))
        d["equalizer"] = _build(EqualizerConfig, d.get("equalizer", {}))
        d["grid"] = tuple(d.get("grid", ()))
        return cls(**d)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))


def _build(kind, values: dict):
    known = {f.name for f in fields(kind)}
    extra = set(values) - known
    if extra:
        raise ExperimentError(f"unknown {kind.__name__} keys: {sorted(extra)}")
    return kind(**values)


def _finite(d: dict) -> dict:
    # JSON has no infinity; write it as the string "inf"
    return {k: ("inf" if isinstance(v, float) and math.isinf(v) else v) for k, v in d.items()}


def _infinite(d: dict) -> dict:
    return {k: (math.inf if v in ("inf", "Infinity") else v) for k, v in d.items()}


def apply_axis(config: ExperimentConfig, axis: str | None, value) -> ExperimentConfig:
    """Return ``config`` with the sweep variable set to ``value``."""
    if axis is None or value is None:
        return config
    if axis == "amplitude_A":
        return replace(config, modem=replace(config.modem, amplitude_A=float(value)))
    if axis in ("osnr_db", "power_scale"):
        return replace(config, channel=replace(config.channel, **{axis: float(value)}))
    if axis in ("main_taps", "cross_taps"):
        return replace(config, equalizer=replace(config.equalizer, **{axis: int(value)}))
    if axis == "symbol_rate":
        modem = config.modem
        if config.hold_sample_rate:
            sps = modem.sample_rate / float(value)
            if abs(sps - round(sps)) > 1e-9 or round(sps) < 2:
                raise ExperimentError(
                    f"sample rate {modem.sample_rate:g} Hz is not an integer multiple (>= 2) "
                    f"of symbol rate {value:g} Bd"
                )
            modem = replace(modem, symbol_rate=float(value), samples_per_symbol=int(round(sps)))
        else:
            modem = replace(modem, symbol_rate=float(value))
        return replace(config, modem=modem)
    raise ExperimentError(f"unknown sweep axis {axis!r}")


def frame_bits(seed: int, n_bits: int) -> np.ndarray:
    """The bit pattern of one frame; shared by the harness and the CLI."""
    return np.random.default_rng(seed).integers(0, 2, n_bits, dtype=np.uint8)


def frame_seed(seed: int, frame_index: int) -> int:
    return int(seed) ^ int(frame_index)


def _channel_for(cfg: ChannelConfig, fseed: int) -> ChannelConfig:
    derived = np.random.SeedSequence([int(cfg.seed), int(fseed)]).generate_state(1)[0]
    return replace(cfg, seed=int(derived))


@dataclass
class PointRecord:
    grid_value: float | None
    ber: float
    bits: int
    errors: int
    evm_pct: float
    ser: float
    min_phase_rate: float
    clamped_samples: int
    excluded_symbols: int = 0
    symbols: int = 0
    equalizer_failures: int = 0
    constellation: tuple | None = field(default=None, repr=False)

    def row(self) -> list:
        return [
            "" if self.grid_value is None else repr(float(self.grid_value)),
            repr(float(self.ber)),
            str(int(self.bits)),
            str(int(self.errors)),
            repr(float(self.evm_pct)),
            repr(float(self.ser)),
            repr(float(self.min_phase_rate)),
            str(int(self.clamped_samples)),
        ]

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("constellation")
        return d


def _swing(wf, on: bool):
    if not on:
        return wf
    p2p = float(np.max(wf.samples) - np.min(wf.samples))
    return wf.with_samples(wf.samples / p2p) if p2p > 0 else wf


def _train_and_apply(soft: SymbolFrame, ref: SymbolFrame, start: int, stop: int, cfg):
    """Train on ``[start, stop)`` and equalize the whole frame.

    A diverged training run leaves the frame unequalized; the caller counts it.
    """
    try:
        state = train_lms(
            soft.i_symbols[start:stop],
            soft.q_symbols[start:stop],
            ref.i_symbols[start:stop],
            ref.q_symbols[start:stop],
            cfg,
        )
    except DivergenceError:
        return soft, None
    r_i, r_q = equalize_aligned(soft.i_symbols, soft.q_symbols, state)
    return SymbolFrame(r_i, r_q, soft.alphabet), state


def _run_frame(config: ExperimentConfig, index: int):
    """Simulate one frame.

    Returns equalized soft symbols, the reference, ``min_phase_ok``, the clamp
    count and whether equalizer training failed.
    """
    fseed = frame_seed(config.seed, index)
    n = config.n_symbols
    bits = frame_bits(fseed, n * config.bits_per_symbol)
    link = _channel_for(config.channel, fseed)
    modem = config.modem
    eq_cfg = config.equalizer
    g, stop = config.guard, config.training_stop

    if config.format == "kk":
        ref = kkmod.map_bits(bits, modem.levels_per_rail)
        tx = kkmod.kk_modulate(ref, modem)
        rx = channel.transmit(_swing(tx.waveform, config.unit_swing), link)
        dem = kkmod.kk_demodulate(rx, tx.bias, modem, tx.tx_rms, n)
        soft, state = _train_and_apply(dem.symbols, ref, g, stop, eq_cfg)
        return soft, ref, tx.min_phase_ok, dem.clamped, state is None

    if config.format == "pam4":
        sym = baselines.pam4_symbols(bits)
        ref = SymbolFrame(sym, np.zeros_like(sym), baselines.PAM4_ALPHABET)
        rx = channel.transmit(_swing(baselines.pam4_modulate(bits, modem), config.unit_swing), link)
        soft = baselines._eye_agc(baselines.pam4_receive(rx, modem, n))
        frame = SymbolFrame(soft, np.zeros_like(soft), baselines.PAM4_ALPHABET)
        out, state = _train_and_apply(frame, ref, g, stop, replace(eq_cfg, cross_taps=0))
        return out, ref, True, 0, state is None

    ref = kkmod.map_bits(bits, 4)
    rx = channel.transmit(_swing(baselines.cap16_modulate(bits, modem), config.unit_swing), link)
    soft = baselines.cap16_receive(rx, modem, n)
    out, state = _train_and_apply(soft, ref, g, stop, eq_cfg)
    return out, ref, True, 0, state is None


def _bits_of(frame: SymbolFrame, fmt: str) -> np.ndarray:
    if fmt == "pam4":
        return frame.alphabet.decode(frame.i_symbols)
    return kkmod.demap_bits(frame)


def bit_error_counts(sent, received) -> tuple[int, int]:
    """``(errors, bits)`` between two equal-length bit arrays."""
    sent = np.asarray(sent)
    received = np.asarray(received)
    if sent.shape != received.shape:
        raise InvalidParameterError("bit arrays differ in length")
    return int(np.count_nonzero(sent != received)), int(sent.size)


def run_point(config: ExperimentConfig, grid_value=None, keep_constellation: bool = False):
    """Simulate every frame of ``config`` at one sweep value and pool the counts.

    Metrics cover the payload only: symbols after the training block and
    before the trailing guard.
    """
    cfg = apply_axis(config, config.sweep_axis, grid_value)
    lo, hi = cfg.training_stop, cfg.n_symbols - cfg.guard
    errors = bits = sym_err = sym_total = clamped = 0
    err_energy = ref_energy = 0.0
    min_phase = failures = 0
    constellation = None
    for k in range(cfg.frames):
        soft, ref, ok, clamp, failed = _run_frame(cfg, k)
        soft, ref = soft.subframe(lo, hi), ref.subframe(lo, hi)
        hard = soft.sliced()
        rx_bits, tx_bits = _bits_of(hard, cfg.format), _bits_of(ref, cfg.format)
        e, b = bit_error_counts(tx_bits, rx_bits)
        errors += e
        bits += b
        wrong = (hard.i_symbols != ref.i_symbols) | (hard.q_symbols != ref.q_symbols)
        sym_err += int(np.count_nonzero(wrong))
        sym_total += len(ref)
        err_energy += float(np.sum(np.abs(soft.complex - ref.complex) ** 2))
        ref_energy += float(np.sum(np.abs(ref.complex) ** 2))
        min_phase += int(ok)
        clamped += clamp
        failures += int(failed)
        if keep_constellation and constellation is None:
            constellation = (soft.i_symbols.copy(), soft.q_symbols.copy())
    return PointRecord(
        grid_value=None if grid_value is None else float(grid_value),
        ber=errors / bits,
        bits=bits,
        errors=errors,
        evm_pct=100.0 * math.sqrt(err_energy / ref_energy),
        ser=sym_err / sym_total,
        min_phase_rate=min_phase / cfg.frames,
        clamped_samples=clamped,
        excluded_symbols=cfg.frames * (cfg.n_symbols - (hi - lo)),
        symbols=sym_total,
        equalizer_failures=failures,
        constellation=constellation,
    )


@dataclass
class Sensitivity:
    value: float | None
    bracketed: bool
    flagged: bool = False
    value_db: float | None = None


def sensitivity(grid, ber, bits=None, threshold: float = HD_FEC, axis: str | None = None):
    """Sweep value where BER crosses ``threshold``, by log10-linear interpolation.

    Zero-error points are floored at half an error (``0.5 / bits``). With
    several crossings the result is flagged and the worst one is returned:
    the largest for curves that improve along the axis, the smallest for
    curves that degrade. ``power_scale`` axes are interpolated in dB.
    """
    x = np.asarray(grid, dtype=float)
    b = np.asarray(ber, dtype=float)
    if bits is not None:
        b = np.maximum(b, 0.5 / np.asarray(bits, dtype=float))
    b = np.maximum(b, 1e-300)
    in_db = axis == "power_scale"
    if in_db:
        if np.any(x <= 0):
            raise InvalidParameterError("power_scale grid must be positive to interpolate in dB")
        x = 10 * np.log10(x)
    order = np.argsort(x)
    x, lb = x[order], np.log10(b[order])
    t = math.log10(threshold)
    crossings = []
    for k in range(x.size - 1):
        a0, a1 = lb[k] - t, lb[k + 1] - t
        if a0 == 0:
            crossings.append(x[k])
        elif a0 * a1 < 0:
            crossings.append(x[k] + (x[k + 1] - x[k]) * a0 / (a0 - a1))
    if x.size and lb[-1] == t:
        crossings.append(x[-1])
    if not crossings:
        return Sensitivity(None, False)
    improving = lb[-1] <= lb[0]
    value = max(crossings) if improving else min(crossings)
    flagged = len(crossings) > 1
    if in_db:
        return Sensitivity(float(10 ** (value / 10)), True, flagged, float(value))
    return Sensitivity(float(value), True, flagged)


@dataclass
class BerReport:
    axis: str | None
    records: list
    sensitivity: Sensitivity
    config: dict
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "axis": self.axis,
            "hd_fec_threshold": HD_FEC,
            "sensitivity": asdict(self.sensitivity),
            "records": [r.to_dict() for r in self.records],
            "config": self.config,
            "metadata": self.metadata,
        }


def run_sweep(config: ExperimentConfig, keep_constellation: bool = False) -> BerReport:
    """One :func:`run_point` per grid value (or a single point with no sweep)."""
    grid = config.grid if config.sweep_axis else (None,)
    records = [run_point(config, v, keep_constellation) for v in grid]
    if config.sweep_axis:
        sens = sensitivity(
            [r.grid_value for r in records],
            [r.ber for r in records],
            [r.bits for r in records],
            axis=config.sweep_axis,
        )
    else:
        sens = Sensitivity(None, False)
    return BerReport(config.sweep_axis, records, sens, config.to_dict())


def write_csv(records, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in records:
            w.writerow(r.row())
    return path


def read_csv(path) -> list[dict]:
    out = []
    with Path(path).open(newline="") as fh:
        for row in csv.DictReader(fh):
            out.append(
                {
                    "grid_value": float(row["grid_value"]) if row["grid_value"] else None,
                    "ber": float(row["ber"]),
                    "bits": int(row["bits"]),
                    "errors": int(row["errors"]),
                    "evm_pct": float(row["evm_pct"]),
                    "ser": float(row["ser"]),
                    "min_phase_rate": float(row["min_phase_rate"]),
                    "clamped_samples": int(row["clamped_samples"]),
                }
            )
    return out


def write_constellation(i_symbols, q_symbols, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("i", "q"))
        for a, b in zip(i_symbols, q_symbols):
            w.writerow((repr(float(a)), repr(float(b))))
    return path


def emit(report: BerReport, outdir, stem: str = "sweep", plots: bool = True) -> list[Path]:
    """Write ``<stem>.csv``, ``<stem>.json`` and, with ``plots``, PNG figures.

    Constellations kept on the records are dumped as ``<stem>_const_<k>.csv``.
    """
    outdir = Path(outdir)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        written = [write_csv(report.records, outdir / f"{stem}.csv")]
        json_path = outdir / f"{stem}.json"
        json_path.write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n")
        written.append(json_path)
        for k, r in enumerate(report.records):
            if r.constellation is not None:
                written.append(
                    write_constellation(*r.constellation, outdir / f"{stem}_const_{k}.csv")
                )
    except OSError as exc:
        raise OSError(f"cannot write report to {outdir}: {exc}") from exc
    if plots:
        from . import plotting

        written += plotting.report_figures(report, outdir, stem)
    return written


# -- format comparison -------------------------------------------------------


def dac_budget(dac_rate: float = 2.5e9, samples_per_symbol: int = 2) -> list[dict]:
    """Highest bit rate each format reaches from one converter rate.

    PAM-4 and KK-16 both run at ``dac_rate / sps`` baud; KK carries two
    4-level rails per symbol, so it moves twice the bits. CAP-16 matches KK
    nominally but at ``sps = 2`` its quadrature filter is badly under-sampled.
    """
    baud = dac_rate / samples_per_symbol
    rows = []
    for fmt, bps, note in (
        ("pam4", 2, ""),
        ("kk", 4, ""),
        ("cap16", 4, "quadrature rail distorted at this oversampling ratio"
         if samples_per_symbol < 4 else ""),
    ):
        rows.append(
            {
                "format": fmt,
                "dac_rate": dac_rate,
                "samples_per_symbol": samples_per_symbol,
                "symbol_rate": baud,
                "bits_per_symbol": bps,
                "max_bit_rate": baud * bps,
                "note": note,
            }
        )
    return rows


@dataclass(frozen=True)
class ComparisonConfig:
    """Matched-bit-rate comparison of KK-16, PAM-4 and CAP-16.

    All formats run at the same simulation ``sample_rate``, are scaled to the
    same drive peak-to-peak and see the same absolute noise floor, set by
    ``osnr_db`` referred to a full-scale sine of that peak-to-peak.
    ``power_grid`` is the received-power sweep (linear scale factors).
    """

    bit_rate: float = 2.5e9
    sample_rate: float = 10e9
    f3db: float = 1e9
    osnr_db: float = 24.0
    amplitude_A: float = 20.0
    power_grid: tuple = (0.25, 0.3, 0.35, 0.4, 0.5, 0.6, 0.7, 0.85, 1.0)
    frames: int = 4
    seed: int = 1
    equalizer: EqualizerConfig = field(default_factory=EqualizerConfig)
    dac_rate: float = 2.5e9
    dac_samples_per_symbol: int = 2

    @classmethod
    def from_dict(cls, d: dict) -> "ComparisonConfig":
        d = dict(d)
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ExperimentError(f"unknown comparison keys: {sorted(extra)}")
        if "equalizer" in d:
            d["equalizer"] = _build(EqualizerConfig, d["equalizer"])
        if "power_grid" in d:
            d["power_grid"] = tuple(d["power_grid"])
        return cls(**d)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["power_grid"] = list(self.power_grid)
        return d


def _experiment_for(fmt: str, cmp: ComparisonConfig) -> ExperimentConfig:
    bps = 2 if fmt == "pam4" else 4
    baud = cmp.bit_rate / bps
    sps = cmp.sample_rate / baud
    if abs(sps - round(sps)) > 1e-9:
        raise ExperimentError(f"{fmt}: sample rate is not an integer multiple of {baud:g} Bd")
    sps = int(round(sps))
    if fmt == "kk":
        modem = KkConfig(amplitude_A=cmp.amplitude_A, symbol_rate=baud, samples_per_symbol=sps)
    elif fmt == "pam4":
        modem = PamConfig(symbol_rate=baud, samples_per_symbol=sps)
    else:
        modem = CapConfig(symbol_rate=baud, samples_per_symbol=sps)
    link = ChannelConfig(
        f3db=cmp.f3db,
        osnr_db=cmp.osnr_db,
        seed=cmp.seed,
        noise_reference_power=FULL_SCALE_POWER,
    )
    return ExperimentConfig(
        format=fmt,
        modem=modem,
        channel=link,
        equalizer=cmp.equalizer,
        frames=cmp.frames,
        seed=cmp.seed,
        sweep_axis="power_scale",
        grid=cmp.power_grid,
        unit_swing=True,
    )


def compare_formats(cmp: ComparisonConfig | None = None) -> dict:
    """Received-power sweeps for the three formats plus the DAC budget table.

    Each format's drive waveform is rescaled to unit peak-to-peak before the
    link (the receivers' AGC undoes the scale), so the comparison is at equal
    modulator swing, as on a bench with a fixed drive amplitude.
    """
    cmp = cmp or ComparisonConfig()
    reports = {}
    table = []
    for fmt in FORMATS:
        exp = _experiment_for(fmt, cmp)
        report = run_sweep(exp)
        reports[fmt] = report
        s = report.sensitivity
        table.append(
            {
                "format": fmt,
                "symbol_rate": exp.modem.symbol_rate,
                "samples_per_symbol": exp.modem.samples_per_symbol,
                "sensitivity_scale": s.value,
                "sensitivity_db": s.value_db,
                "bracketed": s.bracketed,
                "flagged": s.flagged,
                "status": "ok" if s.bracketed else "threshold not bracketed",
                "best_ber": min(r.ber for r in report.records),
            }
        )
    kk_db = next(r["sensitivity_db"] for r in table if r["format"] == "kk")
    for row in table:
        if kk_db is not None and row["sensitivity_db"] is not None:
            row["kk_advantage_db"] = row["sensitivity_db"] - kk_db
        else:
            row["kk_advantage_db"] = None
    return {
        "config": cmp.to_dict(),
        "sensitivity": table,
        "dac_budget": dac_budget(cmp.dac_rate, cmp.dac_samples_per_symbol),
        "reports": reports,
        "hardware_reference": HARDWARE_REFERENCE,
    }


def emit_comparison(result: dict, outdir, plots: bool = True) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for fmt, report in result["reports"].items():
        written += emit(report, outdir, stem=f"compare_{fmt}", plots=False)
    path = outdir / "comparison.csv"
    cols = (
        "format",
        "symbol_rate",
        "samples_per_symbol",
        "sensitivity_scale",
        "sensitivity_db",
        "kk_advantage_db",
        "bracketed",
        "flagged",
        "status",
        "best_ber",
    )
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for row in result["sensitivity"]:
            w.writerow(["" if row[c] is None else row[c] for c in cols])
    written.append(path)
    path = outdir / "dac_budget.csv"
    cols = tuple(result["dac_budget"][0])
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for row in result["dac_budget"]:
            w.writerow([row[c] for c in cols])
    written.append(path)
    summary = {k: v for k, v in result.items() if k != "reports"}
    path = outdir / "comparison.json"
    path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    written.append(path)
    if plots:
        from . import plotting

        written.append(plotting.comparison_figure(result, outdir / "comparison.png"))
    return written
