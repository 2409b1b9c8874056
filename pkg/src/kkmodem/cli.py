"""
Command-line front end.

Every subcommand takes a JSON config file and an output directory::

    kkmodem modulate   tx.json   out/     # drive waveform + sidecar
    kkmodem demodulate rx.json   out/     # waveform file -> soft symbols, bits, BER
    kkmodem simulate   exp.json  out/     # one link point, with constellation
    kkmodem sweep      exp.json  out/     # BER/EVM over a parameter grid
    kkmodem compare    cmp.json  out/     # KK-16 vs PAM-4 vs CAP-16

On failure a JSON error record goes to stderr (and ``OUTDIR/error.json``
when the directory is writable) and the exit status is nonzero.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from dataclasses import asdict, fields, replace
from pathlib import Path

import numpy as np

from . import baselines, bench, channel, fileio, kkmod
from .bench import ComparisonConfig, ExperimentConfig
from .equalizer import EqualizerConfig
from .errors import DemodulationError, DivergenceError, KkError

EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_RUNTIME = 4


def _load_json(path) -> dict:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise bench.ExperimentError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise bench.ExperimentError(f"{path}: top level must be a JSON object")
    return data


def _experiment(args) -> ExperimentConfig:
    cfg = ExperimentConfig.from_dict(_load_json(args.config))
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    return cfg


def _write_json(path: Path, record) -> Path:
    path.write_text(json.dumps(record, indent=2, sort_keys=True) + "\n")
    return path


# -- subcommands --------------------------------------------------------------


def cmd_modulate(args, outdir: Path) -> list[Path]:
    """Frame 0 of the config's bit pattern, unbiased drive waveform plus sidecar."""
    cfg = _experiment(args)
    fseed = bench.frame_seed(cfg.seed, 0)
    bits = bench.frame_bits(fseed, cfg.n_symbols * cfg.bits_per_symbol)
    sidecar = {"format": cfg.format, **asdict(cfg.modem)}
    sidecar.update(frame_symbols=cfg.n_symbols, seed=cfg.seed, bias=None, tx_rms=None)
    if cfg.format == "kk":
        tx = kkmod.kk_modulate(kkmod.map_bits(bits, cfg.modem.levels_per_rail), cfg.modem)
        wf = tx.waveform
        sidecar.update(
            bias=tx.bias,
            tx_rms=tx.tx_rms,
            peak_to_peak=tx.peak_to_peak,
            min_phase_ok=tx.min_phase_ok,
            winding=tx.winding,
        )
    elif cfg.format == "pam4":
        wf = baselines.pam4_modulate(bits, cfg.modem)
    else:
        wf = baselines.cap16_modulate(bits, cfg.modem)
    return [
        fileio.write_waveform(outdir / "waveform.kkw", wf),
        fileio.write_sidecar(outdir / "waveform.json", sidecar),
    ]


def _modem_from_sidecar(record: dict):
    kind = {"kk": kkmod.KkConfig, "pam4": baselines.PamConfig, "cap16": baselines.CapConfig}[
        record["format"]
    ]
    names = {f.name for f in fields(kind)}
    return kind(**{k: v for k, v in record.items() if k in names})


def cmd_demodulate(args, outdir: Path) -> list[Path]:
    """Demodulate a waveform file written by ``modulate`` (optionally after a link).

    Config keys: ``waveform`` (path, relative to the config file), optional
    ``sidecar`` (defaults to the waveform path with ``.json``), optional
    ``equalizer`` settings and ``channel`` settings to apply first.
    """
    cfg_path = Path(args.config)
    request = _load_json(cfg_path)
    unknown = set(request) - {"waveform", "sidecar", "equalizer", "channel"}
    if unknown:
        raise bench.ExperimentError(f"unknown demodulate keys: {sorted(unknown)}")
    if "waveform" not in request:
        raise bench.ExperimentError("demodulate config needs a 'waveform' path")
    wf_path = cfg_path.parent / request["waveform"]
    side_path = cfg_path.parent / request.get("sidecar", Path(request["waveform"]).with_suffix(".json"))
    record = fileio.read_sidecar(side_path)
    wf = fileio.read_waveform(wf_path)
    if "channel" in request:
        link = bench._build(channel.ChannelConfig, bench._infinite(request["channel"]))
        if args.seed is not None:
            link = replace(link, seed=args.seed)
        wf = channel.transmit(wf, link)
    modem = _modem_from_sidecar(record)
    eq = bench._build(EqualizerConfig, request.get("equalizer", {}))
    exp = ExperimentConfig(
        format=record["format"],
        modem=modem,
        equalizer=eq,
        frame_symbols=record["frame_symbols"],
        frames=1,
        seed=record["seed"],
    )
    n = exp.n_symbols
    ref_bits = bench.frame_bits(bench.frame_seed(exp.seed, 0), n * exp.bits_per_symbol)

    fmt = record["format"]
    if fmt == "kk":
        ref = kkmod.map_bits(ref_bits, modem.levels_per_rail)
        soft = kkmod.kk_demodulate(wf, record["bias"], modem, record["tx_rms"], n).symbols
    elif fmt == "pam4":
        sym = baselines.pam4_symbols(ref_bits)
        ref = kkmod.SymbolFrame(sym, np.zeros_like(sym), baselines.PAM4_ALPHABET)
        s = baselines._eye_agc(baselines.pam4_receive(wf, modem, n))
        soft = kkmod.SymbolFrame(s, np.zeros_like(s), baselines.PAM4_ALPHABET)
        eq = replace(eq, cross_taps=0)
    else:
        ref = kkmod.map_bits(ref_bits, 4)
        soft = baselines.cap16_receive(wf, modem, n)
    out, state = bench._train_and_apply(soft, ref, exp.guard, exp.training_stop, eq)

    lo, hi = exp.training_stop, n - exp.guard
    payload, ref_payload = out.subframe(lo, hi), ref.subframe(lo, hi)
    rx_bits = bench._bits_of(out.sliced(), fmt)
    tx_bits = bench._bits_of(ref, fmt)
    per = len(tx_bits) // n
    errors = int(np.count_nonzero(rx_bits[lo * per : hi * per] != tx_bits[lo * per : hi * per]))
    result = {
        "format": fmt,
        "symbols": hi - lo,
        "bits": (hi - lo) * per,
        "errors": errors,
        "ber": errors / ((hi - lo) * per),
        "evm_pct": kkmod.evm(payload, ref_payload),
        "equalizer_trained": state is not None,
        "payload_range": [lo, hi],
    }
    written = [
        bench.write_constellation(out.i_symbols, out.q_symbols, outdir / "symbols.csv"),
        _write_json(outdir / "result.json", result),
    ]
    bits_path = outdir / "bits.txt"
    bits_path.write_text("".join(map(str, rx_bits.tolist())) + "\n")
    written.append(bits_path)
    if state is not None:
        path = outdir / "equalizer.json"
        path.write_text(state.to_json() + "\n")
        written.append(path)
    return written


def cmd_simulate(args, outdir: Path) -> list[Path]:
    """One point: the config with no sweep axis (any grid is ignored)."""
    cfg = replace(_experiment(args), sweep_axis=None, grid=())
    report = bench.run_sweep(cfg, keep_constellation=True)
    return bench.emit(report, outdir, stem="simulate", plots=not args.no_plots)


def cmd_sweep(args, outdir: Path) -> list[Path]:
    cfg = _experiment(args)
    if cfg.sweep_axis is None:
        raise bench.ExperimentError("sweep config needs 'sweep_axis' and 'grid'")
    report = bench.run_sweep(cfg, keep_constellation=args.constellations)
    return bench.emit(report, outdir, stem="sweep", plots=not args.no_plots)


def cmd_compare(args, outdir: Path) -> list[Path]:
    cmp = ComparisonConfig.from_dict(_load_json(args.config))
    if args.seed is not None:
        cmp = replace(cmp, seed=args.seed)
    result = bench.compare_formats(cmp)
    return bench.emit_comparison(result, outdir, plots=not args.no_plots)


COMMANDS = {
    "modulate": cmd_modulate,
    "demodulate": cmd_demodulate,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "compare": cmd_compare,
}


HELP = {
    "modulate": "write one frame's drive waveform and its JSON sidecar",
    "demodulate": "demodulate a waveform file, optionally through a link",
    "simulate": "run the config as a single point, ignoring any sweep axis",
    "sweep": "run the config over its sweep grid",
    "compare": "sensitivity comparison of KK-16, PAM-4 and CAP-16 plus the DAC budget",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kkmodem", description="KK intensity-modulation modem simulator."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=HELP[name])
        p.add_argument("config", help="JSON config file")
        p.add_argument("outdir", help="output directory (created if missing)")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--no-plots", action="store_true", help="skip PNG figures")
        if name == "sweep":
            p.add_argument(
                "--constellations", action="store_true", help="dump soft symbols per grid point"
            )
    return parser


def _fail(outdir, command, exc, code) -> int:
    record = {
        "status": "error",
        "command": command,
        "error": type(exc).__name__,
        "message": str(exc),
        "exit_code": code,
    }
    text = json.dumps(record, sort_keys=True)
    print(text, file=sys.stderr)
    try:
        Path(outdir).mkdir(parents=True, exist_ok=True)
        (Path(outdir) / "error.json").write_text(text + "\n")
    except OSError:
        pass
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    outdir = Path(args.outdir)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        written = COMMANDS[args.command](args, outdir)
    except (DivergenceError, DemodulationError) as exc:
        return _fail(outdir, args.command, exc, EXIT_RUNTIME)
    except (KkError, ValueError, KeyError, TypeError) as exc:
        return _fail(outdir, args.command, exc, EXIT_CONFIG)
    except OSError as exc:
        return _fail(outdir, args.command, exc, EXIT_IO)
    except Exception as exc:  # pragma: no cover - last-resort record
        traceback.print_exc()
        return _fail(outdir, args.command, exc, EXIT_RUNTIME)
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
