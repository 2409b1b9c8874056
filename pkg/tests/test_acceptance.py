"""
Acceptance suite: one test per numbered criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the per-criterion summary
appears at the end of the session. ``python3 tests/test_acceptance.py``
runs the same checks without pytest.

Link scenarios run at a fixed 12 GSa/s converter rate (12, 8 and 6 samples
per symbol at 1, 1.5 and 2 Gbaud) so the per-sample noise level is the same
for every symbol rate.
"""

import json
import math
import sys
import time
from dataclasses import replace

import numpy as np

from kkmodem import baselines, bench, channel, cli, kkmod, sigcore
from kkmodem.baselines import CapConfig, PamConfig
from kkmodem.bench import ComparisonConfig, ExperimentConfig
from kkmodem.channel import ChannelConfig
from kkmodem.equalizer import EqualizerConfig, EqualizerState, equalize, cross_delay
from kkmodem.kkmod import KkConfig
from kkmodem.sigcore import RealWaveform

SAMPLE_RATE = 12e9
OSNR = 12.0
LINK_3DB = 1e9
GUARD = 30


def link(amplitude=20.0, rate=1e9, osnr=OSNR, main=10, cross=6, frames=10, seed=1, axis=None, grid=()):
    modem = KkConfig(amplitude_A=amplitude, symbol_rate=rate, samples_per_symbol=int(round(SAMPLE_RATE / rate)))
    return ExperimentConfig(
        format="kk",
        modem=modem,
        channel=ChannelConfig(f3db=LINK_3DB, osnr_db=osnr),
        equalizer=EqualizerConfig(main_taps=main, cross_taps=cross),
        frames=frames,
        seed=seed,
        sweep_axis=axis,
        grid=grid,
    )


def frame(seed, n):
    return kkmod.map_bits(np.random.default_rng(seed).integers(0, 2, 4 * n), 4)


# -- criteria -----------------------------------------------------------------


def criterion_1():
    cfg = KkConfig(amplitude_A=20, symbol_rate=1e9, samples_per_symbol=8)
    n = 10_000
    start = time.perf_counter()
    errors = bits = 0
    worst_evm = 0.0
    for seed in range(20):
        ref = frame(seed, n)
        tx = kkmod.kk_modulate(ref, cfg)
        soft = kkmod.kk_demodulate(tx.waveform, tx.bias, cfg, tx.tx_rms, n).symbols
        soft, ref = soft.subframe(GUARD, n - GUARD), ref.subframe(GUARD, n - GUARD)
        e, b = bench.bit_error_counts(kkmod.demap_bits(ref), kkmod.demap_bits(soft))
        errors += e
        bits += b
        worst_evm = max(worst_evm, kkmod.evm(soft, ref))
    elapsed = time.perf_counter() - start
    ok = errors == 0 and worst_evm < 1.0 and elapsed < 10.0
    return ok, f"BER {errors}/{bits}, worst EVM {worst_evm:.3f} %, {elapsed:.1f} s"


def criterion_2():
    n = 1024
    wt = 2 * np.pi * 7 * np.arange(n) / n
    mag = np.abs(1 + 0.5 * np.exp(1j * wt))
    phase = kkmod.kk_phase_retrieve(RealWaveform(mag, 1.0)).phase.samples
    closed = np.arctan2(0.5 * np.sin(wt), 1 + 0.5 * np.cos(wt))
    rms_closed = float(np.sqrt(np.mean((phase - closed) ** 2)))

    n = 256
    wt = 2 * np.pi * np.arange(n) / n
    x = np.log(np.abs(1 + 0.5 * np.exp(1j * wt)))
    fast = kkmod.kk_phase_retrieve(RealWaveform(np.exp(x), 1.0)).phase.samples
    slow = np.empty(n)
    m = np.arange(-20 * n, 20 * n)
    for k in range(n):
        mm = m[m != k]
        slow[k] = np.sum(x[mm % n] / (np.pi * (k - mm)))
    rel_pv = float(np.sqrt(np.mean((fast - slow) ** 2) / np.mean(fast**2)))
    ok = rms_closed < 1e-6 and rel_pv < 0.02
    return ok, f"closed-form RMS {rms_closed:.2e}, p.v. sum RMS {100 * rel_pv:.2f} %"


def criterion_3():
    n = 10_000
    ref = frame(3, n)
    windings = {}
    for a in (0, 3, 5, 6, 7, 8, 10, 20):
        tx = kkmod.kk_modulate(ref, KkConfig(amplitude_A=a))
        windings[a] = tx.winding
    ser = {}
    for a in (0, 20):
        cfg = KkConfig(amplitude_A=a)
        tx = kkmod.kk_modulate(ref, cfg)
        soft = kkmod.kk_demodulate(tx.waveform, tx.bias, cfg, tx.tx_rms, n).symbols.sliced()
        g = slice(GUARD, n - GUARD)
        ser[a] = float(np.mean(soft.complex[g] != ref.complex[g]))
    nonzero = all(windings[a] != 0 for a in (0, 3))  # None (origin crossing) counts as failing
    zero = all(windings[a] == 0 for a in (10, 20))
    flip = next(a for a in (5, 6, 7, 8) if windings[a] == 0)
    ok = nonzero and zero and ser[0] > 0.1 and ser[20] == 0
    return ok, (
        f"winding {windings}, SER(A=0) {100 * ser[0]:.1f} %, SER(A=20) {ser[20]:.0f}; "
        f"min-phase from A={flip} (recorded)"
    )


def criterion_4():
    report = bench.run_sweep(link(axis="amplitude_A", grid=(3, 5, 8, 10, 20, 30)))
    evm = [r.evm_pct for r in report.records]
    non_increasing = all(b <= a for a, b in zip(evm, evm[1:]))
    gap = abs(evm[4] - evm[5])
    ok = non_increasing and gap < 0.5
    pairs = ", ".join(f"{int(r.grid_value)}:{r.evm_pct:.2f}" for r in report.records)
    return ok, f"EVM % by A {{{pairs}}}, |EVM(20)-EVM(30)| = {gap:.3f} pp"


def criterion_5():
    ref = frame(5, 10_000)
    grid = (0, 3, 5, 8, 10, 20, 30, 50)
    tx = {a: kkmod.kk_modulate(ref, KkConfig(amplitude_A=a)) for a in grid}
    biases = [tx[a].bias for a in grid]
    increasing = all(b > a for a, b in zip(biases, biases[1:]))
    near = abs(tx[50].bias / 50 - 1)
    p2p = [tx[a].peak_to_peak for a in (10, 20, 30)]
    spread = (max(p2p) - min(p2p)) / min(p2p)
    absolute = all(abs(p / 13.5 - 1) <= 0.2 for p in p2p)
    ok = increasing and near < 0.02 and spread < 0.05 and absolute
    return ok, (
        f"bias(50) = {tx[50].bias:.3f} ({100 * near:.2f} % off), "
        f"p-p {[round(p, 2) for p in p2p]} spread {100 * spread:.2f} %"
    )


def criterion_6():
    grid = (6, 8, 10, 12, 14)
    reps = {a: bench.run_sweep(replace(link(amplitude=a), sweep_axis="osnr_db", grid=grid)) for a in (0, 20, 25)}
    ber = {a: [r.ber for r in rep.records] for a, rep in reps.items()}
    monotone = all(b <= a for a, b in zip(ber[20], ber[20][1:]))
    floor = all(b > 0.2 for b in ber[0])
    overlap = all(
        max(x, y) <= 2 * min(x, y) if min(x, y) > 0 else max(x, y) == 0 for x, y in zip(ber[20], ber[25])
    )
    ok = monotone and floor and overlap
    fmt = lambda v: "[" + ", ".join(f"{b:.2e}" for b in v) + "]"  # noqa: E731
    return ok, f"OSNR {list(grid)} dB: A=20 {fmt(ber[20])}, A=25 {fmt(ber[25])}, A=0 {fmt(ber[0])}"


def criterion_7():
    report = bench.run_sweep(link(axis="symbol_rate", grid=(1e9, 1.5e9, 2e9)))
    ber = [r.ber for r in report.records]
    ok = all(b > a for a, b in zip(ber, ber[1:]))
    return ok, "BER at 1/1.5/2 Gbaud " + ", ".join(f"{b:.2e}" for b in ber)


def _naive_cross_coupled(x_i, x_q, st):
    n = len(x_i)
    r_i, r_q = np.zeros(n), np.zeros(n)
    for k in range(n):
        for m in range(st.w_i.size):
            if k >= m:
                r_i[k] += x_i[k - m] * st.w_i[m]
                r_q[k] += x_q[k - m] * st.w_q[m]
        for l in range(st.w_iq.size):
            j = k - st.cross_delay - l
            if j >= 0:
                r_i[k] += x_q[j] * st.w_iq[l]
                r_q[k] += x_i[j] * st.w_qi[l]
    return r_i, r_q


def criterion_8():
    rng = np.random.default_rng(8)
    x_i, x_q = rng.standard_normal((2, 200))
    st = EqualizerState(*rng.standard_normal((2, 10)), *rng.standard_normal((2, 6)), cursor=5, cross_delay=cross_delay(10, 6))
    got = equalize(x_i, x_q, st)
    ref = _naive_cross_coupled(x_i, x_q, st)
    oracle = max(np.max(np.abs(got[0] - ref[0])), np.max(np.abs(got[1] - ref[1])))

    runs = {l: bench.run_point(link(rate=2e9, cross=l)) for l in (0, 1, 6)}
    ok = oracle < 1e-12 and runs[6].ber < runs[0].ber and runs[1].evm_pct < runs[0].evm_pct
    return ok, (
        f"oracle max diff {oracle:.1e}; 2 Gbaud BER L=0 {runs[0].ber:.3e} vs L=6 {runs[6].ber:.3e}; "
        f"EVM L=0 {runs[0].evm_pct:.2f} % vs L=1 {runs[1].evm_pct:.2f} %"
    )


def _baseline_ber(fmt, modem, n=10_000, seed=9):
    bps = modem.bits_per_symbol
    b = np.random.default_rng(seed).integers(0, 2, n * bps)
    g = slice(GUARD * bps * 2, -GUARD * bps * 2)
    if fmt == "pam4":
        got = baselines.pam4_demodulate(baselines.pam4_modulate(b, modem), modem, n_symbols=n)
    else:
        got = baselines.cap16_demodulate(baselines.cap16_modulate(b, modem), modem, n_symbols=n)
    return bench.bit_error_counts(b[g], got[g])


def _cap_q_evm(sps, n=6000, seed=3):
    cfg = CapConfig(symbol_rate=1.25e9, samples_per_symbol=sps)
    b = np.random.default_rng(seed).integers(0, 2, 4 * n)
    ref = kkmod.map_bits(b, 4)
    rx = channel.gaussian_lowpass(baselines.cap16_modulate(b, cfg), LINK_3DB)
    eq, _ = baselines.equalize_cap(baselines.cap16_receive(rx, cfg, n), ref.subframe(0, 2000))
    g = slice(2000, n - 2 * GUARD)
    return 100 * float(np.sqrt(np.sum((eq.q_symbols[g] - ref.q_symbols[g]) ** 2) / np.sum(ref.q_symbols[g] ** 2)))


def criterion_9():
    pam_err, pam_bits = _baseline_ber("pam4", PamConfig())
    cap_err, cap_bits = _baseline_ber("cap16", CapConfig())
    worst = 0.0
    for sps in (4, 8, 16):
        f_i, f_q = baselines.cap_filters(CapConfig(samples_per_symbol=sps))
        peak = np.max(np.abs(np.correlate(f_i, f_i, "full")))
        cross = np.correlate(f_i, f_q, "full")[(f_i.size - 1) % sps :: sps]
        worst = max(worst, float(np.max(np.abs(cross)) / peak))
    q2, q4 = _cap_q_evm(2), _cap_q_evm(4)
    ok = pam_err == 0 and cap_err == 0 and worst < 1e-3 and q2 > 1.5 * q4
    return ok, (
        f"PAM-4 {pam_err}/{pam_bits}, CAP-16 {cap_err}/{cap_bits} errors; "
        f"filter cross-corr {worst:.1e}; CAP Q-rail EVM sps=2 {q2:.1f} % vs sps=4 {q4:.1f} %"
    )


def criterion_10():
    rows = {r["format"]: r for r in bench.dac_budget(2.5e9, 2)}
    ok = rows["pam4"]["max_bit_rate"] == 2.5e9 and rows["kk"]["max_bit_rate"] == 5e9
    return ok, (
        f"2.5 GSa/s, sps=2: PAM-4 {rows['pam4']['max_bit_rate'] / 1e9:g} Gb/s, "
        f"KK-16 {rows['kk']['max_bit_rate'] / 1e9:g} Gb/s, CAP-16 note: {rows['cap16']['note']}"
    )


def criterion_11():
    # hardware sensitivities are out of reach; the comparison table is emitted for inspection
    result = bench.compare_formats(ComparisonConfig())
    table = result["sensitivity"]
    emitted = {r["format"] for r in table} == {"kk", "pam4", "cap16"}
    below = all(rep.records[-1].ber < bench.HD_FEC for rep in result["reports"].values())
    quoted = result["hardware_reference"]["sensitivity_gain_db"] == {"vs_pam4": 0.6, "vs_cap16": 1.5}
    ok = emitted and below and quoted
    cells = ", ".join(
        f"{r['format']} {r['sensitivity_db']:.2f} dB" if r["sensitivity_db"] is not None else f"{r['format']} n/a"
        for r in table
    )
    adv = ", ".join(
        f"vs {r['format']} {r['kk_advantage_db']:+.2f} dB" for r in table if r["format"] != "kk" and r["kk_advantage_db"] is not None
    )
    return ok, f"not reproducible; emitted sensitivities {cells}; KK advantage {adv}"


def criterion_12(tmpdir):
    from pathlib import Path

    tmp = Path(tmpdir)
    cfg = link(frames=3, axis="osnr_db", grid=(8, 11, 14)).to_dict()
    (tmp / "cfg.json").write_text(json.dumps(cfg))
    codes = [cli.main(["sweep", str(tmp / "cfg.json"), str(tmp / d), "--no-plots"]) for d in ("a", "b")]
    same = (tmp / "a" / "sweep.csv").read_bytes() == (tmp / "b" / "sweep.csv").read_bytes()
    ok = codes == [0, 0] and same
    return ok, f"exit codes {codes}, CSV byte-identical: {same}"


# -- pytest wrappers ----------------------------------------------------------


def _check(record, number, result):
    ok, detail = result
    record(number, ok, detail)
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def test_criterion_01_round_trip(record_criterion):
    _check(record_criterion, 1, criterion_1())


def test_criterion_02_kk_relation(record_criterion):
    _check(record_criterion, 2, criterion_2())


def test_criterion_03_min_phase_threshold(record_criterion):
    _check(record_criterion, 3, criterion_3())


def test_criterion_04_evm_saturation(record_criterion):
    _check(record_criterion, 4, criterion_4())


def test_criterion_05_signal_statistics(record_criterion):
    _check(record_criterion, 5, criterion_5())


def test_criterion_06_ber_osnr_shape(record_criterion):
    _check(record_criterion, 6, criterion_6())


def test_criterion_07_rate_degradation(record_criterion):
    _check(record_criterion, 7, criterion_7())


def test_criterion_08_equalizer_structure(record_criterion):
    _check(record_criterion, 8, criterion_8())


def test_criterion_09_baselines(record_criterion):
    _check(record_criterion, 9, criterion_9())


def test_criterion_10_dac_budget(record_criterion):
    _check(record_criterion, 10, criterion_10())


def test_criterion_11_comparison_emitted(record_criterion):
    _check(record_criterion, 11, criterion_11())


def test_criterion_12_determinism(record_criterion, tmp_path):
    _check(record_criterion, 12, criterion_12(tmp_path))


if __name__ == "__main__":
    import tempfile

    failed = 0
    for k in range(1, 13):
        fn = globals()[f"criterion_{k}"]
        if k == 12:
            with tempfile.TemporaryDirectory() as d:
                ok, detail = fn(d)
        else:
            ok, detail = fn()
        failed += not ok
        print(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}", flush=True)
    sys.exit(1 if failed else 0)
