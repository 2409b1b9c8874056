"""
Static figures for sweep and comparison reports, rendered off-screen to PNG.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .bench import HD_FEC  # noqa: E402

AXIS_LABELS = {
    "amplitude_A": "carrier amplitude A",
    "osnr_db": "OSNR [dB]",
    "symbol_rate": "symbol rate [Gbaud]",
    "main_taps": "main taps M",
    "cross_taps": "cross taps L",
    "power_scale": "received power [dB rel.]",
}


def _x(axis, values):
    v = np.asarray(values, dtype=float)
    if axis == "symbol_rate":
        return v / 1e9
    if axis == "power_scale":
        return 10 * np.log10(v)
    return v


def _ber_floor(records):
    # zero-error points are drawn at half an error so they stay on a log axis
    return [max(r.ber, 0.5 / r.bits) for r in records]


def ber_figure(report, path) -> Path:
    path = Path(path)
    fig, (ax_ber, ax_evm) = plt.subplots(1, 2, figsize=(9, 3.6))
    x = _x(report.axis, [r.grid_value for r in report.records])
    ax_ber.semilogy(x, _ber_floor(report.records), "o-")
    ax_ber.axhline(HD_FEC, color="0.5", ls="--", lw=1, label="HD-FEC")
    ax_ber.set_ylabel("BER")
    ax_ber.legend(loc="best", fontsize=8)
    ax_evm.plot(x, [r.evm_pct for r in report.records], "s-", color="C1")
    ax_evm.set_ylabel("EVM [%]")
    for ax in (ax_ber, ax_evm):
        ax.set_xlabel(AXIS_LABELS.get(report.axis, report.axis or ""))
        ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def constellation_figure(i_symbols, q_symbols, path, title: str = "") -> Path:
    path = Path(path)
    fig, ax = plt.subplots(figsize=(4, 4))
    ax.plot(i_symbols, q_symbols, ".", ms=1.5, alpha=0.4)
    ax.set_xlabel("I")
    ax.set_ylabel("Q")
    ax.set_aspect("equal")
    ax.grid(True, alpha=0.3)
    if title:
        ax.set_title(title, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def report_figures(report, outdir, stem: str) -> list[Path]:
    outdir = Path(outdir)
    written = []
    if report.axis is not None and len(report.records) > 1:
        written.append(ber_figure(report, outdir / f"{stem}_ber.png"))
    for k, r in enumerate(report.records):
        if r.constellation is not None:
            label = "" if r.grid_value is None else f"{report.axis} = {r.grid_value:g}"
            written.append(
                constellation_figure(*r.constellation, outdir / f"{stem}_const_{k}.png", label)
            )
    return written


def comparison_figure(result: dict, path) -> Path:
    path = Path(path)
    fig, ax = plt.subplots(figsize=(5, 3.6))
    names = {"kk": "KK-16", "pam4": "PAM-4", "cap16": "CAP-16"}
    for fmt, report in result["reports"].items():
        x = _x("power_scale", [r.grid_value for r in report.records])
        ax.semilogy(x, _ber_floor(report.records), "o-", label=names.get(fmt, fmt))
    ax.axhline(HD_FEC, color="0.5", ls="--", lw=1)
    ax.set_xlabel(AXIS_LABELS["power_scale"])
    ax.set_ylabel("BER")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    top = max(max(_ber_floor(r.records)) for r in result["reports"].values())
    ax.set_ylim(top=min(1.0, 10 ** math.ceil(math.log10(top))))
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
