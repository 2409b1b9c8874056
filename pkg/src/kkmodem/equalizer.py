"""
Two-channel cross-coupled feed-forward equalizer with LMS adaptation.

Symbol-spaced; for each output rail a main FIR on its own input plus a
shorter cross FIR on the other rail's input::

    r_I(n) = sum_m x_I(n-m) w_I(m) + sum_l x_Q(n-d-l) w_IQ(l)
    r_Q(n) = sum_m x_Q(n-m) w_Q(m) + sum_l x_I(n-d-l) w_QI(l)

The main taps are initialised with a spike at ``cursor = M // 2`` so the
output trails the input by ``cursor`` symbols. ``d`` (``cross_delay``)
lines the cross window up with that cursor.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DivergenceError, InvalidParameterError, LengthError


@dataclass(frozen=True)
class EqualizerConfig:
    main_taps: int = 10
    cross_taps: int = 6
    step_size: float = 1e-3
    training_symbols: int = 2000
    passes: int = 3

    def __post_init__(self):
        if self.main_taps < 1:
            raise InvalidParameterError("main_taps must be >= 1")
        if self.cross_taps < 0:
            raise InvalidParameterError("cross_taps must be >= 0")
        if not 0 < self.step_size < 1:
            raise InvalidParameterError("step_size must lie in (0, 1)")
        if self.training_symbols < 0 or self.passes < 1:
            raise InvalidParameterError("training_symbols must be >= 0 and passes >= 1")

    @property
    def cursor(self) -> int:
        return self.main_taps // 2

    @property
    def cross_delay(self) -> int:
        return cross_delay(self.main_taps, self.cross_taps)


def cross_delay(main_taps: int, cross_taps: int) -> int:
    """Delay that places the cross window around the main cursor.

    The window reaches ``ceil(L/2)`` symbols ahead of the cursor and
    ``floor(L/2) - 1`` behind it, so a single cross tap sits one symbol
    ahead of the cursor. For a zero-phase link the zero-lag cross term is
    null and the first useful cross coefficient is a neighbour.
    """
    return max(0, main_taps // 2 - (cross_taps + 1) // 2)


@dataclass
class EqualizerState:
    w_i: np.ndarray
    w_q: np.ndarray
    w_iq: np.ndarray
    w_qi: np.ndarray
    cursor: int = 0
    cross_delay: int = 0
    converged_mse: float = float("nan")
    mse_history: list = field(default_factory=list)

    @classmethod
    def center_spike(cls, config: EqualizerConfig) -> "EqualizerState":
        w_i = np.zeros(config.main_taps)
        w_i[config.cursor] = 1.0
        return cls(
            w_i=w_i,
            w_q=w_i.copy(),
            w_iq=np.zeros(config.cross_taps),
            w_qi=np.zeros(config.cross_taps),
            cursor=config.cursor,
            cross_delay=config.cross_delay,
        )

    @property
    def main_taps(self) -> int:
        return self.w_i.size

    @property
    def cross_taps(self) -> int:
        return self.w_iq.size

    @property
    def warmup(self) -> int:
        return max(self.main_taps, self.cross_delay + self.cross_taps) - 1

    def to_json(self) -> str:
        record = {
            "main_taps": self.main_taps,
            "cross_taps": self.cross_taps,
            "cursor": self.cursor,
            "cross_delay": self.cross_delay,
            "converged_mse": self.converged_mse,
            "mse_history": [float(v) for v in self.mse_history],
            "w_i": self.w_i.tolist(),
            "w_q": self.w_q.tolist(),
            "w_iq": self.w_iq.tolist(),
            "w_qi": self.w_qi.tolist(),
        }
        return json.dumps(record, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "EqualizerState":
        rec = json.loads(text)
        state = cls(
            w_i=np.array(rec["w_i"], dtype=float),
            w_q=np.array(rec["w_q"], dtype=float),
            w_iq=np.array(rec["w_iq"], dtype=float),
            w_qi=np.array(rec["w_qi"], dtype=float),
            cursor=int(rec["cursor"]),
            cross_delay=int(rec["cross_delay"]),
            converged_mse=float(rec["converged_mse"]),
            mse_history=list(rec.get("mse_history", [])),
        )
        if state.w_i.size != rec["main_taps"] or state.w_iq.size != rec["cross_taps"]:
            raise LengthError("tap arrays do not match the recorded tap counts")
        return state


def _causal_fir(x: np.ndarray, w: np.ndarray, delay: int = 0) -> np.ndarray:
    """``y(n) = sum_k x(n - delay - k) w(k)`` with zero history."""
    n = x.size
    if w.size == 0:
        return np.zeros(n)
    y = np.convolve(x, w)[:n]
    if delay:
        y = np.concatenate([np.zeros(min(delay, n)), y[: max(n - delay, 0)]])
    return y


def equalize(x_i, x_q, state: EqualizerState) -> tuple[np.ndarray, np.ndarray]:
    """Apply the cross-coupled FIR. Output ``n`` estimates symbol ``n - cursor``.

    The first ``state.warmup`` outputs see zero history and should be left
    out of any metric.
    """
    x_i = np.asarray(x_i, dtype=float)
    x_q = np.asarray(x_q, dtype=float)
    if x_i.shape != x_q.shape:
        raise LengthError("x_I and x_Q must have the same length")
    if x_i.size < state.main_taps:
        raise LengthError("input is shorter than the main filter")
    d = state.cross_delay
    r_i = _causal_fir(x_i, state.w_i) + _causal_fir(x_q, state.w_iq, d)
    r_q = _causal_fir(x_q, state.w_q) + _causal_fir(x_i, state.w_qi, d)
    return r_i, r_q


def equalize_aligned(x_i, x_q, state: EqualizerState) -> tuple[np.ndarray, np.ndarray]:
    """Like :func:`equalize` but with the cursor delay removed (output ``k`` = symbol ``k``)."""
    c = state.cursor
    pad = np.zeros(c)
    r_i, r_q = equalize(np.concatenate([x_i, pad]), np.concatenate([x_q, pad]), state)
    return r_i[c:], r_q[c:]


def _regressors(x_main, x_cross, m, l, d):
    """Rows ``[x_main(n), ..., x_main(n-m+1), x_cross(n-d), ..., x_cross(n-d-l+1)]``."""
    n = x_main.size
    pad = max(m, d + l)
    xm = np.concatenate([np.zeros(pad), x_main])
    xc = np.concatenate([np.zeros(pad), x_cross])
    idx = pad + np.arange(n)[:, None]
    main = xm[idx - np.arange(m)[None, :]]
    cross = xc[idx - d - np.arange(l)[None, :]]
    return np.hstack([main, cross])


def train_lms(x_i, x_q, ref_i, ref_q, config: EqualizerConfig) -> EqualizerState:
    """Joint LMS on a known training sequence.

    ``ref_i``/``ref_q`` are the transmitted symbols aligned with ``x_i``/``x_q``
    (same index = same symbol). Taps start from a centre spike; each pass
    walks the training block once.

    Raises
    ------
    DivergenceError
        If a pass ends with MSE above 10x the first-pass starting MSE.
    """
    x_i = np.asarray(x_i, dtype=float)
    x_q = np.asarray(x_q, dtype=float)
    ref_i = np.asarray(ref_i, dtype=float)
    ref_q = np.asarray(ref_q, dtype=float)
    if not (x_i.size == x_q.size == ref_i.size == ref_q.size):
        raise LengthError("training inputs and references must have equal lengths")

    state = EqualizerState.center_spike(config)
    m, l, c, d = config.main_taps, config.cross_taps, state.cursor, state.cross_delay
    n = x_i.size
    if n <= c:
        return state

    u_i = _regressors(x_i, x_q, m, l, d)
    u_q = _regressors(x_q, x_i, m, l, d)
    w_i = np.concatenate([state.w_i, state.w_iq])
    w_q = np.concatenate([state.w_q, state.w_qi])
    # output n is compared with the symbol that sits `c` positions earlier
    start = max(state.warmup, c)
    target_i = ref_i[start - c : n - c]
    target_q = ref_q[start - c : n - c]
    rows_i = u_i[start:]
    rows_q = u_q[start:]
    mu = config.step_size

    initial = float(np.mean((target_i - rows_i @ w_i) ** 2 + (target_q - rows_q @ w_q) ** 2))
    guard = 10.0 * max(initial, 1e-12)
    history = []
    for _ in range(config.passes):
        sq = 0.0
        # a diverging run overflows; the guard below reports it
        with np.errstate(over="ignore", invalid="ignore"):
            for k in range(rows_i.shape[0]):
                a = rows_i[k]
                b = rows_q[k]
                e_i = target_i[k] - a @ w_i
                e_q = target_q[k] - b @ w_q
                w_i += (mu * e_i) * a
                w_q += (mu * e_q) * b
                sq += e_i * e_i + e_q * e_q
        mse = sq / max(rows_i.shape[0], 1)
        history.append(mse)
        if not np.isfinite(mse) or mse > guard:
            raise DivergenceError(f"LMS diverged: MSE {mse:.3g} vs initial {initial:.3g}")

    state.w_i, state.w_iq = w_i[:m].copy(), w_i[m:].copy()
    state.w_q, state.w_qi = w_q[:m].copy(), w_q[m:].copy()
    state.converged_mse = float(
        np.mean((target_i - rows_i @ w_i) ** 2 + (target_q - rows_q @ w_q) ** 2)
    )
    state.mse_history = history
    return state
