"""Monte Carlo estimates of delta(t), SER and Q(t) for codes past the exact budget.

Samples are cut into fixed blocks; block b draws from SeedSequence([seed, b])
and blocks are merged in index order, so the worker count never changes a
result.
"""

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np
from scipy.stats import norm

from .channel import DiscreteChannel, standardize
from .exceptions import InputSizeMismatch, TOutOfRange
from .grm import LinearCode, check_position_zero, sample_codeword
from .numeric import format_matrix

logger = logging.getLogger("grmlab")

BLOCK_SIZE = 4096
# Upper limit on block_size * |C| posterior entries held at once
_BLOCK_ENTRIES = 2**22
_BOOTSTRAP_STREAM = 2**31 - 1


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, value: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= value <= self.hi + tol


@dataclass(frozen=True, eq=False)
class McReport:
    t: float
    n_samples: int
    seed: int
    confidence: float
    delta: float
    delta_ci: Interval
    ser: float
    ser_ci: Interval
    trace: float
    trace_ci: Interval
    overlap: np.ndarray

    def to_dict(self) -> Dict[str, Any]:
        return {
            "t": self.t,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "confidence": self.confidence,
            "delta": self.delta,
            "delta_ci": [self.delta_ci.lo, self.delta_ci.hi],
            "ser": self.ser,
            "ser_ci": [self.ser_ci.lo, self.ser_ci.hi],
            "trace": self.trace,
            "trace_ci": [self.trace_ci.lo, self.trace_ci.hi],
            "Q": format_matrix(self.overlap),
        }


def _draw_block(
    code: LinearCode,
    wmat: np.ndarray,
    t: float,
    seed: int,
    block: int,
    size: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """Posteriors Psi (size x q) and the transmitted symbols X_0."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, block]))
    words = sample_codeword(code, rng, size=size)
    n = code.length
    cdf = np.cumsum(wmat, axis=1)
    u = rng.random((size, n - 1))
    erased = rng.random((size, n - 1)) < t
    with np.errstate(divide="ignore"):
        log_w = np.log(wmat)
    book = code.codewords
    ll = np.zeros((size, len(book)))
    for i in range(1, n):
        y = (cdf[words[:, i]] < u[:, i - 1, None]).sum(axis=1)
        y = np.minimum(y, wmat.shape[1] - 1)
        contrib = log_w[book[:, i]][:, y].T
        ll += np.where(erased[:, i - 1, None], 0.0, contrib)
    w = np.exp(ll - ll.max(axis=1, keepdims=True))
    onehot = np.eye(code.q)[book[:, 0]]
    psi = w @ onehot
    psi /= psi.sum(axis=1, keepdims=True)
    return psi, words[:, 0].astype(np.int64)


def _estimates(psi: np.ndarray, x0: np.ndarray, q: int) -> Tuple[float, float, float, np.ndarray]:
    """delta, SER, tr Q and the class means (rows of Q)."""
    n = len(x0)
    counts = np.bincount(x0, minlength=q)
    ref = np.full((q, q), np.nan)
    present = np.flatnonzero(counts)
    first = np.array([np.flatnonzero(x0 == x)[0] for x in present], dtype=np.int64)
    ref[present] = psi[first]
    dev = psi - ref[x0]
    mean_dev = np.zeros((q, q))
    np.add.at(mean_dev, x0, dev)
    mean_dev[present] /= counts[present, None]
    resid = dev - mean_dev[x0]
    ss = np.bincount(x0, weights=(resid**2).sum(axis=1), minlength=q)
    corr = np.where(counts > 1, counts / np.maximum(counts - 1, 1), 0.0)
    delta = float((corr * ss).sum() / n)
    ser = float(1.0 - psi.max(axis=1).mean())
    trace = float(q * psi[np.arange(n), x0].mean())
    return delta, ser, trace, ref + mean_dev


def mc_coset(
    code: LinearCode,
    channel: DiscreteChannel,
    t: float,
    n_samples: int,
    seed: int = 0,
    workers: int = 1,
    confidence: float = 0.99,
    n_boot: int = 200,
) -> McReport:
    """Plug-in estimates with bootstrap standard-error intervals.

    delta uses within-class residuals with an n_x / (n_x - 1) correction;
    SER is 1 - E[max Psi] and tr Q is q E[Psi_{X_0}].
    """
    if channel.q != code.q:
        raise InputSizeMismatch(f"channel has {channel.q} inputs, code alphabet is {code.q}")
    if not 0 <= t <= 1:
        raise TOutOfRange(f"t = {t} is outside [0, 1]")
    check_position_zero(code)
    wmat = standardize(channel).as_channel().as_float()
    size = max(1, min(BLOCK_SIZE, _BLOCK_ENTRIES // code.size))
    blocks = [(b, min(size, n_samples - b * size)) for b in range(-(-n_samples // size))]

    def run(job: Tuple[int, int]) -> Tuple[np.ndarray, np.ndarray]:
        return _draw_block(code, wmat, float(t), seed, job[0], job[1])

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        parts = list(pool.map(run, blocks))
    psi = np.vstack([p for p, _ in parts])
    x0 = np.concatenate([x for _, x in parts])
    q = code.q
    delta, ser, trace, qhat = _estimates(psi, x0, q)

    rng = np.random.default_rng(np.random.SeedSequence([seed, _BOOTSTRAP_STREAM]))
    boot = np.empty((n_boot, 3))
    for j in range(n_boot):
        idx = rng.integers(0, len(x0), len(x0))
        boot[j] = _estimates(psi[idx], x0[idx], q)[:3]
    # normal interval on the bootstrap standard error; none of the three estimates is negative
    point = np.array([delta, ser, trace])
    half = float(norm.ppf((1 + confidence) / 2)) * boot.std(axis=0, ddof=1)
    lo, hi = np.maximum(point - half, 0.0), point + half
    logger.info(
        json.dumps(
            {
                "event": "mc_coset",
                "t": float(t),
                "n_samples": n_samples,
                "seed": seed,
                "blocks": len(blocks),
            }
        )
    )
    return McReport(
        t=float(t),
        n_samples=n_samples,
        seed=seed,
        confidence=confidence,
        delta=delta,
        delta_ci=Interval(float(lo[0]), float(hi[0])),
        ser=ser,
        ser_ci=Interval(float(lo[1]), float(hi[1])),
        trace=trace,
        trace_ci=Interval(float(lo[2]), float(hi[2])),
        overlap=qhat,
    )
