"""Hard-decision Monte-Carlo evaluation over the binary symmetric channel.

The decoder is bit-flipping with extrinsic majority messages: each
variable repeats its channel bit unless at least ceil(d_v / 2) of the
other checks disagree, the running estimate is the majority of channel
bit plus all check votes (ties toward the channel bit), and decoding
stops as soon as the estimate satisfies every check -- the received word
itself counts as iteration 0.  The channel-error rate for an SNR point
assumes BPSK over AWGN followed by hard decision:
epsilon = Q(sqrt(2 * rate * 10^(snr_db / 10))).

Transmission is the all-zero codeword (the code is linear and the
decoder symmetric, so this costs no generality).  Trials are reproducible
and order-independent: trial i draws its noise from a counter-based
stream keyed by (seed, trial index), so splitting work across processes
cannot change any result.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import kernel
from .algebra import BaseMatrix, BinaryParityMatrix
from .errors import PreconditionError

__all__ = [
    "ChannelSpec",
    "Decoder",
    "DecodeResult",
    "ErrorRateRecord",
    "bsc_epsilon_from_snr",
    "decode_word",
    "syndrome",
    "monte_carlo",
    "monte_carlo_until",
    "wilson_interval",
    "format_records_csv",
]


def bsc_epsilon_from_snr(snr_db: float, rate: float) -> float:
    """Crossover probability of the hard-decision BPSK/AWGN channel."""
    if not 0.0 < rate <= 1.0:
        raise PreconditionError(f"rate must be in (0, 1], got {rate}")
    arg = math.sqrt(2.0 * rate * 10.0 ** (snr_db / 10.0))
    return 0.5 * math.erfc(arg / math.sqrt(2.0))


@dataclass(frozen=True)
class ChannelSpec:
    """Binary symmetric channel, optionally tagged with its SNR origin."""

    epsilon: float
    snr_db: Optional[float] = None
    rate: Optional[float] = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.epsilon < 1.0:
            raise PreconditionError(f"epsilon must be in [0, 1), got {self.epsilon}")

    @classmethod
    def from_epsilon(cls, epsilon: float) -> "ChannelSpec":
        return cls(epsilon=float(epsilon))

    @classmethod
    def from_snr(cls, snr_db: float, rate: float) -> "ChannelSpec":
        return cls(
            epsilon=bsc_epsilon_from_snr(snr_db, rate),
            snr_db=float(snr_db),
            rate=float(rate),
        )


@dataclass(frozen=True)
class Decoder:
    """Prepared adjacency arrays for the bit-flipping decoder."""

    rows: int
    cols: int
    chk_ptr: np.ndarray
    chk_var: np.ndarray
    var_ptr: np.ndarray
    vm_perm: np.ndarray

    @classmethod
    def from_matrix(cls, h: BinaryParityMatrix) -> "Decoder":
        deg_chk = [len(r) for r in h.row_cols]
        if min(deg_chk, default=0) < 1:
            raise PreconditionError("decoder needs every check connected")
        chk_ptr = np.asarray(np.cumsum([0] + deg_chk), dtype=np.int32)
        chk_var = np.asarray(
            [c for row in h.row_cols for c in row], dtype=np.int32
        )
        deg_var = np.zeros(h.cols, dtype=np.int64)
        for row in h.row_cols:
            for c in row:
                deg_var[c] += 1
        if h.cols == 0 or int(deg_var.min()) < 1:
            raise PreconditionError("decoder needs every variable connected")
        check_of_edge = np.repeat(np.arange(h.rows), deg_chk)
        vm_perm = np.asarray(
            np.lexsort((check_of_edge, chk_var)), dtype=np.int32
        )
        var_ptr = np.asarray(
            np.concatenate(([0], np.cumsum(deg_var))), dtype=np.int32
        )
        return cls(h.rows, h.cols, chk_ptr, chk_var, var_ptr, vm_perm)


@dataclass(frozen=True)
class DecodeResult:
    estimate: np.ndarray
    converged: bool
    iterations: int


DecoderLike = Union[Decoder, BinaryParityMatrix, BaseMatrix]


def _as_decoder(code: DecoderLike) -> Decoder:
    if isinstance(code, Decoder):
        return code
    if isinstance(code, BaseMatrix):
        return Decoder.from_matrix(code.expand())
    if isinstance(code, BinaryParityMatrix):
        return Decoder.from_matrix(code)
    raise PreconditionError(f"cannot decode with {type(code).__name__}")


def decode_word(
    code: DecoderLike, received: Sequence[int] | np.ndarray, max_iters: int = 200
) -> DecodeResult:
    dec = _as_decoder(code)
    r = np.asarray(received, dtype=np.uint8)
    if r.shape != (dec.cols,):
        raise PreconditionError(f"received word must have length {dec.cols}")
    est, conv, iters = kernel.gallager_b(
        dec.chk_ptr, dec.chk_var, dec.var_ptr, dec.vm_perm, r, max_iters
    )
    return DecodeResult(est, bool(conv), int(iters))


def syndrome(code: DecoderLike, word: Sequence[int] | np.ndarray) -> np.ndarray:
    """Per-check parities of ``word``."""
    dec = _as_decoder(code)
    w = np.asarray(word, dtype=np.uint8)
    return np.bitwise_xor.reduceat(w[dec.chk_var], dec.chk_ptr[:-1])


@dataclass(frozen=True)
class ErrorRateRecord:
    """Aggregated Monte-Carlo outcome at one channel point."""

    snr_db: Optional[float]
    epsilon: float
    trials: int
    word_errors: int
    bit_errors: int
    seed: int
    n_bits: int

    @property
    def wer(self) -> float:
        return self.word_errors / self.trials if self.trials else 0.0

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.trials * self.n_bits) if self.trials else 0.0


def _run_range(args) -> tuple[int, int]:
    dec, eps, seed, lo, hi, offset, max_iters = args
    n = dec.cols
    we = 0
    be = 0
    for t in range(lo, hi):
        key = (int(seed) << 64) | (offset + t)
        rng = np.random.Generator(np.random.Philox(key=key))
        if eps > 0.0:
            r = (rng.random(n) < eps).astype(np.uint8)
        else:
            r = np.zeros(n, dtype=np.uint8)
        if not r.any():
            continue  # all-zero received decodes to the codeword immediately
        est, _conv, _iters = kernel.gallager_b(
            dec.chk_ptr, dec.chk_var, dec.var_ptr, dec.vm_perm, r, max_iters
        )
        errs = int(est.sum())
        if errs:
            we += 1
            be += errs
    return we, be


def monte_carlo(
    code: DecoderLike,
    channel: ChannelSpec,
    trials: int,
    seed: int,
    max_iters: int = 200,
    threads: int = 1,
    trial_offset: int = 0,
) -> ErrorRateRecord:
    """Word/bit error rates over ``trials`` all-zero transmissions.

    Trial ``i`` (globally ``trial_offset + i``) uses the counter-based
    stream keyed by (seed, global index): results do not depend on
    ``threads``, and disjoint offset windows extend the same experiment.
    """
    if trials < 1:
        raise PreconditionError("trials must be positive")
    if not 0 <= seed < 2**64:
        raise PreconditionError("seed must fit in 64 bits")
    dec = _as_decoder(code)
    if threads <= 1 or trials < 4 * threads:
        we, be = _run_range(
            (dec, channel.epsilon, seed, 0, trials, trial_offset, max_iters)
        )
    else:
        bounds = [(trials * i) // threads for i in range(threads + 1)]
        jobs = [
            (dec, channel.epsilon, seed, bounds[i], bounds[i + 1], trial_offset, max_iters)
            for i in range(threads)
            if bounds[i] < bounds[i + 1]
        ]
        we = 0
        be = 0
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for w, b in pool.map(_run_range, jobs):
                we += w
                be += b
    return ErrorRateRecord(
        snr_db=channel.snr_db,
        epsilon=channel.epsilon,
        trials=trials,
        word_errors=we,
        bit_errors=be,
        seed=seed,
        n_bits=dec.cols,
    )


def monte_carlo_until(
    code: DecoderLike,
    channel: ChannelSpec,
    seed: int,
    min_word_errors: int,
    max_trials: int,
    chunk: int = 10_000,
    max_iters: int = 200,
    threads: int = 1,
) -> ErrorRateRecord:
    """Extend trials in chunks until enough word errors or the cap.

    Deterministic: running with the same arguments always reproduces the
    same record, and the result equals a single ``monte_carlo`` run over
    the same number of trials.
    """
    dec = _as_decoder(code)
    done = 0
    we = 0
    be = 0
    while done < max_trials and we < min_word_errors:
        step = min(chunk, max_trials - done)
        rec = monte_carlo(
            dec, channel, step, seed, max_iters=max_iters, threads=threads,
            trial_offset=done,
        )
        we += rec.word_errors
        be += rec.bit_errors
        done += step
    return ErrorRateRecord(
        snr_db=channel.snr_db,
        epsilon=channel.epsilon,
        trials=done,
        word_errors=we,
        bit_errors=be,
        seed=seed,
        n_bits=dec.cols,
    )


def wilson_interval(
    errors: int, trials: int, z: float = 1.959963984540054
) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion (default 95%)."""
    if trials <= 0:
        raise PreconditionError("trials must be positive")
    phat = errors / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = (
        z
        * math.sqrt(phat * (1.0 - phat) / trials + z2 / (4.0 * trials * trials))
        / denom
    )
    return (max(0.0, center - half), min(1.0, center + half))


def format_records_csv(records: Iterable[ErrorRateRecord]) -> str:
    """Stable CSV serialization (identical runs give identical bytes)."""
    lines = ["snr_db,epsilon,trials,word_errors,bit_errors,wer,ber,seed"]
    for r in records:
        snr = "" if r.snr_db is None else repr(float(r.snr_db))
        lines.append(
            ",".join(
                [
                    snr,
                    repr(float(r.epsilon)),
                    str(r.trials),
                    str(r.word_errors),
                    str(r.bit_errors),
                    repr(r.wer),
                    repr(r.ber),
                    str(r.seed),
                ]
            )
        )
    return "\n".join(lines) + "\n"
