"""BPSK over AWGN with soft-decision ML decoding of SEFCC encodings.

Eb/N0 is normalised to the information rate R = 7/9: the per-coordinate
noise variance is ``1 / (2 R Eb/N0)`` with unit-energy ±1 symbols.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.special import erfc
from scipy.stats import binomtest

from .fcc import BooleanFunction, SefccCode
from .hamming import Word

CODE_RATE = Fraction(7, 9)
DATA_BITS = 7
CODE_BITS = 9
CHUNK = 1 << 15

CSV_COLUMNS = (
    "ebn0_db", "trials", "bit_errors", "ber", "ber_ci_lo", "ber_ci_hi",
    "func_errors", "fer", "fer_ci_lo", "fer_ci_hi",
)


@dataclass(frozen=True)
class SimConfig:
    ebn0_db_points: tuple
    trials_per_point: int
    seed: int = 0
    workers: int = 1
    code_rate: Fraction = CODE_RATE
    data_bit_count: int = DATA_BITS

    def __post_init__(self):
        object.__setattr__(self, "ebn0_db_points", tuple(float(x) for x in self.ebn0_db_points))
        if self.trials_per_point < 1:
            raise ValueError("trials_per_point must be >= 1")
        if not all(np.isfinite(self.ebn0_db_points)):
            raise ValueError("Eb/N0 points must be finite")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class SimPoint:
    ebn0_db: float
    trials: int
    bit_errors: int
    func_errors: int
    ber: float
    fer: float
    ber_ci95: tuple
    fer_ci95: tuple

    def row(self) -> list[str]:
        return [
            f"{self.ebn0_db:g}", str(self.trials),
            str(self.bit_errors), _fmt(self.ber), _fmt(self.ber_ci95[0]), _fmt(self.ber_ci95[1]),
            str(self.func_errors), _fmt(self.fer), _fmt(self.fer_ci95[0]), _fmt(self.fer_ci95[1]),
        ]


@dataclass
class SimResult:
    points: list
    seed: int
    code_id: str = "code"
    rate: Fraction = CODE_RATE
    meta: dict = field(default_factory=dict)

    def header(self) -> list[str]:
        lines = [
            f"# code={self.code_id}",
            f"# seed={self.seed}",
            f"# rate={self.rate.numerator}/{self.rate.denominator}",
            "# ebn0_convention=Eb/N0 per information bit; sigma^2=1/(2*R*Eb/N0)",
            "# decoder=soft ML over 128 encodings; ties to smallest u",
        ]
        lines += [f"# {k}={v}" for k, v in sorted(self.meta.items())]
        return lines

    def to_csv(self) -> str:
        buf = io.StringIO()
        for line in self.header():
            buf.write(line + "\n")
        buf.write(",".join(CSV_COLUMNS) + "\n")
        for p in self.points:
            buf.write(",".join(p.row()) + "\n")
        return buf.getvalue()


def _fmt(x: float) -> str:
    return f"{x:.6e}"


def binomial_ci(k: int, n: int) -> tuple[float, float]:
    """Exact (Clopper-Pearson) 95% interval."""
    ci = binomtest(int(k), int(n)).proportion_ci(confidence_level=0.95, method="exact")
    return float(ci.low), float(ci.high)


def modulate_bpsk(w) -> np.ndarray:
    """Bit 0 -> +1, bit 1 -> -1, coordinate 1 first.

    Accepts a Word or an integer array of 9-bit encodings (returns ``(N, 9)``).
    """
    if isinstance(w, Word):
        bits = (w.bits >> (w.length - 1 - np.arange(w.length))) & 1
        return 1.0 - 2.0 * bits
    w = np.asarray(w, dtype=np.int64)
    bits = (w[..., None] >> (CODE_BITS - 1 - np.arange(CODE_BITS))) & 1
    return 1.0 - 2.0 * bits


def noise_variance(ebn0_db: float, rate=CODE_RATE) -> float:
    return 1.0 / (2.0 * float(rate) * 10.0 ** (ebn0_db / 10.0))


def add_awgn(symbols, ebn0_db: float, rng: np.random.Generator, rate=CODE_RATE) -> np.ndarray:
    if not np.isfinite(ebn0_db):
        raise ValueError("Eb/N0 must be finite")
    symbols = np.asarray(symbols, dtype=np.float64)
    sigma = np.sqrt(noise_variance(ebn0_db, rate))
    return symbols + sigma * rng.standard_normal(symbols.shape)


def candidate_symbols(code: SefccCode) -> np.ndarray:
    """``(128, 9)`` BPSK images of every encoding, row u = encoding of u."""
    return modulate_bpsk(code.encodings)


def ml_soft_decode_batch(observations: np.ndarray, code: SefccCode, candidates: np.ndarray | None = None) -> np.ndarray:
    # all candidates have energy 9, so min Euclidean distance == max correlation;
    # argmax takes the first maximum, i.e. the smallest u on ties
    cand = candidate_symbols(code) if candidates is None else candidates
    return np.argmax(np.asarray(observations) @ cand.T, axis=1)


def ml_soft_decode(observations: Sequence[float], code: SefccCode) -> Word:
    obs = np.asarray(observations, dtype=np.float64).reshape(1, CODE_BITS)
    return Word(int(ml_soft_decode_batch(obs, code)[0]), 7)


def _worker_counts(total: int, workers: int) -> list[int]:
    base, rem = divmod(total, workers)
    return [base + (w < rem) for w in range(workers)]


def _simulate_stream(code, f_table, cand, sigma, trials, seed_seq) -> tuple[int, int]:
    rng = np.random.default_rng(seed_seq)
    bit_errors = func_errors = 0
    done = 0
    while done < trials:
        n = min(CHUNK, trials - done)
        u = rng.integers(0, 128, size=n)
        obs = cand[u] + sigma * rng.standard_normal((n, CODE_BITS))
        u_hat = np.argmax(obs @ cand.T, axis=1)
        bit_errors += int(np.bitwise_count(u ^ u_hat).sum())
        func_errors += int((f_table[u] != f_table[u_hat]).sum())
        done += n
    return bit_errors, func_errors


def run_simulation(code: SefccCode, f: BooleanFunction, cfg: SimConfig, code_id: str = "code") -> SimResult:
    """Monte-Carlo BER over the 7 data bits and FER of ``f`` per Eb/N0 point.

    Worker ``w`` at point ``i`` draws from ``SeedSequence(seed, spawn_key=(i, w))``,
    so results are bit-identical for a fixed seed and worker count. Two codes
    run with the same config see the same messages and noise.
    """
    from concurrent.futures import ThreadPoolExecutor

    f_table = f.as_array()
    cand = candidate_symbols(code)
    points = []
    for i, ebn0 in enumerate(cfg.ebn0_db_points):
        sigma = np.sqrt(noise_variance(ebn0, cfg.code_rate))
        counts = _worker_counts(cfg.trials_per_point, cfg.workers)
        seeds = [np.random.SeedSequence(cfg.seed, spawn_key=(i, w)) for w in range(cfg.workers)]
        args = [(code, f_table, cand, sigma, n, s) for n, s in zip(counts, seeds)]
        if cfg.workers == 1:
            parts = [_simulate_stream(*a) for a in args]
        else:
            with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
                parts = list(pool.map(lambda a: _simulate_stream(*a), args))
        bit_errors = sum(p[0] for p in parts)
        func_errors = sum(p[1] for p in parts)
        n = cfg.trials_per_point
        nbits = n * cfg.data_bit_count
        points.append(SimPoint(
            ebn0, n, bit_errors, func_errors,
            bit_errors / nbits, func_errors / n,
            binomial_ci(bit_errors, nbits), binomial_ci(func_errors, n),
        ))
    return SimResult(points, cfg.seed, code_id, cfg.code_rate, meta={"workers": cfg.workers})


def q_function(x):
    return 0.5 * erfc(np.asarray(x, dtype=np.float64) / np.sqrt(2.0))


def cross_class_distance_counts(code: SefccCode, f: BooleanFunction) -> np.ndarray:
    """Ordered cross-class pair counts by encoding distance (index = distance)."""
    enc = code.encodings
    vals = f.as_array()
    ones, zeros = enc[vals == 1], enc[vals == 0]
    d = np.bitwise_count(ones[:, None] ^ zeros[None, :]).ravel()
    # each unordered cross pair appears once per direction
    return 2 * np.bincount(d, minlength=CODE_BITS + 1)


def union_bound_fer(code: SefccCode, f: BooleanFunction, ebn0_db: float, rate=CODE_RATE) -> float:
    """Union bound on function error: pairwise error terms over cross-class pairs."""
    counts = cross_class_distance_counts(code, f)
    d = np.arange(len(counts))
    ebn0 = 10.0 ** (ebn0_db / 10.0)
    terms = counts * q_function(np.sqrt(2.0 * float(rate) * ebn0 * d))
    return float(terms[d > 0].sum() / len(code.encodings))


def compare_csv(first: SimResult, second: SimResult) -> str:
    """Join two results on Eb/N0 with per-code column prefixes."""
    if [p.ebn0_db for p in first.points] != [p.ebn0_db for p in second.points]:
        raise ValueError("results cover different Eb/N0 points")
    buf = io.StringIO()
    buf.write(f"# code_a={first.code_id}\n# code_b={second.code_id}\n")
    buf.write(f"# seed={first.seed}\n# rate={first.rate.numerator}/{first.rate.denominator}\n")
    cols = CSV_COLUMNS[1:]
    buf.write(",".join(["ebn0_db"] + [f"a_{c}" for c in cols] + [f"b_{c}" for c in cols]) + "\n")
    for pa, pb in zip(first.points, second.points):
        buf.write(",".join([pa.row()[0]] + pa.row()[1:] + pb.row()[1:]) + "\n")
    return buf.getvalue()
