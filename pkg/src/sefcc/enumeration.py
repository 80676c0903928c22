"""Exhaustive census of parity assignments over the distance-3 graph.

Assignments are packed into one integer per assignment (codeword 1 in the
top two bits), so numeric order equals the canonical search order: vertices
1..16, parities 00 < 01 < 10 < 11 at each vertex.

Two search modes produce the same sorted array of valid assignments:

``backtracking``
    Depth-ordered pruned search. Each level extends every surviving partial
    assignment by one vertex and drops those that put complementary
    parities on an edge back to an already assigned vertex. The frontier is
    expanded level by level in numpy rather than by recursion, which keeps
    the canonical order without a Python call per node.
``full_sweep``
    Visits all 4**16 assignments. The first eight vertices form a prefix and
    the last eight a suffix; cross edges are tested bit-parallel with one-hot
    suffix masks against a per-prefix forbidden mask.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Callable

import numpy as np

from . import fcc
from .fcc import MAX_SUM_DISTANCE, ParityAssignment
from .hamming import Distance3Graph, distance3_graph, hamming_codebook

MODES = ("backtracking", "full_sweep")
N = fcc.N_CODEWORDS
WORKERS_ENV = "SEFCC_WORKERS"


def default_workers() -> int:
    value = os.environ.get(WORKERS_ENV)
    if value is None:
        return 1
    workers = int(value)
    if workers < 1:
        raise ValueError(f"{WORKERS_ENV} must be >= 1")
    return workers


@dataclass(frozen=True)
class SearchStrategy:
    mode: str = "backtracking"
    worker_count: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.worker_count < 1:
            raise ValueError("worker_count must be >= 1")


@dataclass
class CensusReport:
    total_assignments_examined: int = 0
    valid_count: int = 0
    valid_dmin2_count: int = 0
    max_sum_value: int = 0
    max_sum_count: int = 0
    max_sum_all_match_construction: bool = False
    min_N2_over_valid_dmin2: int | None = None
    min_N2_achievers_match_construction: bool | None = None

    def to_lines(self) -> list[str]:
        out = []
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool):
                value = str(value).lower()
            out.append(f"{f.name}={'' if value is None else value}")
        return out

    def as_dict(self) -> dict:
        return asdict(self)


# --- search ------------------------------------------------------------------

def _back_edges(g: Distance3Graph) -> list[np.ndarray]:
    back = [[] for _ in range(g.n_vertices)]
    for i, k in g.edges:
        back[max(i, k)].append(min(i, k))
    return [np.array(sorted(b), dtype=np.int64) for b in back]


def _extend(frontier: np.ndarray, start: int, back: list[np.ndarray]) -> np.ndarray:
    """Grow partial assignments on vertices ``< start`` to full ones.

    ``frontier`` holds partial codes where the last assigned vertex is in the
    low two bits.
    """
    for v in range(start, N):
        cand = (frontier[:, None] * 4 + np.arange(4, dtype=np.int64)).ravel()
        pv = cand & 3
        keep = np.ones(len(cand), dtype=bool)
        for i in back[v]:
            pi = (cand >> (2 * (v - i))) & 3
            keep &= (pi ^ pv) != 3
        frontier = cand[keep]
    return frontier


def _run_shards(tasks, workers: int) -> list:
    if workers == 1 or len(tasks) == 1:
        return [t() for t in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda t: t(), tasks))


def backtracking_shards(g: Distance3Graph) -> list[np.ndarray]:
    """One shard per parity of codeword 1, each in canonical order."""
    back = _back_edges(g)
    return [_extend(np.array([p], dtype=np.int64), 1, back) for p in range(4)]


def _backtracking(g: Distance3Graph, workers: int) -> np.ndarray:
    back = _back_edges(g)
    if workers == 1:
        return _extend(np.zeros(1, dtype=np.int64), 0, back)
    tasks = [lambda p=p: _extend(np.array([p], dtype=np.int64), 1, back) for p in range(4)]
    return np.concatenate(_run_shards(tasks, workers))


def _half_tables(g: Distance3Graph, offset: int) -> tuple[np.ndarray, np.ndarray]:
    """Internal validity and one-hot masks for all 4**8 assignments of 8 vertices."""
    codes = np.arange(4 ** 8, dtype=np.int64)
    vals = (codes[:, None] >> (2 * (7 - np.arange(8)))) & 3
    ok = np.ones(len(codes), dtype=bool)
    for i, k in g.edges:
        if offset <= i < offset + 8 and offset <= k < offset + 8:
            ok &= (vals[:, i - offset] ^ vals[:, k - offset]) != 3
    onehot = (np.int64(1) << (4 * np.arange(8) + vals)).sum(axis=1).astype(np.uint32)
    return ok, onehot


def _full_sweep(g: Distance3Graph, workers: int) -> np.ndarray:
    prefix_ok, _ = _half_tables(g, 0)
    suffix_ok, suffix_onehot = _half_tables(g, 8)
    prefixes = np.arange(4 ** 8, dtype=np.int64)
    pvals = (prefixes[:, None] >> (2 * (7 - np.arange(8)))) & 3
    forbidden = np.zeros(len(prefixes), dtype=np.int64)
    for i, k in g.edges:
        i, k = min(i, k), max(i, k)
        if i < 8 <= k:
            # suffix vertex k may not take the complement of prefix vertex i
            forbidden |= np.int64(1) << (4 * (k - 8) + (pvals[:, i] ^ 3))
    forbidden = forbidden.astype(np.uint32)

    def sweep(lo: int, hi: int) -> np.ndarray:
        found = []
        for p in range(lo, hi):
            ok = suffix_ok & ((suffix_onehot & forbidden[p]) == 0) & prefix_ok[p]
            idx = np.flatnonzero(ok)
            if len(idx):
                found.append((np.int64(p) << 16) | idx)
        return np.concatenate(found) if found else np.zeros(0, dtype=np.int64)

    bounds = np.linspace(0, len(prefixes), workers + 1).astype(int)
    tasks = [lambda lo=lo, hi=hi: sweep(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:])]
    return np.concatenate(_run_shards(tasks, workers))


def valid_assignments(g: Distance3Graph | None = None, strategy: SearchStrategy | None = None) -> np.ndarray:
    """Sorted packed codes of every assignment with no complementary edge."""
    g = g or distance3_graph()
    strategy = strategy or SearchStrategy()
    if g.n_vertices != N:
        raise ValueError("census is defined for the 16-vertex codeword graph")
    if strategy.mode == "backtracking":
        return _backtracking(g, strategy.worker_count)
    return _full_sweep(g, strategy.worker_count)


def examined_count(strategy: SearchStrategy, valid: np.ndarray) -> int:
    return 4 ** N if strategy.mode == "full_sweep" else len(valid)


# --- census ------------------------------------------------------------------

@dataclass
class CensusData:
    """Everything the census computed, kept for certification and witnesses."""

    report: CensusReport
    valid: np.ndarray
    sums: np.ndarray
    max_sum_codes: np.ndarray
    spectra: np.ndarray | None = None
    dmin2_mask: np.ndarray | None = None
    extras: dict = field(default_factory=dict)


def _census(g: Distance3Graph, strategy: SearchStrategy, with_spectra: bool) -> CensusData:
    valid = valid_assignments(g, strategy)
    report = CensusReport(total_assignments_examined=examined_count(strategy, valid), valid_count=len(valid))
    family = fcc.max_sum_family_packed(g)

    sums = np.zeros(len(valid), dtype=np.int64)
    graph_dmin2 = np.zeros(len(valid), dtype=bool)
    chunk = 1 << 16
    for start in range(0, len(valid), chunk):
        par = fcc.unpack(valid[start:start + chunk])
        sums[start:start + chunk] = fcc.batch_sum_distance(par)
        graph_dmin2[start:start + chunk] = fcc.batch_has_dmin_2(par, g)

    report.max_sum_value = int(sums.max()) if len(sums) else 0
    max_codes = valid[sums == report.max_sum_value]
    report.max_sum_count = len(max_codes)
    report.max_sum_all_match_construction = bool(np.isin(max_codes, family).all())
    report.valid_dmin2_count = int(graph_dmin2.sum())
    data = CensusData(report, valid, sums, max_codes, dmin2_mask=graph_dmin2)

    if with_spectra:
        spectra = np.zeros((len(valid), fcc.MAX_DISTANCE + 1), dtype=np.int64)
        for start in range(0, len(valid), chunk):
            spectra[start:start + chunk] = fcc.batch_spectra(fcc.unpack(valid[start:start + chunk]))
        dmin = fcc.spectrum_dmin(spectra)
        spec_dmin2 = dmin == 2
        # spectrum-based classification is authoritative for the counts
        report.valid_dmin2_count = int(spec_dmin2.sum())
        n2 = spectra[spec_dmin2, 2]
        if len(n2):
            report.min_N2_over_valid_dmin2 = int(n2.min())
            achievers = valid[spec_dmin2][n2 == n2.min()]
            report.min_N2_achievers_match_construction = bool(np.array_equal(np.sort(achievers), family))
            data.extras["min_N2_achievers"] = achievers
        data.spectra = spectra
        data.extras["spectrum_dmin"] = dmin
    return data


def enumerate_valid(
    g: Distance3Graph | None = None,
    strategy: SearchStrategy | None = None,
    visitor: Callable[[ParityAssignment], None] | None = None,
) -> CensusReport:
    """Visit every valid assignment once, in canonical order, and summarise.

    The visitor runs on the calling thread after shards are merged, so it
    need not be thread-safe whatever ``worker_count`` is.
    """
    g = g or distance3_graph()
    strategy = strategy or SearchStrategy()
    data = _census(g, strategy, with_spectra=False)
    if visitor is not None:
        for code in data.valid:
            visitor(ParityAssignment.from_packed(int(code)))
    return data.report


def max_sum_census(g: Distance3Graph | None = None, strategy: SearchStrategy | None = None) -> CensusReport:
    return _census(g or distance3_graph(), strategy or SearchStrategy(), with_spectra=False).report


def min_n2_census(g: Distance3Graph | None = None, strategy: SearchStrategy | None = None) -> CensusReport:
    return _census(g or distance3_graph(), strategy or SearchStrategy(), with_spectra=True).report


# --- certification -----------------------------------------------------------

@dataclass
class Certification:
    name: str
    passed: bool
    detail: str
    witness: str | None = None

    def line(self) -> str:
        out = f"{self.name}={'pass' if self.passed else 'fail'} {self.detail}"
        if self.witness:
            out += f" witness={self.witness}"
        return out


@dataclass
class CertificationReport:
    census: CensusReport
    checks: list[Certification]
    strategy: SearchStrategy

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_text(self) -> str:
        lines = [f"mode={self.strategy.mode}"]
        lines += self.census.to_lines()
        lines += [c.line() for c in self.checks]
        lines.append(f"all_passed={str(self.all_passed).lower()}")
        return "\n".join(lines) + "\n"


def _witness(code) -> str:
    return ParityAssignment.from_packed(int(code)).to_text().strip().replace(" ", "")


def _brute_valid(parities: np.ndarray, cb, chunk: int = 4096) -> np.ndarray:
    out = np.zeros(len(parities), dtype=bool)
    for start in range(0, len(parities), chunk):
        out[start:start + chunk] = fcc.batch_cross_class_min(parities[start:start + chunk], cb) >= 3
    return out


def sample_corpus(g: Distance3Graph, sample_size: int, seed: int) -> np.ndarray:
    """Constants, the whole construction family and seeded random assignments."""
    rng = np.random.default_rng(seed)
    constants = fcc.pack(np.repeat(np.arange(4)[:, None], N, axis=1))
    random = fcc.pack(rng.integers(0, 4, size=(sample_size, N)))
    return np.concatenate([constants, fcc.max_sum_family_packed(g), random])


def certify_theorems(
    g: Distance3Graph | None = None,
    strategy: SearchStrategy | None = None,
    sample_size: int = 10_000,
    seed: int = 0,
) -> CertificationReport:
    """Run the validity, d_min, sum-bound, max-sum and minimal-N2 checks.

    Brute-force definitions (cross-class distance, explicit distance
    matrices) are computed from the codebook alone, so a damaged graph shows
    up as a disagreement with a concrete witness.
    """
    g = g or distance3_graph()
    strategy = strategy or SearchStrategy()
    cb = hamming_codebook()
    data = _census(g, strategy, with_spectra=True)
    report = data.report
    family = fcc.max_sum_family_packed(g)
    checks = []

    # validity: graph criterion vs. cross-class distance >= 3 on the sample corpus,
    # and every enumerated assignment must meet the definition (population soundness)
    corpus = sample_corpus(g, sample_size, seed)
    par = fcc.unpack(corpus)
    graph_valid = fcc.batch_is_valid(par, g)
    brute_valid = _brute_valid(par, cb)
    bad = np.flatnonzero(graph_valid != brute_valid)
    unsound = np.flatnonzero(~_brute_valid(fcc.unpack(data.valid), cb))
    sound = len(unsound) == 0
    witness = _witness(corpus[bad[0]]) if len(bad) else (_witness(data.valid[unsound[0]]) if not sound else None)
    checks.append(Certification(
        "validity_equivalence",
        len(bad) == 0 and sound,
        f"corpus={len(corpus)} graph_valid={int(graph_valid.sum())} disagreements={len(bad)} "
        f"census_not_fcc={len(unsound)}",
        witness,
    ))

    # d_min: graph criterion vs. spectrum, on the valid corpus and on the whole valid set
    vpar = par[brute_valid]
    sample_dmin = fcc.spectrum_dmin(fcc.batch_spectra_direct(vpar, cb))
    sample_bad = np.flatnonzero(fcc.batch_has_dmin_2(vpar, g) != (sample_dmin == 2))
    census_bad = np.flatnonzero(data.dmin2_mask != (data.extras["spectrum_dmin"] == 2))
    never_zero = bool((sample_dmin >= 1).all() and (data.extras["spectrum_dmin"] >= 1).all())
    optfer = fcc.spectrum(fcc.extend_to_full(fcc.optimal_fer_assignment(fcc.Word(0, 2), cb), cb)).d_min
    witness = None
    if len(sample_bad):
        witness = _witness(corpus[brute_valid][sample_bad[0]])
    elif len(census_bad):
        witness = _witness(data.valid[census_bad[0]])
    checks.append(Certification(
        "dmin2_condition",
        not len(sample_bad) and not len(census_bad) and never_zero and optfer == 1,
        f"sample_valid={len(vpar)} sample_disagreements={len(sample_bad)} "
        f"census_disagreements={len(census_bad)} optimal_fer_dmin={optfer}",
        witness,
    ))

    # sum-distance bound
    msg = fcc.message_sum_distance()
    checks.append(Certification(
        "sum_distance_bound",
        msg == fcc.MESSAGE_SUM_DISTANCE and report.max_sum_value == MAX_SUM_DISTANCE,
        f"message_part={msg} census_max={report.max_sum_value} bound={MAX_SUM_DISTANCE}",
        _witness(data.valid[np.argmax(data.sums)]) if report.max_sum_value > MAX_SUM_DISTANCE else None,
    ))

    # max-sum attainers are exactly the construction family
    extra = np.setdiff1d(data.max_sum_codes, family)
    missing = np.setdiff1d(family, data.max_sum_codes)
    witness = _witness(extra[0]) if len(extra) else (_witness(missing[0]) if len(missing) else None)
    if not sound:
        # the attainers were drawn from a population containing non-FCCs
        witness = witness or _witness(data.valid[unsound[0]])
    checks.append(Certification(
        "max_sum_uniqueness",
        sound and report.max_sum_value == MAX_SUM_DISTANCE and not len(extra) and not len(missing),
        f"max_sum_count={report.max_sum_count} family={len(family)} outside_family={len(extra)} "
        f"family_missing={len(missing)} population_sound={str(sound).lower()}",
        witness,
    ))

    # family distance properties (explicit matrices) and minimal N2 (census spectra)
    fam_spec = fcc.batch_spectra_direct(fcc.unpack(family), cb)
    fam_dmin = fcc.spectrum_dmin(fam_spec)
    fam_n2 = fam_spec[:, 2]
    fam_sum = 2 * (fam_spec * np.arange(fam_spec.shape[1])).sum(axis=1)
    fam_ok = bool((fam_dmin == 2).all() and (fam_sum == MAX_SUM_DISTANCE).all() and len(np.unique(fam_n2)) == 1)
    family_n2 = int(fam_n2[0])
    achievers = data.extras.get("min_N2_achievers", np.zeros(0, dtype=np.int64))
    outside = np.setdiff1d(achievers, family)
    witness = None
    if not fam_ok:
        witness = _witness(family[np.flatnonzero((fam_dmin != 2) | (fam_n2 != fam_n2.min()))[0]])
    elif len(outside):
        witness = _witness(outside[0])
    checks.append(Certification(
        "min_n2_optimality",
        fam_ok and report.min_N2_over_valid_dmin2 == family_n2 and bool(report.min_N2_achievers_match_construction),
        f"family_N2={family_n2} family_dmin2={str(bool((fam_dmin == 2).all())).lower()} "
        f"census_min_N2={report.min_N2_over_valid_dmin2} achievers={len(achievers)}",
        witness,
    ))
    return CertificationReport(report, checks, strategy)
