"""Parity assignments for single-error-correcting FCCs of the Hamming
membership function, their validity/d_min tests, distance spectra and the two
canonical constructions.

An assignment fixes a 2-bit parity for each of the 16 codewords; every other
vector of F_2^7 gets the complement of its sphere centre's parity. Parities
are handled as ints 0..3 (``0b10`` is the string ``"10"``).

Besides the per-code functions there are ``batch_*`` helpers working on an
``(B, 16)`` integer array of parities, used by the exhaustive census.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from .hamming import Distance3Graph, HammingCodebook, Word, distance3_graph, hamming_codebook

N_CODEWORDS = 16
N_VECTORS = 128
PARITY_LEN = 2
MAX_DISTANCE = 7 + PARITY_LEN

# Sigma_{u,v} d_H(u, v) over F_2^7, ordered pairs
MESSAGE_SUM_DISTANCE = 7 * 2 ** 13
MAX_SUM_DISTANCE = MESSAGE_SUM_DISTANCE + 2 * (2 * 64 * 64)

# default construction subsets (0-based codeword indices)
DEFAULT_ODD_SUBSET = (2, 3, 4, 5)
DEFAULT_EVEN_SUBSET = (0, 1, 6, 7)


class InvalidAssignmentError(ValueError):
    """An assignment places complementary parities on a distance-3 pair."""


class AssignmentParseError(ValueError):
    pass


@dataclass(frozen=True)
class ParityAssignment:
    parities: tuple

    def __post_init__(self):
        if len(self.parities) != N_CODEWORDS:
            raise ValueError(f"expected {N_CODEWORDS} parities, got {len(self.parities)}")
        for p in self.parities:
            if not isinstance(p, Word) or p.length != PARITY_LEN:
                raise ValueError(f"parities must be length-2 words, got {p!r}")

    @classmethod
    def from_ints(cls, values: Sequence[int]) -> "ParityAssignment":
        return cls(tuple(Word(int(v), PARITY_LEN) for v in values))

    @classmethod
    def constant(cls, value: int) -> "ParityAssignment":
        return cls.from_ints([value] * N_CODEWORDS)

    @classmethod
    def from_packed(cls, packed: int) -> "ParityAssignment":
        return cls.from_ints([(int(packed) >> (2 * (N_CODEWORDS - 1 - v))) & 3 for v in range(N_CODEWORDS)])

    @classmethod
    def from_text(cls, text: str) -> "ParityAssignment":
        return parse_assignment(text)

    def as_ints(self) -> tuple:
        return tuple(p.bits for p in self.parities)

    @property
    def packed(self) -> int:
        """Codeword 1 in the top bits, so packed order is the canonical search order."""
        out = 0
        for p in self.parities:
            out = (out << 2) | p.bits
        return out

    def to_text(self) -> str:
        return " ".join(str(p) for p in self.parities) + "\n"

    def counts(self) -> dict[str, int]:
        out = {format(v, "02b"): 0 for v in range(4)}
        for p in self.parities:
            out[str(p)] += 1
        return out

    def xor_mask(self, mask: int) -> "ParityAssignment":
        return ParityAssignment.from_ints([v ^ mask for v in self.as_ints()])

    def swap_coordinates(self) -> "ParityAssignment":
        return ParityAssignment.from_ints([((v & 1) << 1) | (v >> 1) for v in self.as_ints()])


_TOKEN = re.compile(r"[01]{2}")


def parse_assignment(text: str) -> ParityAssignment:
    """Parse 16 whitespace-separated 2-bit tokens; ``#`` starts a comment."""
    tokens = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        for col, tok in enumerate(line.split(), start=1):
            if not _TOKEN.fullmatch(tok):
                raise AssignmentParseError(f"line {lineno}, token {col}: {tok!r} is not a 2-bit binary token")
            tokens.append(tok)
    if len(tokens) != N_CODEWORDS:
        raise AssignmentParseError(f"expected {N_CODEWORDS} parity tokens, found {len(tokens)}")
    return ParityAssignment(tuple(Word.from_str(t) for t in tokens))


class SefccCode:
    """An assignment extended to all of F_2^7 together with its 128 encodings."""

    def __init__(self, assignment: ParityAssignment, codebook: HammingCodebook | None = None):
        self.assignment = assignment
        self.codebook = codebook or hamming_codebook()
        par = np.array(assignment.as_ints(), dtype=np.int64)
        self.full_parity = full_parity_table(par[None, :], self.codebook)[0]
        self.encodings = (np.arange(N_VECTORS, dtype=np.int64) << PARITY_LEN) | self.full_parity
        self.full_parity.setflags(write=False)
        self.encodings.setflags(write=False)

    def parity(self, u: Word) -> Word:
        return Word(int(self.full_parity[u.bits]), PARITY_LEN)

    def encode(self, u: Word) -> Word:
        if u.length != 7:
            raise ValueError(f"expected a length-7 word, got length {u.length}")
        return u.concat(self.parity(u))


def extend_to_full(pa: ParityAssignment, cb: HammingCodebook | None = None) -> SefccCode:
    return SefccCode(pa, cb)


def encode(code: SefccCode, u: Word) -> Word:
    return code.encode(u)


def _edge_arrays(g: Distance3Graph) -> tuple[np.ndarray, np.ndarray]:
    edges = g.sorted_edges()
    a = np.array([e[0] for e in edges], dtype=np.int64)
    b = np.array([e[1] for e in edges], dtype=np.int64)
    return a, b


def is_valid(pa: ParityAssignment, g: Distance3Graph | None = None) -> bool:
    """No distance-3 pair of codewords carries complementary parities."""
    g = g or distance3_graph()
    p = pa.as_ints()
    return all(p[i] ^ p[k] != 3 for i, k in g.edges)


def has_dmin_2(pa: ParityAssignment, g: Distance3Graph | None = None) -> bool:
    """For a valid assignment: no distance-3 pair shares the same parity.

    Raises InvalidAssignmentError if ``pa`` is not valid, since the
    criterion only characterises d_min for valid codes.
    """
    g = g or distance3_graph()
    if not is_valid(pa, g):
        raise InvalidAssignmentError("has_dmin_2 requires a valid assignment")
    p = pa.as_ints()
    return all(p[i] != p[k] for i, k in g.edges)


def distance_matrix(code: SefccCode) -> np.ndarray:
    enc = code.encodings
    return np.bitwise_count(enc[:, None] ^ enc[None, :]).astype(np.int64)


@dataclass(frozen=True)
class DistanceSpectrum:
    counts: tuple
    d_min: int
    sum_distance: int

    @classmethod
    def from_counts(cls, counts: Sequence[int]) -> "DistanceSpectrum":
        counts = tuple(int(c) for c in counts)
        nonzero = [d for d, c in enumerate(counts) if c]
        d_min = nonzero[0] if nonzero else 0
        return cls(counts, d_min, 2 * sum(d * c for d, c in enumerate(counts)))

    def n(self, d: int) -> int:
        return self.counts[d]

    def to_csv(self) -> str:
        return "d,count\n" + "".join(f"{d},{c}\n" for d, c in enumerate(self.counts))


def spectrum(code: SefccCode) -> DistanceSpectrum:
    dm = distance_matrix(code)
    iu = np.triu_indices(N_VECTORS, k=1)
    counts = np.bincount(dm[iu], minlength=MAX_DISTANCE + 1)
    # sum_distance is the ordered double sum, i.e. dm.sum()
    return DistanceSpectrum.from_counts(counts)


def parity_bit_counts(code: SefccCode) -> tuple[tuple[int, int], tuple[int, int]]:
    """``((n0, n1) for parity bit 1, (n0, n1) for parity bit 2)`` over all 128 vectors."""
    out = []
    for shift in (1, 0):
        ones = int(((code.full_parity >> shift) & 1).sum())
        out.append((N_VECTORS - ones, ones))
    return tuple(out)


def sum_distance_from_balance(code: SefccCode) -> int:
    return MESSAGE_SUM_DISTANCE + sum(2 * n0 * n1 for n0, n1 in parity_bit_counts(code))


def message_sum_distance() -> int:
    """Brute-force ordered-pair distance total over F_2^7."""
    u = np.arange(N_VECTORS)
    return int(np.bitwise_count(u[:, None] ^ u[None, :]).sum())


def construct_max_sum(
    odd_subset: Sequence[int] = DEFAULT_ODD_SUBSET,
    even_subset: Sequence[int] = DEFAULT_EVEN_SUBSET,
    swap_pair_roles: bool = False,
    g: Distance3Graph | None = None,
) -> ParityAssignment:
    """Bipartition construction with a 4/4 internal split.

    Indices are 0-based codeword indices. Without ``swap_pair_roles`` the
    odd-weight codewords get ``00`` (``odd_subset``) or ``11`` (the rest) and
    the even-weight codewords get ``01`` (``even_subset``) or ``10``. With it,
    the odd side draws from {01, 10} and the even side from {00, 11}.
    """
    g = g or distance3_graph()
    odd, even = set(odd_subset), set(even_subset)
    if len(odd) != 4 or len(odd_subset) != 4:
        raise ValueError(f"odd_subset must have 4 distinct elements, got {sorted(odd_subset)}")
    if len(even) != 4 or len(even_subset) != 4:
        raise ValueError(f"even_subset must have 4 distinct elements, got {sorted(even_subset)}")
    if not odd <= g.partite_odd:
        raise ValueError(f"odd_subset {sorted(odd)} not inside the odd partite set {sorted(g.partite_odd)}")
    if not even <= g.partite_even:
        raise ValueError(f"even_subset {sorted(even)} not inside the even partite set {sorted(g.partite_even)}")

    pair1, pair2 = (0b00, 0b11), (0b01, 0b10)
    odd_pair, even_pair = (pair2, pair1) if swap_pair_roles else (pair1, pair2)
    values = []
    for i in range(g.n_vertices):
        if i in g.partite_odd:
            values.append(odd_pair[0] if i in odd else odd_pair[1])
        else:
            values.append(even_pair[0] if i in even else even_pair[1])
    return ParityAssignment.from_ints(values)


def max_sum_family(g: Distance3Graph | None = None) -> Iterator[tuple[tuple, tuple, bool, ParityAssignment]]:
    """Every ``(odd_subset, even_subset, swap, assignment)`` of the construction."""
    g = g or distance3_graph()
    for swap in (False, True):
        for odd in combinations(sorted(g.partite_odd), 4):
            for even in combinations(sorted(g.partite_even), 4):
                yield odd, even, swap, construct_max_sum(odd, even, swap, g)


@lru_cache(maxsize=4)
def _family_packed(g: Distance3Graph) -> np.ndarray:
    return np.array(sorted(pa.packed for *_, pa in max_sum_family(g)), dtype=np.int64)


def max_sum_family_packed(g: Distance3Graph | None = None) -> np.ndarray:
    """Sorted packed codes of the whole construction family."""
    return _family_packed(g or distance3_graph())


@dataclass(frozen=True)
class BooleanFunction:
    k: int
    truth_table: tuple

    def __post_init__(self):
        if not 1 <= self.k <= 10:
            raise ValueError(f"k must be in 1..10, got {self.k}")
        if len(self.truth_table) != 1 << self.k:
            raise ValueError(f"truth table must have {1 << self.k} entries")
        if set(self.truth_table) - {0, 1}:
            raise ValueError("truth table entries must be 0 or 1")

    @classmethod
    def hcmf(cls, cb: HammingCodebook | None = None) -> "BooleanFunction":
        cb = cb or hamming_codebook()
        return cls(7, tuple(int(s == 0) for s in cb.neighbor_slot))

    def __call__(self, u) -> int:
        return self.truth_table[u.bits if isinstance(u, Word) else int(u)]

    def as_array(self) -> np.ndarray:
        return np.array(self.truth_table, dtype=np.int8)


def construct_optimal_fer(f: BooleanFunction, p: Word) -> np.ndarray:
    """Parity ``p`` on f^-1(0) and its complement on f^-1(1), for all 2^k inputs."""
    if p.length != PARITY_LEN:
        raise ValueError("parity must be a length-2 word")
    comp = p.complement().bits
    return np.where(f.as_array() == 1, comp, p.bits).astype(np.int64)


def optimal_fer_assignment(p: Word, cb: HammingCodebook | None = None) -> ParityAssignment:
    """The codeword parities induced by ``construct_optimal_fer`` for the HCMF."""
    cb = cb or hamming_codebook()
    full = construct_optimal_fer(BooleanFunction.hcmf(cb), p)
    return ParityAssignment.from_ints(full[cb.codeword_ints])


def systematic_encodings(full_parity: np.ndarray, r: int = PARITY_LEN) -> np.ndarray:
    full_parity = np.asarray(full_parity, dtype=np.int64)
    return (np.arange(len(full_parity), dtype=np.int64) << r) | full_parity


def cross_class_min_distance(code, f: BooleanFunction) -> int:
    """Minimum encoding distance over pairs with different function values.

    ``code`` is a SefccCode or an array of systematic encodings indexed by the
    message value.
    """
    enc = np.asarray(getattr(code, "encodings", code), dtype=np.int64)
    vals = f.as_array()
    if len(enc) != len(vals):
        raise ValueError("encoding table and function domain differ in size")
    ones, zeros = enc[vals == 1], enc[vals == 0]
    if len(ones) == 0 or len(zeros) == 0:
        raise ValueError("function is constant; no cross-class pairs")
    return int(np.bitwise_count(ones[:, None] ^ zeros[None, :]).min())


# --- batch helpers -----------------------------------------------------------

_SHIFTS = 2 * (N_CODEWORDS - 1 - np.arange(N_CODEWORDS, dtype=np.int64))


def unpack(packed) -> np.ndarray:
    return (np.asarray(packed, dtype=np.int64)[:, None] >> _SHIFTS) & 3


def pack(parities: np.ndarray) -> np.ndarray:
    return (np.asarray(parities, dtype=np.int64) << _SHIFTS).sum(axis=1)


def full_parity_table(parities: np.ndarray, cb: HammingCodebook | None = None) -> np.ndarray:
    cb = cb or hamming_codebook()
    flip = np.where(cb.neighbor_slot == 0, 0, 3)
    return np.asarray(parities, dtype=np.int64)[:, cb.sphere_index] ^ flip


def batch_is_valid(parities: np.ndarray, g: Distance3Graph | None = None) -> np.ndarray:
    a, b = _edge_arrays(g or distance3_graph())
    return ((parities[:, a] ^ parities[:, b]) != 3).all(axis=1)


def batch_has_dmin_2(parities: np.ndarray, g: Distance3Graph | None = None) -> np.ndarray:
    """Graph criterion only; meaningful for rows that are valid."""
    a, b = _edge_arrays(g or distance3_graph())
    return (parities[:, a] != parities[:, b]).all(axis=1)


def batch_sum_distance(parities: np.ndarray) -> np.ndarray:
    """Sum-distance from parity-bit balance over the induced 128-vector map."""
    total = np.full(len(parities), MESSAGE_SUM_DISTANCE, dtype=np.int64)
    for shift in (1, 0):
        c = ((parities >> shift) & 1).sum(axis=1)
        # a codeword with bit 1 contributes 1 one and 7 zeros, and vice versa
        ones = c + 7 * (N_CODEWORDS - c)
        total += 2 * ones * (N_VECTORS - ones)
    return total


def batch_cross_class_min(parities: np.ndarray, cb: HammingCodebook | None = None) -> np.ndarray:
    """Brute-force HCW/NHCW encoding distance minimum per assignment."""
    cb = cb or hamming_codebook()
    full = full_parity_table(parities, cb)
    enc = (np.arange(N_VECTORS, dtype=np.int64) << PARITY_LEN) | full
    members = cb.neighbor_slot == 0
    enc = enc.astype(np.uint16)
    hcw, nhcw = enc[:, members], enc[:, ~members]
    return np.bitwise_count(hcw[:, :, None] ^ nhcw[:, None, :]).min(axis=(1, 2))


def batch_spectra_direct(parities: np.ndarray, cb: HammingCodebook | None = None) -> np.ndarray:
    """Unordered-pair spectra ``(B, 10)`` from explicit 128x128 distance matrices."""
    cb = cb or hamming_codebook()
    out = np.zeros((len(parities), MAX_DISTANCE + 1), dtype=np.int64)
    iu = np.triu_indices(N_VECTORS, k=1)
    for start in range(0, len(parities), 256):
        full = full_parity_table(parities[start:start + 256], cb)
        enc = (np.arange(N_VECTORS, dtype=np.int64) << PARITY_LEN) | full
        d = np.bitwise_count(enc[:, iu[0]] ^ enc[:, iu[1]])
        for row, dist in enumerate(d):
            out[start + row] = np.bincount(dist, minlength=MAX_DISTANCE + 1)
    return out


@lru_cache(maxsize=2)
def _sphere_pair_weights(cb: HammingCodebook) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Ordered-pair distance counts for each unordered sphere pair and parity distance.

    Row ``3 * pair + q`` holds the counts contributed by spheres ``(i, k)``
    when their centre parities are ``q`` apart. Off-centre vectors carry the
    complemented parity, so a centre/off-centre pair is ``2 - q`` apart.
    """
    u = np.arange(N_VECTORS)
    sph = np.asarray(cb.sphere_index)
    off = (np.asarray(cb.neighbor_slot) != 0).astype(np.int64)
    md = np.bitwise_count(u[:, None] ^ u[None, :])
    pi, pk = np.triu_indices(N_CODEWORDS)
    weights = np.zeros((len(pi), 3, MAX_DISTANCE + 1), dtype=np.float32)
    for row, (i, k) in enumerate(zip(pi, pk)):
        su, sv = np.flatnonzero(sph == i), np.flatnonzero(sph == k)
        flip = off[su][:, None] ^ off[sv][None, :]
        m = md[np.ix_(su, sv)]
        for q in range(3):
            d = m + np.where(flip == 1, 2 - q, q)
            weights[row, q] = np.bincount(d.ravel(), minlength=MAX_DISTANCE + 1) * (1 if i == k else 2)
    return pi, pk, weights.reshape(-1, MAX_DISTANCE + 1)


def batch_spectra(parities: np.ndarray, cb: HammingCodebook | None = None, chunk: int = 32768) -> np.ndarray:
    """Unordered-pair spectra ``(B, 10)`` by aggregating over sphere pairs.

    The parity distance between two vectors depends only on their spheres and
    whether each is a centre, so the 128x128 matrix collapses to a one-hot of
    centre-parity distances per sphere pair times a fixed weight table.
    """
    cb = cb or hamming_codebook()
    pi, pk, weights = _sphere_pair_weights(cb)
    parities = np.asarray(parities, dtype=np.uint8)
    out = np.zeros((len(parities), MAX_DISTANCE + 1), dtype=np.int64)
    levels = np.arange(3, dtype=np.uint8)
    for start in range(0, len(parities), chunk):
        p = parities[start:start + chunk]
        q = np.bitwise_count(p[:, pi] ^ p[:, pk])
        onehot = (q[:, :, None] == levels).reshape(len(p), -1).astype(np.float32)
        ordered = np.rint(onehot @ weights).astype(np.int64)
        ordered[:, 0] -= N_VECTORS
        out[start:start + chunk] = ordered // 2
    return out


def spectrum_dmin(counts: np.ndarray) -> np.ndarray:
    """Row-wise smallest distance with a non-zero count."""
    counts = np.asarray(counts)
    return np.argmax(counts > 0, axis=1)
