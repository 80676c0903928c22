"""Binary words, the systematic [7,4,3] Hamming code and its distance-3 graph.

Words are stored as plain integers with an explicit length. Coordinate 1 is
the most significant bit, so the integer value of a word is its position in
natural binary counting order and ``str(word)`` reads left to right as
coordinates 1..n.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

MIN_LEN = 2
MAX_LEN = 9

# popcount lookup for every 9-bit value
POPCOUNT = np.array([bin(v).count("1") for v in range(1 << MAX_LEN)], dtype=np.int8)


@dataclass(frozen=True, order=True)
class Word:
    bits: int
    length: int

    def __post_init__(self):
        if not MIN_LEN <= self.length <= MAX_LEN:
            raise ValueError(f"word length must be in {MIN_LEN}..{MAX_LEN}, got {self.length}")
        if not 0 <= self.bits < (1 << self.length):
            raise ValueError(f"bits {self.bits} do not fit in {self.length} coordinates")

    @classmethod
    def from_str(cls, text: str) -> "Word":
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"not a binary string: {text!r}")
        return cls(int(text, 2), len(text))

    def __str__(self) -> str:
        return format(self.bits, f"0{self.length}b")

    def __xor__(self, other: "Word") -> "Word":
        _check_same_length(self, other)
        return Word(self.bits ^ other.bits, self.length)

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def complement(self) -> "Word":
        return Word(self.bits ^ ((1 << self.length) - 1), self.length)

    def coordinate(self, j: int) -> int:
        """Value of coordinate ``j`` (1-based, left to right)."""
        if not 1 <= j <= self.length:
            raise IndexError(j)
        return (self.bits >> (self.length - j)) & 1

    def concat(self, other: "Word") -> "Word":
        return Word((self.bits << other.length) | other.bits, self.length + other.length)


def _check_same_length(x: Word, y: Word) -> None:
    if x.length != y.length:
        raise ValueError(f"length mismatch: {x.length} vs {y.length}")


def hamming_distance(x: Word, y: Word) -> int:
    _check_same_length(x, y)
    return (x.bits ^ y.bits).bit_count()


def _parity_bits(m: int) -> int:
    m1, m2, m3, m4 = (m >> 3) & 1, (m >> 2) & 1, (m >> 1) & 1, m & 1
    p1 = m2 ^ m3 ^ m4
    p2 = m1 ^ m3 ^ m4
    p3 = m1 ^ m2 ^ m4
    return (p1 << 2) | (p2 << 1) | p3


def encode_hamming(m: Word) -> Word:
    """Systematic encoding ``[m1..m4, p1, p2, p3]`` of a 4-bit message."""
    if m.length != 4:
        raise ValueError(f"Hamming messages have length 4, got {m.length}")
    return Word((m.bits << 3) | _parity_bits(m.bits), 7)


# rows are the three parity equations written over coordinates 1..7
PARITY_CHECK = np.array(
    [
        [0, 1, 1, 1, 1, 0, 0],
        [1, 0, 1, 1, 0, 1, 0],
        [1, 1, 0, 1, 0, 0, 1],
    ],
    dtype=np.uint8,
)


def _syndrome(v: int) -> int:
    bits = (v >> (6 - np.arange(7))) & 1
    s = PARITY_CHECK.astype(int) @ bits % 2
    return int(s[0] << 2 | s[1] << 1 | s[2])


class HammingCodebook:
    """The 16 codewords of the systematic [7,4,3] code plus lookup tables.

    ``sphere_index[v]`` is the index of the codeword within distance one of
    ``v`` and ``neighbor_slot[v]`` is 0 when ``v`` is that codeword, otherwise
    the (1-based) coordinate in which they differ. Codeword ``i`` is the
    encoding of the message whose integer value is ``i``.
    """

    n = 7
    k = 4
    size = 16

    def __init__(self):
        self.codewords = tuple(encode_hamming(Word(m, 4)) for m in range(16))
        self.parity_check = PARITY_CHECK.copy()
        self.parity_check.setflags(write=False)

        # column of H for each coordinate, as a 3-bit syndrome value
        column = {}
        for j in range(7):
            s = int(self.parity_check[0, j]) << 2 | int(self.parity_check[1, j]) << 1 | int(self.parity_check[2, j])
            column[s] = j + 1

        sphere = np.empty(128, dtype=np.int64)
        slot = np.empty(128, dtype=np.int64)
        for v in range(128):
            s = _syndrome(v)
            j = column.get(s, 0)
            centre = v ^ (1 << (7 - j)) if j else v
            sphere[v] = centre >> 3
            slot[v] = j
        sphere.setflags(write=False)
        slot.setflags(write=False)
        self.sphere_index = sphere
        self.neighbor_slot = slot
        self.codeword_ints = np.array([c.bits for c in self.codewords], dtype=np.int64)
        self.codeword_ints.setflags(write=False)

    def syndrome(self, v: Word) -> int:
        _require_len7(v)
        return _syndrome(v.bits)

    def is_member(self, v: Word) -> int:
        _require_len7(v)
        return int(self.neighbor_slot[v.bits] == 0)

    def nearest_codeword(self, v: Word) -> tuple[int, int]:
        _require_len7(v)
        return int(self.sphere_index[v.bits]), int(self.neighbor_slot[v.bits])

    def sphere(self, i: int) -> list[Word]:
        return [Word(v, 7) for v in range(128) if self.sphere_index[v] == i]

    def weight_enumerator(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for c in self.codewords:
            counts[c.weight] = counts.get(c.weight, 0) + 1
        return dict(sorted(counts.items()))

    def table(self) -> str:
        """16-row text table: index (1-based), message, codeword, weight."""
        lines = ["index message codeword weight"]
        for i, c in enumerate(self.codewords):
            lines.append(f"{i + 1:>5} {str(Word(i, 4)):>7} {str(c):>8} {c.weight:>6}")
        return "\n".join(lines) + "\n"


def _require_len7(v: Word) -> None:
    if v.length != 7:
        raise ValueError(f"expected a length-7 word, got length {v.length}")


@lru_cache(maxsize=None)
def hamming_codebook() -> HammingCodebook:
    return HammingCodebook()


def is_member(v: Word) -> int:
    """Hamming-code membership function: 1 for the 16 codewords, 0 otherwise."""
    return hamming_codebook().is_member(v)


def nearest_codeword(v: Word) -> tuple[int, int]:
    return hamming_codebook().nearest_codeword(v)


@dataclass(frozen=True)
class Distance3Graph:
    """Codewords as vertices (0-based), edges between pairs at distance 3."""

    edges: frozenset
    partite_odd: frozenset
    partite_even: frozenset
    n_vertices: int = 16

    def neighbors(self, i: int) -> list[int]:
        out = []
        for a, b in self.edges:
            if a == i:
                out.append(b)
            elif b == i:
                out.append(a)
        return sorted(out)

    def degree(self, i: int) -> int:
        return len(self.neighbors(i))

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def is_bipartition(self) -> bool:
        return all((a in self.partite_odd) != (b in self.partite_odd) for a, b in self.edges)

    def without_edge(self, edge: tuple[int, int]) -> "Distance3Graph":
        """Copy with one edge deleted; the partite sets are kept as-is."""
        e = tuple(sorted(edge))
        if e not in self.edges:
            raise ValueError(f"{e} is not an edge")
        return Distance3Graph(self.edges - {e}, self.partite_odd, self.partite_even, self.n_vertices)


def distance3_graph(cb: HammingCodebook | None = None) -> Distance3Graph:
    cb = cb or hamming_codebook()
    edges = frozenset(
        (i, k)
        for i, k in combinations(range(cb.size), 2)
        if hamming_distance(cb.codewords[i], cb.codewords[k]) == 3
    )
    odd = frozenset(i for i, c in enumerate(cb.codewords) if c.weight % 2)
    even = frozenset(range(cb.size)) - odd
    return Distance3Graph(edges, odd, even, cb.size)
