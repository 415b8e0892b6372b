"""Index set of the anisotropic frame: coarse translates and sheared cone atoms.

A cone index carries (cone, j, l, k): the cone axis ``cone`` in 1..d, the
scale ``j >= 0``, a shear vector ``l`` of length d-1 with ``|l_i| <= 2**j``,
and an integer translate ``k`` of length d.  A coarse index carries only the
translate.  Indices are value objects with a total order so that every
iteration in the package is deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

COARSE = "coarse"
CONE = "cone"


@dataclass(frozen=True, order=False)
class ShearIndex:
    """Address of one frame atom / one sheared cube."""

    kind: str
    cone: int  # 1..d for cone indices, 0 for coarse
    j: int
    l: tuple[int, ...]
    k: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in (COARSE, CONE):
            raise ValueError(f"unknown index kind {self.kind!r}")
        if self.kind == CONE:
            d = len(self.k)
            if not 1 <= self.cone <= d:
                raise ValueError(f"cone axis {self.cone} out of range for d={d}")
            if len(self.l) != d - 1:
                raise ValueError("shear vector must have length d-1")
            if self.j < 0:
                raise ValueError("scale must be nonnegative")
            bound = 2 ** self.j
            if any(abs(li) > bound for li in self.l):
                raise ValueError(f"shear {self.l} exceeds bound 2^{self.j}")
        else:
            if self.cone != 0 or self.j != 0 or self.l != ():
                raise ValueError("coarse index carries only a translate")

    @property
    def d(self) -> int:
        return len(self.k)

    def sort_key(self):
        # coarse block first, then (cone, j, l, k) lexicographically
        if self.kind == COARSE:
            return (0, 0, 0, (), self.k)
        return (1, self.cone, self.j, self.l, self.k)

    def __lt__(self, other: "ShearIndex") -> bool:
        return self.sort_key() < other.sort_key()

    def measure(self) -> Fraction:
        """Exact cube measure 2^{-(d+1)j}; coarse translates count as scale 0."""
        if self.kind == COARSE:
            return Fraction(1)
        return Fraction(1, 2 ** ((self.d + 1) * self.j))

    def __repr__(self):
        if self.kind == COARSE:
            return f"coarse{self.k}"
        return f"cone(d{self.cone},j{self.j},l{self.l},k{self.k})"


def coarse_index(k: Sequence[int]) -> ShearIndex:
    return ShearIndex(COARSE, 0, 0, (), tuple(int(x) for x in k))


def cone_index(cone: int, j: int, l, k: Sequence[int]) -> ShearIndex:
    if isinstance(l, int):
        l = (l,)
    return ShearIndex(CONE, int(cone), int(j), tuple(int(x) for x in l),
                      tuple(int(x) for x in k))


class IndexSet:
    """Finite, duplicate-free, deterministically ordered set of indices."""

    def __init__(self, indices: Iterable[ShearIndex] = ()):
        self._indices = tuple(sorted(set(indices)))

    @property
    def indices(self) -> tuple[ShearIndex, ...]:
        return self._indices

    def __iter__(self) -> Iterator[ShearIndex]:
        return iter(self._indices)

    def __len__(self) -> int:
        return len(self._indices)

    def __contains__(self, idx: ShearIndex) -> bool:
        return idx in set(self._indices)

    def __eq__(self, other) -> bool:
        return isinstance(other, IndexSet) and self._indices == other._indices

    def __hash__(self):
        return hash(self._indices)

    def union(self, other: "IndexSet") -> "IndexSet":
        return IndexSet(self._indices + other.indices)

    def without(self, drop: Iterable[ShearIndex]) -> "IndexSet":
        dropset = set(drop)
        return IndexSet(i for i in self._indices if i not in dropset)

    def __repr__(self):
        return f"IndexSet({len(self._indices)} indices)"


# ---------------------------------------------------------------------------
# line-oriented text serialization:
#   C k1 .. kd
#   S cone j l1 .. l(d-1) k1 .. kd
# ---------------------------------------------------------------------------

def format_index(idx: ShearIndex) -> str:
    if idx.kind == COARSE:
        return "C " + " ".join(str(x) for x in idx.k)
    parts = ["S", str(idx.cone), str(idx.j)]
    parts += [str(x) for x in idx.l]
    parts += [str(x) for x in idx.k]
    return " ".join(parts)


def parse_index(line: str, d: int = 2) -> ShearIndex:
    tok = line.split()
    if not tok:
        raise ValueError("empty index line")
    if tok[0] == "C":
        if len(tok) != 1 + d:
            raise ValueError(f"coarse index needs {d} translate entries: {line!r}")
        return coarse_index([int(x) for x in tok[1:]])
    if tok[0] == "S":
        if len(tok) != 3 + (d - 1) + d:
            raise ValueError(f"cone index needs cone, j, {d-1} shears, {d} translates: {line!r}")
        cone = int(tok[1])
        j = int(tok[2])
        l = [int(x) for x in tok[3:3 + d - 1]]
        k = [int(x) for x in tok[3 + d - 1:]]
        return cone_index(cone, j, l, k)
    raise ValueError(f"unknown index tag {tok[0]!r}")


def dump_index_set(indices: Iterable[ShearIndex]) -> str:
    return "\n".join(format_index(i) for i in sorted(indices)) + "\n"


def load_index_set(text: str, d: int = 2) -> IndexSet:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    return IndexSet(parse_index(ln, d) for ln in lines)
