"""Sparse linear algebra over GF(2) and bigraded homology.

Vectors are Python ints used as bitsets (bit i = coordinate i).  Matrices
store one bitset per column; the set-of-pairs view is available through
``F2Matrix.entries``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Sequence

__all__ = [
    "F2Matrix",
    "RankResult",
    "rref_rank",
    "rank",
    "ChainComplex",
    "SlicedComplex",
    "WindowNotClosed",
    "NotADifferential",
    "betti",
    "bits",
    "vec_from_indices",
    "map_cone_acyclic",
]

Bideg = tuple[int, int]


class WindowNotClosed(Exception):
    """A bidegree next to the requested window has no known basis."""


class NotADifferential(Exception):
    """d o d is nonzero somewhere."""


def bits(v: int) -> list[int]:
    """Indices of the set bits of ``v`` in increasing order."""
    out = []
    while v:
        low = v & -v
        out.append(low.bit_length() - 1)
        v ^= low
    return out


def vec_from_indices(idx: Iterable[int]) -> int:
    v = 0
    for i in idx:
        v ^= 1 << i
    return v


@dataclass(frozen=True)
class F2Matrix:
    rows: int
    cols: int
    columns: tuple[int, ...]

    def __post_init__(self):
        if len(self.columns) != self.cols:
            raise ValueError("column count mismatch")
        bound = 1 << self.rows
        for c in self.columns:
            if c < 0 or c >= bound:
                raise ValueError("entry out of bounds")

    @classmethod
    def from_pairs(cls, rows: int, cols: int, pairs: Iterable[tuple[int, int]]) -> "F2Matrix":
        colv = [0] * cols
        seen = set()
        for r, c in pairs:
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"entry {(r, c)} out of bounds")
            if (r, c) in seen:
                raise ValueError(f"duplicate entry {(r, c)}")
            seen.add((r, c))
            colv[c] |= 1 << r
        return cls(rows, cols, tuple(colv))

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]) -> "F2Matrix":
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        return cls.from_pairs(nr, nc, [(i, j) for i, row in enumerate(rows) for j, x in enumerate(row) if x % 2])

    @classmethod
    def zero(cls, rows: int, cols: int) -> "F2Matrix":
        return cls(rows, cols, (0,) * cols)

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @property
    def entries(self) -> frozenset[tuple[int, int]]:
        return frozenset((r, c) for c, v in enumerate(self.columns) for r in bits(v))

    def to_dense(self) -> list[list[int]]:
        return [[(self.columns[c] >> r) & 1 for c in range(self.cols)] for r in range(self.rows)]

    def transpose(self) -> "F2Matrix":
        rowv = [0] * self.rows
        for c, v in enumerate(self.columns):
            for r in bits(v):
                rowv[r] |= 1 << c
        return F2Matrix(self.cols, self.rows, tuple(rowv))

    def apply(self, v: int) -> int:
        out = 0
        for c in bits(v):
            out ^= self.columns[c]
        return out

    def __matmul__(self, other: "F2Matrix") -> "F2Matrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        return F2Matrix(self.rows, other.cols, tuple(self.apply(v) for v in other.columns))

    def is_zero(self) -> bool:
        return not any(self.columns)


@dataclass(frozen=True)
class RankResult:
    rank: int
    kernel: tuple[int, ...]
    image: tuple[int, ...]


def rref_rank(m: F2Matrix) -> RankResult:
    """Rank, a kernel basis and an image basis of ``m``.

    Columns are processed left to right; a column whose reduced value is
    nonzero becomes a pivot at its lowest (topmost) set row.  Kernel vectors
    record which input columns combine to zero, so they are canonical for a
    fixed input.
    """
    pivots: dict[int, tuple[int, int]] = {}  # pivot row -> (reduced column, combination)
    kernel = []
    image = []
    for j, col in enumerate(m.columns):
        v, comb = col, 1 << j
        while v:
            low = (v & -v).bit_length() - 1
            hit = pivots.get(low)
            if hit is None:
                break
            v ^= hit[0]
            comb ^= hit[1]
        if v:
            pivots[(v & -v).bit_length() - 1] = (v, comb)
            image.append(col)
        else:
            kernel.append(comb)
    return RankResult(len(pivots), tuple(kernel), tuple(image))


def rank(columns: Iterable[int]) -> int:
    """Rank of a family of bitset vectors (no kernel bookkeeping)."""
    pivots: dict[int, int] = {}
    for v in columns:
        while v:
            low = (v & -v).bit_length() - 1
            p = pivots.get(low)
            if p is None:
                pivots[low] = v
                break
            v ^= p
    return len(pivots)


class SlicedComplex:
    """A bigraded complex given slice by slice.

    ``basis(b)`` returns the ordered basis keys in bidegree ``b`` or ``None``
    when unknown; ``d(b)`` returns the matrix from slice ``b`` to slice
    ``(b[0] + 1, b[1])``.
    """

    def basis(self, b: Bideg) -> Sequence[Hashable] | None:  # pragma: no cover - interface
        raise NotImplementedError

    def d(self, b: Bideg) -> F2Matrix:  # pragma: no cover - interface
        raise NotImplementedError


@dataclass
class ChainComplex(SlicedComplex):
    """Finite bigraded complex: basis with bidegrees plus differentials.

    ``differentials[(i, j)]`` maps slice (i, j) to slice (i + 1, j).  Missing
    entries are zero.  ``known`` optionally lists bidegrees outside the
    support that are certified empty; ``None`` means every bidegree is known
    (the basis is exhaustive).
    """

    basis_list: list[tuple[Hashable, Bideg]]
    differentials: dict[Bideg, F2Matrix] = field(default_factory=dict)
    known: frozenset[Bideg] | None = None
    check: bool = True

    def __post_init__(self):
        self._slices: dict[Bideg, list[Hashable]] = {}
        for key, bd in self.basis_list:
            self._slices.setdefault(tuple(bd), []).append(key)
        for b, m in self.differentials.items():
            src = len(self._slices.get(b, ()))
            tgt = len(self._slices.get((b[0] + 1, b[1]), ()))
            if m.cols != src or m.rows != tgt:
                raise ValueError(f"differential at {b} has shape {m.rows}x{m.cols}, expected {tgt}x{src}")
        if self.check:
            self.check_d_squared()

    def bidegrees(self) -> list[Bideg]:
        return sorted(self._slices)

    def basis(self, b: Bideg):
        b = tuple(b)
        if b in self._slices:
            return self._slices[b]
        if self.known is None or b in self.known:
            return []
        return None

    def d(self, b: Bideg) -> F2Matrix:
        b = tuple(b)
        m = self.differentials.get(b)
        if m is None:
            return F2Matrix.zero(len(self._slices.get((b[0] + 1, b[1]), ())), len(self._slices.get(b, ())))
        return m

    def check_d_squared(self):
        for b, m in self.differentials.items():
            nxt = self.differentials.get((b[0] + 1, b[1]))
            if nxt is not None and not (nxt @ m).is_zero():
                raise NotADifferential(f"d o d != 0 starting at bidegree {b}")

    @classmethod
    def from_differential(cls, elements: Mapping[Hashable, Bideg], dfun: Callable[[Hashable], Iterable[Hashable]],
                          check: bool = True) -> "ChainComplex":
        """Build from a basis with bidegrees and a function giving d(element)."""
        keys = sorted(elements, key=lambda k: (elements[k], repr(k)))
        slices: dict[Bideg, list] = {}
        for k in keys:
            slices.setdefault(tuple(elements[k]), []).append(k)
        index = {k: i for sl in slices.values() for i, k in enumerate(sl)}
        diffs = {}
        for b, sl in slices.items():
            tb = (b[0] + 1, b[1])
            cols = []
            for k in sl:
                v = 0
                for t in dfun(k):
                    if t not in index or tuple(elements[t]) != tb:
                        raise ValueError(f"d({k!r}) leaves the basis or has the wrong bidegree: {t!r}")
                    v ^= 1 << index[t]
                cols.append(v)
            diffs[b] = F2Matrix(len(slices.get(tb, ())), len(sl), tuple(cols))
        basis_list = [(k, b) for b, sl in slices.items() for k in sl]
        return cls(basis_list, diffs, check=check)


def betti(c: SlicedComplex, window: Iterable[Bideg]) -> dict[Bideg, int]:
    """dim ker(d) - rank(d_incoming) for every bidegree of ``window``."""
    out = {}
    for b in sorted(set(tuple(x) for x in window)):
        here = c.basis(b)
        prev = c.basis((b[0] - 1, b[1]))
        nxt = c.basis((b[0] + 1, b[1]))
        for nb, val in ((b, here), ((b[0] - 1, b[1]), prev), ((b[0] + 1, b[1]), nxt)):
            if val is None:
                raise WindowNotClosed(f"basis at {nb} is unknown")
        if not here:
            out[b] = 0
            continue
        r_out = rank(c.d(b).columns) if nxt else 0
        r_in = rank(c.d((b[0] - 1, b[1])).columns) if prev else 0
        out[b] = len(here) - r_out - r_in
    return out


def map_cone_acyclic(src: Mapping[Hashable, Bideg], tgt: Mapping[Hashable, Bideg], dsrc: Callable, dtgt: Callable,
                     fmap: Callable) -> bool:
    """Mapping cone of a chain map f : src -> tgt (source shifted down by
    one) is acyclic, i.e. f is a quasi-isomorphism.  Terms of dsrc leaving
    ``src`` are dropped (truncated sources)."""
    elems = {(0, u): (b[0] - 1, b[1]) for u, b in src.items()}
    elems.update({(1, v): tuple(b) for v, b in tgt.items()})

    def d(e):
        tag, u = e
        acc: set = set()
        if tag == 0:
            acc ^= {(0, z) for z in dsrc(u) if z in src}
            acc ^= {(1, z) for z in fmap(u)}
        else:
            acc ^= {(1, z) for z in dtgt(u)}
        return acc

    cc = ChainComplex.from_differential(elems, d)
    return all(v == 0 for v in betti(cc, cc.bidegrees()).values())
