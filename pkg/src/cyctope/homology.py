"""Integer chain complexes of truncated nerves and their homology.

All arithmetic is on Python ints, so intermediate growth during
elimination never overflows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

from .category import TruncatedNerve
from .config import limits
from .errors import InputError, InternalError, ResourceError, TruncationError


@dataclass(frozen=True)
class IntMatrix:
    """Sparse integer matrix; ``entries`` omits zeros."""

    nrows: int
    ncols: int
    entries: dict = field(default_factory=dict)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise InputError("ragged matrix")
        ent = {(i, j): int(v) for i, r in enumerate(rows) for j, v in enumerate(r) if v}
        return cls(len(rows), ncols, ent)

    def to_rows(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.ncols != other.nrows:
            raise InputError("shape mismatch")
        by_row: dict[int, list] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        acc: dict = {}
        for (i, k), u in self.entries.items():
            for j, v in by_row.get(k, ()):
                acc[(i, j)] = acc.get((i, j), 0) + u * v
        return IntMatrix(self.nrows, other.ncols, {key: v for key, v in acc.items() if v})

    def is_zero(self) -> bool:
        return not self.entries


@dataclass(frozen=True)
class SnfResult:
    """Invariant factors ``d_1 | d_2 | ... | d_r`` (all positive) of a matrix of rank ``r``."""

    diagonal: tuple
    shape: tuple = (0, 0)

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def _as_matrix(M) -> IntMatrix:
    if isinstance(M, IntMatrix):
        return M
    return IntMatrix.from_rows(M)


def smith_normal_form(M) -> SnfResult:
    """Invariant factors by unimodular row and column elimination.

    Each round picks the nonzero entry of least absolute value as pivot
    (ties broken by position), clears its column with row operations and
    then its row with column operations. A nonzero remainder is smaller
    than the pivot, so the next round restarts from it. Once every pivot
    is isolated the diagonal is normalized into a divisibility chain with
    ``(a, b) -> (gcd, lcm)`` steps.
    """
    M = _as_matrix(M)
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for (i, j), v in M.entries.items():
        rows.setdefault(i, {})[j] = v
        cols.setdefault(j, set()).add(i)

    def set_entry(i, j, v):
        if v:
            rows.setdefault(i, {})[j] = v
            cols.setdefault(j, set()).add(i)
        else:
            r = rows.get(i)
            if r is not None and j in r:
                del r[j]
                if not r:
                    del rows[i]
                cols[j].discard(i)
                if not cols[j]:
                    del cols[j]

    diag = []
    while rows:
        p_abs, r, c = min((abs(v), i, j) for i, row in rows.items() for j, v in row.items())
        pv = rows[r][c]
        # clear column c below/above the pivot with row operations
        for i in sorted(cols[c] - {r}):
            q = rows[i][c] // pv
            for j, v in list(rows[r].items()):
                set_entry(i, j, rows.get(i, {}).get(j, 0) - q * v)
        if cols[c] != {r}:
            continue
        # column c now holds only the pivot, so column operations touch row r alone
        for j in sorted(set(rows[r]) - {c}):
            set_entry(r, j, rows[r][j] - (rows[r][j] // pv) * pv)
        if set(rows[r]) != {c}:
            continue
        diag.append(p_abs)
        set_entry(r, c, 0)

    diag.sort()
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            a, b = diag[i], diag[j]
            if b % a:
                g = gcd(a, b)
                diag[i], diag[j] = g, a * b // g
    return SnfResult(tuple(diag), (M.nrows, M.ncols))


@dataclass(frozen=True)
class HomologyGroup:
    betti: int
    torsion: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        t = self.torsion
        if self.betti < 0 or any(x <= 1 for x in t) or any(b % a for a, b in zip(t, t[1:])):
            raise InputError(f"not a valid abelian group description: {self!r}")

    @property
    def is_zero(self) -> bool:
        return self.betti == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.betti:
            parts.append("Z" if self.betti == 1 else f"Z^{self.betti}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"


class ChainComplex:
    """``ranks[k]`` generators in degree ``k``; ``boundaries[k]`` is the map to degree ``k-1``.

    ``boundaries[0]`` is the zero map to the zero group. The complex is
    only trusted up to degree ``dim - 1`` (see :func:`homology`).
    """

    def __init__(self, ranks: Sequence[int], boundaries: Sequence[IntMatrix]):
        self.ranks = tuple(ranks)
        self.boundaries = tuple(boundaries)
        if len(self.boundaries) != len(self.ranks):
            raise InputError("need one boundary map per degree")
        for k, B in enumerate(self.boundaries):
            below = self.ranks[k - 1] if k else 0
            if (B.nrows, B.ncols) != (below, self.ranks[k]):
                raise InputError(f"boundary {k} has shape {(B.nrows, B.ncols)}, expected {(below, self.ranks[k])}")
        self._snf: dict[int, SnfResult] = {}

    @property
    def dim(self) -> int:
        return len(self.ranks) - 1

    def snf(self, k: int) -> SnfResult:
        if k not in self._snf:
            self._snf[k] = smith_normal_form(self.boundaries[k])
        return self._snf[k]

    def boundary_squares_vanish(self) -> bool:
        return all((self.boundaries[k - 1] @ self.boundaries[k]).is_zero() for k in range(2, self.dim + 1))


def boundary_complex(nv: TruncatedNerve) -> ChainComplex:
    """Normalized chain complex: ``∂ s = Σ (-1)^i d_i s`` with degenerate faces dropped."""
    ranks = nv.counts()
    if sum(ranks) > limits.max_cells:
        raise ResourceError(f"complex exceeds the cell cap ({sum(ranks)} > {limits.max_cells})")
    bds = [IntMatrix(0, ranks[0])]
    for k in range(1, nv.max_dim + 1):
        ent: dict = {}
        for s, row in enumerate(nv.faces[k]):
            for i, f in enumerate(row):
                if f is None:
                    continue
                key = (f, s)
                ent[key] = ent.get(key, 0) + (-1 if i % 2 else 1)
        bds.append(IntMatrix(ranks[k - 1], ranks[k], {key: v for key, v in ent.items() if v}))
    cx = ChainComplex(ranks, bds)
    if not cx.boundary_squares_vanish():
        raise InternalError("boundary of a boundary is nonzero; the nerve face tables are inconsistent")
    return cx


def _require(cx: ChainComplex, k: int):
    if not isinstance(k, int) or k < 0:
        raise InputError(f"degree must be a nonnegative integer, got {k!r}")
    if k + 1 > cx.dim:
        raise TruncationError(f"H_{k} needs the complex up to degree {k + 1}; it stops at {cx.dim}")


def homology(cx: ChainComplex, k: int) -> HomologyGroup:
    _require(cx, k)
    rank_out = cx.snf(k).rank if k else 0
    incoming = cx.snf(k + 1)
    return HomologyGroup(cx.ranks[k] - rank_out - incoming.rank,
                         tuple(d for d in incoming.diagonal if d > 1))


def homology_table(cx: ChainComplex, degrees: Iterable[int]) -> list[dict]:
    return [homology_report(cx, k) for k in degrees]


def homology_report(cx: ChainComplex, k: int) -> dict:
    H = homology(cx, k)
    return {"degree": k, "betti": H.betti, "torsion": list(H.torsion), "truncation_dim": cx.dim}


def reduced_homology_vanishes(cx: ChainComplex, up_to_k: int) -> bool:
    """True iff reduced homology is zero in degrees ``0 .. up_to_k`` (empty complexes fail)."""
    _require(cx, up_to_k)
    if cx.ranks[0] == 0:
        return False
    H0 = homology(cx, 0)
    if H0.betti != 1 or H0.torsion:
        return False
    return all(homology(cx, k).is_zero for k in range(1, up_to_k + 1))
