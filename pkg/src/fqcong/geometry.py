"""Vectors in F_q^d: dot product, distance sets, spheres, span dimension.

Vectors are integer codes in ``[0, q^d)``: the code is read base-q
little-endian, each digit an element code of the underlying field.  A
:class:`Space` caches subtraction / dot-product tables so that the hot
counting loops elsewhere reduce to list indexing.

Also home to the exact linear algebra everything else leans on: reduced
row echelon form, rank, and null spaces over the field, all deterministic
(first-nonzero-pivot tie-breaking).
"""

from __future__ import annotations

from functools import lru_cache
from pathlib import Path

import numpy as np

from .gfarith import Field

__all__ = [
    "Space",
    "PointSet",
    "rref",
    "rank",
    "right_nullspace",
    "left_nullspace",
    "load_set_file",
    "save_set_file",
]

# Indicator bitmaps and full pairwise tables are only sensible up to here.
_BITMAP_MAX_SIZE = 1 << 24


# -- exact linear algebra over a Field --------------------------------------

def rref(field: Field, rows) -> tuple[tuple[int, ...], ...]:
    """Reduced row echelon form; zero rows dropped.  Unique canonical form."""
    m = [list(r) for r in rows]
    if not m:
        return ()
    ncols = len(m[0])
    pivot_row = 0
    for col in range(ncols):
        pr = None
        for r in range(pivot_row, len(m)):
            if m[r][col] != 0:
                pr = r
                break
        if pr is None:
            continue
        m[pivot_row], m[pr] = m[pr], m[pivot_row]
        inv = field.inv(m[pivot_row][col])
        m[pivot_row] = [field.mul(inv, x) for x in m[pivot_row]]
        for r in range(len(m)):
            if r != pivot_row and m[r][col] != 0:
                c = m[r][col]
                m[r] = [field.sub(x, field.mul(c, y))
                        for x, y in zip(m[r], m[pivot_row])]
        pivot_row += 1
        if pivot_row == len(m):
            break
    return tuple(tuple(r) for r in m[:pivot_row] if any(r))


def rank(field: Field, rows) -> int:
    return len(rref(field, rows))


def pivot_columns(rows) -> tuple[int, ...]:
    """Pivot column indices of an RREF matrix."""
    pivots = []
    for r in rows:
        for j, x in enumerate(r):
            if x != 0:
                pivots.append(j)
                break
    return tuple(pivots)


def right_nullspace(field: Field, rows) -> tuple[tuple[int, ...], ...]:
    """RREF basis of {c : rows @ c = 0}, c a column vector of length ncols."""
    rows = [tuple(r) for r in rows]
    if not rows:
        return ()
    ncols = len(rows[0])
    red = rref(field, rows)
    pivots = pivot_columns(red)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for i, pc in enumerate(pivots):
            v[pc] = field.neg(red[i][f])
        basis.append(v)
    return rref(field, basis)


def left_nullspace(field: Field, rows) -> tuple[tuple[int, ...], ...]:
    """RREF basis of {c : c @ rows = 0} (dependencies among the rows)."""
    if not rows:
        return ()
    transposed = list(zip(*rows))
    return right_nullspace(field, transposed)


# -- the ambient space -------------------------------------------------------

class Space:
    """F_q^d with the standard dot product, over integer vector codes."""

    def __init__(self, field: Field, d: int):
        if d < 0:
            raise ValueError(f"dimension {d} must be >= 0")
        self.field = field
        self.d = d
        self.size = field.q**d
        q = field.q
        self._powers = [q**i for i in range(d)]
        self.coords: list[tuple[int, ...]] = [
            self._decode(v) for v in range(self.size)]
        self._sub_table: list[list[int]] | None = None
        self._dot_table: list[list[int]] | None = None
        self._norms: list[int] | None = None

    def _decode(self, code: int) -> tuple[int, ...]:
        q = self.field.q
        out = []
        for _ in range(self.d):
            code, r = divmod(code, q)
            out.append(r)
        return tuple(out)

    def encode(self, coords) -> int:
        coords = tuple(coords)
        if len(coords) != self.d:
            raise ValueError(f"expected {self.d} coordinates, got {len(coords)}")
        code = 0
        for c in reversed(coords):
            if not 0 <= c < self.field.q:
                raise ValueError(f"element code {c} outside [0, {self.field.q})")
            code = code * self.field.q + c
        return code

    def vectors(self) -> range:
        return range(self.size)

    # -- coordinatewise ops on codes ------------------------------------

    def add(self, u: int, v: int) -> int:
        f = self.field
        return self.encode(f.add(a, b) for a, b in zip(self.coords[u], self.coords[v]))

    def sub(self, u: int, v: int) -> int:
        t = self.sub_table
        return t[u][v]

    def neg(self, u: int) -> int:
        f = self.field
        return self.encode(f.neg(a) for a in self.coords[u])

    def scale(self, c: int, u: int) -> int:
        f = self.field
        return self.encode(f.mul(c, a) for a in self.coords[u])

    def dot(self, u: int, v: int) -> int:
        t = self.dot_table
        return t[u][v]

    def norm(self, u: int) -> int:
        return self.norms[u]

    def dot_coords(self, a, b) -> int:
        """Dot product on explicit coordinate tuples (no table required)."""
        if len(a) != len(b):
            raise ValueError("dimension mismatch")
        f = self.field
        acc = 0
        for x, y in zip(a, b):
            acc = f.add(acc, f.mul(x, y))
        return acc

    # -- cached tables ----------------------------------------------------

    @property
    def sub_table(self) -> list[list[int]]:
        if self._sub_table is None:
            self._sub_table = self._build_sub_table()
        return self._sub_table

    @property
    def dot_table(self) -> list[list[int]]:
        if self._dot_table is None:
            self._dot_table = self._build_dot_table()
        return self._dot_table

    @property
    def norms(self) -> list[int]:
        if self._norms is None:
            t = self.dot_table
            self._norms = [t[v][v] for v in range(self.size)]
        return self._norms

    def _coord_matrix(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64).reshape(self.size, self.d)

    def _build_sub_table(self) -> list[list[int]]:
        f = self.field
        if f.e == 1:
            C = self._coord_matrix()
            diff = (C[:, None, :] - C[None, :, :]) % f.p
            codes = diff @ np.array(self._powers, dtype=np.int64)
            return codes.tolist()
        out = []
        for u in range(self.size):
            cu = self.coords[u]
            out.append([
                self.encode(f.sub(a, b) for a, b in zip(cu, self.coords[v]))
                for v in range(self.size)
            ])
        return out

    def _build_dot_table(self) -> list[list[int]]:
        f = self.field
        if f.e == 1:
            C = self._coord_matrix()
            return ((C @ C.T) % f.p).tolist()
        out = []
        for u in range(self.size):
            cu = self.coords[u]
            out.append([self.dot_coords(cu, self.coords[v])
                        for v in range(self.size)])
        return out

    # -- geometry ---------------------------------------------------------

    def sphere(self, t: int) -> tuple[int, ...]:
        """All vector codes v with norm(v) = t."""
        self.field._check(t)
        return tuple(v for v in self.vectors() if self.norms[v] == t)

    def affine_span_dim(self, config) -> int:
        """Rank of the differences x^i - x^last of a point configuration."""
        pts = list(config)
        if not pts:
            raise ValueError("empty configuration")
        last = self.coords[pts[-1]]
        f = self.field
        rows = [
            [f.sub(a, b) for a, b in zip(self.coords[p], last)]
            for p in pts[:-1]
        ]
        return rank(f, rows)

    def __repr__(self) -> str:
        return f"Space(q={self.field.q}, d={self.d})"


@lru_cache(maxsize=None)
def space_for(field: Field, d: int) -> Space:
    return Space(field, d)


# -- point sets ---------------------------------------------------------------

class PointSet:
    """An immutable subset of F_q^d, stored as sorted vector codes."""

    def __init__(self, space: Space, points):
        codes = set()
        for pt in points:
            if isinstance(pt, int):
                if not 0 <= pt < space.size:
                    raise ValueError(f"vector code {pt} outside [0, {space.size})")
                codes.add(pt)
            else:
                codes.add(space.encode(pt))
        self.space = space
        self.codes: tuple[int, ...] = tuple(sorted(codes))
        self._members = frozenset(self.codes)

    def __len__(self) -> int:
        return len(self.codes)

    def __iter__(self):
        return iter(self.codes)

    def __contains__(self, code: int) -> bool:
        return code in self._members

    def __eq__(self, other) -> bool:
        return (isinstance(other, PointSet)
                and self.space is other.space and self.codes == other.codes)

    def __hash__(self) -> int:
        return hash((id(self.space), self.codes))

    def indicator(self) -> list[int]:
        """0/1 table of length q^d (the set as a function on the space)."""
        if self.space.size > _BITMAP_MAX_SIZE:
            raise ValueError("space too large for a dense indicator")
        table = [0] * self.space.size
        for c in self.codes:
            table[c] = 1
        return table

    def distance_set(self) -> frozenset[int]:
        """{ norm(x - y) : x, y in E }.  Always contains 0."""
        if not self.codes:
            raise ValueError("distance set of an empty set")
        sub = self.space.sub_table
        norms = self.space.norms
        return frozenset(norms[sub[x][y]] for x in self.codes for y in self.codes)

    def __repr__(self) -> str:
        return f"PointSet({self.space!r}, n={len(self)})"


def distance_set(E: PointSet) -> frozenset[int]:
    return E.distance_set()


# -- set-file format ----------------------------------------------------------
#
# One vector per line, d comma-separated integer element codes; lines starting
# with '#' (and blank lines) are ignored.

def load_set_file(space: Space, path) -> PointSet:
    pts = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != space.d:
            raise ValueError(
                f"{path}:{lineno}: expected {space.d} coordinates, got {len(parts)}")
        try:
            coords = [int(x) for x in parts]
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: non-integer coordinate") from exc
        pts.append(space.encode(coords))
    return PointSet(space, pts)


def save_set_file(E: PointSet, path) -> None:
    lines = [f"# point set over F_{E.space.field.q}^{E.space.d}, {len(E)} vectors"]
    for code in E.codes:
        lines.append(",".join(str(c) for c in E.space.coords[code]))
    Path(path).write_text("\n".join(lines) + "\n")
