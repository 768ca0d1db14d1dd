"""The orthogonal group of F_q^d and the subspace machinery around it.

Matrices are tuples of row tuples of element codes.  O(F_q^d) is enumerated
by backtracking over orthonormal column frames (every column of norm 1,
pairwise dot 0), which is complete by construction: a matrix satisfies
M^T M = I exactly when its columns form such a frame.

Subspaces are canonicalized by reduced row echelon form so orbit partitions
can use exact key equality.  The radical / complement split, isometry
extension, and per-subspace isometry groups are all computed by exhaustive
search at desk scale, guarded by work caps.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product

from .gfarith import CapExceeded, Field
from .geometry import Space, pivot_columns, rank, rref, right_nullspace, space_for

__all__ = [
    "Matrix",
    "mat_mul",
    "mat_vec",
    "transpose",
    "identity_matrix",
    "is_orthogonal",
    "OrthogonalGroup",
    "orthogonal_group",
    "orthogonal_group_order",
    "transporter_count",
    "Subspace",
    "all_subspaces",
    "radical",
    "witt_complement",
    "extend_isometry",
    "iso_group",
    "iso_group_size",
    "subspace_orbits",
    "subspace_orbit_reps",
    "gl_order",
    "gaussian_binomial",
]

Matrix = tuple[tuple[int, ...], ...]

DEFAULT_CAP = 10**7


# -- small exact matrix helpers ----------------------------------------------

def identity_matrix(d: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m)) if m else ()


def mat_vec(field: Field, m: Matrix, v) -> tuple[int, ...]:
    out = []
    for row in m:
        acc = 0
        for a, b in zip(row, v):
            acc = field.add(acc, field.mul(a, b))
        out.append(acc)
    return tuple(out)


def mat_mul(field: Field, a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(
        tuple(_dotrow(field, ra, cb) for cb in bt)
        for ra in a
    )


def _dotrow(field: Field, x, y) -> int:
    acc = 0
    for a, b in zip(x, y):
        acc = field.add(acc, field.mul(a, b))
    return acc


def mat_inverse(field: Field, m: Matrix) -> Matrix:
    """Inverse via Gauss-Jordan on [m | I]; raises on singular input."""
    d = len(m)
    aug = [list(m[i]) + [1 if j == i else 0 for j in range(d)] for i in range(d)]
    red = rref(field, aug)
    if len(red) < d or pivot_columns(red)[:d] != tuple(range(d)):
        raise ValueError("matrix is singular")
    return tuple(tuple(row[d:]) for row in red)


def is_orthogonal(field: Field, m: Matrix) -> bool:
    return mat_mul(field, transpose(m), m) == identity_matrix(len(m))


# -- orthogonal group ----------------------------------------------------------

class OrthogonalGroup:
    """Complete, duplicate-free enumeration of O(F_q^d) in sorted order.

    ``perms[i]`` maps a vector code to the code of its image under matrix i,
    so the hot loops downstream act through plain list indexing.
    """

    def __init__(self, space: Space, matrices: tuple[Matrix, ...]):
        self.space = space
        self.field = space.field
        self.d = space.d
        self.matrices = matrices
        self.index = {m: i for i, m in enumerate(matrices)}
        f = space.field
        self.perms: list[list[int]] = [
            [space.encode(mat_vec(f, m, space.coords[v])) for v in space.vectors()]
            for m in matrices
        ]
        self.identity_index = self.index[identity_matrix(self.d)]
        self._inverse: list[int] = [
            self.index[mat_inverse(f, m)] for m in matrices
        ]

    def __len__(self) -> int:
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)

    def apply(self, i: int, vcode: int) -> int:
        return self.perms[i][vcode]

    def inverse_index(self, i: int) -> int:
        return self._inverse[i]

    def product_index(self, i: int, j: int) -> int:
        return self.index[mat_mul(self.field, self.matrices[i], self.matrices[j])]


def _enumerate_frames(space: Space, cap: int) -> list[Matrix]:
    """Backtrack over orthonormal column frames; work cap counts candidates."""
    f = space.field
    norms = space.norms
    unit = [space.coords[v] for v in space.vectors() if norms[v] == 1]
    checked = 0
    frames: list[Matrix] = []
    cols: list[tuple[int, ...]] = []

    def extend() -> None:
        nonlocal checked
        if len(cols) == space.d:
            frames.append(transpose(tuple(cols)))
            return
        for w in unit:
            checked += 1
            if checked > cap:
                raise CapExceeded(
                    f"orthogonal group search for q={f.q}, d={space.d} "
                    f"exceeded {cap} candidate checks")
            if all(space.dot_coords(w, c) == 0 for c in cols):
                cols.append(w)
                extend()
                cols.pop()

    extend()
    return frames


@lru_cache(maxsize=None)
def orthogonal_group(field: Field, d: int, cap: int = DEFAULT_CAP) -> OrthogonalGroup:
    """Enumerate O(F_q^d).  d = 0 gives the trivial group on the empty matrix."""
    space = space_for(field, d)
    if d == 0:
        return OrthogonalGroup(space, (() ,))
    frames = _enumerate_frames(space, cap)
    return OrthogonalGroup(space, tuple(sorted(frames)))


def orthogonal_group_order(field: Field, d: int, cap: int = DEFAULT_CAP) -> int:
    return len(orthogonal_group(field, d, cap))


def transporter_count(group: OrthogonalGroup, m: int, l: int) -> int:
    """|{theta in O : theta m = l}| on vector codes."""
    return sum(1 for perm in group.perms if perm[m] == l)


# -- subspaces ------------------------------------------------------------------

class Subspace:
    """A linear subspace of F_q^d held as its unique RREF basis."""

    def __init__(self, space: Space, rows: tuple[tuple[int, ...], ...]):
        self.space = space
        self.rows = rows

    @classmethod
    def from_vectors(cls, space: Space, vectors) -> "Subspace":
        rows = []
        for v in vectors:
            rows.append(space.coords[v] if isinstance(v, int) else tuple(v))
        return cls(space, rref(space.field, rows))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def basis_codes(self) -> tuple[int, ...]:
        return tuple(self.space.encode(r) for r in self.rows)

    def vector_codes(self) -> tuple[int, ...]:
        """All q^dim member codes, in coefficient-lexicographic order."""
        f = self.space.field
        out = []
        for coeffs in product(f.elements(), repeat=self.dim):
            acc = (0,) * self.space.d
            for c, row in zip(coeffs, self.rows):
                acc = tuple(f.add(a, f.mul(c, b)) for a, b in zip(acc, row))
            out.append(self.space.encode(acc))
        return tuple(out)

    def contains(self, vcode: int) -> bool:
        return self.coords_of(vcode) is not None

    def coords_of(self, vcode: int):
        """Coefficients of the vector in the RREF basis, or None if outside."""
        v = self.space.coords[vcode]
        f = self.space.field
        coeffs = tuple(v[p] for p in pivot_columns(self.rows))
        acc = (0,) * self.space.d
        for c, row in zip(coeffs, self.rows):
            acc = tuple(f.add(a, f.mul(c, b)) for a, b in zip(acc, row))
        return coeffs if acc == v else None

    def from_coords(self, coeffs) -> int:
        f = self.space.field
        acc = (0,) * self.space.d
        for c, row in zip(coeffs, self.rows):
            acc = tuple(f.add(a, f.mul(c, b)) for a, b in zip(acc, row))
        return self.space.encode(acc)

    def gram(self) -> Matrix:
        """Dot products of the basis rows (the restricted bilinear form)."""
        dc = self.space.dot_coords
        return tuple(
            tuple(dc(a, b) for b in self.rows) for a in self.rows
        )

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subspace)
                and self.space is other.space and self.rows == other.rows)

    def __hash__(self) -> int:
        return hash((id(self.space), self.rows))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, rows={self.rows})"


def all_subspaces(space: Space, r: int, cap: int = DEFAULT_CAP) -> list[Subspace]:
    """Every r-dimensional subspace, via direct RREF-pattern enumeration."""
    d = space.d
    if not 0 <= r <= d:
        raise ValueError(f"r={r} outside [0, {d}]")
    q = space.field.q
    total = gaussian_binomial(q, d, r)
    if total > cap:
        raise CapExceeded(f"{total} subspaces exceeds the cap {cap}")
    if r == 0:
        return [Subspace(space, ())]
    out = []
    for pivots in combinations(range(d), r):
        free_positions = [
            (i, j) for i in range(r) for j in range(d)
            if j > pivots[i] and j not in pivots
        ]
        for values in product(range(q), repeat=len(free_positions)):
            m = [[0] * d for _ in range(r)]
            for i, p in enumerate(pivots):
                m[i][p] = 1
            for (i, j), v in zip(free_positions, values):
                m[i][j] = v
            out.append(Subspace(space, tuple(tuple(row) for row in m)))
    assert len(out) == total
    return out


def gaussian_binomial(q: int, n: int, k: int) -> int:
    num = den = 1
    for i in range(k):
        num *= q**(n - i) - 1
        den *= q**(i + 1) - 1
    assert num % den == 0
    return num // den


def gl_order(q: int, s: int) -> int:
    out = 1
    for i in range(s):
        out *= q**s - q**i
    return out


# -- radical and Witt-style complement -----------------------------------------

def radical(V: Subspace) -> Subspace:
    """{x in V : dot(x, y) = 0 for all y in V} = null space of the Gram form."""
    coeff_basis = right_nullspace(V.space.field, V.gram())
    rows = [_combine(V, c) for c in coeff_basis]
    return Subspace.from_vectors(V.space, rows)


def _combine(V: Subspace, coeffs) -> tuple[int, ...]:
    f = V.space.field
    acc = (0,) * V.space.d
    for c, row in zip(coeffs, V.rows):
        acc = tuple(f.add(a, f.mul(c, b)) for a, b in zip(acc, row))
    return acc


def witt_complement(V: Subspace) -> tuple[Subspace, Subspace]:
    """Split V = kernel + complement with the form non-degenerate on the latter.

    The complement is chosen deterministically: basis rows of V whose index is
    not a pivot of the kernel's coefficient basis.  Any direct complement of
    the radical is automatically non-degenerate, so no search is needed.
    """
    field = V.space.field
    coeff_basis = right_nullspace(field, V.gram())
    kernel = Subspace.from_vectors(V.space, [_combine(V, c) for c in coeff_basis])
    kernel_pivots = set(pivot_columns(coeff_basis))
    comp_rows = [row for j, row in enumerate(V.rows) if j not in kernel_pivots]
    complement = Subspace.from_vectors(V.space, comp_rows)
    return kernel, complement


# -- isometry extension (Witt) ---------------------------------------------------

def extend_isometry(U1: Subspace, U2: Subspace, images, cap: int = DEFAULT_CAP):
    """A full orthogonal matrix agreeing with basis -> images on U1, or None.

    ``images[i]`` is the target of the i-th RREF basis row of U1 (vector code
    or coordinate tuple).  The input must be Gram-preserving and injective
    with image spanning U2; anything else is rejected with ValueError.  For a
    valid input a completion always exists, so None signals a library defect.
    """
    space = U1.space
    f = space.field
    w = [space.coords[v] if isinstance(v, int) else tuple(v) for v in images]
    if len(w) != U1.dim:
        raise ValueError(f"expected {U1.dim} images, got {len(w)}")
    if rank(f, w) != U1.dim:
        raise ValueError("images are linearly dependent")
    if Subspace.from_vectors(space, w).rows != U2.rows:
        raise ValueError("images do not span the target subspace")
    basis = list(U1.rows)
    for i, bi in enumerate(basis):
        for j in range(i + 1):
            if space.dot_coords(bi, basis[j]) != space.dot_coords(w[i], w[j]):
                raise ValueError("map is not Gram-preserving")

    # extend the domain basis with standard vectors, then search for images
    full = list(basis)
    for j in range(space.d):
        e = tuple(1 if i == j else 0 for i in range(space.d))
        if rank(f, full + [e]) > len(full):
            full.append(e)
        if len(full) == space.d:
            break
    targets = list(w)
    all_coords = [space.coords[v] for v in space.vectors()]
    checked = 0

    def search() -> bool:
        nonlocal checked
        i = len(targets)
        if i == space.d:
            return True
        for cand in all_coords:
            checked += 1
            if checked > cap:
                raise CapExceeded("isometry extension search exceeded its cap")
            ok = True
            for j in range(i + 1):
                want = space.dot_coords(full[i], full[j] if j < i else full[i])
                have = space.dot_coords(cand, targets[j] if j < i else cand)
                if want != have:
                    ok = False
                    break
            if ok:
                targets.append(cand)
                if search():
                    return True
                targets.pop()
        return False

    if not search():
        return None
    # solve theta @ B = W columnwise: theta = W B^{-1}
    B = transpose(tuple(full))
    W = transpose(tuple(targets))
    theta = mat_mul(f, W, mat_inverse(f, B))
    assert is_orthogonal(f, theta)
    for bi, wi in zip(U1.rows, w):
        assert mat_vec(f, theta, bi) == wi
    return theta


# -- isometries of a subspace -----------------------------------------------------

def iso_group(V: Subspace, cap: int = DEFAULT_CAP) -> tuple[Matrix, ...]:
    """All invertible maps of V (in basis coordinates) preserving its Gram form."""
    r = V.dim
    f = V.space.field
    q = f.q
    if r == 0:
        return ((),)
    if q**(r * r) > cap:
        raise CapExceeded(
            f"iso group search over {q}^{r * r} matrices exceeds the cap {cap}")
    G = V.gram()
    out = []
    for entries in product(f.elements(), repeat=r * r):
        A = tuple(entries[i * r:(i + 1) * r] for i in range(r))
        if mat_mul(f, mat_mul(f, transpose(A), G), A) == G and rank(f, A) == r:
            out.append(A)
    return tuple(out)


def iso_group_size(V: Subspace, cap: int = DEFAULT_CAP) -> int:
    return len(iso_group(V, cap))


# -- orbits of subspaces under the orthogonal group --------------------------------

@dataclass(frozen=True)
class SubspaceOrbit:
    rep: Subspace
    members: tuple[Subspace, ...]

    @property
    def size(self) -> int:
        return len(self.members)


def subspace_orbits(group: OrthogonalGroup, r: int,
                    cap: int = DEFAULT_CAP) -> list[SubspaceOrbit]:
    """Partition of all r-dim subspaces into O-orbits, reps in sorted order."""
    space = group.space
    f = space.field
    subs = all_subspaces(space, r, cap)
    seen: set[Subspace] = set()
    orbits: list[SubspaceOrbit] = []
    for s in subs:
        if s in seen:
            continue
        members = set()
        frontier = [s]
        while frontier:
            cur = frontier.pop()
            if cur in members:
                continue
            members.add(cur)
            for m in group.matrices:
                img = Subspace.from_vectors(
                    space, [mat_vec(f, m, row) for row in cur.rows])
                if img not in members:
                    frontier.append(img)
        seen |= members
        ordered = tuple(sorted(members, key=lambda t: t.rows))
        orbits.append(SubspaceOrbit(rep=ordered[0], members=ordered))
    orbits.sort(key=lambda o: o.rep.rows)
    return orbits


def subspace_orbit_reps(group: OrthogonalGroup, r: int,
                        cap: int = DEFAULT_CAP) -> list[Subspace]:
    return [o.rep for o in subspace_orbits(group, r, cap)]
