"""Congruence classes of point configurations in F_q^d.

A configuration is a (k+1)-tuple of points, congruent to another when some
rigid motion (orthogonal matrix plus translation) carries it over entrywise.
Pinning — subtracting the last point from the others — absorbs the
translation, so congruence reduces to one orbit question for the orthogonal
group acting on difference tuples.

Each class is identified by a hashable key: the Gram matrix of the pinned
differences together with the RREF basis of their linear dependencies.  Equal
keys yield a well-defined Gram-preserving bijection between the difference
spans, which extends to a full orthogonal matrix (Witt extension), so key
equality coincides with the brute-force orbit test.  The Gram matrix alone is
not enough: over F_5^2 the isotropic vector v = (1,2) gives (v, v, 0) and
(v, 2v, 0) identical all-zero Grams but different dependency kernels, and no
orthogonal matrix maps one difference pair to the other.
"""

from __future__ import annotations

import warnings
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .gfarith import CapExceeded, Field
from .geometry import PointSet, Space, left_nullspace, rank, space_for
from .isogroup import (
    Matrix,
    OrthogonalGroup,
    iso_group,
    mat_vec,
    orthogonal_group,
    subspace_orbit_reps,
)

__all__ = [
    "CongruenceKey",
    "pin",
    "congruence_key",
    "key_of_pinned",
    "brute_force_congruent",
    "class_size",
    "class_multiplicities",
    "DeltaCount",
    "delta_k_count",
    "CensusReport",
    "full_census",
    "threshold_exponent",
]

DEFAULT_CAP = 10**7


@dataclass(frozen=True)
class CongruenceKey:
    """Exact congruence-class identifier for a (k+1)-point configuration."""

    gram: Matrix
    depkernel: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.gram)

    @property
    def span_dim(self) -> int:
        """Dimension of the linear span of the pinned differences."""
        return len(self.gram) - len(self.depkernel)


def pin(space: Space, config) -> tuple[int, ...]:
    """Difference tuple (x^1 - x^last, ..., x^k - x^last) as vector codes.

    Pinning an already-pinned configuration (one ending in the zero vector)
    returns its differences unchanged.
    """
    codes = _as_codes(space, config)
    if len(codes) < 2:
        raise ValueError("a configuration needs at least 2 points")
    last = codes[-1]
    sub = space.sub_table
    return tuple(int(sub[x][last]) for x in codes[:-1])


def _as_codes(space: Space, config) -> tuple[int, ...]:
    out = []
    for x in config:
        out.append(x if isinstance(x, int) else space.encode(x))
    return tuple(out)


def key_of_pinned(space: Space, diffs: tuple[int, ...]) -> CongruenceKey:
    """Key from an already-pinned difference tuple of k vector codes."""
    dot = space.dot_table
    gram = tuple(
        tuple(int(dot[a][b]) for b in diffs) for a in diffs
    )
    rows = [space.coords[v] for v in diffs]
    return CongruenceKey(gram=gram, depkernel=left_nullspace(space.field, rows))


def congruence_key(space: Space, config) -> CongruenceKey:
    return key_of_pinned(space, pin(space, config))


def brute_force_congruent(group: OrthogonalGroup, x, y) -> bool:
    """Orbit-scan oracle: is some rigid motion carrying x to y entrywise?"""
    space = group.space
    px = pin(space, x)
    py = pin(space, y)
    if len(px) != len(py):
        raise ValueError("configurations have different lengths")
    return any(
        all(perm[a] == b for a, b in zip(px, py)) for perm in group.perms
    )


def class_size(group: OrthogonalGroup, x) -> int:
    """Number of configurations congruent to x: q^d times the orbit of pin(x)."""
    px = pin(group.space, x)
    orbit = {tuple(perm[a] for a in px) for perm in group.perms}
    return group.space.size * len(orbit)


# -- counting distinct classes over a point set ---------------------------------

def class_multiplicities(E: PointSet, k: int,
                         cap: int = DEFAULT_CAP) -> Counter:
    """Key -> number of (k+1)-tuples from E in that class, exhaustively.

    Memoizes on the difference tuple, so the cost is |E|^(k+1) dictionary
    hits plus one key computation per distinct difference tuple.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    n = len(E)
    if n == 0:
        raise ValueError("empty point set")
    if n**(k + 1) > cap:
        raise CapExceeded(
            f"exact class count needs {n**(k + 1)} tuple visits, cap is {cap}")
    space = E.space
    sub = space.sub_table
    memo: dict[tuple[int, ...], CongruenceKey] = {}
    counts: Counter = Counter()
    pts = E.codes
    for last in pts:
        col = [int(sub[x][last]) for x in pts]
        for combo in product(range(n), repeat=k):
            diffs = tuple(col[i] for i in combo)
            key = memo.get(diffs)
            if key is None:
                key = key_of_pinned(space, diffs)
                memo[diffs] = key
            counts[key] += 1
    return counts


@dataclass(frozen=True)
class DeltaCount:
    """Distinct congruence classes over E^(k+1), stratified by span dimension."""

    total: int
    by_stratum: dict[int, int]
    exact: bool
    tuples_visited: int


def delta_k_count(E: PointSet, k: int, *, sample: int | None = None,
                  seed: int | None = None, cap: int = DEFAULT_CAP) -> DeltaCount:
    """|Delta_k(E)|: exact when sample is None, else a seen-keys lower bound."""
    if sample is None:
        keys = set(class_multiplicities(E, k, cap))
        visited = len(E)**(k + 1)
        exact = True
    else:
        if k < 1:
            raise ValueError("k must be at least 1")
        if sample < 1:
            raise ValueError("sample size must be positive")
        n = len(E)
        space = E.space
        sub = space.sub_table
        rng = np.random.default_rng(np.random.PCG64(seed))
        idx = rng.integers(0, n, size=(sample, k + 1))
        pts = E.codes
        memo: dict[tuple[int, ...], CongruenceKey] = {}
        keys = set()
        for row in idx:
            last = pts[row[k]]
            diffs = tuple(int(sub[pts[i]][last]) for i in row[:k])
            key = memo.get(diffs)
            if key is None:
                key = key_of_pinned(space, diffs)
                memo[diffs] = key
            keys.add(key)
        visited = sample
        exact = False
    strata = Counter(key.span_dim for key in keys)
    return DeltaCount(total=len(keys),
                      by_stratum=dict(sorted(strata.items())),
                      exact=exact, tuples_visited=visited)


# -- full-space census ------------------------------------------------------------

@dataclass(frozen=True)
class CensusReport:
    """Exact class counts for all (k+1)-point configurations of F_q^d."""

    q: int
    d: int
    k: int
    strata_classes: dict[int, int]   # span dim r < d -> distinct classes
    strata_tuples: dict[int, int]    # span dim r < d -> raw configuration count
    nondegenerate_classes: int
    nondegenerate_tuples: int
    total_classes: int
    heuristic: Fraction              # q^(d(k+1) - d(d+1)/2)
    ratio: Fraction                  # total_classes / heuristic
    group_order: int
    vr_classes: dict[int, int]       # independent recount via orbit representatives
    vr_consistent: bool
    free_action_consistent: bool


def full_census(field: Field, d: int, k: int,
                cap: int = DEFAULT_CAP) -> CensusReport:
    """Exact census of congruence classes, stratified by span dimension.

    Enumerates all q^(dk) pinned difference tuples (each configuration class
    meets the pinned slice), buckets their keys by span dimension, then
    recounts every degenerate stratum independently: classes with span
    dimension r < d are in bijection with isometry-group orbits of spanning
    k-tuples inside one representative subspace per orbit of r-dimensional
    subspaces.  The non-degenerate stratum is checked against the free-action
    identity  classes * q^d * |O|  =  #non-degenerate configurations.
    """
    q = field.q
    space = space_for(field, d)
    group = orthogonal_group(field, d, cap)
    if k < 1:
        raise ValueError("k must be at least 1")
    if q**(d * k) > cap:
        raise CapExceeded(
            f"census needs {q**(d * k)} difference tuples, cap is {cap}")

    keys_by_r: dict[int, set] = {}
    tuples_by_r: Counter = Counter()
    memo_dot = [[int(v) for v in row] for row in space.dot_table]
    fld = space.field
    all_coords = space.coords
    vectors = list(space.vectors())
    for diffs in product(vectors, repeat=k):
        gram = tuple(
            tuple(memo_dot[a][b] for b in diffs) for a in diffs
        )
        rows = [all_coords[v] for v in diffs]
        depk = left_nullspace(fld, rows)
        key = CongruenceKey(gram=gram, depkernel=depk)
        r = k - len(depk)
        keys_by_r.setdefault(r, set()).add(key)
        tuples_by_r[r] += 1

    strata_classes = {
        r: len(keys_by_r[r]) for r in sorted(keys_by_r) if r < d
    }
    strata_tuples = {
        r: q**d * tuples_by_r[r] for r in sorted(tuples_by_r) if r < d
    }
    nondeg_classes = len(keys_by_r.get(d, set()))
    nondeg_tuples = q**d * tuples_by_r.get(d, 0)
    total = sum(len(s) for s in keys_by_r.values())

    m = d * (k + 1) - d * (d + 1) // 2
    heuristic = Fraction(q)**m
    ratio = Fraction(total) / heuristic

    vr_classes = {
        r: _stratum_classes_via_reps(group, k, r, cap) for r in strata_classes
    }
    vr_ok = vr_classes == strata_classes
    free_ok = nondeg_classes * q**d * len(group) == nondeg_tuples

    return CensusReport(
        q=q, d=d, k=k,
        strata_classes=strata_classes, strata_tuples=strata_tuples,
        nondegenerate_classes=nondeg_classes, nondegenerate_tuples=nondeg_tuples,
        total_classes=total, heuristic=heuristic, ratio=ratio,
        group_order=len(group),
        vr_classes=vr_classes, vr_consistent=vr_ok,
        free_action_consistent=free_ok,
    )


def _stratum_classes_via_reps(group: OrthogonalGroup, k: int, r: int,
                              cap: int) -> int:
    """Classes with span dimension r, counted inside orbit representatives.

    A class of difference tuples spanning an r-dimensional subspace is mapped
    by the group into exactly one representative V, and two spanning tuples
    inside V collide exactly when an isometry of V relates them (isometries
    of V extend to the whole group, and group elements fixing V setwise
    restrict to isometries).
    """
    total = 0
    for V in subspace_orbit_reps(group, r, cap):
        total += _spanning_orbit_count(V, k, cap)
    return total


def _spanning_orbit_count(V, k: int, cap: int) -> int:
    f = V.space.field
    r = V.dim
    isos = iso_group(V, cap)
    coeff_vectors = list(product(f.elements(), repeat=r))
    if len(coeff_vectors)**k > cap:
        raise CapExceeded(
            f"stratum recount needs {len(coeff_vectors)**k} tuples, cap {cap}")
    canon = set()
    for t in product(coeff_vectors, repeat=k):
        if rank(f, t) != r:
            continue
        canon.add(min(
            tuple(mat_vec(f, A, c) for c in t) for A in isos
        ))
    return len(canon)


def threshold_exponent(d: int, k: int) -> Fraction:
    """The size exponent d - (d-1)/(k+1) separating rich from poor sets."""
    if not k >= d >= 2:
        warnings.warn(
            f"threshold exponent requested outside k >= d >= 2 (d={d}, k={k})",
            stacklevel=2)
    return Fraction(d) - Fraction(d - 1, k + 1)
