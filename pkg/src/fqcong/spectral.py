"""Fourier analysis on F_q^d and the counting function behind it.

For a point set E and an orthogonal matrix theta, nu_theta(z) counts pairs
(u, v) in E x E with u - theta v = z.  Its Fourier transform factors as
q^d * Ehat(m) * conj(Ehat(theta^{-1} m)), which drives the moment bounds:
the second and (k+1)-st moments of nu over (theta, z) control how many
congruent pairs of (k+1)-point configurations a set can have, and hence how
many congruence classes it must realize.

All counts and bound expressions are exact (integers / fractions); only the
character tables use floating complex, with deviations reported rather than
hidden.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from .geometry import PointSet, Space
from .isogroup import OrthogonalGroup
from .congruence import class_multiplicities

__all__ = [
    "fourier_transform",
    "inverse_fourier_transform",
    "plancherel_deviation",
    "inversion_deviation",
    "nu_row",
    "nu_table",
    "FactorizationCheck",
    "nu_factorization_check",
    "moment_from_table",
    "moment",
    "moment_oracle",
    "centered_second_moment",
    "second_moment_bound",
    "centered_second_bound",
    "high_moment_bound",
    "MomentReport",
    "bound_ratio_report",
    "ChainReport",
    "congruence_chain",
]

_BLOCK = 256


@lru_cache(maxsize=None)
def _np_dots(space: Space) -> np.ndarray:
    return np.asarray(space.dot_table, dtype=np.int64)


@lru_cache(maxsize=None)
def _chi_values(space: Space) -> np.ndarray:
    return np.array([space.field.char(t) for t in range(space.field.q)])


def fourier_transform(space: Space, values) -> np.ndarray:
    """fhat(m) = q^{-d} sum_x chi(-x.m) f(x), computed blockwise."""
    f = np.asarray(values, dtype=complex)
    if f.shape != (space.size,):
        raise ValueError(f"expected a table of {space.size} values")
    dots = _np_dots(space)
    chi = _chi_values(space)
    out = np.empty(space.size, dtype=complex)
    for start in range(0, space.size, _BLOCK):
        block = dots[start:start + _BLOCK]
        out[start:start + _BLOCK] = np.conj(chi[block]) @ f
    return out / space.size


def inverse_fourier_transform(space: Space, table) -> np.ndarray:
    """f(x) = sum_m chi(x.m) fhat(m); exact inverse of fourier_transform."""
    fh = np.asarray(table, dtype=complex)
    if fh.shape != (space.size,):
        raise ValueError(f"expected a table of {space.size} values")
    dots = _np_dots(space)
    chi = _chi_values(space)
    out = np.empty(space.size, dtype=complex)
    for start in range(0, space.size, _BLOCK):
        block = dots[start:start + _BLOCK]
        out[start:start + _BLOCK] = chi[block] @ fh
    return out


def plancherel_deviation(space: Space, values) -> float:
    """|sum_x |f|^2 - q^d sum_m |fhat|^2| for the given value table."""
    f = np.asarray(values, dtype=complex)
    fh = fourier_transform(space, f)
    return float(abs(np.sum(np.abs(f)**2) - space.size * np.sum(np.abs(fh)**2)))


def inversion_deviation(space: Space, values) -> float:
    """max_x |f(x) - roundtrip(f)(x)| through the transform and its inverse."""
    f = np.asarray(values, dtype=complex)
    back = inverse_fourier_transform(space, fourier_transform(space, f))
    return float(np.max(np.abs(f - back)))


# -- the pair-counting function nu -------------------------------------------------

def nu_row(E: PointSet, perm) -> list[int]:
    """nu(z) = #{(u,v) in E x E : u - theta v = z} for one matrix given as
    its vector-code permutation; exact integers by a direct double loop."""
    space = E.space
    sub = space.sub_table
    counts = [0] * space.size
    moved = [perm[v] for v in E.codes]
    for u in E.codes:
        row = sub[u]
        for w in moved:
            counts[int(row[w])] += 1
    return counts


def nu_table(E: PointSet, group: OrthogonalGroup) -> list[list[int]]:
    """One nu row per group element, in the group's enumeration order."""
    return [nu_row(E, perm) for perm in group.perms]


@dataclass(frozen=True)
class FactorizationCheck:
    """Float deviation of the nu transform from its product form, plus the
    exact rational check of the zero frequency."""

    max_deviation: float
    zero_frequency_ok: bool


def nu_factorization_check(E: PointSet, group: OrthogonalGroup) -> FactorizationCheck:
    """Compare nuhat_theta(m) against q^d Ehat(m) conj(Ehat(theta^{-1} m)).

    Returns the max absolute deviation over all (theta, m), and whether
    nuhat_theta(0) equals |E|^2 / q^d exactly as a rational for every theta.
    """
    space = E.space
    size = space.size
    ehat = fourier_transform(space, E.indicator())
    want_zero = Fraction(len(E)**2, size)
    max_dev = 0.0
    zero_ok = True
    for i, perm in enumerate(group.perms):
        row = nu_row(E, perm)
        if Fraction(sum(row), size) != want_zero:
            zero_ok = False
        nu_hat = fourier_transform(space, row)
        inv_perm = np.asarray(group.perms[group.inverse_index(i)])
        rhs = size * ehat * np.conj(ehat[inv_perm])
        max_dev = max(max_dev, float(np.max(np.abs(nu_hat - rhs))))
    return FactorizationCheck(max_deviation=max_dev, zero_frequency_ok=zero_ok)


# -- moments ------------------------------------------------------------------------

def moment_from_table(table, power: int) -> int:
    if power < 1:
        raise ValueError("power must be at least 1")
    return sum(int(c)**power for row in table for c in row)


def moment(E: PointSet, group: OrthogonalGroup, power: int) -> int:
    """Exact integer sum over (theta, z) of nu_theta(z)^power."""
    return moment_from_table(nu_table(E, group), power)


def moment_oracle(E: PointSet, group: OrthogonalGroup, power: int) -> int:
    """The same moment counted without nu: tuples (theta, u_1..u_p, v_1..v_p)
    whose differences u_i - theta v_i all agree.  Exponential in p — a
    cross-check for small sets, not a fast path."""
    if power < 1:
        raise ValueError("power must be at least 1")
    space = E.space
    sub = space.sub_table
    codes = E.codes
    total = 0
    for perm in group.perms:
        moved = [perm[v] for v in codes]
        for pairs in product(range(len(codes)), repeat=2 * power):
            z0 = int(sub[codes[pairs[0]]][moved[pairs[1]]])
            if all(
                int(sub[codes[pairs[2 * i]]][moved[pairs[2 * i + 1]]]) == z0
                for i in range(1, power)
            ):
                total += 1
    return total


def centered_second_moment(E: PointSet, group: OrthogonalGroup,
                           table=None) -> Fraction:
    """sum_{theta,z} (nu - |E|^2/q^d)^2, exactly: the raw second moment minus
    |O| |E|^4 / q^d (each row of nu sums to |E|^2)."""
    if table is None:
        table = nu_table(E, group)
    m2 = moment_from_table(table, 2)
    return Fraction(m2) - len(group) * Fraction(len(E)**4, E.space.size)


def second_moment_bound(q: int, d: int, n: int) -> Fraction:
    """|E|^4 / q^{d - C(d,2)} + q^{C(d,2)+1} |E|^2 for |E| = n."""
    c = d * (d - 1) // 2
    return Fraction(n**4) * Fraction(q)**(c - d) + Fraction(q**(c + 1) * n**2)


def centered_second_bound(q: int, d: int, n: int) -> Fraction:
    """q^{C(d,2)+1} |E|^2 for |E| = n."""
    c = d * (d - 1) // 2
    return Fraction(q**(c + 1) * n**2)


def high_moment_bound(q: int, d: int, k: int, n: int) -> Fraction:
    """2^{k^2} (q^{C(d,2)+1} |E|^{k+1} + |E|^{2(k+1)} / q^{d(k+1)-C(d+1,2)})."""
    c = d * (d - 1) // 2
    expo = d * (k + 1) - d * (d + 1) // 2
    inner = (Fraction(q**(c + 1) * n**(k + 1))
             + Fraction(n**(2 * (k + 1))) * Fraction(q)**(-expo))
    return 2**(k * k) * inner


@dataclass(frozen=True)
class MomentReport:
    """Exact moments of nu with their bound expressions and LHS/RHS ratios."""

    q: int
    d: int
    k: int
    set_size: int
    group_order: int
    second_moment: int
    high_moment: int                 # power k+1
    centered_second: Fraction
    second_bound: Fraction
    second_ratio: Fraction
    centered_bound: Fraction
    centered_ratio: Fraction
    high_bound: Fraction
    high_ratio: Fraction


def bound_ratio_report(E: PointSet, group: OrthogonalGroup,
                       k: int) -> MomentReport:
    q = E.space.field.q
    d = E.space.d
    n = len(E)
    table = nu_table(E, group)
    m2 = moment_from_table(table, 2)
    mh = moment_from_table(table, k + 1)
    centered = Fraction(m2) - len(group) * Fraction(n**4, E.space.size)
    b2 = second_moment_bound(q, d, n)
    bc = centered_second_bound(q, d, n)
    bh = high_moment_bound(q, d, k, n)
    return MomentReport(
        q=q, d=d, k=k, set_size=n, group_order=len(group),
        second_moment=m2, high_moment=mh, centered_second=centered,
        second_bound=b2, second_ratio=Fraction(m2) / b2,
        centered_bound=bc, centered_ratio=centered / bc,
        high_bound=bh, high_ratio=Fraction(mh) / bh,
    )


# -- the Cauchy-Schwarz chain -------------------------------------------------------

@dataclass(frozen=True)
class ChainReport:
    """Exact integer chain |E|^{2(k+1)} <= |Delta_k(E)| * P <= |Delta_k(E)| * M.

    P counts congruent ordered pairs of (k+1)-tuples from E; M is the
    (k+1)-st moment of nu, which dominates P because every congruent pair is
    witnessed by at least one (theta, z)."""

    set_size: int
    k: int
    delta_count: int
    congruent_pairs: int
    high_moment: int
    lhs: int
    cauchy_schwarz_ok: bool
    moment_domination_ok: bool


def congruence_chain(E: PointSet, group: OrthogonalGroup, k: int,
                     cap: int = 10**7) -> ChainReport:
    mult = class_multiplicities(E, k, cap)
    delta = len(mult)
    pairs = sum(c * c for c in mult.values())
    mh = moment(E, group, k + 1)
    lhs = len(E)**(2 * (k + 1))
    return ChainReport(
        set_size=len(E), k=k, delta_count=delta, congruent_pairs=pairs,
        high_moment=mh, lhs=lhs,
        cauchy_schwarz_ok=lhs <= delta * pairs,
        moment_domination_ok=pairs <= mh,
    )
