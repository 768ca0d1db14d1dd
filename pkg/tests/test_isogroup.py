"""Orthogonal groups, subspaces, radicals, complements, and isometry extension."""

import itertools
import random

from fractions import Fraction

import pytest

from fqcong.gfarith import CapExceeded, field_for_order
from fqcong.geometry import rank, space_for
from fqcong.isogroup import (
    Subspace,
    all_subspaces,
    extend_isometry,
    gaussian_binomial,
    gl_order,
    identity_matrix,
    is_orthogonal,
    iso_group,
    iso_group_size,
    mat_inverse,
    mat_mul,
    mat_vec,
    orthogonal_group,
    orthogonal_group_order,
    radical,
    subspace_orbit_reps,
    subspace_orbits,
    transporter_count,
    transpose,
    witt_complement,
)


def _brute_force_order(field, d):
    """Count all d x d matrices with M^T M = I by scanning every matrix."""
    count = 0
    for flat in itertools.product(field.elements(), repeat=d * d):
        m = tuple(tuple(flat[i * d:(i + 1) * d]) for i in range(d))
        if is_orthogonal(field, m):
            count += 1
    return count


# -- group enumeration -----------------------------------------------------------

@pytest.mark.parametrize("q,d,order", ((3, 2, 8), (5, 2, 8), (7, 2, 16), (3, 3, 48)))
def test_group_orders_match_full_matrix_scan(q, d, order):
    field = field_for_order(q)
    assert len(orthogonal_group(field, d)) == order
    assert _brute_force_order(field, d) == order


@pytest.mark.parametrize("q", (3, 5, 7, 11, 13))
def test_two_dimensional_order_formula(q):
    # |O(F_q^2)| = 2(q - eta(-1)) with eta(-1) = (-1)^((q-1)/2)
    eta = 1 if (q - 1) // 2 % 2 == 0 else -1
    assert orthogonal_group_order(field_for_order(q), 2) == 2 * (q - eta)


def test_low_dimensional_groups(f3, f5):
    assert orthogonal_group_order(f3, 0) == 1
    assert orthogonal_group_order(f3, 1) == 2  # {+-1}
    assert orthogonal_group_order(f5, 1) == 2
    g1 = orthogonal_group(f5, 1)
    assert sorted(m[0][0] for m in g1.matrices) == [1, 4]


@pytest.mark.parametrize("q,d", ((3, 2), (5, 2), (7, 2), (11, 2), (13, 2), (3, 3)))
def test_order_stays_within_constant_of_heuristic(q, d):
    order = orthogonal_group_order(field_for_order(q), d)
    ratio = Fraction(order, q ** (d * (d - 1) // 2))
    assert 1 <= ratio <= 4


def test_group_elements_preserve_the_dot_product(s32, g32, s52, g52):
    for space, group in ((s32, g32), (s52, g52)):
        rng = random.Random(space.size)
        pairs = [(rng.randrange(space.size), rng.randrange(space.size))
                 for _ in range(30)]
        for perm in group.perms:
            assert sorted(perm) == list(space.vectors())  # a permutation
            assert perm[0] == 0                           # fixes the origin
            for u, v in pairs:
                assert space.dot(perm[u], perm[v]) == space.dot(u, v)


def test_group_closure_and_inverses_exhaustive(g32, g52, g33):
    for group in (g32, g52, g33):
        n = len(group)
        ident = group.perms[group.identity_index]
        assert list(ident) == list(range(len(ident)))
        for i in range(n):
            j = group.inverse_index(i)
            assert group.product_index(i, j) == group.identity_index
            for jj in range(n):
                k = group.product_index(i, jj)  # KeyError would mean not closed
                pi, pj, pk = group.perms[i], group.perms[jj], group.perms[k]
                assert all(pi[pj[v]] == pk[v] for v in range(0, len(pi), 3))


def test_apply_matches_perm_table(g32, s32):
    for i in range(len(g32)):
        for v in s32.vectors():
            assert g32.apply(i, v) == g32.perms[i][v]


def test_group_cap(f7):
    with pytest.raises(CapExceeded):
        orthogonal_group(f7, 3, 10)


# -- transporter counts ------------------------------------------------------------

def test_transporter_examples(g32, s32):
    m = s32.encode((1, 0))
    assert transporter_count(g32, m, m) == 2  # diag(1, +-1)
    assert transporter_count(g32, m, s32.encode((1, 1))) == 0  # norms 1 vs 2
    assert transporter_count(g32, 0, 0) == len(g32)


def test_transporter_row_sums_and_orbit_constancy(g32, s32, g52, s52):
    for group, space in ((g32, s32), (g52, s52)):
        for m in space.vectors():
            counts = [transporter_count(group, m, l) for l in space.vectors()]
            assert sum(counts) == len(group)
            positive = {c for c in counts if c}
            assert len(positive) == 1  # constant on the orbit of m


# -- subspaces ----------------------------------------------------------------------

def test_gaussian_binomial_values():
    assert gaussian_binomial(3, 2, 1) == 4
    assert gaussian_binomial(5, 2, 1) == 6
    assert gaussian_binomial(3, 3, 1) == 13
    assert gaussian_binomial(3, 3, 2) == 13
    assert gaussian_binomial(7, 4, 2) == 2850
    for q, n in ((3, 3), (5, 2)):
        assert gaussian_binomial(q, n, 0) == 1
        assert gaussian_binomial(q, n, n) == 1


def test_gl_order_values():
    assert gl_order(3, 0) == 1
    assert gl_order(3, 1) == 2
    assert gl_order(5, 1) == 4
    assert gl_order(3, 2) == 48  # (9-1)(9-3)
    assert gl_order(5, 2) == 480


@pytest.mark.parametrize("qdr", ((3, 2, 1), (5, 2, 1), (3, 3, 1), (3, 3, 2)))
def test_all_subspaces_enumeration(qdr):
    q, d, r = qdr
    space = space_for(field_for_order(q), d)
    subs = all_subspaces(space, r)
    assert len(subs) == gaussian_binomial(q, d, r)
    assert len({V.rows for V in subs}) == len(subs)
    for V in subs:
        assert V.dim == r
        assert len(V.vector_codes()) == q**r
        for code in V.basis_codes():
            assert V.contains(code)


def test_subspace_coordinates_round_trip(s33):
    V = Subspace.from_vectors(s33, [(1, 1, 1), (1, 0, 0)])
    assert V.dim == 2
    for code in V.vector_codes():
        assert V.contains(code)
        assert V.from_coords(V.coords_of(code)) == code
    outside = s33.encode((0, 1, 0))
    assert not V.contains(outside)
    assert V.coords_of(outside) is None


def test_subspace_gram_is_symmetric(s52):
    for V in all_subspaces(s52, 1) + all_subspaces(s52, 2):
        g = V.gram()
        assert len(g) == V.dim
        assert g == transpose(g)


def test_zero_subspace(s32):
    V = Subspace.from_vectors(s32, [])
    assert V.dim == 0
    assert V.vector_codes() == (0,)
    assert V.gram() == ()
    assert iso_group(V) == ((),)


# -- orbits of subspaces ---------------------------------------------------------------

def test_line_orbit_counts(g32, g52):
    assert len(subspace_orbits(g32, 1)) == 2   # square / non-square norm
    assert len(subspace_orbits(g52, 1)) == 3   # square / non-square / isotropic


def test_orbits_partition_all_subspaces(g32, g52, g33):
    for group, d in ((g32, 2), (g52, 2), (g33, 3)):
        q = group.space.field.q
        for r in range(0, d + 1):
            orbits = subspace_orbits(group, r)
            total = sum(o.size for o in orbits)
            assert total == gaussian_binomial(q, d, r)
            members = {V.rows for o in orbits for V in o.members}
            assert len(members) == total
            for o in orbits:
                assert o.rep.rows == o.members[0].rows
                assert o.size == len(o.members)


def test_orbit_members_share_invariants(g33):
    for r in (1, 2):
        for orbit in subspace_orbits(g33, r):
            sizes = {iso_group_size(V) for V in orbit.members}
            radicals = {radical(V).dim for V in orbit.members}
            assert len(sizes) == 1 and len(radicals) == 1


def test_plane_orbit_structure_in_three_dimensions(g33):
    orbits = subspace_orbits(g33, 2)
    profile = sorted((o.size, iso_group_size(o.rep), radical(o.rep).dim)
                     for o in orbits)
    # anisotropic plane, hyperbolic plane, and rank-1-degenerate plane
    assert profile == [(3, 8, 0), (4, 12, 1), (6, 4, 0)]


def test_orbit_reps_are_deterministic(g52):
    assert [V.rows for V in subspace_orbit_reps(g52, 1)] == [
        V.rows for V in subspace_orbit_reps(g52, 1)]


# -- radical and complement ---------------------------------------------------------

def test_radical_examples(s32, s52, s33):
    aniso = Subspace.from_vectors(s32, [(1, 0)])
    assert radical(aniso).dim == 0
    iso = Subspace.from_vectors(s52, [(1, 2)])
    assert radical(iso).rows == iso.rows  # form vanishes identically
    full = Subspace.from_vectors(s32, [(1, 0), (0, 1)])
    assert radical(full).dim == 0
    degenerate = Subspace.from_vectors(s33, [(1, 1, 1), (1, 2, 0)])
    assert radical(degenerate).dim == 1


@pytest.mark.parametrize("qd", ((3, 2), (5, 2), (3, 3)))
def test_witt_complement_on_every_subspace(qd):
    q, d = qd
    field = field_for_order(q)
    space = space_for(field, d)
    for r in range(0, d + 1):
        for V in all_subspaces(space, r):
            kernel, comp = witt_complement(V)
            assert kernel.rows == radical(V).rows
            assert kernel.dim + comp.dim == V.dim
            assert rank(field, comp.gram()) == comp.dim  # non-degenerate
            # direct sum: the two parts together span V
            combined = Subspace.from_vectors(
                space, kernel.rows + comp.rows)
            assert combined.rows == V.rows
            for row in comp.rows:
                assert V.contains(space.encode(row))


def test_totally_isotropic_complement_is_zero(s52):
    V = Subspace.from_vectors(s52, [(1, 2)])
    kernel, comp = witt_complement(V)
    assert kernel.rows == V.rows and comp.dim == 0


# -- isometry extension ---------------------------------------------------------------

def test_extend_isometry_axis_swap(s32):
    U1 = Subspace.from_vectors(s32, [(1, 0)])
    U2 = Subspace.from_vectors(s32, [(0, 1)])
    theta = extend_isometry(U1, U2, [(0, 1)])
    assert is_orthogonal(s32.field, theta)
    assert mat_vec(s32.field, theta, (1, 0)) == (0, 1)


def test_extend_isometry_fixes_the_domain_when_asked(s52):
    U = Subspace.from_vectors(s52, [(1, 1), (1, 0)])
    theta = extend_isometry(U, U, list(U.rows))
    for row in U.rows:
        assert mat_vec(s52.field, theta, row) == row


def test_extend_isometry_validates_inputs(s32, s52):
    U1 = Subspace.from_vectors(s32, [(1, 0)])
    U2 = Subspace.from_vectors(s32, [(0, 1)])
    with pytest.raises(ValueError, match="expected 1 images"):
        extend_isometry(U1, U2, [(0, 1), (1, 0)])
    bad_norm = Subspace.from_vectors(s32, [(1, 1)])  # norm 1 -> norm 2
    with pytest.raises(ValueError, match="Gram-preserving"):
        extend_isometry(U1, bad_norm, [(1, 1)])
    plane = Subspace.from_vectors(s52, [(1, 0), (0, 1)])
    with pytest.raises(ValueError, match="linearly dependent"):
        extend_isometry(plane, plane, [(1, 0), (2, 0)])
    line = Subspace.from_vectors(s52, [(1, 0)])
    with pytest.raises(ValueError, match="span the target"):
        extend_isometry(line, Subspace.from_vectors(s52, [(0, 1)]), [(1, 0)])


def test_extension_agrees_with_a_known_group_element(s33, g33):
    field = s33.field
    U = Subspace.from_vectors(s33, [(1, 0, 0), (0, 1, 1)])
    for mat in (g33.matrices[3], g33.matrices[17], g33.matrices[40]):
        images = [mat_vec(field, mat, row) for row in U.rows]
        theta = extend_isometry(U, Subspace.from_vectors(s33, images), images)
        assert is_orthogonal(field, theta)
        for row, img in zip(U.rows, images):
            assert mat_vec(field, theta, row) == img


# -- isometry groups of subspaces -------------------------------------------------------

def test_iso_group_examples(s32, s52):
    aniso = Subspace.from_vectors(s32, [(1, 0)])
    assert iso_group_size(aniso) == 2
    isotropic = Subspace.from_vectors(s52, [(1, 2)])
    assert iso_group_size(isotropic) == 4  # every scaling preserves the zero form
    full = Subspace.from_vectors(s32, [(1, 0), (0, 1)])
    assert iso_group_size(full) == 8


def test_iso_group_members_preserve_gram_and_compose(s33):
    field = s33.field
    V = Subspace.from_vectors(s33, [(1, 1, 1), (1, 0, 0)])
    G = V.gram()
    members = iso_group(V)
    assert identity_matrix(V.dim) in members
    index = set(members)
    for A in members:
        assert mat_mul(field, mat_mul(field, transpose(A), G), A) == G
        for B in members:
            assert mat_mul(field, A, B) in index


def test_hyperbolic_plane_has_smaller_group_than_ambient_type(s33, f3):
    # Gram [[0,1],[1,1]] contains an isotropic vector: 2(q-1) = 4 isometries,
    # strictly fewer than the 8 of the rank-2 group of the standard form.
    V = Subspace.from_vectors(s33, [(1, 1, 1), (1, 0, 0)])
    assert rank(f3, V.gram()) == 2
    assert iso_group_size(V) == 4
    assert orthogonal_group_order(f3, 2) == 8


@pytest.mark.parametrize("qd", ((3, 2), (5, 2), (3, 3)))
def test_block_construction_lower_bound_on_every_orbit_rep(qd):
    # |Iso(V)| >= |GL_s| * |Iso(complement)|: the kernel block moves freely
    # and the complement block ranges over its own isometries.
    q, d = qd
    field = field_for_order(q)
    group = orthogonal_group(field, d)
    for r in range(0, d + 1):
        for V in subspace_orbit_reps(group, r):
            s = radical(V).dim
            _, comp = witt_complement(V)
            assert iso_group_size(V) >= gl_order(q, s) * iso_group_size(comp)


def test_iso_group_cap(s52):
    V = Subspace.from_vectors(s52, [(1, 0), (0, 1)])
    with pytest.raises(CapExceeded):
        iso_group(V, cap=10)


# -- matrix helpers ------------------------------------------------------------------

def test_matrix_inverse(f5):
    rng = random.Random(55)
    for _ in range(20):
        m = tuple(tuple(rng.randrange(5) for _ in range(2)) for _ in range(2))
        det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) % 5
        if det == 0:
            with pytest.raises(ValueError, match="singular"):
                mat_inverse(f5, m)
        else:
            assert mat_mul(f5, mat_inverse(f5, m), m) == identity_matrix(2)
