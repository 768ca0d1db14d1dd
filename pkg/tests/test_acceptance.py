"""Acceptance gate: seven end-to-end behaviors, one PASS/FAIL line each.

Each test prints a single verdict line (past the capture) and then asserts,
so a full run always shows seven lines regardless of the surrounding report.
"""

import itertools
import random

from fractions import Fraction

from fqcong.gfarith import field_for_order
from fqcong.geometry import PointSet, rank, space_for
from fqcong.congruence import (
    brute_force_congruent,
    class_size,
    congruence_key,
    full_census,
)
from fqcong.isogroup import (
    all_subspaces,
    gl_order,
    is_orthogonal,
    iso_group_size,
    orthogonal_group,
    radical,
    subspace_orbit_reps,
    witt_complement,
)
from fqcong.spectral import (
    bound_ratio_report,
    congruence_chain,
    inversion_deviation,
    moment,
    moment_oracle,
    nu_factorization_check,
    nu_row,
    plancherel_deviation,
)
from fqcong.harness import proportion_floor, sample_set, threshold_size

FLOAT_TOL = 1e-9


def _verdict(capsys, index: int, label: str, failures: list) -> None:
    with capsys.disabled():
        print(f"\n[{index}/7] {label}: {'FAIL' if failures else 'PASS'}")


# -- 1: the congruence key against the rigid-motion scan -------------------------

def test_key_equality_agrees_with_the_motion_scan_oracle(capsys, f3, f5, g32, g52,
                                                         s32, s52):
    failures = []

    # every pair of triples over F_3^2, checked through the class partition:
    # members match their representative, representatives are pairwise distinct
    by_key = {}
    for cfg in itertools.product(range(s32.size), repeat=3):
        by_key.setdefault(congruence_key(s32, cfg), []).append(cfg)
    reps = []
    for key, members in by_key.items():
        reps.append(members[0])
        for other in members[1:]:
            if not brute_force_congruent(g32, members[0], other):
                failures.append(f"same key, oracle disagrees: {members[0]} {other}")
    for a, b in itertools.combinations(reps, 2):
        if brute_force_congruent(g32, a, b):
            failures.append(f"distinct keys, oracle congruent: {a} {b}")

    # seeded random pairs over F_5^2 at both configuration sizes, with
    # congruent images and degenerate line configurations mixed in
    rng = random.Random(52040)
    sub = s52.sub_table
    neg = [sub[0][c] for c in range(s52.size)]
    iso = (1, 2)  # norm 1 + 4 = 0: a degenerate direction
    assert s52.norm(s52.encode(iso)) == 0

    def random_config(m):
        return tuple(rng.randrange(s52.size) for _ in range(m))

    def motion_image(cfg):
        i = rng.randrange(len(g52))
        z = rng.randrange(s52.size)
        perm = g52.perms[i]
        return tuple(sub[perm[c]][neg[z]] for c in cfg)

    def line_config(m):
        tx, ty = rng.randrange(5), rng.randrange(5)
        pts = []
        for _ in range(m):
            a = rng.randrange(5)
            pts.append(((a * iso[0] + tx) % 5, (a * iso[1] + ty) % 5))
        return tuple(s52.encode(p) for p in pts)

    for m in (3, 4):
        pairs = [(random_config(m), random_config(m)) for _ in range(1200)]
        for _ in range(1200):
            x = random_config(m)
            pairs.append((x, motion_image(x)))
        pairs += [(line_config(m), line_config(m)) for _ in range(100)]
        assert len(pairs) == 2500
        for x, y in pairs:
            key_eq = congruence_key(s52, x) == congruence_key(s52, y)
            if key_eq != brute_force_congruent(g52, x, y):
                failures.append(f"key/oracle disagreement at size {m}: {x} {y}")

    _verdict(capsys, 1, "congruence key agrees with the rigid-motion oracle",
             failures)
    assert not failures, failures[:5]


# -- 2: exact census against the counting identities ---------------------------------

def test_census_counts_match_the_counting_identities(capsys, census_grid):
    failures = []
    for (q, d, k), rep in census_grid.items():
        tag = f"(q={q}, d={d}, k={k})"
        if not Fraction(1, 16) <= rep.ratio <= 16:
            failures.append(f"{tag}: ratio {rep.ratio} outside [1/16, 16]")
        free_action = (rep.nondegenerate_classes * q**d * rep.group_order
                       == rep.nondegenerate_tuples)
        if not (free_action and rep.free_action_consistent):
            failures.append(f"{tag}: free-action identity failed")
        degenerate_tuples = sum(rep.strata_tuples.values())
        if rep.nondegenerate_tuples != q**(d * (k + 1)) - degenerate_tuples:
            failures.append(f"{tag}: tuple partition failed")
        for r, count in rep.strata_classes.items():
            if count > 16 * rep.heuristic:
                failures.append(f"{tag}: stratum r={r} exceeds 16x heuristic")
        if not rep.vr_consistent:
            failures.append(f"{tag}: representative recount mismatch")
    if census_grid[(3, 2, 2)].nondegenerate_classes != 6:
        failures.append("non-degenerate classes at (3,2,2) is not 6")

    _verdict(capsys, 2, "census counts match the counting identities", failures)
    assert not failures, failures[:5]


# -- 3: orthogonal groups and Witt decomposition ----------------------------------------

def _matrix_scan_order(field, d):
    space = space_for(field, d)
    vectors = [space.coords[c] for c in space.vectors()]
    return sum(
        1 for rows in itertools.product(vectors, repeat=d)
        if is_orthogonal(field, rows))


def _closure_and_inverses_ok(group) -> bool:
    n = group.space.size
    for i in range(len(group)):
        j = group.inverse_index(i)
        if group.product_index(i, j) != group.identity_index:
            return False
        for k in range(len(group)):
            composed = group.perms[group.product_index(i, k)]
            pi, pk = group.perms[i], group.perms[k]
            if any(composed[c] != pi[pk[c]] for c in range(n)):
                return False
    return True


def test_orthogonal_groups_and_witt_decomposition_check_out(capsys, f3, f5,
                                                            g32, g52, g33):
    failures = []
    for group, order in ((g32, 8), (g52, 8), (g33, 48)):
        q, d = group.field.q, group.d
        if len(group) != order:
            failures.append(f"|O(F_{q}^{d})| = {len(group)}, expected {order}")
        if _matrix_scan_order(group.field, d) != order:
            failures.append(f"matrix scan at (q={q}, d={d}) != {order}")
        if not _closure_and_inverses_ok(group):
            failures.append(f"closure/inverse failed at (q={q}, d={d})")

    for group in (g32, g52, g33):
        space, field = group.space, group.field
        for r in range(space.d + 1):
            for V in all_subspaces(space, r):
                kernel, comp = witt_complement(V)
                if kernel.rows != radical(V).rows:
                    failures.append(f"kernel is not the radical: {V.rows}")
                if kernel.dim + comp.dim != V.dim:
                    failures.append(f"dimension split failed: {V.rows}")
                if comp.dim and rank(field, comp.gram()) != comp.dim:
                    failures.append(f"degenerate complement: {V.rows}")
            # isometries of V contain a GL(kernel) x Iso(complement) block family
            for rep in subspace_orbit_reps(group, r):
                kernel, comp = witt_complement(rep)
                floor = gl_order(field.q, kernel.dim) * iso_group_size(comp)
                if iso_group_size(rep) < floor:
                    failures.append(
                        f"isometry group below the block bound: {rep.rows}")

    _verdict(capsys, 3, "orthogonal group orders and Witt decomposition verified",
             failures)
    assert not failures, failures[:5]


# -- 4: exact integer identities ------------------------------------------------------------

def test_pair_count_and_partition_identities_are_exact(capsys, f3, f5, g32, g52,
                                                       s32, s52):
    failures = []

    full32 = PointSet(s32, list(s32.vectors()))
    test_sets = [(full32, g32)]
    test_sets += [(sample_set(f3, 2, n, n), g32) for n in (2, 4, 6)]
    test_sets += [(sample_set(f5, 2, n, n), g52) for n in (3, 7, 12)]
    for E, group in test_sets:
        want = len(E) ** 2
        if any(sum(nu_row(E, perm)) != want for perm in group.perms):
            failures.append(f"pair-count row sum != |E|^2 for |E| = {len(E)}")

    for n in range(2, 7):
        E = sample_set(f3, 2, n, 100 + n)
        for p in (1, 2, 3):
            if moment(E, g32, p) != moment_oracle(E, g32, p):
                failures.append(f"moment p={p} mismatch at |E| = {n}")

    for k in (1, 2, 3):
        reps = {}
        for cfg in itertools.product(range(s32.size), repeat=k + 1):
            reps.setdefault(congruence_key(s32, cfg), cfg)
        total = sum(class_size(g32, cfg) for cfg in reps.values())
        if total != s32.size ** (k + 1):
            failures.append(f"class sizes do not partition the tuples at k={k}")

    _verdict(capsys, 4, "pair-count and partition identities exact", failures)
    assert not failures, failures[:5]


# -- 5: Fourier identities -------------------------------------------------------------------

def test_fourier_identities_hold_to_tolerance(capsys, f3, f5, g52, s32, s52, s33):
    failures = []
    rng = random.Random(8128)
    for space in (s32, s52, s33, space_for(f5, 4)):
        values = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                  for _ in range(space.size)]
        if plancherel_deviation(space, values) >= FLOAT_TOL:
            failures.append(f"Plancherel deviation at size {space.size}")
        if inversion_deviation(space, values) >= FLOAT_TOL:
            failures.append(f"inversion deviation at size {space.size}")

    for seed in range(20):
        E = sample_set(f5, 2, 4 + seed, seed)
        check = nu_factorization_check(E, g52)
        if check.max_deviation >= FLOAT_TOL:
            failures.append(f"factorization deviation at seed {seed}")
        if not check.zero_frequency_ok:
            failures.append(f"zero frequency inexact at seed {seed}")

    _verdict(capsys, 5, "Fourier identities within 1e-9 and exact at zero",
             failures)
    assert not failures, failures[:5]


# -- 6: the chain at the threshold size ----------------------------------------------------

def test_threshold_sets_realize_a_positive_class_proportion(capsys):
    failures = []
    for q in (5, 7):
        field = field_for_order(q)
        group = orthogonal_group(field, 2)
        for k in (2, 3):
            census = full_census(field, 2, k)
            n = threshold_size(q, 2, k)
            floor = proportion_floor(k)
            for seed in (11, 12, 13, 14, 15):
                tag = f"(q={q}, k={k}, n={n}, seed={seed})"
                E = sample_set(field, 2, n, seed)
                chain = congruence_chain(E, group, k)
                if not chain.cauchy_schwarz_ok:
                    failures.append(f"{tag}: |E|^(2k+2) > classes x pairs")
                if not chain.moment_domination_ok:
                    failures.append(f"{tag}: congruent pairs exceed the moment")
                proportion = Fraction(chain.delta_count, census.total_classes)
                if proportion < floor:
                    failures.append(f"{tag}: proportion {proportion} < {floor}")

    _verdict(capsys, 6, "threshold-size sets realize a positive class proportion",
             failures)
    assert not failures, failures[:5]


# -- 7: bound ratios across q ------------------------------------------------------------------

def test_moment_bound_ratios_do_not_grow_with_q(capsys):
    failures = []
    maxima = {}
    for q in (3, 5, 7):
        field = field_for_order(q)
        group = orthogonal_group(field, 2)
        n = threshold_size(q, 2, 2)   # ceil(q^(5/3)): 7, 15, 26
        kind_max = {"second": Fraction(0), "centered": Fraction(0),
                    "high": Fraction(0)}
        for seed in (11, 12, 13, 14, 15):
            E = sample_set(field, 2, n, seed)
            rep = bound_ratio_report(E, group, 2)
            ratios = {"second": rep.second_ratio, "centered": rep.centered_ratio,
                      "high": rep.high_ratio}
            for kind, ratio in ratios.items():
                if not ratio > 0:
                    failures.append(f"(q={q}, seed={seed}): {kind} ratio not "
                                    "a positive rational")
                kind_max[kind] = max(kind_max[kind], ratio)
        maxima[q] = kind_max

    for kind in ("second", "centered", "high"):
        small = max(maxima[3][kind], maxima[5][kind])
        if maxima[7][kind] > 2 * small:
            failures.append(
                f"{kind} ratio grows with q: {float(maxima[7][kind]):.4f} at "
                f"q=7 vs {float(small):.4f} over q in (3, 5)")

    _verdict(capsys, 7, "moment bound ratios stay bounded across q", failures)
    assert not failures, failures[:5]
