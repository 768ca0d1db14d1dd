"""Command-line interface.

Subcommands: field-info, group, census, classes, verify, experiment.
Exit codes: 0 when all requested checks pass, 1 when a check fails,
2 on cap overruns or invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .gfarith import CapExceeded, field_for_order, make_field
from .geometry import PointSet, load_set_file, space_for
from .isogroup import orthogonal_group
from .congruence import delta_k_count, full_census
from .spectral import (
    bound_ratio_report,
    congruence_chain,
    moment_oracle,
    nu_factorization_check,
    nu_row,
)
from .harness import (
    ExperimentSpec,
    VALID_CHECKS,
    load_specs,
    proportion_floor,
    run_many,
    sample_set,
    threshold_size,
    write_csv,
    write_json,
)

DEVIATION_TOL = 1e-9
ORACLE_BUDGET = 500_000


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fqcong",
        description="Exact congruence-class counting over F_q^d.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field-info", help="describe a finite field")
    p.add_argument("--p", type=int, required=True, help="odd prime")
    p.add_argument("--e", type=int, default=1, help="extension degree")
    p.add_argument("--modulus", type=int, nargs="+", default=None,
                   help="monic modulus coefficients, low to high")
    p.set_defaults(func=_cmd_field_info)

    p = sub.add_parser("group", help="enumerate the orthogonal group")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=_cmd_group)

    p = sub.add_parser("census", help="exact class census of the full space")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=_cmd_census)

    p = sub.add_parser("classes", help="count classes realized by a point set")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--set", dest="set_file", help="set file to load")
    src.add_argument("--random", type=int, metavar="N",
                     help="draw N uniform points")
    p.add_argument("--seed", type=int, default=0, help="PRNG seed")
    p.add_argument("--sample", type=int, default=None,
                   help="sample this many tuples instead of enumerating")
    p.set_defaults(func=_cmd_classes)

    p = sub.add_parser("verify", help="run one verification suite")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--check", required=True,
                   choices=("lemma3", "lemma4", "lemma5", "thm1", "thm2"))
    src = p.add_mutually_exclusive_group()
    src.add_argument("--set", dest="set_file", help="set file to load")
    src.add_argument("--random", type=int, metavar="N",
                     help="draw N uniform points")
    p.add_argument("--seed", type=int, default=0, help="PRNG seed")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("experiment", help="run experiments and write reports")
    p.add_argument("--spec", help="JSON spec file")
    p.add_argument("--q", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--source", choices=("full", "random", "file"),
                   default="random")
    p.add_argument("--size", type=int, default=None,
                   help="random set size; default = threshold size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--set", dest="set_file", default=None)
    p.add_argument("--checks", default="census,thm2chain",
                   help=f"comma list from {','.join(VALID_CHECKS)}")
    p.add_argument("--out", required=True, help="report file to write")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--figures", action="store_true",
                   help="render figures next to the report")
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes; default = available parallelism")
    p.set_defaults(func=_cmd_experiment)

    return parser


def _cmd_field_info(args) -> int:
    field = make_field(args.p, args.e, args.modulus)
    print(f"q = {field.q} (p = {field.p}, e = {field.e})")
    print("modulus coefficients (low to high):",
          " ".join(str(c) for c in field.modulus))
    zeros = sum(1 for a in field.elements() if field.trace(a) == 0)
    print(f"trace-zero elements: {zeros} (= q/p = {field.q // field.p})")
    total = sum(field.char(a) for a in field.elements())
    print(f"character sum over the field: {abs(total):.2e} (exact value 0)")
    return 0


def _cmd_group(args) -> int:
    field = field_for_order(args.q)
    group = orthogonal_group(field, args.d)
    order = len(group)
    c = args.d * (args.d - 1) // 2
    print(f"|O(F_{args.q}^{args.d})| = {order}")
    print(f"order / q^(d(d-1)/2) = {Fraction(order, args.q**c)}")
    return 0


def _cmd_census(args) -> int:
    field = field_for_order(args.q)
    rep = full_census(field, args.d, args.k)
    for r in sorted(rep.strata_classes):
        print(f"stratum r={r}: {rep.strata_classes[r]} classes "
              f"({rep.strata_tuples[r]} configurations) "
              f"[recount {rep.vr_classes[r]}]")
    print(f"non-degenerate: {rep.nondegenerate_classes} classes "
          f"({rep.nondegenerate_tuples} configurations)")
    print(f"total classes: {rep.total_classes}")
    print(f"heuristic q^(d(k+1)-d(d+1)/2) = {rep.heuristic}, "
          f"ratio = {rep.ratio} = {float(rep.ratio):.4f}")
    ok = rep.vr_consistent and rep.free_action_consistent
    print("stratum recount:", "PASS" if rep.vr_consistent else "FAIL")
    print("free-action identity:", "PASS" if rep.free_action_consistent else "FAIL")
    return 0 if ok else 1


def _resolve_cli_set(args, *, default_full=True):
    field = field_for_order(args.q)
    space = space_for(field, args.d)
    if getattr(args, "set_file", None):
        return field, load_set_file(space, args.set_file)
    if getattr(args, "random", None) is not None:
        return field, sample_set(field, args.d, args.random, args.seed)
    if default_full:
        return field, PointSet(space, list(space.vectors()))
    n = threshold_size(args.q, args.d, args.k)
    return field, sample_set(field, args.d, n, args.seed)


def _cmd_classes(args) -> int:
    field, E = _resolve_cli_set(args)
    dc = delta_k_count(E, args.k, sample=args.sample,
                       seed=args.seed if args.sample else None)
    kind = "exact" if dc.exact else "lower bound (sampled)"
    print(f"|E| = {len(E)}, k = {args.k}")
    for r, c in dc.by_stratum.items():
        print(f"span dimension {r}: {c} classes")
    print(f"distinct classes: {dc.total} ({kind}, "
          f"{dc.tuples_visited} tuples visited)")
    return 0


def _checkline(label: str, ok: bool) -> bool:
    print(f"{'PASS' if ok else 'FAIL'}: {label}")
    return ok


def _cmd_verify(args) -> int:
    checks = {
        "lemma3": _verify_factorization,
        "lemma4": _verify_second_moment,
        "lemma5": _verify_high_moment,
        "thm1": _verify_census,
        "thm2": _verify_chain,
    }
    return 0 if checks[args.check](args) else 1


def _verify_factorization(args) -> bool:
    field, E = _resolve_cli_set(args)
    group = orthogonal_group(field, args.d)
    chk = nu_factorization_check(E, group)
    ok = _checkline(
        f"transform of the pair count factorizes, max deviation "
        f"{chk.max_deviation:.2e} < {DEVIATION_TOL:.0e}",
        chk.max_deviation < DEVIATION_TOL)
    ok &= _checkline("zero frequency equals |E|^2/q^d exactly",
                     chk.zero_frequency_ok)
    return ok


def _verify_second_moment(args) -> bool:
    field, E = _resolve_cli_set(args)
    group = orthogonal_group(field, args.d)
    rep = bound_ratio_report(E, group, args.k)
    n = len(E)
    rows_ok = all(
        sum(nu_row(E, perm)) == n * n for perm in group.perms)
    ok = _checkline("every pair-count row sums to |E|^2", rows_ok)
    split_ok = (Fraction(rep.second_moment)
                == len(group) * Fraction(n**4, E.space.size)
                + rep.centered_second)
    ok &= _checkline("second moment splits into mean term + centered term",
                     split_ok)
    if n**4 * len(group) <= ORACLE_BUDGET:
        ok &= _checkline("second moment matches the tuple-counting oracle",
                         rep.second_moment == moment_oracle(E, group, 2))
    print(f"  second moment {rep.second_moment}, bound {rep.second_bound}, "
          f"ratio {float(rep.second_ratio):.4f}")
    print(f"  centered second {rep.centered_second}, bound "
          f"{rep.centered_bound}, ratio {float(rep.centered_ratio):.4f}")
    return ok


def _verify_high_moment(args) -> bool:
    field, E = _resolve_cli_set(args)
    group = orthogonal_group(field, args.d)
    rep = bound_ratio_report(E, group, args.k)
    n = len(E)
    ok = True
    if n**(2 * (args.k + 1)) * len(group) <= ORACLE_BUDGET:
        ok &= _checkline(
            "(k+1)-moment matches the tuple-counting oracle",
            rep.high_moment == moment_oracle(E, group, args.k + 1))
    ok &= _checkline(
        f"(k+1)-moment ratio finite: {float(rep.high_ratio):.6f}",
        rep.high_bound > 0)
    print(f"  moment {rep.high_moment}, bound {rep.high_bound}, "
          f"within bound: {rep.high_moment <= rep.high_bound}")
    return ok


def _verify_census(args) -> bool:
    field = field_for_order(args.q)
    rep = full_census(field, args.d, args.k)
    ok = _checkline("degenerate strata match the representative recount",
                    rep.vr_consistent)
    ok &= _checkline(
        "non-degenerate classes x q^d|O| = non-degenerate configurations",
        rep.free_action_consistent)
    ratio_ok = Fraction(1, 16) <= rep.ratio <= 16
    ok &= _checkline(
        f"total/heuristic ratio {rep.ratio} inside [1/16, 16]", ratio_ok)
    strata_ok = all(c <= 16 * rep.heuristic
                    for c in rep.strata_classes.values())
    ok &= _checkline("every degenerate stratum is at most 16x the heuristic",
                     strata_ok)
    return ok


def _verify_chain(args) -> bool:
    field, E = _resolve_cli_set(args, default_full=False)
    group = orthogonal_group(field, args.d)
    chain = congruence_chain(E, group, args.k)
    ok = _checkline(
        f"|E|^(2k+2) = {chain.lhs} <= classes x congruent pairs = "
        f"{chain.delta_count * chain.congruent_pairs}",
        chain.cauchy_schwarz_ok)
    ok &= _checkline(
        f"congruent pairs {chain.congruent_pairs} <= (k+1)-moment "
        f"{chain.high_moment}",
        chain.moment_domination_ok)
    census = full_census(field, args.d, args.k)
    proportion = Fraction(chain.delta_count, census.total_classes)
    floor = proportion_floor(args.k)
    print(f"  realized proportion {proportion} = {float(proportion):.4f} "
          f"(floor {floor} at threshold size "
          f"{threshold_size(args.q, args.d, args.k)})")
    if len(E) >= threshold_size(args.q, args.d, args.k):
        ok &= _checkline("proportion at threshold size is above the floor",
                         proportion >= floor)
    return ok


def _cmd_experiment(args) -> int:
    if args.spec:
        specs = load_specs(args.spec)
    else:
        if args.q is None or args.d is None or args.k is None:
            raise ValueError("--q, --d, --k are required without --spec")
        checks = tuple(c.strip() for c in args.checks.split(",") if c.strip())
        specs = [ExperimentSpec(
            q=args.q, d=args.d, k=args.k, source=args.source,
            size=args.size, seed=args.seed, set_file=args.set_file,
            checks=checks)]
    reports = run_many(specs, workers=args.workers)
    if args.format == "json":
        write_json(reports, args.out)
    else:
        write_csv(reports, args.out)
    print(f"wrote {args.out} ({len(reports)} report(s))")
    if args.figures:
        from .figures import render_figures
        for path in render_figures(reports, args.out):
            print(f"wrote {path}")
    failures = []
    capped = []
    for rep in reports:
        failures.extend(_report_failures(rep))
        capped.extend(m for m in rep.cap_errors.values() if m)
    for msg in failures:
        print(f"FAIL: {msg}")
    for msg in capped:
        print(f"capped: {msg}", file=sys.stderr)
    if failures:
        return 1
    if capped:
        return 2
    print("all checks passed")
    return 0


def _report_failures(rep) -> list[str]:
    tag = (f"q={rep.spec.q} d={rep.spec.d} k={rep.spec.k} "
           f"seed={rep.spec.seed}")
    fails = []
    if rep.census is not None:
        if not rep.census.vr_consistent:
            fails.append(f"{tag}: census stratum recount mismatch")
        if not rep.census.free_action_consistent:
            fails.append(f"{tag}: census free-action identity failed")
    if rep.factorization is not None:
        if (rep.factorization.max_deviation >= DEVIATION_TOL
                or not rep.factorization.zero_frequency_ok):
            fails.append(f"{tag}: pair-count factorization identity failed")
    if rep.chain is not None and not (
            rep.chain.cauchy_schwarz_ok and rep.chain.moment_domination_ok):
        fails.append(f"{tag}: congruence chain inequality failed")
    if rep.proportion_ok is False:
        fails.append(f"{tag}: realized proportion below the floor")
    return fails


if __name__ == "__main__":
    sys.exit(main())
