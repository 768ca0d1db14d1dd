"""Experiment orchestration: random sets, check suites, and report files.

An ExperimentSpec names a parameter triple (q, d, k), a point-set source
(full space, seeded random sample, or set file), and the checks to run.
Random sets use numpy's PCG64 generator — the seed appears in every report
and fully determines the set.  Reports serialize to JSON (sorted keys) and
to CSV rows under one fixed header; checks that did not run appear as
explicit nulls / empty cells, so the schema never varies.

Threshold-size experiments draw |E| = ceil(q^s) points at the exponent
s = d - (d-1)/(k+1); the ceiling is computed in exact integer arithmetic.
"""

from __future__ import annotations

import csv
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .gfarith import CapExceeded, Field, field_for_order
from .geometry import PointSet, load_set_file, space_for
from .isogroup import orthogonal_group
from .congruence import (
    CensusReport,
    DeltaCount,
    class_multiplicities,
    delta_k_count,
    full_census,
    threshold_exponent,
)
from .spectral import (
    ChainReport,
    FactorizationCheck,
    MomentReport,
    bound_ratio_report,
    moment,
    nu_factorization_check,
)

__all__ = [
    "RNG_NAME",
    "VALID_CHECKS",
    "VALID_SOURCES",
    "CSV_HEADER",
    "ExperimentSpec",
    "ExperimentReport",
    "sample_set",
    "threshold_size",
    "proportion_floor",
    "run",
    "run_many",
    "report_to_dict",
    "write_json",
    "write_csv",
    "load_specs",
]

RNG_NAME = "PCG64"
VALID_CHECKS = ("census", "lemma3", "lemma4", "lemma5", "thm2chain")
VALID_SOURCES = ("full", "random", "file")

DEFAULT_CAP = 10**7
DEFAULT_SAMPLE = 10**6


@dataclass(frozen=True)
class ExperimentSpec:
    """One experiment: parameters, point-set source, and checks to run."""

    q: int
    d: int
    k: int
    source: str = "random"
    size: int | None = None          # random source; None = threshold size
    seed: int | None = None
    set_file: str | None = None
    checks: tuple[str, ...] = ("census", "thm2chain")

    def __post_init__(self):
        if self.source not in VALID_SOURCES:
            raise ValueError(f"unknown source {self.source!r}")
        bad = [c for c in self.checks if c not in VALID_CHECKS]
        if bad:
            raise ValueError(f"unknown checks {bad!r}; valid: {VALID_CHECKS}")
        if not self.checks:
            raise ValueError("at least one check is required")
        if self.source == "random" and self.seed is None:
            raise ValueError("random source requires a seed")
        if self.source == "file" and not self.set_file:
            raise ValueError("file source requires set_file")
        if self.d < 1 or self.k < 1:
            raise ValueError("d and k must be at least 1")

    def to_dict(self) -> dict:
        out = asdict(self)
        out["checks"] = list(self.checks)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentSpec":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown spec fields {sorted(extra)!r}")
        kwargs = dict(data)
        if "checks" in kwargs:
            kwargs["checks"] = tuple(kwargs["checks"])
        return cls(**kwargs)


@dataclass(frozen=True)
class ExperimentReport:
    """Everything one run produced; None marks a check that did not run."""

    spec: ExperimentSpec
    set_size: int
    threshold: Fraction
    threshold_points: int
    census: CensusReport | None
    factorization: FactorizationCheck | None
    moments: MomentReport | None
    chain: ChainReport | None
    delta: DeltaCount | None
    proportion: Fraction | None
    proportion_ok: bool | None
    sampling_mode: bool
    cap_errors: dict[str, str | None]
    wall_clock_seconds: float


def sample_set(field: Field, d: int, n: int, seed: int) -> PointSet:
    """n distinct uniform points of F_q^d; the seed determines them fully."""
    space = space_for(field, d)
    if not 1 <= n <= space.size:
        raise ValueError(f"set size {n} outside [1, {space.size}]")
    rng = np.random.Generator(np.random.PCG64(seed))
    codes = rng.permutation(space.size)[:n]
    return PointSet(space, [int(c) for c in codes])


def threshold_size(q: int, d: int, k: int) -> int:
    """ceil(q^(d - (d-1)/(k+1))) via exact integer comparisons."""
    s = threshold_exponent(d, k)
    a, b = s.numerator, s.denominator
    target = q**a
    n = max(1, int(round(target ** (1.0 / b))))
    while n**b < target:
        n += 1
    while n > 1 and (n - 1)**b >= target:
        n -= 1
    return n


def proportion_floor(k: int) -> Fraction:
    """The desk-grid acceptance floor 2^(-k^2-4) for |Delta_k(E)| / |Delta_k|."""
    return Fraction(1, 2**(k * k + 4))


def _resolve_set(spec: ExperimentSpec, field: Field) -> PointSet:
    space = space_for(field, spec.d)
    if spec.source == "full":
        return PointSet(space, list(space.vectors()))
    if spec.source == "file":
        return load_set_file(space, spec.set_file)
    n = spec.size if spec.size is not None else threshold_size(
        spec.q, spec.d, spec.k)
    return sample_set(field, spec.d, n, spec.seed)


def run(spec: ExperimentSpec, *, exact_cap: int = DEFAULT_CAP,
        sample_size: int = DEFAULT_SAMPLE) -> ExperimentReport:
    """Execute one spec; cap overruns mark the check failed-to-run and move on."""
    t0 = time.perf_counter()
    field = field_for_order(spec.q)
    E = _resolve_set(spec, field)
    cap_errors: dict[str, str | None] = {c: None for c in VALID_CHECKS}

    census = None
    if "census" in spec.checks:
        try:
            census = full_census(field, spec.d, spec.k, exact_cap)
        except CapExceeded as exc:
            cap_errors["census"] = str(exc)

    group = None

    def _group():
        nonlocal group
        if group is None:
            group = orthogonal_group(field, spec.d, exact_cap)
        return group

    factorization = None
    if "lemma3" in spec.checks:
        try:
            factorization = nu_factorization_check(E, _group())
        except CapExceeded as exc:
            cap_errors["lemma3"] = str(exc)

    moments = None
    if "lemma4" in spec.checks or "lemma5" in spec.checks:
        try:
            moments = bound_ratio_report(E, _group(), spec.k)
        except CapExceeded as exc:
            for c in ("lemma4", "lemma5"):
                if c in spec.checks:
                    cap_errors[c] = str(exc)

    # |Delta_k(E)| backs both the chain and the proportion
    delta = None
    chain = None
    sampling = False
    want_chain = "thm2chain" in spec.checks
    needs_delta = want_chain or "census" in spec.checks
    if needs_delta:
        try:
            if spec.source == "full" and census is not None and not want_chain:
                strata = dict(census.strata_classes)
                strata[spec.d] = census.nondegenerate_classes
                delta = DeltaCount(
                    total=census.total_classes,
                    by_stratum={r: c for r, c in sorted(strata.items()) if c},
                    exact=True,
                    tuples_visited=spec.q**(spec.d * (spec.k + 1)))
            elif len(E)**(spec.k + 1) <= exact_cap:
                mult = class_multiplicities(E, spec.k, exact_cap)
                strata_ctr: dict[int, int] = {}
                for key in mult:
                    strata_ctr[key.span_dim] = strata_ctr.get(key.span_dim, 0) + 1
                delta = DeltaCount(
                    total=len(mult),
                    by_stratum=dict(sorted(strata_ctr.items())),
                    exact=True,
                    tuples_visited=len(E)**(spec.k + 1))
                if want_chain:
                    mh = moment(E, _group(), spec.k + 1)
                    pairs = sum(c * c for c in mult.values())
                    lhs = len(E)**(2 * (spec.k + 1))
                    chain = ChainReport(
                        set_size=len(E), k=spec.k, delta_count=len(mult),
                        congruent_pairs=pairs, high_moment=mh, lhs=lhs,
                        cauchy_schwarz_ok=lhs <= len(mult) * pairs,
                        moment_domination_ok=pairs <= mh)
            else:
                sampling = True
                delta = delta_k_count(E, spec.k, sample=sample_size,
                                      seed=spec.seed or 0)
                if want_chain:
                    cap_errors["thm2chain"] = (
                        "exact pair count infeasible under the cap; "
                        "sampling gives only a class-count lower bound")
        except CapExceeded as exc:
            if want_chain:
                cap_errors["thm2chain"] = str(exc)

    proportion = None
    proportion_ok = None
    needed = threshold_size(spec.q, spec.d, spec.k)
    if delta is not None and census is not None:
        proportion = Fraction(delta.total, census.total_classes)
        floor = proportion_floor(spec.k)
        if len(E) < needed:
            proportion_ok = None      # the floor is claimed at threshold size
        elif proportion >= floor:
            proportion_ok = True
        elif delta.exact:
            proportion_ok = False
        # a sampled lower bound below the floor stays inconclusive (None)

    return ExperimentReport(
        spec=spec, set_size=len(E),
        threshold=threshold_exponent(spec.d, spec.k),
        threshold_points=needed,
        census=census, factorization=factorization, moments=moments,
        chain=chain, delta=delta, proportion=proportion,
        proportion_ok=proportion_ok, sampling_mode=sampling,
        cap_errors=cap_errors,
        wall_clock_seconds=time.perf_counter() - t0,
    )


def run_many(specs, workers: int | None = None, **kwargs) -> list[ExperimentReport]:
    """Run specs in input order; worker processes never change the results."""
    specs = list(specs)
    if workers is None:
        workers = os.cpu_count() or 1
    workers = max(1, min(workers, len(specs)))
    if workers == 1 or len(specs) <= 1:
        return [run(s, **kwargs) for s in specs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_kw, ((s, kwargs) for s in specs)))


def _run_kw(item):
    spec, kwargs = item
    return run(spec, **kwargs)


# -- serialization -----------------------------------------------------------------

def _frac(x: Fraction | None) -> str | None:
    return None if x is None else str(Fraction(x))


def report_to_dict(report: ExperimentReport) -> dict:
    """JSON-ready dict with a fixed key set; exact values stay exact as strings."""
    spec = report.spec
    census = None
    if report.census is not None:
        c = report.census
        census = {
            "strata_classes": {str(r): v for r, v in c.strata_classes.items()},
            "strata_tuples": {str(r): v for r, v in c.strata_tuples.items()},
            "nondegenerate_classes": c.nondegenerate_classes,
            "nondegenerate_tuples": c.nondegenerate_tuples,
            "total_classes": c.total_classes,
            "heuristic": _frac(c.heuristic),
            "ratio": _frac(c.ratio),
            "group_order": c.group_order,
            "vr_classes": {str(r): v for r, v in c.vr_classes.items()},
            "vr_consistent": c.vr_consistent,
            "free_action_consistent": c.free_action_consistent,
        }
    factorization = None
    if report.factorization is not None:
        factorization = {
            "max_deviation": report.factorization.max_deviation,
            "zero_frequency_ok": report.factorization.zero_frequency_ok,
        }
    moments = None
    if report.moments is not None:
        m = report.moments
        moments = {
            "set_size": m.set_size,
            "group_order": m.group_order,
            "second_moment": m.second_moment,
            "high_moment": m.high_moment,
            "centered_second": _frac(m.centered_second),
            "second_bound": _frac(m.second_bound),
            "second_ratio": _frac(m.second_ratio),
            "centered_bound": _frac(m.centered_bound),
            "centered_ratio": _frac(m.centered_ratio),
            "high_bound": _frac(m.high_bound),
            "high_ratio": _frac(m.high_ratio),
        }
    chain = None
    if report.chain is not None:
        ch = report.chain
        chain = {
            "delta_count": ch.delta_count,
            "congruent_pairs": ch.congruent_pairs,
            "high_moment": ch.high_moment,
            "lhs": ch.lhs,
            "cauchy_schwarz_ok": ch.cauchy_schwarz_ok,
            "moment_domination_ok": ch.moment_domination_ok,
        }
    delta = None
    if report.delta is not None:
        delta = {
            "total": report.delta.total,
            "by_stratum": {str(r): v for r, v in report.delta.by_stratum.items()},
            "exact": report.delta.exact,
            "tuples_visited": report.delta.tuples_visited,
        }
    return {
        "spec": spec.to_dict(),
        "rng": RNG_NAME,
        "set_size": report.set_size,
        "threshold_exponent": _frac(report.threshold),
        "threshold_points": report.threshold_points,
        "census": census,
        "factorization": factorization,
        "moments": moments,
        "chain": chain,
        "delta": delta,
        "proportion": _frac(report.proportion),
        "proportion_floor": _frac(proportion_floor(spec.k)),
        "proportion_ok": report.proportion_ok,
        "sampling_mode": report.sampling_mode,
        "cap_errors": dict(report.cap_errors),
        "wall_clock_seconds": report.wall_clock_seconds,
    }


def write_json(reports, path) -> None:
    payload = {"reports": [report_to_dict(r) for r in reports]}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


CSV_HEADER = [
    "q", "d", "k", "source", "size", "seed", "set_file", "checks",
    "set_size", "threshold_exponent", "threshold_points",
    "census_total", "census_nondegenerate", "census_heuristic", "census_ratio",
    "census_vr_consistent", "census_free_action_consistent",
    "factorization_max_deviation", "factorization_zero_frequency_ok",
    "second_moment", "second_ratio", "centered_ratio",
    "high_moment", "high_ratio",
    "delta_total", "delta_exact", "congruent_pairs",
    "chain_cauchy_schwarz_ok", "chain_moment_domination_ok",
    "proportion", "proportion_floor", "proportion_ok",
    "sampling_mode", "cap_errors", "wall_clock_seconds",
]


def write_csv(reports, path) -> None:
    rows = []
    for r in reports:
        d = report_to_dict(r)
        spec = d["spec"]
        census = d["census"] or {}
        fact = d["factorization"] or {}
        mom = d["moments"] or {}
        chain = d["chain"] or {}
        delta = d["delta"] or {}
        caps = ";".join(
            f"{c}:{msg}" for c, msg in sorted(d["cap_errors"].items()) if msg)
        rows.append({
            "q": spec["q"], "d": spec["d"], "k": spec["k"],
            "source": spec["source"], "size": spec["size"],
            "seed": spec["seed"], "set_file": spec["set_file"],
            "checks": "|".join(spec["checks"]),
            "set_size": d["set_size"],
            "threshold_exponent": d["threshold_exponent"],
            "threshold_points": d["threshold_points"],
            "census_total": census.get("total_classes"),
            "census_nondegenerate": census.get("nondegenerate_classes"),
            "census_heuristic": census.get("heuristic"),
            "census_ratio": census.get("ratio"),
            "census_vr_consistent": census.get("vr_consistent"),
            "census_free_action_consistent": census.get("free_action_consistent"),
            "factorization_max_deviation": fact.get("max_deviation"),
            "factorization_zero_frequency_ok": fact.get("zero_frequency_ok"),
            "second_moment": mom.get("second_moment"),
            "second_ratio": mom.get("second_ratio"),
            "centered_ratio": mom.get("centered_ratio"),
            "high_moment": mom.get("high_moment"),
            "high_ratio": mom.get("high_ratio"),
            "delta_total": delta.get("total"),
            "delta_exact": delta.get("exact"),
            "congruent_pairs": chain.get("congruent_pairs"),
            "chain_cauchy_schwarz_ok": chain.get("cauchy_schwarz_ok"),
            "chain_moment_domination_ok": chain.get("moment_domination_ok"),
            "proportion": d["proportion"],
            "proportion_floor": d["proportion_floor"],
            "proportion_ok": d["proportion_ok"],
            "sampling_mode": d["sampling_mode"],
            "cap_errors": caps,
            "wall_clock_seconds": f"{d['wall_clock_seconds']:.6f}",
        })
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_HEADER, restval="")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: ("" if v is None else v) for k, v in row.items()})


def load_specs(path) -> list[ExperimentSpec]:
    """Spec file: one JSON object, or {"experiments": [objects...]}."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict) and "experiments" in data:
        items = data["experiments"]
    elif isinstance(data, dict):
        items = [data]
    else:
        items = data
    if not isinstance(items, list) or not items:
        raise ValueError(f"no experiments found in {path}")
    return [ExperimentSpec.from_dict(item) for item in items]
