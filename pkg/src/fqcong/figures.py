"""Figure rendering for experiment reports.

Every plot is derived from ExperimentReport values alone, so figures can be
re-rendered from any run.  Files land next to the report file that the CLI
writes: <stem>_census.png, <stem>_moment_ratios.png, <stem>_proportions.png —
one file per figure kind, and only for kinds with data present.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .harness import ExperimentReport, proportion_floor  # noqa: E402

__all__ = ["render_figures"]


def _label(spec) -> str:
    text = f"q={spec.q} d={spec.d} k={spec.k}"
    if spec.source == "random":
        text += f" seed={spec.seed}"
    elif spec.source != "full":
        text += f" {spec.source}"
    return text


def render_figures(reports: list[ExperimentReport], out_path) -> list[Path]:
    """Render available figures next to out_path; returns the files written."""
    stem = Path(out_path).with_suffix("")
    made: list[Path] = []
    with_census = [r for r in reports if r.census is not None]
    if with_census:
        made.append(_census_figure(with_census, Path(f"{stem}_census.png")))
    with_moments = [r for r in reports if r.moments is not None]
    if with_moments:
        made.append(_ratio_figure(with_moments, Path(f"{stem}_moment_ratios.png")))
    with_proportion = [r for r in reports if r.proportion is not None]
    if with_proportion:
        made.append(_proportion_figure(with_proportion,
                                       Path(f"{stem}_proportions.png")))
    return made


def _census_figure(reports, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(7, 4))
    width = 0.8 / len(reports)
    for i, r in enumerate(reports):
        c = r.census
        xs = sorted(c.strata_classes) + [c.d]
        ys = [c.strata_classes[x] for x in sorted(c.strata_classes)]
        ys.append(c.nondegenerate_classes)
        ax.bar([x + i * width for x in xs], ys, width=width,
               label=_label(r.spec))
    ax.set_xlabel("span dimension of the pinned differences")
    ax.set_ylabel("congruence classes")
    ax.set_yscale("log")
    ax.set_title("class census by stratum")
    ax.legend(fontsize=8)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def _ratio_figure(reports, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(7, 4))
    kinds = [
        ("second_ratio", "o", "second moment / bound"),
        ("centered_ratio", "s", "centered second moment / bound"),
        ("high_ratio", "^", "(k+1)-moment / bound"),
    ]
    for attr, marker, label in kinds:
        xs = [r.moments.q for r in reports]
        ys = [float(getattr(r.moments, attr)) for r in reports]
        ax.scatter(xs, ys, marker=marker, label=label, alpha=0.7)
    ax.set_xlabel("q")
    ax.set_ylabel("LHS / RHS")
    ax.set_yscale("log")
    ax.set_title("moment bound ratios")
    ax.legend(fontsize=8)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def _proportion_figure(reports, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(7, 4))
    xs = list(range(len(reports)))
    exact = [r.delta is not None and r.delta.exact for r in reports]
    ys = [float(r.proportion) for r in reports]
    ax.scatter([x for x, e in zip(xs, exact) if e],
               [y for y, e in zip(ys, exact) if e],
               marker="o", label="exact")
    if not all(exact):
        ax.scatter([x for x, e in zip(xs, exact) if not e],
                   [y for y, e in zip(ys, exact) if not e],
                   marker="v", label="sampled lower bound")
    for k in sorted({r.spec.k for r in reports}):
        ax.axhline(float(proportion_floor(k)), linestyle="--", linewidth=1,
                   label=f"floor 2^-(k²+4), k={k}")
    ax.set_xticks(xs)
    ax.set_xticklabels([_label(r.spec) for r in reports],
                       rotation=30, ha="right", fontsize=7)
    ax.set_ylabel("classes realized / all classes")
    ax.set_ylim(bottom=0)
    ax.set_title("realized proportion of congruence classes")
    ax.legend(fontsize=8)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path
