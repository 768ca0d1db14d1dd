"""Exact congruence-class counting for point configurations over F_q^d.

The library enumerates finite fields and their orthogonal groups exactly,
identifies congruence classes of (k+1)-point configurations by a hashable
key (Gram matrix of pinned differences plus their dependency kernel), runs
full-space censuses with independent recounts, and verifies the Fourier-side
counting identities and moment bounds that control how many classes a random
point set realizes.  The ``fqcong`` CLI drives experiments and writes JSON /
CSV reports with optional figures.
"""

from .gfarith import CapExceeded, Field, field_for_order, make_field
from .geometry import (
    PointSet,
    Space,
    distance_set,
    load_set_file,
    save_set_file,
    space_for,
)
from .isogroup import (
    OrthogonalGroup,
    Subspace,
    all_subspaces,
    extend_isometry,
    iso_group,
    iso_group_size,
    orthogonal_group,
    orthogonal_group_order,
    radical,
    subspace_orbit_reps,
    subspace_orbits,
    transporter_count,
    witt_complement,
)
from .congruence import (
    CensusReport,
    CongruenceKey,
    DeltaCount,
    brute_force_congruent,
    class_multiplicities,
    class_size,
    congruence_key,
    delta_k_count,
    full_census,
    pin,
    threshold_exponent,
)
from .spectral import (
    ChainReport,
    FactorizationCheck,
    MomentReport,
    bound_ratio_report,
    centered_second_moment,
    congruence_chain,
    fourier_transform,
    inverse_fourier_transform,
    moment,
    moment_oracle,
    nu_factorization_check,
    nu_row,
    nu_table,
)
from .harness import (
    ExperimentReport,
    ExperimentSpec,
    proportion_floor,
    report_to_dict,
    run,
    run_many,
    sample_set,
    threshold_size,
    write_csv,
    write_json,
)

__version__ = "0.1.0"

__all__ = [
    "CapExceeded",
    "Field",
    "field_for_order",
    "make_field",
    "PointSet",
    "Space",
    "distance_set",
    "load_set_file",
    "save_set_file",
    "space_for",
    "OrthogonalGroup",
    "Subspace",
    "all_subspaces",
    "extend_isometry",
    "iso_group",
    "iso_group_size",
    "orthogonal_group",
    "orthogonal_group_order",
    "radical",
    "subspace_orbit_reps",
    "subspace_orbits",
    "transporter_count",
    "witt_complement",
    "CensusReport",
    "CongruenceKey",
    "DeltaCount",
    "brute_force_congruent",
    "class_multiplicities",
    "class_size",
    "congruence_key",
    "delta_k_count",
    "full_census",
    "pin",
    "threshold_exponent",
    "ChainReport",
    "FactorizationCheck",
    "MomentReport",
    "bound_ratio_report",
    "centered_second_moment",
    "congruence_chain",
    "fourier_transform",
    "inverse_fourier_transform",
    "moment",
    "moment_oracle",
    "nu_factorization_check",
    "nu_row",
    "nu_table",
    "ExperimentReport",
    "ExperimentSpec",
    "proportion_floor",
    "report_to_dict",
    "run",
    "run_many",
    "sample_set",
    "threshold_size",
    "write_csv",
    "write_json",
]
