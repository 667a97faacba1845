"""Locally-biased spectral partitioning.

Given a graph and a seed (a node, a node set or a vector), compute the
vector that minimizes the Laplacian quadratic form subject to a correlation
constraint with the seed, round it to low-conductance cuts by sweeping, and
certify lower bounds on the conductance of nearby cuts.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DegenerateCutError,
    DegenerateSeedError,
    DomainError,
    EmptySweepError,
    HypothesisViolation,
    InputError,
    LocalSpecError,
    NumericalError,
    PoleError,
    SolverError,
)
from .graph import (  # noqa: E402
    Cut,
    Graph,
    apply_laplacian,
    complement,
    complete_graph_laplacian,
    conductance,
    d_inner,
    laplacian_quadratic,
    min_conductance_brute,
    min_conductance_containing,
    volume,
)
from .spectral import GeneralizedSpectrum, fiedler_space, full_spectrum, lambda2_v2  # noqa: E402
from .seeds import (  # noqa: E402
    SeedVector,
    correlation_with_set,
    parse_seed_spec,
    seed_from_node,
    seed_from_set,
    seed_from_vector,
    set_correlation,
)
from .resolvent import ResolventResult, eigen_expansion, solve_at_pole, solve_resolvent  # noqa: E402
from .localspectral import (  # noqa: E402
    DualCertificate,
    Solution,
    dual_certificate,
    improvement_bound,
    phi_lower_bound_for_volume,
    solve_for_gamma,
    solve_localspectral,
)
from .partition import (  # noqa: E402
    ProfilePoint,
    SweepResult,
    bfs_ball_baseline,
    global_partition,
    local_cut,
    profile,
    sweep_cut,
    sweep_cut_constrained,
)
from .io import RunManifest, load_graph, parse_edge_list, parse_pajek, write_edge_list  # noqa: E402

__all__ = [name for name in dir() if not name.startswith("_")]
