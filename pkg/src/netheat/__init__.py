"""Heat flow and span decomposition on networks with infinite-degree nodes."""

__version__ = "0.1.0"

from .connectivity import (
    SpanPartition,
    UnionFind,
    count_invariant_ideals,
    delta_components,
    finite_span,
    is_irreducible,
    pathwise_connected,
)
from .forms import (
    EdgeFunction,
    check_invariance,
    in_form_domain,
    norms,
    project_ideal,
    tent_function,
    vertex_trace,
)
from .graph import (
    Edge,
    Graph,
    GraphError,
    SparseIncidence,
    Subgraph,
    Vertex,
    build_graph,
    degree,
    finite_part,
    incidence,
    induced_subgraph,
    star,
)
from .heat import (
    HeatState,
    Mesh,
    OperatorPair,
    SolverError,
    assemble,
    build_mesh,
    evolve,
    support_profile,
    verify_strong_max_principle,
)
from .operators import (
    apply,
    apply_transpose,
    operator_norm,
    unbounded_witness,
    verify_contraction_l1_linf,
)
from .spectral import (
    CombinatorialLaplacian,
    check_component_theorem,
    combinatorial_laplacian,
    network_spectrum,
    zero_multiplicity,
)
