"""Exact cohomology computations for Coxeter groups, graph products,
Bestvina-Brady groups and polyhedral joins."""

__version__ = "0.1.0"

from .errors import (CohomError, InsufficientData, InvalidInput, InvalidPosetOfSpaces, PoleError,
                     ProvisoViolation, RegimeUncertifiable, ResourceCap)
from .simplicial import (MirroredChamber, PjoinContext, Poset, SimplicialComplex, barycentric_subdivision,
                         chamber, cycle_graph, face_poset, flag_complex, full_subcomplex, join, link,
                         octahedralization, octahedron_boundary, order_complex, path_graph,
                         polyhedral_join, rp2_six_vertex, sphere0)
from .homology import (FgAbelianGroup, GradedGroups, betti_numbers, complement_pair_cohomology,
                       homology_groups, link_pair_cohomology, smith_normal_form, with_coefficients)
from .coxeter import (INF, CoxeterSystem, MultiParameter, RegimeCertificate, classify_finite,
                      enumerate_words, finite_type, growth_series, radius_of_convergence,
                      reciprocal_growth, regime_test, spherical_poset)
from .weighted import (CoxeterVertex, FiniteOfOrder, InfiniteGeneric, IntegerGroup,
                       VertexGroupDescriptor, dim_D, dims_D, graph_product_system,
                       l2_graphproduct_finite, oct_limits, oct_weighted, weighted_betti,
                       weighted_graphproduct)
from .products import (GradedModuleExpr, L2Profile, duality_report, groupring_bb, groupring_coxeter,
                       groupring_graphproduct, groupring_salvetti, l2_bb, l2_graphproduct,
                       l2_salvetti, pjoin_cohomology, pjoin_direct, pjoin_formula)
from .mvss import PosetOfSpaces, build_pages, check_conditions, pjoin_cover, verify_decomposition

__all__ = [
    "CohomError",
    "CoxeterSystem",
    "CoxeterVertex",
    "FgAbelianGroup",
    "FiniteOfOrder",
    "GradedGroups",
    "GradedModuleExpr",
    "INF",
    "InfiniteGeneric",
    "InsufficientData",
    "IntegerGroup",
    "InvalidInput",
    "InvalidPosetOfSpaces",
    "L2Profile",
    "MirroredChamber",
    "MultiParameter",
    "PjoinContext",
    "PoleError",
    "Poset",
    "PosetOfSpaces",
    "ProvisoViolation",
    "RegimeCertificate",
    "RegimeUncertifiable",
    "ResourceCap",
    "SimplicialComplex",
    "VertexGroupDescriptor",
    "barycentric_subdivision",
    "betti_numbers",
    "build_pages",
    "chamber",
    "check_conditions",
    "classify_finite",
    "complement_pair_cohomology",
    "cycle_graph",
    "dim_D",
    "dims_D",
    "duality_report",
    "enumerate_words",
    "face_poset",
    "finite_type",
    "flag_complex",
    "full_subcomplex",
    "graph_product_system",
    "groupring_bb",
    "groupring_coxeter",
    "groupring_graphproduct",
    "groupring_salvetti",
    "growth_series",
    "homology_groups",
    "join",
    "l2_bb",
    "l2_graphproduct",
    "l2_graphproduct_finite",
    "l2_salvetti",
    "link",
    "link_pair_cohomology",
    "oct_limits",
    "oct_weighted",
    "octahedralization",
    "octahedron_boundary",
    "order_complex",
    "path_graph",
    "pjoin_cohomology",
    "pjoin_cover",
    "pjoin_direct",
    "pjoin_formula",
    "polyhedral_join",
    "radius_of_convergence",
    "reciprocal_growth",
    "regime_test",
    "rp2_six_vertex",
    "smith_normal_form",
    "sphere0",
    "spherical_poset",
    "verify_decomposition",
    "weighted_betti",
    "weighted_graphproduct",
    "with_coefficients",
]
