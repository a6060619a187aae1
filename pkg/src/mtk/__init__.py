"""Exact K-theory and boundary-dynamics computations for group actions on multitrees.

The input is finite quotient data: a directed graph, a stabiliser class per
vertex (trivial or infinite cyclic) and signed indices on the edges.  From it
the package computes K-groups through Smith normal forms, decides minimality,
aperiodicity, local contractivity and topological freeness, and checks all of
these against brute-force oracles.
"""

from .digraph import (DiGraph, Path, UndirectedGraph, decompose_cylinder_intersection,
                      dual_graph, is_multitree, min_upper_bounds, path_count_matrix,
                      vertex_cylinder)
from .dynamics import (NO, YES, TriState, has_unbounded_denominator_path, is_aperiodic,
                       is_cofinal, is_topologically_free, lift_stabiliser_generator,
                       local_contractivity_sufficient)
from .errors import (CertificationError, MtkError, ParseError, PreconditionError,
                     SizeGuardError, UniquenessError, ValidationError)
from .ktheory import (KTheoryReport, adjacency_matrix, k_theory, six_term_report,
                      stabiliser_matrices, theta_induced)
from .lifttree import (LiftTree, act_on_lift, brute_stabiliser, build_lift_tree,
                       verify_lift_invariants)
from .presentation import (CYCLIC, TRIVIAL, GraphOfGroupsZ, QuotientPresentation,
                           StabiliserClass, denominator, dual_quotient, signed_index_ratio,
                           validate)
from .setfamily import (PermAction, SetFamily, decompose_intersection, is_finitely_aligned,
                        is_independent, primitive_parts, saturate, transition_matrix,
                        verify_prop_equivalence)
from .zmatrix import (AbelianGroup, IntMatrix, SmithDecomposition, cokernel, direct_sum, kernel,
                      smith_normal_form)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
