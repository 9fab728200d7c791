"""Spectra of graph p-Laplacians.

Exact 1-Laplacian eigenpair certificates, homological and min-max eigenvalues
from the order complex of a graph, multi-way Cheeger constants, and numerical
continuation of eigenbranches in p.
"""

from .catalog import by_name, complete, cycle, seven_edge, five_vertex, g6, path, star
from .cheeger import (
    cheeger_constants,
    closed_form_spectra,
    hstar,
    inequality_diagram_check,
    gap_near_one_holds,
    minmax_lambda_delta1,
    minmax_spectrum_delta1,
    multiway_cheeger,
    pseudo_independence,
)
from .complex import ComplexSizeError, betti_gf2, build_kn, yang_index
from .graph import Graph, GraphInputError, SetPair, f1_pair, parse_edge_list, rayleigh_fp, read_edge_list
from .homological import homological_spectrum, local_link_criterion
from .onelap import enumerate_delta1_spectrum, is_critical_f1, verify_eigenpair
from .psolver import (
    BranchLossError,
    ContinuationError,
    SingularJacobianError,
    apply_delta_p,
    continue_branch,
    eigen_residual,
    monotonicity_sweep,
    spectrum_p2,
)

__version__ = "0.1.0"
