"""Random simplicial complexes, their cohomology and flower-shaped obstructions."""

from .complex import (Complex, Hypergraph, Simplex, add_simplex, connected_components,
                      downward_closure, is_shell, shells_containing, simplex, skeleton)
from .rings import F2, Z, Fp, Ring, Zmod, parse_ring
from .cohomology import (Cochain, CohomologySummary, apply_coboundary, coboundary_matrix,
                         cohomology, is_cohom_connected, meshulam_wallach_check,
                         min_support_in_class, shell_certificate)
from .obstructions import (ObstructionCopy, build_f_M_r, find_local_obstacles, find_M_copies,
                           find_Mhat_copies, flower, is_K_localised, is_traversable,
                           minimal_bad_support)
from .parametrisation import (BetaSpec, CriticalityReport, DimParams, DirectionParams,
                              E_constant, ProbabilityVector, critical_window_expectation,
                              evaluate_pbar, exact_expected_Xjk, is_critical_direction,
                              lambda_mu_nu, load_direction, parse_direction, q_bar,
                              rescale_to_lower_critical, scale_parameters, worked_direction)
from .process import (HittingReport, ProcessTrace, connectedness_intervals, hitting_time,
                      sample_process, snapshot)
from .montecarlo import (WindowStats, mc_expectations, mc_poisson_window, threshold_sweep,
                         write_records)

__version__ = "0.1.0"
