"""Laboratory for k-cores of the random graph process and their Hamilton cycles."""

from .core import CoreState, HittingTrace, core_subgraph, hitting_time, peel_core, run_to_core
from .factors import FactorSpec, f_factor, petersen_decompose
from .graph import (CapacityError, EdgeListFormatError, EdgeSequence, Graph, GraphError,
                    ProcessSampler, complete_graph, cycle_graph, graph_from_edges, path_graph,
                    read_edge_list, sample_gnm, sample_gnp, sample_process, split_seed,
                    write_edge_list)
from .hamilton import (HamResult, RotationOutcome, SprinkleBudget, SprinkleResult, absorb_cycle,
                       hamiltonicity_solve, rotate_extend, sprinkle_to_hamilton)
from .lab import ExperimentConfig, TrialRecord, emit, run_experiment, run_trial
from .matching import (Matching, PathSystem, TutteWitness, max_matching, near_perfect_matching,
                       two_factor_via_matchings)
from .packing import PackingError, PackingResult, pack_hamilton_cycles, verify_packing
from .structure import (ExpansionReport, FutureCorePartition, count_disjoint_cycles_greedy,
                        expansion_check, odd_components, partition_future_core, tutte_scan,
                        verify_core_vertex_stability)
from .thresholds import (DegreeFit, ThresholdResult, compute_ck, fit_truncated_poisson,
                         gamma_bound, poisson_tail)

__version__ = "0.1.0"
