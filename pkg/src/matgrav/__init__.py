"""Desk-scale simulator of bipartite matter-gravity quantum systems.

Dense-matrix machinery for entanglement entropy across a fixed matter/gravity
tensor split, plus three stochastic reset-event rules (spectral-projector,
eigenvector, and Schmidt-term based) with trajectory sampling, exhaustive
branch-tree enumeration, and statistical-operator diagnostics.
"""

from .config import DEFAULT_TOLERANCES, Tolerances
from .decomposition import (SchmidtDecomposition, SpectralResolution,
                            entropy_of_entanglement, schmidt_decompose,
                            spectral_resolution, von_neumann_entropy)
from .dynamics import (MasterGenerator, ResetSchedule, apply_linear_map,
                       assemble_hamiltonian, evolution_operator, master_evolve,
                       reduced_matter_trajectory, unitary_evolve)
from .errors import (BranchCapError, ConfigError, DimensionMismatchError,
                     EigensolverError, MatgravError, NumericalError, TraceDriftError,
                     ValidationError)
from .events import (ALTERNATIVE, MODIFIED, PLAIN, AlternativeEvent, Branch, BranchTree,
                     ComparisonReport, EventSet, ModifiedEvent, PlainEvent, Trajectory,
                     compare_statistical_vs_unreset, declare_events_alternative,
                     declare_events_modified, declare_events_plain, enumerate_branches,
                     reset_density, reset_total_state, run_trajectory, sample_event,
                     statistical_operator)
from .linalg import (GRAVITY, MATTER, BipartiteSpace, DensityOperator, HermitianOperator,
                     PureState, UnitaryOperator, basis_state, commutator_norm,
                     haar_random_unitary, partial_trace, random_density_operator,
                     random_hermitian, random_pure_state, random_state_vector,
                     tensor_state, trace_distance)
from .scenarios import (DEFAULT_TOY_MODEL, PartitionBoxModel, SymmetryReport, ToyModelSpec,
                        binary_entropy, build_toy_model, entanglement_growth_curve,
                        extend_to_total, parity_operator, swap_operator, symmetry_demo)

__version__ = "0.1.0"
