"""Shipped concrete models: the partition box, seeded toy matter-gravity
Hamiltonians, and symmetry demonstrations for the event rules.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .decomposition import entropy_of_entanglement, von_neumann_entropy
from .dynamics import reduced_matter_trajectory
from .errors import DimensionMismatchError, ValidationError
from .events import (ALTERNATIVE, MODIFIED, PLAIN, declare_events_alternative,
                     declare_events_modified, declare_events_plain, reset_density)
from .linalg import (BipartiteSpace, DensityOperator, HermitianOperator, PureState,
                     UnitaryOperator, as_matrix, commutator_norm, partial_trace,
                     random_hermitian)


@dataclass(frozen=True)
class PartitionBoxModel:
    """Discretized box split into complementary left/right halves.

    The projectors are diagonal indicator matrices on the first and second
    half of the site basis; together they resolve the identity.
    """

    n_sites: int

    def __post_init__(self):
        if self.n_sites < 2 or self.n_sites % 2 != 0:
            raise ValidationError(f"n_sites must be even and >= 2, got {self.n_sites}")

    @property
    def left_projector(self) -> np.ndarray:
        half = self.n_sites // 2
        return np.diag(np.concatenate([np.ones(half), np.zeros(half)])).astype(complex)

    @property
    def right_projector(self) -> np.ndarray:
        return np.eye(self.n_sites, dtype=complex) - self.left_projector

    def left_weight(self, psi: np.ndarray) -> float:
        """Probability of finding the particle in the left half."""
        return float(np.linalg.norm(psi[: self.n_sites // 2]) ** 2)

    def measure_left_right(self, psi, tolerances: Tolerances = DEFAULT_TOLERANCES) -> DensityOperator:
        """Unrecorded left/right measurement: P_L|psi><psi|P_L + P_R|psi><psi|P_R."""
        psi = np.asarray(psi, dtype=complex)
        if psi.shape != (self.n_sites,):
            raise DimensionMismatchError(
                f"wave vector has shape {psi.shape}, expected ({self.n_sites},)")
        if abs(np.linalg.norm(psi) - 1.0) > tolerances.state_norm:
            raise ValidationError("wave vector must be normalized")
        rho = np.outer(psi, psi.conj())
        pl, pr = self.left_projector, self.right_projector
        mixed = pl @ rho @ pl + pr @ rho @ pr
        return DensityOperator(mixed, tolerances=tolerances)


def binary_entropy(p: float) -> float:
    """-p ln p - (1-p) ln(1-p), with the 0 ln 0 = 0 convention."""
    s = 0.0
    for q in (p, 1.0 - p):
        if q > 0.0:
            s -= q * np.log(q)
    return float(s)


@dataclass(frozen=True)
class ToyModelSpec:
    """Deterministic recipe for a small matter-gravity Hamiltonian.

    H = diag(matter_spectrum) x I + I x diag(gravity_spectrum) + g * R(seed)
    where R is a seeded random Hermitian of unit Frobenius norm on the total
    space. The same spec always builds the same matrices.
    """

    dim_matter: int = 3
    dim_gravity: int = 3
    coupling_strength: float = 1.0
    seed: int = 42
    matter_spectrum: tuple[float, ...] = (0.0, 1.0, 2.0)
    gravity_spectrum: tuple[float, ...] = (0.0, 1.0, 2.0)

    def __post_init__(self):
        if self.dim_matter < 2 or self.dim_gravity < 2:
            raise ValidationError("toy model dimensions must be >= 2")
        if len(self.matter_spectrum) != self.dim_matter:
            raise DimensionMismatchError(
                f"matter_spectrum has {len(self.matter_spectrum)} entries for dim {self.dim_matter}")
        if len(self.gravity_spectrum) != self.dim_gravity:
            raise DimensionMismatchError(
                f"gravity_spectrum has {len(self.gravity_spectrum)} entries for dim {self.dim_gravity}")


DEFAULT_TOY_MODEL = ToyModelSpec()


def build_toy_model(spec: ToyModelSpec,
                    tolerances: Tolerances = DEFAULT_TOLERANCES,
                    ) -> tuple[BipartiteSpace, HermitianOperator]:
    """Instantiate the spec's Hamiltonian on its bipartite space."""
    space = BipartiteSpace(spec.dim_matter, spec.dim_gravity)
    rng = np.random.default_rng(spec.seed)
    coupling = spec.coupling_strength * random_hermitian(space.total, rng, unit_frobenius=True)
    h = (np.kron(np.diag(spec.matter_spectrum), np.eye(spec.dim_gravity))
         + np.kron(np.eye(spec.dim_matter), np.diag(spec.gravity_spectrum))
         + coupling)
    return space, HermitianOperator(h, tolerances=tolerances)


def entanglement_growth_curve(spec: ToyModelSpec, psi0: PureState, times,
                              tolerances: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Matter-gravity entanglement entropy along the unreset unitary evolution.

    psi0 must be a product state (entanglement entropy below 1e-10) so the
    curve starts at zero.
    """
    space, h = build_toy_model(spec, tolerances=tolerances)
    if psi0.dimension != space.total:
        raise DimensionMismatchError(
            f"initial state dimension {psi0.dimension} != space total {space.total}")
    if entropy_of_entanglement(psi0, space, tolerances=tolerances) > 1e-10:
        raise ValidationError("initial state must be a product state")
    reduced = reduced_matter_trajectory(psi0, h, times, tolerances=tolerances)
    return np.array([von_neumann_entropy(r, tolerances=tolerances) for r in reduced])


@dataclass(frozen=True)
class SymmetryReport:
    """Commutator norms of a symmetry against events and their resets."""

    variant: str
    precondition_norm: float
    probabilities: np.ndarray
    event_norms: np.ndarray
    post_reset_norms: np.ndarray


def symmetry_demo(u_sym: UnitaryOperator, state, variant: str,
                  rng: np.random.Generator | None = None,
                  tolerances: Tolerances = DEFAULT_TOLERANCES) -> SymmetryReport:
    """Check whether the events of a symmetric state inherit its symmetry.

    state is a DensityOperator for the plain/modified variants; for the
    alternative variant it is a total-space PureState and the symmetry acts on
    the matter factor (the reduced matter state must commute with it). The
    precondition commutator_norm(u_sym, state) < 1e-10 is enforced, not
    silently accepted.
    """
    u = as_matrix(u_sym)
    if variant == ALTERNATIVE:
        if not isinstance(state, PureState):
            raise ValidationError("alternative symmetry demo needs a total-space PureState")
        rho_m = partial_trace(state, state.space, "matter", tolerances=tolerances)
        pre = commutator_norm(u, rho_m)
        if pre > 1e-10:
            raise ValidationError(
                f"matter reduced state does not commute with the symmetry (norm {pre:.3e})")
        ev = declare_events_alternative(state, state.space, rng=rng, tolerances=tolerances)
        projs = [np.outer(e.matter_vector, e.matter_vector.conj()) for e in ev.events]
        event_norms = np.array([commutator_norm(u, p) for p in projs])
        # the post-reset matter state of a Schmidt term is that same projector
        post_norms = event_norms.copy()
    elif variant in (PLAIN, MODIFIED):
        if not isinstance(state, DensityOperator):
            raise ValidationError(f"{variant} symmetry demo needs a DensityOperator")
        pre = commutator_norm(u, state)
        if pre > 1e-10:
            raise ValidationError(
                f"state does not commute with the symmetry (norm {pre:.3e})")
        if variant == PLAIN:
            ev = declare_events_plain(state, tolerances=tolerances)
            event_norms = np.array([commutator_norm(u, e.projector) for e in ev.events])
        else:
            ev = declare_events_modified(state, rng=rng, tolerances=tolerances)
            event_norms = np.array(
                [commutator_norm(u, np.outer(e.vector, e.vector.conj())) for e in ev.events])
        post = [reset_density(state, ev, i, tolerances=tolerances) for i in range(len(ev))]
        post_norms = np.array([commutator_norm(u, r) for r in post])
    else:
        raise ValidationError(f"unknown event variant {variant!r}")
    return SymmetryReport(variant, float(pre), ev.probabilities, event_norms, post_norms)


def parity_operator(dim: int, tolerances: Tolerances = DEFAULT_TOLERANCES) -> UnitaryOperator:
    """Diagonal alternating-sign unitary diag(+1, -1, +1, ...)."""
    return UnitaryOperator(np.diag((-1.0 + 0j) ** np.arange(dim)), tolerances=tolerances)


def swap_operator(dim: int, i: int = 0, j: int = 1,
                  tolerances: Tolerances = DEFAULT_TOLERANCES) -> UnitaryOperator:
    """Permutation unitary exchanging basis states i and j."""
    if not (0 <= i < dim and 0 <= j < dim and i != j):
        raise ValidationError(f"swap indices ({i}, {j}) invalid for dimension {dim}")
    u = np.eye(dim, dtype=complex)
    u[[i, j]] = u[[j, i]]
    return UnitaryOperator(u, tolerances=tolerances)


def extend_to_total(u_matter: UnitaryOperator, space: BipartiteSpace,
                    tolerances: Tolerances = DEFAULT_TOLERANCES) -> UnitaryOperator:
    """Matter-side unitary extended by the identity on the gravity factor."""
    if u_matter.dimension != space.dim_matter:
        raise DimensionMismatchError(
            f"unitary dimension {u_matter.dimension} != matter dimension {space.dim_matter}")
    return UnitaryOperator(np.kron(u_matter.matrix, np.eye(space.dim_gravity)),
                           tolerances=tolerances)
