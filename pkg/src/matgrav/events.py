"""Stochastic reset events for time-evolving states.

Three event rules are implemented. The plain rule draws one of the spectral
projectors P_a of rho(t) with probability m_a * lambda_a and resets rho to
P_a / m_a. The modified rule draws a one-dimensional eigenprojector with
probability lambda_a, choosing the basis within each degenerate eigenspace at
random. The alternative rule acts on the total pure state: it draws a
normalized Schmidt term (matter_a x gravity_a) with probability c_a^2 and
resets the total state to that product term.

Plain and modified trajectories evolve between resets by a master equation
and therefore require a MasterGenerator; alternative trajectories carry the
total pure state and evolve unitarily under a total-space Hamiltonian. Event
indices are always ordered by decreasing eigenvalue / coefficient, and each
reset consumes exactly one uniform draw for the selection, in schedule order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .decomposition import (_group_descending, schmidt_decompose, spectral_resolution,
                            von_neumann_entropy)
from .dynamics import (MasterGenerator, ResetSchedule, evolution_operator, master_evolve,
                       unitary_evolve)
from .errors import (BranchCapError, DimensionMismatchError, EigensolverError,
                     ValidationError)
from .linalg import (MATTER, BipartiteSpace, DensityOperator, HermitianOperator, PureState,
                     haar_random_unitary, partial_trace, trace_distance)

PLAIN = "plain"
MODIFIED = "modified"
ALTERNATIVE = "alternative"
VARIANTS = (PLAIN, MODIFIED, ALTERNATIVE)


@dataclass(frozen=True)
class PlainEvent:
    """A spectral projector together with its rank."""
    projector: np.ndarray
    multiplicity: int


@dataclass(frozen=True)
class ModifiedEvent:
    """A single eigenvector (one-dimensional spectral projector)."""
    vector: np.ndarray


@dataclass(frozen=True)
class AlternativeEvent:
    """A normalized Schmidt term, stored as its two factors."""
    matter_vector: np.ndarray
    gravity_vector: np.ndarray

    def total_vector(self) -> np.ndarray:
        return np.multiply.outer(self.matter_vector, self.gravity_vector).reshape(-1)


@dataclass(frozen=True)
class EventSet:
    """The possible events at one instant with their probabilities."""

    variant: str
    events: tuple
    probabilities: np.ndarray
    space: BipartiteSpace | None = None  # alternative variant only
    tolerances: Tolerances = field(default=DEFAULT_TOLERANCES, repr=False, compare=False)

    def __post_init__(self):
        probs = np.asarray(self.probabilities, dtype=float)
        object.__setattr__(self, "probabilities", probs)
        tol = self.tolerances
        if self.variant not in VARIANTS:
            raise ValidationError(f"unknown event variant {self.variant!r}")
        if len(self.events) != len(probs) or len(probs) == 0:
            raise ValidationError("events and probabilities must align and be nonempty")
        if np.any(probs <= 0):
            raise ValidationError("event probabilities must be positive")
        if abs(probs.sum() - 1.0) > tol.probability_sum:
            raise ValidationError(f"event probabilities sum to {probs.sum()!r}, not 1")
        if self.variant == PLAIN:
            for a, ev in enumerate(self.events):
                for b in range(a):
                    if np.abs(self.events[b].projector @ ev.projector).max() > tol.projector:
                        raise ValidationError(f"plain events {b} and {a} are not orthogonal")
        elif self.variant == MODIFIED:
            vecs = np.array([ev.vector for ev in self.events])
            gram = vecs @ vecs.conj().T
            if np.abs(gram - np.eye(len(vecs))).max() > tol.orthonormality:
                raise ValidationError("modified event vectors are not orthonormal")
        else:
            if self.space is None:
                raise ValidationError("alternative event sets must carry their space")
            for name, vecs in (("matter", np.array([ev.matter_vector for ev in self.events])),
                               ("gravity", np.array([ev.gravity_vector for ev in self.events]))):
                gram = vecs @ vecs.conj().T
                if np.abs(gram - np.eye(len(self.events))).max() > tol.orthonormality:
                    raise ValidationError(f"alternative {name} factors are not orthonormal")

    def __len__(self) -> int:
        return len(self.events)

    def multiplicities(self) -> np.ndarray:
        if self.variant == PLAIN:
            return np.array([ev.multiplicity for ev in self.events], dtype=int)
        return np.ones(len(self.events), dtype=int)


def declare_events_plain(rho: DensityOperator,
                         tolerances: Tolerances = DEFAULT_TOLERANCES) -> EventSet:
    """Spectral projectors of rho as events, with probabilities m_a * lambda_a."""
    res = spectral_resolution(rho, tolerances=tolerances)
    events = tuple(PlainEvent(p, int(m)) for p, m in zip(res.projectors, res.multiplicities))
    probs = res.multiplicities * res.eigenvalues
    return EventSet(PLAIN, events, probs, tolerances=tolerances)


def declare_events_modified(rho: DensityOperator, rng: np.random.Generator | None = None,
                            tolerances: Tolerances = DEFAULT_TOLERANCES) -> EventSet:
    """One-dimensional eigenprojectors as events, each with probability lambda_a.

    Within every degenerate eigenspace the orthonormal basis is rotated by a
    Haar-random unitary of the group's dimension when an rng is supplied; the
    raw eigensolver basis is kept otherwise.
    """
    try:
        w, v = np.linalg.eigh(rho.matrix)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigendecomposition failed: {exc}") from exc
    w = w[::-1]
    v = np.array(v[:, ::-1])
    keep = w > tolerances.zero_cutoff
    wk, vk = w[keep], v[:, keep]

    probs = []
    for group in _group_descending(wk, tolerances.degeneracy):
        size = group.stop - group.start
        lam = float(wk[group.start:group.stop].mean())
        probs.extend([lam] * size)
        if size > 1 and rng is not None:
            rot = haar_random_unitary(size, rng, tolerances=tolerances).matrix
            vk[:, group.start:group.stop] = vk[:, group.start:group.stop] @ rot

    vectors = vk.T.copy()
    for a in range(vectors.shape[0]):
        lead = np.flatnonzero(np.abs(vectors[a]) > 1e-10)[0]
        vectors[a] *= (vectors[a, lead] / abs(vectors[a, lead])).conjugate()
    events = tuple(ModifiedEvent(vec) for vec in vectors)
    return EventSet(MODIFIED, events, np.array(probs), tolerances=tolerances)


def declare_events_alternative(psi: PureState, space: BipartiteSpace,
                               rng: np.random.Generator | None = None,
                               tolerances: Tolerances = DEFAULT_TOLERANCES) -> EventSet:
    """Normalized Schmidt terms of psi as events, with probabilities c_a^2.

    Degenerate coefficient groups are randomized exactly as in
    schmidt_decompose.
    """
    dec = schmidt_decompose(psi, space, rng=rng, tolerances=tolerances)
    events = tuple(AlternativeEvent(m, g)
                   for m, g in zip(dec.matter_vectors, dec.gravity_vectors))
    return EventSet(ALTERNATIVE, events, dec.coefficients ** 2, space=space,
                    tolerances=tolerances)


def sample_event(events: EventSet, rng) -> int:
    """Inverse-CDF draw of one event index from a single uniform in [0, 1)."""
    cdf = np.cumsum(events.probabilities)
    idx = int(np.searchsorted(cdf, rng.random(), side="right"))
    return min(idx, len(events) - 1)


def reset_density(rho: DensityOperator, events: EventSet, chosen: int,
                  tolerances: Tolerances = DEFAULT_TOLERANCES) -> DensityOperator:
    """Post-reset density operator: P_a / m_a (plain) or the eigenprojector (modified)."""
    if not 0 <= chosen < len(events):
        raise IndexError(f"event index {chosen} outside [0, {len(events)})")
    if events.variant == PLAIN:
        ev = events.events[chosen]
        mat = ev.projector / ev.multiplicity
    elif events.variant == MODIFIED:
        vec = events.events[chosen].vector
        mat = np.outer(vec, vec.conj())
    else:
        raise ValidationError("reset_density applies to plain or modified event sets")
    if rho.dimension != mat.shape[0]:
        raise DimensionMismatchError(
            f"event dimension {mat.shape[0]} != state dimension {rho.dimension}")
    return DensityOperator(mat, tolerances=tolerances)


def reset_total_state(psi: PureState, events: EventSet, chosen: int,
                      tolerances: Tolerances = DEFAULT_TOLERANCES) -> PureState:
    """Post-reset total state: the chosen normalized Schmidt term."""
    if not 0 <= chosen < len(events):
        raise IndexError(f"event index {chosen} outside [0, {len(events)})")
    if events.variant != ALTERNATIVE:
        raise ValidationError("reset_total_state applies to alternative event sets")
    vec = events.events[chosen].total_vector()
    vec = vec / np.linalg.norm(vec)
    return PureState(vec, events.space, tolerances=tolerances)


@dataclass(frozen=True)
class Trajectory:
    """One realized reset history."""

    variant: str
    reset_times: np.ndarray
    chosen_indices: tuple[int, ...]
    states_after_reset: tuple
    probabilities_at_reset: tuple[np.ndarray, ...]
    final_time: float | None = None
    final_state: object = None
    seed: int | None = None

    def __post_init__(self):
        if len(self.reset_times) != len(self.chosen_indices):
            raise ValidationError("reset_times and chosen_indices must have equal length")


def _declare(state, variant: str, rng, tolerances: Tolerances) -> EventSet:
    if variant == PLAIN:
        return declare_events_plain(state, tolerances=tolerances)
    if variant == MODIFIED:
        return declare_events_modified(state, rng=rng, tolerances=tolerances)
    return declare_events_alternative(state, state.space, rng=rng, tolerances=tolerances)


def _check_pairing(initial, dynamics, variant: str):
    if variant not in VARIANTS:
        raise ValidationError(f"unknown event variant {variant!r}")
    if variant == ALTERNATIVE:
        if not isinstance(initial, PureState) or not isinstance(dynamics, HermitianOperator):
            raise ValidationError(
                "alternative variant needs a PureState initial and a total-space Hamiltonian")
        if initial.dimension != dynamics.dimension:
            raise DimensionMismatchError(
                f"state dimension {initial.dimension} != Hamiltonian dimension {dynamics.dimension}")
    else:
        if not isinstance(initial, DensityOperator) or not isinstance(dynamics, MasterGenerator):
            raise ValidationError(
                f"{variant} variant needs a DensityOperator initial and a MasterGenerator")
        if initial.dimension != dynamics.dimension:
            raise DimensionMismatchError(
                f"state dimension {initial.dimension} != generator dimension {dynamics.dimension}")


def _evolve_segment(state, dynamics, t_from: float, t_to: float, variant: str,
                    dt_max: float, tolerances: Tolerances):
    if variant == ALTERNATIVE:
        return unitary_evolve(state, dynamics, t_to - t_from, tolerances=tolerances)
    return master_evolve(state, dynamics, t_from, t_to, dt_max, tolerances=tolerances)


def run_trajectory(initial, dynamics, schedule: ResetSchedule, variant: str,
                   rng: np.random.Generator, dt_max: float = 1e-3,
                   final_time: float | None = None, seed: int | None = None,
                   tolerances: Tolerances = DEFAULT_TOLERANCES) -> Trajectory:
    """Alternate evolution and resets over the schedule, recording each choice.

    The trajectory is fully reproducible from (initial, schedule, seed): every
    reset consumes randomness in schedule order, first any degenerate-basis
    rotation inside the declaration, then one uniform for the selection. When
    final_time is given the state is evolved past the last reset and stored as
    final_state.
    """
    _check_pairing(initial, dynamics, variant)
    if final_time is not None and final_time < schedule.last_time:
        raise ValidationError(
            f"final_time {final_time} precedes the last reset at {schedule.last_time}")
    state = initial
    t_now = schedule.initial_time
    chosen: list[int] = []
    states: list = []
    prob_vectors: list[np.ndarray] = []
    for t_reset in schedule.times:
        state = _evolve_segment(state, dynamics, t_now, float(t_reset), variant,
                                dt_max, tolerances)
        ev = _declare(state, variant, rng, tolerances)
        idx = sample_event(ev, rng)
        if variant == ALTERNATIVE:
            state = reset_total_state(state, ev, idx, tolerances=tolerances)
        else:
            state = reset_density(state, ev, idx, tolerances=tolerances)
        chosen.append(idx)
        states.append(state)
        prob_vectors.append(ev.probabilities)
        t_now = float(t_reset)
    final_state = None
    if final_time is not None:
        final_state = _evolve_segment(state, dynamics, t_now, final_time, variant,
                                      dt_max, tolerances)
    return Trajectory(variant, np.array(schedule.times, dtype=float), tuple(chosen),
                      tuple(states), tuple(prob_vectors), final_time=final_time,
                      final_state=final_state, seed=seed)


@dataclass(frozen=True)
class Branch:
    """One reset history with its product probability and post-reset state."""

    indices: tuple[int, ...]
    probability: float
    terminal_state: object


@dataclass(frozen=True)
class BranchTree:
    """Exhaustive tree of reset histories.

    Branch probabilities are products of the conditional event probabilities
    along the history. pruned_mass records probability dropped by prune_eps.
    """

    variant: str
    depth: int
    branches: tuple[Branch, ...]
    pruned_mass: float
    schedule: ResetSchedule
    dt_max: float
    tolerances: Tolerances = field(default=DEFAULT_TOLERANCES, repr=False, compare=False)

    def __post_init__(self):
        total = sum(b.probability for b in self.branches) + self.pruned_mass
        if abs(total - 1.0) > 1e-8:
            raise ValidationError(f"branch probabilities (plus pruned mass) sum to {total}, not 1")

    def __len__(self) -> int:
        return len(self.branches)

    @property
    def last_reset_time(self) -> float:
        return self.schedule.last_time

    def probability_of(self, indices: tuple[int, ...]) -> float:
        for b in self.branches:
            if b.indices == indices:
                return b.probability
        return 0.0


def enumerate_branches(initial, dynamics, schedule: ResetSchedule, variant: str,
                       prune_eps: float = 0.0, rng: np.random.Generator | None = None,
                       dt_max: float = 1e-3, branch_cap: int | None = None,
                       tolerances: Tolerances = DEFAULT_TOLERANCES) -> BranchTree:
    """Expand every event choice at every reset time into a probability tree.

    Branches whose running probability falls below prune_eps are dropped and
    their mass tallied. Raises BranchCapError if the frontier would exceed the
    cap (default Tolerances.branch_cap); reduce the depth or dimensions then.
    An rng is only consulted for degenerate-basis randomization in the
    modified and alternative declarations.
    """
    _check_pairing(initial, dynamics, variant)
    cap = tolerances.branch_cap if branch_cap is None else branch_cap
    frontier: list[tuple[tuple[int, ...], float, object]] = [((), 1.0, initial)]
    pruned_mass = 0.0
    t_now = schedule.initial_time
    for t_reset in schedule.times:
        t_reset = float(t_reset)
        prop = None
        if variant == ALTERNATIVE:
            prop = evolution_operator(dynamics, t_reset - t_now, tolerances=tolerances).matrix
        next_frontier: list[tuple[tuple[int, ...], float, object]] = []
        for indices, prob, state in frontier:
            if variant == ALTERNATIVE:
                state = PureState(prop @ state.amplitudes, state.space, tolerances=tolerances)
            else:
                state = master_evolve(state, dynamics, t_now, t_reset, dt_max,
                                      tolerances=tolerances)
            ev = _declare(state, variant, rng, tolerances)
            if len(next_frontier) + len(ev) > cap:
                raise BranchCapError(
                    f"branch count would exceed the cap of {cap}; "
                    "reduce the schedule depth or the dimensions")
            for i, p_i in enumerate(ev.probabilities):
                p_branch = prob * float(p_i)
                if p_branch < prune_eps:
                    pruned_mass += p_branch
                    continue
                if variant == ALTERNATIVE:
                    reset_state = reset_total_state(state, ev, i, tolerances=tolerances)
                else:
                    reset_state = reset_density(state, ev, i, tolerances=tolerances)
                next_frontier.append((indices + (i,), p_branch, reset_state))
        frontier = next_frontier
        t_now = t_reset
    branches = tuple(Branch(idx, p, s) for idx, p, s in frontier)
    return BranchTree(variant, len(schedule), branches, pruned_mass, schedule, dt_max,
                      tolerances=tolerances)


def statistical_operator(tree: BranchTree, dynamics, t: float,
                         tolerances: Tolerances = DEFAULT_TOLERANCES) -> DensityOperator:
    """Probability-weighted sum of the evolved branch states at time t.

    Plain/modified branches are evolved by the master equation and summed
    directly. Alternative branches carry total pure states: each is evolved
    unitarily, reduced to the matter side, and then weighted, so the result is
    always a matter-space density operator for that variant.
    """
    t_from = tree.last_reset_time
    if t < t_from:
        raise ValidationError(f"time {t} precedes the last reset at {t_from}")
    included = sum(b.probability for b in tree.branches)
    if not tree.branches:
        raise ValidationError("branch tree has no surviving branches")
    out = None
    if tree.variant == ALTERNATIVE:
        prop = evolution_operator(dynamics, t - t_from, tolerances=tolerances).matrix
        for b in tree.branches:
            psi_t = PureState(prop @ b.terminal_state.amplitudes, b.terminal_state.space,
                              tolerances=tolerances)
            reduced = partial_trace(psi_t, psi_t.space, MATTER, tolerances=tolerances)
            term = b.probability * reduced.matrix
            out = term if out is None else out + term
        result_tol = tolerances
    else:
        for b in tree.branches:
            rho_t = master_evolve(b.terminal_state, dynamics, t_from, t, tree.dt_max,
                                  tolerances=tolerances)
            term = b.probability * rho_t.matrix
            out = term if out is None else out + term
        result_tol = tolerances.for_integrator_output()
    out = out / included  # no-op unless pruning removed mass
    out = 0.5 * (out + out.conj().T)
    return DensityOperator(out, tolerances=result_tol)


@dataclass(frozen=True)
class ComparisonReport:
    """Diagnostics comparing the statistical operator with unreset evolution."""

    trace_distance: float
    entropy_statistical: float
    entropy_unreset: float
    entropy_difference: float


def compare_statistical_vs_unreset(initial, dynamics, schedule: ResetSchedule, variant: str,
                                   t: float, dt_max: float = 1e-3, prune_eps: float = 0.0,
                                   rng: np.random.Generator | None = None,
                                   branch_cap: int | None = None,
                                   tolerances: Tolerances = DEFAULT_TOLERANCES,
                                   ) -> ComparisonReport:
    """Trace distance and entropies of the with-resets statistical operator
    versus the state that evolves with no resets at all.

    For the plain variant under a master equation the two coincide (a direct
    consequence of the linearity of the evolution map); for the alternative
    variant they generally differ once the initial state is entangled.
    """
    tree = enumerate_branches(initial, dynamics, schedule, variant, prune_eps=prune_eps,
                              rng=rng, dt_max=dt_max, branch_cap=branch_cap,
                              tolerances=tolerances)
    stat = statistical_operator(tree, dynamics, t, tolerances=tolerances)
    if variant == ALTERNATIVE:
        psi_t = unitary_evolve(initial, dynamics, t - schedule.initial_time,
                               tolerances=tolerances)
        unreset = partial_trace(psi_t, psi_t.space, MATTER, tolerances=tolerances)
    else:
        unreset = master_evolve(initial, dynamics, schedule.initial_time, t, dt_max,
                                tolerances=tolerances)
    dist = trace_distance(stat, unreset)
    s_stat = von_neumann_entropy(stat, tolerances=tolerances)
    s_unreset = von_neumann_entropy(unreset, tolerances=tolerances)
    return ComparisonReport(dist, s_stat, s_unreset, s_stat - s_unreset)
