"""Hamiltonian assembly, exact unitary propagation, and a Lindblad integrator.

The unitary propagator is built from the eigendecomposition of H, exact to
solver precision. The master equation rho' = -i[H, rho] + sum_k rate_k
(J rho J^dag - {J^dag J, rho}/2) is integrated with a fixed-step classical
4th-order Runge-Kutta scheme; trace drift is asserted, never renormalized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import DimensionMismatchError, TraceDriftError, ValidationError
from .linalg import (MATTER, DensityOperator, HermitianOperator, PureState,
                     UnitaryOperator, partial_trace)

# above this dimension the d^2 x d^2 superoperator is not materialized and the
# RK4 right-hand side falls back to direct matrix products
_SUPEROP_DIM_LIMIT = 32


@dataclass(frozen=True)
class MasterGenerator:
    """Lindblad generator: Hamiltonian part plus weighted jump dissipators."""

    hamiltonian: HermitianOperator
    jump_operators: tuple[np.ndarray, ...] = ()
    rates: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        jumps = tuple(np.array(j, dtype=complex) for j in self.jump_operators)
        rates = np.asarray(self.rates, dtype=float)
        object.__setattr__(self, "jump_operators", jumps)
        object.__setattr__(self, "rates", rates)
        d = self.hamiltonian.dimension
        if len(jumps) != len(rates):
            raise ValidationError(
                f"{len(jumps)} jump operators but {len(rates)} rates")
        if np.any(rates < 0):
            raise ValidationError("jump rates must be nonnegative")
        for k, j in enumerate(jumps):
            if j.shape != (d, d):
                raise DimensionMismatchError(
                    f"jump operator {k} has shape {j.shape}, expected ({d}, {d})")

    @property
    def dimension(self) -> int:
        return self.hamiltonian.dimension

    @cached_property
    def _jdag_j(self) -> tuple[np.ndarray, ...]:
        return tuple(j.conj().T @ j for j in self.jump_operators)

    @cached_property
    def superoperator(self) -> np.ndarray:
        """Matrix of the generator acting on the row-major vectorized state."""
        d = self.dimension
        eye = np.eye(d)
        h = self.hamiltonian.matrix
        lsup = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
        for j, jdj, rate in zip(self.jump_operators, self._jdag_j, self.rates):
            lsup += rate * (np.kron(j, j.conj())
                            - 0.5 * np.kron(jdj, eye)
                            - 0.5 * np.kron(eye, jdj.T))
        return lsup

    def apply(self, rho_matrix: np.ndarray) -> np.ndarray:
        """Action of the generator on a density matrix."""
        h = self.hamiltonian.matrix
        out = -1j * (h @ rho_matrix - rho_matrix @ h)
        for j, jdj, rate in zip(self.jump_operators, self._jdag_j, self.rates):
            out += rate * (j @ rho_matrix @ j.conj().T
                           - 0.5 * (jdj @ rho_matrix + rho_matrix @ jdj))
        return out


@dataclass(frozen=True)
class ResetSchedule:
    """Strictly increasing reset times following an initial time."""

    times: np.ndarray = field(default_factory=lambda: np.zeros(0))
    initial_time: float = 0.0

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        object.__setattr__(self, "times", times)
        if times.size and np.any(np.diff(times) <= 0):
            raise ValidationError("reset times must be strictly increasing")
        if times.size and times[0] <= self.initial_time:
            raise ValidationError(
                f"first reset time {times[0]} is not after initial time {self.initial_time}")

    def __len__(self) -> int:
        return self.times.size

    @property
    def last_time(self) -> float:
        """Time of the final reset, or the initial time for empty schedules."""
        return float(self.times[-1]) if self.times.size else self.initial_time


def assemble_hamiltonian(h_matter: HermitianOperator, h_gravity: HermitianOperator,
                         h_int: HermitianOperator,
                         tolerances: Tolerances = DEFAULT_TOLERANCES) -> HermitianOperator:
    """H = h_matter x I + I x h_gravity + h_int on the matter-major total space."""
    dm, dg = h_matter.dimension, h_gravity.dimension
    if h_int.dimension != dm * dg:
        raise DimensionMismatchError(
            f"interaction term has dimension {h_int.dimension}, expected {dm * dg}")
    total = (np.kron(h_matter.matrix, np.eye(dg))
             + np.kron(np.eye(dm), h_gravity.matrix)
             + h_int.matrix)
    return HermitianOperator(total, tolerances=tolerances)


def evolution_operator(h: HermitianOperator, dt: float,
                       tolerances: Tolerances = DEFAULT_TOLERANCES) -> UnitaryOperator:
    """U = exp(-i H dt) via eigendecomposition of H."""
    w, v = h.eigensystem
    u = (v * np.exp(-1j * w * dt)) @ v.conj().T
    return UnitaryOperator(u, tolerances=tolerances)


def unitary_evolve(state, h: HermitianOperator, dt: float,
                   tolerances: Tolerances = DEFAULT_TOLERANCES):
    """Propagate a pure state (U psi) or density operator (U rho U^dag) by dt."""
    if isinstance(state, PureState):
        if state.dimension != h.dimension:
            raise DimensionMismatchError(
                f"state dimension {state.dimension} != Hamiltonian dimension {h.dimension}")
        u = evolution_operator(h, dt, tolerances).matrix
        return PureState(u @ state.amplitudes, state.space, tolerances=tolerances)
    if isinstance(state, DensityOperator):
        if state.dimension != h.dimension:
            raise DimensionMismatchError(
                f"operator dimension {state.dimension} != Hamiltonian dimension {h.dimension}")
        u = evolution_operator(h, dt, tolerances).matrix
        rho = u @ state.matrix @ u.conj().T
        rho = 0.5 * (rho + rho.conj().T)
        return DensityOperator(rho, tolerances=tolerances)
    raise TypeError(f"expected PureState or DensityOperator, got {type(state).__name__}")


def _hermitize(mat: np.ndarray) -> np.ndarray:
    return 0.5 * (mat + mat.conj().T)


def _check_bounded(state: np.ndarray):
    # density-operator entries are bounded by 1 in magnitude; runaway values
    # (or NaN) mean the step outran the integrator's stability region
    peak = np.abs(state).max()
    if not peak <= 2.0:
        raise TraceDriftError(
            f"integration diverged (max entry {peak:.3e}); reduce dt_max")


def master_evolve(rho: DensityOperator, gen: MasterGenerator,
                  t_start: float, t_end: float, dt_max: float,
                  tolerances: Tolerances = DEFAULT_TOLERANCES) -> DensityOperator:
    """Integrate rho' = L(rho) from t_start to t_end with fixed-step RK4.

    The step is (t_end - t_start)/n with n chosen so the step never exceeds
    dt_max. The state is re-Hermitized once per step (a no-op up to roundoff).
    Raises TraceDriftError when |tr(rho) - 1| exceeds the configured maximum,
    which signals a too-large step; smaller drift is tolerated but never
    renormalized away.
    """
    if dt_max <= 0:
        raise ValidationError(f"dt_max must be positive, got {dt_max}")
    if t_end < t_start:
        raise ValidationError(f"t_end {t_end} precedes t_start {t_start}")
    if rho.dimension != gen.dimension:
        raise DimensionMismatchError(
            f"state dimension {rho.dimension} != generator dimension {gen.dimension}")
    if t_end == t_start:
        return rho

    span = t_end - t_start
    n_steps = max(1, math.ceil(span / dt_max - 1e-12))
    h = span / n_steps
    d = gen.dimension

    if d <= _SUPEROP_DIM_LIMIT:
        lsup = gen.superoperator
        v = rho.matrix.reshape(-1)
        for _ in range(n_steps):
            k1 = lsup @ v
            k2 = lsup @ (v + 0.5 * h * k1)
            k3 = lsup @ (v + 0.5 * h * k2)
            k4 = lsup @ (v + h * k3)
            v = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            v = _hermitize(v.reshape(d, d)).reshape(-1)
            _check_bounded(v)
        mat = v.reshape(d, d)
    else:
        mat = rho.matrix.copy()
        for _ in range(n_steps):
            k1 = gen.apply(mat)
            k2 = gen.apply(mat + 0.5 * h * k1)
            k3 = gen.apply(mat + 0.5 * h * k2)
            k4 = gen.apply(mat + h * k3)
            mat = _hermitize(mat + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
            _check_bounded(mat)

    drift = abs(np.trace(mat) - 1.0)
    if not drift <= tolerances.max_trace_drift:  # also catches NaN from blow-up
        raise TraceDriftError(
            f"trace drift {drift:.3e} exceeds {tolerances.max_trace_drift:.1e}; reduce dt_max")
    return DensityOperator(mat, tolerances=tolerances.for_integrator_output())


def apply_linear_map(gen: MasterGenerator, rho: DensityOperator, t: float,
                     dt_max: float = 1e-3,
                     tolerances: Tolerances = DEFAULT_TOLERANCES) -> DensityOperator:
    """The map T = exp(L t) applied to rho; linear in rho by construction."""
    if t < 0:
        raise ValidationError(f"evolution time must be nonnegative, got {t}")
    return master_evolve(rho, gen, 0.0, t, dt_max, tolerances=tolerances)


def reduced_matter_trajectory(psi0: PureState, h: HermitianOperator,
                              times, t0: float = 0.0,
                              tolerances: Tolerances = DEFAULT_TOLERANCES) -> list[DensityOperator]:
    """Matter reduced state of the unitarily evolved total state at each time.

    psi0 is the total state at time t0; every requested time is propagated
    from there with a single eigendecomposition of h.
    """
    times = np.asarray(times, dtype=float)
    if times.size and np.any(np.diff(times) < 0):
        raise ValidationError("times must be non-decreasing")
    if psi0.dimension != h.dimension:
        raise DimensionMismatchError(
            f"state dimension {psi0.dimension} != Hamiltonian dimension {h.dimension}")
    w, v = h.eigensystem
    coeffs = v.conj().T @ psi0.amplitudes
    out = []
    for t in times:
        amps = (v * np.exp(-1j * w * (t - t0))) @ coeffs
        psi_t = PureState(amps, psi0.space, tolerances=tolerances)
        out.append(partial_trace(psi_t, psi0.space, MATTER, tolerances=tolerances))
    return out
