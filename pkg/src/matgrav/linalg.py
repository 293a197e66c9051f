"""Dense complex linear algebra on bipartite tensor-product spaces.

Domain types (bipartite space, pure states, density operators, Hermitian and
unitary operators) validate their invariants on construction and hold
read-only arrays afterwards. The composite index convention is matter-major
throughout the package: flat index a * dim_gravity + b addresses matter basis
state a and gravity basis state b.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import DimensionMismatchError, EigensolverError, ValidationError

MATTER = "matter"
GRAVITY = "gravity"


def _frozen_complex(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    if arr.ndim != ndim:
        raise ValidationError(f"expected a {ndim}-dimensional array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


def as_matrix(operator) -> np.ndarray:
    """Accept a raw ndarray or any wrapper exposing a .matrix attribute."""
    mat = getattr(operator, "matrix", operator)
    return np.asarray(mat, dtype=complex)


@dataclass(frozen=True)
class BipartiteSpace:
    """Tensor product of a matter factor and a gravity factor."""

    dim_matter: int
    dim_gravity: int

    def __post_init__(self):
        if self.dim_matter < 1 or self.dim_gravity < 1:
            raise ValidationError(
                f"factor dimensions must be >= 1, got {self.dim_matter} x {self.dim_gravity}"
            )

    @property
    def total(self) -> int:
        return self.dim_matter * self.dim_gravity


@dataclass(frozen=True)
class PureState:
    """Normalized state vector on a bipartite space, matter-major layout."""

    amplitudes: np.ndarray
    space: BipartiteSpace
    tolerances: Tolerances = field(default=DEFAULT_TOLERANCES, repr=False, compare=False)

    def __post_init__(self):
        amps = _frozen_complex(self.amplitudes, 1)
        object.__setattr__(self, "amplitudes", amps)
        if amps.shape[0] != self.space.total:
            raise DimensionMismatchError(
                f"amplitude vector has length {amps.shape[0]}, space total is {self.space.total}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > self.tolerances.state_norm:
            raise ValidationError(f"state norm {norm!r} deviates from 1 beyond tolerance")

    @property
    def dimension(self) -> int:
        return self.amplitudes.shape[0]

    def density(self) -> "DensityOperator":
        """Rank-one projector |psi><psi| as a density operator."""
        return DensityOperator(np.outer(self.amplitudes, self.amplitudes.conj()),
                               tolerances=self.tolerances)

    def as_factor_matrix(self) -> np.ndarray:
        """Amplitudes reshaped to (dim_matter, dim_gravity), matter-major."""
        return self.amplitudes.reshape(self.space.dim_matter, self.space.dim_gravity)


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian, positive, unit-trace matrix."""

    matrix: np.ndarray
    tolerances: Tolerances = field(default=DEFAULT_TOLERANCES, repr=False, compare=False)

    def __post_init__(self):
        mat = _frozen_complex(self.matrix, 2)
        object.__setattr__(self, "matrix", mat)
        if mat.shape[0] != mat.shape[1]:
            raise DimensionMismatchError(f"density matrix must be square, got {mat.shape}")
        tol = self.tolerances
        dev = np.abs(mat - mat.conj().T).max()
        if dev > tol.hermiticity:
            raise ValidationError(f"density matrix not Hermitian (max deviation {dev:.3e})")
        tr = np.trace(mat)
        if abs(tr - 1.0) > tol.trace:
            raise ValidationError(f"density matrix trace {tr!r} deviates from 1 beyond tolerance")
        smallest = np.linalg.eigvalsh(mat)[0]
        if smallest < -tol.positivity:
            raise ValidationError(f"density matrix has negative eigenvalue {smallest:.3e}")

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        """tr(rho^2), equals 1 exactly for pure states."""
        return float(np.real(np.trace(self.matrix @ self.matrix)))


@dataclass(frozen=True)
class HermitianOperator:
    """Hermitian matrix (Hamiltonians, symmetry generators)."""

    matrix: np.ndarray
    tolerances: Tolerances = field(default=DEFAULT_TOLERANCES, repr=False, compare=False)

    def __post_init__(self):
        mat = _frozen_complex(self.matrix, 2)
        object.__setattr__(self, "matrix", mat)
        if mat.shape[0] != mat.shape[1]:
            raise DimensionMismatchError(f"operator must be square, got {mat.shape}")
        dev = np.abs(mat - mat.conj().T).max()
        if dev > self.tolerances.hermiticity:
            raise ValidationError(f"operator not Hermitian (max deviation {dev:.3e})")

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def eigensystem(self) -> tuple[np.ndarray, np.ndarray]:
        """Eigenvalues and eigenvectors, computed once (the matrix is frozen)."""
        try:
            return np.linalg.eigh(self.matrix)
        except np.linalg.LinAlgError as exc:
            raise EigensolverError(f"eigendecomposition failed: {exc}") from exc


@dataclass(frozen=True)
class UnitaryOperator:
    """Unitary matrix; U^dag U = I within Frobenius tolerance."""

    matrix: np.ndarray
    tolerances: Tolerances = field(default=DEFAULT_TOLERANCES, repr=False, compare=False)

    def __post_init__(self):
        mat = _frozen_complex(self.matrix, 2)
        object.__setattr__(self, "matrix", mat)
        if mat.shape[0] != mat.shape[1]:
            raise DimensionMismatchError(f"operator must be square, got {mat.shape}")
        dev = np.linalg.norm(mat.conj().T @ mat - np.eye(mat.shape[0]))
        if dev > self.tolerances.unitarity:
            raise ValidationError(f"operator not unitary (Frobenius deviation {dev:.3e})")

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def tensor_state(matter_part, gravity_part, space: BipartiteSpace,
                 tolerances: Tolerances = DEFAULT_TOLERANCES) -> PureState:
    """Product state of one matter and one gravity vector, each normalized first."""
    m = np.asarray(matter_part, dtype=complex)
    g = np.asarray(gravity_part, dtype=complex)
    if m.shape != (space.dim_matter,):
        raise DimensionMismatchError(
            f"matter factor has shape {m.shape}, expected ({space.dim_matter},)")
    if g.shape != (space.dim_gravity,):
        raise DimensionMismatchError(
            f"gravity factor has shape {g.shape}, expected ({space.dim_gravity},)")
    mn = np.linalg.norm(m)
    gn = np.linalg.norm(g)
    if mn == 0.0 or gn == 0.0:
        raise ValidationError("tensor_state factors must be nonzero")
    # kron of the normalized factors lands exactly on the matter-major layout
    return PureState(np.kron(m / mn, g / gn), space, tolerances=tolerances)


def basis_state(index: int, space: BipartiteSpace,
                tolerances: Tolerances = DEFAULT_TOLERANCES) -> PureState:
    """Computational basis vector on the total space."""
    if not 0 <= index < space.total:
        raise ValidationError(f"basis index {index} outside [0, {space.total})")
    amps = np.zeros(space.total, dtype=complex)
    amps[index] = 1.0
    return PureState(amps, space, tolerances=tolerances)


def partial_trace(state, space: BipartiteSpace, side: str,
                  tolerances: Tolerances = DEFAULT_TOLERANCES) -> DensityOperator:
    """Reduced density operator on the kept side ('matter' or 'gravity').

    Accepts either a PureState or a DensityOperator on the total space.
    """
    if side not in (MATTER, GRAVITY):
        raise ValueError(f"side must be '{MATTER}' or '{GRAVITY}', got {side!r}")
    dm, dg = space.dim_matter, space.dim_gravity
    if isinstance(state, PureState):
        if state.dimension != space.total:
            raise DimensionMismatchError(
                f"state dimension {state.dimension} does not match space total {space.total}")
        m = state.amplitudes.reshape(dm, dg)
        reduced = m @ m.conj().T if side == MATTER else m.T @ m.conj()
    elif isinstance(state, DensityOperator):
        if state.dimension != space.total:
            raise DimensionMismatchError(
                f"operator dimension {state.dimension} does not match space total {space.total}")
        r = state.matrix.reshape(dm, dg, dm, dg)
        reduced = np.einsum("abcb->ac", r) if side == MATTER else np.einsum("abad->bd", r)
    else:
        raise TypeError(f"expected PureState or DensityOperator, got {type(state).__name__}")
    reduced = 0.5 * (reduced + reduced.conj().T)  # scrub roundoff asymmetry
    return DensityOperator(reduced, tolerances=tolerances)


def trace_distance(rho: DensityOperator, sigma: DensityOperator) -> float:
    """Half the sum of singular values of rho - sigma; lies in [0, 1]."""
    a, b = as_matrix(rho), as_matrix(sigma)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"operand shapes differ: {a.shape} vs {b.shape}")
    return float(0.5 * np.linalg.svd(a - b, compute_uv=False).sum())


def haar_random_unitary(n: int, rng: np.random.Generator,
                        tolerances: Tolerances = DEFAULT_TOLERANCES) -> UnitaryOperator:
    """Haar-distributed n x n unitary, deterministic for a fixed generator state.

    QR of a complex Ginibre matrix with the phases of the triangular factor's
    diagonal divided out, which makes the distribution exactly Haar.
    """
    if n < 1:
        raise ValidationError(f"unitary dimension must be >= 1, got {n}")
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    phases = d / np.abs(d)
    return UnitaryOperator(q * phases, tolerances=tolerances)


def commutator_norm(a, b) -> float:
    """Frobenius norm of AB - BA; accepts raw matrices or operator wrappers."""
    am, bm = as_matrix(a), as_matrix(b)
    if am.shape != bm.shape:
        raise DimensionMismatchError(f"operand shapes differ: {am.shape} vs {bm.shape}")
    return float(np.linalg.norm(am @ bm - bm @ am))


def random_state_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Normalized complex Gaussian vector (uniform on the unit sphere)."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_pure_state(space: BipartiteSpace, rng: np.random.Generator,
                      tolerances: Tolerances = DEFAULT_TOLERANCES) -> PureState:
    """Haar-random pure state on the total space (generically entangled)."""
    return PureState(random_state_vector(space.total, rng), space, tolerances=tolerances)


def random_density_operator(dim: int, rng: np.random.Generator, rank: int | None = None,
                            tolerances: Tolerances = DEFAULT_TOLERANCES) -> DensityOperator:
    """Random full-rank (or fixed-rank) density operator from a Ginibre draw."""
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    mat = g @ g.conj().T
    mat /= np.trace(mat).real
    mat = 0.5 * (mat + mat.conj().T)
    return DensityOperator(mat, tolerances=tolerances)


def random_hermitian(dim: int, rng: np.random.Generator,
                     unit_frobenius: bool = False) -> np.ndarray:
    """Hermitian part of a complex Ginibre matrix, optionally Frobenius-normalized."""
    g = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    h = 0.5 * (g + g.conj().T)
    if unit_frobenius:
        h /= np.linalg.norm(h)
    return h
