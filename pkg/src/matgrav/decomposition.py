"""Spectral resolutions, Schmidt decompositions, and von Neumann entropy.

Eigenvalues within the degeneracy tolerance of each other are merged into a
single projector (spectral case) or rotated by a shared Haar-random unitary
(Schmidt case, when a generator is supplied). Spectral weight at or below the
zero cutoff is discarded. Entropy uses the natural logarithm with k = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import EigensolverError, ValidationError
from .linalg import BipartiteSpace, DensityOperator, PureState, as_matrix, haar_random_unitary


def _group_descending(values: np.ndarray, gap_tol: float) -> list[range]:
    """Chain consecutive entries of a descending vector whose gap is <= gap_tol."""
    groups: list[range] = []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i - 1] - values[i] > gap_tol:
            groups.append(range(start, i))
            start = i
    return groups


@dataclass(frozen=True)
class SpectralResolution:
    """Distinct eigenvalues of a density operator with their spectral projectors.

    eigenvalues are strictly decreasing; multiplicities[a] is the rank of
    projectors[a]; zero_rank counts the discarded null directions.
    """

    eigenvalues: np.ndarray
    projectors: tuple[np.ndarray, ...]
    multiplicities: np.ndarray
    zero_rank: int
    tolerances: Tolerances = DEFAULT_TOLERANCES

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=float)
        mult = np.asarray(self.multiplicities, dtype=int)
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "multiplicities", mult)
        tol = self.tolerances
        if len(lam) != len(self.projectors) or len(lam) != len(mult):
            raise ValidationError("eigenvalues, projectors and multiplicities must align")
        if np.any(np.diff(lam) >= 0):
            raise ValidationError("eigenvalues must be strictly decreasing")
        if np.any(lam <= tol.zero_cutoff):
            raise ValidationError("retained eigenvalues must exceed the zero cutoff")
        for a, p in enumerate(self.projectors):
            if np.abs(p @ p - p).max() > tol.projector:
                raise ValidationError(f"projector {a} is not idempotent within tolerance")
            tr = np.trace(p).real
            if abs(tr - mult[a]) > tol.multiplicity:
                raise ValidationError(f"projector {a} trace {tr} != multiplicity {mult[a]}")
            for b in range(a):
                if np.abs(self.projectors[b] @ p).max() > tol.projector:
                    raise ValidationError(f"projectors {b} and {a} are not orthogonal")
        total = float(np.dot(mult, lam))
        if abs(total - 1.0) > tol.probability_sum + tol.zero_cutoff * (mult.sum() + self.zero_rank):
            raise ValidationError(f"sum of multiplicity-weighted eigenvalues is {total}, not 1")

    def reconstruct(self) -> np.ndarray:
        """Sum of eigenvalue-weighted projectors (null part omitted)."""
        dim = self.projectors[0].shape[0] if self.projectors else 0
        out = np.zeros((dim, dim), dtype=complex)
        for lam, p in zip(self.eigenvalues, self.projectors):
            out += lam * p
        return out


def spectral_resolution(rho: DensityOperator,
                        degeneracy_tol: float | None = None,
                        zero_cutoff: float | None = None,
                        tolerances: Tolerances = DEFAULT_TOLERANCES) -> SpectralResolution:
    """Eigenvalues and spectral projectors of a density operator.

    Eigenvalues closer than degeneracy_tol are merged into one projector with
    summed multiplicity; eigenvalues at or below zero_cutoff are dropped and
    counted in zero_rank.
    """
    degeneracy_tol = tolerances.degeneracy if degeneracy_tol is None else degeneracy_tol
    zero_cutoff = tolerances.zero_cutoff if zero_cutoff is None else zero_cutoff
    if degeneracy_tol <= 0:
        raise ValidationError("degeneracy_tol must be positive")
    if zero_cutoff < 0:
        raise ValidationError("zero_cutoff must be nonnegative")
    try:
        w, v = np.linalg.eigh(rho.matrix)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigendecomposition failed: {exc}") from exc
    w = w[::-1]
    v = v[:, ::-1]
    keep = w > zero_cutoff
    zero_rank = int((~keep).sum())
    wk, vk = w[keep], v[:, keep]

    eigenvalues, projectors, multiplicities = [], [], []
    for group in _group_descending(wk, degeneracy_tol):
        cols = vk[:, group.start:group.stop]
        eigenvalues.append(float(wk[group.start:group.stop].mean()))
        projectors.append(cols @ cols.conj().T)
        multiplicities.append(len(group))

    res = SpectralResolution(np.array(eigenvalues), tuple(projectors),
                             np.array(multiplicities), zero_rank, tolerances=tolerances)
    err = np.abs(res.reconstruct() - rho.matrix).max()
    if err > tolerances.reconstruction:
        raise ValidationError(f"spectral reconstruction error {err:.3e} beyond tolerance")
    return res


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Schmidt form of a bipartite pure state: sum_a c_a (matter_a x gravity_a).

    coefficients are positive and non-increasing; the factor lists are
    orthonormal (rows of the stored arrays).
    """

    coefficients: np.ndarray
    matter_vectors: np.ndarray
    gravity_vectors: np.ndarray
    tolerances: Tolerances = DEFAULT_TOLERANCES

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=float)
        object.__setattr__(self, "coefficients", c)
        tol = self.tolerances
        if np.any(c <= 0):
            raise ValidationError("Schmidt coefficients must be positive")
        if np.any(np.diff(c) > 0):
            raise ValidationError("Schmidt coefficients must be non-increasing")
        if abs((c ** 2).sum() - 1.0) > tol.state_norm + tol.zero_cutoff * len(c):
            raise ValidationError("squared Schmidt coefficients must sum to 1")
        for name, vecs in (("matter", self.matter_vectors), ("gravity", self.gravity_vectors)):
            gram = vecs @ vecs.conj().T
            if np.abs(gram - np.eye(len(c))).max() > tol.orthonormality:
                raise ValidationError(f"{name} factor list is not orthonormal within tolerance")

    @property
    def rank(self) -> int:
        return len(self.coefficients)

    def state_vector(self) -> np.ndarray:
        """Rebuild the total state vector (matter-major)."""
        m = self.matter_vectors.T @ (self.coefficients[:, None] * self.gravity_vectors)
        return m.reshape(-1)

    def term_vector(self, a: int) -> np.ndarray:
        """Normalized product term matter_a x gravity_a."""
        return np.multiply.outer(self.matter_vectors[a], self.gravity_vectors[a]).reshape(-1)


def schmidt_decompose(psi: PureState, space: BipartiteSpace,
                      rng: np.random.Generator | None = None,
                      degeneracy_tol: float | None = None,
                      zero_cutoff: float | None = None,
                      tolerances: Tolerances = DEFAULT_TOLERANCES) -> SchmidtDecomposition:
    """Schmidt decomposition via SVD of the matter-major amplitude matrix.

    Within each group of coefficients that coincide within degeneracy_tol the
    paired factor bases are rotated by one shared Haar-random unitary when an
    rng is supplied (the decomposition is non-unique there, so it is chosen at
    random); without an rng the raw SVD basis is kept. Outside degenerate
    groups the first nonzero entry of each matter vector is made real-positive
    and the paired gravity vector absorbs the phase, so results are
    deterministic.
    """
    degeneracy_tol = tolerances.degeneracy if degeneracy_tol is None else degeneracy_tol
    zero_cutoff = tolerances.zero_cutoff if zero_cutoff is None else zero_cutoff
    if psi.dimension != space.total:
        raise ValidationError(
            f"state dimension {psi.dimension} does not match space total {space.total}")
    m = psi.amplitudes.reshape(space.dim_matter, space.dim_gravity)
    try:
        u, s, vh = np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"singular value decomposition failed: {exc}") from exc
    keep = s ** 2 > zero_cutoff
    u, s, vh = u[:, keep], s[keep], vh[keep, :]

    for group in _group_descending(s, degeneracy_tol):
        size = group.stop - group.start
        if size > 1 and rng is not None:
            w = haar_random_unitary(size, rng, tolerances=tolerances).matrix
            # rotate matter columns by W and gravity rows by W^dag: the
            # conjugate pairing keeps sum_a c_a (m_a x g_a) unchanged
            u[:, group.start:group.stop] = u[:, group.start:group.stop] @ w
            vh[group.start:group.stop, :] = w.conj().T @ vh[group.start:group.stop, :]

    matter = u.T.copy()
    gravity = vh.copy()
    for a in range(len(s)):
        lead = np.flatnonzero(np.abs(matter[a]) > 1e-10)[0]
        phase = matter[a, lead] / abs(matter[a, lead])
        matter[a] *= phase.conjugate()
        gravity[a] *= phase

    dec = SchmidtDecomposition(s, matter, gravity, tolerances=tolerances)
    err = np.linalg.norm(dec.state_vector() - psi.amplitudes)
    if err > tolerances.orthonormality:
        raise ValidationError(f"Schmidt reconstruction error {err:.3e} beyond tolerance")
    return dec


def von_neumann_entropy(rho, zero_cutoff: float | None = None,
                        tolerances: Tolerances = DEFAULT_TOLERANCES) -> float:
    """-tr(rho ln rho): minus the sum of p ln p over eigenvalues above the cutoff."""
    zero_cutoff = tolerances.zero_cutoff if zero_cutoff is None else zero_cutoff
    try:
        w = np.linalg.eigvalsh(as_matrix(rho))
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigendecomposition failed: {exc}") from exc
    p = w[w > zero_cutoff]
    return float(-(p * np.log(p)).sum())


def entropy_of_entanglement(psi: PureState, space: BipartiteSpace,
                            tolerances: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Entanglement entropy of a pure state across the matter/gravity split."""
    m = psi.amplitudes.reshape(space.dim_matter, space.dim_gravity)
    s = np.linalg.svd(m, compute_uv=False)
    p = s ** 2
    p = p[p > tolerances.zero_cutoff]
    return float(-(p * np.log(p)).sum())
