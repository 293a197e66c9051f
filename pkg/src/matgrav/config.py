"""Central numerical tolerances.

Every comparison threshold used by the domain types and algorithms lives in
this one record so no module carries its own magic numbers. The defaults are
the ones quoted in the type invariants.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    state_norm: float = 1e-10        # |  ||psi|| - 1  | for pure states
    hermiticity: float = 1e-10       # max-entry deviation from the adjoint
    trace: float = 1e-10             # | tr(rho) - 1 |
    positivity: float = 1e-10        # eigenvalues of rho must be >= -positivity
    unitarity: float = 1e-9          # Frobenius norm of U^dag U - I
    projector: float = 1e-9          # idempotence / mutual orthogonality
    orthonormality: float = 1e-9     # Gram matrix vs identity, max entry
    degeneracy: float = 1e-9         # absolute gap that merges eigenvalues
    zero_cutoff: float = 1e-12       # spectral weight below this is discarded
    multiplicity: float = 1e-6       # | tr(P) - round(tr(P)) |
    probability_sum: float = 1e-9    # | sum(p) - 1 |
    reconstruction: float = 1e-8     # max-entry error rebuilding an input
    trace_drift: float = 1e-8        # asserted drift after master integration
    max_trace_drift: float = 1e-6    # drift beyond this raises TraceDriftError
    branch_cap: int = 10**6          # exhaustive enumeration size limit

    def for_integrator_output(self) -> "Tolerances":
        """Validation thresholds for states produced by the RK4 integrator."""
        return replace(self, trace=self.trace_drift, positivity=self.trace_drift)


DEFAULT_TOLERANCES = Tolerances()
