"""Dense complex linear algebra for small bipartite quantum systems.

States and operators are immutable wrappers around numpy arrays.  All
dimensions in this package are tiny (at most 9), so everything is dense
and validated eagerly at construction time.

Basis convention: local basis states are indexed 0..d-1 throughout.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Tolerance for structural checks (unitarity, hermiticity, idempotence).
ATOL = 1e-12
# Probabilities may stray this far outside [0, 1] from roundoff; anything
# worse indicates a bug and raises InternalConsistencyError.
CLAMP_TOL = 1e-9

OPERATOR_KINDS = ("unitary", "projector", "density", "generic")


class InternalConsistencyError(RuntimeError):
    """A numerical result violated an invariant by more than roundoff."""


def _as_square_complex(mat) -> np.ndarray:
    m = np.asarray(mat, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


@dataclass(frozen=True)
class StateVector:
    """A normalized pure state on a d-dimensional Hilbert space."""

    amps: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amps, dtype=complex).ravel()
        if a.size == 0:
            raise ValueError("state vector must be non-empty")
        if not np.all(np.isfinite(a)):
            raise ValueError("amplitudes must be finite")
        norm = np.linalg.norm(a)
        if norm < 1e-15:
            raise ValueError("cannot normalize the zero vector")
        a = a / norm
        a.setflags(write=False)
        object.__setattr__(self, "amps", a)

    @property
    def dim(self) -> int:
        return self.amps.size

    def projector(self) -> "Operator":
        """The rank-1 projector onto this state."""
        return Operator(np.outer(self.amps, self.amps.conj()), kind="projector")


@dataclass(frozen=True)
class Operator:
    """A square complex matrix tagged with its structural role.

    kind 'unitary' requires U†U = I, 'projector' requires P = P† = P²,
    'density' requires unit trace, hermiticity and positivity; 'generic'
    is unchecked.
    """

    mat: np.ndarray
    kind: str = "generic"

    def __post_init__(self):
        m = _as_square_complex(self.mat)
        if self.kind not in OPERATOR_KINDS:
            raise ValueError(f"unknown operator kind {self.kind!r}")
        d = m.shape[0]
        if self.kind == "unitary":
            if not np.allclose(m.conj().T @ m, np.eye(d), atol=1e-12, rtol=0):
                raise ValueError("matrix is not unitary")
        elif self.kind == "projector":
            if not np.allclose(m, m.conj().T, atol=1e-12, rtol=0):
                raise ValueError("projector is not hermitian")
            if not np.allclose(m @ m, m, atol=1e-12, rtol=0):
                raise ValueError("projector is not idempotent")
        elif self.kind == "density":
            if abs(np.trace(m) - 1.0) > 1e-12:
                raise ValueError("density operator trace must be 1")
            if not np.allclose(m, m.conj().T, atol=1e-12, rtol=0):
                raise ValueError("density operator is not hermitian")
            evals = np.linalg.eigvalsh(m)
            if evals.min() < -1e-10:
                raise ValueError(f"density operator has negative eigenvalue {evals.min():g}")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


def basis_state(dim: int, index: int) -> StateVector:
    """The computational basis state |index> in dimension dim."""
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} outside [0, {dim})")
    a = np.zeros(dim)
    a[index] = 1.0
    return StateVector(a)


def projector_onto(vec) -> Operator:
    """Rank-1 projector onto a (not necessarily normalized) vector."""
    v = vec.amps if isinstance(vec, StateVector) else np.asarray(vec, dtype=complex)
    v = v / np.linalg.norm(v)
    return Operator(np.outer(v, v.conj()), kind="projector")


def tensor(a, b):
    """Kronecker product of two states or two operators.

    The left factor is the slow (most significant) index, so
    tensor(|i>, |j>) is the basis state i*dB + j.
    """
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        return StateVector(np.kron(a.amps, b.amps))
    if isinstance(a, Operator) and isinstance(b, Operator):
        if a.kind == b.kind and a.kind in ("unitary", "projector", "density"):
            kind = a.kind
        else:
            kind = "generic"
        return Operator(np.kron(a.mat, b.mat), kind=kind)
    raise ValueError(
        f"cannot tensor {type(a).__name__} with {type(b).__name__}: operands must be the same kind"
    )


def _clamp_probability(p: float) -> float:
    if -CLAMP_TOL <= p <= 1.0 + CLAMP_TOL:
        return min(max(p, 0.0), 1.0)
    raise InternalConsistencyError(f"probability {p!r} outside [0, 1] by more than {CLAMP_TOL}")


def probability(state, proj: Operator) -> float:
    """Projection probability: <psi|P|psi> for pure states, Tr(rho P) for mixed.

    Accepts a StateVector or a density-kind Operator.  The result is
    clamped to [0, 1]; excursions beyond roundoff raise
    InternalConsistencyError.
    """
    if proj.kind != "projector":
        raise ValueError("probability requires a projector-kind operator")
    if isinstance(state, StateVector):
        if state.dim != proj.dim:
            raise ValueError(f"dimension mismatch: state {state.dim}, projector {proj.dim}")
        p = float(np.real(state.amps.conj() @ proj.mat @ state.amps))
    elif isinstance(state, Operator):
        if state.kind != "density":
            raise ValueError("operator state must be density kind")
        if state.dim != proj.dim:
            raise ValueError(f"dimension mismatch: state {state.dim}, projector {proj.dim}")
        p = float(np.real(np.trace(state.mat @ proj.mat)))
    else:
        raise ValueError(f"unsupported state type {type(state).__name__}")
    return _clamp_probability(p)


def partial_projection_probability(state, party: str, local_proj: Operator) -> float:
    """Marginal probability of a one-party projector on a bipartite state.

    party 'A' embeds the projector as P (x) I, party 'B' as I (x) P.
    The other party's dimension is inferred from the state.
    """
    if party not in ("A", "B"):
        raise ValueError(f"party must be 'A' or 'B', got {party!r}")
    if local_proj.kind != "projector":
        raise ValueError("local_proj must be a projector-kind operator")
    total = state.dim
    d = local_proj.dim
    if total % d != 0:
        raise ValueError(f"state dimension {total} is not divisible by projector dimension {d}")
    other = total // d
    ident = Operator(np.eye(other), kind="projector")
    if party == "A":
        full = tensor(local_proj, ident)
    else:
        full = tensor(ident, local_proj)
    return probability(state, full)
