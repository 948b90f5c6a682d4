"""Physical measurement scenarios: tritter qutrits, biphoton qutrits, qubits.

Each scenario pairs a one-parameter family of Schmidt-diagonal entangled
states with a per-setting measurement family.  Every measurement here is
an orthonormal local basis, so a setting is fully described by a matrix
whose rows are the measurement basis vectors; outcome k of setting i has
projector |row_k*><row_k*|.

Settings are packed into flat float vectors for the optimizer:

* tritter: 8 phases [A0:(p2,p3), A1:(p2,p3), B0:(p2,p3), B1:(p2,p3)],
  with the first phase of each tritter fixed to 0 (global-phase gauge);
* biphoton / qubit: 4 polarizer angles [thA0, thA1, thB0, thB1].

All indices (settings, outcomes, basis states) are 0-based; printed
sources that label outcomes 1..3 correspond to indices 0..2 here.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qcore import Operator, StateVector, probability, partial_projection_probability, projector_onto, tensor

SQRT2 = np.sqrt(2.0)
OMEGA = np.exp(2j * np.pi / 3)

# Which projector (0=P1, 1=P2, 2=P3) plays outcome role 0, 1, 2 for each
# biphoton outcome pair choice.  Role 2 is the unused leftover outcome.
BIPHOTON_ORDERS = {
    "P1P2": (0, 1, 2),
    "P1P3": (0, 2, 1),
    "P2P3": (1, 2, 0),
}


@dataclass(frozen=True)
class Scenario:
    """A (state family, measurement family) pair with optimizer bounds."""

    kind: str  # 'tritter' | 'biphoton' | 'qubit'
    local_dim: int
    outcome_pair: str | None = None  # biphoton only: 'P1P2' | 'P1P3' | 'P2P3'

    def __post_init__(self):
        if self.kind not in ("tritter", "biphoton", "qubit"):
            raise ValueError(f"unknown scenario kind {self.kind!r}")
        if self.kind == "biphoton":
            if self.outcome_pair not in BIPHOTON_ORDERS:
                raise ValueError(f"biphoton outcome_pair must be one of {sorted(BIPHOTON_ORDERS)}")
        elif self.outcome_pair is not None:
            raise ValueError("outcome_pair is only meaningful for biphoton scenarios")

    # --- parameter-space geometry -------------------------------------

    @property
    def n_entanglement_params(self) -> int:
        return 1 if self.kind == "qubit" else 2

    @property
    def n_settings_params(self) -> int:
        return 8 if self.kind == "tritter" else 4

    def settings_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.n_settings_params
        hi = 2 * np.pi if self.kind == "tritter" else np.pi
        return np.zeros(n), np.full(n, hi)

    def entanglement_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        if self.kind == "qubit":
            return np.array([0.0]), np.array([1.5])
        return np.array([-3.0, -3.0]), np.array([3.0, 3.0])

    # --- states -------------------------------------------------------

    def schmidt_coefficients(self, params) -> np.ndarray:
        """Normalized real Schmidt coefficients (1, a[, b]) of the state."""
        p = np.atleast_1d(np.asarray(params, dtype=float))
        if p.size != self.n_entanglement_params:
            raise ValueError(
                f"{self.kind} scenario takes {self.n_entanglement_params} entanglement "
                f"parameter(s), got {p.size}"
            )
        if not np.all(np.isfinite(p)):
            raise ValueError("entanglement parameters must be finite")
        c = np.concatenate([[1.0], p])
        return c / np.linalg.norm(c)

    def state(self, params) -> StateVector:
        """The bipartite state vector sum_m c_m |m>|m> for these parameters."""
        c = self.schmidt_coefficients(params)
        d = self.local_dim
        amps = np.zeros(d * d)
        amps[np.arange(d) * d + np.arange(d)] = c
        return StateVector(amps)

    # --- measurements -------------------------------------------------

    def measurement_rows(self, settings) -> tuple[np.ndarray, np.ndarray]:
        """Measurement basis rows per party and setting.

        Returns (MA, MB), each of shape (2, d, d); MA[i, k] is the basis
        vector of outcome k of Alice's setting i (projector
        |v*><v*| for row v, i.e. outcome amplitude = v . psi_local).
        """
        s = np.asarray(settings, dtype=float).ravel()
        if s.size != self.n_settings_params:
            raise ValueError(
                f"{self.kind} scenario takes {self.n_settings_params} setting "
                f"parameters, got {s.size}"
            )
        if self.kind == "tritter":
            ma = np.stack([_tritter_rows(s[0], s[1]), _tritter_rows(s[2], s[3])])
            mb = np.stack([_tritter_rows(s[4], s[5]), _tritter_rows(s[6], s[7])])
        elif self.kind == "biphoton":
            order = list(BIPHOTON_ORDERS[self.outcome_pair])
            ma = np.stack([_biphoton_rows(s[0])[order], _biphoton_rows(s[1])[order]]).astype(complex)
            mb = np.stack([_biphoton_rows(s[2])[order], _biphoton_rows(s[3])[order]]).astype(complex)
        else:
            ma = np.stack([_qubit_rows(s[0]), _qubit_rows(s[1])]).astype(complex)
            mb = np.stack([_qubit_rows(s[2]), _qubit_rows(s[3])]).astype(complex)
        return ma, mb

    def outcome_projector(self, settings, party: str, i: int, k: int) -> Operator:
        """Local projector for outcome k of setting i of one party."""
        self._check_setting_outcome(i, k)
        if party not in ("A", "B"):
            raise ValueError(f"party must be 'A' or 'B', got {party!r}")
        ma, mb = self.measurement_rows(settings)
        rows = ma if party == "A" else mb
        return projector_onto(rows[i, k].conj())


    def _check_setting_outcome(self, i: int, k: int):
        if i not in (0, 1):
            raise ValueError(f"setting index {i} outside {{0, 1}}")
        if not 0 <= k < self.local_dim:
            raise ValueError(f"outcome index {k} outside [0, {self.local_dim})")


def tritter_scenario() -> Scenario:
    """Qutrits measured by three-port interferometers with phase shifters."""
    return Scenario(kind="tritter", local_dim=3)


def biphoton_scenario(outcome_pair: str = "P1P2") -> Scenario:
    """Polarization biphoton qutrits measured by rotated polarizers."""
    return Scenario(kind="biphoton", local_dim=3, outcome_pair=outcome_pair)


def qubit_scenario() -> Scenario:
    """Polarization qubits measured by rotated polarizers."""
    return Scenario(kind="qubit", local_dim=2)


# --- building blocks ----------------------------------------------------

# the bare Fourier multiport, U[k, l] = exp(i 2pi/3 k l) / sqrt(3)
_FOURIER = OMEGA ** (np.arange(3)[:, None] * np.arange(3)[None, :]) / np.sqrt(3)


def _tritter_rows(p2: float, p3: float) -> np.ndarray:
    """Multiport matrix with phase shifts (0, p2, p3), without the
    Operator validation wrapper (hot path of the optimizer)."""
    return _FOURIER * np.exp(1j * np.array([0.0, p2, p3]))[None, :]


def tritter_unitary(phases) -> Operator:
    """The 3x3 Fourier multiport followed by per-output phase shifts.

    U[k, l] = exp(i 2pi/3 k l) exp(i phases[l]) / sqrt(3).
    """
    p = np.asarray(phases, dtype=float).ravel()
    if p.size != 3 or not np.all(np.isfinite(p)):
        raise ValueError("tritter_unitary expects three finite phases")
    u = _FOURIER * np.exp(1j * p)[None, :]
    return Operator(u, kind="unitary")


def tritter_state(a: float, b: float) -> StateVector:
    """(|00> + a|11> + b|22>) / sqrt(1 + a^2 + b^2) on two qutrits."""
    return tritter_scenario().state((a, b))


def qubit_state(a: float) -> StateVector:
    """(|00> + a|11>) / sqrt(1 + a^2) on two qubits."""
    return qubit_scenario().state((a,))


def _qubit_rows(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]])


def qubit_projectors(theta: float) -> tuple[Operator, Operator]:
    """Polarizer projectors (pass, fail) for analysis angle theta."""
    rows = _qubit_rows(float(theta))
    return projector_onto(rows[0]), projector_onto(rows[1])


def _biphoton_rows(theta: float) -> np.ndarray:
    """Rotated biphoton basis vectors in the (|HH>, |HV>, |VV>) basis.

    |HV> is the normalized symmetric two-photon state; rotation acts via
    a_theta^dag = cos(theta) a_H^dag + sin(theta) a_V^dag.  Rows are the
    two-photons-pass, two-photons-fail and one-each outcomes.
    """
    c, s = np.cos(theta), np.sin(theta)
    return np.array([
        [c * c, SQRT2 * c * s, s * s],
        [s * s, -SQRT2 * c * s, c * c],
        [-SQRT2 * c * s, np.cos(2 * theta), SQRT2 * c * s],
    ])


def biphoton_projectors(theta: float) -> tuple[Operator, Operator, Operator]:
    """The three polarizer outcome projectors (P1, P2, P3) at angle theta."""
    if not np.isfinite(theta):
        raise ValueError("theta must be finite")
    rows = _biphoton_rows(float(theta))
    return tuple(projector_onto(r) for r in rows)


def mix_with_noise(state: StateVector, noise_fraction: float) -> Operator:
    """(1 - F)|psi><psi| + F * I/d^2 as a density operator."""
    f = float(noise_fraction)
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"noise fraction {f} outside [0, 1]")
    d2 = state.dim
    rho = (1.0 - f) * np.outer(state.amps, state.amps.conj()) + f * np.eye(d2) / d2
    return Operator(rho, kind="density")


# --- probabilities ------------------------------------------------------

def joint_probability(sc: Scenario, state, settings, i: int, j: int, k: int, l: int) -> float:
    """P(outcomes k, l | Alice setting i, Bob setting j), via projectors."""
    sc._check_setting_outcome(i, k)
    sc._check_setting_outcome(j, l)
    pa = sc.outcome_projector(settings, "A", i, k)
    pb = sc.outcome_projector(settings, "B", j, l)
    return probability(state, tensor(pa, pb))


def single_probability(sc: Scenario, state, settings, party: str, i: int, k: int) -> float:
    """Marginal probability P(outcome k | one party's setting i)."""
    sc._check_setting_outcome(i, k)
    proj = sc.outcome_projector(settings, party, i, k)
    if isinstance(state, StateVector):
        return partial_projection_probability(state, party, proj)
    d = sc.local_dim
    ident = Operator(np.eye(d), kind="projector")
    full = tensor(proj, ident) if party == "A" else tensor(ident, proj)
    return probability(state, full)


def probability_tables(sc: Scenario, state, settings):
    """All joint and single outcome probabilities in one vectorized pass.

    Returns (joint, single_a, single_b) with shapes (2, 2, d, d), (2, d)
    and (2, d): joint[i, j, k, l] is the coincidence probability and
    single_a[i, k] Alice's marginal.  Accepts a StateVector, a
    density-kind Operator, or raw Schmidt coefficients (length d).
    """
    ma, mb = sc.measurement_rows(settings)
    d = sc.local_dim
    if isinstance(state, Operator):
        rho = state.mat.reshape(d, d, d, d)  # <a1 b1|rho|a2 b2>
        joint = np.real(np.einsum("ika,jlb,abcd,ikc,jld->ijkl",
                                  ma, mb, rho, ma.conj(), mb.conj()))
        rho_a = np.trace(rho, axis1=1, axis2=3)
        rho_b = np.trace(rho, axis1=0, axis2=2)
        sa = np.real(np.einsum("ikm,mn,ikn->ik", ma, rho_a, ma.conj()))
        sb = np.real(np.einsum("jlm,mn,jln->jl", mb, rho_b, mb.conj()))
        return joint, sa, sb
    if isinstance(state, StateVector):
        psi = state.amps.reshape(d, d)
        coeffs = np.diagonal(psi).real
        if not np.allclose(psi, np.diag(coeffs), atol=1e-12):
            # General pure state: fall back to the density path.
            return probability_tables(sc, state.projector(), settings)
    else:
        coeffs = np.asarray(state, dtype=float).ravel()
        if coeffs.size != d:
            raise ValueError(f"expected {d} Schmidt coefficients, got {coeffs.size}")
    amp = np.einsum("ikm,jlm,m->ijkl", ma, mb, coeffs)
    joint = np.abs(amp) ** 2
    sa = np.einsum("ikm,m->ik", np.abs(ma) ** 2, coeffs ** 2)
    sb = np.einsum("jlm,m->jl", np.abs(mb) ** 2, coeffs ** 2)
    return joint, sa, sb
