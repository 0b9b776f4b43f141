"""Dense statevector simulation of the Pauli-rotation product circuit.

The model prepares |0..0>, loads a scalar input x through an R_Y(x) rotation
on every qubit, then applies L rotations exp(-i theta_l G_l) in order
l = 1..L (the l = 1 factor acts on the state first), and finally measures
the expectation of a Pauli-string observable.

Basis convention: amplitude index bit q corresponds to qubit q, so |0..0>
is index 0.  A Pauli string acts on an amplitude vector via bit flips (X
components) and phase factors (Z/Y components) in O(2^n); no gate is ever
materialized as a matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliString

__all__ = [
    "StateVector",
    "CircuitModel",
    "apply_ry_encoding",
    "apply_pauli_rotation",
    "expectation",
    "run_model",
    "run_model_batch",
]

ENCODING_RY_UNIFORM = "ry-uniform"


@dataclass
class StateVector:
    """Dense array of 2^n complex amplitudes."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (1 << self.n,):
            raise ValueError(
                f"amplitude vector has shape {self.amplitudes.shape}, "
                f"expected ({1 << self.n},)"
            )

    @classmethod
    def zero_state(cls, n: int) -> "StateVector":
        amps = np.zeros(1 << n, dtype=complex)
        amps[0] = 1.0
        return cls(n, amps)

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


@dataclass(frozen=True)
class CircuitModel:
    """Encoding rule, ordered generator list and observable for one circuit."""

    n: int
    generators: tuple[PauliString, ...]
    observable: PauliString
    encoding: str = ENCODING_RY_UNIFORM

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if self.encoding != ENCODING_RY_UNIFORM:
            raise ValueError(f"unsupported encoding rule {self.encoding!r}")
        for g in self.generators:
            if g.n != self.n:
                raise ValueError("generator qubit count does not match model")
            if g.is_identity:
                raise ValueError("identity generator is not allowed")
        if self.observable.n != self.n:
            raise ValueError("observable qubit count does not match model")
        if self.observable.is_identity:
            raise ValueError("identity observable is not allowed")

    @property
    def depth(self) -> int:
        return len(self.generators)


def _apply_pauli_amps(amps: np.ndarray, n: int, g: PauliString) -> np.ndarray:
    """G @ amps along the last axis, via index permutation and signs."""
    size = 1 << n
    idx = np.arange(size)
    src = idx ^ g.x
    parity = (np.bitwise_count(np.uint64(g.z) & src.astype(np.uint64)) & 1).astype(int)
    signs = 1 - 2 * parity
    phase = 1j ** ((g.x & g.z).bit_count() % 4)
    return phase * signs * amps[..., src]


def _apply_ry_all_amps(amps: np.ndarray, n: int, angle: float) -> np.ndarray:
    """R_Y(angle) on every qubit, applied qubit by qubit along the last axis."""
    c, s = np.cos(angle / 2.0), np.sin(angle / 2.0)
    lead = amps.shape[:-1]
    for q in range(n):
        shaped = amps.reshape(*lead, 1 << (n - 1 - q), 2, 1 << q)
        a0 = shaped[..., 0, :]
        a1 = shaped[..., 1, :]
        new = np.empty_like(shaped)
        new[..., 0, :] = c * a0 - s * a1
        new[..., 1, :] = s * a0 + c * a1
        amps = new.reshape(*lead, 1 << n)
    return amps


def _apply_rotation_amps(amps, n, g: PauliString, theta) -> np.ndarray:
    """exp(-i theta G) @ amps; theta may be scalar or a leading-axis array."""
    theta = np.asarray(theta)
    cos_t = np.cos(theta)[..., None] if theta.ndim else np.cos(theta)
    sin_t = np.sin(theta)[..., None] if theta.ndim else np.sin(theta)
    return cos_t * amps - 1j * sin_t * _apply_pauli_amps(amps, n, g)


def _expectation_amps(amps: np.ndarray, n: int, o: PauliString) -> np.ndarray:
    value = np.sum(np.conj(amps) * _apply_pauli_amps(amps, n, o), axis=-1)
    if np.any(np.abs(value.imag) > 1e-12):
        raise AssertionError(
            f"Pauli expectation has imaginary residue {np.max(np.abs(value.imag))}"
        )
    return value.real


def apply_ry_encoding(state: StateVector, x: float) -> StateVector:
    """Apply R_Y(x) = exp(-i(x/2)Y) to every qubit; norm is preserved."""
    return StateVector(state.n, _apply_ry_all_amps(state.amplitudes, state.n, x))


def apply_pauli_rotation(
    state: StateVector, g: PauliString, theta: float
) -> StateVector:
    """Apply exp(-i theta G) = cos(theta) I - i sin(theta) G (valid as G^2 = I)."""
    if g.n != state.n:
        raise ValueError(f"qubit-count mismatch: {g.n} vs state.n={state.n}")
    if g.is_identity:
        raise ValueError("identity generator contributes only a global phase")
    return StateVector(
        state.n, _apply_rotation_amps(state.amplitudes, state.n, g, theta)
    )


def expectation(state: StateVector, o: PauliString) -> float:
    """<psi|O|psi>, real within 1e-12 imaginary residue (asserted, truncated)."""
    if o.n != state.n:
        raise ValueError(f"qubit-count mismatch: {o.n} vs state.n={state.n}")
    return float(_expectation_amps(state.amplitudes, state.n, o))


def run_model(model: CircuitModel, theta, x: float) -> float:
    """Full circuit evaluation: encode x, apply the L rotations, measure O."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (model.depth,):
        raise ValueError(
            f"theta has shape {theta.shape}, expected ({model.depth},)"
        )
    state = StateVector.zero_state(model.n)
    state = apply_ry_encoding(state, x)
    for g, t in zip(model.generators, theta):
        state = apply_pauli_rotation(state, g, float(t))
    return expectation(state, model.observable)


def run_model_batch(model: CircuitModel, theta, xs) -> np.ndarray:
    """Vectorized run_model over a batch of inputs with shared parameters.

    Equivalent to ``[run_model(model, theta, x) for x in xs]`` but applies
    every gate across the whole batch at once.
    """
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (model.depth,):
        raise ValueError(
            f"theta has shape {theta.shape}, expected ({model.depth},)"
        )
    xs = np.asarray(xs, dtype=float)
    size = 1 << model.n
    # R_Y(x) on every qubit from |0..0> yields a product state whose
    # amplitude on basis index b is cos(x/2)^(n - |b|) sin(x/2)^|b|.
    weights = np.bitwise_count(np.arange(size, dtype=np.uint64)).astype(int)
    c = np.cos(xs / 2.0)[:, None]
    s = np.sin(xs / 2.0)[:, None]
    amps = (c ** (model.n - weights[None, :]) * s ** weights[None, :]).astype(complex)
    for g, t in zip(model.generators, theta):
        amps = _apply_rotation_amps(amps, model.n, g, float(t))
    return _expectation_amps(amps, model.n, model.observable)
