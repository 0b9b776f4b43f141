"""Shared dense-matrix oracles, built independently of the package.

Everything here works from text labels and np.kron only, so the oracles do
not reuse any symbolic code path they are meant to check.  The basis-index
convention matches the simulator: amplitude index bit q is qubit q, so the
factor for qubit 0 is the last kron operand.
"""

import numpy as np
import pytest

PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

LETTERS = "IXYZ"


def dense_pauli(label: str) -> np.ndarray:
    m = np.eye(1, dtype=complex)
    for ch in reversed(label):
        m = np.kron(m, PAULI_1Q[ch])
    return m


def dense_commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def frob_sq(m: np.ndarray) -> float:
    return float(np.sum(np.abs(m) ** 2))


def all_labels(n: int, include_identity: bool = False):
    labels = [""]
    for _ in range(n):
        labels = [s + ch for s in labels for ch in LETTERS]
    if not include_identity:
        labels = [s for s in labels if s != "I" * n]
    return labels


def random_label(rng: np.random.Generator, n: int, identity_ok: bool = False) -> str:
    while True:
        label = "".join(LETTERS[i] for i in rng.integers(0, 4, size=n))
        if identity_ok or label != "I" * n:
            return label


def dense_ry(angle: float) -> np.ndarray:
    c, s = np.cos(angle / 2.0), np.sin(angle / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def dense_ry_all(n: int, angle: float) -> np.ndarray:
    m = np.eye(1, dtype=complex)
    for _ in range(n):
        m = np.kron(m, dense_ry(angle))
    return m


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
