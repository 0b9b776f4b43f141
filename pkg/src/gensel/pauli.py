"""Exact symbolic algebra of n-qubit Pauli strings.

Pauli strings are stored in the symplectic (binary) representation: two
n-bit masks ``x`` and ``z`` where bit ``q`` of each mask gives the X / Z
component of the factor acting on qubit ``q``.  Per-qubit encoding:

    (x, z) = (0, 0) -> I    (1, 0) -> X    (1, 1) -> Y    (0, 1) -> Z

The text form of a string is read leftmost character = qubit 0, so
``"ZIIII"`` is Z on qubit 0 and identity elsewhere.

Products, commutation checks and commutator Frobenius norms are computed
directly on the bit masks, never through a 2^n dimensional matrix.  The
squared Frobenius norm of a (nested) commutator of Pauli strings is always
an integer power of two, so those norms are returned as exact Python
integers; callers may convert at their own boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator

import numpy as np

__all__ = [
    "PauliString",
    "ScaledPauli",
    "commutes",
    "multiply",
    "commutator",
    "commutator_norm_sq",
    "double_commutator_norm_sq",
    "pauli_strings",
]

_LETTER_FROM_BITS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_BITS_FROM_LETTER = {v: k for k, v in _LETTER_FROM_BITS.items()}

# i^k for k = 0..3; all phases arising in Pauli products are of this form.
_PHASES = (1 + 0j, 1j, -1 + 0j, -1j)

_SINGLE_QUBIT_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class PauliString:
    """An n-qubit Pauli string in symplectic bit-mask form.

    Attributes:
        n: qubit count (positive).
        x: integer bit mask, bit q set iff the factor on qubit q has an X
           component (X or Y).
        z: integer bit mask, bit q set iff the factor on qubit q has a Z
           component (Z or Y).

    The representation is canonical: two strings are equal iff their masks
    are equal.  The identity (x == z == 0) is representable so that products
    close, but pool construction and circuit code reject it.
    """

    n: int
    x: int
    z: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"qubit count must be positive, got {self.n}")
        limit = 1 << self.n
        if not (0 <= self.x < limit and 0 <= self.z < limit):
            raise ValueError(
                f"bit masks out of range for n={self.n}: x={self.x}, z={self.z}"
            )

    @classmethod
    def _mk(cls, n: int, x: int, z: int) -> "PauliString":
        # Fast path for internal construction from already-valid masks.
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "x", x)
        object.__setattr__(obj, "z", z)
        return obj

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse a text label over {I, X, Y, Z}, leftmost char = qubit 0."""
        if not label:
            raise ValueError("Pauli label must be non-empty")
        x = z = 0
        for q, ch in enumerate(label):
            try:
                xb, zb = _BITS_FROM_LETTER[ch]
            except KeyError:
                raise ValueError(
                    f"invalid character {ch!r} in Pauli label {label!r}; "
                    "expected only I, X, Y, Z"
                ) from None
            x |= xb << q
            z |= zb << q
        return cls(len(label), x, z)

    @classmethod
    def from_bits(cls, x_bits, z_bits) -> "PauliString":
        """Build from explicit per-qubit bit vectors (index 0 = qubit 0)."""
        if len(x_bits) != len(z_bits):
            raise ValueError("x_bits and z_bits must have equal length")
        x = sum(int(bool(b)) << q for q, b in enumerate(x_bits))
        z = sum(int(bool(b)) << q for q, b in enumerate(z_bits))
        return cls(len(x_bits), x, z)

    @property
    def x_bits(self) -> tuple:
        return tuple((self.x >> q) & 1 for q in range(self.n))

    @property
    def z_bits(self) -> tuple:
        return tuple((self.z >> q) & 1 for q in range(self.n))

    @property
    def label(self) -> str:
        return "".join(
            _LETTER_FROM_BITS[(self.x >> q) & 1, (self.z >> q) & 1]
            for q in range(self.n)
        )

    @property
    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def to_matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix; basis index bit q corresponds to qubit q."""
        m = np.eye(1, dtype=complex)
        for ch in reversed(self.label):
            m = np.kron(m, _SINGLE_QUBIT_MATRICES[ch])
        return m

    def __str__(self) -> str:
        return self.label

    def __repr__(self) -> str:
        return f"PauliString({self.label!r})"


@dataclass(frozen=True)
class ScaledPauli:
    """A Pauli string with a scalar coefficient, as produced by products.

    Products of Hermitian Pauli strings only ever pick up phases from
    {1, i, -1, -i}, so ``coefficient`` is that phase times whatever scalars
    the caller has accumulated (e.g. the 2s from commutators).
    """

    base: PauliString
    coefficient: complex


def _check_same_n(a: PauliString, b: PauliString) -> None:
    if a.n != b.n:
        raise ValueError(f"qubit-count mismatch: {a.n} vs {b.n}")


def commutes(a: PauliString, b: PauliString) -> bool:
    """True iff [a, b] = 0.

    Two Pauli strings either commute or anticommute; they commute iff the
    symplectic form sum_q (a.x_q b.z_q + a.z_q b.x_q) is even.
    """
    _check_same_n(a, b)
    return (((a.x & b.z).bit_count() + (a.z & b.x).bit_count()) & 1) == 0


def multiply(a: PauliString, b: PauliString) -> ScaledPauli:
    """Product a * b as a phase times a Pauli string.

    Uses the convention P(x, z) = i^(x.z) X^x Z^z per qubit, under which the
    phase of any product of Hermitian strings is a power of i.
    """
    _check_same_n(a, b)
    x3 = a.x ^ b.x
    z3 = a.z ^ b.z
    # Power of i picked up when reordering X/Z factors and re-canonicalizing.
    e = (
        (a.x & a.z).bit_count()
        + (b.x & b.z).bit_count()
        + 2 * (a.z & b.x).bit_count()
        - (x3 & z3).bit_count()
    ) & 3
    return ScaledPauli(PauliString._mk(a.n, x3, z3), _PHASES[e])


def commutator(a: PauliString, b: PauliString) -> ScaledPauli | None:
    """[a, b] as a scaled Pauli string, or None when the commutator is zero.

    For anticommuting strings [a, b] = 2ab, a single Pauli string up to a
    phase; for commuting strings the commutator vanishes identically.
    """
    if commutes(a, b):
        return None
    prod = multiply(a, b)
    return ScaledPauli(prod.base, 2 * prod.coefficient)


def commutator_norm_sq(a: PauliString, b: PauliString) -> int:
    """Squared Frobenius norm of [a, b], exactly.

    Zero for commuting strings; otherwise ||2ab||_F^2 = 4 * 2^n since every
    n-qubit Pauli string has squared Frobenius norm 2^n.
    """
    c = commutator(a, b)
    if c is None:
        return 0
    mag2 = int(c.coefficient.real**2 + c.coefficient.imag**2)
    return mag2 << a.n


def double_commutator_norm_sq(
    g_k: PauliString, g_j: PauliString, o: PauliString
) -> int:
    """Squared Frobenius norm of [g_k, [g_j, o]], exactly.

    Computed symbolically for arbitrary Pauli triples via nested commutators.
    When both generators anticommute with ``o``, the value is 0 if the
    generators mutually anticommute and 2^(n+4) if they commute.
    """
    _check_same_n(g_k, o)
    inner = commutator(g_j, o)
    if inner is None:
        return 0
    outer = commutator(g_k, inner.base)
    if outer is None:
        return 0
    coeff = inner.coefficient * outer.coefficient
    mag2 = int(coeff.real**2 + coeff.imag**2)
    return mag2 << o.n


def pauli_strings(n: int, include_identity: bool = False) -> Iterator[PauliString]:
    """Iterate all n-qubit Pauli strings in canonical order.

    The order is lexicographic over the concatenated bit vector
    (x_0..x_{n-1}, z_0..z_{n-1}); the identity comes first when included.
    """
    if n < 1:
        raise ValueError(f"qubit count must be positive, got {n}")
    for bits in product((0, 1), repeat=2 * n):
        if not include_identity and not any(bits):
            continue
        x = sum(b << q for q, b in enumerate(bits[:n]))
        z = sum(b << q for q, b in enumerate(bits[n:]))
        yield PauliString._mk(n, x, z)
