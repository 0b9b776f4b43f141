"""Numerical verification of the commutator-sum identities over su(2^n).

The basis used everywhere is the full set of 4^n - 1 non-identity Pauli
strings, normalized as G_P = P / sqrt(2^n) so that Tr(G_P G_Q) = delta_PQ.
Over this basis the following hold and are checked here numerically:

  * sum_j ||[G_j, O]||_F^2               = c   ||O||_F^2      (first-order sum)
  * sum_{j,k} ||[G_k, [G_j, O]]||_F^2    = c^2 ||O||_F^2      (double sum)
  * sum_j ||[G_j, [G_j, O]]||_F^2       >= c^2 ||O||_F^2 / (d^2 - 1)
  * sum_{j!=k} ||[G_k, [G_j, O]]||_F^2  <= c^2 (d^2-2)/(d^2-1) ||O||_F^2

where c is the quadratic-Casimir eigenvalue on the adjoint representation,
measured (never assumed) by applying sum_j ad_{G_j}^2 to every basis element.

All sums are evaluated symbolically: a commutator of Pauli strings is either
zero or a single scaled Pauli string, and distinct Pauli strings are
Frobenius-orthogonal, so each term reduces to exact bit-mask arithmetic.
No 2^n-dimensional matrix is ever formed on this path; the only dense code
here is ``g_purity``, which projects an observable matrix onto the span of
an explicit orthonormal generator subset.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .pauli import PauliString, commutator, pauli_strings

__all__ = [
    "TheoryVerificationError",
    "OrthonormalBasis",
    "ObservableInAlgebra",
    "casimir_constant",
    "verify_theorem1",
    "verify_lemma1",
    "verify_lemma2_and_theorem2",
    "g_purity",
    "normalized_pauli_matrices",
    "random_observable",
]


class TheoryVerificationError(RuntimeError):
    """An identity that must hold exactly failed beyond tolerance.

    This signals an implementation bug (or a violated precondition), not a
    property of the inputs.
    """


@lru_cache(maxsize=None)
def _basis(n: int) -> tuple[PauliString, ...]:
    return tuple(pauli_strings(n))


@dataclass(frozen=True)
class OrthonormalBasis:
    """The full normalized Pauli basis of su(2^n)."""

    n: int
    elements: tuple[PauliString, ...]

    @classmethod
    def full(cls, n: int) -> "OrthonormalBasis":
        return cls(n, _basis(n))

    @property
    def dim(self) -> int:
        return len(self.elements)

    def matrices(self) -> list[np.ndarray]:
        return normalized_pauli_matrices(self.elements)


@dataclass
class ObservableInAlgebra:
    """An observable expressed in the normalized Pauli basis.

    ``coeffs[m]`` multiplies the m-th basis element in canonical enumeration
    order, so O = sum_m coeffs[m] * P_m / sqrt(2^n) and
    ||O||_F^2 = sum_m coeffs[m]^2.
    """

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=float)
        expected = 4**self.n - 1
        if self.coeffs.shape != (expected,):
            raise ValueError(
                f"coefficient vector has shape {self.coeffs.shape}, "
                f"expected ({expected},) for n={self.n}"
            )

    @classmethod
    def from_terms(
        cls, n: int, terms: Mapping[PauliString, float]
    ) -> "ObservableInAlgebra":
        index = {p: m for m, p in enumerate(_basis(n))}
        coeffs = np.zeros(4**n - 1)
        for p, w in terms.items():
            if p.is_identity:
                raise ValueError("identity has no component in the traceless basis")
            coeffs[index[p]] = w
        return cls(n, coeffs)

    @classmethod
    def single(cls, p: PauliString, coeff: float = 1.0) -> "ObservableInAlgebra":
        return cls.from_terms(p.n, {p: coeff})

    def terms(self) -> list[tuple[PauliString, float]]:
        basis = _basis(self.n)
        return [(basis[m], float(w)) for m, w in enumerate(self.coeffs) if w != 0.0]

    def norm_sq(self) -> float:
        return float(self.coeffs @ self.coeffs)

    def to_matrix(self) -> np.ndarray:
        scale = 1.0 / np.sqrt(2.0**self.n)
        out = np.zeros((1 << self.n, 1 << self.n), dtype=complex)
        for p, w in self.terms():
            out += w * scale * p.to_matrix()
        return out


class Theorem1Result(NamedTuple):
    lhs: float
    rhs: float
    c: float


class Lemma1Result(NamedTuple):
    lhs: float
    rhs: float


class Lemma2Theorem2Result(NamedTuple):
    diag_sum: float
    offdiag_sum: float
    lower_bound: float
    upper_bound: float


def _commutator_terms(
    p: PauliString, terms: Iterable[tuple[PauliString, complex]]
) -> dict[PauliString, complex]:
    """[p, sum_q w_q q] as a Pauli-sum dict (unnormalized strings)."""
    out: dict[PauliString, complex] = {}
    for q, w in terms:
        sp = commutator(p, q)
        if sp is not None:
            key = sp.base
            out[key] = out.get(key, 0j) + w * sp.coefficient
    return out


@lru_cache(maxsize=None)
def casimir_constant(n: int) -> float:
    """Eigenvalue c of sum_j ad_{G_j}^2 on the adjoint representation.

    For every basis element G_m the operator sum_j [G_j, [G_j, G_m]] is
    accumulated symbolically and required to be exactly proportional to G_m
    with the same constant across all m (within 1e-9); any inconsistency
    raises TheoryVerificationError.
    """
    basis = _basis(n)
    d = 2.0**n
    constants = np.empty(len(basis))
    for m, p_m in enumerate(basis):
        acc: dict[PauliString, complex] = {}
        for p_j in basis:
            inner = commutator(p_j, p_m)
            if inner is None:
                continue
            outer = commutator(p_j, inner.base)
            if outer is None:
                continue
            coeff = inner.coefficient * outer.coefficient
            acc[outer.base] = acc.get(outer.base, 0j) + coeff
        acc = {p: w for p, w in acc.items() if abs(w) > 1e-12}
        if set(acc) != {p_m}:
            raise TheoryVerificationError(
                f"sum_j ad^2(G_j) did not map {p_m} onto itself"
            )
        alpha = acc[p_m]
        if abs(alpha.imag) > 1e-9 * abs(alpha.real):
            raise TheoryVerificationError(
                f"non-real proportionality constant {alpha} for {p_m}"
            )
        # [G_j, [G_j, G_m]] carries 1/d relative to [P_j, [P_j, P_m]].
        constants[m] = alpha.real / d
    c = float(constants[0])
    if c <= 0:
        raise TheoryVerificationError(f"non-positive Casimir constant {c}")
    spread = float(np.max(np.abs(constants - c)))
    if spread > 1e-9 * c:
        raise TheoryVerificationError(
            f"proportionality constant varies across basis elements "
            f"(spread {spread})"
        )
    return c


def verify_theorem1(o: ObservableInAlgebra) -> Theorem1Result:
    """Compute both sides of sum_j ||[G_j, O]||^2 = c ||O||^2."""
    d = 2.0**o.n
    terms = o.terms()
    lhs = 0.0
    for p_j in _basis(o.n):
        comm = _commutator_terms(p_j, terms)
        # ||[G_j, O]||^2 = ||[P_j, sum w P]||^2 / d^2, and a Pauli sum has
        # squared norm sum |coeff|^2 * d by orthogonality of distinct strings.
        lhs += sum(abs(w) ** 2 for w in comm.values()) / d
    c = casimir_constant(o.n)
    return Theorem1Result(lhs, c * o.norm_sq(), c)


def _double_commutator_sums(o: ObservableInAlgebra) -> tuple[float, float]:
    """(total, diagonal) of sum over (j, k) of ||[G_k, [G_j, O]]||^2."""
    basis = _basis(o.n)
    d = 2.0**o.n
    terms = o.terms()
    inv = 4.0 / (d * d)
    total = 0.0
    diag = 0.0
    for j, p_j in enumerate(basis):
        inner = _commutator_terms(p_j, terms)
        if not inner:
            continue
        # For fixed k the outer commutator kills commuting terms and doubles
        # the rest; surviving products are distinct strings, so the norm is a
        # plain weighted count: ||[G_k, [G_j, O]]||^2 = (4/d^2) sum_anti |w|^2.
        items = [(q.x, q.z, abs(w) ** 2) for q, w in inner.items()]
        for k, p_k in enumerate(basis):
            kx, kz = p_k.x, p_k.z
            s = 0.0
            for qx, qz, w2 in items:
                if ((kx & qz).bit_count() + (kz & qx).bit_count()) & 1:
                    s += w2
            if s:
                value = inv * s
                total += value
                if k == j:
                    diag += value
    return total, diag


def verify_lemma1(o: ObservableInAlgebra) -> Lemma1Result:
    """Compute both sides of sum_{j,k} ||[G_k, [G_j, O]]||^2 = c^2 ||O||^2."""
    total, _ = _double_commutator_sums(o)
    c = casimir_constant(o.n)
    return Lemma1Result(total, c * c * o.norm_sq())


def verify_lemma2_and_theorem2(
    o: ObservableInAlgebra, rel_tol: float = 1e-8
) -> Lemma2Theorem2Result:
    """Diagonal/off-diagonal split of the double sum plus its two bounds.

    Asserts, within ``rel_tol`` relative slack, that the diagonal part is at
    least c^2 ||O||^2 / (d^2 - 1), the off-diagonal part is at most
    c^2 ||O||^2 (d^2 - 2)/(d^2 - 1), and the two parts together reproduce
    c^2 ||O||^2.  A violation raises TheoryVerificationError.
    """
    total, diag = _double_commutator_sums(o)
    offdiag = total - diag
    c = casimir_constant(o.n)
    d2 = 4.0**o.n
    full = c * c * o.norm_sq()
    lower = full / (d2 - 1.0)
    upper = full * (d2 - 2.0) / (d2 - 1.0)
    scale = max(full, 1e-300)
    if diag < lower - rel_tol * scale:
        raise TheoryVerificationError(
            f"diagonal sum {diag} below lower bound {lower}"
        )
    if offdiag > upper + rel_tol * scale:
        raise TheoryVerificationError(
            f"off-diagonal sum {offdiag} above upper bound {upper}"
        )
    if abs(total - full) > rel_tol * scale:
        raise TheoryVerificationError(
            f"double sum {total} != c^2 ||O||^2 = {full}"
        )
    return Lemma2Theorem2Result(diag, offdiag, lower, upper)


def normalized_pauli_matrices(paulis: Sequence[PauliString]) -> list[np.ndarray]:
    """Dense matrices P / sqrt(2^n); orthonormal under the trace inner product."""
    if not paulis:
        return []
    scale = 1.0 / np.sqrt(2.0 ** paulis[0].n)
    return [scale * p.to_matrix() for p in paulis]


def g_purity(
    observable: np.ndarray,
    generators: Sequence[np.ndarray],
    check_orthonormal: bool = True,
    atol: float = 1e-8,
) -> float:
    """Squared norm of the projection of O onto the span of the generators.

    Returns sum_j Tr(G_j O)^2 for an orthonormal set {G_j}; equals
    ||O||_F^2 exactly when O lies in the span, and is invariant under any
    orthonormal re-mixing of the set.
    """
    obs = np.asarray(observable, dtype=complex)
    mats = [np.asarray(g, dtype=complex) for g in generators]
    if check_orthonormal:
        for i, gi in enumerate(mats):
            for j, gj in enumerate(mats):
                overlap = np.trace(gi.conj().T @ gj)
                want = 1.0 if i == j else 0.0
                if abs(overlap - want) > atol:
                    raise ValueError(
                        f"generator subset is not orthonormal: "
                        f"Tr(G_{i}^† G_{j}) = {overlap}"
                    )
    total = 0.0
    for g in mats:
        t = np.trace(g @ obs)
        total += float(t.real**2 + t.imag**2)
    return total


def random_observable(
    n: int,
    rng: np.random.Generator,
    max_terms: int | None = None,
    unit_norm: bool = True,
) -> ObservableInAlgebra:
    """Random observable in the algebra, optionally sparse and unit-norm."""
    size = 4**n - 1
    coeffs = np.zeros(size)
    if max_terms is None or max_terms >= size:
        coeffs = rng.standard_normal(size)
    else:
        idx = rng.choice(size, size=max_terms, replace=False)
        coeffs[idx] = rng.standard_normal(max_terms)
    if unit_norm:
        coeffs = coeffs / np.linalg.norm(coeffs)
    return ObservableInAlgebra(n, coeffs)
