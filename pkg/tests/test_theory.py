"""Tests for the Casimir-identity verification, symbolic vs dense."""

import numpy as np
import pytest

from gensel.pauli import PauliString
from gensel.theory import (
    ObservableInAlgebra,
    OrthonormalBasis,
    casimir_constant,
    g_purity,
    normalized_pauli_matrices,
    random_observable,
    verify_lemma1,
    verify_lemma2_and_theorem2,
    verify_theorem1,
)

from conftest import dense_commutator, dense_pauli, frob_sq

P = PauliString.from_label


def _dense_basis(n: int) -> list[np.ndarray]:
    # Order follows the package's canonical enumeration (coeffs are aligned
    # to it); the matrices themselves come from the independent oracle.
    from gensel.pauli import pauli_strings

    scale = 1.0 / np.sqrt(2.0**n)
    return [scale * dense_pauli(p.label) for p in pauli_strings(n)]


def _dense_observable(o: ObservableInAlgebra) -> np.ndarray:
    basis = _dense_basis(o.n)
    out = np.zeros_like(basis[0])
    for w, g in zip(o.coeffs, basis):
        out = out + w * g
    return out


def _dense_sums(o: ObservableInAlgebra):
    """Theorem-1 lhs, full double sum and its diagonal, via dense matrices."""
    basis = _dense_basis(o.n)
    obs = _dense_observable(o)
    thm1 = sum(frob_sq(dense_commutator(g, obs)) for g in basis)
    inners = [dense_commutator(g, obs) for g in basis]
    total = 0.0
    diag = 0.0
    for j, inner in enumerate(inners):
        for k, g in enumerate(basis):
            value = frob_sq(dense_commutator(g, inner))
            total += value
            if j == k:
                diag += value
    return thm1, total, diag


class TestCasimirConstant:
    def test_n1_is_exactly_four(self):
        assert casimir_constant(1) == pytest.approx(4.0, abs=1e-12)

    def test_measured_matches_dense_application(self):
        """Apply sum_j ad^2 to dense basis elements and read off the constant."""
        for n in (1, 2):
            basis = _dense_basis(n)
            c = casimir_constant(n)
            for target in basis[:5]:
                acc = np.zeros_like(target)
                for g in basis:
                    acc = acc + dense_commutator(g, dense_commutator(g, target))
                assert np.allclose(acc, c * target, atol=1e-10)

    def test_closed_form_cross_check(self):
        """The measured constant agrees with 2d for the dimensions tested."""
        for n in (1, 2, 3):
            assert casimir_constant(n) == pytest.approx(2.0 * 2**n, rel=1e-12)

    def test_positive(self):
        assert casimir_constant(2) > 0


class TestTheorem1:
    def test_single_z_at_n1(self):
        result = verify_theorem1(ObservableInAlgebra.single(P("Z")))
        assert result.lhs == pytest.approx(4.0, abs=1e-12)
        assert result.rhs == pytest.approx(4.0, abs=1e-12)

    def test_zero_observable(self):
        result = verify_theorem1(ObservableInAlgebra(1, np.zeros(3)))
        assert result.lhs == 0.0
        assert result.rhs == 0.0

    def test_random_unit_observables_match_identity(self, rng):
        for n in (1, 2):
            for _ in range(20):
                o = random_observable(n, rng)
                result = verify_theorem1(o)
                assert abs(result.lhs - result.rhs) <= 1e-9 * max(1.0, result.rhs)

    def test_symbolic_matches_dense(self, rng):
        for n in (1, 2):
            for _ in range(5):
                o = random_observable(n, rng)
                dense_lhs, _, _ = _dense_sums(o)
                result = verify_theorem1(o)
                assert result.lhs == pytest.approx(dense_lhs, rel=1e-9)


class TestLemma1:
    def test_unit_norm_at_n1(self):
        result = verify_lemma1(ObservableInAlgebra.single(P("Z")))
        assert result.lhs == pytest.approx(16.0, abs=1e-12)
        assert result.rhs == pytest.approx(16.0, abs=1e-12)

    def test_zero_observable(self):
        result = verify_lemma1(ObservableInAlgebra(1, np.zeros(3)))
        assert result.lhs == result.rhs == 0.0

    def test_random_observables_match_identity_and_dense(self, rng):
        for n in (1, 2):
            for _ in range(5):
                o = random_observable(n, rng)
                result = verify_lemma1(o)
                assert abs(result.lhs - result.rhs) <= 1e-8 * max(1.0, result.rhs)
                _, dense_total, _ = _dense_sums(o)
                assert result.lhs == pytest.approx(dense_total, rel=1e-9)

    def test_n3_symbolic_vs_dense(self, rng):
        o = random_observable(3, rng)
        result = verify_lemma1(o)
        _, dense_total, _ = _dense_sums(o)
        assert result.lhs == pytest.approx(dense_total, rel=1e-8)


class TestLemma2Theorem2:
    def test_single_z_at_n1(self):
        result = verify_lemma2_and_theorem2(ObservableInAlgebra.single(P("Z")))
        assert result.diag_sum + result.offdiag_sum == pytest.approx(16.0)
        assert result.lower_bound == pytest.approx(16.0 / 3.0)
        assert result.upper_bound == pytest.approx(32.0 / 3.0)
        assert result.diag_sum >= result.lower_bound - 1e-10
        assert result.offdiag_sum <= result.upper_bound + 1e-10

    def test_single_basis_element(self, rng):
        for n in (1, 2):
            basis = list(ObservableInAlgebra(n, np.eye(4**n - 1)[0]).terms())
            o = ObservableInAlgebra.single(basis[0][0])
            result = verify_lemma2_and_theorem2(o)
            assert result.diag_sum >= result.lower_bound - 1e-10
            assert result.offdiag_sum <= result.upper_bound + 1e-10

    def test_zero_observable(self):
        result = verify_lemma2_and_theorem2(ObservableInAlgebra(2, np.zeros(15)))
        assert result == (0.0, 0.0, 0.0, 0.0)

    def test_split_matches_dense(self, rng):
        for n in (1, 2):
            o = random_observable(n, rng)
            result = verify_lemma2_and_theorem2(o)
            _, dense_total, dense_diag = _dense_sums(o)
            assert result.diag_sum == pytest.approx(dense_diag, rel=1e-9)
            assert result.offdiag_sum == pytest.approx(
                dense_total - dense_diag, rel=1e-9
            )


class TestScaling:
    def test_quadratic_homogeneity(self, rng):
        o = random_observable(2, rng)
        for lam in (0.5, 2.0, -3.0):
            scaled = ObservableInAlgebra(2, lam * o.coeffs)
            assert verify_theorem1(scaled).lhs == pytest.approx(
                lam * lam * verify_theorem1(o).lhs, rel=1e-12
            )
            assert verify_lemma1(scaled).lhs == pytest.approx(
                lam * lam * verify_lemma1(o).lhs, rel=1e-12
            )


class TestGPurity:
    def test_observable_in_span(self):
        basis = OrthonormalBasis.full(1)
        mats = basis.matrices()
        obs = _dense_observable(
            ObservableInAlgebra(1, np.array([0.6, 0.8, 0.0]))
        )
        assert g_purity(obs, mats) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_observable(self):
        # span of Z only; X is orthogonal to it
        mats = normalized_pauli_matrices([P("Z")])
        assert g_purity(dense_pauli("X"), mats) == pytest.approx(0.0, abs=1e-12)

    def test_unnormalized_two_qubit_example(self):
        obs = dense_pauli("ZI")  # squared Frobenius norm 4
        mats = normalized_pauli_matrices(list(OrthonormalBasis.full(2).elements))
        assert g_purity(obs, mats) == pytest.approx(4.0, abs=1e-10)

    def test_basis_independent_under_remixing(self, rng):
        subset = [P("ZI"), P("XY"), P("YZ"), P("IX")]
        mats = normalized_pauli_matrices(subset)
        obs = sum(w * m for w, m in zip(rng.standard_normal(4), mats))
        obs = obs + 0.3 * normalized_pauli_matrices([P("ZZ")])[0]  # out-of-span part
        before = g_purity(obs, mats)
        q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
        remixed = [sum(q[i, j] * mats[j] for j in range(4)) for i in range(4)]
        after = g_purity(obs, remixed)
        assert abs(before - after) < 1e-10

    def test_non_orthonormal_rejected(self):
        mats = [dense_pauli("Z"), dense_pauli("Z")]
        with pytest.raises(ValueError, match="orthonormal"):
            g_purity(dense_pauli("X"), mats)


class TestObservableInAlgebra:
    def test_shape_validation(self):
        with pytest.raises(ValueError, match="shape"):
            ObservableInAlgebra(2, np.zeros(3))

    def test_identity_term_rejected(self):
        with pytest.raises(ValueError, match="identity"):
            ObservableInAlgebra.from_terms(1, {P("I"): 1.0})

    def test_norm_and_terms(self):
        o = ObservableInAlgebra.from_terms(1, {P("Z"): 0.6, P("X"): 0.8})
        assert o.norm_sq() == pytest.approx(1.0)
        assert dict((p.label, w) for p, w in o.terms()) == {"Z": 0.6, "X": 0.8}

    def test_to_matrix_matches_dense(self, rng):
        o = random_observable(2, rng)
        assert np.allclose(o.to_matrix(), _dense_observable(o), atol=1e-12)
