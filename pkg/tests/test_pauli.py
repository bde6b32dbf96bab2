"""Pauli expansion, factor normalization, and product-form fitting."""

import cmath
import math

import numpy as np
import pytest

from cqs.pauli import (
    PAULI_1Q,
    PAULI_LETTERS,
    FactoredOperator,
    PauliString,
    best_product_approximation,
    factorization_residual,
    normalize_factor,
    pauli_expand,
    pauli_reconstruct,
)


def expand_dict(mat):
    return {t.string.letters: t.coefficient for t in pauli_expand(mat)}


def test_projector_patterns_exact():
    # (I +/- Z) / 2 and (X +/- iY) / 2, with binary-exact coefficients
    assert expand_dict(np.array([[1, 0], [0, 0]])) == {"I": 0.5, "Z": 0.5}
    assert expand_dict(np.array([[0, 0], [0, 1]])) == {"I": 0.5, "Z": -0.5}
    assert expand_dict(np.array([[0, 1], [0, 0]])) == {"X": 0.5, "Y": 0.5j}
    assert expand_dict(np.array([[0, 0], [1, 0]])) == {"X": 0.5, "Y": -0.5j}


def test_single_letters_recover_themselves():
    for letter in PAULI_LETTERS:
        assert expand_dict(PAULI_1Q[letter]) == {letter: 1.0}


def test_two_qubit_ketbra():
    # |10><01| = (X - iY)/2 (x) (X + iY)/2
    mat = np.zeros((4, 4), dtype=complex)
    mat[0b10, 0b01] = 1.0
    got = expand_dict(mat)
    assert got == {"XX": 0.25, "XY": 0.25j, "YX": -0.25j, "YY": 0.25}


def test_expansion_oracle_by_trace():
    # coefficient = tr(P^dag M) / 2^n, checked against direct traces
    rng = np.random.default_rng(7)
    mat = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    got = expand_dict(mat)
    for letters, coefficient in got.items():
        p = PauliString(letters).matrix()
        direct = np.trace(p.conj().T @ mat) / 8
        assert coefficient == pytest.approx(direct, abs=1e-12)


def test_strings_lexicographic():
    rng = np.random.default_rng(3)
    mat = rng.normal(size=(8, 8))
    strings = [t.string.letters for t in pauli_expand(mat)]
    assert strings == sorted(strings)


def test_roundtrip_random():
    rng = np.random.default_rng(42)
    for n in (1, 2, 3, 4):
        for _ in range(5):
            dim = 2**n
            mat = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
            back = pauli_reconstruct(pauli_expand(mat), n)
            assert np.max(np.abs(back - mat)) < 1e-12


def test_small_coefficients_dropped():
    assert pauli_expand(1e-16 * PAULI_1Q["X"]) == []
    back = pauli_reconstruct([], 1)
    assert np.array_equal(back, np.zeros((2, 2)))


def test_expand_rejects_bad_shapes():
    with pytest.raises(ValueError):
        pauli_expand(np.zeros((2, 4)))
    with pytest.raises(ValueError):
        pauli_expand(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        pauli_expand(np.zeros((1, 1)))


def test_pauli_string_validation():
    with pytest.raises(ValueError):
        PauliString("")
    with pytest.raises(ValueError):
        PauliString("IXQ")
    assert len(PauliString("IXZ")) == 3


def test_reconstruct_width_mismatch():
    terms = pauli_expand(PAULI_1Q["X"])
    with pytest.raises(ValueError):
        pauli_reconstruct(terms, 2)


def test_normalize_single_term():
    normalized, scale = normalize_factor({"Y": -2.0})
    assert normalized.rule == "l1"
    assert normalized.letters == "Y"
    assert normalized.magnitudes == (1.0,)
    assert scale == pytest.approx(2.0)
    assert normalized.phases[0] == pytest.approx(math.pi)


def test_normalize_two_term_l1():
    normalized, scale = normalize_factor({"I": 3.0, "Z": -1.0})
    assert normalized.rule == "l1"
    assert scale == pytest.approx(4.0)
    assert normalized.magnitudes == pytest.approx((0.75, 0.25))
    # defining property: scale * normalized == input
    back = scale * normalized.matrix()
    assert np.max(np.abs(back - (3 * PAULI_1Q["I"] - PAULI_1Q["Z"]))) < 1e-12


def test_normalize_four_term_l2():
    factor = {"I": 0.5, "X": 1.0, "Y": 1j, "Z": 0.5}
    normalized, scale = normalize_factor(factor)
    assert normalized.rule == "l2"
    assert scale == pytest.approx(math.sqrt(2.5))
    assert sum(m * m for m in normalized.magnitudes) == pytest.approx(1.0)
    want = sum(c * PAULI_1Q[k] for k, c in factor.items())
    assert np.max(np.abs(scale * normalized.matrix() - want)) < 1e-12


def test_normalize_template_bracket():
    # the first bracket of the multiplication template: {I: 1/2 + w/3, Z: -1/2}
    w = cmath.exp(-16j / 3)
    c_ident = 0.5 + w / 3
    normalized, scale = normalize_factor({"I": c_ident, "Z": -0.5})
    assert normalized.rule == "l1"
    assert scale == pytest.approx(abs(c_ident) + 0.5, abs=1e-15)
    assert scale == pytest.approx(1.2450138305634564, abs=1e-12)
    assert normalized.magnitudes[0] == pytest.approx(abs(c_ident) / scale.real, abs=1e-12)
    assert normalized.magnitudes[1] == pytest.approx(0.5 / scale.real, abs=1e-12)
    assert normalized.phases[0] == pytest.approx(cmath.phase(c_ident), abs=1e-12)
    assert normalized.phases[0] == pytest.approx(0.372450500357, abs=1e-9)


def test_normalize_rejects():
    with pytest.raises(ValueError):
        normalize_factor({"I": 0.0})
    with pytest.raises(ValueError):
        normalize_factor({})
    with pytest.raises(ValueError):
        normalize_factor({"Q": 1.0})


def test_factored_operator_matrix_oracle():
    factors = ({"I": 1.0, "Z": 0.5}, {"X": 2.0}, {"Y": -1j})
    claimed = FactoredOperator(factors, scale=0.5 + 0.5j)
    want = (
        (0.5 + 0.5j)
        * np.kron(
            np.kron(PAULI_1Q["I"] + 0.5 * PAULI_1Q["Z"], 2 * PAULI_1Q["X"]),
            -1j * PAULI_1Q["Y"],
        )
    )
    assert np.max(np.abs(claimed.matrix() - want)) < 1e-12
    assert claimed.n_qubits == 3


def test_factored_operator_validation():
    with pytest.raises(ValueError):
        FactoredOperator(())
    with pytest.raises(ValueError):
        FactoredOperator(({"I": 0.0},))
    with pytest.raises(ValueError):
        FactoredOperator(({"Q": 1.0},))


def test_residual_zero_for_true_product():
    claimed = FactoredOperator(({"I": 1.0, "X": 0.5}, {"Z": 2.0}), scale=1.5)
    assert factorization_residual(claimed, claimed.matrix()) < 1e-15


def test_residual_errors():
    claimed = FactoredOperator(({"I": 1.0},))
    with pytest.raises(ValueError):
        factorization_residual(claimed, np.zeros((4, 4)))
    with pytest.raises(ValueError):
        factorization_residual(claimed, np.zeros((2, 2)))


def test_best_product_recovers_products():
    rng = np.random.default_rng(5)
    for n in (2, 3):
        for _ in range(5):
            parts = [
                rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(n)
            ]
            full = parts[0]
            for p in parts[1:]:
                full = np.kron(full, p)
            fitted = best_product_approximation(full)
            assert factorization_residual(fitted, full) < 1e-10
            # canonical factors are unit Frobenius norm
            for k in range(n):
                assert np.linalg.norm(fitted.factor_matrix(k)) == pytest.approx(1.0)


def test_best_product_swap_residual():
    # SWAP = (II + XX + YY + ZZ)/2 has a known best product distance
    swap = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            swap[i * 2 + j, j * 2 + i] = 1.0
    fitted = best_product_approximation(swap)
    residual = factorization_residual(fitted, swap)
    assert residual == pytest.approx(math.sqrt(3) / 2, abs=1e-12)


def test_best_product_split_orders_agree_on_products():
    rng = np.random.default_rng(9)
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    full = np.kron(a, b)
    for split in ([0, 1], [1, 0]):
        fitted = best_product_approximation(full, split=split)
        assert factorization_residual(fitted, full) < 1e-10


def test_best_product_split_validation():
    with pytest.raises(ValueError):
        best_product_approximation(np.eye(4), split=[0, 0])
    with pytest.raises(ValueError):
        best_product_approximation(np.eye(4), split=[0])
