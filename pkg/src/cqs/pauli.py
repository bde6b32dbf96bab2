"""Pauli-string expansion and product-form analysis of dense operators.

The expansion coefficient of a string P on n qubits is tr(P^dag M) / 2^n.
Strings are ordered lexicographically in I < X < Y < Z per qubit, and
coefficients below 1e-14 in magnitude are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .frobenius import DenseOperator

__all__ = [
    "PAULI_LETTERS",
    "PauliString",
    "PauliTerm",
    "FactoredOperator",
    "NormalizedFactor",
    "pauli_expand",
    "pauli_reconstruct",
    "normalize_factor",
    "factorization_residual",
    "best_product_approximation",
]

PAULI_LETTERS = "IXYZ"

PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

DROP_TOLERANCE = 1e-14


@dataclass(frozen=True)
class PauliString:
    """A tensor product of single-qubit Paulis, e.g. 'IXZY' (qubit 0 first)."""

    letters: str

    def __post_init__(self):
        if not self.letters or any(ch not in PAULI_LETTERS for ch in self.letters):
            raise ValueError(f"bad Pauli string {self.letters!r}")

    def __len__(self) -> int:
        return len(self.letters)

    def matrix(self) -> np.ndarray:
        out = PAULI_1Q[self.letters[0]]
        for ch in self.letters[1:]:
            out = np.kron(out, PAULI_1Q[ch])
        return out


@dataclass(frozen=True)
class PauliTerm:
    coefficient: complex
    string: PauliString


def _as_matrix(op: Union[DenseOperator, np.ndarray]) -> np.ndarray:
    return op.matrix if isinstance(op, DenseOperator) else np.asarray(op, dtype=complex)


def _qubit_count(mat: np.ndarray) -> int:
    rows, cols = mat.shape
    if rows != cols:
        raise ValueError("Pauli expansion needs a square matrix")
    n = rows.bit_length() - 1
    if 2**n != rows or n < 1:
        raise ValueError(f"matrix size {rows} is not a power of two >= 2")
    return n


# Row k of this matrix is conj(P_k) flattened over the (row, col) entry
# index, divided by 2, so contracting it against an operator tensor yields
# tr(P_k^dag M) / 2 one qubit at a time.
_EXPANSION_BASIS = np.stack(
    [PAULI_1Q[ch].conj().reshape(4) for ch in PAULI_LETTERS]
) / 2.0


def _entry_tensor(mat: np.ndarray, n: int) -> np.ndarray:
    """Reshape an operator into a (4,)*n tensor with one combined
    (row-bit, col-bit) axis per qubit, qubit 0 first."""
    t = mat.reshape((2,) * (2 * n))
    order = [axis for pair in zip(range(n), range(n, 2 * n)) for axis in pair]
    return t.transpose(order).reshape((4,) * n)


def pauli_expand(op: Union[DenseOperator, np.ndarray]) -> list[PauliTerm]:
    """Expand a square operator over Pauli strings.

    Deterministic: strings come out in lexicographic I < X < Y < Z order and
    the contraction order is fixed, so equal inputs give bit-equal outputs.
    """
    mat = _as_matrix(op)
    n = _qubit_count(mat)
    coeffs = _entry_tensor(mat, n)
    for _ in range(n):
        # consume the leading entry axis, append the letter axis at the end
        coeffs = np.tensordot(coeffs, _EXPANSION_BASIS, axes=([0], [1]))
    terms = []
    for key in np.ndindex(*coeffs.shape):
        c = complex(coeffs[key])
        if abs(c) > DROP_TOLERANCE:
            terms.append(PauliTerm(c, PauliString("".join(PAULI_LETTERS[k] for k in key))))
    return terms


def pauli_reconstruct(terms: Sequence[PauliTerm], n_qubits: int) -> np.ndarray:
    """Sum coefficient * string back into a dense matrix."""
    out = np.zeros((2**n_qubits, 2**n_qubits), dtype=complex)
    for term in terms:
        if len(term.string) != n_qubits:
            raise ValueError("term width does not match n_qubits")
        out += term.coefficient * term.string.matrix()
    return out


@dataclass(frozen=True)
class NormalizedFactor:
    """A single-qubit operator sum(m_k * exp(i phase_k) * sigma_k) with the
    magnitudes m_k >= 0 normalized by the rule recorded in `rule`:
    'l1' (magnitudes sum to 1, used for factors of at most two terms) or
    'l2' (squared magnitudes sum to 1, used for three- and four-term
    factors)."""

    letters: str
    magnitudes: tuple[float, ...]
    phases: tuple[float, ...]
    rule: str

    def __post_init__(self):
        if len(self.letters) != len(self.magnitudes) or len(self.letters) != len(self.phases):
            raise ValueError("letters, magnitudes and phases must align")
        if self.rule not in ("l1", "l2"):
            raise ValueError(f"unknown rule {self.rule!r}")

    def coefficients(self) -> dict[str, complex]:
        return {
            letter: m * np.exp(1j * phase)
            for letter, m, phase in zip(self.letters, self.magnitudes, self.phases)
        }

    def matrix(self) -> np.ndarray:
        out = np.zeros((2, 2), dtype=complex)
        for letter, c in self.coefficients().items():
            out += c * PAULI_1Q[letter]
        return out


def normalize_factor(factor: Mapping[str, complex]) -> tuple[NormalizedFactor, complex]:
    """Split a single-qubit expansion into (normalized factor, scale).

    Factors with one or two nonzero terms are normalized so the coefficient
    magnitudes sum to 1; factors with three or four terms so the squared
    magnitudes sum to 1.  The returned scale is the removed positive
    constant: scale * normalized == input.
    """
    items = []
    for letter in PAULI_LETTERS:
        c = complex(factor.get(letter, 0.0))
        if abs(c) > DROP_TOLERANCE:
            items.append((letter, c))
    for letter in factor:
        if letter not in PAULI_LETTERS:
            raise ValueError(f"unknown Pauli letter {letter!r}")
    if not items:
        raise ValueError("factor has no nonzero coefficient")
    mags = np.array([abs(c) for _, c in items])
    if len(items) <= 2:
        rule = "l1"
        scale = float(mags.sum())
    else:
        rule = "l2"
        scale = float(np.sqrt((mags**2).sum()))
    normalized = NormalizedFactor(
        letters="".join(letter for letter, _ in items),
        magnitudes=tuple(float(m / scale) for m in mags),
        phases=tuple(float(np.angle(c)) for _, c in items),
        rule=rule,
    )
    return normalized, complex(scale)


@dataclass(frozen=True, eq=False)
class FactoredOperator:
    """A claimed product form: scale * factor_0 (x) factor_1 (x) ...

    Each factor is a mapping from Pauli letters to complex coefficients with
    at least one nonzero entry; factor k acts on qubit k.
    """

    factors: tuple[Mapping[str, complex], ...]
    scale: complex = 1.0

    def __post_init__(self):
        if not self.factors:
            raise ValueError("need at least one factor")
        for f in self.factors:
            if not any(abs(complex(v)) > 0 for v in f.values()):
                raise ValueError("every factor needs a nonzero coefficient")
            for letter in f:
                if letter not in PAULI_LETTERS:
                    raise ValueError(f"unknown Pauli letter {letter!r}")

    @property
    def n_qubits(self) -> int:
        return len(self.factors)

    def factor_matrix(self, k: int) -> np.ndarray:
        out = np.zeros((2, 2), dtype=complex)
        for letter, c in self.factors[k].items():
            out += complex(c) * PAULI_1Q[letter]
        return out

    def matrix(self) -> np.ndarray:
        out = self.factor_matrix(0)
        for k in range(1, self.n_qubits):
            out = np.kron(out, self.factor_matrix(k))
        return self.scale * out


def factorization_residual(claimed: FactoredOperator,
                           exact: Union[DenseOperator, np.ndarray]) -> float:
    """Relative Frobenius distance || expand(claimed) - exact || / || exact ||."""
    target = _as_matrix(exact)
    got = claimed.matrix()
    if got.shape != target.shape:
        raise ValueError(f"shape mismatch {got.shape} vs {target.shape}")
    denom = float(np.linalg.norm(target))
    if denom == 0.0:
        raise ValueError("exact operator is zero")
    return float(np.linalg.norm(got - target) / denom)


_POWER_ITERATIONS = 200
_POWER_RELTOL = 1e-13


def _dominant_rank1(a: np.ndarray) -> tuple[np.ndarray, float, np.ndarray]:
    """Dominant singular triple of a (rows x cols) matrix by power iteration
    with a deterministic all-ones start."""
    u = np.ones(a.shape[0], dtype=complex)
    u /= np.linalg.norm(u)
    sigma = 0.0
    for _ in range(_POWER_ITERATIONS):
        w = a.conj().T @ u
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return u, 0.0, np.zeros(a.shape[1], dtype=complex)
        w /= nw
        u_new = a @ w
        sigma_new = float(np.linalg.norm(u_new))
        if sigma_new == 0.0:
            return u, 0.0, w
        u_new /= sigma_new
        if abs(sigma_new - sigma) < _POWER_RELTOL * max(sigma_new, 1.0):
            u, sigma = u_new, sigma_new
            break
        u, sigma = u_new, sigma_new
    w = a.conj().T @ u
    return u, sigma, w / np.linalg.norm(w)


def _factor_dict(vec4: np.ndarray) -> dict[str, complex]:
    """Single-qubit entry-basis 4-vector -> Pauli coefficient mapping."""
    mat = vec4.reshape(2, 2)
    coeffs = {}
    for letter in PAULI_LETTERS:
        c = complex(np.trace(PAULI_1Q[letter].conj().T @ mat) / 2.0)
        if abs(c) > DROP_TOLERANCE:
            coeffs[letter] = c
    return coeffs or {"I": 0.0}


def best_product_approximation(op: Union[DenseOperator, np.ndarray],
                               split: Optional[Sequence[int]] = None) -> FactoredOperator:
    """Greedy product-form fit of a square operator.

    Qubits are peeled off in `split` order (default natural order): at each
    step the operator tensor is reshaped across the one-qubit / rest
    bipartition and its dominant rank-1 component is taken by power
    iteration; the procedure recurses on the remainder.  The result is a
    FactoredOperator with one single-qubit factor per qubit in qubit order.
    """
    mat = _as_matrix(op)
    n = _qubit_count(mat)
    order = list(range(n)) if split is None else [int(q) for q in split]
    if sorted(order) != list(range(n)):
        raise ValueError("split must list every qubit exactly once")
    tensor = _entry_tensor(mat, n).transpose(order)
    vectors: list[np.ndarray] = []
    rest = tensor
    scale = complex(1.0)
    for step in range(n - 1):
        a = rest.reshape(4, -1)
        u, sigma, w = _dominant_rank1(a)
        if sigma == 0.0:
            # remainder vanished: emit identity stubs with a zero scale
            vectors.append(np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2))
            scale = 0.0
            rest = np.zeros((4,) * (n - 1 - step), dtype=complex)
            continue
        vectors.append(u)
        rest = (sigma * w.conj()).reshape((4,) * (n - 1 - step))
    vectors.append(rest.reshape(4))
    # canonical presentation: unit-norm factors with the largest entry made
    # real positive, everything else folded into the overall scale
    factors_by_peel: list[dict[str, complex]] = []
    for vec in vectors:
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:
            factors_by_peel.append({"I": 1.0})
            scale = 0.0
            continue
        unit = vec / norm
        pivot = unit[int(np.argmax(np.abs(unit)))]
        phase = pivot / abs(pivot)
        factors_by_peel.append(_factor_dict(unit / phase))
        scale *= norm * phase
    factors: list = [None] * n
    for peel_pos, qubit in enumerate(order):
        factors[qubit] = factors_by_peel[peel_pos]
    return FactoredOperator(tuple(factors), scale)
