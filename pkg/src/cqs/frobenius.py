"""Dense realizations of the commutative Frobenius algebra of a truncated
2D Yang-Mills theory.

The algebra is diagonal in the irrep basis.  With Boltzmann weight
w(R) = exp(-beta * C2(R)) (or the literal imaginary variant, see
PhaseConvention) and d(R) the irrep dimension, the generators act as

    multiplication   mu:    |R> (x) |R>  ->  (w / d) |R>
    comultiplication delta: |R>          ->  (w / d) |R> (x) |R>
    unit             eta:   (nothing)    ->  d * w |R>, summed over R
    counit           eps:   |R>          ->  d * w
    cylinder:        |R>          ->  w |R>

Two layers of matrices are exposed.  Padded forms act on full qubit
registers (one fixed-width register per circle, vacuum pattern marking the
absent output/input circle) and are what the circuit compiler consumes.
Logical forms keep one register per actual circle and are rectangular
across different circle counts; they are the right objects for composing
words of generators and for the algebra identities, where "identity" means
the projector onto the encoded irrep sector.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .encoding import EncodingMap
from .reptheory import RepTable

__all__ = [
    "PhaseConvention",
    "FrobeniusSpec",
    "DenseOperator",
    "boltzmann_weight",
    "build_mu",
    "build_delta",
    "build_eta",
    "build_epsilon",
    "build_cylinder",
    "logical_form",
    "compose_word",
    "GENERATOR_ARITY",
]


class PhaseConvention(Enum):
    """How the area weight exp(-beta * C2) is interpreted.

    PAPER_LITERAL keeps the exponent imaginary, exp(-i * beta * C2), which is
    the form the reference circuit constructions use; EUCLIDEAN uses the real
    heat-kernel weight exp(-beta * C2).
    """

    PAPER_LITERAL = "paper_literal"
    EUCLIDEAN = "euclidean"


def boltzmann_weight(casimir, beta: float, convention: PhaseConvention) -> complex:
    c2 = float(casimir)
    if convention is PhaseConvention.EUCLIDEAN:
        return complex(math.exp(-beta * c2))
    return cmath.exp(-1j * beta * c2)


@dataclass(frozen=True)
class FrobeniusSpec:
    """Everything needed to build the generators: irrep table, encoding,
    default area beta and phase convention."""

    table: RepTable
    encoding: EncodingMap
    beta: float = 1.0
    convention: PhaseConvention = PhaseConvention.PAPER_LITERAL

    def __post_init__(self):
        if not self.encoding.covers(self.table):
            raise ValueError("encoding does not cover every table entry")
        if not math.isfinite(self.beta) or self.beta < 0:
            raise ValueError("beta must be finite and >= 0")

    @staticmethod
    def su3(count: int = 3, beta: float = 1.0,
            convention: PhaseConvention = PhaseConvention.PAPER_LITERAL) -> "FrobeniusSpec":
        from .encoding import default_encoding
        from .reptheory import su3_truncation

        table = su3_truncation(count)
        return FrobeniusSpec(table, default_encoding(table), beta, convention)


@dataclass(frozen=True, eq=False)
class DenseOperator:
    """A dense complex matrix, optionally tagged with register widths.

    For padded forms rows == 2**out_qubits and cols == 2**in_qubits; logical
    forms may be rectangular across circle counts (the widths are still
    recorded when the dimensions are powers of two).
    """

    matrix: np.ndarray
    in_qubits: Optional[int] = None
    out_qubits: Optional[int] = None

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        if mat.ndim != 2:
            raise ValueError("operator matrix must be 2-D")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        if self.out_qubits is not None and mat.shape[0] != 2**self.out_qubits:
            raise ValueError("rows inconsistent with out_qubits")
        if self.in_qubits is not None and mat.shape[1] != 2**self.in_qubits:
            raise ValueError("cols inconsistent with in_qubits")

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    def dagger(self) -> "DenseOperator":
        return DenseOperator(self.matrix.conj().T, self.out_qubits, self.in_qubits)

    def to_dict(self) -> dict:
        entries = [
            [int(r), int(c), float(self.matrix[r, c].real), float(self.matrix[r, c].imag)]
            for r, c in zip(*np.nonzero(self.matrix))
        ]
        return {
            "rows": self.rows,
            "cols": self.cols,
            "in_qubits": self.in_qubits,
            "out_qubits": self.out_qubits,
            "entries": entries,
        }

    @staticmethod
    def from_dict(doc: dict) -> "DenseOperator":
        mat = np.zeros((int(doc["rows"]), int(doc["cols"])), dtype=complex)
        for r, c, re, im in doc["entries"]:
            mat[int(r), int(c)] = complex(re, im)
        return DenseOperator(mat, doc.get("in_qubits"), doc.get("out_qubits"))


# generator tag -> (circles consumed, circles produced)
GENERATOR_ARITY = {
    "mu": (2, 1),
    "delta": (1, 2),
    "eta": (0, 1),
    "eps": (1, 0),
    "cylinder": (1, 1),
}

# Generators that carry area pick up FrobeniusSpec.beta by default; the
# comultiplication and counit default to zero area.
_AREA_DEFAULT = {"mu": None, "delta": 0.0, "eta": None, "eps": 0.0, "cylinder": None}


def _resolve_beta(tag: str, spec: FrobeniusSpec, beta: Optional[float]) -> float:
    if beta is not None:
        return float(beta)
    default = _AREA_DEFAULT[tag]
    return spec.beta if default is None else default


def _sector(spec: FrobeniusSpec):
    """Per-irrep (index, weight-parts) helpers shared by all builders."""
    enc = spec.encoding
    for entry in spec.table:
        yield int(enc.bits(entry.label), 2), entry


def logical_form(tag: str, spec: FrobeniusSpec, beta: Optional[float] = None) -> DenseOperator:
    """Rectangular matrix of one generator, one register per actual circle."""
    if tag not in GENERATOR_ARITY:
        raise ValueError(f"unknown generator {tag!r}")
    b = spec.encoding.bits_per_circle
    d = 2**b
    beta = _resolve_beta(tag, spec, beta)
    a_in, a_out = GENERATOR_ARITY[tag]
    mat = np.zeros((d**a_out, d**a_in), dtype=complex)
    for idx, entry in _sector(spec):
        w = boltzmann_weight(entry.casimir, beta, spec.convention)
        if tag == "mu":
            mat[idx, idx * d + idx] = w / entry.dim
        elif tag == "delta":
            mat[idx * d + idx, idx] = w / entry.dim
        elif tag == "eta":
            mat[idx, 0] = entry.dim * w
        elif tag == "eps":
            mat[0, idx] = entry.dim * w
        else:  # cylinder
            mat[idx, idx] = w
    return DenseOperator(mat, in_qubits=b * a_in, out_qubits=b * a_out)


def _padded(tag: str, spec: FrobeniusSpec, beta: Optional[float]) -> DenseOperator:
    """Square register form: the missing circle of a 2-to-1 or 0-to-1
    generator is padded with the vacuum pattern."""
    b = spec.encoding.bits_per_circle
    d = 2**b
    beta = _resolve_beta(tag, spec, beta)
    circles = max(GENERATOR_ARITY[tag])
    size = d**circles
    mat = np.zeros((size, size), dtype=complex)
    for idx, entry in _sector(spec):
        w = boltzmann_weight(entry.casimir, beta, spec.convention)
        if tag == "mu":
            mat[idx * d, idx * d + idx] = w / entry.dim  # |R, vac><R, R|
        elif tag == "delta":
            mat[idx * d + idx, idx * d] = w / entry.dim  # |R, R><R, vac|
        elif tag == "eta":
            mat[idx, 0] = entry.dim * w  # |R><vac|
        elif tag == "eps":
            mat[0, idx] = entry.dim * w  # |vac><R|
        else:  # cylinder
            mat[idx, idx] = w
    return DenseOperator(mat, in_qubits=b * circles, out_qubits=b * circles)


def build_mu(spec: FrobeniusSpec, beta: Optional[float] = None) -> DenseOperator:
    """Padded multiplication on two circle registers (output circle padded
    by vacuum)."""
    return _padded("mu", spec, beta)


def build_delta(spec: FrobeniusSpec, beta: Optional[float] = None) -> DenseOperator:
    """Padded comultiplication; carries no area unless beta is given."""
    return _padded("delta", spec, beta)


def build_eta(spec: FrobeniusSpec, beta: Optional[float] = None) -> DenseOperator:
    """Padded unit on a single circle register: maps the vacuum pattern to
    the weighted sum of irreps."""
    return _padded("eta", spec, beta)


def build_epsilon(spec: FrobeniusSpec, beta: Optional[float] = None) -> DenseOperator:
    """Padded counit; carries no area unless beta is given."""
    return _padded("eps", spec, beta)


def build_cylinder(spec: FrobeniusSpec, beta: Optional[float] = None) -> DenseOperator:
    """Area propagator: diagonal exp-weight on the encoded irrep patterns,
    zero on vacuum and unused patterns.  At beta = 0 this is the projector
    onto the irrep sector."""
    return _padded("cylinder", spec, beta)


WordStep = tuple  # (tag, beta or None, circle position)


def _infer_in_circles(word: Sequence[WordStep]) -> int:
    if not word:
        return 1
    need = 0
    delta = 0
    for tag, _beta, pos in word:
        a_in, a_out = GENERATOR_ARITY[tag]
        need = max(need, int(pos) + a_in - delta)
        delta += a_out - a_in
    return max(need, 0)


def compose_word(word: Sequence[WordStep], spec: FrobeniusSpec,
                 in_circles: Optional[int] = None) -> DenseOperator:
    """Evaluate a word of generators on logical forms.

    Each step is (tag, beta, position): the generator acts on the circles
    starting at `position` (the unit inserts a new circle there), tensored
    with identity on all other circles.  Steps apply first to last.  The
    empty word is the identity; if `in_circles` is omitted the minimal
    consistent starting circle count is inferred.
    """
    for step in word:
        if len(step) != 3:
            raise ValueError("word steps must be (tag, beta, position) triples")
        if step[0] not in GENERATOR_ARITY:
            raise ValueError(f"unknown generator {step[0]!r}")
    b = spec.encoding.bits_per_circle
    d = 2**b
    circles = _infer_in_circles(word) if in_circles is None else int(in_circles)
    if circles < 0:
        raise ValueError("in_circles must be >= 0")
    start = circles
    acc = np.eye(d**circles, dtype=complex)
    for tag, beta, pos in word:
        a_in, a_out = GENERATOR_ARITY[tag]
        pos = int(pos)
        if pos < 0 or pos + a_in > circles:
            raise ValueError(
                f"generator {tag!r} at position {pos} does not fit {circles} circles"
            )
        gen = logical_form(tag, spec, beta).matrix
        full = np.kron(
            np.kron(np.eye(d**pos, dtype=complex), gen),
            np.eye(d ** (circles - pos - a_in), dtype=complex),
        )
        acc = full @ acc
        circles += a_out - a_in
    return DenseOperator(acc, in_qubits=b * start, out_qubits=b * circles)
