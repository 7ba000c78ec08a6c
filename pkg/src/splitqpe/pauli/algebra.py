import logging
import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Tuple, Union

from ..const import COEFF_CUTOFF, HERMITIAN_TOL
from ..errors import NonHermitianError, SplitQPEError

logger = logging.getLogger(__name__)

Number = Union[int, float, complex]

# single-qubit products: (a, b) -> (phase, letter); None means identity
_PRODUCT_TABLE = {
    ("X", "X"): (1, None),
    ("Y", "Y"): (1, None),
    ("Z", "Z"): (1, None),
    ("X", "Y"): (1j, "Z"),
    ("Y", "X"): (-1j, "Z"),
    ("Y", "Z"): (1j, "X"),
    ("Z", "Y"): (-1j, "X"),
    ("Z", "X"): (1j, "Y"),
    ("X", "Z"): (-1j, "Y"),
}
_TOKEN = re.compile(r"^([XYZI])(\d*)$")


@dataclass(frozen=True)
class PauliString:
    """
    A Pauli product with a complex coefficient
    - ops: sorted tuple of (qubit, letter), letter in {X, Y, Z}
    - coeff: complex scalar
    An empty ops tuple is a multiple of the identity.
    """
    ops: Tuple[Tuple[int, str], ...] = ()
    coeff: complex = 1.0

    def __post_init__(self):
        seen = set()
        for qubit, letter in self.ops:
            if qubit < 0:
                raise SplitQPEError(f"negative qubit index {qubit}")
            if letter not in ("X", "Y", "Z"):
                raise SplitQPEError(f"unknown Pauli letter {letter!r}")
            if qubit in seen:
                raise SplitQPEError(f"qubit {qubit} appears twice in one Pauli string")
            seen.add(qubit)
        object.__setattr__(self, "ops", tuple(sorted(self.ops)))
        object.__setattr__(self, "coeff", complex(self.coeff))

    @classmethod
    def from_letters(cls, letters: Mapping[int, str], coeff: Number = 1.0) -> "PauliString":
        return cls(tuple(letters.items()), coeff)

    @classmethod
    def parse(cls, label: str, coeff: Number = 1.0) -> "PauliString":
        """
        Parse tokens like "X0 Y1 Z3"; "I" or "" is the identity
        """
        ops = []
        for token in label.split():
            match = _TOKEN.match(token)
            if not match:
                raise SplitQPEError(f"bad Pauli token {token!r}")
            letter, index = match.groups()
            if letter == "I":
                continue
            if not index:
                raise SplitQPEError(f"Pauli token {token!r} has no qubit index")
            ops.append((int(index), letter))
        return cls(tuple(ops), coeff)

    @property
    def letters(self) -> Dict[int, str]:
        return dict(self.ops)

    @property
    def key(self) -> Tuple[Tuple[int, str], ...]:
        return self.ops

    @property
    def qubits(self) -> List[int]:
        return [q for q, _ in self.ops]

    @property
    def weight(self) -> int:
        return len(self.ops)

    def is_identity(self) -> bool:
        return not self.ops

    def is_diagonal(self) -> bool:
        return all(letter == "Z" for _, letter in self.ops)

    def max_qubit(self) -> int:
        return max((q for q, _ in self.ops), default=-1)

    def with_coeff(self, coeff: Number) -> "PauliString":
        return PauliString(self.ops, coeff)

    def commutes_with(self, other: "PauliString") -> bool:
        mine = self.letters
        clashes = sum(1 for q, letter in other.ops if q in mine and mine[q] != letter)
        return clashes % 2 == 0

    def label(self) -> str:
        if not self.ops:
            return "I"
        return " ".join(f"{letter}{q}" for q, letter in self.ops)

    def __mul__(self, other):
        if isinstance(other, PauliString):
            return multiply(self, other)
        return PauliString(self.ops, self.coeff * other)

    def __rmul__(self, other):
        return PauliString(self.ops, self.coeff * other)

    def __repr__(self):
        return f"PauliString({self.coeff!r} * {self.label()})"


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """
    Group product a·b; the accumulated phase in {±1, ±i} is folded into the coefficient
    """
    phase = 1 + 0j
    letters = a.letters
    for qubit, letter in b.ops:
        if qubit not in letters:
            letters[qubit] = letter
            continue
        factor, result = _PRODUCT_TABLE[(letters[qubit], letter)]
        phase *= factor
        if result is None:
            del letters[qubit]
        else:
            letters[qubit] = result
    return PauliString(tuple(letters.items()), a.coeff * b.coeff * phase)


class PauliSum:
    """
    Normalised weighted sum of Pauli strings: duplicates merged, tiny terms dropped.
    Term order is first-appearance order, which keeps circuits built from a sum deterministic.
    """

    def __init__(self, terms: Iterable[PauliString] = (), cutoff: float = COEFF_CUTOFF):
        merged: Dict[Tuple, complex] = {}
        for term in terms:
            merged[term.key] = merged.get(term.key, 0j) + term.coeff
        self._terms: Tuple[PauliString, ...] = tuple(
            PauliString(key, coeff) for key, coeff in merged.items() if abs(coeff) >= cutoff
        )

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[Number, str]]) -> "PauliSum":
        return cls(PauliString.parse(label, coeff) for coeff, label in pairs)

    @property
    def terms(self) -> Tuple[PauliString, ...]:
        return self._terms

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def num_qubits(self) -> int:
        return max((t.max_qubit() for t in self._terms), default=-1) + 1

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return all(abs(t.coeff.imag) <= tol for t in self._terms)

    def require_hermitian(self, where: str, tol: float = HERMITIAN_TOL):
        if not self.is_hermitian(tol):
            worst = max(abs(t.coeff.imag) for t in self._terms)
            raise NonHermitianError(f"[{where}] non-Hermitian input, max |Im coeff| = {worst:.3e}")

    def scale(self, factor: Number) -> "PauliSum":
        return PauliSum(t.with_coeff(t.coeff * factor) for t in self._terms)

    def coefficient(self, label: str) -> complex:
        key = PauliString.parse(label).key
        for term in self._terms:
            if term.key == key:
                return term.coeff
        return 0j

    def __add__(self, other: "PauliSum") -> "PauliSum":
        return PauliSum(self._terms + other.terms)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + other.scale(-1)

    def __mul__(self, other):
        if isinstance(other, PauliSum):
            return PauliSum(multiply(a, b) for a in self._terms for b in other.terms)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __neg__(self):
        return self.scale(-1)

    def __eq__(self, other):
        if not isinstance(other, PauliSum):
            return NotImplemented
        return dict((t.key, t.coeff) for t in self._terms) == dict((t.key, t.coeff) for t in other.terms)

    def __repr__(self):
        return f"PauliSum({len(self._terms)} terms)"

    def to_text(self) -> str:
        lines = []
        for term in self._terms:
            lines.append(f"{_format_coeff(term.coeff)}  {term.label()}")
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_text(cls, text: str) -> "PauliSum":
        terms = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head, _, rest = line.partition(" ")
            try:
                coeff = complex(head.replace("i", "j"))
            except ValueError:
                raise SplitQPEError(f"[PauliSum::from_text] line {lineno}: bad coefficient {head!r}")
            terms.append(PauliString.parse(rest, coeff))
        return cls(terms)

    def save(self, save_path: str):
        with open(save_path, "w") as f:
            f.write(self.to_text())

    @classmethod
    def load(cls, load_path: str) -> "PauliSum":
        with open(load_path, "r") as f:
            return cls.from_text(f.read())


def _format_coeff(coeff: complex) -> str:
    if coeff.imag == 0:
        return repr(coeff.real)
    return f"{coeff.real!r}{coeff.imag:+}j"


def commutator(a: PauliSum, b: PauliSum) -> PauliSum:
    """
    [a, b] = ab - ba, normalised. Commuting string pairs cancel exactly and are skipped.
    """
    terms = []
    for p in a.terms:
        for q in b.terms:
            if p.commutes_with(q):
                continue
            # anticommuting strings: pq - qp = 2pq
            terms.append(multiply(p, q) * 2)
    return PauliSum(terms)


def nested_commutator(outer: PauliSum, inner_left: PauliSum, inner_right: PauliSum) -> PauliSum:
    return commutator(outer, commutator(inner_left, inner_right))


def vacuum_energy(h: PauliSum) -> float:
    """
    <0...0|h|0...0>: sum of the coefficients of Z-only and identity terms
    """
    total = sum((t.coeff for t in h.terms if t.is_diagonal()), 0j)
    return float(total.real)


def diagonal_part(h: PauliSum) -> PauliSum:
    return PauliSum(t for t in h.terms if t.is_diagonal())
