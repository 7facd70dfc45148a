"""
Exact algebra of N-site Pauli words with global-phase tracking.

A word is stored as two bitmasks (x-bits and z-bits, bit s for site s) plus a
phase exponent k, standing for i^k times the tensor product of the letters.
Y is the Hermitian sigma_y, i.e. the site with both bits set.
"""
from enum import Enum, IntEnum
from typing import Dict, Iterable, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import DimensionMismatchError, NonHermitianElementError, PauliParseError


class PauliLetter(str, Enum):
    I = "I"
    X = "X"
    Y = "Y"
    Z = "Z"

    @property
    def code(self) -> int:
        """Two-bit code, x-bit + 2 * z-bit."""
        return _LETTER_CODES[self]

    @property
    def is_identity(self) -> bool:
        return self is PauliLetter.I


_LETTER_CODES = {PauliLetter.I: 0, PauliLetter.X: 1, PauliLetter.Z: 2, PauliLetter.Y: 3}
_CODE_LETTERS = {code: letter for letter, code in _LETTER_CODES.items()}

# Order of the non-identity letters inside a parity vector (x_k, y_k, z_k).
NONTRIVIAL_LETTERS: Tuple[PauliLetter, ...] = (PauliLetter.X, PauliLetter.Y, PauliLetter.Z)
_PARITY_OFFSET = {PauliLetter.X: 0, PauliLetter.Y: 1, PauliLetter.Z: 2}


class Sign(IntEnum):
    PLUS = 1
    MINUS = -1

    @property
    def symbol(self) -> str:
        return "+" if self is Sign.PLUS else "-"


SIGMA: Dict[PauliLetter, np.ndarray] = {
    PauliLetter.I: np.eye(2, dtype=complex),
    PauliLetter.X: np.array([[0, 1], [1, 0]], dtype=complex),
    PauliLetter.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    PauliLetter.Z: np.array([[1, 0], [0, -1]], dtype=complex),
}


def _build_phase_table() -> Dict[Tuple[int, int], int]:
    """sigma_a @ sigma_b = i^k sigma_c; returns k keyed by the two letter codes."""
    table = {}
    for a, ma in SIGMA.items():
        for b, mb in SIGMA.items():
            product = ma @ mb
            for k in range(4):
                if any(np.allclose(product, (1j ** k) * mc) for mc in SIGMA.values()):
                    table[(a.code, b.code)] = k
                    break
    return table


_PHASE_TABLE = _build_phase_table()
_PHASED_PAIRS = [(a, b, k) for (a, b), k in _PHASE_TABLE.items() if k and a and b]


class PauliString(BaseModel):
    """
    Pauli word on a fixed number of sites with a global phase i^phase_exp.
    """
    model_config = ConfigDict(frozen=True)

    n_sites: int = Field(..., ge=1, description="Number of sites N")
    x_bits: int = Field(0, ge=0, description="Bit s set when site s carries X or Y")
    z_bits: int = Field(0, ge=0, description="Bit s set when site s carries Z or Y")
    phase_exp: int = Field(0, description="Global phase exponent of i, mod 4")

    @model_validator(mode="after")
    def _check_bits(self) -> "PauliString":
        limit = 1 << self.n_sites
        if self.x_bits >= limit or self.z_bits >= limit:
            raise ValueError(f"letter bits exceed {self.n_sites} sites")
        if not 0 <= self.phase_exp < 4:
            object.__setattr__(self, "phase_exp", self.phase_exp % 4)
        return self

    @classmethod
    def _raw(cls, n_sites: int, x_bits: int, z_bits: int, phase_exp: int) -> "PauliString":
        # Internal fast path; callers guarantee the bit ranges.
        return cls.model_construct(n_sites=n_sites, x_bits=x_bits, z_bits=z_bits, phase_exp=phase_exp % 4)

    @classmethod
    def identity(cls, n_sites: int) -> "PauliString":
        return cls(n_sites=n_sites)

    @classmethod
    def from_letters(cls, letters: Iterable, phase_exp: int = 0) -> "PauliString":
        """Build from a sequence of letters (PauliLetter or 'I'/'X'/'Y'/'Z')."""
        x_bits = z_bits = 0
        letters = list(letters)
        if not letters:
            raise PauliParseError("a Pauli word needs at least one site")
        for site, raw in enumerate(letters):
            try:
                code = PauliLetter(str(raw.value if isinstance(raw, PauliLetter) else raw).upper()).code
            except ValueError as e:
                raise PauliParseError(f"unknown Pauli letter {raw!r} at site {site}") from e
            x_bits |= (code & 1) << site
            z_bits |= (code >> 1) << site
        return cls(n_sites=len(letters), x_bits=x_bits, z_bits=z_bits, phase_exp=phase_exp)

    @classmethod
    def single(cls, n_sites: int, site: int, letter: PauliLetter) -> "PauliString":
        if not 0 <= site < n_sites:
            raise DimensionMismatchError(f"site {site} outside 0..{n_sites - 1}")
        letters = [PauliLetter.I] * n_sites
        letters[site] = PauliLetter(letter)
        return cls.from_letters(letters)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """
        Parse the canonical rendering: optional sign ('+', '-', '−'), optional 'i',
        then one letter per site. Example: '-ZYXY'.
        """
        text = label.strip().replace("−", "-")
        phase = 0
        if text[:1] in ("+", "-"):
            phase = 0 if text[0] == "+" else 2
            text = text[1:]
        if text[:1] == "i":
            phase += 1
            text = text[1:]
        if not text:
            raise PauliParseError(f"empty Pauli label {label!r}")
        return cls.from_letters(text, phase_exp=phase)

    def letter(self, site: int) -> PauliLetter:
        code = ((self.x_bits >> site) & 1) | (((self.z_bits >> site) & 1) << 1)
        return _CODE_LETTERS[code]

    @property
    def letters(self) -> Tuple[PauliLetter, ...]:
        return tuple(self.letter(s) for s in range(self.n_sites))

    @property
    def support(self) -> Tuple[int, ...]:
        """Sites carrying a non-identity letter."""
        bits = self.x_bits | self.z_bits
        return tuple(s for s in range(self.n_sites) if (bits >> s) & 1)

    @property
    def support_bits(self) -> int:
        return self.x_bits | self.z_bits

    @property
    def weight(self) -> int:
        return (self.x_bits | self.z_bits).bit_count()

    @property
    def is_identity(self) -> bool:
        return not (self.x_bits | self.z_bits)

    @property
    def is_hermitian(self) -> bool:
        return self.phase_exp % 2 == 0

    def letter_mask(self, letter: PauliLetter) -> int:
        """Bitmask of the sites carrying exactly `letter`."""
        if letter is PauliLetter.X:
            return self.x_bits & ~self.z_bits
        if letter is PauliLetter.Y:
            return self.x_bits & self.z_bits
        if letter is PauliLetter.Z:
            return self.z_bits & ~self.x_bits
        return ~(self.x_bits | self.z_bits) & ((1 << self.n_sites) - 1)

    def unsigned(self) -> "PauliString":
        return PauliString._raw(self.n_sites, self.x_bits, self.z_bits, 0)

    def shifted(self, offset: int, n_sites: int = None) -> "PauliString":
        """Translate every letter by `offset` sites; the support must stay in range."""
        n_sites = self.n_sites if n_sites is None else n_sites
        support = self.support
        if support and (support[0] + offset < 0 or support[-1] + offset >= n_sites):
            raise DimensionMismatchError(f"shift by {offset} moves support {support} outside {n_sites} sites")
        shift = (lambda bits: bits << offset) if offset >= 0 else (lambda bits: bits >> -offset)
        return PauliString._raw(n_sites, shift(self.x_bits), shift(self.z_bits), self.phase_exp)

    @property
    def label(self) -> str:
        prefix = {0: "+", 1: "+i", 2: "-", 3: "-i"}[self.phase_exp]
        return prefix + "".join(letter.value for letter in self.letters)

    def __str__(self) -> str:
        return self.label

    def __repr__(self) -> str:
        return f"PauliString({self.label!r})"

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def __neg__(self) -> "PauliString":
        return PauliString._raw(self.n_sites, self.x_bits, self.z_bits, self.phase_exp + 2)


def _check_lengths(a: PauliString, b: PauliString) -> None:
    if a.n_sites != b.n_sites:
        raise DimensionMismatchError(f"Pauli words on {a.n_sites} and {b.n_sites} sites")


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Site-wise product a·b with the phase accumulated exactly."""
    _check_lengths(a, b)
    phase = a.phase_exp + b.phase_exp
    for code_a, code_b, k in _PHASED_PAIRS:
        overlap = a.letter_mask(_CODE_LETTERS[code_a]) & b.letter_mask(_CODE_LETTERS[code_b])
        if overlap:
            phase += k * overlap.bit_count()
    return PauliString._raw(a.n_sites, a.x_bits ^ b.x_bits, a.z_bits ^ b.z_bits, phase)


def multiply_all(words: Iterable[PauliString]) -> PauliString:
    """Ordered product of a non-empty sequence of words."""
    words = iter(words)
    result = next(words)
    for word in words:
        result = multiply(result, word)
    return result


def commutes(a: PauliString, b: PauliString) -> bool:
    """True iff the number of sites where the letters anticommute is even."""
    _check_lengths(a, b)
    return ((a.x_bits & b.z_bits).bit_count() + (a.z_bits & b.x_bits).bit_count()) % 2 == 0


def sign_of(a: PauliString) -> Sign:
    if a.phase_exp % 2:
        raise NonHermitianElementError(f"{a.label} has an imaginary phase; it carries no sign")
    return Sign.PLUS if a.phase_exp == 0 else Sign.MINUS


def parity_bits(a: PauliString) -> int:
    """Packed letter-parity vector: bit 3*site + {X: 0, Y: 1, Z: 2}."""
    packed = 0
    for letter in NONTRIVIAL_LETTERS:
        mask = a.letter_mask(letter)
        offset = _PARITY_OFFSET[letter]
        while mask:
            low = mask & -mask
            packed |= 1 << (3 * (low.bit_length() - 1) + offset)
            mask ^= low
    return packed


def letter_parity_vector(a: PauliString) -> np.ndarray:
    """
    GF(2) vector of length 3N; entry (s, L) is 1 iff site s carries letter L.
    X, Y and Z are three independent classical variables per site.
    """
    packed = parity_bits(a)
    return np.array([(packed >> j) & 1 for j in range(3 * a.n_sites)], dtype=np.uint8)


def parity_index(site: int, letter: PauliLetter) -> int:
    """Position of the variable (site, letter) inside a parity vector."""
    return 3 * site + _PARITY_OFFSET[PauliLetter(letter)]


def variable_of_index(index: int) -> Tuple[int, PauliLetter]:
    return index // 3, NONTRIVIAL_LETTERS[index % 3]


def word_matrix(word: PauliString) -> np.ndarray:
    """Dense 2^N x 2^N matrix of the word, site 0 as the most significant qubit."""
    matrix = np.array([[1j ** word.phase_exp]], dtype=complex)
    for letter in word.letters:
        matrix = np.kron(matrix, SIGMA[letter])
    return matrix
