"""
Dense pure and mixed state simulation for desk-scale qubit counts.

Basis index convention: site 0 is the most significant bit of the index.
"""
import logging
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .errors import DimensionMismatchError, InvalidArgumentError, StateConstructionError, StateTooLargeError
from .lattice import Graph, StabilizerElement, generators
from .pauli import SIGMA, PauliLetter, PauliString

logger = logging.getLogger(__name__)

MAX_VECTOR_SITES = 16
MAX_DENSITY_SITES = 12
MAX_TENSOR_SITES = 10
NORM_TOLERANCE = 1e-12
EIGENVALUE_TOLERANCE = 1e-10


class StateVector:
    """
    Normalized pure state of N qubits; the amplitude array is read-only.
    """
    __slots__ = ("data", "num_sites")

    def __init__(self, amplitudes, normalize: bool = False):
        data = np.array(amplitudes, dtype=complex).reshape(-1)
        num_sites = int(round(np.log2(data.size))) if data.size else 0
        if data.size < 2 or (1 << num_sites) != data.size:
            raise DimensionMismatchError(f"{data.size} amplitudes is not a power of two >= 2")
        if num_sites > MAX_VECTOR_SITES:
            raise StateTooLargeError(f"{num_sites} sites exceeds the dense limit {MAX_VECTOR_SITES}")
        norm = np.linalg.norm(data)
        if normalize and norm == 0:
            raise StateConstructionError("cannot normalize the zero vector")
        if not normalize and abs(norm - 1) > NORM_TOLERANCE:
            raise StateConstructionError(f"state norm {norm!r} differs from 1")
        # inside the tolerance too: |psi><psi| then has trace 1 to rounding
        data = data / norm
        data.flags.writeable = False
        self.data = data
        self.num_sites = num_sites

    def density_matrix(self) -> "DensityMatrix":
        if self.num_sites > MAX_DENSITY_SITES:
            raise StateTooLargeError(f"{self.num_sites} sites exceeds the density-matrix limit {MAX_DENSITY_SITES}")
        return DensityMatrix(np.outer(self.data, self.data.conj()))

    def amplitude(self, bits: str) -> complex:
        return complex(self.data[int(bits, 2)])

    def __repr__(self) -> str:
        return f"StateVector(num_sites={self.num_sites})"


class DensityMatrix:
    """
    Mixed state of K qubits: Hermitian, unit trace, positive semidefinite.
    """
    __slots__ = ("data", "num_sites")

    def __init__(self, matrix, validate: bool = True):
        data = np.array(matrix, dtype=complex)
        dim = data.shape[0]
        num_sites = int(round(np.log2(dim))) if dim else 0
        if data.ndim != 2 or data.shape[1] != dim or dim < 2 or (1 << num_sites) != dim:
            raise DimensionMismatchError(f"density matrix shape {data.shape} is not 2^K x 2^K")
        if num_sites > MAX_DENSITY_SITES:
            raise StateTooLargeError(f"{num_sites} sites exceeds the density-matrix limit {MAX_DENSITY_SITES}")
        if validate:
            if not np.allclose(data, data.conj().T, atol=NORM_TOLERANCE, rtol=0):
                raise StateConstructionError("density matrix is not Hermitian")
            trace = np.trace(data).real
            if abs(trace - 1) > 2 * NORM_TOLERANCE:
                raise StateConstructionError(f"density matrix trace {trace!r} differs from 1")
            smallest = np.linalg.eigvalsh(data)[0]
            if smallest < -EIGENVALUE_TOLERANCE:
                raise StateConstructionError(f"density matrix has eigenvalue {smallest!r} < 0")
        data.flags.writeable = False
        self.data = data
        self.num_sites = num_sites

    @classmethod
    def maximally_mixed(cls, num_sites: int) -> "DensityMatrix":
        dim = 1 << num_sites
        return cls(np.eye(dim) / dim)

    def __repr__(self) -> str:
        return f"DensityMatrix(num_sites={self.num_sites})"


State = Union[StateVector, DensityMatrix]


class MeasurementSetting(BaseModel):
    """
    Dichotomic observable b . (X, Y, Z) with a unit Bloch vector b.
    """
    model_config = ConfigDict(frozen=True)

    bloch: Tuple[float, float, float] = Field(..., description="Unit Bloch vector")

    @field_validator("bloch")
    @classmethod
    def _unit(cls, bloch):
        norm = float(np.linalg.norm(bloch))
        if abs(norm - 1) > NORM_TOLERANCE:
            raise ValueError(f"Bloch vector {bloch} has norm {norm}, expected 1")
        return bloch

    @classmethod
    def from_vector(cls, vector: Sequence[float]) -> "MeasurementSetting":
        """Normalize an arbitrary non-zero 3-vector."""
        vector = np.asarray(vector, dtype=float)
        norm = np.linalg.norm(vector)
        if norm == 0:
            raise InvalidArgumentError("zero Bloch vector has no direction")
        return cls(bloch=tuple(float(v) for v in vector / norm))

    @classmethod
    def from_letter(cls, letter: Union[PauliLetter, str]) -> "MeasurementSetting":
        letter = PauliLetter(letter)
        if letter is PauliLetter.I:
            raise InvalidArgumentError("the identity is not a measurement direction")
        axis = {PauliLetter.X: 0, PauliLetter.Y: 1, PauliLetter.Z: 2}[letter]
        bloch = [0.0, 0.0, 0.0]
        bloch[axis] = 1.0
        return cls(bloch=tuple(bloch))

    def observable(self) -> np.ndarray:
        x, y, z = self.bloch
        return x * SIGMA[PauliLetter.X] + y * SIGMA[PauliLetter.Y] + z * SIGMA[PauliLetter.Z]

    def as_letter(self, atol: float = 1e-12) -> Optional[PauliLetter]:
        """The Pauli letter when the Bloch vector is a positive coordinate axis."""
        for axis, letter in enumerate((PauliLetter.X, PauliLetter.Y, PauliLetter.Z)):
            if abs(self.bloch[axis] - 1) <= atol:
                return letter
        return None


Setting = Optional[MeasurementSetting]


def _site_bit(site: int, num_sites: int) -> int:
    return 1 << (num_sites - 1 - site)


def _index_mask(bits: int, num_sites: int) -> int:
    """Word bitmask (bit s for site s) -> basis-index bitmask (site 0 most significant)."""
    return sum(_site_bit(s, num_sites) for s in range(num_sites) if (bits >> s) & 1)


def _parities(mask: int, num_sites: int) -> np.ndarray:
    indices = np.arange(1 << num_sites, dtype=np.int64)
    return (np.bitwise_count(indices & mask) & 1).astype(np.int64)


def _check_word(word: PauliString, num_sites: int) -> None:
    if word.n_sites != num_sites:
        raise DimensionMismatchError(f"word on {word.n_sites} sites applied to a {num_sites}-site state")


def apply_pauli(word: PauliString, state: StateVector) -> np.ndarray:
    """Raw amplitudes of word|psi> (phase included)."""
    n = state.num_sites
    _check_word(word, n)
    x_mask = _index_mask(word.x_bits, n)
    z_mask = _index_mask(word.z_bits, n)
    n_y = (word.x_bits & word.z_bits).bit_count()
    # sigma_y = i X Z, so the word is i^(phase + #Y) X^x Z^z.
    coefficient = 1j ** ((word.phase_exp + n_y) % 4)
    signs = 1 - 2 * _parities(z_mask, n)
    out = np.empty_like(state.data)
    indices = np.arange(state.data.size)
    out[indices ^ x_mask] = coefficient * signs * state.data
    return out


def _word_expectation(word: PauliString, state: State) -> complex:
    n = state.num_sites
    _check_word(word, n)
    if isinstance(state, StateVector):
        return complex(np.vdot(state.data, apply_pauli(word, state)))
    x_mask = _index_mask(word.x_bits, n)
    z_mask = _index_mask(word.z_bits, n)
    n_y = (word.x_bits & word.z_bits).bit_count()
    coefficient = 1j ** ((word.phase_exp + n_y) % 4)
    indices = np.arange(1 << n)
    signs = 1 - 2 * _parities(z_mask, n)
    # W[b ^ x, b] = c * s(b), so Tr(rho W) = sum_b rho[b, b ^ x] * c * s(b)
    return complex(coefficient * np.sum(state.data[indices, indices ^ x_mask] * signs))


def expectation_pauli(state: State, element: Union[StabilizerElement, PauliString]) -> float:
    """<word> with the element's sign folded in; a real number in [-1, 1]."""
    word = element.word if isinstance(element, StabilizerElement) else element
    value = _word_expectation(word, state)
    if abs(value.imag) > EIGENVALUE_TOLERANCE:
        raise StateConstructionError(f"expectation of {word.label} has imaginary part {value.imag!r}")
    return float(value.real)


def _apply_local(tensor: np.ndarray, operator: np.ndarray, axis: int) -> np.ndarray:
    moved = np.tensordot(operator, tensor, axes=([1], [axis]))
    return np.moveaxis(moved, 0, axis)


def expectation_settings(state: State, settings: Sequence[Setting]) -> float:
    """Expectation of the tensor product of b . sigma observables; None marks the identity."""
    n = state.num_sites
    if len(settings) != n:
        raise DimensionMismatchError(f"{len(settings)} settings for a {n}-site state")
    if isinstance(state, StateVector):
        tensor = state.data.reshape((2,) * n)
        acted = tensor
        for site, setting in enumerate(settings):
            if setting is not None:
                acted = _apply_local(acted, setting.observable(), site)
        value = np.vdot(tensor.reshape(-1), acted.reshape(-1))
    else:
        tensor = state.data.reshape((2,) * (2 * n))
        for site, setting in enumerate(settings):
            if setting is not None:
                tensor = _apply_local(tensor, setting.observable(), site)
        value = np.trace(tensor.reshape(1 << n, 1 << n))
    if abs(value.imag) > EIGENVALUE_TOLERANCE:
        raise StateConstructionError(f"settings expectation has imaginary part {value.imag!r}")
    return float(value.real)


def partial_trace(state: State, keep: Sequence[int]) -> DensityMatrix:
    """
    Trace out every site not in `keep`.

    Args:
        state: Pure or mixed state
        keep: Sites to keep, in the order they should appear

    Returns:
        DensityMatrix on the kept sites
    """
    n = state.num_sites
    keep = list(keep)
    if not keep:
        raise InvalidArgumentError("keep must name at least one site")
    if len(set(keep)) != len(keep) or any(not 0 <= s < n for s in keep):
        raise DimensionMismatchError(f"keep {keep} is not a set of sites of a {n}-site state")
    if len(keep) > MAX_DENSITY_SITES:
        raise StateTooLargeError(f"{len(keep)} kept sites exceeds the density-matrix limit {MAX_DENSITY_SITES}")
    traced = [s for s in range(n) if s not in keep]
    k = len(keep)
    if isinstance(state, StateVector):
        tensor = np.transpose(state.data.reshape((2,) * n), keep + traced)
        matrix = tensor.reshape(1 << k, -1)
        rho = matrix @ matrix.conj().T
    else:
        tensor = state.data.reshape((2,) * (2 * n))
        tensor = np.transpose(tensor, keep + traced + [n + s for s in keep] + [n + s for s in traced])
        dim_t = 1 << (n - k)
        rho = np.einsum("atbt->ab", tensor.reshape(1 << k, dim_t, 1 << k, dim_t))
    return DensityMatrix(rho)


def purity(rho: Union[DensityMatrix, StateVector]) -> float:
    if isinstance(rho, StateVector):
        return 1.0
    return float(np.real(np.trace(rho.data @ rho.data)))


def _check_count(n: int, low: int = 1) -> None:
    if n < low:
        raise InvalidArgumentError(f"need at least {low} sites, got {n}")
    if n > MAX_VECTOR_SITES:
        raise StateTooLargeError(f"{n} sites exceeds the dense limit {MAX_VECTOR_SITES}")


def make_cluster_state(g: Graph) -> StateVector:
    """
    |+>^N followed by CZ on every edge; the result is checked against S_a|psi> = |psi>.
    """
    n = g.site_count
    _check_count(n)
    indices = np.arange(1 << n, dtype=np.int64)
    phase_bits = np.zeros(1 << n, dtype=np.int64)
    for i, j in g.edges:
        both = _site_bit(i, n) | _site_bit(j, n)
        phase_bits ^= ((indices & both) == both).astype(np.int64)
    state = StateVector((1 - 2 * phase_bits) / np.sqrt(1 << n))
    for gen in generators(g):
        residual = np.max(np.abs(apply_pauli(gen.word, state) - state.data))
        if residual > EIGENVALUE_TOLERANCE:
            raise StateConstructionError(f"generator {gen.label} residual {residual!r} on {g.name}")
    logger.debug(f"Cluster state on {g.name} passes {n} eigenvalue equations")
    return state


def make_ghz(n: int) -> StateVector:
    """(|0...0> + |1...1>)/sqrt(2)."""
    _check_count(n, low=2)
    amplitudes = np.zeros(1 << n, dtype=complex)
    amplitudes[0] = amplitudes[-1] = 1 / np.sqrt(2)
    return StateVector(amplitudes)


def make_w(n: int) -> StateVector:
    """Equal superposition of the n single-excitation basis states."""
    _check_count(n, low=2)
    amplitudes = np.zeros(1 << n, dtype=complex)
    for site in range(n):
        amplitudes[_site_bit(site, n)] = 1 / np.sqrt(n)
    return StateVector(amplitudes)


def make_w4() -> StateVector:
    return make_w(4)


def basis_state(bits: str) -> StateVector:
    if not bits or set(bits) - {"0", "1"}:
        raise InvalidArgumentError(f"basis label {bits!r} must be a non-empty bitstring")
    _check_count(len(bits))
    amplitudes = np.zeros(1 << len(bits), dtype=complex)
    amplitudes[int(bits, 2)] = 1
    return StateVector(amplitudes)


def product_state(settings: Sequence[MeasurementSetting]) -> StateVector:
    """Tensor product of the +1 eigenstates of each setting."""
    _check_count(len(settings))
    vector = np.array([1], dtype=complex)
    for setting in settings:
        eigenvalues, eigenvectors = np.linalg.eigh(setting.observable())
        vector = np.kron(vector, eigenvectors[:, int(np.argmax(eigenvalues))])
    return StateVector(vector, normalize=True)


def perturbed(state: StateVector, epsilon: float = 0.05, seed: int = 0) -> StateVector:
    """Mix in a seeded random vector with weight epsilon, then renormalize."""
    rng = np.random.default_rng(seed)
    noise = rng.normal(size=state.data.size) + 1j * rng.normal(size=state.data.size)
    noise /= np.linalg.norm(noise)
    return StateVector(state.data + epsilon * noise, normalize=True)


def correlation_tensor(state: State) -> np.ndarray:
    """
    T[mu_0, ..., mu_{N-1}] = <sigma_mu_0 (x) ... (x) sigma_mu_{N-1}> with mu in (I, X, Y, Z).
    """
    n = state.num_sites
    if n > MAX_TENSOR_SITES:
        raise StateTooLargeError(f"{n} sites exceeds the correlation-tensor limit {MAX_TENSOR_SITES}")
    rho = state.density_matrix().data if isinstance(state, StateVector) else state.data
    tensor = rho.reshape((2,) * (2 * n))
    # pair (row_s, col_s) per site, then fold each pair into one axis of size 4
    order = [axis for s in range(n) for axis in (s, n + s)]
    tensor = np.transpose(tensor, order).reshape((4,) * n)
    basis = np.array([SIGMA[letter].T.reshape(4) for letter in
                      (PauliLetter.I, PauliLetter.X, PauliLetter.Y, PauliLetter.Z)])
    for site in range(n):
        tensor = _apply_local(tensor, basis, site)
    return np.real(tensor)


def pauli_coefficients(state: State, tol: float = 1e-12) -> Dict[str, float]:
    """
    Nonzero coefficients c_P of rho = 2^-N sum_P c_P P, keyed by the unsigned label.
    c_P equals <P>.
    """
    tensor = correlation_tensor(state)
    letters = "IXYZ"
    coefficients = {}
    for index in product(range(4), repeat=state.num_sites):
        value = float(tensor[index])
        if abs(value) > tol:
            coefficients["".join(letters[i] for i in index)] = value
    return coefficients


def dump_amplitudes(state: StateVector) -> str:
    """One line per basis state: 'bitstring real imag', 17 significant digits."""
    n = state.num_sites
    lines = []
    for index, amplitude in enumerate(state.data):
        lines.append(f"{index:0{n}b} {amplitude.real:.16e} {amplitude.imag:.16e}")
    return "\n".join(lines) + "\n"


def load_amplitudes(text: str) -> StateVector:
    rows: List[Tuple[str, complex]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 3:
            raise InvalidArgumentError(f"line {lineno}: expected 'bitstring real imag', got {line!r}")
        rows.append((parts[0], complex(float(parts[1]), float(parts[2]))))
    if not rows:
        raise InvalidArgumentError("amplitude dump is empty")
    n = len(rows[0][0])
    amplitudes = np.zeros(1 << n, dtype=complex)
    for bits, amplitude in rows:
        if len(bits) != n:
            raise DimensionMismatchError(f"bitstring {bits} has length {len(bits)}, expected {n}")
        amplitudes[int(bits, 2)] = amplitude
    return StateVector(amplitudes)


def eigenvalue_residuals(state: StateVector, elements: Iterable[StabilizerElement]) -> List[float]:
    """max |S|psi> - |psi>| per element."""
    return [float(np.max(np.abs(apply_pauli(e.word, state) - state.data))) for e in elements]
