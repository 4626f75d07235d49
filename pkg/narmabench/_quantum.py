"""
Simulate small pure N-qubit states with dense state vectors.

Qubit 0 is the least significant bit of the basis-state index. A k-qubit gate applied to
the qubits ``(q_0, ..., q_{k-1})`` treats ``q_0`` as the most significant bit of its local
index, so ``rx(a) ⊗ rz(b)`` applied to ``(0, 1)`` rotates qubit 0 about X and qubit 1 about Z.

Most functions accept amplitudes with leading batch dimensions so that many shots can be
propagated at once.
"""
import functools
from typing import Sequence, Tuple, Union  # pylint: disable=unused-import

import icontract
import numpy as np
import scipy.linalg

import narmabench._globals
from narmabench import errors
from narmabench._seeding import Concern, generator_for

#: Largest register we are willing to simulate densely
MAX_QUBITS = 10

SeedLike = Union[int, np.random.Generator]

IDENTITY_2 = np.eye(2, dtype=np.complex128)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)

PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)

# Control is the first (more significant) qubit of the local index.
CNOT_MATRIX = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
)


def rx(theta: float) -> np.ndarray:
    """Compute the rotation exp(−iθX/2)."""
    cos, sin = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array([[cos, -1j * sin], [-1j * sin, cos]], dtype=np.complex128)


def rz(theta: float) -> np.ndarray:
    """Compute the rotation exp(−iθZ/2)."""
    return np.array(
        [[np.exp(-0.5j * theta), 0.0], [0.0, np.exp(0.5j * theta)]],
        dtype=np.complex128,
    )


def is_unitary(matrix: np.ndarray, tolerance: float = narmabench._globals.UNITARITY_TOLERANCE) -> bool:
    """Check that ``matrix · matrix†`` equals the identity entry-wise within ``tolerance``."""
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        return False

    deviation = matrix @ matrix.conj().T - np.eye(matrix.shape[0])
    return bool(np.max(np.abs(deviation)) <= tolerance)


@icontract.invariant(lambda self: 1 <= self.n_qubits <= MAX_QUBITS)
@icontract.invariant(lambda self: self.amplitudes.shape == (2**self.n_qubits,))
@icontract.invariant(
    lambda self: abs(np.vdot(self.amplitudes, self.amplitudes).real - 1.0)
    <= narmabench._globals.NORM_TOLERANCE,
    "normalized",
)
class QuantumState:
    """Represent a normalized pure state of ``n_qubits`` qubits."""

    def __init__(self, amplitudes: np.ndarray, n_qubits: int) -> None:
        """
        Initialize with the given values.

        :param amplitudes: complex vector of length 2^n_qubits
        :param n_qubits: number of qubits
        """
        self.amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        self.n_qubits = n_qubits

    def probabilities(self) -> np.ndarray:
        """Compute the probabilities of the computational basis states."""
        return np.abs(self.amplitudes) ** 2

    def __repr__(self) -> str:
        """Represent with the constructor."""
        return "QuantumState(amplitudes={!r}, n_qubits={})".format(
            self.amplitudes, self.n_qubits
        )


@icontract.invariant(lambda self: 1 <= self.n_qubits <= MAX_QUBITS)
@icontract.invariant(
    lambda self: self.matrix.shape == (2**self.n_qubits, 2**self.n_qubits)
)
@icontract.invariant(lambda self: is_unitary(self.matrix), "U·U† = I")
class Unitary:
    """Represent a unitary operator on ``n_qubits`` qubits."""

    def __init__(self, matrix: np.ndarray, n_qubits: int) -> None:
        """
        Initialize with the given values.

        :param matrix: complex 2^n_qubits × 2^n_qubits matrix
        :param n_qubits: number of qubits
        """
        self.matrix = np.asarray(matrix, dtype=np.complex128)
        self.n_qubits = n_qubits

    def __repr__(self) -> str:
        """Represent with the constructor."""
        return "Unitary(matrix={!r}, n_qubits={})".format(self.matrix, self.n_qubits)


@icontract.require(lambda n_qubits: 1 <= n_qubits <= MAX_QUBITS)
def zero_state(n_qubits: int) -> QuantumState:
    """Create the state |0…0⟩."""
    amplitudes = np.zeros(2**n_qubits, dtype=np.complex128)
    amplitudes[0] = 1.0
    return QuantumState(amplitudes=amplitudes, n_qubits=n_qubits)


@icontract.require(lambda n_qubits: 1 <= n_qubits <= MAX_QUBITS)
@icontract.require(lambda n_qubits, index: 0 <= index < 2**n_qubits)
def basis_state(n_qubits: int, index: int) -> QuantumState:
    """Create the computational basis state with the given index."""
    amplitudes = np.zeros(2**n_qubits, dtype=np.complex128)
    amplitudes[index] = 1.0
    return QuantumState(amplitudes=amplitudes, n_qubits=n_qubits)


@functools.lru_cache(maxsize=None)
def outcome_bits(n_qubits: int) -> np.ndarray:
    """
    Tabulate the bits of every basis-state index.

    :param n_qubits: number of qubits
    :return: 2^n_qubits × n_qubits integer table; entry (j, i) is the bit of qubit i in index j
    """
    indices = np.arange(2**n_qubits)
    table = (indices[:, np.newaxis] >> np.arange(n_qubits)[np.newaxis, :]) & 1
    table.setflags(write=False)
    return table


@functools.lru_cache(maxsize=None)
def z_signs(n_qubits: int) -> np.ndarray:
    """Tabulate the Pauli-Z eigenvalue (1 − 2·bit) of every qubit in every basis state."""
    signs = 1.0 - 2.0 * outcome_bits(n_qubits).astype(np.float64)
    signs.setflags(write=False)
    return signs


def bits_to_index(bits: Sequence[int]) -> int:
    """Convert the bits (qubit 0 first) to the index of the basis state."""
    return sum(int(bit) << qubit for qubit, bit in enumerate(bits))


def apply_matrix(
    amplitudes: np.ndarray, matrix: np.ndarray, qubits: Sequence[int], n_qubits: int
) -> np.ndarray:
    """
    Apply the k-qubit ``matrix`` to the given ``qubits`` of (possibly batched) ``amplitudes``.

    :param amplitudes: array of shape (..., 2^n_qubits)
    :param matrix: 2^k × 2^k matrix; ``qubits[0]`` is the most significant bit of its local index
    :param qubits: distinct target qubits
    :param n_qubits: number of qubits of the register
    :return: transformed amplitudes of the same shape
    """
    k = len(qubits)
    batch_shape = amplitudes.shape[:-1]
    offset = len(batch_shape)

    tensor = amplitudes.reshape(batch_shape + (2,) * n_qubits)
    axes = [offset + n_qubits - 1 - qubit for qubit in qubits]
    gate = matrix.reshape((2,) * (2 * k))

    result = np.tensordot(gate, tensor, axes=(list(range(k, 2 * k)), axes))
    result = np.moveaxis(result, list(range(k)), axes)

    return result.reshape(amplitudes.shape)


def apply_rx_batch(
    amplitudes: np.ndarray, angles: np.ndarray, qubit: int, n_qubits: int
) -> np.ndarray:
    """
    Rotate ``qubit`` about X by a different angle in every batch row.

    :param amplitudes: array of shape (batch, 2^n_qubits)
    :param angles: array of shape (batch,)
    :param qubit: index of the rotated qubit
    :param n_qubits: number of qubits of the register
    :return: rotated amplitudes
    """
    batch = amplitudes.shape[0]

    # The middle axis enumerates the bit of ``qubit`` in the basis-state index.
    tensor = amplitudes.reshape(batch, 2 ** (n_qubits - 1 - qubit), 2, 2**qubit)
    cos = np.cos(angles / 2.0)[:, np.newaxis, np.newaxis]
    sin = np.sin(angles / 2.0)[:, np.newaxis, np.newaxis]

    zero = tensor[:, :, 0, :]
    one = tensor[:, :, 1, :]

    result = np.empty_like(tensor)
    result[:, :, 0, :] = cos * zero - 1j * sin * one
    result[:, :, 1, :] = -1j * sin * zero + cos * one
    return result.reshape(batch, -1)


def embed(matrix: np.ndarray, qubits: Sequence[int], n_qubits: int) -> np.ndarray:
    """Expand the k-qubit ``matrix`` acting on ``qubits`` to the full 2^n_qubits × 2^n_qubits matrix."""
    dimension = 2**n_qubits
    columns = apply_matrix(
        np.eye(dimension, dtype=np.complex128), matrix, qubits, n_qubits
    )

    # Row j of ``columns`` is the image of the basis vector e_j.
    return columns.T


def _gate_is_unitary(gate: np.ndarray) -> bool:
    return is_unitary(np.asarray(gate, dtype=np.complex128))


@icontract.require(
    lambda state, target: 0 <= target < state.n_qubits,
    error=errors.InvalidArgumentError,
)
@icontract.require(
    lambda gate: np.shape(gate) == (2, 2) and _gate_is_unitary(gate),
    "gate is a 2×2 unitary",
    error=errors.InvalidArgumentError,
)
def apply_one_qubit(state: QuantumState, gate: np.ndarray, target: int) -> QuantumState:
    """
    Apply a single-qubit ``gate`` to the ``target`` qubit, *i.e.*, I ⊗ … ⊗ gate ⊗ … ⊗ I.

    :param state: state before the gate
    :param gate: 2×2 unitary
    :param target: index of the qubit
    :return: state after the gate
    :raise errors.InvalidArgumentError: if the target is out of range
    """
    return QuantumState(
        amplitudes=apply_matrix(state.amplitudes, np.asarray(gate), [target], state.n_qubits),
        n_qubits=state.n_qubits,
    )


@icontract.require(
    lambda state, control, target: 0 <= control < state.n_qubits
    and 0 <= target < state.n_qubits,
    error=errors.InvalidArgumentError,
)
@icontract.require(
    lambda control, target: control != target, error=errors.InvalidArgumentError
)
def apply_cnot(state: QuantumState, control: int, target: int) -> QuantumState:
    """
    Flip the ``target`` bit of every basis state whose ``control`` bit is set.

    :param state: state before the gate
    :param control: index of the control qubit
    :param target: index of the target qubit
    :return: state after the gate
    :raise errors.InvalidArgumentError: if the qubits coincide or are out of range
    """
    return QuantumState(
        amplitudes=apply_matrix(
            state.amplitudes, CNOT_MATRIX, [control, target], state.n_qubits
        ),
        n_qubits=state.n_qubits,
    )


@icontract.require(
    lambda state, first, second: 0 <= first < state.n_qubits
    and 0 <= second < state.n_qubits
    and first != second,
    error=errors.InvalidArgumentError,
)
@icontract.require(lambda gate: np.shape(gate) == (4, 4))
def apply_two_qubit(
    state: QuantumState, gate: np.ndarray, first: int, second: int
) -> QuantumState:
    """Apply the 4×4 ``gate`` to the qubits ``(first, second)``; ``first`` is the more significant one."""
    return QuantumState(
        amplitudes=apply_matrix(state.amplitudes, gate, [first, second], state.n_qubits),
        n_qubits=state.n_qubits,
    )


@icontract.require(
    lambda state, unitary: state.n_qubits == unitary.n_qubits,
    error=errors.InvalidArgumentError,
)
def apply_unitary(state: QuantumState, unitary: Unitary) -> QuantumState:
    """Apply the full-register ``unitary`` to the ``state``."""
    return QuantumState(
        amplitudes=unitary.matrix @ state.amplitudes, n_qubits=state.n_qubits
    )


@icontract.require(lambda n_qubits: 1 <= n_qubits <= MAX_QUBITS)
@icontract.ensure(lambda n_qubits, result: result.n_qubits == n_qubits)
def haar_random_unitary(n_qubits: int, seed: int) -> Unitary:
    """
    Sample a unitary from the Haar measure on U(2^n_qubits).

    A complex Ginibre matrix is QR-decomposed and the columns of Q are multiplied by the phases
    of R's diagonal, which makes the decomposition unique and the distribution of Q exactly Haar.

    :param n_qubits: number of qubits
    :param seed: seed of the sampler
    :return: Haar-random unitary
    """
    rng = generator_for(seed, Concern.HAAR)
    dimension = 2**n_qubits

    ginibre = (
        rng.standard_normal((dimension, dimension))
        + 1j * rng.standard_normal((dimension, dimension))
    ) / np.sqrt(2.0)

    q, r = scipy.linalg.qr(ginibre)
    diagonal = np.diag(r)
    phases = diagonal / np.abs(diagonal)

    return Unitary(matrix=q * phases[np.newaxis, :], n_qubits=n_qubits)


def as_generator(seed: SeedLike) -> np.random.Generator:
    """Wrap an integer seed into a generator; pass generators through."""
    if isinstance(seed, np.random.Generator):
        return seed

    return np.random.default_rng(seed)


def sample_outcomes(probabilities: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
    """
    Sample basis-state indices by inverting the cumulative distribution.

    :param probabilities: array of shape (batch, 2^N), rows sum to one up to rounding
    :param uniforms: array of shape (batch,) with values in [0, 1)
    :return: sampled indices of shape (batch,)
    """
    cumulative = np.cumsum(probabilities, axis=-1)
    thresholds = uniforms * cumulative[:, -1]
    indices = (cumulative <= thresholds[:, np.newaxis]).sum(axis=-1)
    return np.minimum(indices, probabilities.shape[-1] - 1)


@icontract.ensure(
    lambda state, result: len(result[0]) == state.n_qubits
    and np.count_nonzero(result[1].amplitudes) == 1
)
def measure_all(state: QuantumState, seed: SeedLike) -> Tuple[Tuple[int, ...], QuantumState]:
    """
    Measure every qubit in the computational basis.

    :param state: state to be measured
    :param seed: seed or generator of the sampler
    :return: measured bits (qubit 0 first), collapsed basis state
    """
    rng = as_generator(seed)
    probabilities = state.probabilities()[np.newaxis, :]
    index = int(sample_outcomes(probabilities, np.array([rng.random()]))[0])

    bits = tuple(int(bit) for bit in outcome_bits(state.n_qubits)[index])
    return bits, basis_state(state.n_qubits, index)


def z_expectations_of_amplitudes(amplitudes: np.ndarray, n_qubits: int) -> np.ndarray:
    """Compute ⟨σ_z⟩ of every qubit for (possibly batched) amplitudes of shape (..., 2^n_qubits)."""
    return (np.abs(amplitudes) ** 2) @ z_signs(n_qubits)


@icontract.ensure(
    lambda result: bool(np.all(np.abs(result) <= 1.0 + 1e-12)),
    "expectations in [−1, 1]",
)
def pauli_z_expectations(state: QuantumState) -> np.ndarray:
    """
    Compute the exact expectation ⟨σ_z⟩ of every qubit.

    :param state: normalized state
    :return: vector of n_qubits values, qubit 0 first
    """
    return z_expectations_of_amplitudes(state.amplitudes, state.n_qubits)
