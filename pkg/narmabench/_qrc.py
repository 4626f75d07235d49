"""
Drive a feedback-driven quantum reservoir and harvest its Pauli-Z features.

Every time step applies the input block on the qubits (0, 1), then one feedback block per
bit measured in the previous step, then the fixed Haar-random reservoir unitary, and finally
measures all qubits. The measured bits are fed back in the next step.
"""
import csv
import enum
import logging
import pathlib
from typing import List, Optional, Sequence, Tuple, Union  # pylint: disable=unused-import

import icontract
import numpy as np

from narmabench import errors
from narmabench._quantum import (
    CNOT_MATRIX,
    IDENTITY_2,
    QuantumState,
    Unitary,
    apply_two_qubit,
    apply_unitary,
    bits_to_index,
    embed,
    haar_random_unitary,
    outcome_bits,
    rx,
    rz,
    sample_outcomes,
    z_signs,
)
from narmabench._seeding import Concern, generator_for

LOGGER = logging.getLogger(__name__)

#: Qubits which the input block acts on
INPUT_QUBITS = (0, 1)


class Mode(enum.Enum):
    """Define how the features of a time step are estimated."""

    #: Average the measured σ_z eigenvalues over the shots (the benchmark mode).
    SHOTS = "shots"

    #: Feed back the sampled bits, but record the exact pre-collapse ⟨σ_z⟩ averaged over the shots.
    EXACT = "exact"

    #: Propagate the distribution of the measurement outcomes exactly (infinitely many shots).
    ENSEMBLE = "ensemble"


def ring_pairs(n_qubits: int) -> List[Tuple[int, int]]:
    """Assign the feedback block of bit j to the qubits (j, (j+1) mod N)."""
    return [(j, (j + 1) % n_qubits) for j in range(n_qubits)]


@icontract.invariant(
    lambda self: self.n_qubits >= 2, error=errors.InvalidArgumentError
)
@icontract.invariant(lambda self: self.n_shots >= 1, error=errors.InvalidArgumentError)
@icontract.invariant(
    lambda self: np.isfinite(self.a_in) and np.isfinite(self.a_fb),
    error=errors.InvalidArgumentError,
)
@icontract.invariant(lambda self: self.washout >= 0, error=errors.InvalidArgumentError)
@icontract.invariant(
    lambda self: len(self.feedback_pairs) == self.n_qubits
    and all(
        0 <= first < self.n_qubits and 0 <= second < self.n_qubits and first != second
        for first, second in self.feedback_pairs
    ),
    "one valid qubit pair per fed-back bit",
    error=errors.InvalidArgumentError,
)
class QrcConfig:
    """Configure the feedback-driven quantum reservoir."""

    def __init__(
        self,
        n_qubits: int = 4,
        a_in: float = 1.0,
        a_fb: float = 2.2,
        n_shots: int = 1000,
        seed: int = 0,
        washout: int = 100,
        feedback_pairs: Optional[Sequence[Tuple[int, int]]] = None,
    ) -> None:
        """
        Initialize with the given values.

        :param n_qubits: number of qubits N
        :param a_in: scale of the input angle
        :param a_fb: scale of the feedback angle
        :param n_shots: number of simulated shots per time step
        :param seed: master seed of the Haar unitary and the shot sampling
        :param washout: number of leading features excluded from the readout training
        :param feedback_pairs:
            qubit pair of the feedback block of each bit;
            if omitted, bit j acts on (j, (j+1) mod N)
        """
        self.n_qubits = n_qubits
        self.a_in = float(a_in)
        self.a_fb = float(a_fb)
        self.n_shots = n_shots
        self.seed = seed
        self.washout = washout
        self.feedback_pairs = (
            [tuple(pair) for pair in feedback_pairs]
            if feedback_pairs is not None
            else ring_pairs(n_qubits)
        )  # type: List[Tuple[int, ...]]

    def __repr__(self) -> str:
        """Represent with the constructor."""
        return (
            "QrcConfig(n_qubits={}, a_in={}, a_fb={}, n_shots={}, seed={}, "
            "washout={}, feedback_pairs={})"
        ).format(
            self.n_qubits,
            self.a_in,
            self.a_fb,
            self.n_shots,
            self.seed,
            self.washout,
            self.feedback_pairs,
        )


@icontract.invariant(lambda self: self.features.ndim == 2)
@icontract.invariant(lambda self: self.features.shape[1] == self.config.n_qubits)
@icontract.invariant(
    lambda self: bool(np.all(np.abs(self.features) <= 1.0 + 1e-12)),
    "features in [−1, 1]",
)
class QrcTrace:
    """Hold the features harvested from the quantum reservoir."""

    def __init__(
        self,
        features: np.ndarray,
        config: QrcConfig,
        mode: Mode = Mode.SHOTS,
        per_shot_bits: Optional[np.ndarray] = None,
    ) -> None:
        """
        Initialize with the given values.

        :param features: T × N matrix of averaged ⟨σ_z⟩
        :param config: configuration of the reservoir
        :param mode: how the features were estimated
        :param per_shot_bits: optional T × n_shots × N measured bits
        """
        self.features = features
        self.config = config
        self.mode = mode
        self.per_shot_bits = per_shot_bits


def block_matrix(alpha: float) -> np.ndarray:
    """
    Compose the two-qubit block (CNOT) · (I ⊗ R_z(α)) · (CNOT) · (R_x(α) ⊗ R_x(α)).

    The rightmost factor acts first. The first qubit of the pair is the control of the CNOTs.
    """
    rotations = np.kron(rx(alpha), rx(alpha))
    phase = np.kron(IDENTITY_2, rz(alpha))
    return CNOT_MATRIX @ phase @ CNOT_MATRIX @ rotations


@icontract.require(
    lambda u, a_in: np.isfinite(u) and np.isfinite(a_in),
    error=errors.InvalidArgumentError,
)
def input_block(u: float, a_in: float) -> Unitary:
    """
    Encode the scalar input ``u`` into a two-qubit unitary with the angle α = a_in·u.

    :param u: input value
    :param a_in: input scale
    :return: 4×4 unitary acting on the input pair
    """
    return Unitary(matrix=block_matrix(a_in * u), n_qubits=2)


def feedback_sign(bit: int) -> float:
    """Map the bit to its σ_z eigenvalue: 0 ↦ +1 and 1 ↦ −1."""
    return 1.0 - 2.0 * bit


@icontract.require(lambda bit: bit in (0, 1), error=errors.InvalidArgumentError)
def feedback_block(bit: int, a_fb: float) -> Unitary:
    """
    Encode a measured ``bit`` into a two-qubit unitary with the angle α = a_fb·(1 − 2·bit).

    :param bit: classical bit measured in the previous step
    :param a_fb: feedback scale
    :return: 4×4 unitary with the same structure as the input block
    """
    return Unitary(matrix=block_matrix(a_fb * feedback_sign(bit)), n_qubits=2)


@icontract.require(
    lambda state, prev_bits: len(prev_bits) == state.n_qubits,
    error=errors.InvalidArgumentError,
)
@icontract.require(
    lambda state, reservoir, config: state.n_qubits == reservoir.n_qubits == config.n_qubits,
    error=errors.InvalidArgumentError,
)
def step(
    state: QuantumState,
    u_t: float,
    prev_bits: Sequence[int],
    reservoir: Unitary,
    config: QrcConfig,
) -> QuantumState:
    """
    Evolve the ``state`` by U_res · U_fb,total · U_in for one time step (before the measurement).

    The feedback blocks are applied in the order m⁰, m¹, …, so that m⁰ is the rightmost factor
    of U_fb,total.

    :param state: state at the beginning of the step
    :param u_t: input of the step
    :param prev_bits: bits measured in the previous step, qubit 0 first
    :param reservoir: fixed reservoir unitary U_res
    :param config: configuration of the reservoir
    :return: state before the measurement
    :raise errors.InvalidArgumentError: on dimension mismatch
    """
    result = apply_two_qubit(
        state, input_block(u_t, config.a_in).matrix, INPUT_QUBITS[0], INPUT_QUBITS[1]
    )

    for bit, (first, second) in zip(prev_bits, config.feedback_pairs):
        result = apply_two_qubit(
            result, feedback_block(int(bit), config.a_fb).matrix, first, second
        )

    return apply_unitary(result, reservoir)


def feedback_operators(config: QrcConfig) -> np.ndarray:
    """
    Tabulate U_fb,total for every possible bit vector.

    :param config: configuration of the reservoir
    :return: array of shape (2^N, 2^N, 2^N); entry k is U_fb,total for the bits of index k
    """
    n_qubits = config.n_qubits
    dimension = 2**n_qubits

    blocks = {
        bit: block_matrix(config.a_fb * feedback_sign(bit)) for bit in (0, 1)
    }

    embedded = [
        {
            bit: embed(blocks[bit], list(pair), n_qubits)
            for bit in (0, 1)
        }
        for pair in config.feedback_pairs
    ]

    operators = np.empty((dimension, dimension, dimension), dtype=np.complex128)
    for index, bits in enumerate(outcome_bits(n_qubits)):
        total = np.eye(dimension, dtype=np.complex128)
        for j, bit in enumerate(bits):
            total = embedded[j][int(bit)] @ total

        operators[index] = total

    return operators


def _shot_uniforms(config: QrcConfig, length: int) -> np.ndarray:
    # Each shot owns its stream so that its outcomes do not depend on the number of shots.
    return np.stack(
        [
            generator_for(config.seed, Concern.SHOTS, shot).random(length)
            for shot in range(config.n_shots)
        ]
    )


@icontract.require(lambda series_u: len(series_u) > 0)
@icontract.require(
    lambda config, initial_bits: initial_bits is None
    or len(initial_bits) == config.n_qubits,
    error=errors.InvalidArgumentError,
)
@icontract.require(
    lambda config, reservoir: reservoir is None or reservoir.n_qubits == config.n_qubits,
    error=errors.InvalidArgumentError,
)
@icontract.ensure(
    lambda series_u, result: result.features.shape[0] == len(series_u)
)
def run_reservoir(
    series_u: Union[Sequence[float], np.ndarray],
    config: QrcConfig,
    mode: Mode = Mode.SHOTS,
    reservoir: Optional[Unitary] = None,
    initial_bits: Optional[Sequence[int]] = None,
    record_bits: bool = False,
) -> QrcTrace:
    """
    Drive the reservoir with the inputs and harvest the features of every time step.

    Every shot starts in |0…0⟩ with the previous bits all zero, unless ``initial_bits`` are given.
    In each step the shot is evolved by :py:func:`step`, measured and collapsed; the measured bits
    are fed back in the next step.

    :param series_u: inputs driving the reservoir
    :param config: configuration of the reservoir
    :param mode: how the features are estimated
    :param reservoir: reservoir unitary; if omitted, sampled from the Haar measure with ``config.seed``
    :param initial_bits: bits fed back in the first step
    :param record_bits: if set, keep the measured bits of every shot
    :return: harvested features
    """
    u = np.asarray(series_u, dtype=np.float64)
    length = u.shape[0]
    n_qubits = config.n_qubits
    dimension = 2**n_qubits

    if reservoir is None:
        reservoir = haar_random_unitary(n_qubits, config.seed)

    # Index k holds U_res · U_fb,total(bits of k).
    propagators = reservoir.matrix[np.newaxis, :, :] @ feedback_operators(config)

    start_pattern = 0 if initial_bits is None else bits_to_index(initial_bits)
    signs = z_signs(n_qubits)

    features = np.empty((length, n_qubits), dtype=np.float64)

    def input_operator(t: int) -> np.ndarray:
        return embed(block_matrix(config.a_in * u[t]), list(INPUT_QUBITS), n_qubits)

    if mode is Mode.ENSEMBLE:
        initial = np.zeros(dimension, dtype=np.complex128)
        initial[0] = 1.0
        psi = propagators[start_pattern] @ input_operator(0) @ initial
        distribution = np.abs(psi) ** 2
        features[0] = distribution @ signs

        for t in range(1, length):
            # After a collapse the state is the basis vector whose index equals the fed-back bits.
            # Column k of the transition is |U_res · U_fb,total(k) · U_in(u_t) |k⟩|².
            columns = np.einsum("kjl,lk->jk", propagators, input_operator(t))
            distribution = (np.abs(columns) ** 2) @ distribution
            features[t] = distribution @ signs

        return QrcTrace(features=features, config=config, mode=mode)

    uniforms = _shot_uniforms(config, length)

    states = np.zeros((config.n_shots, dimension), dtype=np.complex128)
    states[:, 0] = 1.0
    patterns = np.full(config.n_shots, start_pattern, dtype=np.int64)

    bits_table = outcome_bits(n_qubits)
    per_shot_bits = (
        np.empty((length, config.n_shots, n_qubits), dtype=np.int8)
        if record_bits
        else None
    )

    for t in range(length):
        psi = states @ input_operator(t).T
        for pattern in np.unique(patterns):
            selected = patterns == pattern
            psi[selected] = psi[selected] @ propagators[pattern].T

        probabilities = np.abs(psi) ** 2
        outcomes = sample_outcomes(probabilities, uniforms[:, t])

        if mode is Mode.EXACT:
            features[t] = (probabilities @ signs).mean(axis=0)
        else:
            features[t] = signs[outcomes].mean(axis=0)

        if per_shot_bits is not None:
            per_shot_bits[t] = bits_table[outcomes]

        states = np.zeros_like(states)
        states[np.arange(config.n_shots), outcomes] = 1.0
        patterns = outcomes

    return QrcTrace(
        features=features, config=config, mode=mode, per_shot_bits=per_shot_bits
    )


def write_trace_csv(trace: QrcTrace, path: Union[str, pathlib.Path]) -> None:
    """Write the features as CSV with the header ``t,z0,z1,…``."""
    with open(str(path), "wt", encoding="utf-8", newline="") as fid:
        writer = csv.writer(fid)
        writer.writerow(
            ["t"] + ["z{}".format(i) for i in range(trace.config.n_qubits)]
        )
        for t, row in enumerate(trace.features):
            writer.writerow([str(t)] + ["{:.17g}".format(value) for value in row])
