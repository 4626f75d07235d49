"""
Train an LSTM whose gate transforms are variational quantum circuits.

Each gate circuit embeds the projected vector q_t with one R_x per qubit, then applies
``n_layers`` layers of one trainable R_x per qubit followed by a closed ring of CNOTs, and
reads out ⟨σ_z⟩ of every qubit. The circuits are simulated exactly; their gradients are
computed with the parameter-shift rule and chained into the classical weights.
"""
import functools
import logging
from typing import Dict, List, Optional, Tuple  # pylint: disable=unused-import

import icontract
import numpy as np

from narmabench import errors
from narmabench._optim import (
    Adam,
    TrainSpec,
    all_finite,
    copy_arrays,
    model_inputs,
    window_bounds,
)
from narmabench._quantum import (
    CNOT_MATRIX,
    apply_rx_batch,
    embed,
    z_expectations_of_amplitudes,
)
from narmabench._recurrent import mse, sigmoid
from narmabench._seeding import Concern, generator_for
from narmabench._timeseries import SeriesView
from narmabench._timing import time_block

LOGGER = logging.getLogger(__name__)

#: Names of the gate circuits in the order they are stacked
GATES = ("f", "i", "g", "o")

#: Shift of the parameter-shift rule for rotations exp(−iθP/2)
SHIFT = np.pi / 2.0


@icontract.invariant(
    lambda self: self.hidden >= 1 and self.n_qubits >= 1 and self.n_layers >= 1,
    error=errors.InvalidArgumentError,
)
@icontract.invariant(
    lambda self: self.max_steps is None or self.max_steps > 1,
    error=errors.InvalidArgumentError,
)
class QlstmConfig:
    """Configure the QLSTM and its training."""

    def __init__(
        self,
        hidden: int = 4,
        n_qubits: int = 4,
        n_layers: int = 1,
        projection_bias: bool = True,
        max_steps: Optional[int] = None,
        train: Optional[TrainSpec] = None,
    ) -> None:
        """
        Initialize with the given values.

        :param hidden: hidden size h
        :param n_qubits: number of qubits n_q per gate circuit
        :param n_layers: number of variational layers per gate circuit
        :param projection_bias: whether the input projection and the decoder have biases
        :param max_steps: if given, the train window is truncated to this many steps
        :param train: training specification; defaults to 20 epochs of Adam with η = 1e-3
        """
        self.hidden = hidden
        self.n_qubits = n_qubits
        self.n_layers = n_layers
        self.projection_bias = projection_bias
        self.max_steps = max_steps
        self.train = train if train is not None else TrainSpec()

    def __repr__(self) -> str:
        """Represent with the constructor."""
        return (
            "QlstmConfig(hidden={}, n_qubits={}, n_layers={}, projection_bias={}, "
            "max_steps={}, train={!r})"
        ).format(
            self.hidden,
            self.n_qubits,
            self.n_layers,
            self.projection_bias,
            self.max_steps,
            self.train,
        )


@icontract.invariant(
    lambda self: self.arrays["w_in"].shape
    == (self.n_qubits, self.hidden + self.input_dim)
)
@icontract.invariant(
    lambda self: all(
        self.arrays["theta_" + gate].shape == (self.n_layers, self.n_qubits)
        for gate in GATES
    )
)
@icontract.invariant(
    lambda self: self.arrays["w_dec"].shape == (self.hidden, self.n_qubits)
)
@icontract.invariant(
    lambda self: self.arrays["w_out"].shape == (1, self.hidden)
    and self.arrays["b_out"].shape == (1,)
)
@icontract.invariant(
    lambda self: ("b_in" in self.arrays) == ("b_dec" in self.arrays) == self.projection_bias
)
class QlstmParams:
    """
    Hold the weights of the QLSTM.

    ``w_in`` projects [h_{t−1}; x_t] to the n_q circuit inputs, ``theta_f`` … ``theta_o`` are the
    angles of the four gate circuits, ``w_dec`` is the decoder shared by the four gates, and
    ``w_out``, ``b_out`` form the per-step readout. ``b_in`` and ``b_dec`` exist only with
    ``projection_bias``.
    """

    def __init__(
        self,
        arrays: Dict[str, np.ndarray],
        hidden: int,
        input_dim: int,
        n_qubits: int,
        n_layers: int,
        projection_bias: bool,
    ) -> None:
        """
        Initialize with the given values.

        :param arrays: weights by name
        :param hidden: hidden size h
        :param input_dim: input dimension d
        :param n_qubits: number of qubits n_q per gate circuit
        :param n_layers: number of variational layers per gate circuit
        :param projection_bias: whether the input projection and the decoder have biases
        """
        self.arrays = arrays
        self.hidden = hidden
        self.input_dim = input_dim
        self.n_qubits = n_qubits
        self.n_layers = n_layers
        self.projection_bias = projection_bias

    def copy(self) -> "QlstmParams":
        """Copy the weights deeply."""
        return QlstmParams(
            arrays=copy_arrays(self.arrays),
            hidden=self.hidden,
            input_dim=self.input_dim,
            n_qubits=self.n_qubits,
            n_layers=self.n_layers,
            projection_bias=self.projection_bias,
        )

    @property
    def thetas(self) -> np.ndarray:
        """Stack the circuit angles of the four gates into a 4 × n_layers × n_q array."""
        return np.stack([self.arrays["theta_" + gate] for gate in GATES])


@icontract.require(
    lambda hidden, input_dim, n_qubits, n_layers: hidden >= 1
    and input_dim >= 1
    and n_qubits >= 1
    and n_layers >= 1
)
def count_qlstm_params(
    hidden: int,
    input_dim: int = 1,
    n_qubits: int = 4,
    n_layers: int = 1,
    projection_bias: bool = True,
) -> int:
    """
    Count the trainable weights of the QLSTM.

    n_q·(h+d) [+ n_q] + 4·n_layers·n_q + h·n_q [+ h] + (h + 1), where the bracketed biases
    are counted only with ``projection_bias``.

    >>> count_qlstm_params(1, 1, 1, 1, projection_bias=False)
    9
    >>> count_qlstm_params(4, 1, 4, 1, projection_bias=True)
    65
    """
    count = n_qubits * (hidden + input_dim) + 4 * n_layers * n_qubits
    count += hidden * n_qubits + hidden + 1

    if projection_bias:
        count += n_qubits + hidden

    return count


@icontract.ensure(
    lambda hidden, input_dim, n_qubits, n_layers, projection_bias, result: sum(
        array.size for array in result.arrays.values()
    )
    == count_qlstm_params(hidden, input_dim, n_qubits, n_layers, projection_bias)
)
def init_qlstm_params(
    hidden: int,
    input_dim: int,
    n_qubits: int,
    n_layers: int,
    seed: int,
    projection_bias: bool = True,
) -> QlstmParams:
    """
    Draw the initial weights.

    The linear maps are drawn uniformly from ±1/√fan_in and the circuit angles from [0, 2π).

    :param hidden: hidden size h
    :param input_dim: input dimension d
    :param n_qubits: number of qubits n_q
    :param n_layers: number of variational layers
    :param seed: master seed of the initialization
    :param projection_bias: whether the input projection and the decoder have biases
    :return: initial weights
    """
    rng = generator_for(seed, Concern.QLSTM)

    def uniform(shape: Tuple[int, ...], fan_in: int) -> np.ndarray:
        bound = 1.0 / np.sqrt(fan_in)
        return rng.uniform(-bound, bound, shape)

    arrays = dict()  # type: Dict[str, np.ndarray]
    arrays["w_in"] = uniform((n_qubits, hidden + input_dim), hidden + input_dim)
    if projection_bias:
        arrays["b_in"] = uniform((n_qubits,), hidden + input_dim)

    for gate in GATES:
        arrays["theta_" + gate] = rng.uniform(0.0, 2.0 * np.pi, (n_layers, n_qubits))

    arrays["w_dec"] = uniform((hidden, n_qubits), n_qubits)
    if projection_bias:
        arrays["b_dec"] = uniform((hidden,), n_qubits)

    arrays["w_out"] = uniform((1, hidden), hidden)
    arrays["b_out"] = uniform((1,), hidden)

    return QlstmParams(
        arrays=arrays,
        hidden=hidden,
        input_dim=input_dim,
        n_qubits=n_qubits,
        n_layers=n_layers,
        projection_bias=projection_bias,
    )


@functools.lru_cache(maxsize=None)
def ring_permutation(n_qubits: int) -> np.ndarray:
    """
    Tabulate the basis-state permutation of the CNOT ring.

    The ring applies CNOT(i → (i+1) mod n_q) for i = 0, …, n_q − 1 in this order. The new
    amplitude at index j is the old amplitude at ``permutation[j]``.
    """
    dimension = 2**n_qubits
    total = np.eye(dimension, dtype=np.complex128)
    for control in range(n_qubits):
        total = embed(CNOT_MATRIX, [control, (control + 1) % n_qubits], n_qubits) @ total

    permutation = np.argmax(np.abs(total), axis=1)
    permutation.setflags(write=False)
    return permutation


def evaluate_circuits(q: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """
    Evaluate a batch of gate circuits exactly.

    :param q: array of shape (batch, n_q) with the embedding angles
    :param theta: array of shape (batch, n_layers, n_q) with the variational angles
    :return: array of shape (batch, n_q) with ⟨σ_z⟩ of every qubit
    """
    batch, n_qubits = q.shape
    amplitudes = np.zeros((batch, 2**n_qubits), dtype=np.complex128)
    amplitudes[:, 0] = 1.0

    for qubit in range(n_qubits):
        amplitudes = apply_rx_batch(amplitudes, q[:, qubit], qubit, n_qubits)

    permutation = ring_permutation(n_qubits) if n_qubits > 1 else None
    for layer in range(theta.shape[1]):
        for qubit in range(n_qubits):
            amplitudes = apply_rx_batch(amplitudes, theta[:, layer, qubit], qubit, n_qubits)

        if permutation is not None:
            amplitudes = amplitudes[:, permutation]

    return z_expectations_of_amplitudes(amplitudes, n_qubits)


@icontract.require(lambda q, theta: q.ndim == 1 and theta.ndim == 2 and theta.shape[1] == q.shape[0])
@icontract.ensure(lambda q, result: result.shape == q.shape)
@icontract.ensure(lambda result: bool(np.all(np.abs(result) <= 1.0 + 1e-12)))
def gate_circuit(q: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """
    Evaluate one gate circuit from |0…0⟩ and read out ⟨σ_z⟩ of every qubit.

    :param q: n_q embedding angles
    :param theta: n_layers × n_q variational angles
    :return: n_q expectation values in [−1, 1]
    """
    return evaluate_circuits(q[np.newaxis, :], theta[np.newaxis, :, :])[0]


def _shifted_arguments(q: np.ndarray, theta: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Stack the unshifted circuit arguments followed by the +π/2 and the −π/2 shift of every angle.

    The angles are enumerated as the n_q embedding angles followed by the flattened θ.
    """
    n_qubits = q.shape[0]
    flat = np.concatenate([q, theta.ravel()])
    count = flat.shape[0]

    shifts = np.concatenate([np.zeros((1, count)), SHIFT * np.eye(count), -SHIFT * np.eye(count)])
    arguments = flat[np.newaxis, :] + shifts

    return arguments[:, :n_qubits], arguments[:, n_qubits:].reshape(
        (-1,) + theta.shape
    )


def _split_shifted(
    outputs: np.ndarray, n_qubits: int, theta_shape: Tuple[int, ...]
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Recover the expectation and its Jacobians from the outputs of the shifted batch."""
    count = (outputs.shape[0] - 1) // 2
    plus = outputs[1 : 1 + count]
    minus = outputs[1 + count :]

    # Row p of ``gradient`` holds dE/d(angle p).
    gradient = 0.5 * (plus - minus)

    jacobian_q = gradient[:n_qubits].T
    jacobian_theta = gradient[n_qubits:].T.reshape((outputs.shape[1],) + theta_shape)
    return outputs[0], jacobian_q, jacobian_theta


@icontract.require(lambda q, theta: q.ndim == 1 and theta.ndim == 2 and theta.shape[1] == q.shape[0])
@icontract.ensure(
    lambda q, theta, result: result[0].shape == (q.shape[0], q.shape[0])
    and result[1].shape == (q.shape[0],) + theta.shape
)
def parameter_shift_grad(q: np.ndarray, theta: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Differentiate the expectations of a gate circuit by the parameter-shift rule.

    Every angle enters through a single rotation exp(−iaX/2), hence
    dE/da = [E(a + π/2) − E(a − π/2)] / 2 exactly. The rule applies to the embedding angles
    ``q`` as well, which lets the gradient flow into the input projection.

    :param q: n_q embedding angles
    :param theta: n_layers × n_q variational angles
    :return:
        Jacobian w.r.t. ``q`` of shape (n_q, n_q) with entry (k, i) = dE_k/dq_i,
        Jacobian w.r.t. ``theta`` of shape (n_q, n_layers, n_q)
    """
    shifted_q, shifted_theta = _shifted_arguments(q, theta)
    outputs = evaluate_circuits(shifted_q, shifted_theta)
    _, jacobian_q, jacobian_theta = _split_shifted(outputs, q.shape[0], theta.shape)
    return jacobian_q, jacobian_theta


def _project(params: QlstmParams, v: np.ndarray) -> np.ndarray:
    q = params.arrays["w_in"] @ v
    if params.projection_bias:
        q = q + params.arrays["b_in"]
    return q


def _decode(params: QlstmParams, expectations: np.ndarray) -> np.ndarray:
    """Map the 4 × n_q circuit outputs to the 4 × h gate pre-activations."""
    result = expectations @ params.arrays["w_dec"].T
    if params.projection_bias:
        result = result + params.arrays["b_dec"][np.newaxis, :]
    return result


def _activate(pre_activations: np.ndarray) -> np.ndarray:
    gates = np.empty_like(pre_activations)
    gates[0] = sigmoid(pre_activations[0])
    gates[1] = sigmoid(pre_activations[1])
    gates[2] = np.tanh(pre_activations[2])
    gates[3] = sigmoid(pre_activations[3])
    return gates


@icontract.require(lambda params, x_t: np.shape(x_t) == (params.input_dim,))
@icontract.require(
    lambda params, h_prev, c_prev: np.shape(h_prev) == (params.hidden,)
    and np.shape(c_prev) == (params.hidden,)
)
def qlstm_cell(
    params: QlstmParams, x_t: np.ndarray, h_prev: np.ndarray, c_prev: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Advance the QLSTM by one step.

    :param params: weights
    :param x_t: input of the step
    :param h_prev: previous hidden state
    :param c_prev: previous cell state
    :return: hidden state h_t, cell state c_t
    """
    v = np.concatenate([h_prev, x_t])
    q = _project(params, v)

    thetas = params.thetas
    expectations = evaluate_circuits(np.repeat(q[np.newaxis, :], len(GATES), axis=0), thetas)
    f, i, g, o = _activate(_decode(params, expectations))

    c = f * c_prev + i * g
    h = o * np.tanh(c)
    return h, c


class QlstmCache:
    """Keep the activations and the circuit Jacobians of a forward pass."""

    def __init__(self, params: QlstmParams, length: int) -> None:
        """Allocate the activations of ``length`` steps."""
        hidden, n_qubits = params.hidden, params.n_qubits
        theta_shape = (params.n_layers, n_qubits)

        self.concatenated = np.empty((length, hidden + params.input_dim))
        self.expectations = np.empty((length, len(GATES), n_qubits))
        self.jacobians_q = np.empty((length, len(GATES), n_qubits, n_qubits))
        self.jacobians_theta = np.empty((length, len(GATES), n_qubits) + theta_shape)
        self.gates = np.empty((length, len(GATES), hidden))
        self.previous_cells = np.empty((length, hidden))
        self.cells = np.empty((length, hidden))
        self.tanh_cells = np.empty((length, hidden))
        self.hidden_states = np.empty((length, hidden))

    @property
    def final_state(self) -> Tuple[np.ndarray, np.ndarray]:
        """Give the hidden and the cell state after the last step."""
        return self.hidden_states[-1].copy(), self.cells[-1].copy()


def _readout(params: QlstmParams, hidden_states: np.ndarray) -> np.ndarray:
    return hidden_states @ params.arrays["w_out"][0] + params.arrays["b_out"][0]


@icontract.require(lambda x: x.ndim == 2 and x.shape[0] > 0)
@icontract.require(lambda params, x: x.shape[1] == params.input_dim)
@icontract.ensure(lambda x, result: result[0].shape == (x.shape[0],))
def qlstm_forward(
    params: QlstmParams,
    x: np.ndarray,
    initial_state: Optional[Tuple[np.ndarray, np.ndarray]] = None,
) -> Tuple[np.ndarray, QlstmCache]:
    """
    Run the QLSTM over the window ``x`` and cache the circuit Jacobians for the backward pass.

    :param params: weights
    :param x: T × d inputs
    :param initial_state: hidden and cell state before the first step; zero if omitted
    :return: predictions, activation cache
    :raise errors.DivergenceError: if a prediction is not finite
    """
    length = x.shape[0]
    theta_shape = (params.n_layers, params.n_qubits)
    thetas = params.thetas

    if initial_state is None:
        h = np.zeros(params.hidden)
        c = np.zeros(params.hidden)
    else:
        h, c = initial_state

    cache = QlstmCache(params, length)

    for t in range(length):
        v = np.concatenate([h, x[t]])
        q = _project(params, v)

        # All the shifted evaluations of the four gates go into one batch.
        arguments = [_shifted_arguments(q, thetas[index]) for index in range(len(GATES))]
        batch_q = np.concatenate([argument[0] for argument in arguments])
        batch_theta = np.concatenate([argument[1] for argument in arguments])
        outputs = evaluate_circuits(batch_q, batch_theta).reshape(
            len(GATES), -1, params.n_qubits
        )

        for index in range(len(GATES)):
            expectation, jacobian_q, jacobian_theta = _split_shifted(
                outputs[index], params.n_qubits, theta_shape
            )
            cache.expectations[t, index] = expectation
            cache.jacobians_q[t, index] = jacobian_q
            cache.jacobians_theta[t, index] = jacobian_theta

        gates = _activate(_decode(params, cache.expectations[t]))
        f, i, g, o = gates

        cache.previous_cells[t] = c
        c = f * c + i * g
        tanh_c = np.tanh(c)
        h = o * tanh_c

        cache.concatenated[t] = v
        cache.gates[t] = gates
        cache.cells[t] = c
        cache.tanh_cells[t] = tanh_c
        cache.hidden_states[t] = h

    predictions = _readout(params, cache.hidden_states)
    if not np.all(np.isfinite(predictions)):
        raise errors.DivergenceError(
            "The QLSTM produced a non-finite prediction within a window of {} steps.".format(
                length
            )
        )

    return predictions, cache


@icontract.require(lambda cache, targets: cache.hidden_states.shape[0] == targets.shape[0])
@icontract.ensure(
    lambda params, result: all(
        result[name].shape == array.shape for name, array in params.arrays.items()
    )
)
def qlstm_backward(
    params: QlstmParams,
    cache: QlstmCache,
    targets: np.ndarray,
    predictions: Optional[np.ndarray] = None,
) -> Dict[str, np.ndarray]:
    """
    Back-propagate the loss (1/T)·Σ(ŷ_t − y_t)² through the window.

    The circuit gradients come from the Jacobians cached by the parameter-shift rule; the
    classical weights are differentiated exactly.

    :param params: weights of the forward pass
    :param cache: activations of the forward pass
    :param targets: targets of the window
    :param predictions: predictions of the forward pass; recomputed from the cache if omitted
    :return: gradients by the names of the weights
    """
    hidden = params.hidden
    length = targets.shape[0]
    w_in = params.arrays["w_in"]
    w_dec = params.arrays["w_dec"]
    w_out = params.arrays["w_out"][0]

    if predictions is None:
        predictions = _readout(params, cache.hidden_states)

    d_predictions = 2.0 * (predictions - targets) / length

    gradients = {name: np.zeros_like(array) for name, array in params.arrays.items()}
    d_thetas = np.zeros((len(GATES), params.n_layers, params.n_qubits))

    d_h_next = np.zeros(hidden)
    d_c_next = np.zeros(hidden)

    for t in reversed(range(length)):
        f, i, g, o = cache.gates[t]
        tanh_c = cache.tanh_cells[t]

        d_h = w_out * d_predictions[t] + d_h_next
        d_o = d_h * tanh_c
        d_c = d_h * o * (1.0 - tanh_c**2) + d_c_next

        d_pre = np.empty((len(GATES), hidden))
        d_pre[0] = d_c * cache.previous_cells[t] * f * (1.0 - f)
        d_pre[1] = d_c * g * i * (1.0 - i)
        d_pre[2] = d_c * i * (1.0 - g**2)
        d_pre[3] = d_o * o * (1.0 - o)

        gradients["w_dec"] += d_pre.T @ cache.expectations[t]
        if params.projection_bias:
            gradients["b_dec"] += d_pre.sum(axis=0)

        # d_expectations[k] = W_decᵀ · d_pre[k] for every gate k
        d_expectations = d_pre @ w_dec

        d_thetas += np.einsum("kj,kjls->kls", d_expectations, cache.jacobians_theta[t])
        d_q = np.einsum("kj,kji->i", d_expectations, cache.jacobians_q[t])

        gradients["w_in"] += np.outer(d_q, cache.concatenated[t])
        if params.projection_bias:
            gradients["b_in"] += d_q

        d_v = w_in.T @ d_q
        d_h_next = d_v[:hidden]
        d_c_next = d_c * f

    for index, gate in enumerate(GATES):
        gradients["theta_" + gate] = d_thetas[index]

    gradients["w_out"] = (d_predictions @ cache.hidden_states)[np.newaxis, :]
    gradients["b_out"] = np.array([d_predictions.sum()])

    return gradients


def _sequence_loss(params: QlstmParams, x: np.ndarray, targets: np.ndarray) -> float:
    return mse(_rollout(params, x), targets)


def _rollout(params: QlstmParams, x: np.ndarray) -> np.ndarray:
    """Predict every step of ``x`` from the zero state without computing any Jacobian."""
    h = np.zeros(params.hidden)
    c = np.zeros(params.hidden)
    hidden_states = np.empty((x.shape[0], params.hidden))
    for t in range(x.shape[0]):
        h, c = qlstm_cell(params, x[t], h, c)
        hidden_states[t] = h

    return _readout(params, hidden_states)


@icontract.require(
    lambda train, spec: spec.window == 0 or train.length > spec.window,
    "the train window is longer than the back-propagation window",
    error=errors.InvalidArgumentError,
)
@icontract.require(
    lambda hidden, n_qubits, n_layers: hidden >= 1 and n_qubits >= 1 and n_layers >= 1,
    error=errors.InvalidArgumentError,
)
@icontract.require(
    lambda max_steps: max_steps is None or max_steps > 1, error=errors.InvalidArgumentError
)
@icontract.ensure(lambda spec, result: len(result[2]) == spec.epochs + 1)
def train_qlstm(
    train: SeriesView,
    spec: TrainSpec,
    hidden: int = 4,
    n_qubits: int = 4,
    n_layers: int = 1,
    projection_bias: bool = True,
    max_steps: Optional[int] = None,
) -> Tuple[QlstmParams, float, List[float]]:
    """
    Train the QLSTM with Adam on the mean squared error.

    :param train: train window
    :param spec: training specification
    :param hidden: hidden size h
    :param n_qubits: number of qubits n_q per gate circuit
    :param n_layers: number of variational layers per gate circuit
    :param projection_bias: whether the input projection and the decoder have biases
    :param max_steps: if given, only the first ``max_steps`` steps of the train window are used
    :return:
        trained weights,
        wall-clock seconds of the training loop,
        loss curve (loss before training followed by the mean window loss of every epoch)
    :raise errors.DivergenceError: if the loss becomes non-finite; the last finite weights are attached
    """
    stop_step = train.length if max_steps is None else min(max_steps, train.length)
    x = model_inputs(train.u[:stop_step], train.y[:stop_step], spec.feed_y)
    targets = np.asarray(train.y[:stop_step], dtype=np.float64)

    params = init_qlstm_params(
        hidden, spec.input_dim, n_qubits, n_layers, spec.seed, projection_bias
    )
    loss_curve = [_sequence_loss(params, x, targets)]

    bounds = window_bounds(x.shape[0], spec.window)

    def fit() -> None:
        optimizer = Adam(params.arrays, spec)
        checkpoint = params.copy()

        for epoch in range(spec.epochs):
            state = None  # type: Optional[Tuple[np.ndarray, np.ndarray]]
            losses = []  # type: List[float]

            for start, stop in bounds:
                try:
                    predictions, cache = qlstm_forward(params, x[start:stop], state)
                except errors.DivergenceError as err:
                    raise errors.DivergenceError(
                        "The QLSTM diverged in epoch {}: {}".format(epoch + 1, err),
                        checkpoint=checkpoint,
                        epoch=epoch,
                    ) from err

                losses.append(mse(predictions, targets[start:stop]))
                gradients = qlstm_backward(params, cache, targets[start:stop], predictions)
                optimizer.step(params.arrays, gradients)
                state = cache.final_state

            epoch_loss = float(np.mean(losses))
            if not np.isfinite(epoch_loss) or not all_finite(params.arrays):
                raise errors.DivergenceError(
                    "The QLSTM loss became non-finite in epoch {}.".format(epoch + 1),
                    checkpoint=checkpoint,
                    epoch=epoch,
                )

            loss_curve.append(epoch_loss)
            checkpoint = params.copy()
            LOGGER.debug("QLSTM epoch %d/%d: loss %.6g", epoch + 1, spec.epochs, epoch_loss)

    _, seconds = time_block(fit)

    return params, seconds, loss_curve


@icontract.require(lambda u, warmup: 0 <= warmup < len(u))
@icontract.require(lambda params, feed_y: params.input_dim == (2 if feed_y else 1))
@icontract.ensure(lambda u, warmup, result: result.shape == (len(u) - warmup,))
def predict_qlstm(
    params: QlstmParams, u: np.ndarray, warmup: int = 0, feed_y: bool = False
) -> np.ndarray:
    """
    Roll the QLSTM out autoregressively over the inputs ``u``.

    :param params: trained weights
    :param u: inputs, starting with ``warmup`` steps which are run but not returned
    :param warmup: number of leading steps to run without returning their predictions
    :param feed_y: whether the model was trained with the previous target as input
    :return: predictions for ``u[warmup:]``
    """
    inputs = np.asarray(u, dtype=np.float64)
    if not feed_y:
        return _rollout(params, inputs.reshape(-1, 1))[warmup:]

    h = np.zeros(params.hidden)
    c = np.zeros(params.hidden)
    predictions = np.empty(inputs.shape[0])
    previous = 0.0
    for t in range(inputs.shape[0]):
        h, c = qlstm_cell(params, np.array([inputs[t], previous]), h, c)
        predictions[t] = _readout(params, h[np.newaxis, :])[0]
        previous = predictions[t]

    return predictions[warmup:]
