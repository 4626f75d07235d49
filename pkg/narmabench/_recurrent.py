"""Train a single-layer LSTM regressor with exact back-propagation through time."""
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
from narmabench._seeding import Concern, generator_for
from narmabench._timeseries import SeriesView
from narmabench._timing import time_block

LOGGER = logging.getLogger(__name__)

#: Names of the gates in the order they are stacked
GATES = ("f", "i", "c", "o")


def sigmoid(value: np.ndarray) -> np.ndarray:
    """Compute the logistic sigmoid without overflowing for large negative inputs."""
    return 0.5 * (1.0 + np.tanh(0.5 * value))


@icontract.invariant(lambda self: self.hidden >= 1, error=errors.InvalidArgumentError)
class LstmConfig:
    """Configure the LSTM and its training."""

    def __init__(
        self,
        hidden: int = 128,
        forget_bias: bool = True,
        train: Optional[TrainSpec] = None,
    ) -> None:
        """
        Initialize with the given values.

        :param hidden: hidden size H
        :param forget_bias: if set, the forget-gate biases start at 1
        :param train: training specification; defaults to 20 epochs of Adam with η = 1e-3
        """
        self.hidden = hidden
        self.forget_bias = forget_bias
        self.train = train if train is not None else TrainSpec()

    def __repr__(self) -> str:
        """Represent with the constructor."""
        return "LstmConfig(hidden={}, forget_bias={}, train={!r})".format(
            self.hidden, self.forget_bias, self.train
        )


@icontract.invariant(
    lambda self: all(
        self.arrays["w_" + gate].shape == (self.hidden, self.hidden + self.input_dim)
        and self.arrays["b_" + gate].shape == (self.hidden,)
        for gate in GATES
    )
)
@icontract.invariant(
    lambda self: self.arrays["w_out"].shape == (1, self.hidden)
    and self.arrays["b_out"].shape == (1,)
)
class LstmParams:
    """
    Hold the weights of the LSTM.

    The arrays are kept by name (``w_f``, ``w_i``, ``w_c``, ``w_o``, ``b_f``, …, ``w_out``, ``b_out``)
    so that the optimizer and the gradients share the same keys.
    """

    def __init__(self, arrays: Dict[str, np.ndarray], hidden: int, input_dim: int) -> None:
        """
        Initialize with the given values.

        :param arrays: weights by name
        :param hidden: hidden size H
        :param input_dim: input dimension d_in
        """
        self.arrays = arrays
        self.hidden = hidden
        self.input_dim = input_dim

    def copy(self) -> "LstmParams":
        """Copy the weights deeply."""
        return LstmParams(
            arrays=copy_arrays(self.arrays), hidden=self.hidden, input_dim=self.input_dim
        )

    @property
    def stacked_weights(self) -> np.ndarray:
        """Stack the gate weights into a 4H × (H + d_in) matrix."""
        return np.concatenate([self.arrays["w_" + gate] for gate in GATES], axis=0)

    @property
    def stacked_biases(self) -> np.ndarray:
        """Stack the gate biases into a 4H vector."""
        return np.concatenate([self.arrays["b_" + gate] for gate in GATES], axis=0)


@icontract.require(lambda hidden, input_dim: hidden >= 1 and input_dim >= 1)
@icontract.ensure(
    lambda hidden, input_dim, result: sum(array.size for array in result.arrays.values())
    == count_lstm_params(hidden, input_dim)
)
def init_lstm_params(
    hidden: int, input_dim: int, seed: int, forget_bias: bool = True
) -> LstmParams:
    """
    Draw the initial weights uniformly from [−1/√H, 1/√H].

    :param hidden: hidden size H
    :param input_dim: input dimension d_in
    :param seed: master seed of the initialization
    :param forget_bias: if set, the forget-gate biases start at 1
    :return: initial weights
    """
    rng = generator_for(seed, Concern.LSTM)
    bound = 1.0 / np.sqrt(hidden)

    arrays = dict()  # type: Dict[str, np.ndarray]
    for gate in GATES:
        arrays["w_" + gate] = rng.uniform(-bound, bound, (hidden, hidden + input_dim))
        arrays["b_" + gate] = rng.uniform(-bound, bound, hidden)

    if forget_bias:
        arrays["b_f"] = np.ones(hidden)

    arrays["w_out"] = rng.uniform(-bound, bound, (1, hidden))
    arrays["b_out"] = rng.uniform(-bound, bound, 1)

    return LstmParams(arrays=arrays, hidden=hidden, input_dim=input_dim)


class LstmCache:
    """Keep the activations of a forward pass needed for the exact backward pass."""

    def __init__(self, hidden: int, length: int, input_dim: int) -> None:
        """Allocate the activations of ``length`` steps."""
        self.concatenated = np.empty((length, hidden + input_dim))
        self.gates = np.empty((length, 4 * hidden))
        self.cells = np.empty((length, hidden))
        self.previous_cells = np.empty((length, hidden))
        self.tanh_cells = np.empty((length, hidden))
        self.hidden_states = np.empty((length, hidden))

    @property
    def final_state(self) -> Tuple[np.ndarray, np.ndarray]:
        """Give the hidden and the cell state after the last step."""
        return self.hidden_states[-1].copy(), self.cells[-1].copy()


@icontract.require(lambda x: x.ndim == 2 and x.shape[0] > 0)
@icontract.require(lambda params, x: x.shape[1] == params.input_dim)
@icontract.ensure(lambda x, result: result[0].shape == (x.shape[0],))
def lstm_forward(
    params: LstmParams,
    x: np.ndarray,
    initial_state: Optional[Tuple[np.ndarray, np.ndarray]] = None,
) -> Tuple[np.ndarray, LstmCache]:
    """
    Run the LSTM over the window ``x`` and predict ŷ_t = W_out·h_t + b_out at every step.

    :param params: weights
    :param x: T × d_in inputs
    :param initial_state: hidden and cell state before the first step; zero if omitted
    :return: predictions, activation cache
    :raise errors.DivergenceError: if an activation is not finite
    """
    hidden = params.hidden
    length = x.shape[0]
    weights = params.stacked_weights
    biases = params.stacked_biases

    if initial_state is None:
        h = np.zeros(hidden)
        c = np.zeros(hidden)
    else:
        h, c = initial_state

    cache = LstmCache(hidden=hidden, length=length, input_dim=params.input_dim)

    for t in range(length):
        z = np.concatenate([h, x[t]])
        a = weights @ z + biases

        gates = np.empty(4 * hidden)
        gates[: 2 * hidden] = sigmoid(a[: 2 * hidden])
        gates[2 * hidden : 3 * hidden] = np.tanh(a[2 * hidden : 3 * hidden])
        gates[3 * hidden :] = sigmoid(a[3 * hidden :])

        f = gates[:hidden]
        i = gates[hidden : 2 * hidden]
        g = gates[2 * hidden : 3 * hidden]
        o = gates[3 * hidden :]

        cache.previous_cells[t] = c
        c = f * c + i * g
        tanh_c = np.tanh(c)
        h = o * tanh_c

        cache.concatenated[t] = z
        cache.gates[t] = gates
        cache.cells[t] = c
        cache.tanh_cells[t] = tanh_c
        cache.hidden_states[t] = h

    predictions = cache.hidden_states @ params.arrays["w_out"][0] + params.arrays["b_out"][0]

    if not np.all(np.isfinite(predictions)):
        raise errors.DivergenceError(
            "The LSTM produced a non-finite activation within a window of {} steps.".format(length)
        )

    return predictions, cache


def mse(predictions: np.ndarray, targets: np.ndarray) -> float:
    """Compute the mean squared error of one sequence."""
    return float(np.mean((predictions - targets) ** 2))


@icontract.require(lambda cache, targets: cache.hidden_states.shape[0] == targets.shape[0])
@icontract.ensure(
    lambda params, result: all(
        result[name].shape == array.shape for name, array in params.arrays.items()
    )
)
def lstm_backward(
    params: LstmParams, cache: LstmCache, targets: np.ndarray, predictions: Optional[np.ndarray] = None
) -> Dict[str, np.ndarray]:
    """
    Back-propagate the loss (1/T)·Σ(ŷ_t − y_t)² through the whole unrolled window.

    :param params: weights of the forward pass
    :param cache: activations of the forward pass
    :param targets: targets of the window
    :param predictions: predictions of the forward pass; recomputed from the cache if omitted
    :return: gradients by the names of the weights
    """
    hidden = params.hidden
    length = targets.shape[0]
    w_out = params.arrays["w_out"][0]
    weights = params.stacked_weights

    if predictions is None:
        predictions = cache.hidden_states @ w_out + params.arrays["b_out"][0]

    d_predictions = 2.0 * (predictions - targets) / length

    d_weights = np.zeros_like(weights)
    d_biases = np.zeros(4 * hidden)
    d_h_next = np.zeros(hidden)
    d_c_next = np.zeros(hidden)

    for t in reversed(range(length)):
        gates = cache.gates[t]
        f = gates[:hidden]
        i = gates[hidden : 2 * hidden]
        g = gates[2 * hidden : 3 * hidden]
        o = gates[3 * hidden :]
        tanh_c = cache.tanh_cells[t]

        d_h = w_out * d_predictions[t] + d_h_next
        d_o = d_h * tanh_c
        d_c = d_h * o * (1.0 - tanh_c**2) + d_c_next

        d_a = np.empty(4 * hidden)
        d_a[:hidden] = d_c * cache.previous_cells[t] * f * (1.0 - f)
        d_a[hidden : 2 * hidden] = d_c * g * i * (1.0 - i)
        d_a[2 * hidden : 3 * hidden] = d_c * i * (1.0 - g**2)
        d_a[3 * hidden :] = d_o * o * (1.0 - o)

        d_weights += np.outer(d_a, cache.concatenated[t])
        d_biases += d_a

        d_z = weights.T @ d_a
        d_h_next = d_z[:hidden]
        d_c_next = d_c * f

    gradients = dict()  # type: Dict[str, np.ndarray]
    for index, gate in enumerate(GATES):
        gradients["w_" + gate] = d_weights[index * hidden : (index + 1) * hidden]
        gradients["b_" + gate] = d_biases[index * hidden : (index + 1) * hidden]

    gradients["w_out"] = (d_predictions @ cache.hidden_states)[np.newaxis, :]
    gradients["b_out"] = np.array([d_predictions.sum()])

    return gradients


def _sequence_loss(params: LstmParams, x: np.ndarray, targets: np.ndarray) -> float:
    predictions, _ = lstm_forward(params, x)
    return mse(predictions, targets)


@icontract.require(
    lambda train, spec: spec.window == 0 or train.length > spec.window,
    "the train window is longer than the back-propagation window",
    error=errors.InvalidArgumentError,
)
@icontract.require(lambda hidden: hidden >= 1, error=errors.InvalidArgumentError)
@icontract.ensure(lambda spec, result: len(result[2]) == spec.epochs + 1)
def train_lstm(
    train: SeriesView, spec: TrainSpec, hidden: int = 128, forget_bias: bool = True
) -> Tuple[LstmParams, float, List[float]]:
    """
    Train the LSTM with Adam on the mean squared error.

    The previous targets are teacher-forced if ``spec.feed_y`` is set. The hidden state is carried
    across consecutive back-propagation windows and every window is one Adam update.

    :param train: train window
    :param spec: training specification
    :param hidden: hidden size H
    :param forget_bias: if set, the forget-gate biases start at 1
    :return:
        trained weights,
        wall-clock seconds of the training loop,
        loss curve (loss before training followed by the mean window loss of every epoch)
    :raise errors.DivergenceError: if the loss becomes non-finite; the last finite weights are attached
    """
    x = model_inputs(train.u, train.y, spec.feed_y)
    targets = np.asarray(train.y, dtype=np.float64)

    params = init_lstm_params(hidden, spec.input_dim, spec.seed, forget_bias=forget_bias)
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
                    predictions, cache = lstm_forward(params, x[start:stop], state)
                except errors.DivergenceError as err:
                    raise errors.DivergenceError(
                        "The LSTM diverged in epoch {}: {}".format(epoch + 1, err),
                        checkpoint=checkpoint,
                        epoch=epoch,
                    ) from err

                losses.append(mse(predictions, targets[start:stop]))
                gradients = lstm_backward(params, cache, targets[start:stop], predictions)
                optimizer.step(params.arrays, gradients)
                state = cache.final_state

            epoch_loss = float(np.mean(losses))
            if not np.isfinite(epoch_loss) or not all_finite(params.arrays):
                raise errors.DivergenceError(
                    "The LSTM loss became non-finite in epoch {}.".format(epoch + 1),
                    checkpoint=checkpoint,
                    epoch=epoch,
                )

            loss_curve.append(epoch_loss)
            checkpoint = params.copy()
            LOGGER.debug("LSTM epoch %d/%d: loss %.6g", epoch + 1, spec.epochs, epoch_loss)

    _, seconds = time_block(fit)

    return params, seconds, loss_curve


@icontract.require(lambda u, warmup: 0 <= warmup < len(u))
@icontract.require(lambda params, feed_y: params.input_dim == (2 if feed_y else 1))
@icontract.ensure(lambda u, warmup, result: result.shape == (len(u) - warmup,))
def predict_lstm(
    params: LstmParams, u: np.ndarray, warmup: int = 0, feed_y: bool = False
) -> np.ndarray:
    """
    Roll the LSTM out autoregressively over the inputs ``u``.

    The model conditions only on the inputs and its own state; with ``feed_y`` its own previous
    prediction takes the place of the previous target.

    :param params: trained weights
    :param u: inputs, starting with ``warmup`` steps which are run but not returned
    :param warmup: number of leading steps to run without returning their predictions
    :param feed_y: whether the model was trained with the previous target as input
    :return: predictions for ``u[warmup:]``
    """
    inputs = np.asarray(u, dtype=np.float64)

    if not feed_y:
        predictions, _ = lstm_forward(params, inputs.reshape(-1, 1))
        return predictions[warmup:]

    predictions = np.empty(inputs.shape[0])
    state = None  # type: Optional[Tuple[np.ndarray, np.ndarray]]
    previous = 0.0
    for t in range(inputs.shape[0]):
        step_prediction, cache = lstm_forward(
            params, np.array([[inputs[t], previous]]), state
        )
        predictions[t] = step_prediction[0]
        previous = predictions[t]
        state = cache.final_state

    return predictions[warmup:]


@icontract.require(lambda hidden, input_dim: hidden >= 1 and input_dim >= 1)
def count_lstm_params(hidden: int, input_dim: int = 1) -> int:
    """
    Count the weights and biases of the gates and the readout, 4·(H·(H+d_in) + H) + (H + 1).

    >>> count_lstm_params(1, 1)
    14
    >>> count_lstm_params(128, 1)
    66689
    """
    return 4 * (hidden * (hidden + input_dim) + hidden) + (hidden + 1)
