"""Share the training specification and the Adam optimizer between the recurrent models."""
from typing import Dict, List, Mapping, Tuple  # pylint: disable=unused-import

import icontract
import numpy as np

from narmabench import errors


@icontract.invariant(lambda self: self.epochs >= 0, error=errors.InvalidArgumentError)
@icontract.invariant(
    lambda self: self.learning_rate > 0.0, error=errors.InvalidArgumentError
)
@icontract.invariant(
    lambda self: 0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0 and self.epsilon > 0.0,
    error=errors.InvalidArgumentError,
)
@icontract.invariant(lambda self: self.window >= 0, error=errors.InvalidArgumentError)
class TrainSpec:
    """Specify how a recurrent model is trained."""

    def __init__(
        self,
        epochs: int = 20,
        learning_rate: float = 1e-3,
        beta1: float = 0.9,
        beta2: float = 0.999,
        epsilon: float = 1e-8,
        window: int = 20,
        feed_y: bool = False,
        seed: int = 0,
    ) -> None:
        """
        Initialize with the given values.

        :param epochs: number of passes over the train window
        :param learning_rate: step size η of Adam
        :param beta1: decay of the first-moment estimate
        :param beta2: decay of the second-moment estimate
        :param epsilon: numerical guard of Adam
        :param window:
            length of the truncated back-propagation window; the hidden state is carried across
            consecutive windows. 0 unrolls the whole sequence.
        :param feed_y: if set, the previous target is appended to the input (teacher-forced in training)
        :param seed: master seed of the initialization
        """
        self.epochs = epochs
        self.learning_rate = float(learning_rate)
        self.beta1 = float(beta1)
        self.beta2 = float(beta2)
        self.epsilon = float(epsilon)
        self.window = window
        self.feed_y = feed_y
        self.seed = seed

    @property
    def input_dim(self) -> int:
        """Count the input channels (u, and y_{t−1} if fed)."""
        return 2 if self.feed_y else 1

    def __repr__(self) -> str:
        """Represent with the constructor."""
        return (
            "TrainSpec(epochs={}, learning_rate={}, beta1={}, beta2={}, epsilon={}, "
            "window={}, feed_y={}, seed={})"
        ).format(
            self.epochs,
            self.learning_rate,
            self.beta1,
            self.beta2,
            self.epsilon,
            self.window,
            self.feed_y,
            self.seed,
        )


@icontract.require(lambda length: length >= 1)
@icontract.require(lambda window: window >= 0)
@icontract.ensure(lambda length, result: result[0][0] == 0 and result[-1][1] == length)
def window_bounds(length: int, window: int) -> List[Tuple[int, int]]:
    """
    Split ``length`` time steps into consecutive windows of at most ``window`` steps.

    >>> window_bounds(5, 2)
    [(0, 2), (2, 4), (4, 5)]
    >>> window_bounds(5, 0)
    [(0, 5)]
    """
    if window == 0 or window >= length:
        return [(0, length)]

    return [(start, min(start + window, length)) for start in range(0, length, window)]


def model_inputs(u: np.ndarray, y: np.ndarray, feed_y: bool) -> np.ndarray:
    """
    Stack the input channels of a recurrent model: u_t and, if ``feed_y``, the previous target y_{t−1}.

    :param u: inputs
    :param y: targets used for teacher forcing (ignored unless ``feed_y``)
    :param feed_y: whether to append the previous target
    :return: T × d_in inputs
    """
    if not feed_y:
        return u.reshape(-1, 1).astype(np.float64)

    previous = np.concatenate([[0.0], y[:-1]])
    return np.stack([u, previous], axis=1).astype(np.float64)


class Adam:
    """Update the parameter arrays in place with the Adam rule."""

    def __init__(self, arrays: Mapping[str, np.ndarray], spec: TrainSpec) -> None:
        """
        Initialize the moment estimates with zeros.

        :param arrays: parameter arrays by name
        :param spec: learning rate and decays
        """
        self.spec = spec
        self.first = {name: np.zeros_like(array) for name, array in arrays.items()}
        self.second = {name: np.zeros_like(array) for name, array in arrays.items()}
        self.iteration = 0

    def step(
        self, arrays: Mapping[str, np.ndarray], gradients: Mapping[str, np.ndarray]
    ) -> None:
        """Apply one update to ``arrays`` given the ``gradients`` with the same names."""
        self.iteration += 1
        spec = self.spec
        correction1 = 1.0 - spec.beta1**self.iteration
        correction2 = 1.0 - spec.beta2**self.iteration

        for name, array in arrays.items():
            gradient = gradients[name]
            self.first[name] = spec.beta1 * self.first[name] + (1.0 - spec.beta1) * gradient
            self.second[name] = spec.beta2 * self.second[name] + (1.0 - spec.beta2) * gradient**2

            first_hat = self.first[name] / correction1
            second_hat = self.second[name] / correction2
            array -= spec.learning_rate * first_hat / (np.sqrt(second_hat) + spec.epsilon)


def copy_arrays(arrays: Mapping[str, np.ndarray]) -> Dict[str, np.ndarray]:
    """Copy every array deeply."""
    return {name: array.copy() for name, array in arrays.items()}


def all_finite(arrays: Mapping[str, np.ndarray]) -> bool:
    """Check that no array contains a NaN or an infinity."""
    return all(bool(np.all(np.isfinite(array))) for array in arrays.values())
