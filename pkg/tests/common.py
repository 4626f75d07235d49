"""Provide the oracles and helpers shared across the tests."""
import os
import unittest
from typing import Callable, Dict, List, Mapping, Sequence  # pylint: disable=unused-import

import numpy as np

import narmabench

#: Decorate the tests which take long and run only if NARMABENCH_SLOW is set
slow_test = unittest.skipUnless(
    narmabench.SLOW,
    "Set the environment variable NARMABENCH_SLOW to run the long-running tests.",
)


def reference_narma10(u: Sequence[float]) -> np.ndarray:
    """
    Re-simulate the NARMA-10 recursion with explicit zero padding of the history.

    The loop follows the textbook formula literally and shares no code with the generator.
    """
    length = len(u)
    padded_u = [0.0] * 9 + [float(value) for value in u]
    padded_y = [0.0] * 10 + [0.0] * length

    # padded_y[9 + t] holds y_t
    for t in range(length - 1):
        y_t = padded_y[9 + t]
        history = 0.0
        for i in range(10):
            history += padded_y[9 + t - i]

        padded_y[9 + t + 1] = (
            0.3 * y_t
            + 0.05 * y_t * history
            + 1.5 * padded_u[t] * padded_u[9 + t]
            + 0.1
        )

    return np.array(padded_y[9 : 9 + length])


def _bit(index: int, qubit: int) -> int:
    return (index >> qubit) & 1


def dense_one_qubit(gate: np.ndarray, target: int, n_qubits: int) -> np.ndarray:
    """Build the full matrix of a single-qubit gate element by element (qubit 0 is the least significant bit)."""
    dimension = 2**n_qubits
    matrix = np.zeros((dimension, dimension), dtype=np.complex128)
    for column in range(dimension):
        for row in range(dimension):
            if (row ^ column) & ~(1 << target):
                continue
            matrix[row, column] = gate[_bit(row, target), _bit(column, target)]

    return matrix


def dense_two_qubit(gate: np.ndarray, first: int, second: int, n_qubits: int) -> np.ndarray:
    """Build the full matrix of a two-qubit gate element by element; ``first`` is the more significant local bit."""
    dimension = 2**n_qubits
    mask = (1 << first) | (1 << second)
    matrix = np.zeros((dimension, dimension), dtype=np.complex128)
    for column in range(dimension):
        for row in range(dimension):
            if (row ^ column) & ~mask:
                continue
            local_row = 2 * _bit(row, first) + _bit(row, second)
            local_column = 2 * _bit(column, first) + _bit(column, second)
            matrix[row, column] = gate[local_row, local_column]

    return matrix


def random_amplitudes(rng: np.random.Generator, n_qubits: int) -> np.ndarray:
    """Draw a random normalized state vector."""
    dimension = 2**n_qubits
    amplitudes = rng.standard_normal(dimension) + 1j * rng.standard_normal(dimension)
    return amplitudes / np.linalg.norm(amplitudes)


def numerical_gradients(
    loss: Callable[[], float], arrays: Mapping[str, np.ndarray], step: float = 1e-6
) -> Dict[str, np.ndarray]:
    """
    Differentiate ``loss`` w.r.t. every entry of ``arrays`` by central differences.

    The arrays are perturbed in place and restored afterwards.
    """
    gradients = dict()  # type: Dict[str, np.ndarray]
    for name, array in arrays.items():
        gradient = np.zeros_like(array)
        flat = array.reshape(-1)
        flat_gradient = gradient.reshape(-1)
        for index in range(flat.shape[0]):
            original = flat[index]

            flat[index] = original + step
            plus = loss()
            flat[index] = original - step
            minus = loss()
            flat[index] = original

            flat_gradient[index] = (plus - minus) / (2.0 * step)

        gradients[name] = gradient

    return gradients


def slow_enabled_by_environment() -> bool:
    """Compute whether the slow contracts should be enabled from the environment directly."""
    return __debug__ and os.environ.get("NARMABENCH_SLOW", "") != ""
