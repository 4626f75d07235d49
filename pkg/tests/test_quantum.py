# pylint: disable=missing-docstring
# pylint: disable=invalid-name

import math
import unittest

import icontract
import numpy as np
import scipy.stats

import narmabench
import narmabench._quantum
import tests.common


class TestGates(unittest.TestCase):
    def test_rx_zero_is_identity(self) -> None:
        np.testing.assert_allclose(np.eye(2), narmabench.rx(0.0), atol=1e-15)

    def test_rx_pi_flips(self) -> None:
        state = narmabench.apply_one_qubit(narmabench.zero_state(1), narmabench.rx(math.pi), 0)
        np.testing.assert_allclose([0.0, 1.0], state.probabilities(), atol=1e-15)

    def test_rz_keeps_probabilities(self) -> None:
        rng = np.random.default_rng(0)
        amplitudes = tests.common.random_amplitudes(rng, 3)
        state = narmabench.QuantumState(amplitudes=amplitudes, n_qubits=3)

        for target in range(3):
            rotated = narmabench.apply_one_qubit(state, narmabench.rz(0.7), target)
            np.testing.assert_allclose(state.probabilities(), rotated.probabilities(), atol=1e-12)

    def test_cnot_flips_target(self) -> None:
        state = narmabench.apply_cnot(narmabench.basis_state(2, 1), control=0, target=1)
        np.testing.assert_allclose([0.0, 0.0, 0.0, 1.0], state.probabilities(), atol=1e-15)

        untouched = narmabench.apply_cnot(narmabench.basis_state(2, 2), control=0, target=1)
        np.testing.assert_allclose([0.0, 0.0, 1.0, 0.0], untouched.probabilities(), atol=1e-15)

    def test_double_cnot_is_identity(self) -> None:
        rng = np.random.default_rng(1)
        state = narmabench.QuantumState(amplitudes=tests.common.random_amplitudes(rng, 3), n_qubits=3)

        twice = narmabench.apply_cnot(narmabench.apply_cnot(state, 2, 0), 2, 0)
        np.testing.assert_allclose(state.amplitudes, twice.amplitudes, atol=1e-14)

    def test_one_qubit_against_dense_oracle(self) -> None:
        rng = np.random.default_rng(2)
        gate = narmabench.rx(0.3) @ narmabench.rz(1.1)

        for n_qubits in [1, 2, 3, 4]:
            amplitudes = tests.common.random_amplitudes(rng, n_qubits)
            state = narmabench.QuantumState(amplitudes=amplitudes, n_qubits=n_qubits)
            for target in range(n_qubits):
                expected = tests.common.dense_one_qubit(gate, target, n_qubits) @ amplitudes
                got = narmabench.apply_one_qubit(state, gate, target)
                np.testing.assert_allclose(expected, got.amplitudes, atol=1e-12)

    def test_two_qubit_against_dense_oracle(self) -> None:
        rng = np.random.default_rng(3)
        gate = narmabench.haar_random_unitary(2, seed=5).matrix

        for n_qubits in [2, 3, 4]:
            amplitudes = tests.common.random_amplitudes(rng, n_qubits)
            state = narmabench.QuantumState(amplitudes=amplitudes, n_qubits=n_qubits)
            for first in range(n_qubits):
                for second in range(n_qubits):
                    if first == second:
                        continue

                    expected = (
                        tests.common.dense_two_qubit(gate, first, second, n_qubits) @ amplitudes
                    )
                    got = narmabench.apply_two_qubit(state, gate, first, second)
                    np.testing.assert_allclose(expected, got.amplitudes, atol=1e-12)

    def test_embed_against_dense_oracle(self) -> None:
        gate = narmabench.rx(0.4)
        np.testing.assert_allclose(
            tests.common.dense_one_qubit(gate, 1, 3),
            narmabench._quantum.embed(gate, [1], 3),
            atol=1e-15,
        )

    def test_batched_rx_against_single(self) -> None:
        rng = np.random.default_rng(4)
        amplitudes = np.stack([tests.common.random_amplitudes(rng, 3) for _ in range(5)])
        angles = rng.uniform(-3.0, 3.0, size=5)

        got = narmabench._quantum.apply_rx_batch(amplitudes, angles, qubit=2, n_qubits=3)
        for row in range(5):
            expected = tests.common.dense_one_qubit(narmabench.rx(angles[row]), 2, 3) @ amplitudes[row]
            np.testing.assert_allclose(expected, got[row], atol=1e-12)

    def test_target_out_of_range(self) -> None:
        with self.assertRaises(narmabench.InvalidArgumentError):
            narmabench.apply_one_qubit(narmabench.zero_state(2), narmabench.rx(0.1), 2)

    def test_non_unitary_gate(self) -> None:
        with self.assertRaises(narmabench.InvalidArgumentError):
            narmabench.apply_one_qubit(narmabench.zero_state(2), np.array([[1.0, 1.0], [0.0, 1.0]]), 0)

    def test_cnot_on_same_qubit(self) -> None:
        with self.assertRaises(narmabench.InvalidArgumentError):
            narmabench.apply_cnot(narmabench.zero_state(2), 1, 1)

    def test_unitary_size_mismatch(self) -> None:
        unitary = narmabench.haar_random_unitary(3, seed=0)
        with self.assertRaises(narmabench.InvalidArgumentError):
            narmabench.apply_unitary(narmabench.zero_state(2), unitary)


class TestState(unittest.TestCase):
    def test_unnormalized_state_rejected(self) -> None:
        with self.assertRaises(icontract.ViolationError):
            narmabench.QuantumState(amplitudes=np.array([1.0, 1.0]), n_qubits=1)

    def test_unitary_rejects_non_unitary(self) -> None:
        with self.assertRaises(icontract.ViolationError):
            narmabench.Unitary(matrix=2.0 * np.eye(2), n_qubits=1)

    def test_norm_preserved(self) -> None:
        state = narmabench.zero_state(4)
        for seed in range(5):
            state = narmabench.apply_unitary(state, narmabench.haar_random_unitary(4, seed=seed))
            state = narmabench.apply_one_qubit(state, narmabench.rx(0.3 * seed), seed % 4)

        self.assertAlmostEqual(1.0, float(np.sum(state.probabilities())), places=12)


class TestHaar(unittest.TestCase):
    def test_unitary_and_deterministic(self) -> None:
        for n_qubits in [1, 2, 4]:
            first = narmabench.haar_random_unitary(n_qubits, seed=42)
            second = narmabench.haar_random_unitary(n_qubits, seed=42)

            self.assertTrue(narmabench._quantum.is_unitary(first.matrix))
            np.testing.assert_array_equal(first.matrix, second.matrix)

        other = narmabench.haar_random_unitary(2, seed=43)
        self.assertFalse(
            np.allclose(narmabench.haar_random_unitary(2, seed=42).matrix, other.matrix)
        )

    def test_eigenphases_uniform(self) -> None:
        phases = []
        for seed in range(2000):
            eigenvalues = np.linalg.eigvals(narmabench.haar_random_unitary(2, seed=seed).matrix)
            phases.extend(np.angle(eigenvalues))

        _, p_value = scipy.stats.kstest(
            np.array(phases), scipy.stats.uniform(loc=-math.pi, scale=2.0 * math.pi).cdf
        )
        self.assertGreater(p_value, 0.01)


class TestMeasurement(unittest.TestCase):
    def test_bell_state_statistics(self) -> None:
        amplitudes = np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2.0)
        state = narmabench.QuantumState(amplitudes=amplitudes, n_qubits=2)

        rng = np.random.default_rng(0)
        zeros = 0
        for _ in range(10000):
            bits, collapsed = narmabench.measure_all(state, rng)

            self.assertIn(bits, [(0, 0), (1, 1)])
            expected_index = narmabench._quantum.bits_to_index(bits)
            self.assertEqual(1.0, collapsed.probabilities()[expected_index])

            if bits == (0, 0):
                zeros += 1

        self.assertGreaterEqual(zeros / 10000, 0.47)
        self.assertLessEqual(zeros / 10000, 0.53)

    def test_basis_state_is_measured_with_certainty(self) -> None:
        # Index 6 sets qubits 1 and 2.
        bits, _ = narmabench.measure_all(narmabench.basis_state(3, 6), seed=0)
        self.assertEqual((0, 1, 1), bits)


class TestExpectations(unittest.TestCase):
    def test_zero_state(self) -> None:
        np.testing.assert_allclose([1.0, 1.0, 1.0], narmabench.pauli_z_expectations(narmabench.zero_state(3)))

    def test_basis_state(self) -> None:
        np.testing.assert_allclose(
            [-1.0, 1.0, -1.0], narmabench.pauli_z_expectations(narmabench.basis_state(3, 5))
        )

    def test_rotated_qubit(self) -> None:
        theta = 0.8
        state = narmabench.apply_one_qubit(narmabench.zero_state(2), narmabench.rx(theta), 1)
        np.testing.assert_allclose(
            [1.0, math.cos(theta)], narmabench.pauli_z_expectations(state), atol=1e-12
        )


if __name__ == "__main__":
    unittest.main()
