# pylint: disable=missing-docstring
# pylint: disable=invalid-name

import math
import pathlib
import tempfile
import unittest
from typing import List, Sequence  # pylint: disable=unused-import

import numpy as np

import narmabench
import narmabench._qrc
import narmabench._quantum
from narmabench._seeding import Concern
import tests.common


def dense_step(
    amplitudes: np.ndarray,
    u_t: float,
    prev_bits: Sequence[int],
    reservoir: narmabench.Unitary,
    config: narmabench.QrcConfig,
) -> np.ndarray:
    n_qubits = config.n_qubits
    total = tests.common.dense_two_qubit(
        narmabench.input_block(u_t, config.a_in).matrix, 0, 1, n_qubits
    )
    for bit, (first, second) in zip(prev_bits, config.feedback_pairs):
        block = narmabench.feedback_block(bit, config.a_fb).matrix
        total = tests.common.dense_two_qubit(block, first, second, n_qubits) @ total

    return reservoir.matrix @ total @ amplitudes


class TestBlocks(unittest.TestCase):
    def test_zero_angle_is_identity(self) -> None:
        np.testing.assert_allclose(np.eye(4), narmabench.input_block(0.3, 0.0).matrix, atol=1e-15)
        np.testing.assert_allclose(np.eye(4), narmabench.input_block(0.0, 1.0).matrix, atol=1e-15)
        np.testing.assert_allclose(np.eye(4), narmabench.feedback_block(0, 0.0).matrix, atol=1e-15)

    def test_feedback_sign(self) -> None:
        a_fb = 2.2
        np.testing.assert_allclose(
            narmabench._qrc.block_matrix(a_fb), narmabench.feedback_block(0, a_fb).matrix
        )
        np.testing.assert_allclose(
            narmabench._qrc.block_matrix(-a_fb), narmabench.feedback_block(1, a_fb).matrix
        )

    def test_block_is_unitary(self) -> None:
        for alpha in [-2.2, 0.1, 0.5, 3.0]:
            self.assertTrue(narmabench._quantum.is_unitary(narmabench._qrc.block_matrix(alpha)))

    def test_block_on_zero_state(self) -> None:
        # The CNOTs leave |00⟩ and |01⟩ alone and the phase of R_z only depends on the second qubit.
        alpha = 0.6
        amplitudes = narmabench._qrc.block_matrix(alpha) @ np.array([1.0, 0.0, 0.0, 0.0])

        probabilities = np.abs(amplitudes) ** 2
        cos2 = math.cos(alpha / 2.0) ** 2
        sin2 = math.sin(alpha / 2.0) ** 2
        np.testing.assert_allclose([cos2 * cos2, cos2 * sin2, sin2 * cos2, sin2 * sin2], probabilities, atol=1e-12)

    def test_invalid_bit(self) -> None:
        with self.assertRaises(narmabench.InvalidArgumentError):
            narmabench.feedback_block(2, 1.0)


class TestConfig(unittest.TestCase):
    def test_defaults(self) -> None:
        config = narmabench.QrcConfig()

        self.assertEqual(4, config.n_qubits)
        self.assertEqual(1.0, config.a_in)
        self.assertEqual(2.2, config.a_fb)
        self.assertEqual(1000, config.n_shots)
        self.assertEqual([(0, 1), (1, 2), (2, 3), (3, 0)], config.feedback_pairs)

    def test_invalid(self) -> None:
        with self.assertRaises(narmabench.InvalidArgumentError):
            narmabench.QrcConfig(n_qubits=1)

        with self.assertRaises(narmabench.InvalidArgumentError):
            narmabench.QrcConfig(n_shots=0)

        with self.assertRaises(narmabench.InvalidArgumentError):
            narmabench.QrcConfig(a_in=float("nan"))

        with self.assertRaises(narmabench.InvalidArgumentError):
            narmabench.QrcConfig(washout=-1)

        with self.assertRaises(narmabench.InvalidArgumentError):
            narmabench.QrcConfig(n_qubits=3, feedback_pairs=[(0, 1), (1, 2)])

        with self.assertRaises(narmabench.InvalidArgumentError):
            narmabench.QrcConfig(n_qubits=2, feedback_pairs=[(0, 0), (1, 0)])


class TestStep(unittest.TestCase):
    def test_against_dense_oracle(self) -> None:
        rng = np.random.default_rng(0)
        for n_qubits in [2, 3, 4]:
            config = narmabench.QrcConfig(n_qubits=n_qubits, a_in=1.3, a_fb=0.7)
            reservoir = narmabench.haar_random_unitary(n_qubits, seed=n_qubits)

            amplitudes = tests.common.random_amplitudes(rng, n_qubits)
            state = narmabench.QuantumState(amplitudes=amplitudes, n_qubits=n_qubits)
            prev_bits = [int(bit) for bit in rng.integers(0, 2, size=n_qubits)]

            got = narmabench.qrc_step(state, 0.27, prev_bits, reservoir, config)
            expected = dense_step(amplitudes, 0.27, prev_bits, reservoir, config)

            np.testing.assert_allclose(expected, got.amplitudes, atol=1e-12)

    def test_dimension_mismatch(self) -> None:
        config = narmabench.QrcConfig(n_qubits=3)
        with self.assertRaises(narmabench.InvalidArgumentError):
            narmabench.qrc_step(
                narmabench.zero_state(3),
                0.1,
                [0, 0, 0],
                narmabench.haar_random_unitary(2, seed=0),
                config,
            )


class TestRunReservoir(unittest.TestCase):
    def test_against_per_shot_loop(self) -> None:
        config = narmabench.QrcConfig(n_qubits=3, n_shots=5, seed=3)
        u = narmabench.generate_narma10(length=12, seed=0).u[:8]
        reservoir = narmabench.haar_random_unitary(3, seed=config.seed)

        signs = narmabench._quantum.z_signs(3)
        expected = np.zeros((len(u), 3))
        for shot in range(config.n_shots):
            uniforms = narmabench.generator_for(config.seed, Concern.SHOTS, shot).random(len(u))
            state = narmabench.zero_state(3)
            prev_bits = [0, 0, 0]  # type: List[int]
            for t, u_t in enumerate(u):
                evolved = narmabench.qrc_step(state, float(u_t), prev_bits, reservoir, config)
                index = int(
                    narmabench._quantum.sample_outcomes(
                        evolved.probabilities()[np.newaxis, :], uniforms[t : t + 1]
                    )[0]
                )
                expected[t] += signs[index] / config.n_shots

                prev_bits = [int(bit) for bit in narmabench._quantum.outcome_bits(3)[index]]
                state = narmabench.basis_state(3, index)

        trace = narmabench.run_qrc(u, config)
        np.testing.assert_allclose(expected, trace.features, atol=1e-12)

    def test_identity_reservoir_without_rotations(self) -> None:
        config = narmabench.QrcConfig(n_qubits=3, a_in=0.0, a_fb=0.0, n_shots=10)
        identity = narmabench.Unitary(matrix=np.eye(8), n_qubits=3)

        for mode in narmabench.Mode:
            trace = narmabench.run_qrc(np.full(6, 0.4), config, mode=mode, reservoir=identity)
            np.testing.assert_allclose(np.ones((6, 3)), trace.features, atol=1e-12)

    def test_features_in_range_and_shape(self) -> None:
        config = narmabench.QrcConfig(n_qubits=4, n_shots=50)
        trace = narmabench.run_qrc(narmabench.generate_narma10(length=30, seed=1).u, config)

        self.assertEqual((30, 4), trace.features.shape)
        self.assertTrue(np.all(np.abs(trace.features) <= 1.0))

        # The averages of ±1 over 50 shots are multiples of 1/25.
        np.testing.assert_allclose(
            np.round(trace.features * 25.0), trace.features * 25.0, atol=1e-9
        )

    def test_recorded_bits_agree_with_features(self) -> None:
        config = narmabench.QrcConfig(n_qubits=3, n_shots=20, seed=4)
        trace = narmabench.run_qrc(
            narmabench.generate_narma10(length=15, seed=2).u, config, record_bits=True
        )

        assert trace.per_shot_bits is not None
        self.assertEqual((15, 20, 3), trace.per_shot_bits.shape)
        np.testing.assert_allclose(
            (1.0 - 2.0 * trace.per_shot_bits).mean(axis=1), trace.features, atol=1e-12
        )

    def test_shots_converge_to_ensemble(self) -> None:
        u = narmabench.generate_narma10(length=20, seed=3).u
        config = narmabench.QrcConfig(n_qubits=3, n_shots=4000, seed=1)

        shots = narmabench.run_qrc(u, config, mode=narmabench.Mode.SHOTS)
        ensemble = narmabench.run_qrc(u, config, mode=narmabench.Mode.ENSEMBLE)

        self.assertLessEqual(
            float(np.mean(np.abs(shots.features - ensemble.features))),
            3.0 / math.sqrt(config.n_shots),
        )

    def test_exact_equals_ensemble_at_first_step(self) -> None:
        u = narmabench.generate_narma10(length=20, seed=3).u[:5]
        config = narmabench.QrcConfig(n_qubits=3, n_shots=7, seed=2)

        exact = narmabench.run_qrc(u, config, mode=narmabench.Mode.EXACT)
        ensemble = narmabench.run_qrc(u, config, mode=narmabench.Mode.ENSEMBLE)

        np.testing.assert_allclose(ensemble.features[0], exact.features[0], atol=1e-12)

    def test_prefix(self) -> None:
        u = narmabench.generate_narma10(length=20, seed=5).u
        config = narmabench.QrcConfig(n_qubits=3, n_shots=30, seed=6)

        short = narmabench.run_qrc(u[:10], config)
        long = narmabench.run_qrc(u, config)

        np.testing.assert_array_equal(short.features, long.features[:10])

    def test_deterministic_and_default_reservoir(self) -> None:
        u = narmabench.generate_narma10(length=20, seed=5).u
        config = narmabench.QrcConfig(n_qubits=3, n_shots=30, seed=8)

        first = narmabench.run_qrc(u, config)
        second = narmabench.run_qrc(
            u, config, reservoir=narmabench.haar_random_unitary(3, seed=8)
        )

        np.testing.assert_array_equal(first.features, second.features)

    def test_fading_memory(self) -> None:
        u = narmabench.generate_narma10(length=200, seed=0).u

        for seed in range(5):
            config = narmabench.QrcConfig(seed=seed)

            from_zeros = narmabench.run_qrc(u, config, initial_bits=[0, 0, 0, 0])
            from_ones = narmabench.run_qrc(u, config, initial_bits=[1, 1, 1, 1])

            difference = np.abs(from_zeros.features - from_ones.features)
            first = float(np.mean(difference[:100]))
            last = float(np.mean(difference[-100:]))

            self.assertGreater(first, 0.0, msg="seed {}".format(seed))
            self.assertLess(last, first, msg="seed {}".format(seed))

    def test_ensemble_forgets_the_initial_bits(self) -> None:
        u = narmabench.generate_narma10(length=60, seed=0).u
        config = narmabench.QrcConfig(n_qubits=3, seed=0)

        from_zeros = narmabench.run_qrc(
            u, config, mode=narmabench.Mode.ENSEMBLE, initial_bits=[0, 0, 0]
        )
        from_ones = narmabench.run_qrc(
            u, config, mode=narmabench.Mode.ENSEMBLE, initial_bits=[1, 1, 1]
        )

        self.assertFalse(np.allclose(from_zeros.features[0], from_ones.features[0]))
        np.testing.assert_allclose(from_zeros.features[-1], from_ones.features[-1], atol=1e-6)

    def test_doubling_the_shots_shrinks_the_standard_error(self) -> None:
        u = narmabench.generate_narma10(length=30, seed=4).u
        reservoir = narmabench.haar_random_unitary(4, seed=0)
        n_shots = 100

        def repeated(shots: int) -> np.ndarray:
            # The shot streams depend on the seed; the reservoir is fixed.
            return np.stack(
                [
                    narmabench.run_qrc(
                        u,
                        narmabench.QrcConfig(n_shots=shots, seed=seed),
                        reservoir=reservoir,
                    ).features
                    for seed in range(20)
                ]
            )

        single = repeated(n_shots)
        double = repeated(2 * n_shots)

        ratio = math.sqrt(
            float(np.mean(np.var(double, axis=0, ddof=1)))
            / float(np.mean(np.var(single, axis=0, ddof=1)))
        )
        self.assertAlmostEqual(1.0 / math.sqrt(2.0), ratio, delta=0.1)

        # The first half of the doubled shots replays the single run.
        self.assertLessEqual(
            float(np.mean(np.abs(double - single))), 3.0 / math.sqrt(n_shots)
        )

    def test_initial_bits_of_wrong_length(self) -> None:
        with self.assertRaises(narmabench.InvalidArgumentError):
            narmabench.run_qrc([0.1, 0.2], narmabench.QrcConfig(n_qubits=3), initial_bits=[0, 1])


class TestNarma10(unittest.TestCase):
    @staticmethod
    def nrmses(mode: narmabench.Mode) -> List[float]:
        config = narmabench.BenchConfig(
            models=["qrc"],
            qrc_mode=mode,
            memory_capacity=narmabench.MemoryCapacitySpec(enabled=False),
        )
        series = narmabench.generate_narma10(config.series.total, config.seed)

        return [
            narmabench.run_model(config, "qrc", series, repeat=repeat).record.nrmse
            for repeat in range(5)
        ]

    @tests.common.slow_test
    def test_shots_beat_the_constant_mean(self) -> None:
        nrmses = self.nrmses(narmabench.Mode.SHOTS)

        self.assertTrue(all(value < 1.0 for value in nrmses), nrmses)

    @tests.common.slow_test
    def test_ensemble_on_published_configuration(self) -> None:
        nrmses = self.nrmses(narmabench.Mode.ENSEMBLE)

        self.assertLessEqual(float(np.median(nrmses)), 0.85)


class TestTraceCsv(unittest.TestCase):
    def test_write(self) -> None:
        config = narmabench.QrcConfig(n_qubits=2, n_shots=4)
        trace = narmabench.run_qrc([0.1, 0.2, 0.3], config)

        with tempfile.TemporaryDirectory() as tmp_dir:
            path = pathlib.Path(tmp_dir) / "trace.csv"
            narmabench.write_trace_csv(trace, path)
            lines = path.read_text(encoding="utf-8").splitlines()

        self.assertEqual("t,z0,z1", lines[0])
        self.assertEqual(4, len(lines))
        self.assertTrue(lines[1].startswith("0,"))


if __name__ == "__main__":
    unittest.main()
