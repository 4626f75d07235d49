# pylint: disable=missing-docstring
# pylint: disable=invalid-name

import unittest

import numpy as np

import narmabench


class TestFit(unittest.TestCase):
    def test_identity_design(self) -> None:
        features = narmabench.ReservoirFeatures(matrix=np.eye(3), has_bias=False)
        targets = np.array([1.5, -2.0, 0.25])

        readout = narmabench.fit_readout(features, targets, ridge=0.0)

        np.testing.assert_allclose(targets, readout.weights, atol=1e-12)
        self.assertEqual(3, readout.parameter_count)

    def test_single_feature_closed_form(self) -> None:
        x = np.array([1.0, 2.0, 3.0, 4.0])
        y = np.array([0.5, 1.0, 2.0, 2.5])
        features = narmabench.ReservoirFeatures(matrix=x[:, np.newaxis], has_bias=False)

        for ridge in [0.0, 0.5, 3.0]:
            readout = narmabench.fit_readout(features, y, ridge=ridge)
            self.assertAlmostEqual(float(x @ y / (x @ x + ridge)), float(readout.weights[0]), places=12)

    def test_ridge_shrinks_the_weights(self) -> None:
        rng = np.random.default_rng(0)
        features = narmabench.with_bias(rng.standard_normal((50, 4)))
        targets = rng.standard_normal(50)

        norms = [
            float(np.linalg.norm(narmabench.fit_readout(features, targets, ridge=ridge).weights))
            for ridge in [0.0, 0.1, 1.0, 10.0, 100.0]
        ]

        for smaller, larger in zip(norms[1:], norms[:-1]):
            self.assertLess(smaller, larger)

    def test_normal_equations(self) -> None:
        rng = np.random.default_rng(1)
        design = rng.standard_normal((40, 6))
        targets = rng.standard_normal(40)
        ridge = 0.3

        readout = narmabench.fit_readout(
            narmabench.ReservoirFeatures(matrix=design, has_bias=False), targets, ridge=ridge
        )

        residual = (design.T @ design + ridge * np.eye(6)) @ readout.weights - design.T @ targets
        self.assertLess(float(np.max(np.abs(residual))), 1e-10)

    def test_washout_rows_are_ignored(self) -> None:
        rng = np.random.default_rng(2)
        states = rng.standard_normal((30, 3))
        targets = rng.standard_normal(30)

        garbage = targets.copy()
        garbage[:10] = 1e6

        with_washout = narmabench.fit_readout(narmabench.with_bias(states, washout=10), garbage, ridge=0.0)
        sliced = narmabench.fit_readout(narmabench.with_bias(states[10:]), targets[10:], ridge=0.0)

        np.testing.assert_allclose(sliced.weights, with_washout.weights, atol=1e-10)

    def test_multiple_targets(self) -> None:
        rng = np.random.default_rng(3)
        features = narmabench.with_bias(rng.standard_normal((25, 3)))
        targets = rng.standard_normal((25, 4))

        readout = narmabench.fit_readout(features, targets, ridge=1e-3)

        self.assertEqual((4, 4), readout.weights.shape)
        for k in range(4):
            single = narmabench.fit_readout(features, targets[:, k], ridge=1e-3)
            np.testing.assert_allclose(single.weights, readout.weights[:, k], atol=1e-10)

    def test_exact_linear_targets(self) -> None:
        rng = np.random.default_rng(4)
        states = rng.standard_normal((20, 2))
        targets = 2.0 * states[:, 0] - 0.5 * states[:, 1] + 0.25

        readout = narmabench.fit_readout(narmabench.with_bias(states), targets, ridge=0.0)

        np.testing.assert_allclose([2.0, -0.5, 0.25], readout.weights, atol=1e-10)
        np.testing.assert_allclose(
            targets, narmabench.apply_readout(readout, narmabench.with_bias(states)), atol=1e-10
        )

    def test_rank_deficient_design(self) -> None:
        column = np.arange(10, dtype=np.float64)
        features = narmabench.ReservoirFeatures(
            matrix=np.stack([column, column], axis=1), has_bias=False
        )

        with self.assertWarns(RuntimeWarning):
            with self.assertLogs("narmabench._readout", "WARNING"):
                readout = narmabench.fit_readout(features, 2.0 * column, ridge=0.0)

        # The minimum-norm solution splits the weight evenly between the duplicates.
        np.testing.assert_allclose([1.0, 1.0], readout.weights, atol=1e-8)


class TestErrors(unittest.TestCase):
    def test_misaligned_targets(self) -> None:
        with self.assertRaises(narmabench.InvalidArgumentError):
            narmabench.fit_readout(narmabench.with_bias(np.zeros((10, 2))), np.zeros(9))

    def test_too_few_rows(self) -> None:
        with self.assertRaises(narmabench.InvalidArgumentError):
            narmabench.fit_readout(narmabench.with_bias(np.ones((5, 3)), washout=3), np.zeros(5))

    def test_negative_ridge(self) -> None:
        with self.assertRaises(narmabench.InvalidArgumentError):
            narmabench.fit_readout(narmabench.with_bias(np.eye(6)[:, :3]), np.zeros(6), ridge=-1.0)

    def test_width_mismatch(self) -> None:
        readout = narmabench.fit_readout(narmabench.with_bias(np.eye(6)[:, :3]), np.arange(6.0), ridge=0.0)

        with self.assertRaises(narmabench.InvalidArgumentError):
            narmabench.apply_readout(readout, narmabench.with_bias(np.zeros((3, 2))))


if __name__ == "__main__":
    unittest.main()
