# pylint: disable=missing-docstring

import pathlib
import tempfile
import textwrap
import unittest

import narmabench
from narmabench._config import config_hash, seed_from_environment


class TestDefaults(unittest.TestCase):
    def test_empty_document(self) -> None:
        for text in ["", "# nothing configured\n", "null\n"]:
            config = narmabench.loads_config(text, environ={})

            self.assertEqual(0, config.seed)
            self.assertEqual(["esn", "qrc", "lstm", "qlstm"], config.models)
            self.assertEqual({"esn": 3, "qrc": 3, "lstm": 1, "qlstm": 1}, config.repeats)
            self.assertEqual(2000, config.series.n_train)
            self.assertEqual(300, config.esn.n_nodes)
            self.assertEqual(1000, config.qrc.n_shots)
            self.assertEqual(narmabench.Mode.SHOTS, config.qrc_mode)
            self.assertEqual(128, config.lstm.hidden)
            self.assertEqual(4, config.qlstm.hidden)
            self.assertTrue(config.memory_capacity.enabled)
            self.assertEqual(narmabench.BenchConfig(), config)

    def test_partial_blocks_keep_defaults(self) -> None:
        config = narmabench.loads_config(
            textwrap.dedent(
                """\
                seed: 5
                esn:
                  n_nodes: 50
                qrc:
                  mode: ensemble
                  feedback_pairs: [[0, 2], [1, 3], [2, 0], [3, 1]]
                lstm:
                  epochs: 3
                  feed_y: true
                """
            ),
            environ={},
        )

        self.assertEqual(50, config.esn.n_nodes)
        self.assertEqual(0.9, config.esn.spectral_radius)
        self.assertEqual(5, config.esn.seed)
        self.assertEqual(narmabench.Mode.ENSEMBLE, config.qrc_mode)
        self.assertEqual([(0, 2), (1, 3), (2, 0), (3, 1)], config.qrc.feedback_pairs)
        self.assertEqual(3, config.lstm.train.epochs)
        self.assertTrue(config.lstm.train.feed_y)
        self.assertEqual(5, config.lstm.train.seed)
        self.assertEqual(5, config.qlstm.train.seed)


class TestRoundTrip(unittest.TestCase):
    def test_dump_and_load(self) -> None:
        config = narmabench.BenchConfig(
            seed=7,
            models=["esn", "qrc"],
            repeats={"esn": 2, "qrc": 1},
            ridge=1e-6,
            series=narmabench.SplitSpec(n_train=500, n_eval=200, washout=20),
            esn=narmabench.EsnConfig(n_nodes=40),
            qrc=narmabench.QrcConfig(n_qubits=3, n_shots=50),
            qrc_mode=narmabench.Mode.EXACT,
            qlstm=narmabench.QlstmConfig(max_steps=300),
            memory_capacity=narmabench.MemoryCapacitySpec(k_max=10, probe_length=500),
            sustainability_weights={
                "rmse": 0.4,
                "nrmse": 0.4,
                "train_time_s": 0.1,
                "trainable_params": 0.1,
            },
        )

        loaded = narmabench.loads_config(narmabench.dump_config(config), environ={})

        self.assertEqual(config, loaded)
        self.assertEqual(config_hash(config), config_hash(loaded))

    def test_hash_depends_on_values(self) -> None:
        first = narmabench.BenchConfig(seed=1)
        second = narmabench.BenchConfig(seed=2)

        self.assertEqual(64, len(config_hash(first)))
        self.assertNotEqual(config_hash(first), config_hash(second))

    def test_load_from_file(self) -> None:
        with tempfile.TemporaryDirectory() as tmp_dir:
            path = pathlib.Path(tmp_dir) / "bench.yaml"
            path.write_text("seed: 3\nmodels: [esn]\n", encoding="utf-8")

            config = narmabench.load_config(path, environ={})

        self.assertEqual(3, config.seed)
        self.assertEqual(["esn"], config.models)


class TestErrors(unittest.TestCase):
    def test_unknown_key_with_line(self) -> None:
        text = textwrap.dedent(
            """\
            seed: 1
            esn:
              n_nodes: 10
              bogus: 3
            """
        )

        with self.assertRaises(narmabench.ConfigError) as context:
            narmabench.loads_config(text, path="bench.yaml", environ={})

        self.assertEqual(4, context.exception.line)
        self.assertEqual("bench.yaml", context.exception.path)
        self.assertTrue(str(context.exception).startswith("bench.yaml:4: "))
        self.assertIn("bogus", str(context.exception))

    def test_unknown_top_level_key(self) -> None:
        with self.assertRaises(narmabench.ConfigError) as context:
            narmabench.loads_config("seed: 1\nepochs: 3\n", environ={})

        self.assertEqual(2, context.exception.line)

    def test_duplicate_key(self) -> None:
        with self.assertRaises(narmabench.ConfigError):
            narmabench.loads_config("seed: 1\nseed: 2\n", environ={})

    def test_wrong_type(self) -> None:
        with self.assertRaises(narmabench.ConfigError) as context:
            narmabench.loads_config("seed: abc\n", environ={})
        self.assertEqual(1, context.exception.line)

        with self.assertRaises(narmabench.ConfigError):
            narmabench.loads_config("esn:\n  n_nodes: 2.5\n", environ={})

        with self.assertRaises(narmabench.ConfigError):
            narmabench.loads_config("lstm:\n  feed_y: 1\n", environ={})

    def test_invalid_values(self) -> None:
        for text in [
            "seed: -1\n",
            "ridge: -0.5\n",
            "esn:\n  spectral_radius: 0.0\n",
            "qrc:\n  n_qubits: 1\n",
            "qrc:\n  mode: magic\n",
            "series:\n  n_train: 100\n  washout: 100\n",
            "memory_capacity:\n  k_max: 20\n  probe_length: 50\n",
            "sustainability_weights:\n  rmse: -1.0\n",
            "models: [esn]\nrepeats:\n  esn: 0\n",
        ]:
            with self.assertRaises(narmabench.ConfigError, msg=text):
                narmabench.loads_config(text, environ={})

    def test_unknown_model(self) -> None:
        with self.assertRaises(narmabench.ConfigError) as context:
            narmabench.loads_config("models: [esn, transformer]\n", environ={})

        self.assertIn("transformer", str(context.exception))

    def test_syntax_error(self) -> None:
        with self.assertRaises(narmabench.ConfigError):
            narmabench.loads_config("seed: [1, 2\n", environ={})

    def test_not_a_mapping(self) -> None:
        with self.assertRaises(narmabench.ConfigError):
            narmabench.loads_config("- esn\n- qrc\n", environ={})


class TestRepeats(unittest.TestCase):
    def test_scalar(self) -> None:
        config = narmabench.loads_config("repeats: 2\n", environ={})
        self.assertEqual({"esn": 2, "qrc": 2, "lstm": 2, "qlstm": 2}, config.repeats)

    def test_mapping_keeps_the_rest(self) -> None:
        config = narmabench.loads_config("repeats:\n  lstm: 4\n", environ={})
        self.assertEqual({"esn": 3, "qrc": 3, "lstm": 4, "qlstm": 1}, config.repeats)


class TestEnvironment(unittest.TestCase):
    def test_seed_override(self) -> None:
        config = narmabench.loads_config("seed: 3\n", environ={"NARMABENCH_SEED": "11"})

        self.assertEqual(11, config.seed)
        self.assertEqual(11, config.esn.seed)
        self.assertEqual(11, config.qrc.seed)
        self.assertEqual(11, config.lstm.train.seed)

    def test_unset_and_blank(self) -> None:
        self.assertIsNone(seed_from_environment({}))
        self.assertIsNone(seed_from_environment({"NARMABENCH_SEED": " "}))

    def test_invalid_seed(self) -> None:
        for text in ["abc", "-3", "1.5"]:
            with self.assertRaises(narmabench.ConfigError):
                narmabench.loads_config("", environ={"NARMABENCH_SEED": text})


if __name__ == "__main__":
    unittest.main()
