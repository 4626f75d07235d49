"""Parse and serialize the YAML configuration of a benchmark."""
import hashlib
import os
import pathlib
from typing import (  # pylint: disable=unused-import
    Any,
    Callable,
    Dict,
    List,
    Mapping,
    Optional,
    Tuple,
    TypeVar,
    Union,
)

import icontract
import yaml

import narmabench._globals
from narmabench import errors
from narmabench._esn import EsnConfig
from narmabench._metrics import SUSTAINABILITY_METRICS
from narmabench._optim import TrainSpec
from narmabench._qlstm import QlstmConfig
from narmabench._qrc import Mode, QrcConfig
from narmabench._readout import DEFAULT_RIDGE
from narmabench._recurrent import LstmConfig
from narmabench._timeseries import SplitSpec

#: Names of the benchmarked models in the order of the reports
MODELS = ("esn", "qrc", "lstm", "qlstm")

#: Number of repetitions per model unless configured otherwise
DEFAULT_REPEATS = {"esn": 3, "qrc": 3, "lstm": 1, "qlstm": 1}

T = TypeVar("T")


@icontract.invariant(lambda self: self.k_max >= 1, error=errors.InvalidArgumentError)
@icontract.invariant(
    lambda self: self.probe_length >= 4 * (self.k_max + 1),
    error=errors.InvalidArgumentError,
)
class MemoryCapacitySpec:
    """Specify how the memory capacity of the reservoir models is measured."""

    def __init__(self, enabled: bool = True, k_max: int = 20, probe_length: int = 2000) -> None:
        """
        Initialize with the given values.

        :param enabled: whether to measure the memory capacity at all
        :param k_max: maximum delay
        :param probe_length: length of the i.i.d. probe input
        """
        self.enabled = enabled
        self.k_max = k_max
        self.probe_length = probe_length


@icontract.invariant(
    lambda self: all(model in MODELS for model in self.models),
    "only known models",
    error=errors.InvalidArgumentError,
)
@icontract.invariant(
    lambda self: all(self.repeats.get(model, 0) >= 1 for model in self.models),
    "every configured model has at least one repetition",
    error=errors.InvalidArgumentError,
)
@icontract.invariant(lambda self: self.seed >= 0, error=errors.InvalidArgumentError)
@icontract.invariant(lambda self: self.ridge >= 0.0, error=errors.InvalidArgumentError)
class BenchConfig:
    """Configure a whole benchmark run."""

    def __init__(
        self,
        seed: int = 0,
        models: Optional[List[str]] = None,
        repeats: Optional[Dict[str, int]] = None,
        output_dir: str = "results",
        ridge: float = DEFAULT_RIDGE,
        series: Optional[SplitSpec] = None,
        esn: Optional[EsnConfig] = None,
        qrc: Optional[QrcConfig] = None,
        qrc_mode: Mode = Mode.SHOTS,
        lstm: Optional[LstmConfig] = None,
        qlstm: Optional[QlstmConfig] = None,
        memory_capacity: Optional[MemoryCapacitySpec] = None,
        sustainability_weights: Optional[Dict[str, float]] = None,
    ) -> None:
        """
        Initialize with the given values; every omitted value defaults to the published setup.

        :param seed: master seed
        :param models: models to run
        :param repeats: number of repetitions by model
        :param output_dir: directory where the timestamped run directories are created
        :param ridge: regularization coefficient of the readouts
        :param series: split of the NARMA-10 series
        :param esn: configuration of the ESN (its seed is replaced per repetition)
        :param qrc: configuration of the QRC (its seed is replaced per repetition)
        :param qrc_mode: how the QRC features are estimated
        :param lstm: configuration of the LSTM
        :param qlstm: configuration of the QLSTM
        :param memory_capacity: how the memory capacity is measured
        :param sustainability_weights: weights of the metrics in the sustainability index
        """
        self.seed = seed
        self.models = list(models) if models is not None else list(MODELS)
        self.repeats = dict(DEFAULT_REPEATS)
        if repeats is not None:
            self.repeats.update(repeats)
        self.output_dir = output_dir
        self.ridge = float(ridge)
        self.series = series if series is not None else SplitSpec()
        self.esn = esn if esn is not None else EsnConfig()
        self.qrc = qrc if qrc is not None else QrcConfig()
        self.qrc_mode = qrc_mode
        self.lstm = lstm if lstm is not None else LstmConfig()
        self.qlstm = qlstm if qlstm is not None else QlstmConfig()
        self.memory_capacity = (
            memory_capacity if memory_capacity is not None else MemoryCapacitySpec()
        )
        self.sustainability_weights = (
            dict(sustainability_weights)
            if sustainability_weights is not None
            else {metric: 0.25 for metric in SUSTAINABILITY_METRICS}
        )

    def __eq__(self, other: object) -> bool:
        """Compare by the serialized form."""
        if not isinstance(other, BenchConfig):
            return NotImplemented

        return to_mapping(self) == to_mapping(other)

    def __repr__(self) -> str:
        """Represent as the serialized YAML."""
        return "BenchConfig(\n{})".format(dump_config(self))


def _train_mapping(spec: TrainSpec) -> Dict[str, Any]:
    return {
        "epochs": spec.epochs,
        "learning_rate": spec.learning_rate,
        "beta1": spec.beta1,
        "beta2": spec.beta2,
        "epsilon": spec.epsilon,
        "window": spec.window,
        "feed_y": spec.feed_y,
    }


def to_mapping(config: BenchConfig) -> Dict[str, Any]:
    """Convert the ``config`` to plain data with the same structure as the YAML file."""
    qrc = config.qrc
    mapping = {
        "seed": config.seed,
        "models": list(config.models),
        "repeats": dict(config.repeats),
        "output_dir": config.output_dir,
        "ridge": config.ridge,
        "series": {
            "n_train": config.series.n_train,
            "n_eval": config.series.n_eval,
            "washout": config.series.washout,
        },
        "esn": {
            "n_nodes": config.esn.n_nodes,
            "spectral_radius": config.esn.spectral_radius,
            "internal_sparsity": config.esn.internal_sparsity,
            "input_sparsity": config.esn.input_sparsity,
            "input_scale": config.esn.input_scale,
            "washout": config.esn.washout,
        },
        "qrc": {
            "n_qubits": qrc.n_qubits,
            "a_in": qrc.a_in,
            "a_fb": qrc.a_fb,
            "n_shots": qrc.n_shots,
            "washout": qrc.washout,
            "feedback_pairs": [list(pair) for pair in qrc.feedback_pairs],
            "mode": config.qrc_mode.value,
        },
        "lstm": dict(
            hidden=config.lstm.hidden,
            forget_bias=config.lstm.forget_bias,
            **_train_mapping(config.lstm.train)
        ),
        "qlstm": dict(
            hidden=config.qlstm.hidden,
            n_qubits=config.qlstm.n_qubits,
            n_layers=config.qlstm.n_layers,
            projection_bias=config.qlstm.projection_bias,
            max_steps=config.qlstm.max_steps,
            **_train_mapping(config.qlstm.train)
        ),
        "memory_capacity": {
            "enabled": config.memory_capacity.enabled,
            "k_max": config.memory_capacity.k_max,
            "probe_length": config.memory_capacity.probe_length,
        },
        "sustainability_weights": dict(config.sustainability_weights),
    }  # type: Dict[str, Any]

    return mapping


def dump_config(config: BenchConfig) -> str:
    """Serialize the ``config`` to YAML which :py:func:`loads_config` parses back to an equal config."""
    return str(
        yaml.safe_dump(to_mapping(config), sort_keys=False, allow_unicode=True)
    )


def config_hash(config: BenchConfig) -> str:
    """Compute the SHA-256 hex digest of the canonical YAML of the ``config``."""
    return hashlib.sha256(dump_config(config).encode("utf-8")).hexdigest()


class _Parser:
    """Convert the YAML node tree to a configuration and report problems with line numbers."""

    def __init__(self, path: str) -> None:
        self.path = path

    def error(self, node: yaml.Node, message: str) -> errors.ConfigError:
        return errors.ConfigError(message, path=self.path, line=node.start_mark.line + 1)

    def check_keys(
        self, node: yaml.Node, allowed: Tuple[str, ...], where: str
    ) -> Dict[str, yaml.Node]:
        """Map the keys to their value nodes and reject the keys which are not ``allowed``."""
        if not isinstance(node, yaml.MappingNode):
            raise self.error(node, "Expected a mapping in {}".format(where))

        result = dict()  # type: Dict[str, yaml.Node]
        for key_node, value_node in node.value:
            key = str(key_node.value)
            if key not in allowed:
                raise self.error(
                    key_node,
                    "Unknown key {!r} in {}; expected one of: {}".format(
                        key, where, ", ".join(allowed)
                    ),
                )
            if key in result:
                raise self.error(key_node, "Duplicate key {!r} in {}".format(key, where))
            result[key] = value_node

        return result

    def integer(self, node: yaml.Node, key: str) -> int:
        value = _construct(node)
        if isinstance(value, bool) or not isinstance(value, int):
            raise self.error(node, "Expected an integer for {!r}, got {!r}".format(key, value))
        return value

    def optional_integer(self, node: yaml.Node, key: str) -> Optional[int]:
        if _construct(node) is None:
            return None
        return self.integer(node, key)

    def real(self, node: yaml.Node, key: str) -> float:
        value = _construct(node)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise self.error(node, "Expected a number for {!r}, got {!r}".format(key, value))
        return float(value)

    def boolean(self, node: yaml.Node, key: str) -> bool:
        value = _construct(node)
        if not isinstance(value, bool):
            raise self.error(node, "Expected true or false for {!r}, got {!r}".format(key, value))
        return value

    def text(self, node: yaml.Node, key: str) -> str:
        value = _construct(node)
        if not isinstance(value, str):
            raise self.error(node, "Expected a string for {!r}, got {!r}".format(key, value))
        return value

    def get(
        self,
        fields: Mapping[str, yaml.Node],
        key: str,
        convert: Callable[[yaml.Node, str], T],
        default: T,
    ) -> T:
        """Convert the value of ``key`` if it is given, otherwise return the ``default``."""
        return convert(fields[key], key) if key in fields else default

    def build(self, node: yaml.Node, constructor: Callable[[], T]) -> T:
        """Construct a configuration block and convert the violated invariants to configuration errors."""
        try:
            return constructor()
        except errors.InvalidArgumentError as err:
            raise self.error(node, "Invalid values: {}".format(err)) from err


def _construct(node: yaml.Node) -> Any:
    """Construct the Python value of a YAML node with the safe constructors."""
    loader = yaml.SafeLoader("")
    try:
        return loader.construct_object(node, deep=True)
    finally:
        loader.dispose()


_TRAIN_KEYS = ("epochs", "learning_rate", "beta1", "beta2", "epsilon", "window", "feed_y")


def _parse_train(parser: _Parser, fields: Mapping[str, yaml.Node], seed: int) -> TrainSpec:
    defaults = TrainSpec()
    return TrainSpec(
        epochs=parser.get(fields, "epochs", parser.integer, defaults.epochs),
        learning_rate=parser.get(fields, "learning_rate", parser.real, defaults.learning_rate),
        beta1=parser.get(fields, "beta1", parser.real, defaults.beta1),
        beta2=parser.get(fields, "beta2", parser.real, defaults.beta2),
        epsilon=parser.get(fields, "epsilon", parser.real, defaults.epsilon),
        window=parser.get(fields, "window", parser.integer, defaults.window),
        feed_y=parser.get(fields, "feed_y", parser.boolean, defaults.feed_y),
        seed=seed,
    )


def _parse_esn(parser: _Parser, node: yaml.Node, seed: int) -> EsnConfig:
    keys = (
        "n_nodes",
        "spectral_radius",
        "internal_sparsity",
        "input_sparsity",
        "input_scale",
        "washout",
    )
    fields = parser.check_keys(node, keys, "the esn block")
    defaults = EsnConfig()

    return parser.build(
        node,
        lambda: EsnConfig(
            n_nodes=parser.get(fields, "n_nodes", parser.integer, defaults.n_nodes),
            spectral_radius=parser.get(
                fields, "spectral_radius", parser.real, defaults.spectral_radius
            ),
            internal_sparsity=parser.get(
                fields, "internal_sparsity", parser.real, defaults.internal_sparsity
            ),
            input_sparsity=parser.get(
                fields, "input_sparsity", parser.real, defaults.input_sparsity
            ),
            input_scale=parser.get(fields, "input_scale", parser.real, defaults.input_scale),
            washout=parser.get(fields, "washout", parser.integer, defaults.washout),
            seed=seed,
        ),
    )


def _parse_mode(parser: _Parser, node: yaml.Node, key: str) -> Mode:
    text = parser.text(node, key)
    try:
        return Mode(text)
    except ValueError as err:
        raise parser.error(
            node,
            "Unknown QRC mode {!r}; expected one of: {}".format(
                text, ", ".join(member.value for member in Mode)
            ),
        ) from err


def _parse_pairs(parser: _Parser, node: yaml.Node, key: str) -> List[Tuple[int, int]]:
    if not isinstance(node, yaml.SequenceNode):
        raise parser.error(node, "Expected a list of qubit pairs for {!r}".format(key))

    pairs = []  # type: List[Tuple[int, int]]
    for pair_node in node.value:
        if not isinstance(pair_node, yaml.SequenceNode) or len(pair_node.value) != 2:
            raise parser.error(pair_node, "Expected a pair of qubit indices in {!r}".format(key))

        first, second = pair_node.value
        pairs.append((parser.integer(first, key), parser.integer(second, key)))

    return pairs


def _parse_qrc(parser: _Parser, node: yaml.Node, seed: int) -> Tuple[QrcConfig, Mode]:
    keys = ("n_qubits", "a_in", "a_fb", "n_shots", "washout", "feedback_pairs", "mode")
    fields = parser.check_keys(node, keys, "the qrc block")
    defaults = QrcConfig()

    mode = parser.get(fields, "mode", lambda value, key: _parse_mode(parser, value, key), Mode.SHOTS)
    pairs = parser.get(
        fields,
        "feedback_pairs",
        lambda value, key: _parse_pairs(parser, value, key),
        None,
    )  # type: Optional[List[Tuple[int, int]]]

    config = parser.build(
        node,
        lambda: QrcConfig(
            n_qubits=parser.get(fields, "n_qubits", parser.integer, defaults.n_qubits),
            a_in=parser.get(fields, "a_in", parser.real, defaults.a_in),
            a_fb=parser.get(fields, "a_fb", parser.real, defaults.a_fb),
            n_shots=parser.get(fields, "n_shots", parser.integer, defaults.n_shots),
            washout=parser.get(fields, "washout", parser.integer, defaults.washout),
            seed=seed,
            feedback_pairs=pairs,
        ),
    )
    return config, mode


def _parse_lstm(parser: _Parser, node: yaml.Node, seed: int) -> LstmConfig:
    fields = parser.check_keys(node, ("hidden", "forget_bias") + _TRAIN_KEYS, "the lstm block")
    defaults = LstmConfig()

    return parser.build(
        node,
        lambda: LstmConfig(
            hidden=parser.get(fields, "hidden", parser.integer, defaults.hidden),
            forget_bias=parser.get(fields, "forget_bias", parser.boolean, defaults.forget_bias),
            train=_parse_train(parser, fields, seed),
        ),
    )


def _parse_qlstm(parser: _Parser, node: yaml.Node, seed: int) -> QlstmConfig:
    keys = ("hidden", "n_qubits", "n_layers", "projection_bias", "max_steps") + _TRAIN_KEYS
    fields = parser.check_keys(node, keys, "the qlstm block")
    defaults = QlstmConfig()

    return parser.build(
        node,
        lambda: QlstmConfig(
            hidden=parser.get(fields, "hidden", parser.integer, defaults.hidden),
            n_qubits=parser.get(fields, "n_qubits", parser.integer, defaults.n_qubits),
            n_layers=parser.get(fields, "n_layers", parser.integer, defaults.n_layers),
            projection_bias=parser.get(
                fields, "projection_bias", parser.boolean, defaults.projection_bias
            ),
            max_steps=parser.get(
                fields, "max_steps", parser.optional_integer, defaults.max_steps
            ),
            train=_parse_train(parser, fields, seed),
        ),
    )


def _parse_series(parser: _Parser, node: yaml.Node) -> SplitSpec:
    fields = parser.check_keys(node, ("n_train", "n_eval", "washout"), "the series block")
    defaults = SplitSpec()

    return parser.build(
        node,
        lambda: SplitSpec(
            n_train=parser.get(fields, "n_train", parser.integer, defaults.n_train),
            n_eval=parser.get(fields, "n_eval", parser.integer, defaults.n_eval),
            washout=parser.get(fields, "washout", parser.integer, defaults.washout),
        ),
    )


def _parse_memory_capacity(parser: _Parser, node: yaml.Node) -> MemoryCapacitySpec:
    fields = parser.check_keys(
        node, ("enabled", "k_max", "probe_length"), "the memory_capacity block"
    )
    defaults = MemoryCapacitySpec()

    return parser.build(
        node,
        lambda: MemoryCapacitySpec(
            enabled=parser.get(fields, "enabled", parser.boolean, defaults.enabled),
            k_max=parser.get(fields, "k_max", parser.integer, defaults.k_max),
            probe_length=parser.get(
                fields, "probe_length", parser.integer, defaults.probe_length
            ),
        ),
    )


def _parse_repeats(parser: _Parser, node: yaml.Node) -> Dict[str, int]:
    if isinstance(node, yaml.ScalarNode):
        count = parser.integer(node, "repeats")
        return {model: count for model in MODELS}

    fields = parser.check_keys(node, MODELS, "the repeats block")
    return {model: parser.integer(value, model) for model, value in fields.items()}


def _parse_weights(parser: _Parser, node: yaml.Node) -> Dict[str, float]:
    fields = parser.check_keys(node, SUSTAINABILITY_METRICS, "the sustainability_weights block")

    weights = {metric: 0.25 for metric in SUSTAINABILITY_METRICS}
    for metric, value in fields.items():
        weights[metric] = parser.real(value, metric)
        if weights[metric] < 0.0:
            raise parser.error(value, "The weight of {} must be non-negative".format(metric))

    if sum(weights.values()) <= 0.0:
        raise parser.error(node, "The sustainability weights must not all be zero")

    return weights


def _parse_models(parser: _Parser, node: yaml.Node) -> List[str]:
    if not isinstance(node, yaml.SequenceNode):
        raise parser.error(node, "Expected a list of models for 'models'")

    models = []  # type: List[str]
    for model_node in node.value:
        model = parser.text(model_node, "models")
        if model not in MODELS:
            raise parser.error(
                model_node,
                "Unknown model {!r}; expected one of: {}".format(model, ", ".join(MODELS)),
            )
        models.append(model)

    return models


_TOP_LEVEL_KEYS = (
    "seed",
    "models",
    "repeats",
    "output_dir",
    "ridge",
    "series",
    "esn",
    "qrc",
    "lstm",
    "qlstm",
    "memory_capacity",
    "sustainability_weights",
)


def seed_from_environment(environ: Optional[Mapping[str, str]] = None) -> Optional[int]:
    """
    Read the master seed override from the environment.

    :param environ: environment variables; ``os.environ`` if omitted
    :return: overriding seed, or None if the variable is not set
    :raise errors.ConfigError: if the variable is not a non-negative integer
    """
    env = os.environ if environ is None else environ
    text = env.get(narmabench._globals.SEED_ENV_VAR, "").strip()
    if text == "":
        return None

    if not text.isdigit():
        raise errors.ConfigError(
            "Expected a non-negative integer, got {!r}".format(text),
            path=narmabench._globals.SEED_ENV_VAR,
        )

    return int(text)


def _compose(text: str, path: str) -> Optional[yaml.Node]:
    try:
        return yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError as err:
        mark = getattr(err, "problem_mark", None)
        raise errors.ConfigError(
            "Invalid YAML: {}".format(getattr(err, "problem", None) or err),
            path=path,
            line=mark.line + 1 if mark is not None else 0,
        ) from err


def loads_config(
    text: str, path: str = "<string>", environ: Optional[Mapping[str, str]] = None
) -> BenchConfig:
    """
    Parse the YAML ``text`` of a benchmark configuration.

    Every omitted value defaults to the published setup. The environment variable
    ``NARMABENCH_SEED`` overrides the master seed.

    :param text: YAML content
    :param path: path reported in the errors
    :param environ: environment variables; ``os.environ`` if omitted
    :return: parsed configuration
    :raise errors.ConfigError: on a syntax error, an unknown key or an invalid value
    """
    root = _compose(text, path)
    parser = _Parser(path=path)

    fields = dict()  # type: Dict[str, yaml.Node]
    if root is not None and not (
        isinstance(root, yaml.ScalarNode) and _construct(root) is None
    ):
        fields = parser.check_keys(root, _TOP_LEVEL_KEYS, "the configuration")

    seed = parser.get(fields, "seed", parser.integer, 0)
    if seed < 0:
        raise parser.error(fields["seed"], "The seed must be non-negative, got {}".format(seed))

    override = seed_from_environment(environ)
    if override is not None:
        seed = override

    ridge = parser.get(fields, "ridge", parser.real, DEFAULT_RIDGE)
    if ridge < 0.0:
        raise parser.error(fields["ridge"], "The ridge must be non-negative, got {}".format(ridge))

    qrc, qrc_mode = (
        _parse_qrc(parser, fields["qrc"], seed)
        if "qrc" in fields
        else (QrcConfig(seed=seed), Mode.SHOTS)
    )

    models = parser.get(fields, "models", lambda value, _: _parse_models(parser, value), None)
    repeats = parser.get(fields, "repeats", lambda value, _: _parse_repeats(parser, value), None)

    def construct() -> BenchConfig:
        return BenchConfig(
            seed=seed,
            models=models,
            repeats=repeats,
            output_dir=parser.get(fields, "output_dir", parser.text, "results"),
            ridge=ridge,
            series=parser.get(
                fields, "series", lambda value, _: _parse_series(parser, value), None
            ),
            esn=parser.get(
                fields,
                "esn",
                lambda value, _: _parse_esn(parser, value, seed),
                EsnConfig(seed=seed),
            ),
            qrc=qrc,
            qrc_mode=qrc_mode,
            lstm=parser.get(
                fields,
                "lstm",
                lambda value, _: _parse_lstm(parser, value, seed),
                LstmConfig(train=TrainSpec(seed=seed)),
            ),
            qlstm=parser.get(
                fields,
                "qlstm",
                lambda value, _: _parse_qlstm(parser, value, seed),
                QlstmConfig(train=TrainSpec(seed=seed)),
            ),
            memory_capacity=parser.get(
                fields,
                "memory_capacity",
                lambda value, _: _parse_memory_capacity(parser, value),
                None,
            ),
            sustainability_weights=parser.get(
                fields,
                "sustainability_weights",
                lambda value, _: _parse_weights(parser, value),
                None,
            ),
        )

    if root is None or not isinstance(root, yaml.MappingNode):
        return construct()

    # Cross-field violations (e.g., a model without repetitions) are reported at the document start.
    return parser.build(root, construct)


def load_config(
    path: Union[str, pathlib.Path], environ: Optional[Mapping[str, str]] = None
) -> BenchConfig:
    """
    Read and parse the YAML configuration file at ``path``.

    :param path: path to the configuration file
    :param environ: environment variables; ``os.environ`` if omitted
    :return: parsed configuration
    :raise errors.ConfigError: if the file can not be parsed
    """
    text = pathlib.Path(path).read_text(encoding="utf-8")
    return loads_config(text, path=str(path), environ=environ)
