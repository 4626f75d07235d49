"""Compute the comparison metrics: errors, parameter counts, memory capacity and the sustainability index."""
import logging
import math
from typing import (  # pylint: disable=unused-import
    Callable,
    Dict,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import icontract
import numpy as np

from narmabench import errors
from narmabench._esn import EsnConfig
from narmabench._qlstm import QlstmConfig, count_qlstm_params
from narmabench._qrc import QrcConfig
from narmabench._readout import DEFAULT_RIDGE, ReservoirFeatures, fit_readout
from narmabench._recurrent import LstmConfig, count_lstm_params
from narmabench._seeding import Concern, generator_for
from narmabench._timeseries import INPUT_HIGH, INPUT_LOW
from narmabench._timing import time_block  # pylint: disable=unused-import

LOGGER = logging.getLogger(__name__)

#: Metrics which enter the sustainability index, lower is better for all of them
SUSTAINABILITY_METRICS = ("rmse", "nrmse", "train_time_s", "trainable_params")

#: Configuration of any of the four models
ModelConfig = Union[EsnConfig, QrcConfig, LstmConfig, QlstmConfig]

#: Descriptor of the models without a fixed reservoir
NO_RESERVOIR = "—"


def _as_pair(pred: Sequence[float], truth: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    return np.asarray(pred, dtype=np.float64), np.asarray(truth, dtype=np.float64)


@icontract.require(
    lambda pred, truth: len(pred) == len(truth) and len(truth) > 0,
    "equal non-empty lengths",
    error=errors.InvalidArgumentError,
)
@icontract.ensure(lambda result: result >= 0.0)
def rmse(pred: Sequence[float], truth: Sequence[float]) -> float:
    """
    Compute the root-mean-square error.

    >>> rmse([1.0, 2.0], [1.0, 2.0])
    0.0
    """
    pred_array, truth_array = _as_pair(pred, truth)
    return float(np.sqrt(np.mean((pred_array - truth_array) ** 2)))


@icontract.require(
    lambda pred, truth: len(pred) == len(truth) and len(truth) > 0,
    "equal non-empty lengths",
    error=errors.InvalidArgumentError,
)
@icontract.ensure(lambda result: result >= 0.0)
def nrmse(pred: Sequence[float], truth: Sequence[float]) -> float:
    """
    Compute the RMSE divided by the population standard deviation of the true values.

    :param pred: predictions
    :param truth: true values
    :return: normalized error; 1 for the constant mean predictor
    :raise errors.UndefinedMetricError: if the true values are constant
    """
    _, truth_array = _as_pair(pred, truth)
    sigma = float(np.std(truth_array))
    if sigma == 0.0:
        raise errors.UndefinedMetricError(
            "The NRMSE is undefined since the {} true values are constant.".format(
                truth_array.shape[0]
            )
        )

    return rmse(pred, truth) / sigma


def count_params(config: ModelConfig) -> Tuple[int, str]:
    """
    Count the trainable parameters of a model and describe its fixed resources.

    The reservoir models train only the readout [x_t; 1], whereas the recurrent models train
    all their weights and biases.

    :param config: configuration of the model
    :return: trainable parameters, descriptor of the fixed reservoir
    """
    if isinstance(config, EsnConfig):
        return config.n_nodes + 1, "N={}, ρ={:g}".format(
            config.n_nodes, config.spectral_radius
        )

    if isinstance(config, QrcConfig):
        return config.n_qubits + 1, "{} qubits, {} shots".format(
            config.n_qubits, config.n_shots
        )

    if isinstance(config, LstmConfig):
        return count_lstm_params(config.hidden, config.train.input_dim), NO_RESERVOIR

    if isinstance(config, QlstmConfig):
        count = count_qlstm_params(
            config.hidden,
            config.train.input_dim,
            config.n_qubits,
            config.n_layers,
            config.projection_bias,
        )
        return count, "{} qubits, {} layer{}".format(
            config.n_qubits, config.n_layers, "" if config.n_layers == 1 else "s"
        )

    raise NotImplementedError("Unhandled model configuration: {!r}".format(config))


@icontract.invariant(
    lambda self: self.failure is not None
    or (
        self.rmse >= 0.0
        and self.nrmse >= 0.0
        and self.train_time_s >= 0.0
        and self.trainable_params >= 1
    ),
    error=errors.InvalidArgumentError,
)
class BenchRecord:
    """Represent the metrics of one model run, or the failure of the run."""

    def __init__(
        self,
        model: str,
        rmse: float,
        nrmse: float,
        train_time_s: float,
        trainable_params: int,
        reservoir_descriptor: str = NO_RESERVOIR,
        memory_capacity: Optional[float] = None,
        seed: Optional[int] = None,
        repeat: int = 0,
        n_train: Optional[int] = None,
        failure: Optional[str] = None,
    ) -> None:
        """
        Initialize with the given values.

        :param model: name of the model
        :param rmse: RMSE on the eval window
        :param nrmse: NRMSE on the eval window
        :param train_time_s: wall-clock seconds of the training loop
        :param trainable_params: number of trainable parameters
        :param reservoir_descriptor: fixed resources of the model
        :param memory_capacity: memory capacity, if measured
        :param seed: master seed of the run
        :param repeat: index of the repetition
        :param n_train: length of the train window
        :param failure: description of the failure, if the run failed
        """
        self.model = model
        self.rmse = float(rmse)
        self.nrmse = float(nrmse)
        self.train_time_s = float(train_time_s)
        self.trainable_params = int(trainable_params)
        self.reservoir_descriptor = reservoir_descriptor
        self.memory_capacity = memory_capacity
        self.seed = seed
        self.repeat = repeat
        self.n_train = n_train
        self.failure = failure

    @property
    def failed(self) -> bool:
        """Indicate that the run failed and the metrics are not available."""
        return self.failure is not None

    @classmethod
    def failed_run(
        cls,
        model: str,
        failure: str,
        seed: Optional[int] = None,
        repeat: int = 0,
        n_train: Optional[int] = None,
    ) -> "BenchRecord":
        """Create the record of a failed run with NaN metrics."""
        return cls(
            model=model,
            rmse=math.nan,
            nrmse=math.nan,
            train_time_s=math.nan,
            trainable_params=0,
            seed=seed,
            repeat=repeat,
            n_train=n_train,
            failure=failure,
        )

    def __repr__(self) -> str:
        """Represent with the constructor."""
        return (
            "BenchRecord(model={!r}, rmse={!r}, nrmse={!r}, train_time_s={!r}, "
            "trainable_params={!r}, reservoir_descriptor={!r}, memory_capacity={!r}, "
            "seed={!r}, repeat={!r}, n_train={!r}, failure={!r})"
        ).format(
            self.model,
            self.rmse,
            self.nrmse,
            self.train_time_s,
            self.trainable_params,
            self.reservoir_descriptor,
            self.memory_capacity,
            self.seed,
            self.repeat,
            self.n_train,
            self.failure,
        )


#: Benchmark values published for the four models (RMSE, NRMSE, training time, parameters, memory capacity)
PUBLISHED_RECORDS = [
    BenchRecord(
        model="esn",
        rmse=0.0177,
        nrmse=0.185,
        train_time_s=0.37,
        trainable_params=18246,
        reservoir_descriptor="N=300, ρ=0.9",
        memory_capacity=0.0128,
    ),
    BenchRecord(
        model="lstm",
        rmse=0.0562,
        nrmse=0.530,
        train_time_s=105.09,
        trainable_params=17217,
    ),
    BenchRecord(
        model="qlstm",
        rmse=0.1078,
        nrmse=1.050,
        train_time_s=10276.6,
        trainable_params=89,
        reservoir_descriptor="4 qubits, 1 layer",
    ),
    BenchRecord(
        model="qrc",
        rmse=0.0533,
        nrmse=0.485,
        train_time_s=743.46,
        trainable_params=255,
        reservoir_descriptor="4 qubits, 1000 shots",
        memory_capacity=0.7752,
    ),
]  # type: List[BenchRecord]


def published_record(model: str) -> Optional[BenchRecord]:
    """Find the published record of the ``model``, if any."""
    for record in PUBLISHED_RECORDS:
        if record.model == model:
            return record

    return None


@icontract.invariant(
    lambda self: all(0.0 - 1e-12 <= score <= 1.0 + 1e-12 for score in self.scores.values()),
    "scores in [0, 1]",
)
@icontract.invariant(
    lambda self: abs(sum(self.weights.values()) - 1.0) <= 1e-12, "weights sum to 1"
)
class SustainabilityReport:
    """Hold the normalized metrics, the weights and the sustainability scores of the compared models."""

    def __init__(
        self,
        normalized: Dict[str, Dict[str, float]],
        weights: Dict[str, float],
        scores: Dict[str, float],
        constant_metrics: Optional[List[str]] = None,
    ) -> None:
        """
        Initialize with the given values.

        :param normalized: min-max normalized metric x' by model and metric
        :param weights: weight of every metric
        :param scores: sustainability index S by model
        :param constant_metrics: metrics which had the same value for every model
        """
        self.normalized = normalized
        self.weights = weights
        self.scores = scores
        self.constant_metrics = constant_metrics if constant_metrics is not None else []

    def ranking(self) -> List[str]:
        """List the models from the best to the worst trade-off."""
        return sorted(self.scores, key=lambda model: (-self.scores[model], model))

    def to_jsonable(self) -> Dict[str, object]:
        """Convert to a structure which can be written as JSON."""
        return {
            "weights": dict(self.weights),
            "normalized": {model: dict(values) for model, values in self.normalized.items()},
            "scores": dict(self.scores),
            "ranking": self.ranking(),
            "constant_metrics": list(self.constant_metrics),
        }


def _renormalized_weights(weights: Optional[Mapping[str, float]]) -> Dict[str, float]:
    if weights is None:
        return {metric: 1.0 / len(SUSTAINABILITY_METRICS) for metric in SUSTAINABILITY_METRICS}

    total = sum(weights[metric] for metric in SUSTAINABILITY_METRICS)
    return {metric: weights[metric] / total for metric in SUSTAINABILITY_METRICS}


@icontract.require(
    lambda records: len(records) >= 2, "at least two models", error=errors.InvalidArgumentError
)
@icontract.require(
    lambda records: len(set(record.model for record in records)) == len(records),
    "one record per model",
    error=errors.InvalidArgumentError,
)
@icontract.require(
    lambda records: all(
        not record.failed
        and all(
            math.isfinite(float(getattr(record, metric)))
            for metric in SUSTAINABILITY_METRICS
        )
        for record in records
    ),
    "all metrics present and finite",
    error=errors.InvalidArgumentError,
)
@icontract.require(
    lambda weights: weights is None
    or (
        set(weights.keys()) == set(SUSTAINABILITY_METRICS)
        and all(value >= 0.0 for value in weights.values())
        and sum(weights.values()) > 0.0
    ),
    "non-negative weights for exactly the four metrics",
    error=errors.InvalidArgumentError,
)
def sustainability_index(
    records: Sequence[BenchRecord], weights: Optional[Mapping[str, float]] = None
) -> SustainabilityReport:
    """
    Score the trade-off between accuracy and cost of every model.

    Every metric is min-max normalized across the models, x' = (x − min)/(max − min), and
    the score is S = Σ_m w_m·(1 − x'_m). All the metrics are costs, so a model which is the
    best on every metric scores 1 and a model which is the worst on every metric scores 0.

    :param records: one record per model
    :param weights: weight of every metric; renormalized to sum to 1; equal weights if omitted
    :return: normalized metrics and scores
    """
    normalized_weights = _renormalized_weights(weights)

    normalized = {record.model: dict() for record in records}  # type: Dict[str, Dict[str, float]]
    constant_metrics = []  # type: List[str]

    for metric in SUSTAINABILITY_METRICS:
        values = np.array([float(getattr(record, metric)) for record in records])
        low, high = float(np.min(values)), float(np.max(values))

        if high == low:
            LOGGER.warning(
                "The metric %s is the same (%g) for all the models; "
                "it contributes equally to every score.",
                metric,
                low,
            )
            constant_metrics.append(metric)

        for record, value in zip(records, values):
            normalized[record.model][metric] = (
                0.0 if high == low else (float(value) - low) / (high - low)
            )

    scores = {
        model: float(
            sum(
                normalized_weights[metric] * (1.0 - values[metric])
                for metric in SUSTAINABILITY_METRICS
            )
        )
        for model, values in normalized.items()
    }

    return SustainabilityReport(
        normalized=normalized,
        weights=normalized_weights,
        scores=scores,
        constant_metrics=constant_metrics,
    )


#: Maps the inputs to the features of a reservoir, one feature row per input
ReservoirRunner = Callable[[np.ndarray], ReservoirFeatures]


def probe_input(length: int, seed: int) -> np.ndarray:
    """Draw the i.i.d. uniform probe input of the memory capacity."""
    return generator_for(seed, Concern.PROBE).uniform(INPUT_LOW, INPUT_HIGH, length)


def squared_correlation(first: np.ndarray, second: np.ndarray) -> float:
    """Compute the squared Pearson correlation; 0 if either of the vectors is constant."""
    first_centered = first - np.mean(first)
    second_centered = second - np.mean(second)

    first_norm = float(np.sqrt(np.sum(first_centered**2)))
    second_norm = float(np.sqrt(np.sum(second_centered**2)))

    if first_norm <= 1e-12 * max(1.0, float(np.max(np.abs(first)))) or second_norm == 0.0:
        return 0.0

    correlation = float(np.dot(first_centered, second_centered)) / (first_norm * second_norm)
    return min(1.0, correlation**2)


@icontract.require(lambda k_max: k_max >= 1, error=errors.InvalidArgumentError)
@icontract.require(lambda washout: washout >= 0, error=errors.InvalidArgumentError)
@icontract.require(
    lambda u, k_max, washout: len(u) >= 4 * (max(k_max, washout) + 1),
    "probe much longer than the maximum delay",
    error=errors.InvalidArgumentError,
)
@icontract.ensure(lambda k_max, result: 0.0 <= result <= k_max + 1e-9)
def memory_capacity(
    runner: ReservoirRunner,
    u: np.ndarray,
    k_max: int = 20,
    washout: int = 0,
    ridge: float = DEFAULT_RIDGE,
) -> float:
    """
    Measure how much of the past input can be linearly reconstructed from the reservoir.

    MC = Σ_{k=1..k_max} r²_k, where r²_k is the squared correlation between u_{t−k} and its
    reconstruction by a readout fitted on the first half of the usable steps and evaluated
    on the second half. A delay whose reconstruction is constant contributes 0.

    :param runner: maps the probe input to the reservoir features
    :param u: probe input
    :param k_max: maximum delay
    :param washout: number of leading steps never used
    :param ridge: regularization coefficient of the readouts
    :return: memory capacity
    """
    inputs = np.asarray(u, dtype=np.float64)
    features = runner(inputs)

    start = max(k_max, washout)
    rows = np.arange(start, inputs.shape[0])
    targets = np.stack([inputs[rows - k] for k in range(1, k_max + 1)], axis=1)

    middle = rows.shape[0] // 2
    fit_part = ReservoirFeatures(
        matrix=features.matrix[rows[:middle]], washout=0, has_bias=features.has_bias
    )
    held_out = features.matrix[rows[middle:]]

    readout = fit_readout(fit_part, targets[:middle], ridge=ridge)
    reconstructions = held_out @ readout.weights

    capacity = 0.0
    for delay in range(k_max):
        capacity += squared_correlation(reconstructions[:, delay], targets[middle:, delay])

    return capacity
