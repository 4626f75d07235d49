"""Generate NARMA-10 sequences and split them into train and eval windows."""
import csv
import logging
import pathlib
from typing import List, Optional, Tuple, Union  # pylint: disable=unused-import

import icontract
import numpy as np

from narmabench import errors
from narmabench._seeding import Concern, generator_for

LOGGER = logging.getLogger(__name__)

#: Order of the NARMA recursion
ORDER = 10

#: Range of the uniformly drawn inputs
INPUT_LOW, INPUT_HIGH = 0.0, 0.5

#: Magnitude of an output above which the sequence is considered diverged
DIVERGENCE_BOUND = 10.0

#: How many consecutive seeds we try before giving up on a diverging sequence
MAX_REGENERATIONS = 100


@icontract.invariant(lambda self: self.u.shape == self.y.shape)
@icontract.invariant(lambda self: self.u.ndim == 1)
@icontract.invariant(
    lambda self: bool(np.all((self.u >= INPUT_LOW) & (self.u <= INPUT_HIGH))),
    "every input in [0, 0.5]",
)
class Series:
    """Represent a scalar time series with the input channel ``u`` and the target channel ``y``."""

    def __init__(
        self,
        u: np.ndarray,
        y: np.ndarray,
        seed: int,
        requested_seed: Optional[int] = None,
    ) -> None:
        """
        Initialize with the given values.

        :param u: inputs
        :param y: targets
        :param seed: seed of the data generator which actually produced the series
        :param requested_seed:
            seed which was originally requested; differs from ``seed`` if the series diverged
            and had to be regenerated
        """
        self.u = np.array(u, dtype=np.float64)
        self.y = np.array(y, dtype=np.float64)
        self.u.setflags(write=False)
        self.y.setflags(write=False)

        self.seed = seed
        self.requested_seed = seed if requested_seed is None else requested_seed

    @property
    def length(self) -> int:
        """Count the time steps."""
        return int(self.u.shape[0])

    @property
    def substituted(self) -> bool:
        """Indicate that the requested seed diverged and a later seed was used."""
        return self.seed != self.requested_seed

    def __repr__(self) -> str:
        """Represent the series compactly."""
        return "Series(length={}, seed={}, requested_seed={})".format(
            self.length, self.seed, self.requested_seed
        )


@icontract.invariant(
    lambda self: 0 <= self.washout < self.n_train,
    error=errors.InvalidArgumentError,
)
@icontract.invariant(
    lambda self: self.n_eval >= 1, error=errors.InvalidArgumentError
)
class SplitSpec:
    """Define how a series is split into a train and an eval window."""

    def __init__(self, n_train: int = 2000, n_eval: int = 1000, washout: int = 100) -> None:
        """
        Initialize with the given values.

        :param n_train: number of steps in the train window
        :param n_eval: number of steps in the eval window
        :param washout: number of leading train steps excluded from the training of a readout
        """
        self.n_train = n_train
        self.n_eval = n_eval
        self.washout = washout

    @property
    def total(self) -> int:
        """Count the steps needed from the series."""
        return self.n_train + self.n_eval

    def __repr__(self) -> str:
        """Represent with the constructor."""
        return "SplitSpec(n_train={}, n_eval={}, washout={})".format(
            self.n_train, self.n_eval, self.washout
        )


@icontract.invariant(lambda self: self.u.shape == self.y.shape)
@icontract.invariant(lambda self: 0 <= self.washout <= self.u.shape[0])
class SeriesView:
    """Represent a contiguous window of a series."""

    def __init__(self, u: np.ndarray, y: np.ndarray, start: int, washout: int = 0) -> None:
        """
        Initialize with the given values.

        :param u: inputs of the window
        :param y: targets of the window
        :param start: index of the first step of the window in the whole series
        :param washout: number of leading steps flagged as washout
        """
        self.u = u
        self.y = y
        self.start = start
        self.washout = washout

    @property
    def length(self) -> int:
        """Count the time steps of the window."""
        return int(self.u.shape[0])

    @property
    def stop(self) -> int:
        """Give the index (exclusive) of the last step of the window in the whole series."""
        return self.start + self.length

    @property
    def washout_mask(self) -> np.ndarray:
        """Flag the washout steps with ``True``."""
        mask = np.zeros(self.length, dtype=bool)
        mask[: self.washout] = True
        return mask

    def __repr__(self) -> str:
        """Represent the window by its bounds."""
        return "SeriesView(start={}, stop={}, washout={})".format(
            self.start, self.stop, self.washout
        )


def simulate_narma10(u: np.ndarray) -> np.ndarray:
    """
    Compute the NARMA-10 targets for the given inputs.

    The outputs start at ``y[0] = 0``; all outputs and inputs before the first step are zero.

    :param u: inputs
    :return: targets of the same length as ``u``
    """
    length = u.shape[0]
    y = np.zeros(length, dtype=np.float64)

    for t in range(length - 1):
        history = y[max(0, t - ORDER + 1) : t + 1].sum()
        u_lagged = u[t - ORDER + 1] if t >= ORDER - 1 else 0.0

        y[t + 1] = 0.3 * y[t] + 0.05 * y[t] * history + 1.5 * u_lagged * u[t] + 0.1

    return y


def _is_bounded(y: np.ndarray) -> bool:
    return bool(np.all(np.isfinite(y))) and bool(np.all(np.abs(y) <= DIVERGENCE_BOUND))


@icontract.require(
    lambda length: length > ORDER, error=errors.InvalidArgumentError
)
@icontract.require(lambda seed: seed >= 0, error=errors.InvalidArgumentError)
@icontract.ensure(lambda length, result: result.length == length)
def generate_narma10(length: int, seed: int) -> Series:
    """
    Generate a NARMA-10 series with inputs drawn uniformly from [0, 0.5].

    If the recursion diverges (an output exceeds 10 in magnitude), the series is regenerated
    with the next seed and the substitution is recorded in the result.

    :param length: number of time steps
    :param seed: seed of the data generator
    :return: generated series
    :raise errors.InvalidArgumentError: if ``length`` is too short
    :raise errors.DivergenceError: if no stable series was found after many regenerations
    """
    for attempt in range(MAX_REGENERATIONS):
        candidate_seed = seed + attempt
        rng = generator_for(candidate_seed, Concern.DATA)
        u = rng.uniform(INPUT_LOW, INPUT_HIGH, size=length)
        y = simulate_narma10(u)

        if _is_bounded(y):
            if attempt > 0:
                LOGGER.warning(
                    "The NARMA-10 series diverged for seed %d; substituted seed %d.",
                    seed,
                    candidate_seed,
                )

            return Series(u=u, y=y, seed=candidate_seed, requested_seed=seed)

    raise errors.DivergenceError(
        "The NARMA-10 series diverged for all the seeds from {} to {}".format(
            seed, seed + MAX_REGENERATIONS - 1
        )
    )


@icontract.require(
    lambda series, spec: spec.total <= series.length,
    "the split fits into the series",
    error=errors.InvalidArgumentError,
)
@icontract.ensure(lambda result: result[0].stop == result[1].start)
@icontract.ensure(lambda result: result[1].washout == 0)
def split(series: Series, spec: SplitSpec) -> Tuple[SeriesView, SeriesView]:
    """
    Split the series into a train and an eval window.

    The windows are contiguous and do not overlap. The washout steps are flagged in the train window only.

    :param series: to be split
    :param spec: sizes of the windows
    :return: train window, eval window
    :raise errors.InvalidArgumentError: if the split does not fit into the series
    """
    train = SeriesView(
        u=series.u[: spec.n_train],
        y=series.y[: spec.n_train],
        start=0,
        washout=spec.washout,
    )

    evaluation = SeriesView(
        u=series.u[spec.n_train : spec.total],
        y=series.y[spec.n_train : spec.total],
        start=spec.n_train,
        washout=0,
    )

    return train, evaluation


def _format_float(value: float) -> str:
    return "{:.17g}".format(value)


def write_series_csv(series: Series, path: Union[str, pathlib.Path]) -> None:
    """Write the series as CSV with the header ``t,u,y`` and full double precision."""
    with open(str(path), "wt", encoding="utf-8", newline="") as fid:
        writer = csv.writer(fid)
        writer.writerow(["t", "u", "y"])
        for t in range(series.length):
            writer.writerow(
                [str(t), _format_float(series.u[t]), _format_float(series.y[t])]
            )


def read_series_csv(path: Union[str, pathlib.Path], seed: int = 0) -> Series:
    """
    Read the series written by :py:func:`write_series_csv`.

    :param path: to the CSV file
    :param seed: seed to be attributed to the series (not stored in the file)
    :return: loaded series
    :raise errors.InvalidArgumentError: if the header, a row or the time index is invalid
    """
    u = []  # type: List[float]
    y = []  # type: List[float]

    with open(str(path), "rt", encoding="utf-8", newline="") as fid:
        reader = csv.reader(fid)
        header = next(reader, None)
        if header != ["t", "u", "y"]:
            raise errors.InvalidArgumentError(
                "Expected the header t,u,y in {}, but got: {!r}".format(path, header)
            )

        for row in reader:
            line = reader.line_num
            if len(row) != 3:
                raise errors.InvalidArgumentError(
                    "Expected 3 columns on line {} of {}, but got {}: {!r}".format(
                        line, path, len(row), row
                    )
                )

            try:
                t = int(row[0])
                u_t = float(row[1])
                y_t = float(row[2])
            except ValueError as exc:
                raise errors.InvalidArgumentError(
                    "Expected an integer and two numbers on line {} of {}, but got: {!r}".format(
                        line, path, row
                    )
                ) from exc

            if t != len(u):
                raise errors.InvalidArgumentError(
                    "Expected the time index {} on line {} of {}, but got: {}".format(
                        len(u), line, path, row[0]
                    )
                )
            u.append(u_t)
            y.append(y_t)

    return Series(u=np.array(u), y=np.array(y), seed=seed)
