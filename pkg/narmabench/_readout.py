"""Fit and apply the closed-form linear readout shared by the reservoir models."""
import logging
import warnings
from typing import Optional, Union  # pylint: disable=unused-import

import icontract
import numpy as np
import scipy.linalg

from narmabench import errors

LOGGER = logging.getLogger(__name__)

#: Ridge coefficient used unless configured otherwise; only numerical jitter
DEFAULT_RIDGE = 1e-8

#: Relative threshold on the diagonal of R below which the least-squares problem is rank deficient
RANK_TOLERANCE = 1e-12


@icontract.invariant(lambda self: self.matrix.ndim == 2)
@icontract.invariant(lambda self: 0 <= self.washout <= self.matrix.shape[0])
class ReservoirFeatures:
    """
    Hold the per-time-step features harvested from a reservoir.

    If ``has_bias`` is set, the last column is the constant one.
    """

    def __init__(self, matrix: np.ndarray, washout: int = 0, has_bias: bool = True) -> None:
        """
        Initialize with the given values.

        :param matrix: T × width feature matrix
        :param washout: number of leading rows flagged as washout
        :param has_bias: whether the last column is the bias column
        """
        self.matrix = matrix
        self.washout = washout
        self.has_bias = has_bias

    @property
    def length(self) -> int:
        """Count the time steps."""
        return int(self.matrix.shape[0])

    @property
    def width(self) -> int:
        """Count the columns including the bias column."""
        return int(self.matrix.shape[1])

    @property
    def states(self) -> np.ndarray:
        """Give the features without the bias column."""
        return self.matrix[:, :-1] if self.has_bias else self.matrix

    @property
    def washout_mask(self) -> np.ndarray:
        """Flag the washout rows with ``True``."""
        mask = np.zeros(self.length, dtype=bool)
        mask[: self.washout] = True
        return mask


def with_bias(states: np.ndarray, washout: int = 0) -> ReservoirFeatures:
    """Append the bias column of ones to the ``states`` ([x_t; 1])."""
    matrix = np.hstack([states, np.ones((states.shape[0], 1), dtype=states.dtype)])
    return ReservoirFeatures(matrix=matrix, washout=washout, has_bias=True)


@icontract.invariant(lambda self: bool(np.all(np.isfinite(self.weights))))
@icontract.invariant(lambda self: self.ridge >= 0.0)
class TrainedReadout:
    """Represent the fitted linear map ŷ = X·w."""

    def __init__(self, weights: np.ndarray, ridge: float, has_bias: bool = True) -> None:
        """
        Initialize with the given values.

        :param weights: vector (one target) or width × k matrix (k targets)
        :param ridge: regularization coefficient used in the fit
        :param has_bias: whether the last weight belongs to the bias column
        """
        self.weights = weights
        self.ridge = ridge
        self.has_bias = has_bias

    @property
    def width(self) -> int:
        """Count the weights per target including the bias weight."""
        return int(self.weights.shape[0])

    @property
    def feature_dim(self) -> int:
        """Count the weights per target excluding the bias weight."""
        return self.width - 1 if self.has_bias else self.width

    @property
    def parameter_count(self) -> int:
        """Count all the trainable weights."""
        return int(self.weights.size)


def _solve_least_squares(design: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve min ‖design·w − rhs‖ by QR and fall back to the minimum-norm SVD solution if rank deficient."""
    q, r = scipy.linalg.qr(design, mode="economic")
    diagonal = np.abs(np.diag(r))

    if diagonal.size > 0 and np.min(diagonal) > RANK_TOLERANCE * np.max(diagonal):
        return scipy.linalg.solve_triangular(r, q.T @ rhs)

    message = (
        "The least-squares design matrix of shape {} is rank deficient; "
        "using the minimum-norm solution."
    ).format(design.shape)
    LOGGER.warning(message)
    warnings.warn(message, RuntimeWarning)

    solution, _, _, _ = scipy.linalg.lstsq(design, rhs, lapack_driver="gelsd")
    return solution


@icontract.require(
    lambda features, targets: features.length == np.shape(targets)[0],
    "targets aligned with the features",
    error=errors.InvalidArgumentError,
)
@icontract.require(
    lambda features: features.length - features.washout >= features.width,
    "at least as many post-washout rows as columns",
    error=errors.InvalidArgumentError,
)
@icontract.require(lambda ridge: ridge >= 0.0, error=errors.InvalidArgumentError)
@icontract.ensure(lambda features, result: result.width == features.width)
def fit_readout(
    features: ReservoirFeatures,
    targets: np.ndarray,
    ridge: float = DEFAULT_RIDGE,
) -> TrainedReadout:
    """
    Fit the readout w = argmin ‖X·w − y‖² + λ‖w‖² on the post-washout rows.

    The problem is solved as the least-squares problem of the stacked matrix [X; √λ·I], so
    no normal equations are formed and no matrix is inverted. ``ridge = 0`` gives ordinary
    least squares.

    :param features: features with the washout flags
    :param targets: vector of T targets or T × k matrix of targets
    :param ridge: regularization coefficient λ
    :return: fitted readout
    """
    design = features.matrix[features.washout :]
    rhs = np.asarray(targets, dtype=np.float64)[features.washout :]

    if ridge > 0.0:
        width = design.shape[1]
        design = np.vstack([design, np.sqrt(ridge) * np.eye(width)])
        padding = np.zeros((width,) + rhs.shape[1:], dtype=np.float64)
        rhs = np.concatenate([rhs, padding], axis=0)

    weights = _solve_least_squares(design, rhs)
    return TrainedReadout(weights=weights, ridge=ridge, has_bias=features.has_bias)


@icontract.require(
    lambda readout, features: readout.width == features.width,
    "feature width matches the readout",
    error=errors.InvalidArgumentError,
)
def apply_readout(readout: TrainedReadout, features: ReservoirFeatures) -> np.ndarray:
    """Compute the predictions ŷ = X·w for every row of the ``features``."""
    return features.matrix @ readout.weights
