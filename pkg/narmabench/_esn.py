"""Build and run the Echo State Network reservoir."""
import logging
from typing import Optional  # pylint: disable=unused-import

import icontract
import numpy as np
import scipy.linalg
import scipy.sparse.linalg

import narmabench._globals
from narmabench import errors
from narmabench._readout import ReservoirFeatures, with_bias
from narmabench._seeding import Concern, generator_for

LOGGER = logging.getLogger(__name__)

#: Tolerance of the power iteration on the relative change of the eigenvalue estimate
POWER_TOLERANCE = 1e-9

#: Tolerance on the change of the normalized vector once the eigenvalue estimate settled
EIGENVECTOR_TOLERANCE = 1e-7

#: Maximum number of power iterations before falling back to an eigensolver
POWER_MAX_ITERATIONS = 1000

#: Largest reservoir for which the fallback uses the dense eigensolver
DENSE_LIMIT = 1000

#: How many consecutive seeds we try if the masked internal weights have no nonzero eigenvalue
MAX_REBUILDS = 100


@icontract.invariant(lambda self: self.n_nodes >= 1, error=errors.InvalidArgumentError)
@icontract.invariant(
    lambda self: self.spectral_radius > 0.0, error=errors.InvalidArgumentError
)
@icontract.invariant(
    lambda self: 0.0 <= self.internal_sparsity <= 1.0
    and 0.0 <= self.input_sparsity <= 1.0,
    error=errors.InvalidArgumentError,
)
@icontract.invariant(lambda self: self.input_scale >= 0.0, error=errors.InvalidArgumentError)
@icontract.invariant(lambda self: self.washout >= 0, error=errors.InvalidArgumentError)
class EsnConfig:
    """Configure the Echo State Network."""

    def __init__(
        self,
        n_nodes: int = 300,
        spectral_radius: float = 0.9,
        internal_sparsity: float = 0.2,
        input_sparsity: float = 0.5,
        input_scale: float = 0.1,
        washout: int = 100,
        seed: int = 0,
    ) -> None:
        """
        Initialize with the given values.

        :param n_nodes: number of reservoir nodes N
        :param spectral_radius: spectral radius ρ of the internal weights
        :param internal_sparsity: fraction p of nonzero internal weights
        :param input_sparsity: fraction p_in of nonzero input weights
        :param input_scale: nonzero input weights are drawn from [−σ, σ]
        :param washout: number of leading states excluded from the readout training
        :param seed: master seed of the weights
        """
        self.n_nodes = n_nodes
        self.spectral_radius = float(spectral_radius)
        self.internal_sparsity = float(internal_sparsity)
        self.input_sparsity = float(input_sparsity)
        self.input_scale = float(input_scale)
        self.washout = washout
        self.seed = seed

    @property
    def internal_count(self) -> int:
        """Count the nonzero internal weights, ⌊p·N²⌋."""
        return int(np.floor(self.internal_sparsity * self.n_nodes**2))

    @property
    def input_count(self) -> int:
        """Count the nonzero input weights, ⌊p_in·N⌋."""
        return int(np.floor(self.input_sparsity * self.n_nodes))

    def __repr__(self) -> str:
        """Represent with the constructor."""
        return (
            "EsnConfig(n_nodes={}, spectral_radius={}, internal_sparsity={}, "
            "input_sparsity={}, input_scale={}, washout={}, seed={})"
        ).format(
            self.n_nodes,
            self.spectral_radius,
            self.internal_sparsity,
            self.input_sparsity,
            self.input_scale,
            self.washout,
            self.seed,
        )


@icontract.invariant(
    lambda self: self.weights.shape == (self.config.n_nodes, self.config.n_nodes)
)
@icontract.invariant(lambda self: self.input_weights.shape == (self.config.n_nodes,))
@icontract.invariant(
    lambda self: bool(
        np.all(np.abs(self.input_weights) <= self.config.input_scale)
    ),
    "input weights in [−σ, σ]",
)
class EsnReservoir:
    """Hold the fixed weights of an Echo State Network."""

    def __init__(
        self, weights: np.ndarray, input_weights: np.ndarray, config: EsnConfig, seed_used: int
    ) -> None:
        """
        Initialize with the given values.

        :param weights: N × N internal weights W
        :param input_weights: N input weights W_in
        :param config: configuration of the reservoir
        :param seed_used: seed which actually produced the weights (differs from ``config.seed`` on a rebuild)
        """
        self.weights = weights
        self.input_weights = input_weights
        self.config = config
        self.seed_used = seed_used

    @property
    def rebuilt(self) -> bool:
        """Indicate that the configured seed gave degenerate weights and a later seed was used."""
        return self.seed_used != self.config.seed


def _power_iteration(matrix: np.ndarray, rng: np.random.Generator) -> Optional[float]:
    """Estimate |λ_max| by power iteration; return None if the estimate does not settle."""
    vector = rng.standard_normal(matrix.shape[0])
    vector /= np.linalg.norm(vector)

    estimate = 0.0
    for _ in range(POWER_MAX_ITERATIONS):
        image = matrix @ vector
        norm = float(np.linalg.norm(image))
        if norm == 0.0:
            return 0.0

        normalized = image / norm
        if abs(norm - estimate) <= POWER_TOLERANCE * norm:
            # The eigenvalue is real and isolated only if the vector settled as well (up to sign).
            residual = min(
                np.linalg.norm(normalized - vector), np.linalg.norm(normalized + vector)
            )
            return norm if residual <= EIGENVECTOR_TOLERANCE else None

        estimate = norm
        vector = normalized

    return None


def spectral_radius(matrix: np.ndarray, seed: int = 0) -> float:
    """
    Compute the largest eigenvalue magnitude of a square ``matrix``.

    Power iteration settles only if the dominant eigenvalue is real and isolated; a complex
    dominant pair (common for random non-symmetric matrices) makes the estimate oscillate.
    In that case we fall back to the dense eigensolver for small matrices and to ARPACK otherwise.

    :param matrix: square matrix
    :param seed: seed of the start vector of the power iteration
    :return: spectral radius
    """
    if matrix.shape[0] == 1:
        return float(abs(matrix[0, 0]))

    estimate = _power_iteration(matrix, np.random.default_rng(seed))
    if estimate is not None:
        return estimate

    if matrix.shape[0] <= DENSE_LIMIT:
        return float(np.max(np.abs(scipy.linalg.eigvals(matrix))))

    eigenvalues = scipy.sparse.linalg.eigs(
        matrix, k=1, which="LM", return_eigenvectors=False, tol=POWER_TOLERANCE
    )
    return float(np.abs(eigenvalues[0]))


def _masked_uniform(
    rng: np.random.Generator, shape: tuple, count: int, scale: float
) -> np.ndarray:
    """Draw exactly ``count`` nonzero entries uniformly from [−scale, scale] at positions chosen without replacement."""
    size = int(np.prod(shape))
    values = np.zeros(size, dtype=np.float64)
    positions = rng.choice(size, size=count, replace=False)
    values[positions] = rng.uniform(-scale, scale, size=count)
    return values.reshape(shape)


@icontract.ensure(
    lambda result: abs(
        float(np.max(np.abs(scipy.linalg.eigvals(result.weights))))
        - result.config.spectral_radius
    )
    <= 1e-6,
    "spectral radius matches the configuration",
    enabled=narmabench._globals.SLOW,
)
@icontract.ensure(
    lambda result: np.count_nonzero(result.weights) <= result.config.internal_count
)
def build_reservoir(config: EsnConfig) -> EsnReservoir:
    """
    Draw the fixed weights of the reservoir.

    The internal weights are drawn from [−1, 1] at ⌊p·N²⌋ positions and rescaled to the spectral
    radius ρ; the input weights are drawn from [−σ, σ] at ⌊p_in·N⌋ positions.

    If the masked internal weights have no nonzero eigenvalue, the weights are rebuilt with the
    next seed and the substitution is recorded in the result.

    :param config: configuration of the reservoir
    :return: reservoir with the fixed weights
    :raise errors.InvalidArgumentError: if no seed gives a rescalable reservoir (*e.g.*, p = 0)
    """
    n_nodes = config.n_nodes

    for attempt in range(MAX_REBUILDS):
        seed = config.seed + attempt
        rng = generator_for(seed, Concern.ESN)

        weights = _masked_uniform(rng, (n_nodes, n_nodes), config.internal_count, 1.0)
        input_weights = _masked_uniform(
            rng, (n_nodes,), config.input_count, config.input_scale
        )

        radius = spectral_radius(weights, seed=seed)
        if radius == 0.0:
            LOGGER.warning(
                "The internal weights of the ESN for seed %d have no nonzero eigenvalue; rebuilding.",
                seed,
            )
            continue

        weights *= config.spectral_radius / radius

        return EsnReservoir(
            weights=weights, input_weights=input_weights, config=config, seed_used=seed
        )

    raise errors.InvalidArgumentError(
        "The internal weights could not be rescaled for any of the seeds {} to {}; "
        "check the internal sparsity {}.".format(
            config.seed, config.seed + MAX_REBUILDS - 1, config.internal_sparsity
        )
    )


@icontract.require(lambda u: len(u) > 0)
@icontract.require(
    lambda reservoir, initial_state: initial_state is None
    or np.shape(initial_state) == (reservoir.config.n_nodes,),
    error=errors.InvalidArgumentError,
)
@icontract.ensure(
    lambda reservoir, u, result: result.matrix.shape
    == (len(u), reservoir.config.n_nodes + 1)
)
def run_reservoir(
    reservoir: EsnReservoir, u: np.ndarray, initial_state: Optional[np.ndarray] = None
) -> ReservoirFeatures:
    """
    Iterate x_t = tanh(W·x_{t−1} + W_in·u_{t−1}) and harvest [x_t; 1] for every time step.

    The first row is the initial state x_0 (zero unless given), which amounts to u_{−1} = 0.

    :param reservoir: fixed weights
    :param u: inputs
    :param initial_state: optional x_0
    :return: T × (N+1) features with the washout rows flagged
    """
    inputs = np.asarray(u, dtype=np.float64)
    length = inputs.shape[0]
    n_nodes = reservoir.config.n_nodes

    states = np.empty((length, n_nodes), dtype=np.float64)
    state = (
        np.zeros(n_nodes, dtype=np.float64)
        if initial_state is None
        else np.asarray(initial_state, dtype=np.float64)
    )
    states[0] = state

    weights = reservoir.weights
    input_weights = reservoir.input_weights
    for t in range(1, length):
        state = np.tanh(weights @ state + input_weights * inputs[t - 1])
        states[t] = state

    return with_bias(states, washout=min(reservoir.config.washout, length))
