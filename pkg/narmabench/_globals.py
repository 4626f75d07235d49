"""Define global variables used among the modules."""

import os

# SLOW provides a unified environment variable (NARMABENCH_SLOW) to enable the contracts and the tests
# which are slow to execute.
#
# Use SLOW to mark any contracts that are too slow for the normal (__debug__) execution, such as the unitarity
# of a full matrix or a dense eigensolver cross-check.
#
# Contracts marked with SLOW are also disabled if the interpreter is run in optimized mode (``-O`` or ``-OO``).
SLOW = __debug__ and os.environ.get("NARMABENCH_SLOW", "") != ""

#: Environment variable which overrides the master seed of a benchmark configuration
SEED_ENV_VAR = "NARMABENCH_SEED"

#: Absolute tolerance on the norm of a quantum state
NORM_TOLERANCE = 1e-10

#: Absolute tolerance on the entries of U·U† − I
UNITARITY_TOLERANCE = 1e-9
