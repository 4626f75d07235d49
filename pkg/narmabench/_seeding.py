"""Derive independent random generators from a single master seed."""
import enum

import icontract
import numpy as np


class Concern(enum.Enum):
    """Enumerate the consumers of randomness which must not share a stream."""

    DATA = 0
    ESN = 1
    HAAR = 2
    SHOTS = 3
    LSTM = 4
    QLSTM = 5
    PROBE = 6


@icontract.require(lambda master_seed: master_seed >= 0)
def derive_seed_sequence(
    master_seed: int, concern: Concern, *indices: int
) -> np.random.SeedSequence:
    """
    Derive the seed sequence of ``concern`` under ``master_seed``.

    The sequence depends only on the triple, so that re-rolling a single concern
    (*e.g.*, the Haar unitary) leaves the streams of all the other concerns intact.

    :param master_seed: seed of the whole experiment
    :param concern: consumer of the randomness
    :param indices: further spawn-key components (*e.g.*, the shot index)
    :return: independent seed sequence
    """
    return np.random.SeedSequence(
        entropy=master_seed, spawn_key=(concern.value,) + tuple(indices)
    )


def generator_for(master_seed: int, concern: Concern, *indices: int) -> np.random.Generator:
    """Create a fresh generator of ``concern`` under ``master_seed``."""
    return np.random.default_rng(derive_seed_sequence(master_seed, concern, *indices))
