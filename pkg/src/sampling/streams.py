from enum import IntEnum

import numpy as np


class Block(IntEnum):
    """Gibbs blocks; the value is part of every substream key."""
    PHI = 1
    LOADINGS = 2
    FACTORS = 3
    VARIANCES = 4
    STOCHVOL = 5
    TV_LOADINGS = 6
    DOF = 7
    SHRINKAGE = 8


def substream(seed: int, iteration: int, block: Block, task: int = 0) -> np.random.Generator:
    """
    Independent generator for one (iteration, block, task) cell of a chain.
    Keyed purely by position, so serial and threaded schedules consume
    identical randomness.
    """
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(iteration), int(block), int(task)))
    return np.random.Generator(np.random.PCG64(sequence))
