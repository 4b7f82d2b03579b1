import torch
import pyro


def auto_seed(seed):
    """Seed torch, numpy and random through pyro; a negative seed draws a fresh one.

    Returns the seed actually used so scripts can log it.
    """
    if seed >= 0:
        pyro.set_rng_seed(seed)
    else:
        seed = int(torch.rand(tuple()) * 2 ** 30)
        pyro.set_rng_seed(seed)
    return seed


def seeded_generator(seed):
    return torch.Generator().manual_seed(int(seed))
