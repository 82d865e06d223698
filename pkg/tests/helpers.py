import random

from toroidal.padic import PadicInt
from toroidal.powerseries import BivariateSeries


def gamma(p, M=20):
    return PadicInt.of(1 + p, p, M)


def series(terms, p=3, D=4, M=10, g=None):
    return BivariateSeries.build(p, D, M, terms, g or gamma(p, M + 2))


def rand_terms(rng: random.Random, p, D, M, unit=False):
    t = {(a, d - a): rng.randrange(p**M) for d in range(D + 1) for a in range(d + 1)}
    if unit:
        t[(0, 0)] = rng.randrange(1, p)
    return t
