# -*- coding: utf-8 -*-
import numpy as np


SUBSTREAMS = ('environment', 'perception', 'routing', 'selection', 'outcomes', 'evolution')


class RandomStreamError(Exception):
    pass


class RandomStream(object):

    """
    Seeded pseudo-random stream built on numpy's PCG64 bit generator.

    A stream is split into named substreams through :class:`numpy.random.SeedSequence` spawn keys, so the draws made
    by one mechanism (say routing) never shift the draws seen by another (say the environment). Two runs that only
    differ by a learning rate therefore face exactly the same opportunities.

    Only the integer-exact bit generator and numpy's own distribution code are used, never the platform libm RNG helpers.
    """

    def __init__(self, seed, spawn_key=()):
        self._seed = int(seed)
        self._spawn_key = tuple(spawn_key)
        self._generator = np.random.Generator(np.random.PCG64(np.random.SeedSequence(self._seed, spawn_key=self._spawn_key)))

    @property
    def seed(self):
        return self._seed

    def substream(self, name):
        if name not in SUBSTREAMS:
            raise RandomStreamError("Unknown substream '%s', expected one of %s" % (name, ", ".join(SUBSTREAMS)))

        return RandomStream(self._seed, self._spawn_key + (SUBSTREAMS.index(name),))

    def spawn(self, index):
        """
        Child stream for the index-th independent consumer (a genome, an episode...), unrelated to the named substreams
        """
        return RandomStream(self._seed, self._spawn_key + (len(SUBSTREAMS) + int(index),))

    def random(self, size=None):
        return self._generator.random(size)

    def uniform(self, low=0.0, high=1.0, size=None):
        return self._generator.uniform(low, high, size)

    def normal(self, loc=0.0, scale=1.0, size=None):
        return self._generator.normal(loc, scale, size)

    def poisson(self, lam, size=None):
        return self._generator.poisson(lam, size)

    def beta(self, a, b, size=None):
        return self._generator.beta(a, b, size)

    def integers(self, low, high=None, size=None):
        return self._generator.integers(low, high, size)

    def sample_without_replacement(self, population, k):
        return self._generator.choice(population, size=k, replace=False)

    def categorical(self, weights):
        """
        Draws an index with probability proportional to the non-negative ``weights``. Uses one uniform draw and an
        inverse-CDF lookup, so the consumed randomness does not depend on the weights.
        """
        cumulative = np.cumsum(weights, dtype=np.float64)
        total = cumulative[-1]

        if not total > 0:
            raise RandomStreamError("Cannot draw from a categorical distribution with zero total weight")

        index = int(np.searchsorted(cumulative, self._generator.random() * total, side='right'))
        return min(index, len(cumulative) - 1)

    def seeds(self, count):
        return [int(s) for s in self._generator.integers(0, 2 ** 63 - 1, size=count, dtype=np.int64)]


def open_streams(seed):
    """
    One independent stream per named mechanism, all derived from the same master ``seed``
    """
    root = RandomStream(seed)
    return dict((name, root.substream(name)) for name in SUBSTREAMS)
