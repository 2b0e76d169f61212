# -*- coding: utf-8 -*-
from collections import namedtuple

import numpy as np
from scipy.stats import rankdata


class UndefinedResultError(Exception):
    pass


SeriesSummary = namedtuple('SeriesSummary', ['name', 'mean', 'sd', 'min', 'max', 'count'])


def spearman(x, y):
    """
    Spearman rank correlation, ties resolved with average ranks.

    Raises :class:`UndefinedResultError` for fewer than 3 pairs or when either argument has no rank variance (all tied).
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)

    if x.shape != y.shape or x.ndim != 1:
        raise UndefinedResultError("Spearman correlation needs two vectors of equal length")

    if x.shape[0] < 3:
        raise UndefinedResultError("Spearman correlation needs at least 3 pairs, got %d" % x.shape[0])

    rx = rankdata(x, method='average')
    ry = rankdata(y, method='average')
    dx = rx - rx.mean()
    dy = ry - ry.mean()

    denom = np.sqrt(np.dot(dx, dx) * np.dot(dy, dy))
    if denom == 0:
        raise UndefinedResultError("Spearman correlation is undefined when all values of an argument tie")

    return float(min(1.0, max(-1.0, np.dot(dx, dy) / denom)))


def gini(values):
    """
    Gini coefficient of non-negative values, sum((2i - n - 1) * x_(i)) / (n * sum(x)) over the ascending sort.
    Bounded by 1 - 1/n.
    """
    xs = np.sort(np.asarray(values, dtype=np.float64))
    n = xs.shape[0]

    if n == 0:
        raise UndefinedResultError("Gini coefficient of an empty vector")

    if np.any(xs < 0):
        raise UndefinedResultError("Gini coefficient is not defined for negative values")

    total = np.sum(xs)
    if not total > 0:
        raise UndefinedResultError("Gini coefficient is not defined for non-positive totals")

    ranks = 2.0 * np.arange(1, n + 1, dtype=np.float64) - n - 1
    return float(max(np.sum(ranks * xs) / (n * total), 0.0))


def summarize(series, name=''):
    values = np.asarray(series, dtype=np.float64)

    if values.size == 0:
        raise UndefinedResultError("Cannot summarize an empty series%s" % (" '%s'" % name if name else ''))

    low, high = float(np.min(values)), float(np.max(values))
    mean = min(max(float(np.mean(values)), low), high)  # min <= mean <= max under rounding
    sd = float(np.std(values, ddof=1)) if values.size > 1 else 0.0

    return SeriesSummary(name, mean, sd, low, high, int(values.size))
