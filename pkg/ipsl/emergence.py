# -*- coding: utf-8 -*-
"""
Emergence of the three-tier structure: preferential-attachment growth, the scale-free check on the resulting degree
distribution, tier assignment by degree centrality and the bridge to a layered :class:`InfluenceGraph`.
"""
import csv
import logging
import math
from collections import Counter

import networkx as nx
import numpy as np
from scipy.optimize import brentq
from scipy.special import zeta

from .organization import Tier, InfluenceGraph, ConfigurationError


logger = logging.getLogger(__name__)


class StructuralError(Exception):
    pass


class EstimationError(Exception):
    pass


class TierAssignment(dict):

    """
    Node id -> :class:`Tier` map, together with the fractions it was built from
    """

    def __init__(self, tiers, f_out=None, f_in=None):
        super(TierAssignment, self).__init__(tiers)
        self.f_out = f_out
        self.f_in = f_in

    def members(self, tier):
        return sorted(node for node, t in self.items() if t is tier)

    def sizes(self):
        counts = Counter(self.values())
        return tuple(counts.get(t, 0) for t in Tier)


def grow_network(n, m, rng):
    """
    Barabási–Albert growth seeded by a clique of m + 1 nodes; every later node attaches m edges to distinct existing
    nodes chosen with probability proportional to their degree. The result has exactly
    m(m + 1)/2 + (n - m - 1)m edges and is connected.
    """
    if int(m) != m or m < 1:
        raise ConfigurationError('m', "must be an integer >= 1, got %r" % m)

    if int(n) != n or n <= m:
        raise ConfigurationError('n', "must be an integer > m = %d, got %r" % (m, n))

    graph = nx.barabasi_albert_graph(int(n), int(m), seed=int(rng.integers(0, 2 ** 32)),
                                     initial_graph=nx.complete_graph(int(m) + 1))

    logger.debug("Grew a %d node network with %d edges (m=%d)", graph.number_of_nodes(), graph.number_of_edges(), m)
    return graph


def degree_distribution(g):
    return dict(Counter(degree for _, degree in g.degree()))


def _fit_points(dist, k_min):
    degrees = np.array(sorted(k for k, c in dist.items() if k >= k_min and c > 0), dtype=np.float64)

    if degrees.shape[0] < 3:
        raise EstimationError("Need at least 3 distinct degrees >= %d to fit a power law, got %d" % (k_min, degrees.shape[0]))

    counts = np.array([dist[int(k)] for k in degrees], dtype=np.float64)
    return degrees, counts


def _fit_ccdf(degrees, counts, dist):
    # P(K >= k) over the whole sample, evaluated at the fitted degrees
    total = float(sum(dist.values()))
    at_or_above = np.array([sum(c for k, c in dist.items() if k >= d) for d in degrees], dtype=np.float64)

    slope = np.polyfit(np.log(degrees), np.log(at_or_above / total), 1)[0]
    return 1.0 + abs(slope)


def _fit_pdf(degrees, counts):
    slope = np.polyfit(np.log(degrees), np.log(counts), 1)[0]
    return abs(slope)


def _fit_mle(degrees, counts, k_min):
    # discrete power law above k_min: maximise -gamma * sum(log k) - n * log(zeta(gamma, k_min))
    n = counts.sum()
    mean_log = np.dot(counts, np.log(degrees)) / n

    def score(gamma, h=1e-6):
        log_zeta = lambda g: math.log(zeta(g, k_min))
        return -(log_zeta(gamma + h) - log_zeta(gamma - h)) / (2 * h) - mean_log

    try:
        return brentq(score, 1.0 + 1e-3, 20.0, xtol=1e-10)
    except ValueError:
        raise EstimationError("Maximum-likelihood exponent is outside (1, 20]")


def fit_power_law(dist, k_min=1, method='ccdf'):
    """
    Estimates the density exponent gamma of p(k) ~ k^-gamma from a degree -> count map, using only degrees >= k_min.

    :param method: ``ccdf`` (default), least squares slope of log P(K >= k) against log k, gamma = 1 + |slope|;
                   ``pdf``, least squares slope of log count against log k, gamma = |slope|;
                   ``mle``, discrete maximum likelihood with the Hurwitz zeta normaliser.
    """
    if k_min < 1:
        raise EstimationError("k_min must be >= 1 so log(k) is defined, got %r" % k_min)

    degrees, counts = _fit_points(dist, k_min)

    if method == 'ccdf':
        return float(_fit_ccdf(degrees, counts, dist))
    elif method == 'pdf':
        return float(_fit_pdf(degrees, counts))
    elif method == 'mle':
        return float(_fit_mle(degrees, counts, k_min))
    else:
        raise EstimationError("Unknown estimator '%s', expected ccdf, pdf or mle" % method)


def _tier_size(fraction, n):
    return int(math.ceil(fraction * n - 1e-9))


def assign_tiers(g, f_out, f_in):
    """
    Ranks nodes by degree (descending, ties by ascending id): the top ceil(f_out * n) become the output layer, the bottom
    ceil(f_in * n) the input layer and everything in between the hidden layer.
    """
    n = g.number_of_nodes()

    for field, fraction in (('f_out', f_out), ('f_in', f_in)):
        if not 0 < fraction < 1:
            raise ConfigurationError(field, "must lie in (0, 1), got %r" % fraction)

    if not f_out + f_in < 1:
        raise ConfigurationError('f_out/f_in', "fractions must sum to less than 1, got %r" % (f_out + f_in))

    n_out, n_in = _tier_size(f_out, n), _tier_size(f_in, n)
    if not n_out + n_in < n:
        raise ConfigurationError('f_out/f_in', "%d output and %d input nodes leave no hidden node out of %d" % (n_out, n_in, n))

    ranked = sorted(g.nodes(), key=lambda node: (-g.degree(node), node))

    tiers = {}
    for position, node in enumerate(ranked):
        if position < n_out:
            tiers[node] = Tier.OUTPUT
        elif position >= n - n_in:
            tiers[node] = Tier.INPUT
        else:
            tiers[node] = Tier.HIDDEN

    return TierAssignment(tiers, f_out, f_in)


def bridge(g, tiers):
    """
    Same as :func:`to_influence_graph` but also returns how many repair edges had to be added
    """
    members = dict((tier, tiers.members(tier)) for tier in Tier)

    for tier in Tier:
        if not members[tier]:
            raise StructuralError("The %s tier is empty, no layered organization can be built" % tier.value)

    position = dict((tier, dict((node, k) for k, node in enumerate(members[tier]))) for tier in Tier)
    w_ih = np.zeros((len(members[Tier.INPUT]), len(members[Tier.HIDDEN])))
    w_ho = np.zeros((len(members[Tier.HIDDEN]), len(members[Tier.OUTPUT])))

    for u, v in g.edges():
        pair = dict(((tiers[u], u), (tiers[v], v))) if tiers[u] is not tiers[v] else {}

        if Tier.INPUT in pair and Tier.HIDDEN in pair:
            w_ih[position[Tier.INPUT][pair[Tier.INPUT]], position[Tier.HIDDEN][pair[Tier.HIDDEN]]] = 1.0
        elif Tier.HIDDEN in pair and Tier.OUTPUT in pair:
            w_ho[position[Tier.HIDDEN][pair[Tier.HIDDEN]], position[Tier.OUTPUT][pair[Tier.OUTPUT]]] = 1.0

    top_hidden = position[Tier.HIDDEN][min(members[Tier.HIDDEN], key=lambda node: (-g.degree(node), node))]
    top_output = position[Tier.OUTPUT][min(members[Tier.OUTPUT], key=lambda node: (-g.degree(node), node))]

    repairs = 0
    for row in np.flatnonzero(~np.any(w_ih > 0, axis=1)):
        w_ih[row, top_hidden] = 1.0
        repairs += 1

    for row in np.flatnonzero(~np.any(w_ho > 0, axis=1)):
        w_ho[row, top_output] = 1.0
        repairs += 1

    if repairs:
        logger.debug("Bridged %d nodes into the layered structure with %d repair edges", g.number_of_nodes(), repairs)

    return InfluenceGraph(w_ih, w_ho).validate(), repairs


def to_influence_graph(g, tiers):
    """
    Keeps input-hidden and hidden-output edges as weight 1 entries, drops same-tier and input-output edges, then
    connects every stranded input node to the highest-degree hidden node and every stranded hidden node to the
    highest-degree output node. Rows and columns follow ascending node id within each tier.
    """
    return bridge(g, tiers)[0]


def write_edge_list(g, stream):
    stream.write("# nodes=%d\n" % g.number_of_nodes())

    for u, v in sorted(tuple(sorted(edge)) for edge in g.edges()):
        stream.write("%d %d\n" % (u, v))


def read_edge_list(stream):
    header = stream.readline().strip()
    if not header.startswith('# nodes='):
        raise StructuralError("Edge list must start with '# nodes=<n>', got '%s'" % header)

    try:
        n = int(header[len('# nodes='):])
    except ValueError:
        raise StructuralError("Edge list header needs an integer node count, got '%s'" % header)

    if n < 0:
        raise StructuralError("Edge list header has a negative node count %d" % n)

    g = nx.Graph()
    g.add_nodes_from(range(n))

    for lineno, line in enumerate(stream, 2):
        fields = line.split()
        if not fields:
            continue

        try:
            u, v = (int(f) for f in fields)
        except ValueError:
            raise StructuralError("Line %d: expected 'u v', got '%s'" % (lineno, line.rstrip('\n')))

        if u == v or not (g.has_node(u) and g.has_node(v)) or g.has_edge(u, v):
            raise StructuralError("Line %d: self-loop, duplicate or out-of-range edge %d %d" % (lineno, u, v))

        g.add_edge(u, v)

    return g


def write_tiers(tiers, stream):
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(['node_id', 'tier'])

    for node in sorted(tiers):
        writer.writerow([node, tiers[node].value])


def read_tiers(stream):
    reader = csv.reader(stream)
    if next(reader, None) != ['node_id', 'tier']:
        raise StructuralError("Tier file must start with the header 'node_id,tier'")

    tiers = {}
    for row in reader:
        try:
            node, tier = row
            tiers[int(node)] = Tier(tier)
        except ValueError:
            raise StructuralError("Line %d: expected 'node_id,tier' with a known tier, got '%s'" % (
                reader.line_num, ','.join(row)))

    return TierAssignment(tiers)
