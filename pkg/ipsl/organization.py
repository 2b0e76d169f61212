# -*- coding: utf-8 -*-
import logging
from collections import namedtuple
from enum import Enum

import numpy as np

from .random_stream import open_streams


logger = logging.getLogger(__name__)


class ConfigurationError(Exception):

    def __init__(self, field, message):
        super(ConfigurationError, self).__init__("Invalid configuration for '%s': %s" % (field, message))
        self.field = field


class ContractViolation(Exception):
    pass


class InvariantViolation(Exception):
    pass


class Tier(Enum):
    INPUT = 'input'
    HIDDEN = 'hidden'
    OUTPUT = 'output'


class Outcome(Enum):
    SUCCESS = 'success'
    FAILURE = 'failure'
    UNRESOLVED = 'unresolved'


Agent = namedtuple('Agent', ['id', 'tier', 'accuracy', 'status'])

Opportunity = namedtuple('Opportunity', ['id', 'latent_quality', 'origin', 'fate'], defaults=[None])


class Project(object):

    """
    An opportunity on its way through the organization. ``origin`` (on the opportunity) is an input index,
    ``champion`` a hidden column of the influence graph and ``selector`` an output column.
    """

    __slots__ = ('opportunity', 'perceived_quality', 'champion', 'selector', 'funded', 'outcome', 'payoff', 'funded_at')

    def __init__(self, opportunity, perceived_quality, champion=None):
        self.opportunity = opportunity
        self.perceived_quality = perceived_quality
        self.champion = champion
        self.selector = None
        self.funded = False
        self.outcome = Outcome.UNRESOLVED
        self.payoff = 0.0
        self.funded_at = None

    @property
    def origin(self):
        return self.opportunity.origin

    @property
    def quality(self):
        return self.opportunity.latent_quality

    @property
    def resolved(self):
        return self.outcome is not Outcome.UNRESOLVED

    def fund(self, selector, tick=None):
        self.funded = True
        self.selector = selector
        self.funded_at = tick

    def __repr__(self):
        return "Project(opportunity=%d, champion=%s, selector=%s, outcome=%s)" % (
            self.opportunity.id, self.champion, self.selector, self.outcome.value)


class EnvParams(object):

    def __init__(self, arrival_rate=6.0, quality_alpha=0.1, quality_beta=0.2, tension=0.0, horizon=500):
        self.arrival_rate = arrival_rate
        self.quality_alpha = quality_alpha
        self.quality_beta = quality_beta
        self.tension = tension
        self.horizon = horizon

    def validate(self):
        if not self.arrival_rate >= 0:
            raise ConfigurationError('arrival_rate', "must be >= 0, got %r" % self.arrival_rate)

        for field in ('quality_alpha', 'quality_beta'):
            if not getattr(self, field) > 0:
                raise ConfigurationError(field, "must be > 0, got %r" % getattr(self, field))

        if not self.tension >= 0:
            raise ConfigurationError('tension', "must be >= 0, got %r" % self.tension)

        if int(self.horizon) != self.horizon or self.horizon < 1:
            raise ConfigurationError('horizon', "must be an integer >= 1, got %r" % self.horizon)

        return self

    def replace(self, **changes):
        params = dict(vars(self))
        params.update(changes)
        return EnvParams(**params)

    def __eq__(self, other):
        return isinstance(other, EnvParams) and vars(self) == vars(other)

    def __repr__(self):
        return "EnvParams(%s)" % ", ".join("%s=%r" % kv for kv in sorted(vars(self).items()))


class SimConfig(object):

    """
    Every tunable constant of one IPSL run. ``budget`` is the number of projects funded per tick (K), ``tau`` the
    selection temperature, ``eta_status``/``eta_rep`` the multiplicative learning rates. With ``normalize`` every status
    layer and the hidden reputations are rescaled to sum to the layer size after each update; reputations are then
    kept at or above ``reputation_floor``.
    """

    def __init__(self, n_in=6, n_hid=8, n_out=2, budget=2, tau=0.5, eta_status=0.2, eta_rep=0.2, normalize=True,
                 env=None, seed=0, sigma_max=2.0, proposal_threshold=0.5, status_floor=1e-6, reputation_floor=0.1,
                 delay=0):
        self.n_in = n_in
        self.n_hid = n_hid
        self.n_out = n_out
        self.budget = budget
        self.tau = tau
        self.eta_status = eta_status
        self.eta_rep = eta_rep
        self.normalize = normalize
        self.env = env if env is not None else EnvParams()
        self.seed = seed
        self.sigma_max = sigma_max
        self.proposal_threshold = proposal_threshold
        self.status_floor = status_floor
        self.reputation_floor = reputation_floor
        self.delay = delay

    @property
    def layer_sizes(self):
        return self.n_in, self.n_hid, self.n_out

    def validate(self):
        for field in ('n_in', 'n_hid', 'n_out'):
            value = getattr(self, field)
            if int(value) != value or value < 1:
                raise ConfigurationError(field, "layer size must be an integer >= 1, got %r" % value)

        if int(self.budget) != self.budget or self.budget < 1:
            raise ConfigurationError('budget', "must be an integer >= 1, got %r" % self.budget)

        if not self.tau > 0:
            raise ConfigurationError('tau', "must be > 0, got %r" % self.tau)

        for field in ('eta_status', 'eta_rep'):
            value = getattr(self, field)
            if not 0 <= value < 1:
                raise ConfigurationError(field, "learning rate must lie in [0, 1), got %r" % value)

        if not self.sigma_max >= 0:
            raise ConfigurationError('sigma_max', "must be >= 0, got %r" % self.sigma_max)

        if not 0 <= self.proposal_threshold <= 1:
            raise ConfigurationError('proposal_threshold', "must lie in [0, 1], got %r" % self.proposal_threshold)

        if not 0 < self.status_floor < 1:
            raise ConfigurationError('status_floor', "must lie in (0, 1), got %r" % self.status_floor)

        if not 0 < self.reputation_floor < 1:
            raise ConfigurationError('reputation_floor', "must lie in (0, 1), got %r" % self.reputation_floor)

        if int(self.delay) != self.delay or self.delay < 0:
            raise ConfigurationError('delay', "must be an integer >= 0, got %r" % self.delay)

        if int(self.seed) != self.seed or not 0 <= self.seed < 2 ** 64:
            raise ConfigurationError('seed', "must be an unsigned 64-bit integer, got %r" % self.seed)

        self.env.validate()
        return self

    def replace(self, **changes):
        params = dict(vars(self))
        params.update(changes)
        return SimConfig(**params)

    def __eq__(self, other):
        return isinstance(other, SimConfig) and vars(self) == vars(other)

    def __repr__(self):
        return "SimConfig(%s)" % ", ".join("%s=%r" % kv for kv in sorted(vars(self).items()))


class InfluenceGraph(object):

    """
    The layered "synaptic weights" of an organization: ``w_ih[i, h]`` is the relationship weight from input agent i to
    hidden agent h, ``w_ho[h, o]`` the advocacy channel from hidden agent h to output agent o, and ``rep_hid[h]`` the
    reputation of hidden agent h.
    """

    def __init__(self, w_ih, w_ho, rep_hid=None):
        self.w_ih = np.array(w_ih, dtype=np.float64, ndmin=2)
        self.w_ho = np.array(w_ho, dtype=np.float64, ndmin=2)
        self.rep_hid = np.ones(self.n_hid) if rep_hid is None else np.array(rep_hid, dtype=np.float64)

    @staticmethod
    def uniform(n_in, n_hid, n_out, weight=1.0):
        return InfluenceGraph(np.full((n_in, n_hid), weight), np.full((n_hid, n_out), weight))

    @property
    def n_in(self):
        return self.w_ih.shape[0]

    @property
    def n_hid(self):
        return self.w_ih.shape[1]

    @property
    def n_out(self):
        return self.w_ho.shape[1]

    @property
    def layer_sizes(self):
        return self.n_in, self.n_hid, self.n_out

    def input_strength(self):
        """
        Total outgoing relationship weight of every input agent (sum over hidden agents of w_ih)
        """
        return self.w_ih.sum(axis=1)

    def copy(self):
        return InfluenceGraph(self.w_ih.copy(), self.w_ho.copy(), self.rep_hid.copy())

    def validate(self, require_reachable=True):
        if self.w_ho.shape[0] != self.n_hid or self.rep_hid.shape != (self.n_hid,):
            raise InvariantViolation("Layer shapes disagree: w_ih %s, w_ho %s, rep_hid %s" % (
                self.w_ih.shape, self.w_ho.shape, self.rep_hid.shape))

        for name, weights in (('w_ih', self.w_ih), ('w_ho', self.w_ho)):
            if not np.all(np.isfinite(weights) & (weights >= 0) & (weights <= 1)):
                raise InvariantViolation("Weights of %s must lie in [0, 1]" % name)

        if not np.all(np.isfinite(self.rep_hid) & (self.rep_hid >= 0)):
            raise InvariantViolation("Hidden reputations must be finite and >= 0")

        if require_reachable:
            unreachable = np.flatnonzero(~np.any(self.w_ih > 0, axis=1))
            if unreachable.size:
                raise InvariantViolation("Input agents %s have no positive edge into the hidden layer" % unreachable.tolist())

        return self

    def __eq__(self, other):
        return (isinstance(other, InfluenceGraph) and np.array_equal(self.w_ih, other.w_ih)
                and np.array_equal(self.w_ho, other.w_ho) and np.array_equal(self.rep_hid, other.rep_hid))

    def __repr__(self):
        return "InfluenceGraph(%d/%d/%d)" % self.layer_sizes


class Organization(object):

    """
    Mutable single-owner state of one organization: the influence graph, per-layer status vectors and the fixed
    perception accuracy of every input agent. Agents are numbered globally, inputs first, then hidden, then output.
    """

    def __init__(self, graph, accuracy, status_in=None, status_hid=None, status_out=None, require_reachable=True):
        self.graph = graph
        self.accuracy = np.asarray(accuracy, dtype=np.float64)
        self.status = {
            Tier.INPUT: np.ones(graph.n_in) if status_in is None else np.asarray(status_in, dtype=np.float64),
            Tier.HIDDEN: np.ones(graph.n_hid) if status_hid is None else np.asarray(status_hid, dtype=np.float64),
            Tier.OUTPUT: np.ones(graph.n_out) if status_out is None else np.asarray(status_out, dtype=np.float64),
        }
        self.require_reachable = require_reachable

    @property
    def n_agents(self):
        return sum(self.graph.layer_sizes)

    def agent_id(self, tier, index):
        offset = {Tier.INPUT: 0, Tier.HIDDEN: self.graph.n_in, Tier.OUTPUT: self.graph.n_in + self.graph.n_hid}[tier]
        return offset + int(index)

    @property
    def agents(self):
        agents = []
        for tier in Tier:
            for index, status in enumerate(self.status[tier]):
                accuracy = float(self.accuracy[index]) if tier is Tier.INPUT else None
                agents.append(Agent(self.agent_id(tier, index), tier, accuracy, float(status)))

        return agents

    def input_agent(self, index):
        return Agent(index, Tier.INPUT, float(self.accuracy[index]), float(self.status[Tier.INPUT][index]))

    def mean_status(self, tier):
        return float(self.status[tier].mean())

    def copy(self):
        return Organization(self.graph.copy(), self.accuracy.copy(), self.status[Tier.INPUT].copy(),
                            self.status[Tier.HIDDEN].copy(), self.status[Tier.OUTPUT].copy(), self.require_reachable)

    def validate(self):
        """
        Validation walk over every type invariant; raises :class:`InvariantViolation` on the first breach
        """
        self.graph.validate(self.require_reachable)

        if self.accuracy.shape != (self.graph.n_in,) or not np.all(np.isfinite(self.accuracy)
                                                                   & (self.accuracy >= 0) & (self.accuracy <= 1)):
            raise InvariantViolation("Input accuracies must be one value in [0, 1] per input agent")

        for tier, sizes in zip(Tier, self.graph.layer_sizes):
            if self.status[tier].shape != (sizes,):
                raise InvariantViolation("Status vector of the %s layer has the wrong length" % tier.value)

            if not np.all(np.isfinite(self.status[tier]) & (self.status[tier] >= 0)):
                raise InvariantViolation("Statuses of the %s layer must be finite and >= 0" % tier.value)

        return self

    def __eq__(self, other):
        return (isinstance(other, Organization) and self.graph == other.graph
                and np.array_equal(self.accuracy, other.accuracy)
                and all(np.array_equal(self.status[t], other.status[t]) for t in Tier))


def new_organization(config, graph=None, streams=None):
    """
    Builds the initial organization of a run: statuses and reputations all 1.0, weights all 1.0 unless ``graph`` is
    supplied, input accuracies drawn uniformly on [0, 1] from the perception stream of ``streams`` (opened from the
    configured seed when omitted).

    Returns the list of :class:`Agent` snapshots and the :class:`Organization` holding the mutable state.
    """
    config.validate()
    streams = streams if streams is not None else open_streams(config.seed)

    if graph is None:
        graph = InfluenceGraph.uniform(config.n_in, config.n_hid, config.n_out)
        require_reachable = True

    else:
        if graph.layer_sizes != config.layer_sizes:
            raise ConfigurationError('n_in/n_hid/n_out', "supplied graph is %d/%d/%d but the configuration says %d/%d/%d"
                                     % (graph.layer_sizes + config.layer_sizes))
        graph = graph.copy()
        require_reachable = bool(np.all(np.any(graph.w_ih > 0, axis=1)))

    accuracy = streams["perception"].uniform(0.0, 1.0, size=config.n_in)
    organization = Organization(graph, accuracy, require_reachable=require_reachable).validate()

    logger.debug("Created %d/%d/%d organization for seed %d", config.n_in, config.n_hid, config.n_out, config.seed)
    return organization.agents, organization


__all__ = ['ConfigurationError', 'ContractViolation', 'InvariantViolation', 'Tier', 'Outcome', 'Agent', 'Opportunity',
           'Project', 'EnvParams', 'SimConfig', 'InfluenceGraph', 'Organization', 'new_organization']
