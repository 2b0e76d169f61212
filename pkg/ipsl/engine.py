# -*- coding: utf-8 -*-
import logging
from collections import namedtuple

import numpy as np

from .metrics import spearman, UndefinedResultError
from .organization import (Tier, Outcome, Opportunity, Project, ContractViolation, InvariantViolation,
                           new_organization)
from .random_stream import open_streams


logger = logging.getLogger(__name__)


TickRecord = namedtuple('TickRecord', [
    'tick', 'generated', 'championed', 'funded', 'resolved', 'successes', 'payoff',
    'mean_status_in', 'mean_status_hid', 'mean_status_out', 'spearman_acc_weight',
])


class SimState(object):

    """
    Everything that changes while a run advances: the organization, the tick counter, the opportunity id counter,
    the round-robin selector cursor and the funded projects still playing out.
    """

    def __init__(self, organization, streams):
        self.organization = organization
        self.streams = streams
        self.tick = 0
        self.next_opportunity_id = 0
        self.selector_cursor = 0
        self.pending = []
        self.last_resolved = []

    @property
    def graph(self):
        return self.organization.graph

    @property
    def status(self):
        return self.organization.status


def generate_opportunities(env, n_in, rng, first_id=0):
    """
    Poisson(arrival_rate) new opportunities, each with a Beta(quality_alpha, quality_beta) latent quality, a uniformly
    drawn originating input agent and a uniform fate that decides its outcome if it is ever funded. Ids continue from
    ``first_id``.
    """
    count = int(rng.poisson(env.arrival_rate))
    if count == 0:
        return []

    qualities = rng.beta(env.quality_alpha, env.quality_beta, size=count)
    origins = rng.integers(0, n_in, size=count)
    fates = rng.random(count)

    return [Opportunity(first_id + k, float(q), int(o), float(f))
            for k, (q, o, f) in enumerate(zip(qualities, origins, fates))]


def perceive(agent, opportunity, sigma_max, rng):
    if agent.tier is not Tier.INPUT:
        raise ContractViolation("Only input agents sense opportunities, agent %d is %s" % (agent.id, agent.tier.value))

    if agent.id != opportunity.origin:
        raise ContractViolation("Opportunity %d originates at input %d, not at agent %d" % (
            opportunity.id, opportunity.origin, agent.id))

    noise = rng.normal(0.0, sigma_max * (1.0 - agent.accuracy))
    return min(1.0, max(0.0, opportunity.latent_quality + noise))


def route_proposals(graph, projects, rng):
    """
    Hands every proposal to a hidden champion drawn with probability proportional to ``w_ih[origin, h] * rep_hid[h]``.
    Hidden agents with no positive advocacy channel to the output layer cannot champion. A proposal whose gates are all
    zero is dropped, the returned list keeps the input order of the surviving ones.
    """
    advocates = np.any(graph.w_ho > 0, axis=1)
    championed = []

    for project in projects:
        if project.champion is not None:
            raise ContractViolation("%r already has a champion" % project)

        gates = graph.w_ih[project.origin] * graph.rep_hid * advocates
        if not gates.sum() > 0:
            continue

        project.champion = rng.categorical(gates)
        championed.append(project)

    return championed


ARGMAX_TAU = 1e-9


def is_strict_argmax(statuses, tau):
    """
    True when ``tau`` is past the zero-temperature limit: at or below :data:`ARGMAX_TAU`, or small enough that the
    status spread divided by ``tau`` overflows
    """
    if tau <= ARGMAX_TAU:
        return True

    with np.errstate(over='ignore'):
        return not np.isfinite(np.ptp(statuses) / tau)


def selection_probabilities(statuses, tau):
    """
    Softmax of champion statuses at temperature ``tau``; shifted by the maximum so it is invariant to a common offset.
    In the zero-temperature limit all the mass goes to the first maximal status.
    """
    statuses = np.asarray(statuses, dtype=np.float64)

    if is_strict_argmax(statuses, tau):
        weights = np.zeros(statuses.shape[0])
        weights[int(np.argmax(statuses))] = 1.0
        return weights

    weights = np.exp((statuses - statuses.max()) / tau)
    return weights / weights.sum()


def select_projects(n_out, championed, statuses, budget, tau, rng, cursor=0, tick=None):
    """
    Funds up to ``budget`` championed projects drawn without replacement, each draw weighted by exp(status / tau) of
    the champion. Nothing but champion status enters the draw. Selectors are assigned round-robin in draw order,
    starting at output agent ``cursor``.

    In the zero-temperature limit (see :func:`is_strict_argmax`) the draws become a deterministic ranking by champion
    status, ties going to the lowest opportunity id, and no randomness is consumed.
    """
    if budget < 1 or not tau > 0:
        raise ContractViolation("Selection needs budget >= 1 and tau > 0, got %r and %r" % (budget, tau))

    if len(championed) <= budget:
        chosen = list(range(len(championed)))

    else:
        champion_status = np.array([statuses[p.champion] for p in championed], dtype=np.float64)

        if is_strict_argmax(champion_status, tau):
            ids = [p.opportunity.id for p in championed]
            chosen = [int(k) for k in np.lexsort((ids, -champion_status))[:budget]]

        else:
            remaining = list(range(len(championed)))
            chosen = []

            for _ in range(budget):
                weights = selection_probabilities(champion_status[remaining], tau)
                chosen.append(remaining.pop(rng.categorical(weights)))

    funded = []
    for draw, index in enumerate(chosen):
        project = championed[index]
        project.fund((cursor + draw) % n_out, tick)
        funded.append(project)

    return funded


def realize_outcome(project, tension, rng):
    """
    Succeeds with probability equal to the latent quality. The opportunity's own fate is the uniform compared against
    the quality when it has one, otherwise a fresh draw from ``rng`` is taken.
    """
    if not project.funded:
        raise ContractViolation("%r was never funded and cannot play out" % project)

    fate = project.opportunity.fate
    success = (rng.random() if fate is None else fate) < project.quality
    project.outcome = Outcome.SUCCESS if success else Outcome.FAILURE
    project.payoff = (1.0 + tension) * (1.0 if success else -1.0)

    return project.outcome


def _renormalize(status, floor):
    # sum(status) == len(status), every entry >= floor
    target = float(status.shape[0])
    np.maximum(status, floor, out=status)

    for _ in range(status.shape[0]):
        free = status > floor
        budget = target - floor * np.count_nonzero(~free)
        status[free] *= budget / status[free].sum()

        if np.all(status >= floor):
            break

        np.maximum(status, floor, out=status)

    return status


def backpropagate(graph, statuses, project, eta_status, eta_rep, normalize, floor=1e-6, reputation_floor=None):
    """
    Multiplicative credit assignment along the advocacy chain of a resolved project, r = +1 on success and -1 on
    failure:

      - champion status and reputation are scaled by (1 + eta * r)
      - the origin -> champion relationship weight is scaled by (1 + eta_rep * r) and clamped to [0, 1]
      - the selector's status is scaled by (1 + eta_status * r)

    Statuses never fall below ``floor``, reputations never below ``reputation_floor`` (``floor`` when omitted). With
    ``normalize`` every layer's statuses and the hidden reputations are rescaled to sum to the layer size.
    ``graph`` and ``statuses`` are updated in place and returned.
    """
    reputation_floor = floor if reputation_floor is None else reputation_floor

    if not project.resolved:
        raise ContractViolation("%r has no outcome to learn from" % project)

    r = 1.0 if project.outcome is Outcome.SUCCESS else -1.0
    status_factor = 1.0 + eta_status * r
    rep_factor = 1.0 + eta_rep * r
    h, o, i = project.champion, project.selector, project.origin

    hidden = statuses[Tier.HIDDEN]
    output = statuses[Tier.OUTPUT]

    hidden[h] = max(hidden[h] * status_factor, floor)
    output[o] = max(output[o] * status_factor, floor)
    graph.rep_hid[h] = max(graph.rep_hid[h] * rep_factor, reputation_floor)
    graph.w_ih[i, h] = min(1.0, max(0.0, graph.w_ih[i, h] * rep_factor))

    if normalize:
        for tier in Tier:
            _renormalize(statuses[tier], floor)
        _renormalize(graph.rep_hid, reputation_floor)

    return graph, statuses


def _acc_weight_correlation(organization):
    try:
        return spearman(organization.accuracy, organization.graph.input_strength())
    except UndefinedResultError:
        return None


def _validate(state, config, record):
    state.organization.validate()

    if record.funded > min(config.budget, record.championed):
        raise InvariantViolation("Tick %d funded %d projects out of %d championed with budget %d" % (
            record.tick, record.funded, record.championed, config.budget))

    for tier in Tier:
        if np.any(state.status[tier] < config.status_floor):
            raise InvariantViolation("A %s status fell below the floor at tick %d" % (tier.value, record.tick))


def step(state, config, correlate=True):
    """
    One tick: generate -> perceive -> route -> select -> realize -> backpropagate. With ``delay = 0`` every project
    funded during the tick also resolves during the tick. Without ``correlate`` the record carries no accuracy/weight
    correlation.
    """
    organization, streams = state.organization, state.streams
    graph = organization.graph

    opportunities = generate_opportunities(config.env, graph.n_in, streams['environment'], state.next_opportunity_id)
    state.next_opportunity_id += len(opportunities)

    proposals = []
    for opportunity in opportunities:
        perceived = perceive(organization.input_agent(opportunity.origin), opportunity, config.sigma_max,
                             streams['perception'])
        if perceived >= config.proposal_threshold:
            proposals.append(Project(opportunity, perceived))

    championed = route_proposals(graph, proposals, streams['routing'])
    funded = select_projects(graph.n_out, championed, state.status[Tier.HIDDEN], config.budget, config.tau,
                             streams['selection'], state.selector_cursor, state.tick)
    state.selector_cursor = (state.selector_cursor + len(funded)) % graph.n_out
    state.pending.extend(funded)

    due = [p for p in state.pending if p.funded_at + config.delay <= state.tick]
    state.pending = [p for p in state.pending if p.funded_at + config.delay > state.tick]

    for project in due:
        realize_outcome(project, config.env.tension, streams['outcomes'])
        backpropagate(graph, state.status, project, config.eta_status, config.eta_rep, config.normalize,
                      config.status_floor, config.reputation_floor)

    state.last_resolved = due

    record = TickRecord(
        tick=state.tick,
        generated=len(opportunities),
        championed=len(championed),
        funded=len(funded),
        resolved=len(due),
        successes=sum(1 for p in due if p.outcome is Outcome.SUCCESS),
        payoff=float(sum(p.payoff for p in due)),
        mean_status_in=organization.mean_status(Tier.INPUT),
        mean_status_hid=organization.mean_status(Tier.HIDDEN),
        mean_status_out=organization.mean_status(Tier.OUTPUT),
        spearman_acc_weight=_acc_weight_correlation(organization) if correlate else None,
    )

    _validate(state, config, record)
    state.tick += 1

    return state, record


def start(config, graph=None):
    streams = open_streams(config.seed)
    _, organization = new_organization(config, graph, streams)
    return SimState(organization, streams)


def iterate(config, graph=None, correlate=True):
    """
    Yields ``(state, record)`` after every tick of a run; ``state`` is the live state, shared across iterations
    """
    state = start(config, graph)
    logger.debug("Running %d ticks for seed %d", config.env.horizon, config.seed)

    for _ in range(config.env.horizon):
        yield step(state, config, correlate)


def simulate(config, graph=None, correlate=True):
    """
    Runs ``config.env.horizon`` ticks and returns the tick records together with the terminal state
    """
    state = start(config, graph)

    records = []
    for _ in range(config.env.horizon):
        state, record = step(state, config, correlate)
        records.append(record)

    logger.debug("Seed %d finished: %d funded, %d successes", config.seed,
                 sum(r.funded for r in records), sum(r.successes for r in records))
    return records, state


def run(config, graph=None, correlate=True):
    return simulate(config, graph, correlate)[0]


def success_rate(records, final_fraction=1.0):
    """
    Share of resolved projects that succeeded over the last ``final_fraction`` of the ticks, 0 when none resolved
    """
    window = records[len(records) - max(1, int(round(len(records) * final_fraction))):] if records else []
    resolved = sum(r.resolved for r in window)

    return float(sum(r.successes for r in window)) / resolved if resolved else 0.0
