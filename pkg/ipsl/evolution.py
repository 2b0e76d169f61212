# -*- coding: utf-8 -*-
"""
Genetic algorithm over influence structures. A genome is the flattened pair of weight matrices of an organization;
its fitness is earned solely by the funding decisions of the output layer, with within-lifetime IPSL learning active
while it is evaluated.
"""
import csv
import logging
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor
from functools import partial

import numpy as np

from .engine import iterate
from .metrics import gini, UndefinedResultError
from .organization import InfluenceGraph, ConfigurationError
from .random_stream import RandomStream


logger = logging.getLogger(__name__)


class CodecError(Exception):
    pass


FitnessReport = namedtuple('FitnessReport', ['fitness', 'benefit_by_agent', 'gini', 'gini_defined'])

GenerationRecord = namedtuple('GenerationRecord', ['generation', 'best_fitness', 'mean_fitness', 'best_gini',
                                                   'heldout_best'])


class Genome(object):

    def __init__(self, layer_sizes, genes):
        self.layer_sizes = tuple(int(s) for s in layer_sizes)
        self.genes = np.array(genes, dtype=np.float64)

        if len(self.layer_sizes) != 3 or min(self.layer_sizes) < 1:
            raise CodecError("Genome header must hold three positive layer sizes, got %s" % (self.layer_sizes,))

        if self.genes.shape != (self.expected_length(*self.layer_sizes),):
            raise CodecError("Genome for a %d/%d/%d organization needs %d genes, got %d" % (
                self.layer_sizes + (self.expected_length(*self.layer_sizes), self.genes.size)))

        if not np.all((self.genes >= 0) & (self.genes <= 1)):
            raise CodecError("Every gene must lie in [0, 1]")

    @staticmethod
    def expected_length(n_in, n_hid, n_out):
        return n_in * n_hid + n_hid * n_out

    def __len__(self):
        return self.genes.shape[0]

    def __eq__(self, other):
        return isinstance(other, Genome) and self.layer_sizes == other.layer_sizes and np.array_equal(self.genes, other.genes)

    def __repr__(self):
        return "Genome(%d/%d/%d)" % self.layer_sizes


class GAConfig(object):

    def __init__(self, population=24, generations=40, tournament=3, crossover_rate=0.9, mutation_rate=0.05,
                 mutation_scale=0.15, elitism=2, episodes=4, horizon=0, lifetime_learning=True,
                 shares=(1.0 / 3, 1.0 / 3, 1.0 / 3), threads=1):
        self.population = population
        self.generations = generations
        self.tournament = tournament
        self.crossover_rate = crossover_rate
        self.mutation_rate = mutation_rate
        self.mutation_scale = mutation_scale
        self.elitism = elitism
        self.episodes = episodes
        self.horizon = horizon
        self.lifetime_learning = lifetime_learning
        self.shares = tuple(shares)
        self.threads = threads

    def validate(self):
        for field, low in (('population', 2), ('generations', 1), ('episodes', 1), ('tournament', 1), ('threads', 1)):
            value = getattr(self, field)
            if int(value) != value or value < low:
                raise ConfigurationError(field, "must be an integer >= %d, got %r" % (low, value))

        if self.tournament > self.population:
            raise ConfigurationError('tournament', "cannot exceed the population size %d" % self.population)

        if int(self.elitism) != self.elitism or not 0 <= self.elitism <= self.population:
            raise ConfigurationError('elitism', "must be an integer in [0, %d], got %r" % (self.population, self.elitism))

        for field in ('crossover_rate', 'mutation_rate'):
            if not 0 <= getattr(self, field) <= 1:
                raise ConfigurationError(field, "must lie in [0, 1], got %r" % getattr(self, field))

        if not self.mutation_scale >= 0:
            raise ConfigurationError('mutation_scale', "must be >= 0, got %r" % self.mutation_scale)

        if int(self.horizon) != self.horizon or self.horizon < 0:
            raise ConfigurationError('horizon', "must be an integer >= 0 (0 keeps the env horizon), got %r" % self.horizon)

        if len(self.shares) != 3 or min(self.shares) < 0 or abs(sum(self.shares) - 1.0) > 1e-9:
            raise ConfigurationError('shares', "origin/champion/selector shares must be >= 0 and sum to 1, got %r"
                                     % (self.shares,))

        return self

    def replace(self, **changes):
        params = dict(vars(self))
        params.update(changes)
        return GAConfig(**params)

    def __repr__(self):
        return "GAConfig(%s)" % ", ".join("%s=%r" % kv for kv in sorted(vars(self).items()))


def encode(graph):
    return Genome(graph.layer_sizes, np.concatenate([graph.w_ih.ravel(), graph.w_ho.ravel()]))


def decode(genome):
    """
    Rebuilds the influence graph a genome describes. Reputations are learned within a lifetime, so they restart at 1.
    """
    if not isinstance(genome, Genome):
        raise CodecError("Expected a Genome, got %s" % type(genome).__name__)

    n_in, n_hid, n_out = genome.layer_sizes
    split = n_in * n_hid

    return InfluenceGraph(genome.genes[:split].reshape(n_in, n_hid), genome.genes[split:].reshape(n_hid, n_out))


def _episode_config(config, ga, seed):
    changes = {'seed': int(seed)}

    if ga.horizon:
        changes['env'] = config.env.replace(horizon=ga.horizon)

    if not ga.lifetime_learning:
        changes.update(eta_status=0.0, eta_rep=0.0)

    return config.replace(**changes)


def evaluate_fitness(genome, config, ga, episode_seeds):
    """
    Runs one engine episode per seed on the decoded structure. Fitness is the mean over episodes of the total payoff
    of funded projects divided by the horizon; each payoff is also credited to the origin, champion and selector of
    its project according to ``ga.shares``.
    """
    if len(episode_seeds) != ga.episodes:
        raise ConfigurationError('episodes', "expected %d episode seeds, got %d" % (ga.episodes, len(episode_seeds)))

    graph = decode(genome)
    n_in, n_hid, n_out = genome.layer_sizes
    benefit = np.zeros(n_in + n_hid + n_out)
    share_origin, share_champion, share_selector = ga.shares
    totals = []

    for seed in episode_seeds:
        episode = _episode_config(config, ga, seed)
        total = 0.0

        for state, record in iterate(episode, graph, correlate=False):
            total += record.payoff

            for project in state.last_resolved:
                benefit[project.origin] += share_origin * project.payoff
                benefit[n_in + project.champion] += share_champion * project.payoff
                benefit[n_in + n_hid + project.selector] += share_selector * project.payoff

        totals.append(total / episode.env.horizon)

    try:
        equity, defined = gini(np.maximum(benefit, 0.0)), True
    except UndefinedResultError:
        equity, defined = 0.0, False

    return FitnessReport(float(np.mean(totals)), benefit, equity, defined)


def tournament_select(population, fitnesses, t, rng):
    """
    Index of the fittest among ``t`` distinct uniformly drawn members, ties going to the lowest index
    """
    contenders = sorted(int(k) for k in rng.sample_without_replacement(len(population), t))
    return max(contenders, key=lambda k: (fitnesses[k], -k))


def crossover(a, b, pc, rng):
    if a.layer_sizes != b.layer_sizes or len(a) != len(b):
        raise CodecError("Cannot cross %r with %r" % (a, b))

    if not rng.random() < pc:
        return Genome(a.layer_sizes, a.genes.copy()), Genome(b.layer_sizes, b.genes.copy())

    swap = rng.random(len(a)) < 0.5
    return (Genome(a.layer_sizes, np.where(swap, b.genes, a.genes)),
            Genome(b.layer_sizes, np.where(swap, a.genes, b.genes)))


def mutate(genome, pm, sigma, rng):
    """
    Perturbs each gene with probability ``pm`` by Normal(0, sigma), clamped back into [0, 1]
    """
    mask = rng.random(len(genome)) < pm
    noise = rng.normal(0.0, sigma, size=len(genome))

    return Genome(genome.layer_sizes, np.clip(np.where(mask, genome.genes + noise, genome.genes), 0.0, 1.0))


def random_genome(layer_sizes, rng):
    return Genome(layer_sizes, rng.uniform(0.0, 1.0, size=Genome.expected_length(*layer_sizes)))


def _evaluate_population(population, config, ga, seeds, executor):
    evaluate = partial(evaluate_fitness, config=config, ga=ga, episode_seeds=seeds)

    if executor is None:
        return [evaluate(genome) for genome in population]

    return list(executor.map(evaluate, population))


def evolve(ga, config, rng=None, on_generation=None):
    """
    Evolves ``ga.population`` genomes for ``ga.generations`` generations and returns one :class:`GenerationRecord` per
    generation together with the held-out champion genome.

    Every generation shares one set of episode seeds (common random numbers). Elites are the best genomes by that
    generation's fitness, plus the held-out champion: the genome with the best score so far on a fixed set of held-out
    seeds. ``heldout_best`` is the held-out score of the best genome present in the generation, that is the better of
    the generation's fittest genome and the carried champion. It is non-decreasing whenever ``elitism >= 1``; without
    elitism the champion is not carried and the score can drop.

    With ``ga.threads > 1`` genomes are evaluated on a process pool; results come back in population order.
    """
    ga.validate()
    config.validate()
    rng = rng if rng is not None else RandomStream(config.seed).substream('evolution')

    layer_sizes = config.layer_sizes
    heldout_seeds = rng.seeds(ga.episodes)
    population = [random_genome(layer_sizes, rng) for _ in range(ga.population)]

    champion, champion_score = None, None
    records = []
    executor = ProcessPoolExecutor(ga.threads) if ga.threads > 1 else None

    try:
        for generation in range(ga.generations):
            reports = _evaluate_population(population, config, ga, rng.seeds(ga.episodes), executor)
            fitnesses = [r.fitness for r in reports]
            ranking = sorted(range(len(population)), key=lambda k: (-fitnesses[k], k))
            best = ranking[0]

            candidate_score = evaluate_fitness(population[best], config, ga, heldout_seeds).fitness
            heldout = candidate_score
            if any(champion is genome for genome in population):
                heldout = max(candidate_score, champion_score)

            if champion is None or candidate_score > champion_score:
                champion, champion_score = population[best], candidate_score

            record = GenerationRecord(generation, fitnesses[best], float(np.mean(fitnesses)), reports[best].gini,
                                      heldout)
            records.append(record)
            logger.info("Generation %d: best %.4f, mean %.4f, held-out %.4f", generation, record.best_fitness,
                        record.mean_fitness, record.heldout_best)

            if on_generation is not None:
                on_generation(record, population)

            if generation + 1 < ga.generations:
                population = _reproduce(population, fitnesses, ranking, champion, ga, rng)
    finally:
        if executor is not None:
            executor.shutdown()

    return records, champion


def _reproduce(population, fitnesses, ranking, champion, ga, rng):
    elite_index = ranking[:ga.elitism]
    elites = [population[k] for k in sorted(elite_index)]

    if elites and not any(champion is e for e in elites):
        elites[sorted(elite_index).index(elite_index[-1])] = champion

    offspring = []
    while len(elites) + len(offspring) < ga.population:
        a = population[tournament_select(population, fitnesses, ga.tournament, rng)]
        b = population[tournament_select(population, fitnesses, ga.tournament, rng)]

        for child in crossover(a, b, ga.crossover_rate, rng):
            offspring.append(mutate(child, ga.mutation_rate, ga.mutation_scale, rng))

    return elites + offspring[:ga.population - len(elites)]


def write_genome(genome, stream):
    """
    CSV dump: a header row with the three layer sizes, then one row per weight matrix row (w_ih first, then w_ho)
    """
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(['n_in', 'n_hid', 'n_out'])
    writer.writerow(genome.layer_sizes)

    graph = decode(genome)
    for row in graph.w_ih:
        writer.writerow([format(float(w), '.17g') for w in row])

    for row in graph.w_ho:
        writer.writerow([format(float(w), '.17g') for w in row])


def read_genome(stream):
    rows = [row for row in csv.reader(stream) if row]

    if len(rows) < 2 or rows[0] != ['n_in', 'n_hid', 'n_out']:
        raise CodecError("Genome dump must start with the header 'n_in,n_hid,n_out' and a size row")

    layer_sizes = tuple(int(s) for s in rows[1])
    return Genome(layer_sizes, [float(w) for row in rows[2:] for w in row])
