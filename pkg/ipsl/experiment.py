# -*- coding: utf-8 -*-
"""
Batch experiments: seeded replications of the engine, the emergence model, the genetic algorithm and the
learning ablation, written out as bit-stable CSV files.
"""
import io
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from functools import partial

from .emergence import (grow_network, degree_distribution, fit_power_law, assign_tiers, to_influence_graph,
                        write_edge_list, write_tiers, EstimationError)
from .engine import run, success_rate
from .evolution import evolve, write_genome
from .metrics import summarize
from .organization import Tier
from .random_stream import RandomStream
from .util import write_csv


logger = logging.getLogger(__name__)


TICK_COLUMNS = ['tick', 'generated', 'championed', 'funded', 'successes', 'mean_status_in', 'mean_status_hid',
                'mean_status_out', 'spearman_acc_weight']

SUMMARY_COLUMNS = ['metric', 'mean', 'sd', 'min', 'max', 'count']

POWERLAW_COLUMNS = ['seed', 'n', 'm', 'gamma']

GENERATION_COLUMNS = ['generation', 'best_fitness', 'mean_fitness', 'best_gini', 'heldout_best']

ABLATION_COLUMNS = ['seed', 'learning_rate', 'success_rate_learning', 'success_rate_control']

LANDSCAPE_COLUMNS = ['parameter', 'value', 'seed', 'heldout_first', 'heldout_last', 'improved']

FINAL_WINDOW = 0.2


class ExperimentError(Exception):

    def __init__(self, path, message):
        super(ExperimentError, self).__init__("%s: %s" % (path, message))
        self.path = path


def _ticks_csv(records):
    stream = io.StringIO()
    write_csv(stream, TICK_COLUMNS, ([getattr(r, c) for c in TICK_COLUMNS] for r in records))
    return stream.getvalue()


def _csv(header, rows):
    stream = io.StringIO()
    write_csv(stream, header, rows)
    return stream.getvalue()


def _replicate(config, seed):
    records = run(config.sim.replace(seed=seed))
    final = records[-1]

    return seed, records, {
        'success_rate': success_rate(records),
        'final_window_success_rate': success_rate(records, FINAL_WINDOW),
        'total_payoff': sum(r.payoff for r in records),
        'final_mean_status_hid': final.mean_status_hid,
        'final_mean_status_out': final.mean_status_out,
        'final_spearman_acc_weight': final.spearman_acc_weight,
    }


def _run_mode(config, mapper):
    outputs = []
    metrics = {}

    for seed, records, stats in mapper(partial(_replicate, config), config.replication_seeds()):
        outputs.append(('ticks_%d.csv' % seed, _ticks_csv(records)))

        for name, value in stats.items():
            if value is not None:
                metrics.setdefault(name, []).append(value)

    rows = []
    for name in sorted(metrics):
        summary = summarize(metrics[name], name)
        rows.append([summary.name, summary.mean, summary.sd, summary.min, summary.max, summary.count])

    outputs.append(('summary.csv', _csv(SUMMARY_COLUMNS, rows)))
    return outputs


def _emerge(config, seed):
    params = config.emergence
    g = grow_network(params.n, params.m, RandomStream(seed).substream('environment'))
    tiers = assign_tiers(g, params.f_out, params.f_in)

    try:
        gamma = fit_power_law(degree_distribution(g), params.k_min, params.estimator)
    except EstimationError as e:
        logger.warning("Seed %d: power-law fit unavailable (%s)", seed, e)
        gamma = None

    edges, tier_file = io.StringIO(), io.StringIO()
    write_edge_list(g, edges)
    write_tiers(tiers, tier_file)

    outputs = [('edges_%d.txt' % seed, edges.getvalue()), ('tiers_%d.csv' % seed, tier_file.getvalue())]

    if params.run_engine:
        graph = to_influence_graph(g, tiers)
        n_in, n_hid, n_out = (len(tiers.members(t)) for t in (Tier.INPUT, Tier.HIDDEN, Tier.OUTPUT))
        sim = config.sim.replace(seed=seed, n_in=n_in, n_hid=n_hid, n_out=n_out)
        outputs.append(('ticks_%d.csv' % seed, _ticks_csv(run(sim, graph))))

    return [seed, params.n, params.m, gamma], outputs


def _emerge_mode(config, mapper):
    outputs = []
    rows = []

    for row, files in mapper(partial(_emerge, config), config.replication_seeds()):
        rows.append(row)
        outputs.extend(files)

    outputs.append(('powerlaw.csv', _csv(POWERLAW_COLUMNS, rows)))
    return outputs


def _evolve(config, job, threads=1):
    seed, env = job
    records, champion = evolve(config.ga.replace(threads=threads), config.sim.replace(seed=seed, env=env))

    genome = io.StringIO()
    write_genome(champion, genome)

    rows = ([getattr(r, c) for c in GENERATION_COLUMNS] for r in records)
    return records, _csv(GENERATION_COLUMNS, rows), genome.getvalue()


def _evolve_mode(config, mapper, threads):
    seeds = config.replication_seeds()
    jobs = [(seed, env) for env in config.landscapes() for seed in seeds]

    if config.sweep is None and len(jobs) == 1:
        _, generations, genome = _evolve(config, jobs[0], threads)
        return [('generations.csv', generations), ('best_genome.csv', genome)]

    results = mapper(partial(_evolve, config), jobs)

    if config.sweep is None:
        outputs = []
        for seed, (_, generations, genome) in zip(seeds, results):
            outputs.append(('generations_%d.csv' % seed, generations))
            outputs.append(('best_genome_%d.csv' % seed, genome))

        return outputs

    key = config.sweep[0]
    outputs = []
    rows = []

    for (seed, env), (records, generations, genome) in zip(jobs, results):
        value = getattr(env, key)
        tag = '%s_%s_%d' % (key, format(value, 'g'), seed)
        outputs.append(('generations_%s.csv' % tag, generations))
        outputs.append(('best_genome_%s.csv' % tag, genome))

        first, last = records[0].heldout_best, records[-1].heldout_best
        rows.append([key, value, seed, first, last, bool(last > first)])

    outputs.append(('landscapes.csv', _csv(LANDSCAPE_COLUMNS, rows)))
    return outputs


def ablate(sim, seed):
    """
    Final-window success rates of a learning run and of its zero-learning control on the same seed
    """
    learning = run(sim.replace(seed=seed))
    control = run(sim.replace(seed=seed, eta_status=0.0, eta_rep=0.0))

    return success_rate(learning, FINAL_WINDOW), success_rate(control, FINAL_WINDOW)


def _ablate_mode(config, mapper):
    seeds = config.replication_seeds()
    rates = mapper(partial(ablate, config.sim), seeds)

    rows = [[seed, config.sim.eta_status, learning, control] for seed, (learning, control) in zip(seeds, rates)]
    return [('ablation.csv', _csv(ABLATION_COLUMNS, rows))]


def _write(directory, outputs):
    written = []

    try:
        for name, content in outputs:
            path = os.path.join(directory, name)
            with io.open(path, 'w', encoding='utf-8', newline='') as stream:
                written.append(path)
                stream.write(content)

            logger.info("Wrote %s", path)

    except (IOError, OSError) as e:
        logger.error("Writing %s failed, removing %d partial outputs", path, len(written))

        for stale in written:
            try:
                os.remove(stale)
            except OSError:
                pass

        raise ExperimentError(path, e.strerror or str(e))

    return written


def execute(config):
    """
    Runs every replication of the configured mode and writes its output files into ``config.output``. All results are
    computed before the first byte is written; rows are ordered by seed whatever the number of worker processes.

    :return: the list of written paths
    """
    workers = config.threads or os.cpu_count() or 1

    try:
        if not os.path.isdir(config.output):
            os.makedirs(config.output)
    except OSError as e:
        raise ExperimentError(config.output, e.strerror or str(e))

    if not os.access(config.output, os.W_OK):
        raise ExperimentError(config.output, "output directory is not writable")

    logger.info("Running %s with %d replications from seed %d on %d worker processes", config.mode,
                config.replications, config.seed, workers)

    executor = ProcessPoolExecutor(workers) if workers > 1 else None
    mapper = (lambda fn, items: list(executor.map(fn, items))) if executor else (lambda fn, items: list(map(fn, items)))

    try:
        if config.mode == 'run':
            outputs = _run_mode(config, mapper)
        elif config.mode == 'emerge':
            outputs = _emerge_mode(config, mapper)
        elif config.mode == 'evolve':
            outputs = _evolve_mode(config, mapper, workers)
        elif config.mode == 'ablate':
            outputs = _ablate_mode(config, mapper)
        else:
            raise ExperimentError(config.output, "unknown mode '%s'" % config.mode)
    finally:
        if executor:
            executor.shutdown()

    return _write(config.output, outputs)
