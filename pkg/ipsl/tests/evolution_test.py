# -*- coding: utf-8 -*-
import io
import unittest

import numpy as np
from scipy.stats import norm

from ipsl.evolution import (Genome, GAConfig, encode, decode, evaluate_fitness, tournament_select, crossover, mutate,
                            random_genome, evolve, write_genome, read_genome, CodecError)
from ipsl.organization import SimConfig, EnvParams, InfluenceGraph, ConfigurationError
from ipsl.random_stream import RandomStream


def _small_config(**changes):
    params = dict(n_in=3, n_hid=2, n_out=1, budget=1, seed=1, env=EnvParams(horizon=30))
    params.update(changes)
    return SimConfig(**params)


class CodecTester(unittest.TestCase):

    def test_length(self):
        self.assertEqual(6, len(encode(InfluenceGraph.uniform(2, 2, 1))))
        self.assertEqual(6 * 8 + 8 * 2, Genome.expected_length(6, 8, 2))

    def test_decode_restores_weights(self):
        graph = InfluenceGraph([[0.1, 0.9], [0.3, 0.0]], [[0.25], [1.0]], rep_hid=[2.0, 0.5])
        decoded = decode(encode(graph))

        self.assertTrue(np.array_equal(graph.w_ih, decoded.w_ih))
        self.assertTrue(np.array_equal(graph.w_ho, decoded.w_ho))
        self.assertTrue(np.array_equal(np.ones(2), decoded.rep_hid))

    def test_wrong_length(self):
        self.assertRaises(CodecError, Genome, (2, 2, 1), np.zeros(5))

    def test_gene_range(self):
        self.assertRaises(CodecError, Genome, (1, 1, 1), [0.5, 1.5])

    def test_decode_needs_a_genome(self):
        self.assertRaises(CodecError, decode, [0.5, 0.5])

    def test_genome_file(self):
        genome = random_genome((2, 3, 2), RandomStream(4))
        stream = io.StringIO()
        write_genome(genome, stream)

        lines = stream.getvalue().split('\n')
        self.assertEqual(['n_in,n_hid,n_out', '2,3,2'], lines[:2])
        self.assertEqual(2 + 2 + 3 + 1, len(lines))
        self.assertEqual(genome, read_genome(io.StringIO(stream.getvalue())))

    def test_bad_genome_file(self):
        self.assertRaises(CodecError, read_genome, io.StringIO("a,b,c\n1,1,1\n0.5\n0.5\n"))
        self.assertRaises(CodecError, read_genome, io.StringIO("n_in,n_hid,n_out\n1,1,1\n0.5\n"))


class FitnessTester(unittest.TestCase):

    def _ga(self, **changes):
        params = dict(population=4, generations=2, episodes=2)
        params.update(changes)
        return GAConfig(**params)

    def test_no_arrivals(self):
        genome = encode(InfluenceGraph.uniform(3, 2, 1))
        report = evaluate_fitness(genome, _small_config(env=EnvParams(arrival_rate=0.0, horizon=20)), self._ga(), [1, 2])

        self.assertEqual(0.0, report.fitness)
        self.assertTrue(np.array_equal(np.zeros(6), report.benefit_by_agent))
        self.assertEqual(0.0, report.gini)
        self.assertFalse(report.gini_defined)

    def test_certain_success(self):
        genome = encode(InfluenceGraph.uniform(3, 2, 1))
        env = EnvParams(arrival_rate=50.0, quality_alpha=1e6, quality_beta=1.0, tension=0.5, horizon=40)
        report = evaluate_fitness(genome, _small_config(env=env), self._ga(), [3, 4])

        self.assertAlmostEqual(1.5, report.fitness, delta=0.01)
        self.assertTrue(report.gini_defined)
        self.assertTrue(0.0 <= report.gini <= 1.0)

    def test_benefit_shares(self):
        genome = encode(InfluenceGraph.uniform(3, 2, 1))
        ga = self._ga(shares=(0.0, 0.0, 1.0))
        report = evaluate_fitness(genome, _small_config(), ga, [5, 6])

        self.assertTrue(np.all(report.benefit_by_agent[:5] == 0.0))
        self.assertAlmostEqual(report.fitness * 30 * 2, report.benefit_by_agent[5], places=9)

    def test_deterministic(self):
        genome = random_genome((3, 2, 1), RandomStream(7))
        a = evaluate_fitness(genome, _small_config(), self._ga(), [8, 9])
        b = evaluate_fitness(genome, _small_config(), self._ga(), [8, 9])

        self.assertEqual(a.fitness, b.fitness)
        self.assertTrue(np.array_equal(a.benefit_by_agent, b.benefit_by_agent))

    def test_horizon_override(self):
        genome = encode(InfluenceGraph.uniform(3, 2, 1))
        long_run = _small_config(env=EnvParams(horizon=1000000))
        report = evaluate_fitness(genome, long_run, self._ga(horizon=10), [1, 2])

        self.assertTrue(-1.0 <= report.fitness <= 1.0)

    def test_seed_count(self):
        self.assertRaises(ConfigurationError, evaluate_fitness, encode(InfluenceGraph.uniform(3, 2, 1)),
                          _small_config(), self._ga(), [1])


class OperatorTester(unittest.TestCase):

    def test_full_tournament_returns_best(self):
        fitnesses = [0.1, 0.7, 0.3, 0.7]
        rng = RandomStream(1)

        for _ in range(50):
            self.assertEqual(1, tournament_select(fitnesses, fitnesses, 4, rng))

    def test_unit_tournament_is_uniform(self):
        rng = RandomStream(2)
        counts = np.bincount([tournament_select(range(4), [4, 3, 2, 1], 1, rng) for _ in range(100000)], minlength=4)

        for frequency in counts / 100000.0:
            self.assertAlmostEqual(0.25, frequency, delta=0.01)

    def test_crossover_identical_parents(self):
        a = random_genome((2, 2, 2), RandomStream(3))

        for child in crossover(a, Genome(a.layer_sizes, a.genes.copy()), 1.0, RandomStream(4)):
            self.assertEqual(a, child)

    def test_crossover_disabled(self):
        a, b = random_genome((2, 2, 2), RandomStream(5)), random_genome((2, 2, 2), RandomStream(6))

        self.assertEqual((a, b), crossover(a, b, 0.0, RandomStream(7)))

    def test_uniform_crossover(self):
        sizes = (100, 999, 1)
        zeros, ones = Genome(sizes, np.zeros(Genome.expected_length(*sizes))), Genome(sizes, np.ones(Genome.expected_length(*sizes)))
        first, second = crossover(zeros, ones, 1.0, RandomStream(8))

        self.assertTrue(np.all((first.genes == 0) | (first.genes == 1)))
        self.assertTrue(np.array_equal(1 - first.genes, second.genes))
        self.assertAlmostEqual(0.5, first.genes.mean(), delta=0.01)

    def test_crossover_length_mismatch(self):
        self.assertRaises(CodecError, crossover, random_genome((1, 1, 1), RandomStream(1)),
                          random_genome((2, 1, 1), RandomStream(1)), 1.0, RandomStream(1))

    def test_mutation_disabled(self):
        g = random_genome((3, 3, 3), RandomStream(9))

        self.assertEqual(g, mutate(g, 0.0, 0.5, RandomStream(10)))
        self.assertEqual(g, mutate(g, 1.0, 0.0, RandomStream(10)))

    def test_mutation_clamps(self):
        sizes = (100, 999, 1)
        g = Genome(sizes, np.full(Genome.expected_length(*sizes), 0.5))
        mutated = mutate(g, 1.0, 10.0, RandomStream(11))

        self.assertTrue(np.all((mutated.genes >= 0) & (mutated.genes <= 1)))
        self.assertAlmostEqual(norm.cdf(-0.05), np.mean(mutated.genes == 0.0), delta=0.01)
        self.assertAlmostEqual(norm.cdf(-0.05), np.mean(mutated.genes == 1.0), delta=0.01)


class EvolveTester(unittest.TestCase):

    def _ga(self, **changes):
        params = dict(population=6, generations=4, tournament=2, episodes=2, elitism=1)
        params.update(changes)
        return GAConfig(**params)

    def test_records(self):
        records, champion = evolve(self._ga(), _small_config())

        self.assertEqual(list(range(4)), [r.generation for r in records])
        self.assertEqual((3, 2, 1), champion.layer_sizes)

        for r in records:
            self.assertLessEqual(r.mean_fitness, r.best_fitness)
            self.assertTrue(0.0 <= r.best_gini <= 1.0)

    def test_single_generation(self):
        populations = []
        records, _ = evolve(self._ga(generations=1), _small_config(), on_generation=lambda r, p: populations.append(p))

        self.assertEqual(1, len(records))
        self.assertEqual(1, len(populations))

    def test_frozen_population(self):
        populations = []
        ga = self._ga(crossover_rate=0.0, mutation_rate=0.0, elitism=6)
        evolve(ga, _small_config(), on_generation=lambda r, p: populations.append(list(p)))

        for population in populations[1:]:
            self.assertEqual(populations[0], population)

    def test_genes_stay_in_range(self):
        populations = []
        evolve(self._ga(mutation_rate=0.5, mutation_scale=2.0), _small_config(),
               on_generation=lambda r, p: populations.append(p))

        for population in populations:
            self.assertEqual(6, len(population))
            for genome in population:
                self.assertTrue(np.all((genome.genes >= 0) & (genome.genes <= 1)))

    def test_heldout_best_is_monotone(self):
        for seed in range(3):
            records, _ = evolve(self._ga(generations=6), _small_config(seed=seed))
            heldout = [r.heldout_best for r in records]

            self.assertEqual(sorted(heldout), heldout)

    def _heldout_scores(self, ga, config):
        heldout_seeds = RandomStream(config.seed).substream('evolution').seeds(ga.episodes)
        populations = []
        records, _ = evolve(ga, config, on_generation=lambda r, p: populations.append(list(p)))

        scores = [set(evaluate_fitness(g, config, ga, heldout_seeds).fitness for g in p) for p in populations]
        return records, scores

    def test_heldout_best_belongs_to_the_generation(self):
        for elitism in (0, 1):
            records, scores = self._heldout_scores(self._ga(elitism=elitism), _small_config(seed=4))

            for record, generation_scores in zip(records, scores):
                self.assertIn(record.heldout_best, generation_scores)

    def test_heldout_best_can_drop_without_elitism(self):
        dropped = 0
        for seed in range(10):
            records, _ = evolve(self._ga(elitism=0, generations=8), _small_config(seed=seed))
            heldout = [r.heldout_best for r in records]
            dropped += any(b < a for a, b in zip(heldout, heldout[1:]))

        self.assertGreater(dropped, 0)

    def test_deterministic(self):
        a, champion_a = evolve(self._ga(), _small_config())
        b, champion_b = evolve(self._ga(), _small_config())

        self.assertEqual(a, b)
        self.assertEqual(champion_a, champion_b)

    def test_worker_processes_do_not_change_results(self):
        serial, champion = evolve(self._ga(), _small_config())
        parallel, parallel_champion = evolve(self._ga(threads=4), _small_config())

        self.assertEqual(serial, parallel)
        self.assertEqual(champion, parallel_champion)

    def test_invalid_configs(self):
        for changes in ({'population': 1}, {'tournament': 7}, {'elitism': 7}, {'crossover_rate': 1.5},
                        {'episodes': 0}, {'shares': (0.5, 0.5, 0.5)}):
            self.assertRaises(ConfigurationError, evolve, self._ga(**changes), _small_config())


if __name__ == '__main__':
    unittest.main()
