# -*- coding: utf-8 -*-
import io
import os
import shutil
import tempfile
import unittest

from ipsl.config import parse_config
from ipsl.experiment import execute, ablate, ExperimentError, _write
from ipsl.organization import SimConfig, EnvParams


RUN = """
mode = run
replications = 3
seed = 40

[env]
horizon = 40
"""

EMERGE = """
mode = emerge
replications = 2
seed = 7

[env]
horizon = 20

[emergence]
n = 300
m = 2
run_engine = true
"""

EVOLVE = """
mode = evolve
seed = 3

[org]
n_in = 3
n_hid = 2
n_out = 1
budget = 1

[ga]
population = 6
generations = 3
episodes = 2
horizon = 20
"""

ABLATE = """
mode = ablate
replications = 30

[env]
horizon = 50
"""


class ExecuteTester(unittest.TestCase):

    def setUp(self):
        self.directory = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.directory)

    def _execute(self, text, name='out', **changes):
        output = os.path.join(self.directory, name)
        config = parse_config(text).replace(output=output, **changes)
        return sorted(os.path.relpath(p, output) for p in execute(config)), output

    def _read(self, directory, name):
        with io.open(os.path.join(directory, name), 'rb') as stream:
            return stream.read()

    def _lines(self, directory, name):
        return self._read(directory, name).decode('utf-8').split('\n')

    def _assert_identical_across_workers(self, text):
        files, single = self._execute(text, 'single', threads=1)
        parallel_files, parallel = self._execute(text, 'parallel', threads=8)

        self.assertEqual(files, parallel_files)
        for name in files:
            self.assertEqual(self._read(single, name), self._read(parallel, name), name)

        return files, single

    def test_run_mode(self):
        files, output = self._assert_identical_across_workers(RUN)

        self.assertEqual(['summary.csv', 'ticks_40.csv', 'ticks_41.csv', 'ticks_42.csv'], files)

        ticks = self._lines(output, 'ticks_41.csv')
        self.assertEqual('tick,generated,championed,funded,successes,mean_status_in,mean_status_hid,'
                         'mean_status_out,spearman_acc_weight', ticks[0])
        self.assertEqual(40 + 2, len(ticks))
        self.assertEqual('', ticks[-1])
        self.assertTrue(ticks[1].startswith('0,'))

        summary = self._lines(output, 'summary.csv')
        self.assertEqual('metric,mean,sd,min,max,count', summary[0])
        self.assertIn('success_rate', [row.split(',')[0] for row in summary[1:]])

    def test_no_carriage_returns(self):
        _, output = self._execute(RUN)

        self.assertNotIn(b'\r', self._read(output, 'ticks_40.csv'))

    def test_emerge_mode(self):
        files, output = self._assert_identical_across_workers(EMERGE)

        self.assertEqual(['edges_7.txt', 'edges_8.txt', 'powerlaw.csv', 'ticks_7.csv', 'ticks_8.csv', 'tiers_7.csv',
                          'tiers_8.csv'], files)
        self.assertEqual('# nodes=300', self._lines(output, 'edges_7.txt')[0])
        self.assertEqual(1 + 3 + (300 - 3) * 2 + 1, len(self._lines(output, 'edges_8.txt')))
        self.assertEqual(['seed,n,m,gamma', '7,300,2', '8,300,2'],
                         [row.rsplit(',', 1)[0] if k else row for k, row in
                          enumerate(self._lines(output, 'powerlaw.csv')[:3])])

    def test_evolve_mode(self):
        files, output = self._assert_identical_across_workers(EVOLVE)

        self.assertEqual(['best_genome.csv', 'generations.csv'], files)
        generations = self._lines(output, 'generations.csv')
        self.assertEqual('generation,best_fitness,mean_fitness,best_gini,heldout_best', generations[0])
        self.assertEqual(['0', '1', '2'], [row.split(',')[0] for row in generations[1:4]])
        self.assertEqual(['n_in,n_hid,n_out', '3,2,1'], self._lines(output, 'best_genome.csv')[:2])

    def test_evolve_replications(self):
        files, _ = self._execute(EVOLVE, replications=2)

        self.assertEqual(['best_genome_3.csv', 'best_genome_4.csv', 'generations_3.csv', 'generations_4.csv'], files)

    def test_evolve_landscape_sweep(self):
        files, output = self._assert_identical_across_workers(EVOLVE + "\n[env]\ntension = 0, 0.5\n")

        tags = ['tension_0_3', 'tension_0.5_3']
        self.assertEqual(sorted(['landscapes.csv'] + ['generations_%s.csv' % t for t in tags] +
                                ['best_genome_%s.csv' % t for t in tags]), files)

        rows = self._lines(output, 'landscapes.csv')
        self.assertEqual('parameter,value,seed,heldout_first,heldout_last,improved', rows[0])
        self.assertEqual(['tension,0,3', 'tension,0.5,3'], [','.join(row.split(',')[:3]) for row in rows[1:3]])

        for row in rows[1:3]:
            first, last, improved = row.split(',')[3:]
            self.assertGreaterEqual(float(last), float(first))
            self.assertEqual('true' if float(last) > float(first) else 'false', improved)

    def test_evolve_sweep_replications(self):
        files, _ = self._execute(EVOLVE + "\n[env]\narrival_rate = 2, 6\n", replications=2)

        self.assertEqual(9, len(files))
        self.assertIn('generations_arrival_rate_6_4.csv', files)

    def test_ablate_mode(self):
        files, output = self._assert_identical_across_workers(ABLATE)

        self.assertEqual(['ablation.csv'], files)
        rows = self._lines(output, 'ablation.csv')
        self.assertEqual('seed,learning_rate,success_rate_learning,success_rate_control', rows[0])
        self.assertEqual(30 + 2, len(rows))
        self.assertEqual([str(k) for k in range(30)], [row.split(',')[0] for row in rows[1:31]])
        self.assertTrue(all(row.split(',')[1] == '0.2' for row in rows[1:31]))

    def test_same_config_twice(self):
        files, first = self._execute(RUN, 'first')
        _, second = self._execute(RUN, 'second')

        for name in files:
            self.assertEqual(self._read(first, name), self._read(second, name))

    def test_unwritable_output(self):
        blocker = os.path.join(self.directory, 'file')
        with io.open(blocker, 'w') as stream:
            stream.write(u'not a directory')

        config = parse_config(RUN).replace(output=os.path.join(blocker, 'out'))
        self.assertRaises(ExperimentError, execute, config)
        self.assertEqual(['file'], os.listdir(self.directory))

    def test_partial_outputs_removed(self):
        outputs = [('a.csv', u'x\n'), ('missing/b.csv', u'y\n')]

        try:
            _write(self.directory, outputs)
            self.fail("expected an ExperimentError")
        except ExperimentError as e:
            self.assertTrue(e.path.endswith('b.csv'))

        self.assertEqual([], os.listdir(self.directory))


class AblateTester(unittest.TestCase):

    def test_paired_runs(self):
        learning, control = ablate(SimConfig(env=EnvParams(horizon=60)), 5)

        self.assertTrue(0.0 <= learning <= 1.0)
        self.assertTrue(0.0 <= control <= 1.0)
        self.assertEqual((learning, control), ablate(SimConfig(env=EnvParams(horizon=60)), 5))


if __name__ == '__main__':
    unittest.main()
