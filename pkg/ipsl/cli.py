# -*- coding: utf-8 -*-
import argparse
import io
import logging
import sys

from .config import parse_config, ConfigError
from .experiment import execute, ExperimentError
from .organization import ConfigurationError


logger = logging.getLogger(__name__)


def build_argument_parser():
    parser = argparse.ArgumentParser(prog='ipsl', description="Influence process structural learning experiments")
    parser.add_argument('config', help="experiment file with [experiment], [org], [env], [learning], [emergence] "
                                       "and [ga] sections")
    parser.add_argument('--out', help="output directory, overrides experiment.output")
    parser.add_argument('--seed', type=int, help="master seed, overrides experiment.seed")
    parser.add_argument('--replications', type=int, help="overrides experiment.replications")
    parser.add_argument('--threads', type=int, help="worker processes, overrides experiment.threads")
    parser.add_argument('--log-level', default='WARNING', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    return parser


def load(path, overrides=None):
    with io.open(path, encoding='utf-8') as stream:
        config = parse_config(stream.read())

    changes = dict((k, v) for k, v in (overrides or {}).items() if v is not None)
    if 'seed' in changes:
        changes['sim'] = config.sim.replace(seed=changes['seed'])

    for field, low in (('replications', 1), ('threads', 0), ('seed', 0)):
        if field in changes and changes[field] < low:
            raise ConfigurationError(field, "must be >= %d, got %r" % (low, changes[field]))

    return config.replace(**changes)


def main(argv=None):
    args = build_argument_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level), format="%(asctime)s %(name)s %(levelname)s %(message)s")

    try:
        config = load(args.config, {'output': args.out, 'seed': args.seed, 'replications': args.replications,
                                    'threads': args.threads})
    except (ConfigError, ConfigurationError) as e:
        sys.stderr.write("ipsl: %s: %s\n" % (args.config, e))
        return 2
    except (IOError, OSError) as e:
        sys.stderr.write("ipsl: %s: %s\n" % (args.config, e.strerror or e))
        return 2

    try:
        execute(config)
    except ExperimentError as e:
        sys.stderr.write("ipsl: %s\n" % e)
        return 1
    except Exception as e:
        logger.exception("Experiment failed")
        sys.stderr.write("ipsl: %s failed: %s\n" % (config.mode, e))
        return 1

    return 0


if __name__ == '__main__':
    sys.exit(main())
