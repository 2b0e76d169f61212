# -*- coding: utf-8 -*-
from collections import namedtuple

from .grammar import ConfigGrammarFactory, ParseException
from .entry_parser import Entry
from ..organization import SimConfig, EnvParams, ConfigurationError
from ..evolution import GAConfig


class ConfigError(Exception):
    pass


class ConfigSyntaxError(ConfigError):

    def __init__(self, line, message):
        super(ConfigSyntaxError, self).__init__("line %d: %s" % (line, message))
        self.line = line


class UnknownKeyError(ConfigError):

    def __init__(self, key, line):
        super(UnknownKeyError, self).__init__("line %d: unknown key '%s'" % (line, key))
        self.key = key
        self.line = line


class ConfigValidationError(ConfigError):

    def __init__(self, key, constraint, line=None):
        where = "line %d: " % line if line else ''
        super(ConfigValidationError, self).__init__("%s'%s' %s" % (where, key, constraint))
        self.key = key
        self.constraint = constraint
        self.line = line


MODES = ('run', 'emerge', 'evolve', 'ablate')

ESTIMATORS = ('ccdf', 'pdf', 'mle')

EmergenceParams = namedtuple('EmergenceParams', ['n', 'm', 'f_out', 'f_in', 'k_min', 'estimator', 'run_engine'])


class ExperimentConfig(object):

    def __init__(self, mode, sim, ga, emergence, replications=1, output='out', seed=0, threads=0, sweep=None):
        self.mode = mode
        self.sim = sim
        self.ga = ga
        self.emergence = emergence
        self.replications = replications
        self.output = output
        self.seed = seed
        self.threads = threads
        self.sweep = sweep

    def replication_seeds(self):
        return [self.seed + k for k in range(self.replications)]

    def landscapes(self):
        """
        The environments an evolve run adapts to: the configured one, or one per value of the swept ``[env]`` key
        """
        if self.sweep is None:
            return [self.sim.env]

        key, values = self.sweep
        return [self.sim.env.replace(**{key: value}) for value in values]

    def replace(self, **changes):
        params = dict(vars(self))
        params.update(changes)
        return ExperimentConfig(**params)

    def __eq__(self, other):
        return isinstance(other, ExperimentConfig) and vars(self) == vars(other)

    def __repr__(self):
        return "ExperimentConfig(%s)" % ", ".join("%s=%r" % kv for kv in sorted(vars(self).items()))


class Key(object):

    """
    One documented key of the experiment file: the python type it is coerced to, its default and a
    ``(predicate, description)`` constraint
    """

    def __init__(self, value_type, default, constraint=None, description='', sweepable=False):
        self.value_type = value_type
        self.default = default
        self.constraint = constraint
        self.description = description
        self.sweepable = sweepable

    def coerce(self, entry):
        if self.sweepable and entry.value_type == Entry.REAL_LIST:
            return list(entry.value)

        if self.value_type == Entry.REAL and entry.value_type in (Entry.INT, Entry.REAL):
            return float(entry.value)

        if self.value_type == entry.value_type:
            return entry.value

        raise ConfigValidationError(entry.key, "expects a %s value, got %s '%s'" % (
            self.value_type, entry.value_type, entry.value), entry.line)

    def check(self, name, value, line=None):
        if self.constraint is not None:
            predicate, description = self.constraint
            for v in (value if isinstance(value, list) else [value]):
                if not predicate(v):
                    raise ConfigValidationError(name, "must be %s, got %r" % (description, v), line)

        return value


_positive = (lambda v: v > 0, "> 0")
_non_negative = (lambda v: v >= 0, ">= 0")
_at_least_one = (lambda v: v >= 1, ">= 1")
_unit = (lambda v: 0 <= v <= 1, "in [0, 1]")
_open_unit = (lambda v: 0 < v < 1, "in (0, 1)")
_rate = (lambda v: 0 <= v < 1, "in [0, 1)")


SCHEMA = {
    'experiment': {
        'mode': Key(Entry.TEXT, None, (lambda v: v in MODES, "one of %s" % ", ".join(MODES))),
        'replications': Key(Entry.INT, 1, _at_least_one),
        'output': Key(Entry.TEXT, 'out'),
        'seed': Key(Entry.INT, 0, (lambda v: 0 <= v < 2 ** 64, "an unsigned 64-bit integer")),
        'threads': Key(Entry.INT, 0, (lambda v: v >= 0, ">= 0 (0 uses every available core)")),
    },
    'org': {
        'n_in': Key(Entry.INT, 6, _at_least_one),
        'n_hid': Key(Entry.INT, 8, _at_least_one),
        'n_out': Key(Entry.INT, 2, _at_least_one),
        'budget': Key(Entry.INT, 2, _at_least_one),
        'tau': Key(Entry.REAL, 0.5, _positive),
    },
    'env': {
        'arrival_rate': Key(Entry.REAL, 6.0, _non_negative, sweepable=True),
        'quality_alpha': Key(Entry.REAL, 0.1, _positive, sweepable=True),
        'quality_beta': Key(Entry.REAL, 0.2, _positive, sweepable=True),
        'tension': Key(Entry.REAL, 0.0, _non_negative, sweepable=True),
        'horizon': Key(Entry.INT, 500, _at_least_one),
    },
    'learning': {
        'eta_status': Key(Entry.REAL, 0.2, _rate),
        'eta_rep': Key(Entry.REAL, 0.2, _rate),
        'normalize': Key(Entry.BOOL, True),
        'sigma_max': Key(Entry.REAL, 2.0, _non_negative),
        'proposal_threshold': Key(Entry.REAL, 0.5, _unit),
        'status_floor': Key(Entry.REAL, 1e-6, _open_unit),
        'reputation_floor': Key(Entry.REAL, 0.1, _open_unit),
        'delay': Key(Entry.INT, 0, _non_negative),
    },
    'emergence': {
        'n': Key(Entry.INT, 10000, (lambda v: v >= 2, ">= 2")),
        'm': Key(Entry.INT, 2, _at_least_one),
        'f_out': Key(Entry.REAL, 0.1, _open_unit),
        'f_in': Key(Entry.REAL, 0.5, _open_unit),
        'k_min': Key(Entry.INT, 2, _at_least_one),
        'estimator': Key(Entry.TEXT, 'ccdf', (lambda v: v in ESTIMATORS, "one of %s" % ", ".join(ESTIMATORS))),
        'run_engine': Key(Entry.BOOL, False),
    },
    'ga': {
        'population': Key(Entry.INT, 24, (lambda v: v >= 2, ">= 2")),
        'generations': Key(Entry.INT, 40, _at_least_one),
        'tournament': Key(Entry.INT, 3, _at_least_one),
        'crossover_rate': Key(Entry.REAL, 0.9, _unit),
        'mutation_rate': Key(Entry.REAL, 0.05, _unit),
        'mutation_scale': Key(Entry.REAL, 0.15, _non_negative),
        'elitism': Key(Entry.INT, 2, _non_negative),
        'episodes': Key(Entry.INT, 4, _at_least_one),
        'horizon': Key(Entry.INT, 0, (lambda v: v >= 0, ">= 0 (0 keeps the env horizon)")),
        'lifetime_learning': Key(Entry.BOOL, True),
        'share_origin': Key(Entry.REAL, 1.0 / 3, _unit),
        'share_champion': Key(Entry.REAL, 1.0 / 3, _unit),
        'share_selector': Key(Entry.REAL, 1.0 / 3, _unit),
    },
}


class ExperimentConfigParser(object):

    def __init__(self, grammar=None, schema=None):
        self._grammar = grammar or ConfigGrammarFactory.build_default()
        self._schema = schema or SCHEMA

    def parse(self, text):
        """
        Runs the experiment file through the grammar, checks every entry against the key schema and builds a fully
        validated :class:`ExperimentConfig`, with the documented default for every key the file leaves out. Unknown
        keys and repeated keys are errors reported with their line number.
        """
        try:
            entries = self._grammar.parse(text)
        except ParseException as e:
            raise ConfigSyntaxError(e.lineno, "expected a [section] header, a 'key = value' entry or a comment "
                                              "near '%s'" % e.line.strip())

        values = self.parse_entries(entries)
        return self.build(values, dict((e.name, e.line) for e in entries))

    def parse_entries(self, entries):
        values = {}
        seen = {}

        for e in entries:
            section = self._schema.get(e.section)
            if section is None or e.key not in section:
                raise UnknownKeyError(e.name if section is None else e.key, e.line)

            if e.name in seen:
                raise ConfigValidationError(e.name, "is set twice (first on line %d)" % seen[e.name], e.line)
            seen[e.name] = e.line

            key = section[e.key]
            values[e.name] = key.check(e.key, key.coerce(e), e.line)

        for section_name, keys in self._schema.items():
            for name, key in keys.items():
                values.setdefault("%s.%s" % (section_name, name), key.default)

        return values

    def build(self, values, lines=None):
        lines = lines or {}

        if values['experiment.mode'] is None:
            raise ConfigValidationError('mode', "is required, one of %s" % ", ".join(MODES))

        get = lambda section: dict((name.split('.', 1)[1], v) for name, v in values.items() if name.startswith(section + '.'))
        org, env, learning, ga, emergence, experiment = (get(s) for s in ('org', 'env', 'learning', 'ga', 'emergence',
                                                                          'experiment'))

        sweep = None
        for name in sorted(k for k, v in env.items() if isinstance(v, list)):
            if sweep is not None:
                raise ConfigValidationError(name, "cannot be swept together with '%s'" % sweep[0],
                                            lines.get('env.' + name))

            if experiment['mode'] != 'evolve':
                raise ConfigValidationError(name, "takes a list of values only in evolve mode", lines.get('env.' + name))

            sweep = (name, env[name])
            env[name] = env[name][0]

        sim = SimConfig(env=EnvParams(**env), seed=experiment['seed'], **dict(org, **learning))
        ga_config = GAConfig(shares=(ga.pop('share_origin'), ga.pop('share_champion'), ga.pop('share_selector')),
                             **ga)

        section_of = {'shares': 'ga', 'f_out/f_in': 'emergence'}
        try:
            sim.validate()
            ga_config.validate()
        except ConfigurationError as e:
            section = section_of.get(e.field) or next((s for s in self._schema if e.field in self._schema[s]), '')
            raise ConfigValidationError(e.field, str(e), lines.get("%s.%s" % (section, e.field)))

        if ga_config.tournament > ga_config.population:
            raise ConfigValidationError('tournament', "cannot exceed population", lines.get('ga.tournament'))

        if not emergence['f_out'] + emergence['f_in'] < 1:
            raise ConfigValidationError('f_out', "plus f_in must be < 1", lines.get('emergence.f_out'))

        if not emergence['n'] > emergence['m']:
            raise ConfigValidationError('n', "must exceed m", lines.get('emergence.n'))

        return ExperimentConfig(mode=experiment['mode'], sim=sim, ga=ga_config,
                                emergence=EmergenceParams(**emergence), replications=experiment['replications'],
                                output=experiment['output'], seed=experiment['seed'], threads=experiment['threads'],
                                sweep=sweep)


def parse_config(text):
    return ExperimentConfigParser().parse(text)
