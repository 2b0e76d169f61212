# -*- coding: utf-8 -*-
import unittest
from .grammar_test import GrammarTester
from ipsl.config.grammar import ConfigGrammarFactory
from ipsl.config.entry_parser import Entry
from ipsl.config.primitives import PrimitiveFactoryError


conf = {
    'entry_parser': {
        'default_section': 'experiment',
        'aliases': {},
    },
    'comment_symbols': ['#', ';'],
    'assignment': '=',
    'values': [
        {
            'type': 'bare_text',
            'precedence': 1,
            'parse_method': 'bare_text_parse'
        },
        {
            'type': 'quoted_text',
            'precedence': 2,
            'parse_method': 'quoted_text_parse'
        },
        {
            'type': 'real',
            'precedence': 3,
            'parse_method': 'real_parse'
        },
        {
            'type': 'integer',
            'precedence': 4,
            'parse_method': 'integer_parse'
        },
        {
            'type': 'boolean',
            'precedence': 5,
            'parse_method': 'boolean_parse'
        },
        {
            'type': 'real_list',
            'precedence': 6,
            'parse_method': 'real_list_parse'
        },
    ]
}


class GrammarFromConfigTester(GrammarTester):

    def _build_grammar(self):
        return ConfigGrammarFactory.build_from_conf(conf)

    def test_aliases(self):
        g = ConfigGrammarFactory.build_from_conf(dict(conf, entry_parser={'aliases': {'lambda': 'arrival_rate'}}))

        self._check_values(g.parse("[env]\nlambda = 4.5")[0], "env", "arrival_rate", 4.5, Entry.REAL)

    def test_default_section(self):
        g = ConfigGrammarFactory.build_from_conf(dict(conf, entry_parser={'default_section': 'org'}))

        self._check_values(g.parse("budget = 2")[0], "org", "budget", 2, Entry.INT)

    def test_custom_syntax(self):
        g = ConfigGrammarFactory.build_from_conf(dict(conf, comment_symbols=['//'], assignment=':'))
        r = g.parse("// comment\nmode: evolve\n[ga]\npopulation: 8")

        self._check_values(r[0], "experiment", "mode", "evolve", Entry.TEXT)
        self._check_values(r[1], "ga", "population", 8, Entry.INT)

    def test_reduced_value_types(self):
        g = ConfigGrammarFactory.build_from_conf(dict(conf, values=conf['values'][:1]))

        self._check_values(g.parse("seed = 4")[0], "experiment", "seed", "4", Entry.TEXT)

    def test_unknown_value_type(self):
        bad = dict(conf, values=[{'type': 'date', 'parse_method': 'bare_text_parse'}])

        self.assertRaises(PrimitiveFactoryError, ConfigGrammarFactory.build_from_conf, bad)


if __name__ == '__main__':
    unittest.main()
