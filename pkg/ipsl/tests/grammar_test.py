#!/usr/bin/python
# -*- coding: utf-8 -*-
import unittest
from ipsl.config.grammar import ConfigGrammarFactory, GrammarError, ParseException
from ipsl.config.entry_parser import Entry
from ipsl.config.primitives import Integer, BareText


class GrammarTester(unittest.TestCase):

    def _build_grammar(self):
        return ConfigGrammarFactory.build_default()

    def _init_and_parse(self, input_str):
        g = self._build_grammar()
        self.assertTrue(g.parse(input_str))
        return g.parse(input_str)

    def _check_values(self, entry, expected_section, expected_key, expected_val, expected_val_type):
        self.assertEqual(entry.section, expected_section)
        self.assertEqual(entry.key, expected_key)
        self.assertEqual(entry.value, expected_val)
        self.assertEqual(entry.value_type, expected_val_type)

    def test_entry_without_section_goes_to_default(self):
        r = self._init_and_parse("mode = run")

        self._check_values(r[0], "experiment", "mode", "run", Entry.TEXT)

    def test_integer_value(self):
        r = self._init_and_parse("[org]\nn_in = 6")

        self._check_values(r[0], "org", "n_in", 6, Entry.INT)

    def test_real_value(self):
        r = self._init_and_parse("[learning]\neta_status = 0.2\nstatus_floor = 1e-6")

        self._check_values(r[0], "learning", "eta_status", 0.2, Entry.REAL)
        self._check_values(r[1], "learning", "status_floor", 1e-6, Entry.REAL)

    def test_boolean_value(self):
        r = self._init_and_parse("[learning]\nnormalize = false\n[emergence]\nrun_engine = Yes")

        self._check_values(r[0], "learning", "normalize", False, Entry.BOOL)
        self._check_values(r[1], "emergence", "run_engine", True, Entry.BOOL)

    def test_quoted_and_bare_text(self):
        r = self._init_and_parse('output = "results dir"\n[emergence]\nestimator = mle')

        self._check_values(r[0], "experiment", "output", "results dir", Entry.TEXT)
        self._check_values(r[1], "emergence", "estimator", "mle", Entry.TEXT)

    def test_path_is_text(self):
        r = self._init_and_parse("output = out/run-1.2")

        self._check_values(r[0], "experiment", "output", "out/run-1.2", Entry.TEXT)

    def test_real_list_value(self):
        r = self._init_and_parse("[env]\ntension = 0, 0.5, 1\nhorizon = 40")

        self._check_values(r[0], "env", "tension", [0.0, 0.5, 1.0], Entry.REAL_LIST)
        self._check_values(r[1], "env", "horizon", 40, Entry.INT)

    def test_comma_without_spaces_is_a_list(self):
        r = self._init_and_parse("[env]\narrival_rate = 2,6")

        self._check_values(r[0], "env", "arrival_rate", [2.0, 6.0], Entry.REAL_LIST)

    def test_integer_wins_over_real_and_text(self):
        r = self._init_and_parse("tau = 1")

        self.assertEqual(r[0].value_type, Entry.INT)

    def test_comments_are_ignored(self):
        r = self._init_and_parse("# experiment file\nmode = run ; trailing\n\n; another\n[env]  # env section\n"
                                 "horizon = 50")

        self.assertEqual(2, len(r))
        self._check_values(r[0], "experiment", "mode", "run", Entry.TEXT)
        self._check_values(r[1], "env", "horizon", 50, Entry.INT)

    def test_keys_and_sections_are_case_insensitive(self):
        r = self._init_and_parse("[ENV]\nArrival_Rate = 3")

        self._check_values(r[0], "env", "arrival_rate", 3, Entry.INT)

    def test_line_numbers(self):
        r = self._init_and_parse("mode = run\n\n[org]\n# comment\nbudget = 3")

        self.assertEqual(1, r[0].line)
        self.assertEqual(5, r[1].line)
        self.assertEqual("org.budget", r[1].name)

    def test_sections_reset_between_parses(self):
        g = self._build_grammar()
        g.parse("[ga]\npopulation = 4")

        self._check_values(g.parse("seed = 3")[0], "experiment", "seed", 3, Entry.INT)

    def test_empty_document(self):
        self.assertEqual([], self._build_grammar().parse("# nothing here\n\n"))

    def test_syntax_errors(self):
        g = self._build_grammar()

        for text in ("mode run", "[org\nn_in = 3", "n_in = ", "= 3", "mode = run extra"):
            self.assertRaises(ParseException, g.parse, text)

    def test_syntax_error_line(self):
        try:
            self._build_grammar().parse("mode = run\n[org]\nn_in 3\n")
            self.fail("expected a ParseException")
        except ParseException as e:
            self.assertEqual(3, e.lineno)

    def test_value_types_are_sorted_by_precedence(self):
        types = [v['type'] for v in self._build_grammar().value_types]

        self.assertEqual(['real_list', 'boolean', 'integer', 'real', 'quoted_text', 'bare_text'], types)

    def test_remove_type(self):
        g = self._build_grammar().remove_type('boolean')

        self._check_values(g.parse("[learning]\nnormalize = true")[0], "learning", "normalize", "true", Entry.TEXT)

    def test_remove_last_type(self):
        g = ConfigGrammarFactory.build(ConfigGrammarFactory.build_default().entry_parser,
                                       [BareText(parse_method=lambda s, l, t: {Entry.VAL: t[0], Entry.VAL_TYPE: Entry.TEXT})])

        self.assertRaises(GrammarError, g.remove_type, 'bare_text')

    def test_add_value_type(self):
        g = self._build_grammar()
        g.add_value_type(Integer(parse_method=lambda s, l, t: {Entry.VAL: -int(t[0]), Entry.VAL_TYPE: Entry.INT},
                                 precedence=10))

        self.assertEqual(-4, g.parse("seed = 4")[0].value)
        self.assertRaises(GrammarError, g.add_value_type, "not an element")

    def test_no_value_types(self):
        self.assertRaises(GrammarError, ConfigGrammarFactory.build, None, [])


if __name__ == '__main__':
    unittest.main()
