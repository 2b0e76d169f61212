# -*- coding: utf-8 -*-
import re

from pyparsing import ZeroOrMore, Suppress, Literal, Regex, StringEnd

from .entry_parser import EntryParserFactory
from .primitives import (PrimitiveFactory, ParserElement, ParseException, KeyName, SectionHeader, RealList, Boolean,
                         Integer, Real, QuotedText, BareText, concatenate)


class GrammarError(Exception):
    pass


class ConfigGrammarFactory(object):

    @staticmethod
    def build(entry_parser, values, comment_symbols=('#', ';'), assignment='='):
        return ConfigGrammar(entry_parser=entry_parser, values=values, comment_symbols=comment_symbols,
                             assignment=assignment)

    @staticmethod
    def build_default(entry_parser=None):
        e_parser = entry_parser or EntryParserFactory.build_default()

        return ConfigGrammar(entry_parser=e_parser, values=ConfigGrammarFactory.default_values(e_parser))

    @staticmethod
    def default_values(parser):
        return [RealList(parse_method=parser.real_list_parse),
                Boolean(parse_method=parser.boolean_parse),
                Integer(parse_method=parser.integer_parse),
                Real(parse_method=parser.real_parse),
                QuotedText(parse_method=parser.quoted_text_parse),
                BareText(parse_method=parser.bare_text_parse)]

    @staticmethod
    def build_from_conf(conf):
        entry_parser = EntryParserFactory.build_from_conf(conf.get('entry_parser', {}))

        if 'values' in conf:
            values = [PrimitiveFactory.build_from_conf(v, entry_parser) for v in conf['values']]
        else:
            values = ConfigGrammarFactory.default_values(entry_parser)

        return ConfigGrammar(entry_parser=entry_parser, values=values,
                             comment_symbols=conf.get('comment_symbols', ('#', ';')),
                             assignment=conf.get('assignment', '='))


class ConfigGrammar(object):

    def __init__(self, entry_parser, values, comment_symbols=('#', ';'), assignment='='):
        if not values:
            raise GrammarError("A config grammar needs at least one value type")

        self._entry_parser = entry_parser
        self._values = sorted(values, key=lambda v: v.precedence, reverse=True)
        self._comment_symbols = tuple(comment_symbols)
        self._assignment = assignment
        self._grammar_parser = self._build_grammar()

    def _build_grammar(self):
        section = SectionHeader(parse_method=self._entry_parser.section_parse)
        key = KeyName(parse_method=self._entry_parser.key_parse)

        # On equal match length the value type with the highest precedence wins
        value = concatenate(self._values, operator="LONGEST_OR")
        entry = (key + Suppress(Literal(self._assignment)) + value).set_parse_action(self._entry_parser.entry_parse)

        document = ZeroOrMore(section | entry) + StringEnd()

        for symbol in self._comment_symbols:
            document.ignore(Regex(re.escape(symbol) + r"[^\n]*"))

        return document.parse_string

    @property
    def entry_parser(self):
        return self._entry_parser

    @property
    def value_types(self):
        return [{'type': v.type_name, 'precedence': v.precedence} for v in self._values]

    @property
    def comment_symbols(self):
        return self._comment_symbols

    def add_value_type(self, value):
        if not isinstance(value, ParserElement):
            raise GrammarError("Value types should be PyParsing ParserElements or ipsl.config.primitives.BaseType")

        self._values = sorted(self._values + [value], key=lambda v: v.precedence, reverse=True)
        self._grammar_parser = self._build_grammar()
        return self

    def remove_type(self, type_name):
        values = [v for v in self._values if getattr(v, 'type_name', None) != type_name]

        if not values:
            raise GrammarError("Cannot remove the last value type '%s'" % type_name)

        self._values = values
        self._grammar_parser = self._build_grammar()
        return self

    def parse(self, text):
        """
        Parses a whole experiment file and returns its entries in file order. Raises pyparsing's ParseException, which
        carries the line number, when part of the text is not a section header, an entry or a comment.
        """
        self._entry_parser.reset()

        try:
            return [e for e in self._grammar_parser(text, parse_all=True) if isinstance(e, dict) and 'key' in e]
        finally:
            self._entry_parser.reset()


__all__ = ['ConfigGrammar', 'ConfigGrammarFactory', 'GrammarError', 'ParseException']
