# -*- coding: utf-8 -*-
from pyparsing import (Literal, Word, Regex, QuotedString as QString, MatchFirst, Suppress, And, OneOrMore,
                       ParseException, ParserElement, alphas, alphanums)


class PrimitiveFactoryError(Exception):
    pass


class PrimitiveFactory(object):

    @staticmethod
    def build_from_conf(conf, parser):
        _cls = PRIMITIVES.get(conf['type'])

        if _cls is None:
            raise PrimitiveFactoryError("Unknown primitive type '%s', expected one of %s" % (
                conf['type'], ", ".join(sorted(PRIMITIVES))))

        if 'parse_method' not in conf:
            raise PrimitiveFactoryError("Invalid Primitive definition, parsing method invalid or not defined.")

        kwargs = {'parse_method': getattr(parser, conf['parse_method'])}
        if 'precedence' in conf:
            kwargs['precedence'] = conf['precedence']

        return _cls(**kwargs)


def concatenate(elems, operator='OR', class_to_embed_elem=None):
    """
    Receives a list of elements to be concatenated, to generate a type
    MatchFirst from pyParsing. Order is important given that it matches with the
    one found first

    :param elems: list of elements to concatenate
    :param operator: type of operator to concatenate with
    :param class_to_embed_elem: class to use to initialize each element in the list
    :return: MatchFirst object representing the optional matching with any of the elements in the list
    """
    combined_elems = class_to_embed_elem(elems[0]) if class_to_embed_elem else elems[0]

    for e in elems[1:]:
        elem_to_concat = class_to_embed_elem(e) if class_to_embed_elem else e

        if operator == 'OR':
            combined_elems = combined_elems | elem_to_concat

        elif operator == 'AND':
            combined_elems = combined_elems & elem_to_concat

        elif operator == 'LONGEST_OR':  # OR that matches the longest expression
            combined_elems = combined_elems ^ elem_to_concat

    return combined_elems


class BaseType(object):

    type_name = 'base'

    def __init__(self, precedence):
        self.precedence = precedence


class KeyName(Word, BaseType):

    type_name = 'key_name'

    def __init__(self, parse_method=None, precedence=0):
        Word.__init__(self, alphas + '_', alphanums + '_')
        BaseType.__init__(self, precedence)

        if parse_method:
            self.add_parse_action(parse_method)


class SectionHeader(And, BaseType):

    type_name = 'section'

    def __init__(self, parse_method=None, open_symbol='[', close_symbol=']', precedence=0):
        And.__init__(self, [Suppress(Literal(open_symbol)) + KeyName() + Suppress(Literal(close_symbol))])
        BaseType.__init__(self, precedence)

        if parse_method:
            self.add_parse_action(parse_method)


class Boolean(Regex, BaseType):

    type_name = 'boolean'

    def __init__(self, parse_method=None, precedence=5):
        Regex.__init__(self, r"(?i)(true|false|yes|no|on|off)(?![\w.\-/])")
        BaseType.__init__(self, precedence)

        if parse_method:
            self.add_parse_action(parse_method)


class Integer(Regex, BaseType):

    type_name = 'integer'

    def __init__(self, parse_method=None, precedence=4):
        Regex.__init__(self, r"[+-]?\d+(?![\w.\-/])")
        BaseType.__init__(self, precedence)

        if parse_method:
            self.add_parse_action(parse_method)


class Real(Regex, BaseType):

    type_name = 'real'

    def __init__(self, parse_method=None, precedence=3):
        Regex.__init__(self, r"[+-]?(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?(?![\w.\-/])")
        BaseType.__init__(self, precedence)

        if parse_method:
            self.add_parse_action(parse_method)


class RealList(And, BaseType):

    type_name = 'real_list'

    def __init__(self, parse_method=None, separator=',', precedence=6):
        And.__init__(self, [Real() + OneOrMore(Suppress(Literal(separator)) + Real())])
        BaseType.__init__(self, precedence)

        if parse_method:
            self.add_parse_action(parse_method)


class QuotedText(MatchFirst, BaseType):

    type_name = 'quoted_text'

    def __init__(self, parse_method=None, precedence=2):
        MatchFirst.__init__(self, [QString('"'), QString("'")])
        BaseType.__init__(self, precedence)

        if parse_method:
            self.add_parse_action(parse_method)


class BareText(Regex, BaseType):

    type_name = 'bare_text'

    def __init__(self, parse_method=None, precedence=1):
        Regex.__init__(self, r"[^\s#;=\[\]'\"]+")
        BaseType.__init__(self, precedence)

        if parse_method:
            self.add_parse_action(parse_method)


PRIMITIVES = dict((cls.type_name, cls) for cls in (RealList, Boolean, Integer, Real, QuotedText, BareText))
