# -*- coding: utf-8 -*-
from pyparsing import lineno


class EntryParserFactory(object):

    @staticmethod
    def build_from_conf(conf):
        args = dict((k, conf[k]) for k in ['default_section', 'aliases'] if k in conf)

        return EntryParser(**args)

    @staticmethod
    def build_default():
        return EntryParser()


class EntryParser(object):

    """
    Parse and build the entries of an experiment file from the grammar matches. An Entry represents one
    ``key = value`` assignment: the section it belongs to, the key, the value already converted to a python value, the
    type of the value as recognised by the grammar, and the line it was found on.

    EntryParser defines methods to be used in combination with :class:`ConfigGrammar` as the callbacks for the pyparsing
    set_parse_action method. Sections are stateful: every entry belongs to the last section header seen, or to the
    default section when no header came before it, so one EntryParser must only be used for one parse at a time.

    Callback parameters are always:
      - matched string from the config text
      - position of the match
      - pyparsing token list

    """

    def __init__(self, default_section='experiment', aliases=None):
        self._default_section = default_section
        self._key_aliases = aliases if aliases else {}
        self._section = default_section

    @property
    def aliases(self):
        return self._key_aliases

    @property
    def default_section(self):
        return self._default_section

    def reset(self):
        self._section = self._default_section

    def _build_value_data(self, value, value_type):
        return {Entry.VAL: value, Entry.VAL_TYPE: value_type}

    def section_parse(self, string, location, tokens):
        """
        Section headers switch the section every following entry is filed under

            > ej: [learning] => token list would be ['learning']
        """
        if tokens:
            self._section = tokens[0].lower()
            return {Entry.SECTION: self._section, Entry.LINE: lineno(location, string)}

    def key_parse(self, string, location, tokens):
        if tokens:
            key = tokens[0].lower()
            return {Entry.KEY: self._key_aliases.get(key, key), Entry.LINE: lineno(location, string)}

    def entry_parse(self, string, location, tokens):
        """
        Entry parse receives the key dict built by key_parse and the value dict built by whichever value parse method
        matched, and merges them with the current section:

            > tokens[0]: key dict
            > tokens[1]: value dict
        """
        if tokens:
            r = {Entry.SECTION: self._section}
            r.update(tokens[0])
            r.update(tokens[1])

            return Entry(**r)

    def boolean_parse(self, string, location, tokens):
        if tokens:
            return self._build_value_data(tokens[0].lower() in ('true', 'yes', 'on'), Entry.BOOL)

    def integer_parse(self, string, location, tokens):
        if tokens:
            return self._build_value_data(int(tokens[0]), Entry.INT)

    def real_parse(self, string, location, tokens):
        if tokens:
            return self._build_value_data(float(tokens[0]), Entry.REAL)

    def real_list_parse(self, string, location, tokens):
        """
        Comma separated reals, at least two of them

            > ej: tension = 0, 0.5, 1 => token list would be ['0', '0.5', '1']
        """
        if tokens:
            return self._build_value_data([float(t) for t in tokens], Entry.REAL_LIST)

    def quoted_text_parse(self, string, location, tokens):
        if tokens:
            return self._build_value_data(tokens[0], Entry.TEXT)

    def bare_text_parse(self, string, location, tokens):
        if tokens:
            return self._build_value_data(tokens[0], Entry.TEXT)


class Entry(dict):

    # value types
    BOOL = 'bool'
    INT = 'int'
    REAL = 'real'
    TEXT = 'text'
    REAL_LIST = 'real list'

    # entry keys
    SECTION = 'section'
    KEY = 'key'
    VAL = 'val'
    VAL_TYPE = 'val_type'
    LINE = 'line'

    def __getattr__(self, key):
        if key in self:
            return self[key]
        else:
            raise AttributeError("Entry doesn't have attribute '%s'" % key)

    @property
    def section(self):
        return self[self.SECTION] if self.SECTION in self else None

    @property
    def key(self):
        return self[self.KEY] if self.KEY in self else None

    @property
    def value(self):
        return self[self.VAL] if self.VAL in self else None

    @property
    def value_type(self):
        return self[self.VAL_TYPE] if self.VAL_TYPE in self else None

    @property
    def line(self):
        return self[self.LINE] if self.LINE in self else None

    @property
    def name(self):
        return "%s.%s" % (self.section, self.key)
