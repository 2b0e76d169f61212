from .grammar import ConfigGrammar, ConfigGrammarFactory, GrammarError
from .entry_parser import EntryParser, EntryParserFactory, Entry
from .parser import (ExperimentConfig, ExperimentConfigParser, EmergenceParams, ConfigError, ConfigSyntaxError,
                     UnknownKeyError, ConfigValidationError, parse_config, SCHEMA, MODES)
