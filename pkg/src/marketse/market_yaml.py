#!/usr/bin/env python
# encoding: utf-8
"""
market_yaml.py

Read and write market instances and experiment grids as JSON or YAML,
with optional validation against the schemas in market_inputs/.

Copyright (c) MarketSE Team. All rights reserved.
"""

from __future__ import print_function
import json
import logging
import os
import sys
import time

import jsonschema
from ruamel.yaml import YAML

from marketse.core import Instance

logger = logging.getLogger(__name__)

SCHEMA_DIR = os.path.join(os.path.dirname(os.path.realpath(__file__)), 'market_inputs')
INSTANCE_SCHEMA = os.path.join(SCHEMA_DIR, 'instance_schema.yaml')
GRID_SCHEMA = os.path.join(SCHEMA_DIR, 'grid_schema.yaml')


def _read(fname):
    if fname == '-':
        return sys.stdin.read()
    with open(fname, 'r') as myfile:
        return myfile.read()


def _parse(text, fname):
    # JSON is a YAML subset, but the json module gives clearer errors for .json files
    if str(fname).lower().endswith('.json'):
        return json.loads(text)
    yaml = YAML(typ='safe')
    return yaml.load(text)


def json_float(value):
    """JSON text for ``value`` with 17 significant digits."""
    if value != value:
        return 'NaN'
    if value in (float('inf'), float('-inf')):
        return 'Infinity' if value > 0 else '-Infinity'
    text = '%.17g' % value
    # keep integral floats typed as floats when read back
    if not any(ch in text for ch in '.en'):
        text += '.0'
    return text


class JSONFloatEncoder(json.JSONEncoder):
    """JSON encoder writing every float with 17 significant digits."""

    def iterencode(self, o, _one_shot=False):
        markers = {} if self.check_circular else None
        indent = ' ' * self.indent if isinstance(self.indent, int) else self.indent
        encode_str = json.encoder.encode_basestring_ascii if self.ensure_ascii else json.encoder.encode_basestring
        return json.encoder._make_iterencode(markers, self.default, encode_str, indent, json_float,
                                             self.key_separator, self.item_separator, self.sort_keys,
                                             self.skipkeys, _one_shot)(o, 0)


class MarketInputs(object):
    """Loader for instance and grid files.

    Attributes ``verbose`` and ``validate`` switch timing prints and schema
    checks; ``fname_schema_instance`` and ``fname_schema_grid`` point at the
    schemas.
    """

    def __init__(self):
        self.verbose = False
        self.validate = True
        self.fname_schema_instance = INSTANCE_SCHEMA
        self.fname_schema_grid = GRID_SCHEMA

    def load_data(self, fname_input, fname_schema=''):
        """Parse a JSON/YAML file (``'-'`` for stdin), validating it when a schema is given."""
        t_load = time.time()
        data = _parse(_read(fname_input), fname_input)
        logger.debug('parsed %s', fname_input)

        if self.validate and fname_schema:
            t_validate = time.time()
            schema = YAML(typ='safe').load(_read(fname_schema))
            jsonschema.validate(data, schema)
            if self.verbose:
                print('Complete: Schema "%s" validation: \t%f s' % (fname_schema, time.time() - t_validate))

        if self.verbose:
            print('Complete: Load Input File: \t%f s' % (time.time() - t_load))
        return data

    def load_instance(self, fname_input):
        return Instance.from_dict(self.load_data(fname_input, self.fname_schema_instance))

    def load_grid_data(self, fname_input):
        return self.load_data(fname_input, self.fname_schema_grid)

    def write_instance(self, fname, inst):
        """Write an instance; ``.json`` files get JSON, anything else YAML."""
        data = inst.to_dict()
        with open(fname, 'w') as f:
            if fname.lower().endswith('.json'):
                json.dump(data, f, indent=2, sort_keys=True, cls=JSONFloatEncoder)
                f.write('\n')
            else:
                yaml = YAML()
                yaml.default_flow_style = None
                yaml.width = float('inf')
                yaml.dump(data, f)


def load_instance(fname, validate=True, fname_schema=INSTANCE_SCHEMA):
    reader = MarketInputs()
    reader.validate = validate
    reader.fname_schema_instance = fname_schema
    return reader.load_instance(fname)


def load_grid_data(fname, validate=True):
    reader = MarketInputs()
    reader.validate = validate
    return reader.load_grid_data(fname)


def write_instance(fname, inst):
    MarketInputs().write_instance(fname, inst)
