"""Run configuration and named tolerances.

Defaults live in data/config.json; a run may override any of them from the
command line or from another JSON file of the same shape.
"""
import copy
import json
import logging
import os

import jsonschema

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_FN = os.path.join(os.path.dirname(os.path.abspath(__file__)),
                                 os.pardir, 'data', 'config.json')

PRECISION_ENV = 'PREMOD_PRECISION'

CONFIG_SCHEMA = {
    'type': 'object',
    'properties': {
        'precision': {'enum': ['double', 'extended']},
        'extended_dps': {'type': 'integer', 'minimum': 16},
        'output': {'enum': ['json', 'csv', 'text']},
        'threads': {'type': 'integer', 'minimum': 1},
        'seed': {'type': 'integer'},
        'n_max': {'type': 'integer', 'minimum': 0},
        'tolerances': {
            'type': 'object',
            'additionalProperties': {'type': 'number', 'exclusiveMinimum': 0},
        },
        'level_cap_double': {'type': 'integer', 'minimum': 1},
        'order_ladder': {
            'type': 'array',
            'items': {'type': 'number', 'exclusiveMinimum': 0},
            'minItems': 3,
        },
        'ell_grid': {
            'type': 'object',
            'properties': {
                're': {'type': 'array', 'minItems': 3, 'maxItems': 3},
                'im': {'type': 'array', 'minItems': 3, 'maxItems': 3},
            },
            'required': ['re', 'im'],
        },
    },
    'required': ['precision', 'tolerances'],
}


class RunConfig(object):
    """Configuration of one run of the kernel.

    Attributes:
        precision (string): 'double' or 'extended'
        extended_dps (int): decimal digits of the extended backend
        output (string): report format, one of json, csv, text
        threads (int): size of the worker pool used by suites
        seed (int): seed of the randomized property suites
        n_max (int): largest pre-modular index exercised by suites
        tolerances (Dict): named positive tolerances
        level_cap_double (int): largest recursion level allowed in double
        order_ladder (List): Im(tau) ladder of the vanishing-order fits
        ell_grid (Dict): (start, stop, count) grids of the j-degree fit
    """

    def __init__(self,
                 precision='double',
                 extended_dps=50,
                 output='json',
                 threads=1,
                 seed=123,
                 n_max=4,
                 tolerances=None,
                 level_cap_double=8,
                 order_ladder=None,
                 ell_grid=None):
        self.precision = precision
        self.extended_dps = extended_dps
        self.output = output
        self.threads = threads
        self.seed = seed
        self.n_max = n_max
        self.tolerances = dict(tolerances or {})
        self.level_cap_double = level_cap_double
        self.order_ladder = list(order_ladder or [6, 8, 10, 12, 14])
        self.ell_grid = dict(ell_grid or {'re': [0.05, 0.95, 6],
                                          'im': [1.0, 2.5, 5]})

    @classmethod
    def from_dict(cls, json_object):
        """Constructs a `RunConfig` from a Python dictionary of parameters."""
        jsonschema.validate(json_object, CONFIG_SCHEMA)
        config = cls()
        for (key, value) in json_object.items():
            config.__dict__[key] = copy.deepcopy(value)
        return config

    @classmethod
    def from_json_file(cls, json_file):
        """Constructs a `RunConfig` from a json file of parameters."""
        with open(json_file, 'r') as reader:
            return cls.from_dict(json.load(reader))

    def to_dict(self):
        """Serializes this instance to a Python dictionary."""
        return copy.deepcopy(self.__dict__)

    def to_json_string(self):
        """Serializes this instance to a JSON string."""
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + '\n'

    def with_overrides(self, **overrides):
        """Returns a copy with the non-None keyword arguments replaced.

        The special keyword `tolerances` is merged into the existing map
        instead of replacing it.
        """
        result = type(self).from_dict(self.to_dict())
        for (key, value) in overrides.items():
            if value is None:
                continue
            if key == 'tolerances':
                result.tolerances.update(value)
            else:
                result.__dict__[key] = value
        jsonschema.validate(result.to_dict(), CONFIG_SCHEMA)
        return result

    def tol(self, name):
        if name not in self.tolerances:
            raise KeyError('Unknown tolerance: %s' % name)
        return self.tolerances[name]


_active = None


def load_default():
    config = RunConfig.from_json_file(DEFAULT_CONFIG_FN)
    env_precision = os.environ.get(PRECISION_ENV)
    if env_precision:
        logger.info('  precision override from %s = %s', PRECISION_ENV, env_precision)
        config = config.with_overrides(precision=env_precision)
    return config


def active():
    """Returns the configuration the kernel currently runs under."""
    global _active
    if _active is None:
        _active = load_default()
    return _active


def activate(config):
    global _active
    _active = config
    return config


def tol(name):
    return active().tol(name)
