"""Machine-readable run reports: JSON (schema-checked), CSV and plain text."""
import csv
import io
import json
import logging
import time
from fractions import Fraction

import jsonschema
import numpy as np

logger = logging.getLogger(__name__)

PASS, FAIL, ERROR = 'pass', 'fail', 'error'

REPORT_SCHEMA = {
    'type': 'object',
    'properties': {
        'command': {'type': 'string'},
        'version': {'type': 'string'},
        'seed': {'type': 'integer'},
        'config': {'type': 'object'},
        'results': {
            'type': 'array',
            'items': {
                'type': 'object',
                'properties': {
                    'name': {'type': 'string'},
                    'status': {'enum': [PASS, FAIL, ERROR]},
                    'residual': {'type': ['number', 'null']},
                    'tolerance': {'type': ['number', 'null']},
                    'message': {'type': 'string'},
                },
                'required': ['name', 'status'],
                'oneOf': [{'required': ['value']}, {'required': ['values']}],
            },
        },
        'wall_time_ms': {'type': 'number', 'minimum': 0},
    },
    'required': ['command', 'config', 'results', 'wall_time_ms', 'seed'],
}


def jsonable(x):
    """Convert kernel values into JSON-friendly ones.

    Complex numbers become {"re": .., "im": ..}; Fractions stay exact as
    "p/q" strings unless integral; namedtuples become objects.
    """
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    if hasattr(x, '_asdict'):
        return dict((k, jsonable(v)) for (k, v) in x._asdict().items())
    if isinstance(x, dict):
        return dict((str(k), jsonable(v)) for (k, v) in x.items())
    if isinstance(x, (list, tuple, np.ndarray)):
        return [jsonable(v) for v in x]
    if callable(x):
        return repr(x)
    z = complex(x)
    if z.imag == 0:
        return z.real
    return {'re': z.real, 'im': z.imag}


class Report(object):
    """Results of one command, in the order they were added.

    Attributes:
        command (string): the subcommand that produced the report
        config (RunConfig): the configuration of the run
        results (List): one dict per reported item
    """
    def __init__(self, command, config, version):
        self.command = command
        self.config = config
        self.version = version
        self.results = []
        self.start = time.time()

    def add(self, name, value=None, values=None, residual=None, tolerance=None,
            status=PASS, message=None):
        entry = {'name': name, 'status': status}
        if values is not None:
            entry['values'] = jsonable(values)
        else:
            entry['value'] = jsonable(value)
        if residual is not None:
            entry['residual'] = float(residual)
        if tolerance is not None:
            entry['tolerance'] = float(tolerance)
        if message:
            entry['message'] = message
        self.results.append(entry)
        return entry

    def failures(self):
        return [r for r in self.results if r['status'] == FAIL]

    def errors(self):
        return [r for r in self.results if r['status'] == ERROR]

    def to_dict(self):
        return {
            'command': self.command,
            'version': self.version,
            'seed': self.config.seed,
            'config': self.config.to_dict(),
            'results': self.results,
            'wall_time_ms': (time.time() - self.start) * 1000.0,
        }

    def render(self, fmt):
        """
        Serialize the report.

        Args:
            fmt (string): json, csv or text
        Returns:
            string
        """
        data = self.to_dict()
        jsonschema.validate(data, REPORT_SCHEMA)
        if fmt == 'json':
            return json.dumps(data, indent=2, sort_keys=True)
        if fmt == 'csv':
            return self._csv(data)
        if fmt == 'text':
            return self._text(data)
        raise ValueError('Unknown output format: %s' % fmt)

    @staticmethod
    def _cell(entry):
        value = entry.get('values', entry.get('value'))
        return json.dumps(value, sort_keys=True) if isinstance(value, (dict, list)) else value

    def _csv(self, data):
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(['name', 'status', 'value', 'residual', 'tolerance', 'message'])
        for entry in data['results']:
            writer.writerow([entry['name'], entry['status'], self._cell(entry),
                             entry.get('residual', ''), entry.get('tolerance', ''),
                             entry.get('message', '')])
        return out.getvalue()

    def _text(self, data):
        lines = ['***** %s (seed = %d) *****' % (data['command'], data['seed'])]
        for entry in data['results']:
            line = '  %-40s %-5s %s' % (entry['name'], entry['status'], self._cell(entry))
            if 'residual' in entry:
                line += '  residual = %.3g' % entry['residual']
            if 'tolerance' in entry:
                line += ' (tol %.1g)' % entry['tolerance']
            if 'message' in entry:
                line += '  ' + entry['message']
            lines.append(line)
        lines.append('  wall time = %.0f ms' % data['wall_time_ms'])
        return '\n'.join(lines)
