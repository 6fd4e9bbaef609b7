import glob
import json
import math
import os
import sys
from collections import defaultdict

import numpy as np
import scipy.stats


def mean_confidence_interval(data, confidence=0.95):
    a = 1.0 * np.array(data)
    n = len(a)
    m, se = np.mean(a), scipy.stats.sem(a)
    h = se * scipy.stats.t.ppf((1 + confidence) / 2., n-1)
    return m, h


def read_results(out_dir, suite):
    """Pass rates and log10 residuals of every check of a suite over all seeds."""
    residuals = defaultdict(list)
    statuses = defaultdict(list)
    for fn in sorted(glob.glob(os.path.join(out_dir, '%s_*.json' % suite))):
        with open(fn) as reader:
            try:
                report = json.load(reader)
            except ValueError:
                print('skipping unreadable report', fn)
                continue
        for entry in report['results']:
            # checks named per sample ('.../n=3') are pooled over n
            name = entry['name'].split('/n=')[0]
            statuses[name].append(entry['status'])
            if entry.get('residual') is not None:
                residuals[name].append(math.log10(max(entry['residual'], 1e-300)))

    print('Suite %s' % suite)
    for name in sorted(statuses):
        runs = statuses[name]
        rate = sum(1 for s in runs if s == 'pass') / float(len(runs))
        logs = residuals[name]
        if len(logs) > 1:
            m, h = mean_confidence_interval(logs)
            print('%-45s %.2f\t%.2f +- %.2f' % (name, rate, m, h))
        else:
            print('%-45s %.2f' % (name, rate))


if __name__ == '__main__':
    out_dir = sys.argv[1] if len(sys.argv) > 1 else 'results'
    suites = ['elliptic', 'recursion', 'premodular', 'painleve', 'asymptotics', 'zeros']

    for suite in suites:
        read_results(out_dir, suite)
