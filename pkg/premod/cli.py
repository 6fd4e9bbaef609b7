"""Command-line driver: eval, count, table and verify.

Exit codes: 0 pass, 1 a check failed, 2 usage or domain error, 3 numerical
breakdown.
"""
import argparse
import logging
import sys
from fractions import Fraction

from premod import __version__, config, counting, errors, painleve, premodular, suites
from premod.backend import get_backend
from premod.elliptic import lattice_data, make_point
from premod.errors import PremodError
from premod.report import ERROR, Report

WHAT = ('Z', 'lambda', 'mu', 'wp_p', 'M')


def parse_rational(text):
    """'p/q', an integer or a decimal, kept exact."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError('not a rational number: %r' % text)


def parse_complex(text):
    """'a+bi' (or 'a+bj')."""
    try:
        return complex(text.strip().replace(' ', '').replace('i', 'j'))
    except ValueError:
        raise argparse.ArgumentTypeError('not a complex number: %r' % text)


def parse_range(text):
    """'1-4' or '1,3,5'."""
    try:
        if '-' in text:
            lo, hi = text.split('-')
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(',')]
    except ValueError:
        raise argparse.ArgumentTypeError('not a range: %r' % text)


def parse_tolerance(text):
    name, _, value = text.partition('=')
    try:
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError('expected NAME=VALUE, got %r' % text)


def parse_args(argv):
    parser = argparse.ArgumentParser(
        prog='premod',
        description='pre-modular forms, Painleve VI solutions and Lame counts',
        formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    arg = parser.add_argument
    arg('--config', metavar='FILE', default=None, help='JSON run configuration')
    arg('--precision', choices=('double', 'extended'), default=None)
    arg('--dps', type=int, default=None, help='digits of the extended backend')
    arg('--threads', type=int, default=None)
    arg('--seed', type=int, default=None)
    arg('--output', choices=('json', 'csv', 'text'), default=None)
    arg('--n-max', type=int, default=None, dest='n_max')
    arg('--tol', type=parse_tolerance, action='append', default=[],
        metavar='NAME=VALUE', help='override a named tolerance')
    arg('-v', '--verbose', action='store_true')
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    ev = sub.add_parser('eval', help='evaluate Z, lambda, mu, wp(p) or M')
    ev.add_argument('--what', choices=WHAT, default='Z')
    ev.add_argument('--n', type=int, required=True)
    ev.add_argument('--r', type=parse_rational, default=None)
    ev.add_argument('--s', type=parse_rational, default=None)
    ev.add_argument('--N', type=int, default=None, help='torsion order, for --what M')
    ev.add_argument('--tau', type=parse_complex, required=True)

    co = sub.add_parser('count', help='the counts L, PL and v_inf for (n, N)')
    co.add_argument('--n', type=int, required=True)
    co.add_argument('--N', type=int, required=True)

    ta = sub.add_parser('table', help='CountReports over a grid of (n, N)')
    ta.add_argument('--n', type=parse_range, default=[1, 2, 3, 4])
    ta.add_argument('--N', type=parse_range, default=list(range(3, 13)))

    ve = sub.add_parser('verify', help='run invariant suites')
    ve.add_argument('--suite', choices=suites.SUITES + ('all',), default='all')
    return parser, parser.parse_args(argv)


def build_config(args):
    base = config.RunConfig.from_json_file(args.config) if args.config else config.load_default()
    return base.with_overrides(precision=args.precision, extended_dps=args.dps,
                               threads=args.threads, seed=args.seed, output=args.output,
                               n_max=args.n_max, tolerances=dict(args.tol) or None)


def cmd_eval(args, report):
    bk = get_backend()
    if args.what == 'M':
        if args.N is None:
            raise argparse.ArgumentTypeError('--what M needs --N')
        prod = premodular.m_product(args.n, args.N, args.tau, bk)
        report.add('M_{%d,%d}' % (args.n, args.N), value=prod.value)
        report.add('log_abs', value=prod.log_abs)
        report.add('arg', value=prod.arg)
        return
    if args.r is None or args.s is None:
        raise argparse.ArgumentTypeError('--r and --s are required')
    pt = make_point(args.r, args.s)
    ld = lattice_data(args.tau, bk)
    if args.what == 'Z':
        value = premodular.z_n(args.n, pt, ld)
        report.add('Z^(%d)' % args.n, value=value.value)
        report.add('weight', value=value.weight)
    else:
        sample = painleve.pvi_sample(args.n, pt, ld)
        report.add('%s^(%d)' % (args.what, args.n), value=getattr(sample, 'lam' if args.what == 'lambda' else args.what))
        report.add('t', value=sample.t)
        report.add('pole_flag', value=sample.flagged)
    report.add('series_terms', value=ld.terms)
    report.add('backend', value='%s/%d' % (bk.name, bk.dps))


def cmd_count(args, report):
    if args.N < 3:
        raise argparse.ArgumentTypeError('--N must be at least 3')
    result = counting.count_L(args.n, args.N)
    for (key, value) in result._asdict().items():
        report.add(key, value=value)


def cmd_table(args, report):
    if min(args.N) < 3:
        raise argparse.ArgumentTypeError('every N must be at least 3')
    for row in counting.count_table(args.n, args.N):
        report.add('n=%d/N=%d' % (row.n, row.N), values=row)


def cmd_verify(args, report, cfg):
    names = suites.SUITES if args.suite == 'all' else (args.suite,)
    suites.run_suites(names, report, cfg, cfg.n_max)


def exit_code(report):
    """1 if a check failed, else the largest exit code among recorded errors."""
    if report.failures():
        return 1
    codes = []
    for entry in report.errors():
        name = entry.get('message', '').split(':', 1)[0]
        codes.append(getattr(errors, name, errors.PremodError).exit_code)
    return max(codes) if codes else 0


def main(argv=None):
    parser, args = parse_args(sys.argv[1:] if argv is None else argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    try:
        cfg = config.activate(build_config(args))
    except Exception as e:
        parser.print_usage(sys.stderr)
        sys.stderr.write('premod: error: bad configuration: %s\n' % e)
        return 2
    report = Report(args.command, cfg, __version__)
    try:
        if args.command == 'eval':
            cmd_eval(args, report)
        elif args.command == 'count':
            cmd_count(args, report)
        elif args.command == 'table':
            cmd_table(args, report)
        else:
            cmd_verify(args, report, cfg)
    except argparse.ArgumentTypeError as e:
        parser.print_usage(sys.stderr)
        sys.stderr.write('premod: error: %s\n' % e)
        return 2
    except PremodError as e:
        report.add(args.command, value=None, status=ERROR,
                   message='%s: %s' % (type(e).__name__, e))
        print(report.render(cfg.output))
        return e.exit_code
    print(report.render(cfg.output))
    return exit_code(report)
