# -*- coding: utf-8 -*-
"""
Command-line front end. Every subcommand delegates to one operation of the
library and writes plain text; boolean queries end with HOLDS or DOES NOT
HOLD.

Exit status: 0 holds / success, 1 does not hold / violations found,
2 usage, parse or domain error.
"""
import argparse
import logging
import sys
from blessings import Terminal
from loopci import constraints
from loopci import formats
from loopci import graph
from loopci import independence
from loopci import paths
from loopci import profile
from loopci import theory as causal
from loopci import verifier

HOLDS = "HOLDS"
DOES_NOT_HOLD = "DOES NOT HOLD"

STATUS_OK = 0
STATUS_FAILED = 1
STATUS_ERROR = 2

FORMATS = ('text', 'tsv')

ERRORS = (
    formats.ParseError,
    graph.GraphError,
    constraints.ConstraintError,
    causal.TheoryError,
    independence.DistributionError,
    verifier.GeneratorError,
    profile.ProfileError
)


class UsageError(Exception):
    pass


def split_names(text):
    if not text:
        return []
    return [name.strip() for name in text.split(',') if name.strip()]


def split_assignment(text):
    """
    'A=0,B=1' gives {'A': '0', 'B': '1'}; '0,1' gives ('0', '1'), to be read
    in declared order.
    """
    items = split_names(text)
    if not items:
        raise UsageError("empty assignment")
    if not any('=' in item for item in items):
        return tuple(items)
    assignment = {}
    for item in items:
        name, sep, value = item.partition('=')
        if not sep or not name.strip() or not value.strip():
            raise UsageError("expected NAME=VALUE, got '{}'".format(item))
        if name.strip() in assignment:
            raise UsageError("'{}' assigned twice".format(name.strip()))
        assignment[name.strip()] = value.strip()
    return assignment


def _query(p_args):
    if not p_args.x or not p_args.y:
        raise UsageError("--x and --y are required")
    return graph.SeparationQuery(
        split_names(p_args.x),
        split_names(p_args.y),
        split_names(p_args.z)
    )


def _setting(value, path, default):
    if value is not None:
        return value
    return profile.get_int(path, default)


def _add_query_flags(parser, required=True):
    parser.add_argument('--x', required=required, help='comma-separated')
    parser.add_argument('--y', required=required, help='comma-separated')
    parser.add_argument('--z', default='', help='comma-separated')


def _add_format_flag(parser):
    # Own dest: a subparser default would overwrite the global --format
    parser.add_argument(
        '--format',
        dest='audit_format',
        choices=FORMATS,
        help='Audit output format (Default: profile audit.format or text)'
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog='loopci',
        description=' '.join([
            'Conditional independence in causal theories with feedback',
            'loops: d-separation, exact distributions and audits'
        ]),
        epilog='example files in {}: {}'.format(
            paths.DATA_PATH, ', '.join(paths.examples())
        )
    )
    parser.add_argument(
        '--debug',
        action='store_true',
        help='Show debug messages'
    )
    parser.add_argument(
        '--profile',
        metavar='FILE',
        help='Read defaults from FILE instead of the user profile'
    )
    parser.add_argument(
        '--format',
        choices=FORMATS,
        help='Audit output format (Default: profile audit.format or text)'
    )
    commands = parser.add_subparsers(dest='command', metavar='COMMAND')

    sub = commands.add_parser(
        'dsep', help='d-separation in a graph or a model\'s augmented graph'
    )
    sub.add_argument('file')
    _add_query_flags(sub)
    sub.add_argument('--method', choices=('moral', 'paths'), default='moral')

    sub = commands.add_parser(
        'moralize', help='moralized ancestral graph'
    )
    sub.add_argument('file')
    sub.add_argument('--w', help='comma-separated (Default: every node)')

    sub = commands.add_parser('solve', help='solutions for one u')
    sub.add_argument('model')
    sub.add_argument(
        '--u', required=True, help='U1=0,U2=1,... or values in declared order'
    )

    sub = commands.add_parser(
        'check-unique', help='unique solution for every u'
    )
    sub.add_argument('model')
    sub.add_argument(
        '--strict',
        action='store_true',
        help='also check every ancestral subsystem'
    )

    sub = commands.add_parser('dist', help='induced distribution P_T')
    sub.add_argument('model')
    sub.add_argument('--marginal', help='comma-separated variables')

    sub = commands.add_parser(
        'ci', help='exact conditional independence in P_T'
    )
    sub.add_argument('model')
    _add_query_flags(sub, required=False)
    sub.add_argument(
        '--all',
        action='store_true',
        help='list every singleton independence'
    )
    sub.add_argument('--max-z', type=int)

    sub = commands.add_parser('count', help='weighted solution count')
    sub.add_argument('problem')
    sub.add_argument('--partial', help='A=0,B=1,...')

    sub = commands.add_parser('augment', help='augmented causal graph')
    sub.add_argument('model')

    sub = commands.add_parser('classify', help='theory class')
    sub.add_argument('model')

    sub = commands.add_parser(
        'audit', help='d-separation against independence in P_T'
    )
    sub.add_argument('model')
    sub.add_argument('--max-z', type=int)
    sub.add_argument(
        '--trace',
        action='store_true',
        help='follow the counting argument for d-separated queries'
    )
    _add_format_flag(sub)

    sub = commands.add_parser(
        'audit-random', help='audit seeded random admissible theories'
    )
    sub.add_argument('--seeds', type=int, help='number of seeds')
    sub.add_argument('--first-seed', type=int, default=0)
    sub.add_argument('--n-vars', type=int)
    sub.add_argument('--n-values', type=int)
    sub.add_argument('--n-exo-values', type=int)
    sub.add_argument('--max-z', type=int)
    sub.add_argument('--budget', type=int, help='rejections allowed per seed')
    sub.add_argument(
        '--no-strict',
        action='store_true',
        help='only require the full system to be uniquely solvable'
    )
    _add_format_flag(sub)

    sub = commands.add_parser(
        'lemma3', help='compare the two d-separation tests'
    )
    sub.add_argument('--max-nodes', type=int)
    sub.add_argument('--samples', type=int)
    sub.add_argument('--seed', type=int)

    sub = commands.add_parser(
        'lemma4', help='counting identity for a separated query'
    )
    sub.add_argument('problem')
    _add_query_flags(sub)

    sub = commands.add_parser(
        'lemma5', help='P_T(w) against the weighted count of C_W'
    )
    sub.add_argument('model')
    sub.add_argument('--w', help='comma-separated (Default: every variable)')

    sub = commands.add_parser(
        'iterate', help='attractors of the synchronous update for one u'
    )
    sub.add_argument('model')
    sub.add_argument(
        '--u', required=True, help='U1=0,U2=1,... or values in declared order'
    )
    return parser


class commandline(object):
    def __init__(self, out=None, err=None):
        self._logger = logging.getLogger(__name__)
        self.out = out or sys.stdout
        self.err = err or sys.stderr
        # No escape codes unless out is a terminal
        self.t = Terminal(stream=self.out)

    def normal_text(self, text=""):
        return self.t.normal + text

    def strong_text(self, text=""):
        return self.t.bold_cyan + text + self.t.normal

    def alert_text(self, text=""):
        return self.t.bold_red + text + self.t.normal

    def success_text(self, text=""):
        return self.t.bold_green + text + self.t.normal

    def status_text(self, text=""):
        return self.t.bold_magenta + text + self.t.normal

    def println(self, text=""):
        self.out.write(text + "\n")

    def print_lines(self, lines):
        for line in lines:
            self.println(line)

    def verdict(self, holds):
        if holds:
            self.println(self.success_text(HOLDS))
            return STATUS_OK
        self.println(self.alert_text(DOES_NOT_HOLD))
        return STATUS_FAILED

    def error(self, message):
        self.err.write("loopci: error: {}\n".format(message))
        return STATUS_ERROR

    def execute(self, p_args):
        if not p_args.command:
            raise UsageError("a subcommand is required")
        profile.set_arg('profile_file', p_args.profile)
        if p_args.profile:
            profile.get_profile('reload')
        handler = getattr(self, 'do_' + p_args.command.replace('-', '_'))
        self._logger.debug("Running %s", p_args.command)
        return handler(p_args)

    def do_dsep(self, p_args):
        loaded = formats.load_graph_or_theory(p_args.file)
        if isinstance(loaded, causal.CausalTheory):
            g = causal.augmented_graph(loaded)
        else:
            g = loaded
        query = _query(p_args)
        if p_args.method == 'paths':
            return self.verdict(graph.d_separated_paths(g, query))
        return self.verdict(graph.d_separated_moral(g, query))

    def do_moralize(self, p_args):
        loaded = formats.load_graph_or_theory(p_args.file)
        if isinstance(loaded, causal.CausalTheory):
            loaded = causal.augmented_graph(loaded)
        w = split_names(p_args.w) or loaded.nodes
        self.print_lines(
            formats.dump_undirected(graph.moral_ancestral_graph(loaded, w))
        )
        return STATUS_OK

    def do_solve(self, p_args):
        theory = formats.load_theory(p_args.model)
        solutions = causal.solve_all(theory, split_assignment(p_args.u))
        self.print_lines(formats.dump_solutions(theory, solutions))
        if len(solutions) == 1:
            self.println(self.success_text(causal.UNIQUE))
            return STATUS_OK
        self.println(self.alert_text(
            causal.INCONSISTENT if not solutions else causal.UNSTABLE
        ))
        return STATUS_FAILED

    def _print_failures(self, theory, report):
        for u_values, found in report.solutions:
            if len(found) == 1:
                continue
            self.println("  {} : {} ({} solutions)".format(
                formats.format_assignment(report.exogenous, u_values),
                causal.INCONSISTENT if not found else causal.UNSTABLE,
                len(found)
            ))

    def do_check_unique(self, p_args):
        theory = formats.load_theory(p_args.model)
        report = causal.check_uniqueness(theory)
        if report.admissible:
            self.println("{}: {}".format(
                self.success_text("ADMISSIBLE"), report.summary()
            ))
        else:
            self.println("{}: {}".format(
                self.alert_text("NOT ADMISSIBLE"), report.summary()
            ))
            self._print_failures(theory, report)
        status = STATUS_OK if report.admissible else STATUS_FAILED
        if p_args.strict:
            failing = 0
            for sub_report in causal.check_ancestral_uniqueness(theory):
                self.println("ancestral {}: {}".format(
                    ",".join(sub_report.subsystem), sub_report.summary()
                ))
                if not sub_report.admissible:
                    failing += 1
                    self._print_failures(theory, sub_report)
            if failing:
                self.println(self.alert_text(
                    "{} ancestral subsystem(s) not uniquely solvable".format(
                        failing
                    )
                ))
                status = STATUS_FAILED
        return status

    def do_dist(self, p_args):
        theory = formats.load_theory(p_args.model)
        distribution = causal.induced_distribution(theory)
        names = split_names(p_args.marginal)
        if names:
            distribution = independence.marginal(distribution, names)
        self.print_lines(formats.dump_distribution(distribution))
        return STATUS_OK

    def do_ci(self, p_args):
        theory = formats.load_theory(p_args.model)
        distribution = causal.induced_distribution(theory)
        if p_args.all:
            max_z = _setting(p_args.max_z, ['audit', 'max_z'], 2)
            for query in independence.all_ci(distribution, max_z):
                self.println(str(query))
            return STATUS_OK
        return self.verdict(
            independence.ci_test(distribution, _query(p_args))
        )

    def do_count(self, p_args):
        problem = formats.load_problem(p_args.problem)
        partial = {}
        if p_args.partial:
            partial = split_assignment(p_args.partial)
            if not isinstance(partial, dict):
                raise UsageError("--partial needs NAME=VALUE pairs")
        self.println(str(constraints.count_solutions(problem, partial)))
        return STATUS_OK

    def do_augment(self, p_args):
        theory = formats.load_theory(p_args.model)
        self.print_lines(formats.dump_graph(causal.augmented_graph(theory)))
        return STATUS_OK

    def do_classify(self, p_args):
        theory = formats.load_theory(p_args.model)
        self.println(causal.classify(theory))
        return STATUS_OK

    def _format(self, p_args):
        fmt = (
            getattr(p_args, 'audit_format', None) or p_args.format or
            profile.get(['audit', 'format'], 'text')
        )
        if fmt not in FORMATS:
            raise UsageError(
                "unknown format '{}', expected one of {}".format(
                    fmt, ", ".join(FORMATS)
                )
            )
        return fmt

    def do_audit(self, p_args):
        theory = formats.load_theory(p_args.model)
        fmt = self._format(p_args)
        report = verifier.theorem2_audit(
            theory,
            _setting(p_args.max_z, ['audit', 'max_z'], 2),
            trace=p_args.trace
        )
        self.print_lines(formats.render_audit(report, fmt))
        if fmt == 'tsv':
            return STATUS_OK if report.confirmed else STATUS_FAILED
        return self.verdict(report.confirmed)

    def do_audit_random(self, p_args):
        fmt = self._format(p_args)
        count = _setting(p_args.seeds, ['random', 'seeds'], 100)
        strict = profile.get_profile_flag(['random', 'strict'], True)
        if p_args.no_strict:
            strict = False
        summary = verifier.random_audit(
            range(p_args.first_seed, p_args.first_seed + count),
            n_vars=_setting(p_args.n_vars, ['random', 'n_vars'], 4),
            n_values=_setting(p_args.n_values, ['random', 'n_values'], 3),
            n_exo_values=_setting(
                p_args.n_exo_values, ['random', 'n_exo_values'], 2
            ),
            max_z=_setting(p_args.max_z, ['audit', 'max_z'], 2),
            strict=strict,
            budget=_setting(
                p_args.budget, ['random', 'rejection_budget'], 20000
            )
        )
        self.println("theories: {}".format(summary.theories))
        self.println("cyclic: {}".format(summary.cyclic))
        self.println("markovian: {}".format(summary.markovian))
        self.println("rejections: {}".format(summary.rejections))
        self.println("queries: {}".format(summary.queries))
        self.println("failures: {}".format(len(summary.failures)))
        for theory, report in summary.failures:
            self.println(self.status_text("# {}".format(theory.name)))
            rows = formats.render_audit(report, fmt)
            if fmt == 'text':
                rows = ["# " + line for line in rows if line]
            self.print_lines(rows)
            self.print_lines(formats.dump_theory(theory))
        return self.verdict(summary.holds)

    def do_lemma3(self, p_args):
        report = verifier.lemma3_audit(
            max_nodes=_setting(
                p_args.max_nodes, ['lemma3', 'max_nodes'],
                verifier.EXHAUSTIVE_NODE_LIMIT
            ),
            samples=_setting(p_args.samples, ['lemma3', 'samples'], 200),
            seed=_setting(p_args.seed, ['lemma3', 'seed'], 0)
        )
        self.println("mode: {}".format(
            "exhaustive" if report.exhaustive else "sampled"
        ))
        self.println("graphs: {}".format(report.graphs))
        self.println("queries: {}".format(report.queries))
        self.println("disagreements: {}".format(len(report.disagreements)))
        for g, query, by_paths, by_moral in report.disagreements:
            self.println("  {} on {}: paths={} moral={}".format(
                query,
                " ".join("{}>{}".format(a, b) for a, b in sorted(g.edges)),
                by_paths,
                by_moral
            ))
        return self.verdict(report.holds)

    def do_lemma4(self, p_args):
        problem = formats.load_problem(p_args.problem)
        report = constraints.lemma4_check(problem, _query(p_args))
        self.println("instantiations: {}".format(report.instantiations))
        for x, y, z, left, right in report.violations:
            self.println("  x={} y={} z={} : {} != {}".format(
                " ".join(x), " ".join(y), " ".join(z) or "-", left, right
            ))
        return self.verdict(report.holds)

    def do_lemma5(self, p_args):
        theory = formats.load_theory(p_args.model)
        w = split_names(p_args.w) or theory.observed_names
        report = constraints.verify_lemma5(theory, w)
        self.println("# {} : P_T alpha*n".format(" ".join(report.w)))
        for values, probability, scaled in report.rows:
            self.println("{} : {} {}".format(
                " ".join(values),
                formats.format_rational(probability),
                "-" if scaled is None else formats.format_rational(scaled)
            ))
        self.println("alpha: {}".format(
            "-" if report.alpha is None
            else formats.format_rational(report.alpha)
        ))
        return self.verdict(report.holds)

    def do_iterate(self, p_args):
        theory = formats.load_theory(p_args.model)
        found = causal.attractors(theory, split_assignment(p_args.u))
        names = theory.observed_names
        for attractor in found:
            if attractor.is_fixed_point:
                self.println("fixed point: {}".format(
                    formats.format_assignment(names, attractor.states[0])
                ))
            else:
                self.println("{}: {}".format(
                    self.status_text("limit cycle"),
                    " -> ".join(
                        "({})".format(formats.format_assignment(names, s))
                        for s in attractor.states
                    )
                ))
        if all(a.is_fixed_point for a in found):
            return STATUS_OK
        return STATUS_FAILED


def run(argv=None, out=None, err=None):
    """
    Parses argv and runs one subcommand.

    Optional Arguments:
    out -- stream for results (Default: sys.stdout)
    err -- stream for diagnostics (Default: sys.stderr)

    Returns the exit status.
    """
    parser = build_parser()
    try:
        p_args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse has already printed the usage message
        return STATUS_ERROR if e.code else STATUS_OK
    return execute(p_args, out, err)


def execute(p_args, out=None, err=None):
    cli = commandline(out, err)
    try:
        return cli.execute(p_args)
    except UsageError as e:
        return cli.error(str(e))
    except ERRORS as e:
        logging.getLogger(__name__).debug("%s", e, exc_info=True)
        return cli.error(str(e))
