# -*- coding: utf-8 -*-
"""
Discrete causal theories <V, U, P(u), {f_i}>: observed variables V, one
exogenous disturbance U_i per observed variable, a distribution over U and one
tabulated structural equation x_i = f_i(pa_i, u_i) per observed variable.

The equations may form feedback loops. A theory is admissible when, for every
assignment u of the disturbances, the equations have exactly one solution.
"""
import collections
import itertools
import logging
from fractions import Fraction
import networkx as nx
from loopci import graph
from loopci import independence

MARKOVIAN = 'markovian'
SEMI_MARKOVIAN = 'semi_markovian'
GENERAL = 'general'

UNIQUE = 'unique'
INCONSISTENT = 'inconsistent'
UNSTABLE = 'unstable'

UNIQUENESS_ASSUMPTION = " ".join([
    "the equations must have exactly one solution for every assignment",
    "of the exogenous variables"
])


class TheoryError(Exception):
    pass


class NotAdmissibleError(TheoryError):
    def __init__(self, report):
        self.report = report
        super(NotAdmissibleError, self).__init__(
            "theory is not admissible ({}): {}".format(
                report.summary(), UNIQUENESS_ASSUMPTION
            )
        )


class Equation(object):
    def __init__(self, child, parents, exogenous, table):
        """
        Arguments:
        child -- the observed variable this equation determines
        parents -- the observed variables PA_i it reads, in argument order
        exogenous -- the disturbance U_i it reads
        table -- mapping from (parent values..., exogenous value) tuples to
                 the child value
        """
        self.child = child
        self.parents = tuple(parents)
        self.exogenous = exogenous
        self._table = dict(
            (tuple(key), value) for key, value in table.items()
        )

    @property
    def table(self):
        return dict(self._table)

    def evaluate(self, values, u_value):
        """
        Arguments:
        values -- mapping from observed names to values (at least PA_i)
        u_value -- the value of U_i
        """
        return self._table[
            tuple(values[parent] for parent in self.parents) + (u_value,)
        ]

    def __repr__(self):
        return "Equation({} <- {} ; {})".format(
            self.child, ",".join(self.parents), self.exogenous
        )


class CausalTheory(object):
    def __init__(
        self,
        observed,
        exogenous,
        equations,
        exo_marginals=None,
        exo_joint=None,
        name=None,
        metadata=None
    ):
        """
        Arguments:
        observed -- sequence of (name, domain) pairs (V)
        exogenous -- sequence of (name, domain) pairs (U)
        equations -- one Equation per observed variable

        Optional Arguments:
        exo_marginals -- {name: {value: probability}}, independent
                         disturbances; a variable left out is uniform
        exo_joint -- {u tuple: probability} over the declared exogenous
                     order; overrides exo_marginals
        name -- label used in reports
        metadata -- free-form dict (e.g. generator seed and rejections)
        """
        self.name = name or "theory"
        self.metadata = dict(metadata or {})
        self._observed = tuple((n, tuple(d)) for n, d in observed)
        self._exogenous = tuple((n, tuple(d)) for n, d in exogenous)
        self._domains = dict(self._observed + self._exogenous)
        self._equations = collections.OrderedDict()
        for equation in equations:
            if equation.child in self._equations:
                raise TheoryError(
                    "more than one equation for {}".format(equation.child)
                )
            self._equations[equation.child] = equation
        self._validate_structure()
        self.exo_declared_independent = exo_joint is None
        try:
            if exo_joint is None:
                marginals = exo_marginals or {}
                self._exo_dist = independence.product_distribution([
                    (n, d, self._exo_marginal(n, d, marginals.get(n)))
                    for n, d in self._exogenous
                ])
            else:
                self._exo_dist = independence.JointDistribution(
                    self._exogenous, exo_joint
                )
        except independence.DistributionError as e:
            raise TheoryError("exogenous distribution: {}".format(e))

    @staticmethod
    def _exo_marginal(name, domain, probabilities):
        if probabilities is None:
            return dict((value, Fraction(1, len(domain))) for value in domain)
        probabilities = dict(
            (value, Fraction(p)) for value, p in probabilities.items()
        )
        unknown = set(probabilities) - set(domain)
        if unknown:
            raise TheoryError(
                "probabilities given for values outside the domain of {}".format(
                    name
                )
            )
        if any(p < 0 or p > 1 for p in probabilities.values()):
            raise TheoryError(
                "probabilities of {} must lie in [0, 1]".format(name)
            )
        if sum(probabilities.values()) != 1:
            raise TheoryError(
                "probabilities of {} sum to {}, not 1".format(
                    name, sum(probabilities.values())
                )
            )
        return probabilities

    def _validate_structure(self):
        observed = [n for n, _ in self._observed]
        exogenous = [n for n, _ in self._exogenous]
        names = observed + exogenous
        if len(set(names)) != len(names):
            raise TheoryError("variable names must be unique")
        for name, domain in self._observed + self._exogenous:
            if not domain:
                raise TheoryError("domain of {} is empty".format(name))
            if len(set(domain)) != len(domain):
                raise TheoryError("domain of {} repeats a value".format(name))
        missing = [n for n in observed if n not in self._equations]
        if missing:
            raise TheoryError(
                "no equation for {}".format(", ".join(missing))
            )
        extra = [n for n in self._equations if n not in observed]
        if extra:
            raise TheoryError(
                "equation for undeclared variable {}".format(
                    ", ".join(extra)
                )
            )
        feeds = collections.Counter()
        for equation in self._equations.values():
            if equation.child in equation.parents:
                raise TheoryError(
                    "{} must not be its own parent".format(equation.child)
                )
            for parent in equation.parents:
                if parent not in observed:
                    raise TheoryError(
                        "parent {} of {} is not an observed variable".format(
                            parent, equation.child
                        )
                    )
            if len(set(equation.parents)) != len(equation.parents):
                raise TheoryError(
                    "parents of {} repeat a variable".format(equation.child)
                )
            if equation.exogenous not in exogenous:
                raise TheoryError(
                    "{} reads unknown exogenous variable {}".format(
                        equation.child, equation.exogenous
                    )
                )
            feeds[equation.exogenous] += 1
            self._validate_table(equation)
        shared = sorted(u for u, count in feeds.items() if count > 1)
        unused = sorted(u for u in exogenous if feeds[u] == 0)
        if shared or unused:
            raise TheoryError(
                "every exogenous variable must feed exactly one equation"
                " (shared: {}; unused: {})".format(
                    ", ".join(shared) or "-", ", ".join(unused) or "-"
                )
            )

    def _validate_table(self, equation):
        table = equation.table
        inputs = [self._domains[p] for p in equation.parents]
        inputs.append(self._domains[equation.exogenous])
        expected = set(itertools.product(*inputs))
        missing = expected - set(table)
        if missing:
            raise TheoryError(
                "equation for {} is not total, missing {}".format(
                    equation.child,
                    " ".join(sorted(
                        ",".join(str(v) for v in key) for key in missing
                    )[:3])
                )
            )
        if set(table) - expected:
            raise TheoryError(
                "equation for {} has entries outside its domain".format(
                    equation.child
                )
            )
        for value in table.values():
            if value not in self._domains[equation.child]:
                raise TheoryError(
                    "equation for {} yields '{}' outside its domain".format(
                        equation.child, value
                    )
                )

    @property
    def observed(self):
        return self._observed

    @property
    def exogenous(self):
        return self._exogenous

    @property
    def observed_names(self):
        return tuple(n for n, _ in self._observed)

    @property
    def exogenous_names(self):
        return tuple(n for n, _ in self._exogenous)

    @property
    def equations(self):
        return tuple(self._equations.values())

    @property
    def exo_dist(self):
        return self._exo_dist

    def domain(self, name):
        try:
            return self._domains[name]
        except KeyError:
            raise TheoryError("unknown variable {}".format(name))

    def equation(self, child):
        try:
            return self._equations[child]
        except KeyError:
            raise TheoryError("no equation for {}".format(child))

    def check_observed(self, names):
        names = frozenset(names)
        unknown = sorted(names - set(self.observed_names))
        if unknown:
            raise TheoryError(
                "unknown observed variable(s): {}".format(", ".join(unknown))
            )
        return names

    def exo_marginal(self, name):
        """{value: probability} of one disturbance."""
        projected = independence.marginal(self._exo_dist, [name]).project([name])
        return dict(
            (value, projected.get((value,), Fraction(0)))
            for value in self.domain(name)
        )

    def exo_independent(self):
        """True iff P(u) is the product of its per-variable marginals."""
        if self.exo_declared_independent:
            return True
        return independence.factorizes(
            self._exo_dist, [[name] for name in self.exogenous_names]
        )

    def exo_assignment(self, u):
        """
        Normalizes u (mapping or tuple in declared order) to a complete,
        in-domain {name: value} dict.
        """
        names = self.exogenous_names
        if not isinstance(u, dict):
            u = tuple(u)
            if len(u) != len(names):
                raise TheoryError(
                    "exogenous assignment needs {} values, got {}".format(
                        len(names), len(u)
                    )
                )
            u = dict(zip(names, u))
        missing = [n for n in names if n not in u]
        if missing:
            raise TheoryError(
                "exogenous assignment is incomplete, missing {}".format(
                    ", ".join(missing)
                )
            )
        unknown = sorted(set(u) - set(names))
        if unknown:
            raise TheoryError(
                "unknown exogenous variable(s): {}".format(", ".join(unknown))
            )
        for name, value in u.items():
            if value not in self._domains[name]:
                raise TheoryError(
                    "value '{}' is not in the domain of {}".format(value, name)
                )
        return dict(u)

    def __repr__(self):
        return "CausalTheory({}: V={}, U={})".format(
            self.name,
            ",".join(self.observed_names),
            ",".join(self.exogenous_names)
        )


def _solve(theory, names, u):
    # Exhaustive search over the domain product of names; an assignment is a
    # solution when every equation of names reproduces its own value.
    equations = [theory.equation(name) for name in names]
    solutions = []
    for values in itertools.product(*[theory.domain(n) for n in names]):
        assignment = dict(zip(names, values))
        if all(
            eq.evaluate(assignment, u[eq.exogenous]) == assignment[eq.child]
            for eq in equations
        ):
            solutions.append(values)
    return tuple(solutions)


def solve_all(theory, u):
    """
    Every observed assignment (tuple in declared order) satisfying all
    equations under the exogenous assignment u, in domain order.
    """
    return _solve(theory, theory.observed_names, theory.exo_assignment(u))


class SolutionReport(object):
    def __init__(self, subsystem, exogenous, solutions):
        """
        Arguments:
        subsystem -- observed names whose equations were solved
        exogenous -- exogenous names of those equations
        solutions -- list of (u tuple, solutions tuple) in enumeration order
        """
        self.subsystem = tuple(subsystem)
        self.exogenous = tuple(exogenous)
        self.solutions = list(solutions)
        self.unique = [u for u, s in self.solutions if len(s) == 1]
        self.inconsistent = [u for u, s in self.solutions if len(s) == 0]
        self.unstable = [u for u, s in self.solutions if len(s) > 1]

    @property
    def admissible(self):
        return not self.inconsistent and not self.unstable

    def classification(self, u):
        for candidate, found in self.solutions:
            if candidate == tuple(u):
                if len(found) == 1:
                    return UNIQUE
                return INCONSISTENT if not found else UNSTABLE
        raise TheoryError("no such exogenous assignment {}".format(u))

    def summary(self):
        return "{}/{} exogenous assignments unique".format(
            len(self.unique), len(self.solutions)
        )


def check_uniqueness(theory, subsystem=None, stop_early=False):
    """
    Solves the equations for every exogenous assignment and classifies each
    assignment as unique, inconsistent (no solution) or unstable (two or
    more solutions).

    Arguments:
    theory -- the CausalTheory to check

    Optional Arguments:
    subsystem -- observed names closed under parents; only their equations
                 and disturbances are considered (Default: all of V)
    stop_early -- stop at the first assignment that is not unique
    """
    logger = logging.getLogger(__name__)
    names = theory.observed_names
    if subsystem is not None:
        subsystem = theory.check_observed(subsystem)
        names = tuple(n for n in names if n in subsystem)
    exo_names = tuple(theory.equation(n).exogenous for n in names)
    exo_names = tuple(u for u in theory.exogenous_names if u in exo_names)
    results = []
    for u_values in itertools.product(*[theory.domain(u) for u in exo_names]):
        found = _solve(theory, names, dict(zip(exo_names, u_values)))
        results.append((u_values, found))
        if len(found) != 1:
            logger.debug(
                "%s: u=%s has %d solution(s)", theory.name, u_values, len(found)
            )
            if stop_early:
                break
    return SolutionReport(names, exo_names, results)


def ancestral_sets(theory):
    """
    Every non-empty set of observed variables closed under parents, ordered
    by size and then by declared order.
    """
    g = causal_graph(theory)
    names = theory.observed_names
    found = []
    for size in range(1, len(names) + 1):
        for subset in itertools.combinations(names, size):
            if graph.ancestors(g, subset) == frozenset(subset):
                found.append(frozenset(subset))
    return found


def check_ancestral_uniqueness(theory, stop_early=False):
    """
    One SolutionReport per ancestral subsystem. Every report must be
    admissible for "equations of non-ancestors do not constrain" to hold in
    the presence of feedback; each cycle's fixed points get checked on their
    own.
    """
    reports = []
    for subset in ancestral_sets(theory):
        report = check_uniqueness(theory, subset, stop_early=stop_early)
        reports.append(report)
        if stop_early and not report.admissible:
            break
    return reports


def is_admissible(theory, strict=False):
    """
    Arguments:
    strict -- also require every ancestral subsystem to be uniquely solvable
    """
    if not check_uniqueness(theory, stop_early=True).admissible:
        return False
    if strict:
        return all(
            report.admissible
            for report in check_ancestral_uniqueness(theory, stop_early=True)
        )
    return True


def require_admissible(theory):
    report = check_uniqueness(theory)
    if not report.admissible:
        raise NotAdmissibleError(report)
    return report


def induced_distribution(theory):
    """
    P_T(v): the mass of every exogenous assignment moved onto its unique
    solution.
    """
    report = require_admissible(theory)
    table = {}
    for u_values, found in report.solutions:
        probability = theory.exo_dist.probability(
            dict(zip(report.exogenous, u_values))
        )
        if probability:
            table[found[0]] = table.get(found[0], Fraction(0)) + probability
    return independence.JointDistribution(theory.observed, table)


def causal_graph(theory):
    edges = [
        (parent, equation.child)
        for equation in theory.equations
        for parent in equation.parents
    ]
    return graph.DirectedGraph(theory.observed_names, edges)


def dummy_name(theory, u_a, u_b):
    name = "D({},{})".format(u_a, u_b)
    taken = set(theory.observed_names)
    while name in taken:
        name += "'"
    return name


def augmented_graph(theory):
    """
    The causal graph plus one dummy root per pair of disturbances in the same
    dependence block, pointing at the two observed children of that pair.
    """
    logger = logging.getLogger(__name__)
    base = causal_graph(theory)
    if theory.exo_declared_independent:
        return base
    child_of = dict(
        (eq.exogenous, eq.child) for eq in theory.equations
    )
    nodes = list(theory.observed_names)
    edges = list(base.edges)
    for block in independence.dependence_blocks(theory.exo_dist):
        members = [u for u in theory.exogenous_names if u in block]
        for u_a, u_b in itertools.combinations(members, 2):
            dummy = dummy_name(theory, u_a, u_b)
            logger.debug("dummy root %s for dependent %s, %s", dummy, u_a, u_b)
            nodes.append(dummy)
            edges.append((dummy, child_of[u_a]))
            edges.append((dummy, child_of[u_b]))
    return graph.DirectedGraph(nodes, edges)


def classify(theory):
    if not theory.exo_independent():
        return GENERAL
    if causal_graph(theory).is_acyclic():
        return MARKOVIAN
    return SEMI_MARKOVIAN


class Attractor(object):
    def __init__(self, states):
        self.states = tuple(states)

    @property
    def is_fixed_point(self):
        return len(self.states) == 1

    def __repr__(self):
        return "Attractor({})".format(self.states)


def attractors(theory, u):
    """
    Attracting cycles of the synchronous update v -> (f_i(pa_i(v), u_i))_i
    over the finite observed state space. The fixed points are exactly the
    solutions of solve_all; longer cycles are limit cycles that an iterative
    simulation can be trapped in.
    """
    u = theory.exo_assignment(u)
    names = theory.observed_names
    transitions = nx.DiGraph()
    for values in itertools.product(*[theory.domain(n) for n in names]):
        assignment = dict(zip(names, values))
        successor = tuple(
            theory.equation(name).evaluate(
                assignment, u[theory.equation(name).exogenous]
            )
            for name in names
        )
        transitions.add_edge(values, successor)
    order = dict(
        (values, i) for i, values in enumerate(
            itertools.product(*[theory.domain(n) for n in names])
        )
    )
    found = []
    for component in nx.attracting_components(transitions):
        # Walk the cycle from its first state in domain order
        start = min(component, key=order.get)
        states = [start]
        current = next(iter(transitions.successors(start)))
        while current != start:
            states.append(current)
            current = next(iter(transitions.successors(current)))
        found.append(Attractor(states))
    return sorted(found, key=lambda a: (len(a.states), order[a.states[0]]))
