# -*- coding: utf-8 -*-
"""
Relational constraint problems over discrete variables with weighted solution
counting.

A solution is a full assignment allowed by every constraint; its weight is the
product of the weights of its (variable, value) pairs. n(x) is the total
weight of the solutions that agree with the partial assignment x.
"""
import itertools
import logging
from fractions import Fraction
from loopci import graph
from loopci import independence
from loopci import theory as causal


class ConstraintError(Exception):
    pass


class NotSeparatedError(ConstraintError):
    """The counting identity is only claimed for separated queries."""
    pass


class Constraint(object):
    def __init__(self, scope, relation):
        """
        Arguments:
        scope -- the variables the constraint mentions, in tuple order
        relation -- the allowed value tuples over scope
        """
        self.scope = tuple(scope)
        self.relation = frozenset(tuple(t) for t in relation)

    def allows(self, assignment):
        return tuple(assignment[v] for v in self.scope) in self.relation

    def __repr__(self):
        return "Constraint({}, {} tuples)".format(
            ",".join(self.scope), len(self.relation)
        )


class ConstraintProblem(object):
    def __init__(self, variables, constraints=(), weights=None):
        """
        Arguments:
        variables -- sequence of (name, domain) pairs; their order is the
                     enumeration order
        constraints -- Constraint objects

        Optional Arguments:
        weights -- {(name, value): positive rational}; unlisted pairs
                   weigh 1
        """
        self._variables = tuple((n, tuple(d)) for n, d in variables)
        self._names = tuple(n for n, _ in self._variables)
        self._domains = dict(self._variables)
        if len(self._domains) != len(self._names):
            raise ConstraintError("variable names must be unique")
        for name, domain in self._variables:
            if not domain:
                raise ConstraintError("domain of {} is empty".format(name))
        self._constraints = tuple(constraints)
        for constraint in self._constraints:
            self._validate(constraint)
        self._weights = {}
        for (name, value), weight in (weights or {}).items():
            self.check_assignment({name: value})
            weight = Fraction(weight)
            if weight <= 0:
                raise ConstraintError(
                    "weight of {}={} must be positive".format(name, value)
                )
            self._weights[(name, value)] = weight

    def _validate(self, constraint):
        unknown = [v for v in constraint.scope if v not in self._domains]
        if unknown:
            raise ConstraintError(
                "constraint mentions undeclared variable(s) {}".format(
                    ", ".join(unknown)
                )
            )
        for row in constraint.relation:
            if len(row) != len(constraint.scope):
                raise ConstraintError(
                    "tuple {} does not match scope {}".format(
                        " ".join(map(str, row)), " ".join(constraint.scope)
                    )
                )
            for name, value in zip(constraint.scope, row):
                if value not in self._domains[name]:
                    raise ConstraintError(
                        "value '{}' is not in the domain of {}".format(
                            value, name
                        )
                    )

    @property
    def variables(self):
        return self._variables

    @property
    def names(self):
        return self._names

    @property
    def constraints(self):
        return self._constraints

    def domain(self, name):
        self.check_names([name])
        return self._domains[name]

    def weight(self, name, value):
        return self._weights.get((name, value), Fraction(1))

    @property
    def weights(self):
        return dict(self._weights)

    def check_names(self, names):
        unknown = sorted(set(names) - set(self._names))
        if unknown:
            raise ConstraintError(
                "unknown variable(s): {}".format(", ".join(unknown))
            )

    def check_assignment(self, partial):
        self.check_names(partial)
        for name, value in partial.items():
            if value not in self._domains[name]:
                raise ConstraintError(
                    "value '{}' is not in the domain of {}".format(value, name)
                )

    def solutions(self, partial=None):
        """
        Yields (assignment tuple, weight) for every solution extending
        partial, in lexicographic order over the declared domains.
        """
        partial = dict(partial or {})
        self.check_assignment(partial)
        domains = [
            (partial[name],) if name in partial else self._domains[name]
            for name in self._names
        ]
        for values in itertools.product(*domains):
            assignment = dict(zip(self._names, values))
            if all(c.allows(assignment) for c in self._constraints):
                weight = Fraction(1)
                for name, value in zip(self._names, values):
                    weight *= self.weight(name, value)
                yield values, weight

    def projected_counts(self, names):
        """
        {projected values: n(values)} over names, for every projection with
        at least one solution.
        """
        self.check_names(names)
        positions = [self._names.index(n) for n in names]
        counts = {}
        for values, weight in self.solutions():
            key = tuple(values[i] for i in positions)
            counts[key] = counts.get(key, Fraction(0)) + weight
        return counts

    def __repr__(self):
        return "ConstraintProblem({} variables, {} constraints)".format(
            len(self._names), len(self._constraints)
        )


def primal_graph(c):
    edges = set()
    for constraint in c.constraints:
        for a, b in itertools.combinations(constraint.scope, 2):
            if a != b:
                edges.add((a, b))
    return graph.UndirectedGraph(c.names, edges)


def count_solutions(c, partial=None):
    """
    n(partial): the summed weight of every solution extending partial. With
    unit weights this is the plain number of solutions.
    """
    return sum((weight for _, weight in c.solutions(partial)), Fraction(0))


class CountingReport(object):
    def __init__(self, query, instantiations, violations):
        self.query = query
        self.instantiations = instantiations
        self.violations = list(violations)

    @property
    def holds(self):
        return not self.violations


def lemma4_check(c, q):
    """
    Checks n(z) n(x,y,z) == n(x,z) n(y,z) at every instantiation of a query
    that is separated in the primal graph of c.

    Raises NotSeparatedError when z does not separate x from y there.
    """
    logger = logging.getLogger(__name__)
    if not isinstance(q, graph.SeparationQuery):
        q = graph.SeparationQuery(*q)
    c.check_names(q.nodes)
    if not graph.u_separated(primal_graph(c), q):
        raise NotSeparatedError(
            "{} does not separate {} from {} in the primal graph".format(
                ",".join(sorted(q.z)) or "the empty set",
                ",".join(sorted(q.x)),
                ",".join(sorted(q.y))
            )
        )
    xs, ys, zs = (
        [n for n in c.names if n in part] for part in (q.x, q.y, q.z)
    )
    n_xyz = c.projected_counts(xs + ys + zs)
    n_xz = c.projected_counts(xs + zs)
    n_yz = c.projected_counts(ys + zs)
    n_z = c.projected_counts(zs)
    zero = Fraction(0)
    checked = 0
    violations = []
    for x in itertools.product(*[c.domain(n) for n in xs]):
        for y in itertools.product(*[c.domain(n) for n in ys]):
            for z in itertools.product(*[c.domain(n) for n in zs]):
                checked += 1
                left = n_z.get(z, zero) * n_xyz.get(x + y + z, zero)
                right = n_xz.get(x + z, zero) * n_yz.get(y + z, zero)
                if left != right:
                    logger.warning(
                        "counting identity fails at x=%s y=%s z=%s", x, y, z
                    )
                    violations.append((x, y, z, left, right))
    return CountingReport(q, checked, violations)


def build_cw(theory, w):
    """
    The weighted constraint problem C_W: one functional constraint
    x_i = f_i(pa_i, u_i) for every ancestor X_i of w, each disturbance
    weighted by its probability. Observed variables weigh 1.
    """
    try:
        w = theory.check_observed(w)
    except causal.TheoryError as e:
        raise ConstraintError(str(e))
    if not theory.exo_independent():
        raise ConstraintError(
            "C_W weights each disturbance by its own marginal, which needs"
            " mutually independent disturbances"
        )
    keep = graph.ancestors(causal.causal_graph(theory), w)
    observed = [(n, d) for n, d in theory.observed if n in keep]
    exogenous = []
    weights = {}
    constraints = []
    for equation in theory.equations:
        if equation.child not in keep:
            continue
        probabilities = theory.exo_marginal(equation.exogenous)
        # Zero-probability values contribute nothing to any count
        support = tuple(
            value for value in theory.domain(equation.exogenous)
            if probabilities[value]
        )
        exogenous.append((equation.exogenous, support))
        for value in support:
            weights[(equation.exogenous, value)] = probabilities[value]
        relation = [
            key + (result,) for key, result in equation.table.items()
            if key[-1] in support
        ]
        constraints.append(Constraint(
            equation.parents + (equation.exogenous, equation.child),
            relation
        ))
    order = dict((u, i) for i, u in enumerate(theory.exogenous_names))
    exogenous.sort(key=lambda item: order[item[0]])
    return ConstraintProblem(observed + exogenous, constraints, weights)


class Lemma5Report(object):
    def __init__(self, w, alpha, rows):
        """
        Arguments:
        w -- the observed names compared, in declared order
        alpha -- 1 / n(empty assignment), or None when C_W has no solution
        rows -- (w values, P_T(w), alpha * n(w)) for every instantiation
        """
        self.w = tuple(w)
        self.alpha = alpha
        self.rows = list(rows)
        self.mismatches = [row for row in self.rows if row[1] != row[2]]

    @property
    def holds(self):
        return self.alpha is not None and not self.mismatches


def verify_lemma5(theory, w):
    """
    Compares P_T(w) with alpha * n_{C_W}(w) at every instantiation of w.
    Raises theory.NotAdmissibleError for theories without unique solutions.
    """
    logger = logging.getLogger(__name__)
    distribution = causal.induced_distribution(theory)
    cw = build_cw(theory, w)
    names = [n for n in theory.observed_names if n in frozenset(w)]
    total = count_solutions(cw)
    alpha = 1 / total if total else None
    counts = cw.projected_counts(names)
    projected = independence.marginal(distribution, names).project(names)
    rows = []
    for values in itertools.product(*[theory.domain(n) for n in names]):
        probability = projected.get(values, Fraction(0))
        scaled = (
            alpha * counts.get(values, Fraction(0))
            if alpha is not None else None
        )
        rows.append((values, probability, scaled))
    report = Lemma5Report(names, alpha, rows)
    if not report.holds:
        logger.warning(
            "%s: P_T(w) is not proportional to n(w) for w=%s",
            theory.name, ",".join(names)
        )
    return report
