# -*- coding: utf-8 -*-
"""
Exact joint distributions over discrete variables and the conditional
independence test

    P(z) P(x, y, z) == P(x, z) P(y, z)   for every instantiation (x, y, z)

All probabilities are fractions.Fraction; nothing is ever compared with a
tolerance.
"""
import itertools
import logging
from fractions import Fraction
import networkx as nx
from loopci import graph


class DistributionError(Exception):
    pass


class JointDistribution(object):
    def __init__(self, variables, table):
        """
        Arguments:
        variables -- sequence of (name, domain) pairs; the declared order
                     is the order of every assignment tuple
        table -- mapping from full assignment tuples to probabilities.
                 Missing assignments have probability zero.
        """
        self._variables = tuple(
            (name, tuple(domain)) for name, domain in variables
        )
        self._names = tuple(name for name, _ in self._variables)
        if len(set(self._names)) != len(self._names):
            raise DistributionError("duplicate variable names")
        self._domains = dict(self._variables)
        self._positions = {name: i for i, name in enumerate(self._names)}
        self._table = {}
        for assignment, probability in table.items():
            assignment = tuple(assignment)
            probability = Fraction(probability)
            if len(assignment) != len(self._names):
                raise DistributionError(
                    "assignment {} does not cover {}".format(
                        assignment, ", ".join(self._names)
                    )
                )
            for name, value in zip(self._names, assignment):
                if value not in self._domains[name]:
                    raise DistributionError(
                        "value '{}' is not in the domain of {}".format(
                            value, name
                        )
                    )
            if probability < 0:
                raise DistributionError(
                    "negative probability for {}".format(assignment)
                )
            if probability:
                self._table[assignment] = (
                    self._table.get(assignment, Fraction(0)) + probability
                )
        total = sum(self._table.values(), Fraction(0))
        if total != 1:
            raise DistributionError(
                "probabilities sum to {}, not 1".format(total)
            )

    @property
    def variables(self):
        return self._variables

    @property
    def names(self):
        return self._names

    def domain(self, name):
        self.check_names([name])
        return self._domains[name]

    def check_names(self, names):
        unknown = sorted(set(names) - set(self._names))
        if unknown:
            raise DistributionError(
                "unknown variable(s): {}".format(", ".join(unknown))
            )

    def probability(self, assignment):
        """
        Arguments:
        assignment -- a full assignment tuple in declared order, or a
                      mapping from every variable name to a value
        """
        if isinstance(assignment, dict):
            self.check_names(assignment)
            assignment = tuple(assignment[name] for name in self._names)
        return self._table.get(tuple(assignment), Fraction(0))

    def support(self):
        """Positive-mass (assignment, probability) pairs, in domain order."""
        return sorted(self._table.items(), key=lambda item: self._order(item[0]))

    def _order(self, assignment):
        return tuple(
            self._domains[name].index(value)
            for name, value in zip(self._names, assignment)
        )

    def project(self, names):
        """
        Sum of probability per projected assignment over names (in the given
        order); only positive entries are present.
        """
        positions = [self._positions[name] for name in names]
        sums = {}
        for assignment, probability in self._table.items():
            key = tuple(assignment[i] for i in positions)
            sums[key] = sums.get(key, Fraction(0)) + probability
        return sums

    def __eq__(self, other):
        return (
            isinstance(other, JointDistribution) and
            self._variables == other._variables and
            self._table == other._table
        )

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return "JointDistribution({}, {} positive entries)".format(
            ", ".join(self._names), len(self._table)
        )


def product_distribution(marginals):
    """
    Independent joint from (name, domain, {value: probability}) triples.
    """
    variables = [(name, domain) for name, domain, _ in marginals]
    table = {}
    for combination in itertools.product(*[
        [(value, probabilities.get(value, Fraction(0))) for value in domain]
        for _, domain, probabilities in marginals
    ]):
        probability = Fraction(1)
        for _, p in combination:
            probability *= p
        if probability:
            table[tuple(value for value, _ in combination)] = probability
    return JointDistribution(variables, table)


def marginal(p, s):
    """
    Exact marginal of p over s. Variables keep p's declared order.
    """
    s = frozenset(s)
    p.check_names(s)
    names = [name for name in p.names if name in s]
    return JointDistribution(
        [(name, p.domain(name)) for name in names],
        p.project(names)
    )


def _check_query(p, q):
    try:
        if not isinstance(q, graph.SeparationQuery):
            q = graph.SeparationQuery(*q)
    except graph.GraphError as e:
        raise DistributionError(str(e))
    p.check_names(q.nodes)
    return q


def ci_test(p, q):
    """
    True iff x is independent of y given z in p, checked as the product
    equality at every instantiation. Instantiations with P(z) = 0 have both
    sides equal to zero and never count against independence.
    """
    q = _check_query(p, q)
    xs, ys, zs = (
        [name for name in p.names if name in part]
        for part in (q.x, q.y, q.z)
    )
    p_xyz = p.project(xs + ys + zs)
    p_xz = p.project(xs + zs)
    p_yz = p.project(ys + zs)
    p_z = p.project(zs)

    xs_by_z = {}
    for key in p_xz:
        xs_by_z.setdefault(key[len(xs):], []).append(key[:len(xs)])
    ys_by_z = {}
    for key in p_yz:
        ys_by_z.setdefault(key[len(ys):], []).append(key[:len(ys)])

    # Any instantiation with a non-zero side has P(x,z) > 0 and P(y,z) > 0
    for z_value, z_probability in p_z.items():
        for x_value in xs_by_z.get(z_value, []):
            for y_value in ys_by_z.get(z_value, []):
                left = z_probability * p_xyz.get(
                    x_value + y_value + z_value, Fraction(0)
                )
                right = p_xz[x_value + z_value] * p_yz[y_value + z_value]
                if left != right:
                    return False
    return True


def all_ci(p, max_z):
    """
    Every query with singleton x, y (ordered pairs) and |z| <= max_z that
    ci_test accepts, sorted by query.
    """
    logger = logging.getLogger(__name__)
    limit = max(len(p.names) - 2, 0)
    if max_z > limit:
        logger.debug("max_z %d clamped to %d", max_z, limit)
        max_z = limit
    return [
        q for q in graph.singleton_queries(p.names, max_z)
        if ci_test(p, q)
    ]


def factorizes(p, blocks):
    """
    True iff p equals the product of its marginals over the given blocks,
    which must partition p's variables.
    """
    blocks = [frozenset(block) for block in blocks]
    covered = [name for block in blocks for name in block]
    if sorted(covered) != sorted(p.names):
        raise DistributionError("blocks must partition the variables")
    projections = []
    for block in blocks:
        names = [name for name in p.names if name in block]
        projections.append(([p.names.index(n) for n in names],
                            p.project(names)))
    # The product has the same total mass as p, so it is enough to look at
    # every product-positive cell: any cell of p outside it forces a mismatch.
    for combination in itertools.product(*[
        list(projected.items()) for _, projected in projections
    ]):
        assignment = [None] * len(p.names)
        probability = Fraction(1)
        for (positions, _), (values, block_probability) in zip(
            projections, combination
        ):
            for position, value in zip(positions, values):
                assignment[position] = value
            probability *= block_probability
        if p.probability(tuple(assignment)) != probability:
            return False
    return True


def dependence_blocks(p):
    """
    Groups of mutually dependent variables: connected components of the
    pairwise dependence relation. If p does not factorize across those
    components, every variable goes into a single block.
    """
    logger = logging.getLogger(__name__)
    relation = nx.Graph()
    relation.add_nodes_from(p.names)
    for a, b in itertools.combinations(p.names, 2):
        if not ci_test(p, graph.SeparationQuery([a], [b])):
            logger.debug("%s and %s are dependent", a, b)
            relation.add_edge(a, b)
    blocks = [frozenset(c) for c in nx.connected_components(relation)]
    if not factorizes(p, blocks):
        logger.debug("pairwise blocks do not factorize, merging all")
        blocks = [frozenset(p.names)]
    return sorted(blocks, key=lambda block: min(
        p.names.index(name) for name in block
    ))


def graph_factorization_holds(p, g):
    """
    True iff P(v) = prod_i P(x_i | pa_i) at every full assignment whose
    parent configurations all have positive probability, where pa_i are the
    parents of x_i in the directed graph g.
    """
    g.check_nodes(p.names)
    families = []
    for name in p.names:
        parents = [n for n in p.names if n in g.parents(name)]
        families.append((
            [p.names.index(n) for n in parents],
            p.names.index(name),
            p.project(parents),
            p.project(parents + [name])
        ))
    for assignment in itertools.product(*[
        p.domain(name) for name in p.names
    ]):
        product = Fraction(1)
        defined = True
        for parent_positions, position, p_parents, p_family in families:
            parent_values = tuple(assignment[i] for i in parent_positions)
            denominator = p_parents.get(parent_values, Fraction(0))
            if not denominator:
                defined = False
                break
            product *= p_family.get(
                parent_values + (assignment[position],), Fraction(0)
            ) / denominator
        if defined and product != p.probability(assignment):
            return False
    return True
