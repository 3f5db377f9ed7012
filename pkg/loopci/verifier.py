# -*- coding: utf-8 -*-
"""
End-to-end audits: graphical separation against exact independence on
concrete theories, agreement of the two d-separation tests on small graphs,
and a seeded generator of admissible (possibly cyclic) theories.
"""
import itertools
import logging
import random
from fractions import Fraction
from loopci import constraints
from loopci import graph
from loopci import independence
from loopci import theory as causal

EXHAUSTIVE_NODE_LIMIT = 4


class GeneratorError(Exception):
    pass


class AuditRow(object):
    def __init__(self, query, dsep, ci, trace=None):
        self.query = query
        self.dsep = dsep
        self.ci = ci
        self.trace = trace

    @property
    def violation(self):
        return self.dsep and not self.ci

    @property
    def extra(self):
        return self.ci and not self.dsep


class AuditReport(object):
    def __init__(self, theory_name, classification, augmented, rows,
                 factorization=None):
        """
        Arguments:
        theory_name -- label of the audited theory
        classification -- causal.MARKOVIAN / SEMI_MARKOVIAN / GENERAL
        augmented -- True when dummy roots were added to the causal graph
        rows -- AuditRow objects, sorted by query
        factorization -- for markovian theories, whether P_T factorizes
                         over the causal graph; None otherwise
        """
        self.theory_name = theory_name
        self.classification = classification
        self.augmented = augmented
        self.rows = list(rows)
        self.factorization = factorization

    @property
    def violations(self):
        return [row.query for row in self.rows if row.violation]

    @property
    def extras(self):
        return [row.query for row in self.rows if row.extra]

    @property
    def confirmed(self):
        return not self.violations and self.factorization is not False


class ProofTrace(object):
    def __init__(self, query, lemma5, lemma4):
        self.query = query
        self.lemma5 = lemma5
        self.lemma4 = lemma4

    @property
    def holds(self):
        return self.lemma5.holds and self.lemma4.holds


def proof_trace(theory, query):
    """
    Follows a d-separated query through the counting argument: with
    W = x | y | z, build C_W, confirm P_T(w) = alpha n(w) and check the
    counting identity on C_W for the query.
    """
    w = query.nodes
    lemma5 = constraints.verify_lemma5(theory, w)
    cw = constraints.build_cw(theory, w)
    lemma4 = constraints.lemma4_check(cw, query)
    return ProofTrace(query, lemma5, lemma4)


def theorem2_audit(theory, max_z=2, trace=False):
    """
    Checks every singleton query with |z| <= max_z: d-separation in the
    augmented graph must imply independence in the induced distribution.

    Optional Arguments:
    max_z -- largest conditioning set (Default: 2)
    trace -- run proof_trace for every d-separated query; needs mutually
             independent disturbances (Default: False)

    Raises causal.NotAdmissibleError unless every exogenous assignment has
    exactly one solution.
    """
    logger = logging.getLogger(__name__)
    distribution = causal.induced_distribution(theory)
    classification = causal.classify(theory)
    g = causal.augmented_graph(theory)
    augmented = g.nodes != frozenset(theory.observed_names)
    names = theory.observed_names
    max_z = min(max_z, max(len(names) - 2, 0))
    rows = []
    for query in graph.singleton_queries(names, max_z):
        dsep = graph.d_separated_moral(g, query)
        ci = independence.ci_test(distribution, query)
        row_trace = None
        if trace and dsep:
            row_trace = proof_trace(theory, query)
        rows.append(AuditRow(query, dsep, ci, row_trace))
        if dsep and not ci:
            logger.warning(
                "%s: %s is d-separated but not independent",
                theory.name, query
            )
    factorization = None
    if classification == causal.MARKOVIAN:
        factorization = independence.graph_factorization_holds(
            distribution, causal.causal_graph(theory)
        )
    return AuditReport(
        theory.name, classification, augmented, rows, factorization
    )


class Lemma3Report(object):
    def __init__(self, max_nodes, exhaustive, graphs, queries, disagreements):
        self.max_nodes = max_nodes
        self.exhaustive = exhaustive
        self.graphs = graphs
        self.queries = queries
        self.disagreements = list(disagreements)

    @property
    def holds(self):
        return not self.disagreements


def _node_names(count):
    return ["N{}".format(i) for i in range(1, count + 1)]


def all_digraphs(count):
    """Every labeled directed graph without self-loops on count nodes."""
    nodes = _node_names(count)
    slots = list(itertools.permutations(nodes, 2))
    for mask in range(2 ** len(slots)):
        yield graph.DirectedGraph(
            nodes, [slots[i] for i in range(len(slots)) if mask >> i & 1]
        )


def random_digraph(rng, count, density=0.5):
    nodes = _node_names(count)
    return graph.DirectedGraph(nodes, [
        pair for pair in itertools.permutations(nodes, 2)
        if rng.random() < density
    ])


def compare_tests(g):
    """
    Runs both d-separation tests on every unordered singleton query of g
    and returns (queries checked, disagreements).
    """
    checked = 0
    disagreements = []
    for query in graph.singleton_queries(g.nodes, len(g.nodes),
                                         ordered=False):
        checked += 1
        by_paths = graph.d_separated_paths(g, query)
        by_moral = graph.d_separated_moral(g, query)
        if by_paths != by_moral:
            disagreements.append((g, query, by_paths, by_moral))
    return checked, disagreements


def lemma3_audit(max_nodes=EXHAUSTIVE_NODE_LIMIT, samples=200, seed=0):
    """
    Compares d_separated_paths with d_separated_moral. Every graph on up to
    max_nodes nodes is checked when max_nodes is at most 4; beyond that,
    samples seeded random graphs per node count above 4 are added.
    """
    logger = logging.getLogger(__name__)
    if max_nodes < 0:
        raise GeneratorError("max_nodes must not be negative")
    rng = random.Random(seed)
    graphs = 0
    queries = 0
    disagreements = []
    for count in range(2, max_nodes + 1):
        if count <= EXHAUSTIVE_NODE_LIMIT:
            candidates = all_digraphs(count)
        else:
            candidates = (random_digraph(rng, count) for _ in range(samples))
        for g in candidates:
            graphs += 1
            checked, found = compare_tests(g)
            queries += checked
            for g_bad, query, by_paths, by_moral in found:
                logger.warning(
                    "tests disagree on %r for %s: paths=%s moral=%s",
                    g_bad, query, by_paths, by_moral
                )
            disagreements.extend(found)
        logger.debug("%d-node graphs done", count)
    return Lemma3Report(
        max_nodes, max_nodes <= EXHAUSTIVE_NODE_LIMIT, graphs, queries,
        disagreements
    )


def _random_probabilities(rng, domain):
    weights = [rng.randint(1, 4) for _ in domain]
    if len(domain) > 1 and rng.random() < 0.25:
        # occasionally a zero-probability value
        weights[rng.randrange(len(domain))] = 0
    total = sum(weights)
    return dict(
        (value, Fraction(weight, total))
        for value, weight in zip(domain, weights)
    )


def _random_table(rng, parent_domains, exo_domain, domain):
    # Half the disturbance values switch the parents off (constant output);
    # a loop with one switched-off member always has a unique solution.
    table = {}
    for u in exo_domain:
        constant = rng.choice(domain) if rng.random() < 0.5 else None
        for key in itertools.product(*parent_domains):
            if constant is None:
                table[key + (u,)] = rng.choice(domain)
            else:
                table[key + (u,)] = constant
    return table


def _random_parents(rng, names, require_cycle):
    while True:
        parents = dict(
            (child, [p for p in names if p != child and rng.random() < 0.5])
            for child in names
        )
        edges = [(p, c) for c, ps in parents.items() for p in ps]
        if not require_cycle or not graph.DirectedGraph(names, edges).is_acyclic():
            return parents


def random_theory(
    seed,
    n_vars,
    n_exo_values,
    n_values=3,
    require_cycle=False,
    strict=True,
    budget=20000
):
    """
    A seeded random admissible theory: random parent sets (cycles allowed),
    random total equation tables and random rational disturbance
    distributions, resampled until every exogenous assignment has a unique
    solution.

    Arguments:
    seed -- random seed; equal arguments give equal theories
    n_vars -- number of observed variables (1..5)
    n_exo_values -- domain size of every disturbance (1..3)

    Optional Arguments:
    n_values -- largest observed domain size (2..3, Default: 3)
    require_cycle -- only accept cyclic causal graphs (Default: False)
    strict -- also require every ancestral subsystem to be uniquely
              solvable (Default: True)
    budget -- number of rejected samples allowed (Default: 20000)

    The rejection count is stored in theory.metadata['rejections'].
    """
    logger = logging.getLogger(__name__)
    if n_vars < 1 or n_vars > 5:
        raise GeneratorError("n_vars must be between 1 and 5")
    if n_exo_values < 1 or n_exo_values > 3:
        raise GeneratorError("n_exo_values must be between 1 and 3")
    if n_values < 2 or n_values > 3:
        raise GeneratorError("n_values must be between 2 and 3")
    if require_cycle and n_vars < 2:
        raise GeneratorError("a cycle needs at least two variables")
    rng = random.Random(seed)
    names = ["X{}".format(i) for i in range(1, n_vars + 1)]
    exo_names = ["U{}".format(i) for i in range(1, n_vars + 1)]
    exo_domain = tuple(str(v) for v in range(n_exo_values))
    for rejections in range(budget + 1):
        domains = dict(
            (name, tuple(str(v) for v in range(rng.randint(2, n_values))))
            for name in names
        )
        parents = _random_parents(rng, names, require_cycle)
        equations = []
        for name, exo in zip(names, exo_names):
            equations.append(causal.Equation(
                name, parents[name], exo,
                _random_table(rng, [domains[p] for p in parents[name]],
                              exo_domain, domains[name])
            ))
        candidate = causal.CausalTheory(
            [(name, domains[name]) for name in names],
            [(exo, exo_domain) for exo in exo_names],
            equations,
            exo_marginals=dict(
                (exo, _random_probabilities(rng, exo_domain))
                for exo in exo_names
            ),
            name="random-{}".format(seed),
            metadata={
                'seed': seed,
                'rejections': rejections,
                'cyclic': require_cycle or not graph.DirectedGraph(
                    names,
                    [(p, c) for c, ps in parents.items() for p in ps]
                ).is_acyclic()
            }
        )
        if causal.is_admissible(candidate, strict=strict):
            logger.debug(
                "seed %s accepted after %d rejection(s)", seed, rejections
            )
            return candidate
    raise GeneratorError(
        "seed {} produced no admissible theory within {} samples".format(
            seed, budget
        )
    )


class RandomAuditSummary(object):
    def __init__(self):
        self.theories = 0
        self.cyclic = 0
        self.markovian = 0
        self.rejections = 0
        self.queries = 0
        self.failures = []

    @property
    def holds(self):
        return not self.failures


def random_audit(seeds, n_vars=4, n_values=3, n_exo_values=2, max_z=2,
                 strict=True, budget=20000):
    """
    theorem2_audit over random_theory(seed) for every seed. Odd seeds
    request a cyclic causal graph, so at least half the theories are cyclic.
    The number of observed variables cycles through 2..n_vars.
    """
    summary = RandomAuditSummary()
    for seed in seeds:
        size = 2 + seed % max(n_vars - 1, 1) if n_vars >= 2 else n_vars
        theory = random_theory(
            seed, size, n_exo_values, n_values=n_values,
            require_cycle=bool(seed % 2) and size >= 2,
            strict=strict, budget=budget
        )
        report = theorem2_audit(theory, max_z)
        summary.theories += 1
        summary.rejections += theory.metadata['rejections']
        summary.queries += len(report.rows)
        if theory.metadata['cyclic']:
            summary.cyclic += 1
        if report.classification == causal.MARKOVIAN:
            summary.markovian += 1
        if not report.confirmed:
            summary.failures.append((theory, report))
    return summary
