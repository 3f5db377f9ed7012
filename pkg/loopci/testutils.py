# -*- coding: utf-8 -*-
from fractions import Fraction
import itertools
from . import constraints
from . import graph
from . import paths
from . import theory as causal

HALF = Fraction(1, 2)


def fixture(name):
    """Path of a file shipped in loopci/data."""
    return paths.data(name)


def feedback_graph():
    return graph.DirectedGraph(
        ['X1', 'X2', 'X3', 'X4'],
        [('X1', 'X3'), ('X2', 'X4'), ('X3', 'X4'), ('X4', 'X3')]
    )


def _g0(x):
    return '3' if x == '4' else '2'


def _g1(x):
    return '3' if x == '1' else '4'


def _switched():
    # g1 when the binary parent or the disturbance is 1, g0 otherwise
    table = {}
    for a, b, u in itertools.product('01', '1234', '01'):
        table[(a, b, u)] = _g1(b) if '1' in (a, u) else _g0(b)
    return table


def loop_theory(exo_marginals=None, exo_joint=None, name='feedback'):
    """
    x1 = u1, x2 = u2, and x3, x4 in {1..4} locked in a feedback loop that
    has a unique solution for every u.
    """
    identity = {('0',): '0', ('1',): '1'}
    return causal.CausalTheory(
        [('X1', '01'), ('X2', '01'), ('X3', '1234'), ('X4', '1234')],
        [('U1', '01'), ('U2', '01'), ('U3', '01'), ('U4', '01')],
        [
            causal.Equation('X1', [], 'U1', identity),
            causal.Equation('X2', [], 'U2', identity),
            causal.Equation(
                'X3', ['X1', 'X4'], 'U3', _switched()
            ),
            causal.Equation(
                'X4', ['X2', 'X3'], 'U4', _switched()
            )
        ],
        exo_marginals=exo_marginals,
        exo_joint=exo_joint,
        name=name
    )


def dependent_loop_theory():
    """loop_theory with U3 == U4 always; U1 and U2 stay uniform."""
    joint = {}
    for u1, u2, u in itertools.product('01', '01', '01'):
        joint[(u1, u2, u, u)] = Fraction(1, 8)
    return loop_theory(exo_joint=joint, name='feedback-dependent')


def _binary_loop(negate, name):
    copy = dict(
        ((x, u), x) for x in '01' for u in '01'
    )
    flipped = dict(
        ((x, u), '1' if x == '0' else '0') for x in '01' for u in '01'
    )
    return causal.CausalTheory(
        [('X3', '01'), ('X4', '01')],
        [('U3', '01'), ('U4', '01')],
        [
            causal.Equation('X3', ['X4'], 'U3', flipped if negate else copy),
            causal.Equation('X4', ['X3'], 'U4', copy)
        ],
        name=name
    )


def identity_loop():
    """x3 = x4, x4 = x3: every u has two solutions."""
    return _binary_loop(False, 'identity-loop')


def negation_loop():
    """x3 = not x4, x4 = x3: no u has a solution."""
    return _binary_loop(True, 'negation-loop')


def independent_pair():
    """Two unconnected binary variables driven by their own disturbances."""
    identity = {('0',): '0', ('1',): '1'}
    return causal.CausalTheory(
        [('A', '01'), ('B', '01')],
        [('UA', '01'), ('UB', '01')],
        [
            causal.Equation('A', [], 'UA', identity),
            causal.Equation('B', [], 'UB', identity)
        ],
        exo_marginals={'UA': {'0': Fraction(1, 3), '1': Fraction(2, 3)}},
        name='pair'
    )


def chain_problem(weights=None):
    """A = B = C over binary domains."""
    equal = [('0', '0'), ('1', '1')]
    return constraints.ConstraintProblem(
        [('A', '01'), ('B', '01'), ('C', '01')],
        [
            constraints.Constraint(['A', 'B'], equal),
            constraints.Constraint(['B', 'C'], equal)
        ],
        weights
    )
