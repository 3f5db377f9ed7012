# -*- coding: utf-8 -*-
import itertools
import unittest
from fractions import Fraction
from loopci import graph
from loopci import testutils
from loopci import theory as causal
from loopci import verifier

COPY = dict(((x, u), x) for x in '01' for u in '0')
SKEWED = {
    'U1': {'0': Fraction(1, 5), '1': Fraction(4, 5)},
    'U3': {'0': Fraction(1), '1': Fraction(0)}
}


def _hidden_loop():
    """
    x1 = x2, x2 = x1 has two solutions on its own; the descendant loop over
    x3, x4 is only consistent when x1 = 1, so the whole system is unique.
    """
    gate = {}
    for x1, x4 in itertools.product('01', '01'):
        gate[(x1, x4, '0')] = ('1' if x4 == '0' else '0') if x1 == '0' else '0'
    return causal.CausalTheory(
        [('X1', '01'), ('X2', '01'), ('X3', '01'), ('X4', '01')],
        [('U1', '0'), ('U2', '0'), ('U3', '0'), ('U4', '0')],
        [
            causal.Equation('X1', ['X2'], 'U1', COPY),
            causal.Equation('X2', ['X1'], 'U2', COPY),
            causal.Equation('X3', ['X1', 'X4'], 'U3', gate),
            causal.Equation('X4', ['X3'], 'U4', COPY)
        ],
        name='hidden-loop'
    )


class TestCausalTheory(unittest.TestCase):
    def testMissingEquation(self):
        with self.assertRaises(causal.TheoryError):
            causal.CausalTheory(
                [('A', '01'), ('B', '01')], [('UA', '01')],
                [causal.Equation('A', [], 'UA', {('0',): '0', ('1',): '1'})]
            )

    def testSharedDisturbance(self):
        identity = {('0',): '0', ('1',): '1'}
        with self.assertRaises(causal.TheoryError):
            causal.CausalTheory(
                [('A', '01'), ('B', '01')], [('U', '01')],
                [
                    causal.Equation('A', [], 'U', identity),
                    causal.Equation('B', [], 'U', identity)
                ]
            )

    def testTableNotTotal(self):
        with self.assertRaises(causal.TheoryError):
            causal.CausalTheory(
                [('A', '01')], [('UA', '01')],
                [causal.Equation('A', [], 'UA', {('0',): '0'})]
            )

    def testValueOutsideDomain(self):
        with self.assertRaises(causal.TheoryError):
            causal.CausalTheory(
                [('A', '01')], [('UA', '01')],
                [causal.Equation('A', [], 'UA', {('0',): '0', ('1',): '7'})]
            )

    def testBadMarginal(self):
        with self.assertRaises(causal.TheoryError):
            causal.CausalTheory(
                [('A', '01')], [('UA', '01')],
                [causal.Equation('A', [], 'UA', {('0',): '0', ('1',): '1'})],
                exo_marginals={'UA': {'0': Fraction(1, 3)}}
            )

    def testUnlistedDisturbanceIsUniform(self):
        theory = testutils.loop_theory()
        self.assertEqual(
            theory.exo_marginal('U3'),
            {'0': Fraction(1, 2), '1': Fraction(1, 2)}
        )

    def testExoAssignment(self):
        theory = testutils.loop_theory()
        self.assertEqual(
            theory.exo_assignment(('1', '0', '0', '0')),
            {'U1': '1', 'U2': '0', 'U3': '0', 'U4': '0'}
        )
        with self.assertRaises(causal.TheoryError):
            theory.exo_assignment(('1', '0'))
        with self.assertRaises(causal.TheoryError):
            theory.exo_assignment({'U1': '1'})
        with self.assertRaises(causal.TheoryError):
            theory.exo_assignment(('2', '0', '0', '0'))


class TestSolve(unittest.TestCase):
    def testLoopSolutions(self):
        theory = testutils.loop_theory()
        self.assertEqual(
            causal.solve_all(theory, ('0', '0', '0', '0')),
            (('0', '0', '2', '2'),)
        )
        self.assertEqual(
            causal.solve_all(theory, ('1', '0', '0', '0')),
            (('1', '0', '4', '3'),)
        )

    def testLoopSolutionTable(self):
        theory = testutils.loop_theory()
        expected = {
            (True, True): ('4', '4'),
            (True, False): ('4', '3'),
            (False, True): ('3', '4'),
            (False, False): ('2', '2')
        }
        for u in itertools.product('01', repeat=4):
            u1, u2, u3, u4 = u
            found = causal.solve_all(theory, u)
            self.assertEqual(len(found), 1)
            self.assertEqual(
                found[0][2:],
                expected[('1' in (u1, u3), '1' in (u2, u4))]
            )

    def testIdentityLoop(self):
        self.assertEqual(
            causal.solve_all(testutils.identity_loop(), ('0', '1')),
            (('0', '0'), ('1', '1'))
        )

    def testNegationLoop(self):
        self.assertEqual(
            causal.solve_all(testutils.negation_loop(), ('0', '0')), ()
        )

    def testSolutionsIgnoreDisturbanceDistribution(self):
        uniform = testutils.loop_theory()
        others = [
            testutils.loop_theory(exo_marginals=SKEWED),
            testutils.dependent_loop_theory()
        ]
        for u in itertools.product('01', repeat=4):
            for theory in others:
                self.assertEqual(
                    causal.solve_all(theory, u), causal.solve_all(uniform, u)
                )

    def testSolutionMassIsOne(self):
        theories = [
            testutils.loop_theory(),
            testutils.loop_theory(exo_marginals=SKEWED),
            testutils.dependent_loop_theory(),
            testutils.independent_pair()
        ]
        theories.extend(
            verifier.random_theory(seed, 2 + seed % 3, 2,
                                   require_cycle=bool(seed % 2))
            for seed in range(10)
        )
        for theory in theories:
            exo_names = theory.exogenous_names
            mass = sum(
                theory.exo_dist.probability(u) *
                len(causal.solve_all(theory, u))
                for u in itertools.product(
                    *[theory.domain(n) for n in exo_names]
                )
            )
            self.assertEqual(mass, 1, theory.name)


class TestUniqueness(unittest.TestCase):
    def testLoopIsAdmissible(self):
        report = causal.check_uniqueness(testutils.loop_theory())
        self.assertTrue(report.admissible)
        self.assertEqual(len(report.unique), 16)
        self.assertEqual(report.summary(), "16/16 exogenous assignments unique")

    def testIdentityLoopUnstable(self):
        report = causal.check_uniqueness(testutils.identity_loop())
        self.assertFalse(report.admissible)
        self.assertEqual(len(report.unstable), 4)
        self.assertEqual(report.classification(('0', '0')), causal.UNSTABLE)

    def testNegationLoopInconsistent(self):
        report = causal.check_uniqueness(testutils.negation_loop())
        self.assertEqual(len(report.inconsistent), 4)
        self.assertEqual(
            report.classification(('1', '0')), causal.INCONSISTENT
        )

    def testStopEarly(self):
        report = causal.check_uniqueness(
            testutils.identity_loop(), stop_early=True
        )
        self.assertEqual(len(report.solutions), 1)

    def testSubsystem(self):
        report = causal.check_uniqueness(
            testutils.loop_theory(), subsystem=['X1', 'X2']
        )
        self.assertEqual(report.exogenous, ('U1', 'U2'))
        self.assertEqual(len(report.solutions), 4)

    def testAncestralSets(self):
        self.assertEqual(
            causal.ancestral_sets(testutils.loop_theory()),
            [
                frozenset(['X1']),
                frozenset(['X2']),
                frozenset(['X1', 'X2']),
                frozenset(['X1', 'X2', 'X3', 'X4'])
            ]
        )

    def testHiddenLoop(self):
        theory = _hidden_loop()
        self.assertTrue(causal.is_admissible(theory))
        self.assertFalse(causal.is_admissible(theory, strict=True))
        failing = [
            report.subsystem
            for report in causal.check_ancestral_uniqueness(theory)
            if not report.admissible
        ]
        self.assertEqual(failing, [('X1', 'X2')])

    def testLoopStrictlyAdmissible(self):
        self.assertTrue(
            causal.is_admissible(testutils.loop_theory(), strict=True)
        )


class TestInducedDistribution(unittest.TestCase):
    def testLoop(self):
        p = causal.induced_distribution(testutils.loop_theory())
        self.assertEqual(p.probability(('0', '0', '2', '2')), Fraction(1, 16))
        # (x3, x4) is fixed by (x1 or u3, x2 or u4), so 3 x 3 states occur
        self.assertEqual(len(p.support()), 9)

    def testRefusesPathologies(self):
        for theory in (testutils.identity_loop(), testutils.negation_loop()):
            with self.assertRaises(causal.NotAdmissibleError) as caught:
                causal.induced_distribution(theory)
            self.assertIn(causal.UNIQUENESS_ASSUMPTION, str(caught.exception))
            self.assertFalse(caught.exception.report.admissible)

    def testZeroProbabilityDisturbance(self):
        theory = testutils.loop_theory(
            exo_marginals={'U1': {'0': 1, '1': 0}}
        )
        p = causal.induced_distribution(theory)
        self.assertEqual(
            p.support()[0], (('0', '0', '2', '2'), Fraction(1, 8))
        )
        self.assertTrue(all(a[0] == '0' for a, _ in p.support()))


class TestGraphs(unittest.TestCase):
    def testCausalGraph(self):
        self.assertEqual(
            causal.causal_graph(testutils.loop_theory()),
            testutils.feedback_graph()
        )

    def testAugmentedGraphIndependent(self):
        theory = testutils.loop_theory()
        self.assertEqual(
            causal.augmented_graph(theory), causal.causal_graph(theory)
        )

    def testAugmentedGraphDependent(self):
        g = causal.augmented_graph(testutils.dependent_loop_theory())
        self.assertIn('D(U3,U4)', g.nodes)
        self.assertEqual(g.children('D(U3,U4)'), frozenset(['X3', 'X4']))
        self.assertEqual(len(g.nodes), 5)

    def testClassify(self):
        self.assertEqual(
            causal.classify(testutils.independent_pair()), causal.MARKOVIAN
        )
        self.assertEqual(
            causal.classify(testutils.loop_theory()), causal.SEMI_MARKOVIAN
        )
        self.assertEqual(
            causal.classify(testutils.dependent_loop_theory()), causal.GENERAL
        )

    def testJointThatFactorizesIsSemiMarkovian(self):
        joint = {}
        for u in itertools.product('01', repeat=4):
            joint[u] = Fraction(1, 16)
        theory = testutils.loop_theory(exo_joint=joint)
        self.assertTrue(theory.exo_independent())
        self.assertEqual(causal.classify(theory), causal.SEMI_MARKOVIAN)
        # uniform joint: every pair is independent, no dummy roots
        self.assertEqual(
            causal.augmented_graph(theory).nodes,
            frozenset(theory.observed_names)
        )

    def testDummyNameAvoidsCollision(self):
        self.assertEqual(
            causal.dummy_name(testutils.loop_theory(), 'U3', 'U4'),
            'D(U3,U4)'
        )


class TestAttractors(unittest.TestCase):
    def testIdentityLoop(self):
        found = causal.attractors(testutils.identity_loop(), ('0', '0'))
        self.assertEqual(
            [a.states for a in found],
            [(('0', '0'),), (('1', '1'),), (('0', '1'), ('1', '0'))]
        )
        self.assertEqual(
            [a.is_fixed_point for a in found], [True, True, False]
        )

    def testNegationLoopOnlyCycles(self):
        found = causal.attractors(testutils.negation_loop(), ('0', '0'))
        self.assertEqual(len(found), 1)
        self.assertEqual(
            found[0].states,
            (('0', '0'), ('1', '0'), ('1', '1'), ('0', '1'))
        )

    def testFixedPointsAreSolutions(self):
        theory = testutils.loop_theory()
        u = ('1', '0', '0', '0')
        fixed = [
            a.states[0] for a in causal.attractors(theory, u)
            if a.is_fixed_point
        ]
        self.assertEqual(tuple(fixed), causal.solve_all(theory, u))

    def testIdentityLoopGraphIsCyclic(self):
        g = causal.causal_graph(testutils.identity_loop())
        self.assertFalse(g.is_acyclic())
        self.assertTrue(isinstance(g, graph.DirectedGraph))
