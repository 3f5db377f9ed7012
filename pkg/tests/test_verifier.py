# -*- coding: utf-8 -*-
import random
import unittest
from loopci import constraints
from loopci import formats
from loopci import graph
from loopci import testutils
from loopci import theory as causal
from loopci import verifier

SEEDS = 100


def _query(x, y, z=()):
    return graph.SeparationQuery([x], [y], z)


class TestTheorem2Audit(unittest.TestCase):
    def testLoop(self):
        report = verifier.theorem2_audit(testutils.loop_theory(), 2)
        self.assertEqual(report.violations, [])
        self.assertTrue(report.confirmed)
        self.assertIn(_query('X1', 'X2', ['X3']), report.extras)
        self.assertIn(_query('X1', 'X2', ['X4']), report.extras)
        self.assertEqual(report.classification, causal.SEMI_MARKOVIAN)
        self.assertFalse(report.augmented)
        self.assertIsNone(report.factorization)
        # 12 ordered pairs, each with 1 + 2 + 1 conditioning sets
        self.assertEqual(len(report.rows), 48)

    def testRowsAreSorted(self):
        report = verifier.theorem2_audit(testutils.loop_theory(), 2)
        keys = [row.query.sort_key() for row in report.rows]
        self.assertEqual(keys, sorted(keys))

    def testIndependentPair(self):
        report = verifier.theorem2_audit(testutils.independent_pair(), 2)
        self.assertEqual(report.violations, [])
        self.assertEqual(report.classification, causal.MARKOVIAN)
        self.assertTrue(report.factorization)
        empty = [row for row in report.rows if row.query == _query('A', 'B')]
        self.assertEqual(len(empty), 1)
        self.assertTrue(empty[0].dsep)
        self.assertTrue(empty[0].ci)

    def testDependentDisturbances(self):
        report = verifier.theorem2_audit(testutils.dependent_loop_theory(), 2)
        self.assertTrue(report.augmented)
        self.assertEqual(report.classification, causal.GENERAL)
        self.assertEqual(report.violations, [])
        by_query = dict((row.query, row) for row in report.rows)
        self.assertTrue(by_query[_query('X1', 'X2')].dsep)
        self.assertFalse(by_query[_query('X1', 'X2', ['X3', 'X4'])].dsep)

    def testRefusesPathologies(self):
        for theory in (testutils.identity_loop(), testutils.negation_loop()):
            with self.assertRaises(causal.NotAdmissibleError) as caught:
                verifier.theorem2_audit(theory, 2)
            self.assertIn(causal.UNIQUENESS_ASSUMPTION, str(caught.exception))

    def testDeterministic(self):
        first = verifier.theorem2_audit(testutils.loop_theory(), 2)
        second = verifier.theorem2_audit(testutils.loop_theory(), 2)
        self.assertEqual(
            formats.render_audit(first), formats.render_audit(second)
        )

    def testTrace(self):
        report = verifier.theorem2_audit(
            testutils.loop_theory(), 2, trace=True
        )
        traced = [row for row in report.rows if row.trace is not None]
        self.assertEqual(len(traced), len([r for r in report.rows if r.dsep]))
        self.assertTrue(all(row.trace.holds for row in traced))

    def testTraceNeedsIndependentDisturbances(self):
        with self.assertRaises(constraints.ConstraintError):
            verifier.theorem2_audit(
                testutils.dependent_loop_theory(), 2, trace=True
            )


class TestProofTrace(unittest.TestCase):
    def testLoop(self):
        trace = verifier.proof_trace(
            testutils.loop_theory(), _query('X1', 'X2', ['X3', 'X4'])
        )
        self.assertTrue(trace.holds)
        self.assertEqual(trace.lemma5.w, ('X1', 'X2', 'X3', 'X4'))

    def testDConnectedQueryRefused(self):
        with self.assertRaises(constraints.NotSeparatedError):
            verifier.proof_trace(
                testutils.loop_theory(), _query('X1', 'X2', ['X3'])
            )


class TestLemma3Audit(unittest.TestCase):
    def testThreeNodes(self):
        report = verifier.lemma3_audit(max_nodes=3)
        self.assertTrue(report.exhaustive)
        self.assertEqual(report.graphs, 4 + 64)
        self.assertTrue(report.holds)

    def testExhaustiveThenSampled(self):
        report = verifier.lemma3_audit(max_nodes=5, samples=3, seed=7)
        self.assertFalse(report.exhaustive)
        self.assertEqual(report.graphs, 4 + 64 + 4096 + 3)
        self.assertTrue(report.holds)

    def testCompareTestsOnTwoCycle(self):
        g = graph.DirectedGraph(['a', 'b'], [('a', 'b'), ('b', 'a')])
        checked, disagreements = verifier.compare_tests(g)
        self.assertEqual(checked, 1)
        self.assertEqual(disagreements, [])
        self.assertFalse(graph.d_separated_paths(g, _query('a', 'b')))

    def testNegativeSize(self):
        with self.assertRaises(verifier.GeneratorError):
            verifier.lemma3_audit(max_nodes=-1)

    def testRandomDigraphIsSeeded(self):
        self.assertEqual(
            verifier.random_digraph(random.Random(3), 5),
            verifier.random_digraph(random.Random(3), 5)
        )


class TestRandomTheory(unittest.TestCase):
    def testSeedOne(self):
        theory = verifier.random_theory(1, 2, 2)
        self.assertTrue(causal.is_admissible(theory, strict=True))
        self.assertEqual(theory.metadata['seed'], 1)
        self.assertEqual(
            verifier.theorem2_audit(theory, 2).violations, []
        )

    def testDeterministic(self):
        self.assertEqual(
            formats.dump_theory(verifier.random_theory(5, 3, 2)),
            formats.dump_theory(verifier.random_theory(5, 3, 2))
        )

    def testRequireCycle(self):
        theory = verifier.random_theory(3, 3, 2, require_cycle=True)
        self.assertTrue(theory.metadata['cyclic'])
        self.assertFalse(causal.causal_graph(theory).is_acyclic())

    def testDegenerateRequests(self):
        with self.assertRaises(verifier.GeneratorError):
            verifier.random_theory(1, 0, 2)
        with self.assertRaises(verifier.GeneratorError):
            verifier.random_theory(1, 6, 2)
        with self.assertRaises(verifier.GeneratorError):
            verifier.random_theory(1, 2, 0)
        with self.assertRaises(verifier.GeneratorError):
            verifier.random_theory(1, 1, 2, require_cycle=True)

    def testBudgetExhausted(self):
        # budget=0 allows one sample per seed; some seed's sample has a
        # loop without a unique solution
        with self.assertRaises(verifier.GeneratorError):
            for seed in range(50):
                verifier.random_theory(
                    seed, 5, 1, require_cycle=True, budget=0
                )


class TestRandomAudit(unittest.TestCase):
    def testHundredSeeds(self):
        summary = verifier.random_audit(range(SEEDS), n_vars=4)
        self.assertEqual(summary.theories, SEEDS)
        self.assertGreaterEqual(summary.cyclic, 30)
        self.assertTrue(summary.holds, [t.name for t, _ in summary.failures])
        self.assertGreater(summary.queries, 0)
