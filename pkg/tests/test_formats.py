# -*- coding: utf-8 -*-
import unittest
from fractions import Fraction
from loopci import formats
from loopci import graph
from loopci import paths
from loopci import testutils
from loopci import theory as causal
from loopci import verifier

LOOP_HEADER = """
var A : 0 1
var B : 0 1
exo UA : 0 1
exo UB : 0 1 @ 1/4 3/4
fn A <- B ; UA {
  0 0 -> 0
  0 1 -> 1
  1 0 -> 0
  1 1 -> 0
}
"""


class TestGraphFormat(unittest.TestCase):
    def testFixture(self):
        self.assertEqual(
            formats.load_graph(testutils.fixture('feedback.graph')),
            testutils.feedback_graph()
        )

    def testCommentsAndBlankLines(self):
        g = formats.parse_graph("# nothing\n\nnode a  # first\nnode b\n")
        self.assertEqual(g.nodes, frozenset(['a', 'b']))

    def testUndeclaredNode(self):
        with self.assertRaises(formats.ParseError) as caught:
            formats.parse_graph("node a\nedge a b\n", "g.graph")
        error = caught.exception
        self.assertEqual(error.source, "g.graph")
        self.assertEqual(error.line, 2)
        self.assertEqual(error.token, "b")
        self.assertIn("g.graph:2", str(error))

    def testUnknownDirective(self):
        with self.assertRaises(formats.ParseError) as caught:
            formats.parse_graph("node a\nvertex b\n")
        self.assertEqual(caught.exception.token, "vertex")

    def testSelfLoop(self):
        with self.assertRaises(formats.ParseError):
            formats.parse_graph("node a\nedge a a\n")

    def testDump(self):
        self.assertEqual(
            formats.dump_graph(testutils.feedback_graph())[-4:],
            ["edge X1 X3", "edge X2 X4", "edge X3 X4", "edge X4 X3"]
        )

    def testDumpUndirected(self):
        moral = graph.moral_ancestral_graph(
            testutils.feedback_graph(), ['X1', 'X2', 'X3', 'X4']
        )
        self.assertEqual(formats.dump_undirected(moral)[4:], [
            "uedge X1 X3", "uedge X1 X4", "uedge X2 X3", "uedge X2 X4",
            "uedge X3 X4"
        ])


class TestProblemFormat(unittest.TestCase):
    def testFixture(self):
        problem = formats.load_problem(testutils.fixture('chain.problem'))
        self.assertEqual(problem.names, ('A', 'B', 'C'))
        self.assertEqual(len(problem.constraints), 2)

    def testWeights(self):
        problem = formats.load_problem(
            testutils.fixture('chain_weighted.problem')
        )
        self.assertEqual(problem.weight('A', '0'), Fraction(1, 3))
        self.assertEqual(problem.weight('A', '1'), 1)

    def testTupleOutsideDomain(self):
        with self.assertRaises(formats.ParseError) as caught:
            formats.parse_problem("var A : 0 1\ncon A {\n  0\n  2\n}\n")
        self.assertEqual(caught.exception.line, 4)
        self.assertEqual(caught.exception.token, "2")

    def testRaggedTuples(self):
        with self.assertRaises(formats.ParseError):
            formats.parse_problem(
                "var A : 0 1\nvar B : 0 1\ncon A B { 0 0 1 }\n"
            )

    def testBadWeight(self):
        with self.assertRaises(formats.ParseError) as caught:
            formats.parse_problem("var A : 0 1\nweight A 0 x/y\n")
        self.assertEqual(caught.exception.token, "x/y")
        with self.assertRaises(formats.ParseError):
            formats.parse_problem("var A : 0 1\nweight A 0 0\n")

    def testUnclosedBlock(self):
        with self.assertRaises(formats.ParseError) as caught:
            formats.parse_problem("var A : 0 1\ncon A {\n  0\n")
        self.assertIn("end of file", str(caught.exception))


class TestModelFormat(unittest.TestCase):
    def testLoopFixture(self):
        theory = formats.load_theory(testutils.fixture('feedback.model'))
        expected = testutils.loop_theory()
        self.assertEqual(theory.observed, expected.observed)
        self.assertEqual(theory.exogenous, expected.exogenous)
        for equation in expected.equations:
            self.assertEqual(
                theory.equation(equation.child).table, equation.table
            )
        self.assertEqual(
            causal.induced_distribution(theory),
            causal.induced_distribution(expected)
        )

    def testDependentFixture(self):
        theory = formats.load_theory(
            testutils.fixture('feedback_dependent.model')
        )
        self.assertFalse(theory.exo_declared_independent)
        self.assertEqual(
            theory.exo_dist, testutils.dependent_loop_theory().exo_dist
        )

    def testPathologyFixtures(self):
        report = causal.check_uniqueness(
            formats.load_theory(testutils.fixture('identity_loop.model'))
        )
        self.assertEqual(len(report.unstable), 4)
        report = causal.check_uniqueness(
            formats.load_theory(testutils.fixture('negation_loop.model'))
        )
        self.assertEqual(len(report.inconsistent), 4)

    def testProbabilities(self):
        theory = formats.parse_theory(LOOP_HEADER + """
fn B <- ; UB {
  0 -> 0
  1 -> 1
}
""")
        self.assertEqual(theory.exo_marginal('UA')['0'], Fraction(1, 2))
        self.assertEqual(theory.exo_marginal('UB')['1'], Fraction(3, 4))

    def testMissingCombination(self):
        with self.assertRaises(formats.ParseError) as caught:
            formats.parse_theory(LOOP_HEADER + "fn B <- ; UB {\n  0 -> 0\n}\n")
        self.assertEqual(caught.exception.token, "fn")
        self.assertEqual(caught.exception.line, 12)
        self.assertIn("1", caught.exception.message)

    def testDuplicateCombination(self):
        with self.assertRaises(formats.ParseError) as caught:
            formats.parse_theory(
                LOOP_HEADER + "fn B <- ; UB {\n 0 -> 0\n 0 -> 1\n 1 -> 1\n}\n"
            )
        self.assertEqual(caught.exception.line, 14)

    def testProbabilitiesMustSumToOne(self):
        with self.assertRaises(formats.ParseError) as caught:
            formats.parse_theory("exo U : 0 1 @ 1/2 1/3\n")
        self.assertEqual(caught.exception.token, "1/3")

    def testMissingFnLine(self):
        with self.assertRaises(formats.ParseError) as caught:
            formats.parse_theory(LOOP_HEADER)
        self.assertEqual(caught.exception.token, "B")

    def testSharedDisturbance(self):
        with self.assertRaises(formats.ParseError) as caught:
            formats.parse_theory(LOOP_HEADER + "fn B <- ; UA {\n 0 -> 0\n 1 -> 1\n}\n")
        self.assertEqual(caught.exception.token, "UA")

    def testBadArrow(self):
        with self.assertRaises(formats.ParseError) as caught:
            formats.parse_theory(LOOP_HEADER + "fn B <- ; UB {\n 0 => 0\n}\n")
        self.assertEqual(caught.exception.token, "=>")

    def testJointMustCoverExogenous(self):
        with self.assertRaises(formats.ParseError):
            formats.parse_theory(
                "var X : 0 1\nexo U : 0 1\nfn X <- ; U { 0 -> 0 1 -> 1 }\n"
                "joint-exo { 0 0 : 1 }\n"
            )

    def testDumpTheoryReadsBack(self):
        theory = testutils.dependent_loop_theory()
        again = formats.parse_theory("\n".join(formats.dump_theory(theory)))
        self.assertEqual(again.exo_dist, theory.exo_dist)
        self.assertEqual(
            causal.induced_distribution(again),
            causal.induced_distribution(theory)
        )


class TestSniffing(unittest.TestCase):
    def testGraphOrTheory(self):
        self.assertIsInstance(
            formats.load_graph_or_theory(testutils.fixture('feedback.graph')),
            type(testutils.feedback_graph())
        )
        self.assertIsInstance(
            formats.load_graph_or_theory(testutils.fixture('feedback.model')),
            causal.CausalTheory
        )

    def testSniff(self):
        self.assertEqual(formats.sniff("# c\nnode a\n"), 'graph')
        self.assertEqual(formats.sniff("var a : 0\n"), 'model')
        self.assertIsNone(formats.sniff("con a { 0 }\n"))

    def testBundledExamplesLoad(self):
        names = paths.examples()
        self.assertIn('feedback.model', names)
        for name in names:
            path = testutils.fixture(name)
            if name.endswith('.problem'):
                formats.load_problem(path)
            else:
                formats.load_graph_or_theory(path)

    def testMissingFile(self):
        with self.assertRaises(formats.ParseError) as caught:
            formats.load_graph_or_theory('/nonexistent/loop.graph')
        self.assertEqual(caught.exception.source, '/nonexistent/loop.graph')


class TestDumps(unittest.TestCase):
    def testDistribution(self):
        p = causal.induced_distribution(testutils.loop_theory())
        lines = formats.dump_distribution(p)
        self.assertEqual(lines[0], "# X1 X2 X3 X4")
        self.assertEqual(lines[1], "0 0 2 2 : 1/16")
        self.assertEqual(len(lines), 10)

    def testFormatRational(self):
        self.assertEqual(formats.format_rational(1), "1/1")
        self.assertEqual(formats.format_rational(Fraction(9, 16)), "9/16")

    def testSolutions(self):
        theory = testutils.loop_theory()
        self.assertEqual(
            formats.dump_solutions(
                theory, causal.solve_all(theory, ('1', '0', '0', '0'))
            ),
            ["X1=1 X2=0 X3=4 X4=3"]
        )


class TestRenderAudit(unittest.TestCase):
    def setUp(self):
        self.report = verifier.theorem2_audit(testutils.loop_theory(), 2)

    def testText(self):
        lines = formats.render_audit(self.report)
        self.assertIn("X1 | X2 | - : dsep=y ci=y", lines)
        self.assertIn("X1 | X2 | X3 : dsep=n ci=y", lines)
        self.assertIn("violations: 0", lines)
        self.assertIn("  X1 | X2 | X3", lines)
        self.assertNotIn("[VIOLATION]", "\n".join(lines))

    def testTsv(self):
        lines = formats.render_audit(self.report, 'tsv')
        self.assertEqual(lines[0].split("\t")[:5], ['x', 'y', 'z', 'dsep', 'ci'])
        self.assertEqual(len(lines), len(self.report.rows) + 1)
        self.assertIn("X1\tX2\tX3,X4\ty\ty\tn\t", lines)
