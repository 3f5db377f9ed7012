# -*- coding: utf-8 -*-
"""
Line-oriented text formats.

Graph files:
    node <id>
    edge <tail> <head>

Constraint problems:
    var <id> : <v1> <v2> ...
    weight <id> <value> <p>/<q>
    con <id1> <id2> ... { <tuple> <tuple> ... }

Causal-theory models:
    var <id> : <v1> <v2> ...
    exo <id> : <v1> <v2> ... [@ <p1> <p2> ...]
    joint-exo { <u1> <u2> ... : <p> ... }
    fn <child> <- <parent ids> ; <exo id> { <parent values> <exo value> -> <child value> ... }

'#' starts a comment in every format.
"""
import collections
import itertools
import logging
import re
from fractions import Fraction
from loopci import constraints
from loopci import graph
from loopci import independence
from loopci import theory as causal

Token = collections.namedtuple('Token', 'text line')

RE_TOKEN = re.compile(r'[{}]|[^\s{}]+')
GRAPH_DIRECTIVES = ('node', 'edge')
MODEL_DIRECTIVES = ('var', 'exo', 'joint-exo', 'fn')


class ParseError(Exception):
    def __init__(self, source, line, token, message):
        self.source = source
        self.line = line
        self.token = token
        self.message = message
        if line is None:
            text = "{}: {}".format(source, message)
        elif token is None:
            text = "{}:{}: {}".format(source, line, message)
        else:
            text = "{}:{}: near '{}': {}".format(source, line, token, message)
        super(ParseError, self).__init__(text)


def tokenize(text):
    tokens = []
    for number, line in enumerate(text.splitlines(), 1):
        line = line.split('#', 1)[0]
        for match in RE_TOKEN.finditer(line):
            tokens.append(Token(match.group(), number))
    return tokens


class _Reader(object):
    def __init__(self, text, source):
        self.source = source
        self._tokens = tokenize(text)
        self._pos = 0

    @property
    def at_end(self):
        return self._pos >= len(self._tokens)

    def error(self, token, message):
        if token is None:
            line = self._tokens[-1].line if self._tokens else None
            return ParseError(self.source, line, None, message)
        return ParseError(self.source, token.line, token.text, message)

    def next(self, what):
        if self.at_end:
            raise self.error(None, "unexpected end of file, expected {}".format(what))
        token = self._tokens[self._pos]
        self._pos += 1
        return token

    def expect(self, text):
        token = self.next("'{}'".format(text))
        if token.text != text:
            raise self.error(token, "expected '{}'".format(text))
        return token

    def rest_of_line(self, directive):
        found = []
        while (
            not self.at_end and
            self._tokens[self._pos].line == directive.line
        ):
            found.append(self._tokens[self._pos])
            self._pos += 1
        return found

    def until(self, text, what):
        """Tokens up to (not including) the next token equal to text."""
        found = []
        while True:
            token = self.next(what)
            if token.text == text:
                return found
            found.append(token)

    def block(self):
        """Tokens between '{' and the matching '}'."""
        self.expect('{')
        return self.body()

    def body(self):
        """Tokens up to the '}' closing an already consumed '{'."""
        found = self.until('}', "'}'")
        for token in found:
            if token.text == '{':
                raise self.error(token, "nested '{' is not allowed")
        return found


def _rational(reader, token):
    try:
        value = Fraction(token.text)
    except (ValueError, ZeroDivisionError):
        raise reader.error(token, "not a rational number")
    return value


def _declaration(reader, directive, rest, kind):
    # <id> : <v1> <v2> ...
    if len(rest) < 3 or rest[1].text != ':':
        raise reader.error(
            rest[0] if rest else directive,
            "expected '{} <id> : <v1> <v2> ...'".format(kind)
        )
    values = [t.text for t in rest[2:]]
    duplicates = [t for i, t in enumerate(rest[2:]) if t.text in values[:i]]
    if duplicates:
        raise reader.error(duplicates[0], "value listed twice")
    return rest[0], rest[2:]


def parse_graph(text, source="<string>"):
    reader = _Reader(text, source)
    nodes = collections.OrderedDict()
    edges = []
    while not reader.at_end:
        directive = reader.next("a directive")
        rest = reader.rest_of_line(directive)
        if directive.text == 'node':
            if len(rest) != 1:
                raise reader.error(directive, "expected 'node <id>'")
            if rest[0].text in nodes:
                raise reader.error(rest[0], "node declared twice")
            nodes[rest[0].text] = rest[0]
        elif directive.text == 'edge':
            if len(rest) != 2:
                raise reader.error(directive, "expected 'edge <tail> <head>'")
            edges.append(rest)
        else:
            raise reader.error(directive, "unknown directive")
    for tail, head in edges:
        for token in (tail, head):
            if token.text not in nodes:
                raise reader.error(token, "undeclared node")
        if tail.text == head.text:
            raise reader.error(head, "self-loops are not allowed")
    return graph.DirectedGraph(
        list(nodes), [(tail.text, head.text) for tail, head in edges]
    )


def parse_problem(text, source="<string>"):
    reader = _Reader(text, source)
    variables = collections.OrderedDict()
    weights = {}
    scopes = []
    while not reader.at_end:
        directive = reader.next("a directive")
        if directive.text == 'var':
            name, values = _declaration(
                reader, directive, reader.rest_of_line(directive), 'var'
            )
            if name.text in variables:
                raise reader.error(name, "variable declared twice")
            variables[name.text] = tuple(t.text for t in values)
        elif directive.text == 'weight':
            rest = reader.rest_of_line(directive)
            if len(rest) != 3:
                raise reader.error(
                    directive, "expected 'weight <id> <value> <p>/<q>'"
                )
            name, value, amount = rest
            if name.text not in variables:
                raise reader.error(name, "undeclared variable")
            if value.text not in variables[name.text]:
                raise reader.error(value, "value not in the domain")
            weight = _rational(reader, amount)
            if weight <= 0:
                raise reader.error(amount, "weights must be positive")
            weights[(name.text, value.text)] = weight
        elif directive.text == 'con':
            scope = reader.until('{', "'{'")
            rows = reader.body()
            scopes.append((directive, scope, rows))
        else:
            raise reader.error(directive, "unknown directive")
    problem_constraints = []
    for directive, scope, rows in scopes:
        if not scope:
            raise reader.error(directive, "constraint without variables")
        for token in scope:
            if token.text not in variables:
                raise reader.error(token, "undeclared variable")
        if len(rows) % len(scope):
            raise reader.error(
                rows[-1], "tuples must have {} values".format(len(scope))
            )
        relation = []
        for start in range(0, len(rows), len(scope)):
            row = rows[start:start + len(scope)]
            for var, token in zip(scope, row):
                if token.text not in variables[var.text]:
                    raise reader.error(
                        token, "value not in the domain of {}".format(var.text)
                    )
            relation.append(tuple(t.text for t in row))
        problem_constraints.append(constraints.Constraint(
            [t.text for t in scope], relation
        ))
    try:
        return constraints.ConstraintProblem(
            list(variables.items()), problem_constraints, weights
        )
    except constraints.ConstraintError as e:
        raise ParseError(source, None, None, str(e))


def parse_theory(text, source="<string>", name=None):
    reader = _Reader(text, source)
    observed = collections.OrderedDict()
    exogenous = collections.OrderedDict()
    marginals = {}
    joint = None
    functions = []
    while not reader.at_end:
        directive = reader.next("a directive")
        if directive.text in ('var', 'exo'):
            rest = reader.rest_of_line(directive)
            probabilities = None
            split = [i for i, t in enumerate(rest) if t.text == '@']
            if split and directive.text == 'exo':
                probabilities = rest[split[0] + 1:]
                rest = rest[:split[0]]
            name_token, values = _declaration(
                reader, directive, rest, directive.text
            )
            if name_token.text in observed or name_token.text in exogenous:
                raise reader.error(name_token, "variable declared twice")
            domain = tuple(t.text for t in values)
            if directive.text == 'var':
                observed[name_token.text] = (name_token, domain)
                continue
            exogenous[name_token.text] = (name_token, domain)
            if probabilities is not None:
                if len(probabilities) != len(domain):
                    raise reader.error(
                        name_token,
                        "expected {} probabilities".format(len(domain))
                    )
                amounts = [_rational(reader, t) for t in probabilities]
                for token, amount in zip(probabilities, amounts):
                    if amount < 0 or amount > 1:
                        raise reader.error(token, "probability outside [0, 1]")
                if sum(amounts) != 1:
                    raise reader.error(
                        probabilities[-1],
                        "probabilities sum to {}, not 1".format(sum(amounts))
                    )
                marginals[name_token.text] = dict(zip(domain, amounts))
        elif directive.text == 'joint-exo':
            if joint is not None:
                raise reader.error(directive, "joint-exo given twice")
            joint = (directive, reader.block())
        elif directive.text == 'fn':
            child = reader.next("the child variable")
            reader.expect('<-')
            parents = reader.until(';', "';'")
            exo = reader.next("the exogenous variable")
            entries = reader.block()
            functions.append((directive, child, parents, exo, entries))
        else:
            raise reader.error(directive, "unknown directive")

    equations = []
    fed = {}
    for directive, child, parents, exo, entries in functions:
        equations.append(_equation(
            reader, observed, exogenous, fed, directive, child, parents, exo,
            entries
        ))
    defined = set(eq.child for eq in equations)
    for var, (token, _) in observed.items():
        if var not in defined:
            raise reader.error(token, "no 'fn' line for this variable")
    for var, (token, _) in exogenous.items():
        if var not in fed:
            raise reader.error(token, "exogenous variable feeds no equation")

    exo_joint = None
    if joint is not None:
        exo_joint = _joint(reader, exogenous, *joint)
    try:
        return causal.CausalTheory(
            [(n, d) for n, (_, d) in observed.items()],
            [(n, d) for n, (_, d) in exogenous.items()],
            equations,
            exo_marginals=marginals,
            exo_joint=exo_joint,
            name=name or source
        )
    except causal.TheoryError as e:
        raise ParseError(source, None, None, str(e))


def _equation(reader, observed, exogenous, fed, directive, child, parents,
              exo, entries):
    if child.text not in observed:
        raise reader.error(child, "child must be a declared 'var'")
    for token in parents:
        if token.text not in observed:
            raise reader.error(token, "parent must be a declared 'var'")
        if token.text == child.text:
            raise reader.error(token, "a variable cannot be its own parent")
    if exo.text not in exogenous:
        raise reader.error(exo, "must be a declared 'exo' variable")
    if exo.text in fed:
        raise reader.error(
            exo, "already feeds the equation of {}".format(fed[exo.text])
        )
    fed[exo.text] = child.text
    inputs = [observed[t.text][1] for t in parents] + [exogenous[exo.text][1]]
    width = len(inputs) + 2
    if len(entries) % width:
        raise reader.error(
            entries[-1] if entries else directive,
            "entries must read '<{} values> -> <value>'".format(len(inputs))
        )
    table = {}
    for start in range(0, len(entries), width):
        key_tokens = entries[start:start + len(inputs)]
        arrow = entries[start + len(inputs)]
        result = entries[start + len(inputs) + 1]
        if arrow.text != '->':
            raise reader.error(arrow, "expected '->'")
        for token, domain in zip(key_tokens, inputs):
            if token.text not in domain:
                raise reader.error(token, "value not in the domain")
        if result.text not in observed[child.text][1]:
            raise reader.error(
                result, "value not in the domain of {}".format(child.text)
            )
        key = tuple(t.text for t in key_tokens)
        if key in table:
            raise reader.error(key_tokens[0], "combination listed twice")
        table[key] = result.text
    for key in itertools.product(*inputs):
        if key not in table:
            raise reader.error(
                directive,
                "equation for {} is missing the combination {}".format(
                    child.text, " ".join(key)
                )
            )
    return causal.Equation(
        child.text, [t.text for t in parents], exo.text, table
    )


def _joint(reader, exogenous, directive, entries):
    domains = [domain for _, domain in exogenous.values()]
    width = len(domains) + 2
    if len(entries) % width:
        raise reader.error(
            entries[-1] if entries else directive,
            "entries must read '<{} values> : <p>'".format(len(domains))
        )
    table = {}
    for start in range(0, len(entries), width):
        key_tokens = entries[start:start + len(domains)]
        colon = entries[start + len(domains)]
        if colon.text != ':':
            raise reader.error(colon, "expected ':'")
        for token, domain in zip(key_tokens, domains):
            if token.text not in domain:
                raise reader.error(token, "value not in the domain")
        key = tuple(t.text for t in key_tokens)
        if key in table:
            raise reader.error(key_tokens[0], "assignment listed twice")
        amount = _rational(reader, entries[start + len(domains) + 1])
        if amount < 0:
            raise reader.error(entries[start + len(domains) + 1],
                               "negative probability")
        table[key] = amount
    if sum(table.values()) != 1:
        raise reader.error(
            directive,
            "probabilities sum to {}, not 1".format(sum(table.values()))
        )
    return table


def sniff(text):
    """'graph' or 'model', from the first directive of text."""
    tokens = tokenize(text)
    if tokens and tokens[0].text in GRAPH_DIRECTIVES:
        return 'graph'
    if tokens and tokens[0].text in MODEL_DIRECTIVES:
        return 'model'
    return None


def _read(path):
    logger = logging.getLogger(__name__)
    logger.debug("Reading '%s'", path)
    try:
        with open(path, 'r') as f:
            return f.read()
    except (IOError, OSError) as e:
        raise ParseError(path, None, None, e.strerror or str(e))


def load_graph(path):
    return parse_graph(_read(path), path)


def load_problem(path):
    return parse_problem(_read(path), path)


def load_theory(path):
    return parse_theory(_read(path), path)


def load_graph_or_theory(path):
    text = _read(path)
    kind = sniff(text)
    if kind == 'graph':
        return parse_graph(text, path)
    if kind == 'model':
        return parse_theory(text, path)
    tokens = tokenize(text)
    raise ParseError(
        path,
        tokens[0].line if tokens else None,
        tokens[0].text if tokens else None,
        "neither a graph file nor a model file"
    )


def format_rational(value):
    value = Fraction(value)
    return "{}/{}".format(value.numerator, value.denominator)


def dump_graph(g):
    lines = ["node {}".format(n) for n in sorted(g.nodes)]
    lines.extend("edge {} {}".format(a, b) for a, b in sorted(g.edges))
    return lines


def dump_undirected(g):
    lines = ["node {}".format(n) for n in sorted(g.nodes)]
    lines.extend("uedge {} {}".format(a, b) for a, b in sorted(g.edges))
    return lines


def dump_distribution(p):
    lines = ["# {}".format(" ".join(p.names))]
    for assignment, probability in p.support():
        lines.append("{} : {}".format(
            " ".join(assignment), format_rational(probability)
        ))
    return lines


def format_assignment(names, values):
    return " ".join("{}={}".format(n, v) for n, v in zip(names, values))


def dump_solutions(theory, solutions):
    return [
        format_assignment(theory.observed_names, values)
        for values in solutions
    ]


def dump_theory(theory):
    lines = []
    for name, domain in theory.observed:
        lines.append("var {} : {}".format(name, " ".join(domain)))
    joint = not theory.exo_declared_independent
    for name, domain in theory.exogenous:
        line = "exo {} : {}".format(name, " ".join(domain))
        if not joint:
            marginal = theory.exo_marginal(name)
            line += " @ " + " ".join(
                format_rational(marginal[value]) for value in domain
            )
        lines.append(line)
    if joint:
        lines.append("joint-exo {")
        for assignment, probability in theory.exo_dist.support():
            lines.append("  {} : {}".format(
                " ".join(assignment), format_rational(probability)
            ))
        lines.append("}")
    for equation in theory.equations:
        lines.append(" ".join(
            ["fn", equation.child, "<-"] + list(equation.parents) +
            [";", equation.exogenous, "{"]
        ))
        inputs = [theory.domain(p) for p in equation.parents]
        inputs.append(theory.domain(equation.exogenous))
        table = equation.table
        for key in itertools.product(*inputs):
            lines.append("  {} -> {}".format(" ".join(key), table[key]))
        lines.append("}")
    return lines


def _flag(value):
    return "y" if value else "n"


def render_audit(report, fmt='text'):
    """
    One line per query, then a summary block ('text'), or tab separated rows
    with a header ('tsv').
    """
    if fmt == 'tsv':
        lines = ["x\ty\tz\tdsep\tci\tviolation\ttrace"]
        for row in report.rows:
            lines.append("\t".join([
                ",".join(sorted(row.query.x)),
                ",".join(sorted(row.query.y)),
                ",".join(sorted(row.query.z)),
                _flag(row.dsep),
                _flag(row.ci),
                _flag(row.violation),
                "" if row.trace is None else _flag(row.trace.holds)
            ]))
        return lines
    lines = []
    for row in report.rows:
        line = "{} : dsep={} ci={}".format(
            row.query, _flag(row.dsep), _flag(row.ci)
        )
        if row.trace is not None:
            line += " trace={}".format(_flag(row.trace.holds))
        if row.violation:
            line += " [VIOLATION]"
        lines.append(line)
    lines.append("")
    lines.append("theory: {}".format(report.theory_name))
    lines.append("class: {}".format(report.classification))
    lines.append("graph: {}".format(
        "augmented" if report.augmented else "causal"
    ))
    lines.append("queries: {}".format(len(report.rows)))
    lines.append("d-separated: {}".format(
        sum(1 for row in report.rows if row.dsep)
    ))
    lines.append("violations: {}".format(len(report.violations)))
    for query in report.violations:
        lines.append("  {}".format(query))
    lines.append("extras: {}".format(len(report.extras)))
    for query in report.extras:
        lines.append("  {}".format(query))
    if report.factorization is not None:
        lines.append("factorization: {}".format(
            "holds" if report.factorization else "FAILS"
        ))
    return lines
