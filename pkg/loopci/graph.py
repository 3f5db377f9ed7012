# -*- coding: utf-8 -*-
"""
Directed and undirected graphs over opaque string node identifiers, and two
independent d-separation tests that stay valid when the directed graph has
feedback loops:

    d_separated_moral -- separation in the moralized ancestral graph
    d_separated_paths -- blocking of every simple path

Graphs are frozen after construction, so every operation here is a pure query.
"""
import collections
import itertools
import logging
import networkx as nx


class GraphError(Exception):
    pass


def _undirected_key(a, b):
    return (a, b) if a <= b else (b, a)


class DirectedGraph(object):
    def __init__(self, nodes=(), edges=()):
        """
        Arguments:
        nodes -- node identifiers (strings)
        edges -- (tail, head) pairs; both ends must be declared nodes.
                 Cycles are allowed, self-loops are not.
        """
        graph = nx.DiGraph()
        graph.add_nodes_from(nodes)
        for tail, head in edges:
            for node in (tail, head):
                if node not in graph:
                    raise GraphError(
                        "edge {} -> {} uses undeclared node '{}'".format(
                            tail, head, node
                        )
                    )
            if tail == head:
                raise GraphError("self-loop on '{}' is not allowed".format(tail))
            graph.add_edge(tail, head)
        self._graph = nx.freeze(graph)

    @property
    def nodes(self):
        return frozenset(self._graph.nodes)

    @property
    def edges(self):
        return frozenset(self._graph.edges)

    @property
    def nx_graph(self):
        """The underlying (frozen) networkx.DiGraph."""
        return self._graph

    def has_edge(self, tail, head):
        return self._graph.has_edge(tail, head)

    def parents(self, node):
        self.check_nodes([node])
        return frozenset(self._graph.predecessors(node))

    def children(self, node):
        self.check_nodes([node])
        return frozenset(self._graph.successors(node))

    def descendants(self, node):
        """
        Every node reachable from node by a directed path of length >= 1.
        A node lying on a cycle is its own descendant.
        """
        self.check_nodes([node])
        found = set()
        for child in self._graph.successors(node):
            found.add(child)
            found.update(nx.descendants(self._graph, child))
        return frozenset(found)

    def is_acyclic(self):
        return nx.is_directed_acyclic_graph(self._graph)

    def check_nodes(self, nodes):
        unknown = sorted(set(nodes) - set(self._graph.nodes))
        if unknown:
            raise GraphError(
                "unknown node identifier(s): {}".format(", ".join(unknown))
            )

    def __eq__(self, other):
        return (
            isinstance(other, DirectedGraph) and
            self.nodes == other.nodes and
            self.edges == other.edges
        )

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.nodes, self.edges))

    def __repr__(self):
        return "DirectedGraph(nodes={}, edges={})".format(
            sorted(self.nodes), sorted(self.edges)
        )


class UndirectedGraph(object):
    def __init__(self, nodes=(), edges=()):
        graph = nx.Graph()
        graph.add_nodes_from(nodes)
        for a, b in edges:
            for node in (a, b):
                if node not in graph:
                    raise GraphError(
                        "edge {} - {} uses undeclared node '{}'".format(
                            a, b, node
                        )
                    )
            if a == b:
                raise GraphError("self-loop on '{}' is not allowed".format(a))
            graph.add_edge(a, b)
        self._graph = nx.freeze(graph)

    @property
    def nodes(self):
        return frozenset(self._graph.nodes)

    @property
    def edges(self):
        """Edges as (a, b) pairs with a < b."""
        return frozenset(_undirected_key(a, b) for a, b in self._graph.edges)

    @property
    def nx_graph(self):
        return self._graph

    def has_edge(self, a, b):
        return self._graph.has_edge(a, b)

    def neighbors(self, node):
        self.check_nodes([node])
        return frozenset(self._graph.neighbors(node))

    def check_nodes(self, nodes):
        unknown = sorted(set(nodes) - set(self._graph.nodes))
        if unknown:
            raise GraphError(
                "unknown node identifier(s): {}".format(", ".join(unknown))
            )

    def __eq__(self, other):
        return (
            isinstance(other, UndirectedGraph) and
            self.nodes == other.nodes and
            self.edges == other.edges
        )

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.nodes, self.edges))

    def __repr__(self):
        return "UndirectedGraph(nodes={}, edges={})".format(
            sorted(self.nodes), sorted(self.edges)
        )


class SeparationQuery(collections.namedtuple('SeparationQuery', 'x y z')):
    """
    "Is x separated from y given z?" -- three pairwise disjoint node sets,
    x and y non-empty.
    """
    __slots__ = ()

    def __new__(cls, x, y, z=()):
        x, y, z = frozenset(x), frozenset(y), frozenset(z)
        if not x or not y:
            raise GraphError("query sets x and y must not be empty")
        overlap = (x & y) | (x & z) | (y & z)
        if overlap:
            raise GraphError(
                "query sets overlap on: {}".format(", ".join(sorted(overlap)))
            )
        return super(SeparationQuery, cls).__new__(cls, x, y, z)

    @property
    def nodes(self):
        return self.x | self.y | self.z

    def swapped(self):
        return SeparationQuery(self.y, self.x, self.z)

    def sort_key(self):
        return (
            len(self.z),
            tuple(sorted(self.x)),
            tuple(sorted(self.y)),
            tuple(sorted(self.z))
        )

    def __str__(self):
        return " | ".join(
            ",".join(sorted(part)) if part else "-"
            for part in (self.x, self.y, self.z)
        )


def singleton_queries(nodes, max_z, ordered=True):
    """
    Every query with singleton x and y over nodes and |z| <= max_z, sorted by
    SeparationQuery.sort_key.
    """
    nodes = sorted(nodes)
    if ordered:
        pairs = itertools.permutations(nodes, 2)
    else:
        pairs = itertools.combinations(nodes, 2)
    queries = []
    for x, y in pairs:
        rest = [n for n in nodes if n not in (x, y)]
        for size in range(min(max_z, len(rest)) + 1):
            for z in itertools.combinations(rest, size):
                queries.append(SeparationQuery([x], [y], z))
    return sorted(queries, key=SeparationQuery.sort_key)


def ancestors(g, w):
    """
    w plus every node with a directed path into some member of w.
    """
    w = frozenset(w)
    g.check_nodes(w)
    found = set(w)
    for node in w:
        found.update(nx.ancestors(g.nx_graph, node))
    return frozenset(found)


def moral_ancestral_graph(g, w):
    """
    Restrict g to the ancestors of w, marry every two parents of a common
    child and drop directions. A 2-cycle collapses into a single edge.
    """
    keep = ancestors(g, w)
    moral = nx.moral_graph(g.nx_graph.subgraph(keep))
    return UndirectedGraph(moral.nodes, moral.edges)


def _check_query(g, q):
    if not isinstance(q, SeparationQuery):
        q = SeparationQuery(*q)
    g.check_nodes(q.nodes)
    return q


def u_separated(g, q):
    """
    True iff every path in the undirected graph g from q.x to q.y passes
    through q.z.
    """
    q = _check_query(g, q)
    remaining = g.nx_graph.subgraph(g.nodes - q.z)
    for source in q.x:
        if nx.node_connected_component(remaining, source) & q.y:
            return False
    return True


def d_separated_moral(g, q):
    q = _check_query(g, q)
    return u_separated(moral_ancestral_graph(g, q.nodes), q)


def d_separated_paths(g, q):
    q = _check_query(g, q)
    logger = logging.getLogger(__name__)
    skeleton = g.nx_graph.to_undirected(as_view=True)
    collider_open = {}
    for source in sorted(q.x):
        for path in nx.all_simple_paths(skeleton, source, q.y):
            if _path_is_open(g, path, q.z, collider_open):
                logger.debug(
                    "Open path for %s: %s", q, " ~ ".join(path)
                )
                return False
    return True


def _path_is_open(g, path, z, collider_open):
    # A 2-cycle gives two parallel edges; each choice of orientation is a
    # separate path over the same nodes.
    orientations = []
    for a, b in zip(path, path[1:]):
        options = []
        if g.has_edge(a, b):
            options.append((a, b))
        if g.has_edge(b, a):
            options.append((b, a))
        orientations.append(options)
    for chosen in itertools.product(*orientations):
        if all(
            _triple_is_open(g, chosen[k - 1], chosen[k], path[k], z,
                            collider_open)
            for k in range(1, len(path) - 1)
        ):
            return True
    return False


def _triple_is_open(g, left, right, middle, z, collider_open):
    collider = left[1] == middle and right[1] == middle
    if not collider:
        return middle not in z
    if middle not in collider_open:
        collider_open[middle] = (
            middle in z or bool(g.descendants(middle) & z)
        )
    return collider_open[middle]
