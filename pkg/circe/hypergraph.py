# License: BSD 3 clause
"""Labelled hypergraphs with interfaces, the combinatorial form of terms.

Vertices are the integers ``0 .. n_vertices - 1``. Gluing (composition,
trace, term translation) goes through a union-find whose classes are
renumbered by their smallest member, so results are reproducible.
"""

from collections import namedtuple

import numpy as np
import networkx as nx
from networkx.algorithms import isomorphism as iso
from scipy.cluster.hierarchy import DisjointSet

from . import circuit as C
from .exceptions import ArityError, BudgetExceededError, InvalidCospanError

MAX_ISO_STEPS = 10 ** 6

Edge = namedtuple('Edge', ['label', 'sources', 'targets', 'value'])
Edge.__new__.__defaults__ = (None,)

Degree = namedtuple('Degree', ['in_degree', 'out_degree'])

Isomorphism = namedtuple('Isomorphism', ['vertices', 'edges'])

ABSORB_MODES = ('frobenius', 'comonoid')


class Hypergraph:
    """Vertices and ordered hyperedges.

    Parameters
    ----------
    n_vertices : int
        Number of vertices.

    edges : iterable of Edge
        Hyperedges with ordered source and target lists.
    """

    def __init__(self, n_vertices, edges=()):
        self.n_vertices = int(n_vertices)
        self.edges = tuple(Edge(e.label, tuple(e.sources), tuple(e.targets),
                                e.value) for e in edges)
        for e in self.edges:
            for v in e.sources + e.targets:
                if not 0 <= v < self.n_vertices:
                    raise ValueError("Edge %s refers to missing vertex %d"
                                     % (e.label, v))

    def degrees(self):
        """Tentacle counts of all vertices.

        Returns
        -------
        in_degree : ndarray, shape (n_vertices,)
            Number of edge targets at each vertex.

        out_degree : ndarray, shape (n_vertices,)
            Number of edge sources at each vertex.
        """
        tgt = [v for e in self.edges for v in e.targets]
        src = [v for e in self.edges for v in e.sources]
        return (np.bincount(np.array(tgt, dtype=int),
                            minlength=self.n_vertices),
                np.bincount(np.array(src, dtype=int),
                            minlength=self.n_vertices))

    def __repr__(self):
        return "Hypergraph(%d vertices, %d edges)" % (self.n_vertices,
                                                      len(self.edges))


class InterfacedHypergraph:
    """Cospan ``m -> G <- n`` given by ordered interface vertex lists.

    Parameters
    ----------
    graph : Hypergraph
        The apex.

    inputs : sequence of int
        Image of the left leg, one vertex per input position.

    outputs : sequence of int
        Image of the right leg.
    """

    def __init__(self, graph, inputs, outputs):
        self.graph = graph
        self.inputs = tuple(int(v) for v in inputs)
        self.outputs = tuple(int(v) for v in outputs)
        for v in self.inputs + self.outputs:
            if not 0 <= v < graph.n_vertices:
                raise ValueError("Interface refers to missing vertex %d" % v)

    @property
    def n_vertices(self):
        return self.graph.n_vertices

    @property
    def edges(self):
        return self.graph.edges

    @property
    def arity(self):
        return len(self.inputs), len(self.outputs)

    def __repr__(self):
        return "InterfacedHypergraph(%d -> %d, %d vertices, %d edges)" % (
            len(self.inputs), len(self.outputs), self.graph.n_vertices,
            len(self.graph.edges))


def quotient(n_vertices, edges, inputs, outputs, pairs):
    """Glue vertices of a cospan and renumber the result.

    Each class is represented by its smallest member and classes are
    numbered in increasing order of their representative.

    Parameters
    ----------
    n_vertices : int
        Number of vertices before gluing.

    edges : iterable of Edge
        Edges over the unglued vertices.

    inputs : sequence of int
        Input interface.

    outputs : sequence of int
        Output interface.

    pairs : iterable of (int, int)
        Vertices to identify.

    Returns
    -------
    cospan : InterfacedHypergraph
        The glued cospan.

    relabel : ndarray, shape (n_vertices,)
        New id of every old vertex.
    """
    ds = DisjointSet(range(n_vertices))
    for a, b in pairs:
        ds.merge(a, b)
    rep = np.arange(n_vertices)
    for subset in ds.subsets():
        members = sorted(subset)
        rep[members] = members[0]
    _, relabel = np.unique(rep, return_inverse=True)
    relabel = relabel.reshape(-1)
    n_new = int(relabel.max()) + 1 if n_vertices else 0
    new_edges = [Edge(e.label, [int(relabel[v]) for v in e.sources],
                      [int(relabel[v]) for v in e.targets], e.value)
                 for e in edges]
    graph = Hypergraph(n_new, new_edges)
    return (InterfacedHypergraph(graph, [relabel[v] for v in inputs],
                                 [relabel[v] for v in outputs]), relabel)


class _Translator:
    """Accumulates vertices, edges and gluings while walking a term."""

    def __init__(self, absorb):
        if absorb not in ABSORB_MODES:
            raise ValueError("Unsupported absorb mode %s" % absorb)
        self.absorb = absorb
        self.n_vertices = 0
        self.edges = []
        self.pairs = []

    def fresh(self, k):
        start = self.n_vertices
        self.n_vertices += k
        return list(range(start, start + k))

    def edge(self, label, sources, n_targets, value=None):
        targets = self.fresh(n_targets)
        self.edges.append(Edge(label, sources, targets, value))
        return targets

    def run(self, t, wires):
        kind = t.kind
        if kind == C.ID:
            return wires
        if kind == C.SYMMETRY:
            m = t.params[0]
            return wires[m:] + wires[:m]
        if kind == C.SEQ:
            for child in t.children:
                wires = self.run(child, wires)
            return wires
        if kind == C.PAR:
            out, start = [], 0
            for child in t.children:
                out += self.run(child, wires[start:start + child.n_inputs])
                start += child.n_inputs
            return out
        if kind == C.TRACE:
            x = t.params[0]
            loop = self.fresh(x)
            out = self.run(t.children[0], loop + wires)
            self.pairs.extend(zip(loop, out[:x]))
            return out[x:]
        if kind == C.FORK:
            return wires * 2
        if kind == C.ELIM:
            return []
        if kind == C.JOIN:
            if self.absorb == 'frobenius':
                self.pairs.append((wires[0], wires[1]))
                return wires[:1]
            return self.edge('join', wires, 1)
        if kind == C.INTRO:
            if self.absorb == 'frobenius':
                return self.fresh(1)
            return self.edge('intro', [], 1)
        if kind == C.PRIMITIVE:
            return self.edge(t.params[0], wires, t.n_outputs)
        if kind == C.DELAY:
            return [self.edge('delay', [w], 1)[0] for w in wires]
        if kind in (C.VALUE, C.WAVEFORM):
            return [self.edge(kind, [], 1, v)[0] for v in t.params]
        if kind == C.UNCERTAIN:
            alts, forever = t.params
            label = 'uncertain_waveform' if forever else 'uncertain_value'
            return self.edge(label, [], t.n_outputs, alts)
        raise ValueError("Unsupported node kind %s" % kind)


def term_to_cospan(term, absorb='frobenius'):
    """Translate a term into an interfaced hypergraph.

    Generators become hyperedges, wiring becomes vertex sharing, and
    traces glue their feedback vertices.

    Parameters
    ----------
    term : Circuit
        The term.

    absorb : 'frobenius' | 'comonoid', optional
        With 'frobenius', forks, joins, intros and elims are all absorbed
        into vertex sharing. With 'comonoid' only forks and elims are;
        joins and intros stay hyperedges, which is the reading needed to
        evaluate a circuit.

    Returns
    -------
    cospan : InterfacedHypergraph
        The translation.
    """
    tr = _Translator(absorb)
    inputs = tr.fresh(term.n_inputs)
    outputs = tr.run(term, list(inputs))
    cospan, _ = quotient(tr.n_vertices, tr.edges, inputs, outputs, tr.pairs)
    return cospan


def degree(c, v):
    """Degree of a vertex.

    Parameters
    ----------
    c : InterfacedHypergraph | Hypergraph
        The graph.

    v : int
        The vertex.

    Returns
    -------
    degree : Degree
        Number of edges having ``v`` as a target and as a source, counted
        with multiplicity.
    """
    graph = c.graph if isinstance(c, InterfacedHypergraph) else c
    if not 0 <= v < graph.n_vertices:
        raise ValueError("No vertex %d" % v)
    n_in = sum(e.targets.count(v) for e in graph.edges)
    n_out = sum(e.sources.count(v) for e in graph.edges)
    return Degree(n_in, n_out)


def _is_mono(vertices):
    return len(set(vertices)) == len(vertices)


def _check_degrees(c, allowed):
    report = []
    if not _is_mono(c.inputs):
        report.append("input map is not injective")
    in_deg, out_deg = c.graph.degrees()
    ins, outs = set(c.inputs), set(c.outputs)
    for v in range(c.n_vertices):
        deg = (int(in_deg[v]), int(out_deg[v]))
        ok, case = allowed(v in ins, v in outs, deg)
        if not ok:
            report.append("vertex %d has degree %s, expected %s"
                          % (v, deg, case))
    return report


def _monogamous_case(strict):
    def allowed(in_input, in_output, deg):
        if in_input and in_output:
            return deg == (0, 0), "(0, 0)"
        if in_input:
            return deg == (0, 1), "(0, 1)"
        if in_output:
            return deg == (1, 0), "(1, 0)"
        if strict:
            return deg == (1, 1), "(1, 1)"
        return deg in ((0, 0), (1, 1)), "(0, 0) or (1, 1)"
    return allowed


def _has_cycle(c):
    g = nx.DiGraph()
    g.add_nodes_from(range(c.n_vertices))
    for e in c.edges:
        g.add_edges_from((s, t) for s in e.sources for t in e.targets)
    return not nx.is_directed_acyclic_graph(g)


def _verdict(report, return_report):
    if return_report:
        return not report, report
    return not report


def check_monogamous_acyclic(c, return_report=False):
    """Whether a cospan is monogamous and acyclic.

    These are exactly the images of trace-free terms built from
    generators, identities and symmetries.

    Parameters
    ----------
    c : InterfacedHypergraph
        The cospan.

    return_report : bool, optional
        If True, also return the list of violations.

    Returns
    -------
    valid : bool
        The verdict.

    report : list of str
        Violations, only returned when ``return_report`` is True.
    """
    report = _check_degrees(c, _monogamous_case(strict=True))
    if not _is_mono(c.outputs):
        report.append("output map is not injective")
    if _has_cycle(c):
        report.append("graph has a directed cycle")
    return _verdict(report, return_report)


def check_partial_monogamous(c, return_report=False):
    """Whether a cospan is partial monogamous.

    These are exactly the images of traced terms without forks, joins,
    intros and elims.

    Parameters
    ----------
    c : InterfacedHypergraph
        The cospan.

    return_report : bool, optional
        If True, also return the list of violations.

    Returns
    -------
    valid : bool
        The verdict.

    report : list of str
        Violations, only returned when ``return_report`` is True.
    """
    report = _check_degrees(c, _monogamous_case(strict=False))
    if not _is_mono(c.outputs):
        report.append("output map is not injective")
    return _verdict(report, return_report)


def _left_case(in_input, in_output, deg):
    if in_input:
        return deg[0] == 0, "(0, m)"
    return deg[0] <= 1, "(0, m) or (1, m)"


def check_partial_left_monogamous(c, return_report=False):
    """Whether a cospan is partial left-monogamous.

    Only the input map must be injective and every vertex has at most
    one incoming tentacle, none for input vertices. Out-degrees are
    unrestricted, so forks and elims are allowed.

    Parameters
    ----------
    c : InterfacedHypergraph
        The cospan.

    return_report : bool, optional
        If True, also return the list of violations.

    Returns
    -------
    valid : bool
        The verdict.

    report : list of str
        Violations, only returned when ``return_report`` is True.
    """
    report = _check_degrees(c, _left_case)
    return _verdict(report, return_report)


def compose_cospans(c1, c2):
    """Sequential composition by pushout.

    Parameters
    ----------
    c1 : InterfacedHypergraph
        First cospan.

    c2 : InterfacedHypergraph
        Second cospan, whose inputs are glued to the outputs of ``c1``.

    Returns
    -------
    cospan : InterfacedHypergraph
        The composite.
    """
    if len(c1.outputs) != len(c2.inputs):
        raise ArityError("Cannot compose %d outputs with %d inputs"
                         % (len(c1.outputs), len(c2.inputs)))
    off = c1.n_vertices
    edges = list(c1.edges) + _shift(c2.edges, off)
    pairs = [(a, b + off) for a, b in zip(c1.outputs, c2.inputs)]
    cospan, _ = quotient(off + c2.n_vertices, edges, c1.inputs,
                         [v + off for v in c2.outputs], pairs)
    return cospan


def _shift(edges, off):
    return [Edge(e.label, [v + off for v in e.sources],
                 [v + off for v in e.targets], e.value) for e in edges]


def tensor_cospans(*cospans):
    """Disjoint union with concatenated interfaces.

    Parameters
    ----------
    *cospans : InterfacedHypergraph
        Cospans stacked top to bottom.

    Returns
    -------
    cospan : InterfacedHypergraph
        The tensor.
    """
    off, edges, inputs, outputs = 0, [], [], []
    for c in cospans:
        edges += _shift(c.edges, off)
        inputs += [v + off for v in c.inputs]
        outputs += [v + off for v in c.outputs]
        off += c.n_vertices
    return InterfacedHypergraph(Hypergraph(off, edges), inputs, outputs)


def trace_cospan(x, c):
    """Canonical trace: glue the first ``x`` inputs to the first ``x``
    outputs and drop them from the interfaces.

    Parameters
    ----------
    x : int
        Number of traced positions.

    c : InterfacedHypergraph
        The cospan.

    Returns
    -------
    cospan : InterfacedHypergraph
        The traced cospan.
    """
    if x > len(c.inputs) or x > len(c.outputs):
        raise ArityError("Cannot trace %d wires of a %d -> %d cospan"
                         % ((x,) + c.arity))
    pairs = list(zip(c.inputs[:x], c.outputs[:x]))
    cospan, _ = quotient(c.n_vertices, c.edges, c.inputs[x:],
                         c.outputs[x:], pairs)
    return cospan


def fold_interfaces(c):
    """Move both interfaces to a single boundary ``0 -> G <- m + n``.

    Parameters
    ----------
    c : InterfacedHypergraph
        An ``m -> n`` cospan.

    Returns
    -------
    folded : InterfacedHypergraph
        Same graph, empty inputs, outputs ``inputs + outputs``.
    """
    return InterfacedHypergraph(c.graph, (), c.inputs + c.outputs)


def unfold_interfaces(c, n_inputs):
    """Inverse of :func:`fold_interfaces`.

    Parameters
    ----------
    c : InterfacedHypergraph
        A folded cospan.

    n_inputs : int
        How many boundary positions are inputs.

    Returns
    -------
    cospan : InterfacedHypergraph
        The ``m -> n`` cospan.
    """
    boundary = c.inputs + c.outputs
    return InterfacedHypergraph(c.graph, boundary[:n_inputs],
                                boundary[n_inputs:])


def _to_nx(c):
    g = nx.MultiDiGraph()
    ins, outs = {}, {}
    for k, v in enumerate(c.inputs):
        ins.setdefault(v, []).append(k)
    for k, v in enumerate(c.outputs):
        outs.setdefault(v, []).append(k)
    for v in range(c.n_vertices):
        g.add_node(('v', v), kind='vertex', label=None, value=None,
                   ins=tuple(ins.get(v, ())), outs=tuple(outs.get(v, ())))
    for j, e in enumerate(c.edges):
        g.add_node(('e', j), kind='edge', label=e.label, value=e.value,
                   ins=len(e.sources), outs=len(e.targets))
        for p, v in enumerate(e.sources):
            g.add_edge(('v', v), ('e', j), port=p)
        for p, v in enumerate(e.targets):
            g.add_edge(('e', j), ('v', v), port=p)
    return g


class _CountingMatcher(iso.MultiDiGraphMatcher):
    """Matcher giving up after ``max_steps`` candidate pairs."""

    def __init__(self, G1, G2, max_steps, **kwargs):
        super().__init__(G1, G2, **kwargs)
        self.max_steps = max_steps
        self.n_steps = 0

    def syntactic_feasibility(self, G1_node, G2_node):
        self.n_steps += 1
        if self.n_steps > self.max_steps:
            raise BudgetExceededError('isomorphism steps', self.max_steps)
        return super().syntactic_feasibility(G1_node, G2_node)


def cospan_iso(c1, c2, max_steps=MAX_ISO_STEPS):
    """Isomorphism of cospans preserving labels, port order and interfaces.

    Parameters
    ----------
    c1 : InterfacedHypergraph
        First cospan.

    c2 : InterfacedHypergraph
        Second cospan.

    max_steps : int, optional
        Budget on the candidate node pairs tried by the search.

    Returns
    -------
    bijection : Isomorphism | None
        ``vertices[v]`` and ``edges[j]`` give the images of the vertices
        and edges of ``c1``, or None when the cospans are not isomorphic.
    """
    if (c1.n_vertices != c2.n_vertices or len(c1.edges) != len(c2.edges)
            or c1.arity != c2.arity):
        return None
    if sorted(map(repr, (e.label for e in c1.edges))) != \
            sorted(map(repr, (e.label for e in c2.edges))):
        return None
    node_match = iso.categorical_node_match(
        ['kind', 'label', 'value', 'ins', 'outs'], [None] * 5)
    edge_match = iso.categorical_multiedge_match('port', None)
    matcher = _CountingMatcher(_to_nx(c1), _to_nx(c2), max_steps,
                               node_match=node_match, edge_match=edge_match)
    if not matcher.is_isomorphic():
        return None
    mapping = matcher.mapping
    vertices = [mapping[('v', v)][1] for v in range(c1.n_vertices)]
    edges = [mapping[('e', j)][1] for j in range(len(c1.edges))]
    return Isomorphism(vertices, edges)


def edge_term(e):
    """Generator term of a hyperedge.

    Parameters
    ----------
    e : Edge
        The hyperedge.

    Returns
    -------
    term : Circuit
        The generator it stands for.
    """
    n_src, n_tgt = len(e.sources), len(e.targets)
    if e.label == 'join':
        return C.join()
    if e.label == 'intro':
        return C.intro()
    if e.label == 'fork':
        return C.fork()
    if e.label == 'elim':
        return C.elim()
    if e.label == 'delay':
        return C.delay(1)
    if e.label == 'value':
        return C.value((e.value,))
    if e.label == 'waveform':
        return C.waveform((e.value,))
    if e.label in ('uncertain_value', 'uncertain_waveform'):
        return C.uncertain(e.value, forever=e.label == 'uncertain_waveform')
    return C.primitive(e.label, n_src, n_tgt)


def extract_term(c, mode='traced'):
    """Read back a term from a cospan.

    The term has the shape ``Trace(T + L, W ; (E * Id))`` where ``E``
    stacks the edge generators in edge order, ``T`` counts edge targets,
    ``L`` counts vertices with no driver that are not inputs, and ``W``
    is wiring from drivers to uses. In 'traced' mode ``W`` is a
    permutation; in 'traced_comonoid' mode it may fork and discard.

    Parameters
    ----------
    c : InterfacedHypergraph
        The cospan.

    mode : 'traced' | 'traced_comonoid', optional
        Fragment to read the cospan in.

    Returns
    -------
    term : Circuit
        A term whose translation is isomorphic to ``c``. Translate back
        with ``absorb='comonoid'`` when the graph has join or intro edges.
    """
    if mode == 'traced':
        valid, report = check_partial_monogamous(c, return_report=True)
    elif mode == 'traced_comonoid':
        valid, report = check_partial_left_monogamous(c,
                                                      return_report=True)
    else:
        raise ValueError("Unsupported mode %s" % mode)
    if not valid:
        raise InvalidCospanError("Cannot extract a %s term: %s"
                                 % (mode, '; '.join(report)))

    targets = [v for e in c.edges for v in e.targets]
    driver = {v: pos for pos, v in enumerate(targets)}
    n_targets = len(targets)
    inputs = set(c.inputs)
    loops = [v for v in range(c.n_vertices)
             if v not in driver and v not in inputs]
    for k, v in enumerate(loops):
        driver[v] = n_targets + k
    for k, v in enumerate(c.inputs):
        driver[v] = n_targets + len(loops) + k

    uses = [v for e in c.edges for v in e.sources] + loops + \
        list(c.outputs)
    copies = [[] for _ in range(n_targets + len(loops) + len(c.inputs))]
    for u, v in enumerate(uses):
        copies[driver[v]].append(u)
    fan = C.tensor(*[C.fork_bus(1, len(cp)) for cp in copies])
    carried = [u for cp in copies for u in cp]
    position = {u: w for w, u in enumerate(carried)}
    wiring = C.compose(fan, C.permutation([position[u]
                                           for u in range(len(uses))]))
    gens = C.tensor(*[edge_term(e) for e in c.edges])
    body = C.compose(wiring, C.tensor(gens, C.identity(len(loops) +
                                                       len(c.outputs))))
    return C.trace(n_targets + len(loops), body)


def to_dot(c, name='circuit', value_names=None):
    """Graphviz drawing of a cospan.

    Vertices are points, hyperedges are record boxes with one port per
    tentacle, and interface positions are numbered nodes, outputs
    numbered after inputs.

    Parameters
    ----------
    c : InterfacedHypergraph
        The cospan.

    name : str, optional
        Graph name.

    value_names : sequence of str, optional
        Names used to print values carried by value edges.

    Returns
    -------
    dot : graphviz.Digraph
        The drawing; ``dot.source`` is the DOT text.
    """
    import graphviz

    def _fmt(v):
        if value_names is None:
            return str(v)
        if isinstance(v, tuple):
            return '|'.join(''.join(value_names[x] for x in w) for w in v)
        return value_names[v]

    dot = graphviz.Digraph(name=name, graph_attr={'rankdir': 'LR'})
    for v in range(c.n_vertices):
        dot.node('v%d' % v, shape='point')
    for j, e in enumerate(c.edges):
        text = e.label if e.value is None else \
            "%s %s" % (e.label, _fmt(e.value))
        text = text.replace('|', '/').replace('{', '').replace('}', '')
        fields = []
        if e.sources:
            fields.append('{%s}' % '|'.join('<i%d>' % p
                                            for p in range(len(e.sources))))
        fields.append(text)
        if e.targets:
            fields.append('{%s}' % '|'.join('<o%d>' % p
                                            for p in range(len(e.targets))))
        dot.node('e%d' % j, label='{%s}' % '|'.join(fields), shape='record')
        for p, v in enumerate(e.sources):
            dot.edge('v%d' % v, 'e%d:i%d' % (j, p), arrowhead='none')
        for p, v in enumerate(e.targets):
            dot.edge('e%d:o%d' % (j, p), 'v%d' % v, arrowhead='none')
    n_in = len(c.inputs)
    for k, v in enumerate(c.inputs):
        dot.node('in%d' % k, label=str(k), shape='plaintext')
        dot.edge('in%d' % k, 'v%d' % v, style='dashed', arrowhead='none')
    for k, v in enumerate(c.outputs):
        dot.node('out%d' % k, label=str(n_in + k), shape='plaintext')
        dot.edge('v%d' % v, 'out%d' % k, style='dashed', arrowhead='none')
    return dot
