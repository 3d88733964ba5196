# License: BSD 3 clause
"""Double-pushout rewriting of cospans.

A rule ``l -> r`` between ``i -> j`` terms is turned into a span of
hypergraphs ``L <- i + j -> R`` by folding both interfaces of each side
onto one boundary. A matching is a label preserving homomorphism from
``L`` into the host, not necessarily injective so that rules can be found
inside traces. Pushout complements are enumerated as quotients of the
exploded context, then filtered by the boundary condition of the chosen
fragment.
"""

from collections import namedtuple
from itertools import product

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from . import circuit as C
from .hypergraph import (Edge, Hypergraph, InterfacedHypergraph,
                         check_monogamous_acyclic, check_partial_monogamous,
                         check_partial_left_monogamous, cospan_iso,
                         extract_term, quotient, term_to_cospan)
from .mealy import MAX_PAIRS, circuit_to_mealy, distinguishing_waveform
from .opsem import to_mealy_form
from .interp import all_words
from .exceptions import ArityError, BudgetExceededError

MAX_MATCHINGS = 10 ** 4
MAX_COMPLEMENTS = 10 ** 4

BOUNDARY_MODES = ('frobenius', 'smc', 'traced', 'traced_comonoid')

Matching = namedtuple('Matching', ['vertices', 'edges'])

Complement = namedtuple('Complement', ['graph', 'boundary', 'interface',
                                       'host'])


class DpoRule:
    """Rewrite rule as a span of folded hypergraphs.

    Parameters
    ----------
    lhs : Circuit
        Left-hand term ``i -> j``.

    rhs : Circuit
        Right-hand term of the same arity.

    name : str, optional
        Name used in listings.

    absorb : 'comonoid' | 'frobenius', optional
        Translation of both sides, see :func:`circe.term_to_cospan`.

    guard : callable, optional
        ``guard(matching, host)`` filters matchings of this rule.
    """

    def __init__(self, lhs, rhs, name=None, absorb='comonoid', guard=None):
        if lhs.arity != rhs.arity:
            raise ArityError("Rule sides have arities %s and %s"
                             % (lhs.arity, rhs.arity))
        self.lhs, self.rhs = lhs, rhs
        self.name = name or "%r -> %r" % (lhs, rhs)
        self.n_inputs, self.n_outputs = lhs.arity
        left = term_to_cospan(lhs, absorb=absorb)
        right = term_to_cospan(rhs, absorb=absorb)
        self.left = InterfacedHypergraph(left.graph, (),
                                         left.inputs + left.outputs)
        self.right = InterfacedHypergraph(right.graph, (),
                                          right.inputs + right.outputs)
        self.guard = guard

    @property
    def boundary(self):
        return self.left.outputs

    def __repr__(self):
        return "DpoRule(%s)" % self.name


def make_rule(lhs, rhs, name=None, absorb='comonoid'):
    """Span ``L <- i + j -> R`` of a term rewrite rule.

    Parameters
    ----------
    lhs : Circuit
        Left-hand term ``i -> j``.

    rhs : Circuit
        Right-hand term of the same arity.

    name : str, optional
        Name used in listings.

    absorb : 'comonoid' | 'frobenius', optional
        Translation of both sides.

    Returns
    -------
    rule : DpoRule
        Both sides with an empty input interface and the ``i + j``
        boundary as output interface.
    """
    return DpoRule(lhs, rhs, name=name, absorb=absorb)


def _folded(g):
    return g.inputs + g.outputs


def find_matchings(rule, g, max_matchings=MAX_MATCHINGS):
    """All homomorphisms from the left-hand graph of a rule into a host.

    Edges of the rule are matched in insertion order against host edges
    in insertion order, then vertices untouched by edges against host
    vertices in increasing order.

    Parameters
    ----------
    rule : DpoRule
        The rule.

    g : InterfacedHypergraph
        The host cospan.

    max_matchings : int, optional
        Budget on the number of matchings.

    Returns
    -------
    matchings : list of Matching
        ``vertices[u]`` and ``edges[k]`` are the images of vertex ``u``
        and edge ``k`` of the left-hand graph.
    """
    left = rule.left
    host_edges = g.edges
    found = []

    def _extend(k, vmap, emap):
        if k == len(left.edges):
            free = [u for u in range(left.n_vertices) if u not in vmap]
            for images in product(range(g.n_vertices), repeat=len(free)):
                vertices = dict(vmap)
                vertices.update(zip(free, images))
                m = Matching(tuple(vertices[u]
                                   for u in range(left.n_vertices)),
                             tuple(emap))
                if rule.guard is None or rule.guard(m, g):
                    found.append(m)
                    if len(found) > max_matchings:
                        raise BudgetExceededError('matchings', max_matchings)
            return
        e = left.edges[k]
        for j, h in enumerate(host_edges):
            if (h.label != e.label or h.value != e.value or
                    len(h.sources) != len(e.sources) or
                    len(h.targets) != len(e.targets)):
                continue
            new = dict(vmap)
            ok = True
            for u, v in zip(e.sources + e.targets, h.sources + h.targets):
                if new.setdefault(u, v) != v:
                    ok = False
                    break
            if ok:
                _extend(k + 1, new, emap + [j])

    _extend(0, {}, [])
    return found


def _conditions(rule, match, g):
    """No-dangling and no-identification conditions."""
    left = rule.left
    boundary = set(left.outputs)
    glued = set(match.vertices[u] for u in boundary)
    image = set(match.vertices)
    matched_edges = set(match.edges)
    # no identification
    if len(matched_edges) != len(match.edges):
        return False
    seen = {}
    for u, v in enumerate(match.vertices):
        if v in seen and not (u in boundary and seen[v] in boundary):
            return False
        seen.setdefault(v, u)
    # no dangling
    removed = image - glued
    for j, e in enumerate(g.edges):
        if j not in matched_edges and removed.intersection(
                e.sources + e.targets):
            return False
    return not removed.intersection(_folded(g))


def _set_partitions(items):
    """Set partitions of a list, in a fixed order."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]


def pushout_complements(rule, match, g, max_complements=MAX_COMPLEMENTS):
    """All pushout complements of a matching.

    The exploded context keeps the unmatched edges and splits every
    glued host vertex into one element per rule boundary position, per
    tentacle of an unmatched edge and per host interface position. A
    complement identifies elements of the same host vertex only, and is
    kept when gluing the left-hand graph back yields the host.

    Parameters
    ----------
    rule : DpoRule
        The rule.

    match : Matching
        A homomorphism from ``rule.left`` into ``g``.

    g : InterfacedHypergraph
        The host cospan.

    max_complements : int, optional
        Budget on the number of complements.

    Returns
    -------
    complements : list of Complement
        Empty when the matching violates the no-dangling or the
        no-identification condition.
    """
    if not _conditions(rule, match, g):
        return []
    left = rule.left
    a = left.outputs
    glued = sorted(set(match.vertices[u] for u in a))
    image = set(match.vertices)
    kept = [j for j in range(len(g.edges)) if j not in set(match.edges)]
    host_boundary = _folded(g)

    fibers = {v: [] for v in glued}
    for k, u in enumerate(a):
        fibers[match.vertices[u]].append(('b', k))
    for j in kept:
        e = g.edges[j]
        for side, ends in (('s', e.sources), ('t', e.targets)):
            for p, v in enumerate(ends):
                if v in fibers:
                    fibers[v].append((side, j, p))
    for pos, v in enumerate(host_boundary):
        if v in fibers:
            fibers[v].append(('d', pos))

    choices = []
    for v in glued:
        valid = []
        for blocks in _set_partitions(fibers[v]):
            if _reconnects(blocks, a):
                valid.append(blocks)
        choices.append(valid)
    total = int(np.prod([len(c) for c in choices])) if choices else 1
    if total > max_complements:
        raise BudgetExceededError('pushout complements', max_complements)

    others = [v for v in range(g.n_vertices)
              if v not in image]
    complements = []
    for pick in product(*choices):
        element, host = {}, []
        for v in others:
            element[('v', v)] = len(host)
            host.append(v)
        for v, blocks in zip(glued, pick):
            for block in blocks:
                for item in block:
                    element[item] = len(host)
                host.append(v)

        def _end(j, side, p, v):
            key = (side, j, p)
            return element[key] if key in element else element[('v', v)]
        edges = [Edge(g.edges[j].label,
                      [_end(j, 's', p, v)
                       for p, v in enumerate(g.edges[j].sources)],
                      [_end(j, 't', p, v)
                       for p, v in enumerate(g.edges[j].targets)],
                      g.edges[j].value) for j in kept]
        interface = tuple(element[('d', pos)] if ('d', pos) in element
                          else element[('v', v)]
                          for pos, v in enumerate(host_boundary))
        boundary = tuple(element[('b', k)] for k in range(len(a)))
        complements.append(Complement(Hypergraph(len(host), edges),
                                      boundary, interface, tuple(host)))
    return complements


def _reconnects(blocks, a):
    """Whether gluing the rule boundary makes a fiber a single vertex."""
    ds = DisjointSet([('B', n) for n in range(len(blocks))])
    for n, block in enumerate(blocks):
        for item in block:
            if item[0] == 'b':
                node = ('L', a[item[1]])
                if node not in ds:
                    ds.add(node)
                ds.merge(('B', n), node)
    return ds.n_subsets == 1


def filter_boundary(complements, rule, g, mode='traced'):
    """Keep the complements valid in a fragment.

    The boundary legs ``c1: i -> C`` and ``c2: j -> C`` must be injective
    (only ``c2`` in 'traced_comonoid' mode) and the rotated cospan
    ``j + m -> C <- n + i`` must pass the fragment's validator.

    Parameters
    ----------
    complements : list of Complement
        Output of :func:`pushout_complements`.

    rule : DpoRule
        The rule.

    g : InterfacedHypergraph
        The host cospan.

    mode : 'frobenius' | 'smc' | 'traced' | 'traced_comonoid', optional
        Fragment. In 'frobenius' mode every complement is kept.

    Returns
    -------
    complements : list of Complement
        The boundary complements, in input order.
    """
    if mode not in BOUNDARY_MODES:
        raise ValueError("Unsupported mode %s" % mode)
    if mode == 'frobenius':
        return list(complements)
    validator = {'smc': check_monogamous_acyclic,
                 'traced': check_partial_monogamous,
                 'traced_comonoid': check_partial_left_monogamous}[mode]
    i, m = rule.n_inputs, len(g.inputs)
    kept = []
    for comp in complements:
        c1, c2 = comp.boundary[:i], comp.boundary[i:]
        d1, d2 = comp.interface[:m], comp.interface[m:]
        if len(set(c2)) != len(c2):
            continue
        if mode != 'traced_comonoid' and len(set(c1)) != len(c1):
            continue
        rotated = InterfacedHypergraph(comp.graph, c2 + d1, d2 + c1)
        if validator(rotated):
            kept.append(comp)
    return kept


def rewrite(rule, match, complement, g):
    """Glue the right-hand side of a rule into a complement.

    Parameters
    ----------
    rule : DpoRule
        The rule.

    match : Matching
        The matching the complement was built from.

    complement : Complement
        A pushout complement of ``match``.

    g : InterfacedHypergraph
        The host cospan, giving the outer interface split.

    Returns
    -------
    h : InterfacedHypergraph
        The rewritten ``m -> n`` cospan.
    """
    ctx, right = complement.graph, rule.right
    off = ctx.n_vertices
    edges = list(ctx.edges) + [
        Edge(e.label, [v + off for v in e.sources],
             [v + off for v in e.targets], e.value) for e in right.edges]
    pairs = [(c, r + off) for c, r in zip(complement.boundary,
                                         right.outputs)]
    m = len(g.inputs)
    h, _ = quotient(off + right.n_vertices, edges,
                    complement.interface[:m], complement.interface[m:],
                    pairs)
    return h


def rewrite_all(rule, g, mode='traced', max_matchings=MAX_MATCHINGS,
                max_complements=MAX_COMPLEMENTS):
    """Every rewrite of a host by a rule.

    Parameters
    ----------
    rule : DpoRule
        The rule.

    g : InterfacedHypergraph
        The host cospan.

    mode : 'frobenius' | 'smc' | 'traced' | 'traced_comonoid', optional
        Fragment used to filter complements.

    max_matchings : int, optional
        Budget on matchings.

    max_complements : int, optional
        Budget on complements per matching.

    Returns
    -------
    results : list of InterfacedHypergraph
        Rewritten cospans, one per isomorphism class, in enumeration
        order.
    """
    results = []
    for match in find_matchings(rule, g, max_matchings=max_matchings):
        comps = pushout_complements(rule, match, g,
                                    max_complements=max_complements)
        for comp in filter_boundary(comps, rule, g, mode=mode):
            h = rewrite(rule, match, comp, g)
            if not any(cospan_iso(h, other) is not None
                       for other in results):
                results.append(h)
    return results


def _windows(term, lhs, rhs):
    """Terms obtained by replacing one occurrence of ``lhs``."""
    out = []
    if term == lhs:
        out.append(rhs)
    if term.kind in (C.SEQ, C.PAR):
        join = C.compose if term.kind == C.SEQ else C.tensor
        children = list(term.children)
        for start in range(len(children)):
            for stop in range(start + 2, len(children) + 1):
                if (stop - start < len(children) and
                        join(*children[start:stop]) == lhs):
                    out.append(join(*(children[:start] + [rhs] +
                                      children[stop:])))
        for k, child in enumerate(children):
            for new in _windows(child, lhs, rhs):
                out.append(join(*(children[:k] + [new] +
                                  children[k + 1:])))
    elif term.kind == C.TRACE:
        for new in _windows(term.children[0], lhs, rhs):
            out.append(C.trace(term.params[0], new))
    return out


def term_rewrites(rule, term):
    """One-step syntactic rewrites of a term.

    An occurrence is a subterm, a window of consecutive factors of a
    composite or a block of consecutive factors of a tensor that is
    structurally equal to the left-hand side.

    Parameters
    ----------
    rule : DpoRule
        The rule.

    term : Circuit
        The host term.

    Returns
    -------
    terms : list of Circuit
        Distinct results in discovery order.
    """
    seen, out = set(), []
    for t in _windows(term, rule.lhs, rule.rhs):
        if t not in seen:
            seen.add(t)
            out.append(t)
    return out


def verify_rule_sound(lhs, rhs, interp, max_pairs=MAX_PAIRS,
                      return_witness=False):
    """Whether both sides of a rule denote the same machine.

    Parameters
    ----------
    lhs : Circuit
        Left-hand term.

    rhs : Circuit
        Right-hand term.

    interp : Interpretation
        Meaning of the primitives.

    max_pairs : int, optional
        Budget on explored state pairs.

    return_witness : bool, optional
        If True, also return a distinguishing waveform or None.

    Returns
    -------
    sound : bool
        The verdict.

    witness : Waveform | None
        Only returned when ``return_witness`` is True.
    """
    if lhs.arity != rhs.arity:
        raise ArityError("Rule sides have arities %s and %s"
                         % (lhs.arity, rhs.arity))
    witness = distinguishing_waveform(circuit_to_mealy(lhs, interp),
                                      circuit_to_mealy(rhs, interp),
                                      max_pairs=max_pairs)
    if return_witness:
        return witness is None, witness
    return witness is None


def _fork_guard(match, g):
    # only productive when the copied vertex is used more than once
    v = match.vertices[0]
    uses = sum(e.sources.count(v) for e in g.edges) + g.outputs.count(v)
    return uses > 1


def value_rules(interp):
    """Value rules as DPO rules.

    A value word entering a gate becomes the gate's image, a value
    entering a fork is copied, two values entering a join are joined and
    a value entering an elim disappears.

    Parameters
    ----------
    interp : Interpretation
        Meaning of the primitives.

    Returns
    -------
    rules : list of DpoRule
        One rule per generator and input word. The fork rule only matches
        values used more than once.
    """
    lattice = interp.lattice
    names = lattice.names
    rules = []
    for name in sorted(interp.semantics):
        table = interp.semantics[name]
        gate = C.primitive(name, table.n_inputs, table.n_outputs)
        for word in all_words(lattice.size, table.n_inputs):
            word = tuple(int(v) for v in word)
            rules.append(DpoRule(
                C.compose(C.value(word), gate), C.value(table(*word)),
                name="%s(%s)" % (name, ''.join(names[v] for v in word))))
    for v in range(lattice.size):
        rules.append(DpoRule(C.compose(C.value((v,)), C.fork()),
                             C.value((v, v)), name="fork(%s)" % names[v],
                             guard=_fork_guard))
        rules.append(DpoRule(C.compose(C.value((v,)), C.elim()),
                             C.identity(0), name="elim(%s)" % names[v]))
        for w in range(lattice.size):
            rules.append(DpoRule(
                C.compose(C.value((v, w)), C.join()),
                C.value((int(lattice.join_table[v, w]),)),
                name="join(%s%s)" % (names[v], names[w])))
    return rules


def streaming_rules(term, words):
    """Streaming of a combinational term, one rule per value word.

    A register holding ``word`` in front of ``term`` becomes two copies
    of ``term``: one reads the word and gives the outputs of the current
    tick, the other reads the delayed inputs.

    Parameters
    ----------
    term : Circuit
        A combinational term ``m -> n``.

    words : iterable of sequence of int
        Value words of length ``m``.

    Returns
    -------
    rules : list of DpoRule
        ``register(word) ; term -> ((term ; delay) * (word ; term)) ;
        joins``, in the order of ``words``.
    """
    if not C.is_combinational(term):
        raise ValueError("Streaming needs a combinational term")
    m, n = term.arity
    rules = []
    for word in words:
        word = tuple(int(v) for v in word)
        if len(word) != m:
            raise ArityError("Term has %d inputs, word has length %d"
                             % (m, len(word)))
        now = C.compose(C.value(word), term)
        later = C.compose(term, C.delay(n))
        rules.append(DpoRule(
            C.compose(C.register(word), term),
            C.compose(C.tensor(later, now), C.joins(n)),
            name="stream(%s)" % ','.join(map(str, word))))
    return rules


def cartesian_rules(name, n_inputs, n_outputs):
    """Copy and discard naturality of a gate.

    Parameters
    ----------
    name : str
        The primitive.

    n_inputs : int
        Its arity.

    n_outputs : int
        Its coarity.

    Returns
    -------
    rules : list of DpoRule
        ``gate ; copy -> copy ; (gate * gate)`` and
        ``gate ; discard -> discard``.
    """
    gate = C.primitive(name, n_inputs, n_outputs)
    copy = DpoRule(C.compose(gate, C.fork_bus(n_outputs, 2)),
                   C.compose(C.fork_bus(n_inputs, 2), C.tensor(gate, gate)),
                   name="copy(%s)" % name)
    discard = DpoRule(C.compose(gate, C.elims(n_outputs)),
                      C.elims(n_inputs), name="discard(%s)" % name)
    return [copy, discard]


def mealy_transform(c, interp):
    """Put a circuit cospan in Mealy form.

    Parameters
    ----------
    c : InterfacedHypergraph
        A partial left-monogamous cospan.

    interp : Interpretation
        Provides the lattice height used to unroll instant feedback.

    Returns
    -------
    h : InterfacedHypergraph
        The cospan of the Mealy form, a register fed back into a
        combinational core.

    state : list of int
        Vertices carrying the register, one per state letter.
    """
    form = to_mealy_form(extract_term(c, mode='traced_comonoid'), interp)
    k = len(form.state)
    body = term_to_cospan(C.compose(
        C.tensor(C.register(form.state), C.identity(form.n_inputs)),
        form.core), absorb='comonoid')
    pairs = list(zip(body.inputs[:k], body.outputs[:k]))
    h, relabel = quotient(body.n_vertices, body.edges, body.inputs[k:],
                          body.outputs[k:], pairs)
    return h, [int(relabel[v]) for v in body.inputs[:k]]
