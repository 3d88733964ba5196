# License: BSD 3 clause
"""The circuit language.

A source file holds one or more circuits::

    # SR latch
    circuit sr_latch(r, s) -> (q, fb) {
        feedback fb;
        or1 = OR(r, fb);
        q = delay(NOT(or1));
        or2 = OR(q, s);
        fb = NOT(or2);
    }

Wires are defined once and used after their definition, except feedback
wires, which may be used anywhere and are bound by exactly one statement.
Calls are primitives of the interpretation, earlier circuits of the same
file, or the builtins ``delay``, ``join``, ``intro``, ``value`` and
``wave``. A bare value name as an argument is that value held forever and
``{t, f}`` is an uncertain value held forever. Gates outside the
interpretation can be declared at top level, ``gate e1 : 1 -> 1;``, for
structural work such as rewriting.
"""

import re
from collections import Counter, namedtuple

import networkx as nx

from . import circuit as C
from .hypergraph import term_to_cospan
from .interp import belnap
from .exceptions import ArityError, CircuitSyntaxError

KEYWORDS = ('circuit', 'feedback', 'gate')
BUILTINS = ('delay', 'join', 'intro', 'value', 'wave')

Token = namedtuple('Token', ['kind', 'text', 'line', 'col'])
Wire = namedtuple('Wire', ['name', 'line', 'col'])
Literal = namedtuple('Literal', ['words', 'uncertain', 'line', 'col'])
Call = namedtuple('Call', ['name', 'args', 'line', 'col'])
Statement = namedtuple('Statement', ['targets', 'expr', 'line', 'col'])
CircuitDef = namedtuple('CircuitDef', ['name', 'inputs', 'outputs',
                                       'feedback', 'statements', 'line',
                                       'col'])

_TOKEN_RE = re.compile(r"""
    (?P<comment>\#[^\n]*)
  | (?P<arrow>->)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<int>[0-9]+)
  | (?P<punct>[(){},;=:])
  | (?P<newline>\n)
  | (?P<space>[ \t\r]+)
  | (?P<error>.)
""", re.VERBOSE)


def tokenize(text):
    """Split source text into tokens.

    Parameters
    ----------
    text : str
        Source text.

    Returns
    -------
    tokens : list of Token
        Tokens with 1-based positions, ending with an 'eof' token.
    """
    tokens = []
    line, start = 1, 0
    for match in _TOKEN_RE.finditer(text):
        kind = match.lastgroup
        col = match.start() - start + 1
        if kind == 'newline':
            line += 1
            start = match.end()
        elif kind == 'error':
            raise CircuitSyntaxError("unexpected character %r"
                                     % match.group(), line, col)
        elif kind not in ('space', 'comment'):
            tokens.append(Token(kind, match.group(), line, col))
    tokens.append(Token('eof', '', line, len(text) - start + 1))
    return tokens


class CircuitSource:
    """Parsed circuits of one source file, in definition order.

    Parameters
    ----------
    circuits : list of CircuitDef
        The definitions.

    gates : dict of str to (int, int), optional
        Declared uninterpreted gates and their arities.
    """

    def __init__(self, circuits, gates=None):
        self.circuits = list(circuits)
        self.gates = dict(gates or {})
        names = [c.name for c in self.circuits]
        for c in self.circuits:
            if names.count(c.name) > 1:
                raise CircuitSyntaxError("circuit %s defined twice" % c.name,
                                         c.line, c.col)

    def names(self):
        """Names of the circuits.

        Returns
        -------
        names : list of str
            In definition order.
        """
        return [c.name for c in self.circuits]

    def __repr__(self):
        return "CircuitSource(%s)" % ', '.join(self.names())


class _Parser:

    def __init__(self, text):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self):
        return self.tokens[self.pos]

    def _error(self, msg, tok=None):
        tok = tok or self.tok
        return CircuitSyntaxError(msg, tok.line, tok.col)

    def accept(self, text):
        if self.tok.kind != 'eof' and self.tok.text == text:
            self.pos += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            found = self.tok.text or 'end of file'
            raise self._error("expected '%s', found '%s'" % (text, found))

    def name(self):
        tok = self.tok
        if tok.kind != 'name':
            raise self._error("expected a name, found '%s'"
                              % (tok.text or 'end of file'))
        if tok.text in KEYWORDS:
            raise self._error("'%s' is a keyword" % tok.text)
        self.pos += 1
        return tok

    def names(self, closing):
        out = []
        if self.tok.text == closing:
            return out
        out.append(self.name())
        while self.accept(','):
            out.append(self.name())
        return out

    def source(self):
        circuits, gates = [], {}
        while self.tok.kind != 'eof':
            if self.accept('gate'):
                tok = self.name()
                self.expect(':')
                n_inputs = self.integer()
                self.expect('->')
                gates[tok.text] = (n_inputs, self.integer())
                self.accept(';')
            else:
                circuits.append(self.circuit())
        return CircuitSource(circuits, gates)

    def integer(self):
        tok = self.tok
        if tok.kind != 'int':
            raise self._error("expected a number, found '%s'"
                              % (tok.text or 'end of file'))
        self.pos += 1
        return int(tok.text)

    def circuit(self):
        start = self.tok
        self.expect('circuit')
        name = self.name().text
        self.expect('(')
        inputs = self.names(')')
        self.expect(')')
        self.expect('->')
        self.expect('(')
        outputs = self.names(')')
        self.expect(')')
        self.expect('{')
        feedback, statements = [], []
        while not self.accept('}'):
            if self.tok.kind == 'eof':
                raise self._error("missing '}' closing circuit %s" % name)
            if self.accept('feedback'):
                feedback.extend(self.names(';'))
            else:
                first = self.tok
                targets = [self.name()]
                while self.accept(','):
                    targets.append(self.name())
                self.expect('=')
                statements.append(Statement(targets, self.expr(),
                                            first.line, first.col))
            self.accept(';')
        return CircuitDef(name, inputs, outputs, feedback, statements,
                          start.line, start.col)

    def expr(self):
        tok = self.tok
        if self.accept('{'):
            return self.uncertain(tok)
        if self.accept('('):
            words = [self.name()]
            while self.accept(','):
                words.append(self.name())
            self.expect(')')
            return Literal(((tuple(w.text for w in words)),), False,
                           tok.line, tok.col)
        name = self.name()
        if self.accept('('):
            args = []
            if self.tok.text != ')':
                args.append(self.expr())
                while self.accept(','):
                    args.append(self.expr())
            self.expect(')')
            return Call(name.text, args, name.line, name.col)
        return Wire(name.text, name.line, name.col)

    def uncertain(self, tok):
        alts = [self.expr()]
        while self.accept(','):
            alts.append(self.expr())
        self.expect('}')
        words = []
        for alt in alts:
            if isinstance(alt, Wire):
                words.append((alt.name,))
            elif isinstance(alt, Literal) and not alt.uncertain:
                words.extend(alt.words)
            else:
                raise CircuitSyntaxError("alternatives must be values",
                                         alt.line, alt.col)
        return Literal(tuple(words), True, tok.line, tok.col)


def parse(text):
    """Parse circuit-language source.

    Parameters
    ----------
    text : str
        Source text.

    Returns
    -------
    source : CircuitSource
        The circuit definitions, not yet elaborated.
    """
    return _Parser(text).source()


class _Node:
    __slots__ = ('targets', 'term', 'args', 'line', 'col')

    def __init__(self, targets, term, args, line, col):
        self.targets, self.term, self.args = targets, term, args
        self.line, self.col = line, col


class _Elaborator:

    def __init__(self, interp, gates, library):
        self.interp = interp
        self.gates = gates
        self.lattice_names = interp.lattice.names
        self.library = library
        self.nodes = []
        self.n_anon = 0

    def letters(self, words, line, col):
        out = []
        for word in words:
            try:
                out.append(tuple(self.interp.parse_value(v) for v in word))
            except ValueError:
                raise CircuitSyntaxError("unknown value in %s"
                                         % ', '.join(word), line, col)
        return out

    def anon(self):
        self.n_anon += 1
        return '%%%d' % self.n_anon

    def constant(self, lit, forever):
        words = self.letters(lit.words, lit.line, lit.col)
        if lit.uncertain:
            try:
                return C.uncertain(words, forever=forever)
            except ArityError as err:
                raise CircuitSyntaxError(str(err), lit.line, lit.col)
        word = words[0]
        return C.waveform(word) if forever else C.value(word)

    def gate(self, call, n_args):
        name = call.name
        if name == 'delay':
            return C.delay(n_args)
        if name == 'join':
            return C.join()
        if name == 'intro':
            return C.intro()
        if name in self.interp.semantics:
            table = self.interp.semantics[name]
            return C.primitive(name, table.n_inputs, table.n_outputs)
        if name in self.gates:
            return C.primitive(name, *self.gates[name])
        if name in self.library:
            return self.library[name]
        raise CircuitSyntaxError("unknown gate or circuit %s" % name,
                                 call.line, call.col)

    def flatten(self, expr, targets):
        """Append nodes computing ``expr`` into ``targets``."""
        if isinstance(expr, Wire):
            if expr.name in self.lattice_names:
                expr = Literal(((expr.name,),), False, expr.line, expr.col)
            else:
                if targets is None:
                    return [expr.name]
                raise CircuitSyntaxError("a statement needs a call or a "
                                         "value", expr.line, expr.col)
        if isinstance(expr, Literal):
            term = self.constant(expr, forever=True)
            args = []
        elif expr.name in ('value', 'wave'):
            lits = [Literal(((a.name,),), False, a.line, a.col)
                    if isinstance(a, Wire) else a for a in expr.args]
            if not lits or not all(isinstance(a, Literal) for a in lits):
                raise CircuitSyntaxError("%s takes values" % expr.name,
                                         expr.line, expr.col)
            if len(lits) == 1:
                lit = lits[0]
            elif any(a.uncertain for a in lits):
                raise CircuitSyntaxError("an uncertain %s takes a single "
                                         "argument" % expr.name,
                                         expr.line, expr.col)
            else:
                lit = Literal((sum((a.words[0] for a in lits), ()),), False,
                              expr.line, expr.col)
            term = self.constant(lit, forever=expr.name == 'wave')
            args = []
        else:
            args = []
            for a in expr.args:
                args.extend(self.flatten(a, None))
            term = self.gate(expr, len(args))
        if term.n_inputs != len(args):
            raise CircuitSyntaxError(
                "%s takes %d inputs, got %d"
                % (getattr(expr, 'name', 'value'), term.n_inputs, len(args)),
                expr.line, expr.col)
        if targets is None:
            if term.n_outputs != 1:
                raise CircuitSyntaxError(
                    "nested call has %d outputs, expected 1"
                    % term.n_outputs, expr.line, expr.col)
            targets = [self.anon()]
        elif term.n_outputs != len(targets):
            raise CircuitSyntaxError("%d wires bound to a call with %d "
                                     "outputs" % (len(targets),
                                                  term.n_outputs),
                                     expr.line, expr.col)
        self.nodes.append(_Node(targets, term, args, expr.line, expr.col))
        return targets


def _check_wires(cdef, nodes, lattice_names):
    feedback = set(tok.text for tok in cdef.feedback)
    for tok in cdef.inputs + cdef.feedback:
        if tok.text in lattice_names:
            raise CircuitSyntaxError("%s is reserved" % tok.text,
                                     tok.line, tok.col)
    defined = set(feedback)
    for tok in cdef.inputs:
        if tok.text in defined:
            raise CircuitSyntaxError("wire %s defined twice" % tok.text,
                                     tok.line, tok.col)
        defined.add(tok.text)
    bound = Counter()
    for node in nodes:
        for w in node.args:
            if w not in defined:
                raise CircuitSyntaxError("undefined wire %s" % w,
                                         node.line, node.col)
        for w in node.targets:
            if w in lattice_names or w in BUILTINS:
                raise CircuitSyntaxError("%s is reserved" % w,
                                         node.line, node.col)
            if w in feedback:
                bound[w] += 1
                if bound[w] > 1:
                    raise CircuitSyntaxError("feedback %s bound twice" % w,
                                             node.line, node.col)
            elif w in defined:
                raise CircuitSyntaxError("wire %s defined twice" % w,
                                         node.line, node.col)
            else:
                defined.add(w)
    for tok in cdef.feedback:
        if not bound[tok.text]:
            raise CircuitSyntaxError("unbound feedback %s" % tok.text,
                                     tok.line, tok.col)
    for tok in cdef.outputs:
        if tok.text not in defined:
            raise CircuitSyntaxError("undefined wire %s" % tok.text,
                                     tok.line, tok.col)


def _route(bus, wanted, uses_left):
    """Fan the bus out to ``wanted`` followed by the wires still needed."""
    need = Counter(wanted)
    fans, copies = [], []
    kept = []
    for w in bus:
        k = need[w]
        uses_left[w] -= k
        keep = uses_left[w] > 0
        fans.append(C.fork_bus(1, k + keep))
        copies.extend([w] * (k + keep))
        if keep:
            kept.append(w)
    free = {}
    for pos, w in enumerate(copies):
        free.setdefault(w, []).append(pos)
    order = [free[w].pop(0) for w in wanted] + [free[w].pop(0)
                                                for w in kept]
    return C.compose(C.tensor(*fans), C.permutation(order)), kept


def _assemble(cdef, nodes):
    feedback = [tok.text for tok in cdef.feedback]
    rename = {w: '%%%s' % w for w in feedback}
    for node in nodes:
        node.targets = [rename.get(w, w) for w in node.targets]
    final = [rename[w] for w in feedback] + [t.text for t in cdef.outputs]
    uses_left = Counter(final)
    for node in nodes:
        uses_left.update(node.args)
    bus = feedback + [t.text for t in cdef.inputs]
    layers = []
    for node in nodes:
        wiring, kept = _route(bus, node.args, uses_left)
        layers.append(C.compose(wiring, C.tensor(node.term,
                                                 C.identity(len(kept)))))
        bus = node.targets + kept
    wiring, kept = _route(bus, final, uses_left)
    layers.append(wiring)
    return C.trace(len(feedback), C.compose(*layers))


def elaborate(source, interp=None, name=None):
    """Turn a parsed circuit into a term.

    Statements are composed in order over a bus of live wires: wires
    used several times are forked in use order, unused wires are
    discarded, and feedback wires are traced.

    Parameters
    ----------
    source : CircuitSource
        Parsed source.

    interp : Interpretation, optional
        Primitives and value names, Belnap by default.

    name : str, optional
        Circuit to elaborate, the last one by default. Earlier circuits
        can be called from later ones.

    Returns
    -------
    term : Circuit
        The circuit term.
    """
    interp = belnap() if interp is None else interp
    if not source.circuits:
        raise CircuitSyntaxError("no circuit defined")
    if name is None:
        name = source.circuits[-1].name
    if name not in source.names():
        raise ValueError("No circuit named %s" % name)
    library = {}
    for cdef in source.circuits:
        elab = _Elaborator(interp, source.gates, library)
        for stmt in cdef.statements:
            elab.flatten(stmt.expr, [t.text for t in stmt.targets])
        _check_wires(cdef, elab.nodes, interp.lattice.names)
        library[cdef.name] = _assemble(cdef, elab.nodes)
        if cdef.name == name:
            return library[name]


def loads(text, interp=None, name=None):
    """Parse and elaborate circuit-language source.

    Parameters
    ----------
    text : str
        Source text.

    interp : Interpretation, optional
        Primitives and value names, Belnap by default.

    name : str, optional
        Circuit to elaborate, the last one by default.

    Returns
    -------
    term : Circuit
        The circuit term.
    """
    return elaborate(parse(text), interp=interp, name=name)


def load(path, interp=None, name=None):
    """Read a circuit from a file.

    Parameters
    ----------
    path : str
        Path of a circuit-language file.

    interp : Interpretation, optional
        Primitives and value names, Belnap by default.

    name : str, optional
        Circuit to elaborate, the last one by default.

    Returns
    -------
    term : Circuit
        The circuit term.
    """
    with open(path) as f:
        return loads(f.read(), interp=interp, name=name)


def _word(word, names):
    if len(word) == 1:
        return names[word[0]]
    return '(%s)' % ', '.join(names[v] for v in word)


def to_source(term, interp=None, name='main'):
    """Print a term in the circuit language.

    Generators are listed in dependency order; a wire read before the
    statement that binds it is declared as feedback.

    Parameters
    ----------
    term : Circuit
        The circuit.

    interp : Interpretation, optional
        Provides value names, Belnap by default.

    name : str, optional
        Name of the printed circuit.

    Returns
    -------
    text : str
        Source that elaborates to a circuit with the same behaviour.
    """
    interp = belnap() if interp is None else interp
    names = interp.lattice.names
    c = term_to_cospan(term, absorb='comonoid')
    wire = {}
    for k, v in enumerate(c.inputs):
        wire.setdefault(v, 'i%d' % k)
    driver = {v: j for j, e in enumerate(c.edges) for v in e.targets}
    for v in range(c.n_vertices):
        wire.setdefault(v, 'w%d' % v)

    deps = nx.DiGraph()
    deps.add_nodes_from(range(len(c.edges)))
    for j, e in enumerate(c.edges):
        deps.add_edges_from((driver[v], j) for v in e.sources
                            if v in driver)
    cond = nx.condensation(deps)
    order = []
    for scc in nx.lexicographical_topological_sort(
            cond, key=lambda s: min(cond.nodes[s]['members'])):
        order.extend(sorted(cond.nodes[scc]['members']))

    lines, emitted, feedback = [], set(c.inputs), []
    for v in range(c.n_vertices):
        if v not in driver and v not in emitted:
            lines.append("%s = intro();" % wire[v])
            emitted.add(v)
    for j in order:
        e = c.edges[j]
        for v in e.sources:
            if v not in emitted and wire[v] not in feedback:
                feedback.append(wire[v])
        args = ', '.join(wire[v] for v in e.sources)
        if e.label in ('value', 'waveform'):
            call = "%s(%s)" % ('value' if e.label == 'value' else 'wave',
                               names[e.value])
        elif e.label.startswith('uncertain'):
            call = "%s({%s})" % (
                'wave' if e.label == 'uncertain_waveform' else 'value',
                ', '.join(_word(w, names) for w in e.value))
        else:
            call = "%s(%s)" % (e.label, args)
        lines.append("%s = %s;" % (', '.join(wire[v] for v in e.targets),
                                   call))
        emitted.update(e.targets)
    header = "circuit %s(%s) -> (%s) {" % (
        name, ', '.join('i%d' % k for k in range(len(c.inputs))),
        ', '.join(wire[v] for v in c.outputs))
    structural = ('join', 'intro', 'delay', 'value', 'waveform',
                  'uncertain_value', 'uncertain_waveform')
    decls = []
    for e in c.edges:
        if e.label in structural or e.label in interp.semantics:
            continue
        decl = "gate %s : %d -> %d;" % (e.label, len(e.sources),
                                         len(e.targets))
        if decl not in decls:
            decls.append(decl)
    body = []
    if feedback:
        body.append("feedback %s;" % ', '.join(feedback))
    body.extend(lines)
    return '\n'.join(decls + [header] + ['    ' + b for b in body] +
                     ['}', ''])
