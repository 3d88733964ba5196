# License: BSD 3 clause
"""Term representation of combinational and sequential circuits.

Terms are immutable trees built with the constructors of this module.
Sequential composition and tensor keep flattened child lists, traced
wires are the first ``x`` inputs and outputs of the body.
"""

from .exceptions import ArityError

PRIMITIVE = 'primitive'
ID = 'id'
SYMMETRY = 'symmetry'
FORK = 'fork'
JOIN = 'join'
INTRO = 'intro'
ELIM = 'elim'
VALUE = 'value'
DELAY = 'delay'
SEQ = 'seq'
PAR = 'par'
TRACE = 'trace'
# extended node kinds used by partial evaluation
WAVEFORM = 'waveform'
UNCERTAIN = 'uncertain'

GENERATORS = (FORK, JOIN, INTRO, ELIM)


class Circuit:
    """Node of a circuit term.

    Use the module-level constructors rather than this class directly,
    they check arities and normalise nesting.

    Parameters
    ----------
    kind : str
        One of the node kind constants of this module.

    params : tuple
        Kind-specific data (primitive name, widths, value word).

    children : tuple of Circuit
        Sub-terms, for sequential, parallel and traced nodes.

    n_inputs : int
        Number of input wires.

    n_outputs : int
        Number of output wires.
    """

    __slots__ = ('kind', 'params', 'children', 'n_inputs', 'n_outputs',
                 '_hash')

    def __init__(self, kind, params, children, n_inputs, n_outputs):
        self.kind = kind
        self.params = tuple(params)
        self.children = tuple(children)
        self.n_inputs = n_inputs
        self.n_outputs = n_outputs
        self._hash = None

    @property
    def arity(self):
        return self.n_inputs, self.n_outputs

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, Circuit) and self.kind == other.kind
                and self.params == other.params
                and self.n_inputs == other.n_inputs
                and self.n_outputs == other.n_outputs
                and self.children == other.children)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.kind, self.params, self.children,
                               self.n_inputs, self.n_outputs))
        return self._hash

    def __repr__(self):
        kind, p = self.kind, self.params
        if kind == PRIMITIVE:
            return p[0]
        if kind == ID:
            return "Id(%d)" % p[0]
        if kind == SYMMETRY:
            return "Sym(%d,%d)" % p
        if kind in GENERATORS:
            return kind.capitalize()
        if kind == VALUE:
            return "Val(%s)" % ','.join(map(str, p))
        if kind == WAVEFORM:
            return "Wave(%s)" % ','.join(map(str, p))
        if kind == UNCERTAIN:
            alts = '|'.join(','.join(map(str, w)) for w in p[0])
            return "%s{%s}" % ("UWave" if p[1] else "UVal", alts)
        if kind == DELAY:
            return "Delay(%d)" % p[0]
        if kind == SEQ:
            return "(%s)" % ' ; '.join(map(repr, self.children))
        if kind == PAR:
            return "(%s)" % ' * '.join(map(repr, self.children))
        return "Tr%d(%r)" % (p[0], self.children[0])


def primitive(name, n_inputs, n_outputs):
    """Primitive gate.

    Parameters
    ----------
    name : str
        Name of the primitive in the signature.

    n_inputs : int
        Arity.

    n_outputs : int
        Coarity.

    Returns
    -------
    term : Circuit
        The gate.
    """
    if n_inputs < 0 or n_outputs < 0:
        raise ArityError("Negative arity for %s" % name)
    return Circuit(PRIMITIVE, (name,), (), n_inputs, n_outputs)


def identity(n):
    """Identity on ``n`` wires.

    Parameters
    ----------
    n : int
        Number of wires.

    Returns
    -------
    term : Circuit
        The identity.
    """
    return Circuit(ID, (n,), (), n, n)


def symmetry(m, n):
    """Swap a bundle of ``m`` wires with a bundle of ``n`` wires.

    Parameters
    ----------
    m : int
        Width of the first bundle.

    n : int
        Width of the second bundle.

    Returns
    -------
    term : Circuit
        The symmetry ``m + n -> n + m``.
    """
    if m == 0 or n == 0:
        return identity(m + n)
    return Circuit(SYMMETRY, (m, n), (), m + n, m + n)


def fork():
    """Copy one wire into two."""
    return Circuit(FORK, (), (), 1, 2)


def join():
    """Join two wires into one."""
    return Circuit(JOIN, (), (), 2, 1)


def intro():
    """Wire that carries bottom forever."""
    return Circuit(INTRO, (), (), 0, 1)


def elim():
    """Discard a wire."""
    return Circuit(ELIM, (), (), 1, 0)


def value(word):
    """Instantaneous values, emitted on the first tick only.

    Parameters
    ----------
    word : sequence of int
        One value index per output wire.

    Returns
    -------
    term : Circuit
        The value generator; the empty word gives ``identity(0)``.
    """
    word = tuple(int(v) for v in word)
    if not word:
        return identity(0)
    return Circuit(VALUE, word, (), 0, len(word))


def delay(n=1):
    """Delay of ``n`` wires by one tick.

    Parameters
    ----------
    n : int, optional
        Number of wires.

    Returns
    -------
    term : Circuit
        The delay.
    """
    if n == 0:
        return identity(0)
    return Circuit(DELAY, (n,), (), n, n)


def waveform(word):
    """Constant infinite waveform, one value per wire held forever.

    Parameters
    ----------
    word : sequence of int
        The values.

    Returns
    -------
    term : Circuit
        The waveform generator.
    """
    word = tuple(int(v) for v in word)
    if not word:
        return identity(0)
    return Circuit(WAVEFORM, word, (), 0, len(word))


def uncertain(alternatives, forever=False):
    """Uncertain value or waveform.

    Parameters
    ----------
    alternatives : sequence of sequence of int
        Candidate words, all of the same width. Alternative ``i`` holds
        in world ``i``.

    forever : bool, optional
        If True the chosen word is held forever (an uncertain waveform),
        otherwise it is emitted on the first tick only.

    Returns
    -------
    term : Circuit
        The generator. When all alternatives agree this is a plain
        value or waveform.
    """
    alts = tuple(tuple(int(v) for v in w) for w in alternatives)
    if not alts:
        raise ValueError("An uncertain value needs alternatives")
    widths = set(len(w) for w in alts)
    if len(widths) != 1:
        raise ArityError("Alternatives have different widths %s"
                         % sorted(widths))
    if len(set(alts)) == 1:
        return waveform(alts[0]) if forever else value(alts[0])
    return Circuit(UNCERTAIN, (alts, bool(forever)), (), 0, len(alts[0]))


def compose(*terms):
    """Sequential composition, left to right.

    Parameters
    ----------
    *terms : Circuit
        Terms whose widths chain.

    Returns
    -------
    term : Circuit
        The flattened composite.
    """
    if not terms:
        raise ValueError("compose needs at least one term")
    for f, g in zip(terms[:-1], terms[1:]):
        if f.n_outputs != g.n_inputs:
            raise ArityError("Cannot compose %d outputs with %d inputs"
                             % (f.n_outputs, g.n_inputs))
    children = []
    for t in terms:
        if t.kind == SEQ:
            children.extend(t.children)
        elif t.kind != ID:
            children.append(t)
    if not children:
        return identity(terms[0].n_inputs)
    if len(children) == 1:
        return children[0]
    return Circuit(SEQ, (), children, children[0].n_inputs,
                   children[-1].n_outputs)


def tensor(*terms):
    """Parallel composition.

    Parameters
    ----------
    *terms : Circuit
        Terms stacked top to bottom.

    Returns
    -------
    term : Circuit
        The flattened tensor; adjacent identities are merged.
    """
    children = []
    for t in terms:
        parts = t.children if t.kind == PAR else (t,)
        for p in parts:
            if p.kind == ID and p.n_inputs == 0:
                continue
            if p.kind == ID and children and children[-1].kind == ID:
                children[-1] = identity(children[-1].n_inputs + p.n_inputs)
            else:
                children.append(p)
    if not children:
        return identity(0)
    if len(children) == 1:
        return children[0]
    return Circuit(PAR, (), children, sum(c.n_inputs for c in children),
                   sum(c.n_outputs for c in children))


def trace(x, body):
    """Feed the first ``x`` outputs of ``body`` back to its first inputs.

    Parameters
    ----------
    x : int
        Number of traced wires.

    body : Circuit
        The traced term.

    Returns
    -------
    term : Circuit
        The trace, of arity ``(body.n_inputs - x, body.n_outputs - x)``.
    """
    if x < 0 or x > body.n_inputs or x > body.n_outputs:
        raise ArityError("Cannot trace %d wires of a %d -> %d term"
                         % (x, body.n_inputs, body.n_outputs))
    if x == 0:
        return body
    return Circuit(TRACE, (x,), (body,), body.n_inputs - x,
                   body.n_outputs - x)


def permutation(order):
    """Wiring that routes input ``order[j]`` to output ``j``.

    Parameters
    ----------
    order : sequence of int
        A permutation of ``range(len(order))``.

    Returns
    -------
    term : Circuit
        A composite of symmetries and identities.
    """
    order = list(order)
    p = len(order)
    if sorted(order) != list(range(p)):
        raise ValueError("%s is not a permutation" % order)
    current = list(range(p))
    layers = []
    for j in range(p):
        pos = current.index(order[j])
        if pos == j:
            continue
        layers.append(tensor(identity(j), symmetry(pos - j, 1),
                             identity(p - pos - 1)))
        current = current[:j] + [current[pos]] + current[j:pos] + \
            current[pos + 1:]
    if not layers:
        return identity(p)
    return compose(*layers)


def expand_symmetry(m, n):
    """Symmetry written with single-wire swaps only.

    Parameters
    ----------
    m : int
        Width of the first bundle.

    n : int
        Width of the second bundle.

    Returns
    -------
    term : Circuit
        A term built from ``symmetry(1, 1)`` and identities.
    """
    p = m + n
    current = list(range(m, p)) + list(range(m))
    layers = []
    # bubble sort, each transposition of neighbours is one layer
    wires = list(range(p))
    for i in range(p):
        for j in range(p - 1 - i):
            if current.index(wires[j]) > current.index(wires[j + 1]):
                wires[j], wires[j + 1] = wires[j + 1], wires[j]
                layers.append(tensor(identity(j), symmetry(1, 1),
                                     identity(p - j - 2)))
    if not layers:
        return identity(p)
    return compose(*layers)


def fork_bus(n, k):
    """``k`` grouped copies of a bundle of ``n`` wires.

    Parameters
    ----------
    n : int
        Bundle width.

    k : int
        Number of copies; 0 discards the bundle.

    Returns
    -------
    term : Circuit
        A term ``n -> k * n``; forks are nested to the left.
    """
    if k == 0:
        return elims(n)
    if k == 1 or n == 0:
        return identity(n * k)
    if n == 1:
        pair = fork()
    else:
        pair = compose(tensor(*[fork() for _ in range(n)]),
                       permutation([2 * j for j in range(n)] +
                                   [2 * j + 1 for j in range(n)]))
    if k == 2:
        return pair
    return compose(pair, tensor(fork_bus(n, k - 1), identity(n)))


def elims(n):
    """Discard ``n`` wires.

    Parameters
    ----------
    n : int
        Number of wires.

    Returns
    -------
    term : Circuit
        A term ``n -> 0``.
    """
    return tensor(*[elim() for _ in range(n)])


def intros(n):
    """``n`` wires carrying bottom forever.

    Parameters
    ----------
    n : int
        Number of wires.

    Returns
    -------
    term : Circuit
        A term ``0 -> n``.
    """
    return tensor(*[intro() for _ in range(n)])


def joins(n):
    """Pointwise join of two bundles of ``n`` wires.

    Parameters
    ----------
    n : int
        Bundle width.

    Returns
    -------
    term : Circuit
        A term ``2 * n -> n``.
    """
    if n == 0:
        return identity(0)
    interleave = []
    for i in range(n):
        interleave += [i, n + i]
    return compose(permutation(interleave),
                   tensor(*[join() for _ in range(n)]))


def register(word):
    """Register initialised with ``word``.

    The values are joined onto the outputs of a delay, so the register
    emits ``word`` on the first tick and its delayed input afterwards.

    Parameters
    ----------
    word : sequence of int
        Initial contents, one letter per wire.

    Returns
    -------
    term : Circuit
        A term ``m -> m`` with ``m = len(word)``.
    """
    m = len(word)
    if m == 0:
        return identity(0)
    return compose(tensor(delay(m), value(word)), joins(m))


def walk(term):
    """Iterate over all nodes of a term, parents first.

    Parameters
    ----------
    term : Circuit
        The root.

    Yields
    ------
    node : Circuit
        Every node in depth-first order.
    """
    stack = [term]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children))


def rebuild(term, func):
    """Bottom-up rewrite of a term.

    Parameters
    ----------
    term : Circuit
        The term.

    func : callable
        Called on each node after its children were rebuilt; returns the
        replacement node.

    Returns
    -------
    term : Circuit
        The rewritten term.
    """
    if term.kind == SEQ:
        node = compose(*[rebuild(c, func) for c in term.children])
    elif term.kind == PAR:
        node = tensor(*[rebuild(c, func) for c in term.children])
    elif term.kind == TRACE:
        node = trace(term.params[0], rebuild(term.children[0], func))
    else:
        node = term
    return func(node)


def substitute(term, name, replacement):
    """Replace every occurrence of a primitive by a term.

    Parameters
    ----------
    term : Circuit
        The host term.

    name : str
        Primitive to replace.

    replacement : Circuit
        Term of the same arity as the primitive.

    Returns
    -------
    term : Circuit
        The instantiated term.
    """
    def _swap(node):
        if node.kind == PRIMITIVE and node.params[0] == name:
            if node.arity != replacement.arity:
                raise ArityError(
                    "Primitive %s has arity %d -> %d, replacement has "
                    "%d -> %d" % ((name,) + node.arity + replacement.arity))
            return replacement
        return node
    return rebuild(term, _swap)


def is_combinational(term, bottom=0):
    """Whether a term has no delay, no trace and no non-bottom value.

    Parameters
    ----------
    term : Circuit
        The term.

    bottom : int, optional
        Index of the bottom value.

    Returns
    -------
    combinational : bool
        The verdict.
    """
    for node in walk(term):
        if node.kind in (DELAY, TRACE, WAVEFORM, UNCERTAIN):
            return False
        if node.kind == VALUE and any(v != bottom for v in node.params):
            return False
    return True


def stats(term, bottom=0):
    """Structural counts of a term.

    Parameters
    ----------
    term : Circuit
        The term.

    bottom : int, optional
        Index of the bottom value.

    Returns
    -------
    stats : dict
        Keys ``delay_count`` (delayed wires), ``value_count`` (value
        letters), ``gate_count`` (primitive nodes) and
        ``is_combinational``.
    """
    delay_count = value_count = gate_count = 0
    for node in walk(term):
        if node.kind == DELAY:
            delay_count += node.params[0]
        elif node.kind == VALUE:
            value_count += len(node.params)
        elif node.kind == PRIMITIVE:
            gate_count += 1
    return dict(delay_count=delay_count, value_count=value_count,
                gate_count=gate_count,
                is_combinational=is_combinational(term, bottom))
