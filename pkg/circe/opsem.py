# License: BSD 3 clause
"""Operational semantics: Mealy form, instant feedback and reduction.

Any circuit is first put in global trace-delay form (all traces, delays
and values pulled to the outside), then its delays and values are fused
into a single register, and the remaining instant feedback is unrolled
into a bounded Kleene iteration. The result is a register word feeding a
combinational core, and one reduction cycle evaluates the core.
"""

from itertools import product

import numpy as np
from tqdm import tqdm

from . import circuit as C
from .interp import lattice_height
from .mealy import (MAX_PAIRS, Waveform, circuit_to_mealy,
                    distinguishing_waveform)
from .netlist import Netlist
from .exceptions import ArityError, BudgetExceededError

MAX_WAVEFORMS = 10 ** 6
MAX_STEPS = 10 ** 4


def _route(blocks, order):
    """Permutation moving named bundles of wires into a new order."""
    start, pos = {}, 0
    for name, width in blocks:
        start[name] = (pos, width)
        pos += width
    perm = []
    for name in order:
        s, width = start[name]
        perm.extend(range(s, s + width))
    return C.permutation(perm)


class TraceDelayForm:
    """Circuit with every trace, delay and value pulled outside.

    It reads ``Trace(x + y, (Id(x) * Delay(y) * Value(values) * Id(m)) ;
    core)`` where the core is combinational.

    Parameters
    ----------
    n_feedback : int
        Number ``x`` of traced wires not guarded by a delay.

    n_delays : int
        Number ``y`` of delayed traced wires.

    values : tuple of int
        Value letters fed to the core.

    core : Circuit
        Combinational term ``x + y + z + m -> x + y + n``.
    """

    def __init__(self, n_feedback, n_delays, values, core):
        self.n_feedback = n_feedback
        self.n_delays = n_delays
        self.values = tuple(values)
        self.core = core
        self.n_inputs = (core.n_inputs - n_feedback - n_delays -
                         len(self.values))
        self.n_outputs = core.n_outputs - n_feedback - n_delays

    @property
    def n_trace(self):
        return self.n_feedback + self.n_delays

    def to_circuit(self):
        """Reassemble the ordinary term.

        Returns
        -------
        term : Circuit
            The circuit in global trace-delay shape.
        """
        bank = C.tensor(C.identity(self.n_feedback), C.delay(self.n_delays),
                        C.value(self.values), C.identity(self.n_inputs))
        return C.trace(self.n_trace, C.compose(bank, self.core))


def _seq_forms(f, g):
    x1, y1, z1 = f.n_feedback, f.n_delays, len(f.values)
    x2, y2, z2 = g.n_feedback, g.n_delays, len(g.values)
    core = C.compose(
        _route([('x1', x1), ('x2', x2), ('y1', y1), ('y2', y2), ('z1', z1),
                ('z2', z2), ('m', f.n_inputs)],
               ['x1', 'y1', 'z1', 'm', 'x2', 'y2', 'z2']),
        C.tensor(f.core, C.identity(x2 + y2 + z2)),
        _route([('x1', x1), ('y1', y1), ('mid', f.n_outputs), ('x2', x2),
                ('y2', y2), ('z2', z2)],
               ['x1', 'y1', 'x2', 'y2', 'z2', 'mid']),
        C.tensor(C.identity(x1 + y1), g.core),
        _route([('x1', x1), ('y1', y1), ('x2', x2), ('y2', y2),
                ('n', g.n_outputs)],
               ['x1', 'x2', 'y1', 'y2', 'n']))
    return TraceDelayForm(x1 + x2, y1 + y2, f.values + g.values, core)


def _par_forms(f, g):
    x1, y1, z1 = f.n_feedback, f.n_delays, len(f.values)
    x2, y2, z2 = g.n_feedback, g.n_delays, len(g.values)
    core = C.compose(
        _route([('x1', x1), ('x2', x2), ('y1', y1), ('y2', y2), ('z1', z1),
                ('z2', z2), ('m1', f.n_inputs), ('m2', g.n_inputs)],
               ['x1', 'y1', 'z1', 'm1', 'x2', 'y2', 'z2', 'm2']),
        C.tensor(f.core, g.core),
        _route([('x1', x1), ('y1', y1), ('n1', f.n_outputs), ('x2', x2),
                ('y2', y2), ('n2', g.n_outputs)],
               ['x1', 'x2', 'y1', 'y2', 'n1', 'n2']))
    return TraceDelayForm(x1 + x2, y1 + y2, f.values + g.values, core)


def _trace_form(k, b):
    x, y, z = b.n_feedback, b.n_delays, len(b.values)
    m, n = b.n_inputs - k, b.n_outputs - k
    core = C.compose(
        _route([('k', k), ('x', x), ('y', y), ('z', z), ('m', m)],
               ['x', 'y', 'z', 'k', 'm']),
        b.core,
        _route([('x', x), ('y', y), ('k', k), ('n', n)],
               ['k', 'x', 'y', 'n']))
    return TraceDelayForm(k + x, y, b.values, core)


def global_trace_delay_form(term):
    """Pull every trace, delay and value of a term to the outside.

    Only structural laws are used: the result denotes the same machine.

    Parameters
    ----------
    term : Circuit
        The circuit.

    Returns
    -------
    form : TraceDelayForm
        The form, built by a left to right traversal.
    """
    kind = term.kind
    if kind == C.VALUE:
        return TraceDelayForm(0, 0, term.params,
                              C.identity(term.n_outputs))
    if kind == C.DELAY:
        n = term.params[0]
        return TraceDelayForm(0, n, (), C.symmetry(n, n))
    if kind == C.SEQ:
        forms = [global_trace_delay_form(c) for c in term.children]
        form = forms[0]
        for other in forms[1:]:
            form = _seq_forms(form, other)
        return form
    if kind == C.PAR:
        forms = [global_trace_delay_form(c) for c in term.children]
        form = forms[0]
        for other in forms[1:]:
            form = _par_forms(form, other)
        return form
    if kind == C.TRACE:
        return _trace_form(term.params[0],
                           global_trace_delay_form(term.children[0]))
    if kind in (C.WAVEFORM, C.UNCERTAIN):
        raise ValueError("Node kind %s has no trace-delay form" % kind)
    return TraceDelayForm(0, 0, (), term)


class PreMealyForm:
    """Register word feeding a combinational core with instant feedback.

    It reads ``Trace(x + k, (Id(x) * Register(state) * Id(m)) ; core)``.

    Parameters
    ----------
    n_feedback : int
        Number ``x`` of feedback wires not guarded by the register.

    state : tuple of int
        Register word of length ``k``.

    core : Circuit
        Combinational term ``x + k + m -> x + k + n``.
    """

    def __init__(self, n_feedback, state, core):
        self.n_feedback = n_feedback
        self.state = tuple(state)
        self.core = core
        self.n_inputs = core.n_inputs - n_feedback - len(self.state)
        self.n_outputs = core.n_outputs - n_feedback - len(self.state)

    @property
    def n_trace(self):
        return self.n_feedback + len(self.state)

    def to_circuit(self):
        """Reassemble the ordinary term.

        Returns
        -------
        term : Circuit
            The circuit.
        """
        bank = C.tensor(C.identity(self.n_feedback), C.register(self.state),
                        C.identity(self.n_inputs))
        return C.trace(self.n_trace, C.compose(bank, self.core))


class MealyForm:
    """Register word feeding a combinational core, no other feedback.

    Parameters
    ----------
    state : tuple of int
        Register word of length ``k``.

    core : Circuit
        Combinational term ``k + m -> k + n``; the first ``k`` outputs are
        the next state.
    """

    def __init__(self, state, core):
        self.state = tuple(state)
        self.core = core
        self.n_inputs = core.n_inputs - len(self.state)
        self.n_outputs = core.n_outputs - len(self.state)
        self._cache = {}

    def to_circuit(self):
        """Reassemble the ordinary term.

        Returns
        -------
        term : Circuit
            ``Trace(k, (Register(state) * Id(m)) ; core)``.
        """
        k = len(self.state)
        return C.trace(k, C.compose(
            C.tensor(C.register(self.state), C.identity(self.n_inputs)),
            self.core))

    def _netlist(self, interp):
        key = id(interp)
        if key not in self._cache:
            self._cache[key] = (interp, Netlist(self.core, interp))
        return self._cache[key][1]

    def with_state(self, state):
        """Same core with another register word.

        Parameters
        ----------
        state : tuple of int
            The new register word.

        Returns
        -------
        form : MealyForm
            The form, sharing compiled evaluators with this one.
        """
        form = MealyForm(state, self.core)
        form._cache = self._cache
        return form

    def __repr__(self):
        return "MealyForm(state=%s, %d -> %d)" % (self.state, self.n_inputs,
                                                   self.n_outputs)


def mealy_rule(form, bottom=0):
    """Fuse the delays and values of a trace-delay form into a register.

    Delayed wires start at bottom and value wires at their letter; after
    the first tick the value wires hold bottom.

    Parameters
    ----------
    form : TraceDelayForm
        The form.

    bottom : int, default 0
        Index of the bottom value, the initial content of delayed wires.

    Returns
    -------
    pre : PreMealyForm
        Register word ``bottom^y ++ values``.
    """
    x, y, z = form.n_feedback, form.n_delays, len(form.values)
    core = C.compose(form.core, C.tensor(C.identity(x + y), C.intros(z),
                                         C.identity(form.n_outputs)))
    state = (bottom,) * y + form.values
    return PreMealyForm(x, state, core)


def instant_feedback(pre, interp):
    """Unroll the feedback wires of a pre-Mealy form.

    With ``c = x * height(V)``, ``c + 1`` copies of the core are chained:
    copy 0 reads bottom on its feedback inputs, copy ``i + 1`` reads the
    feedback outputs of copy ``i``, and the last copy produces the next
    state and outputs. Non-feedback inputs are forked to every copy.

    Parameters
    ----------
    pre : PreMealyForm
        The form.

    interp : Interpretation
        Provides the lattice height.

    Returns
    -------
    form : MealyForm
        The unrolled form, free of traces.
    """
    x, k = pre.n_feedback, len(pre.state)
    m, n = pre.n_inputs, pre.n_outputs
    if x == 0:
        return MealyForm(pre.state, pre.core)
    c = x * lattice_height(interp.lattice)
    width = k + m
    feedback = C.compose(pre.core, C.tensor(C.identity(x),
                                            C.elims(k + n)))
    final = C.compose(pre.core, C.tensor(C.elims(x), C.identity(k + n)))
    stages = [C.fork_bus(width, c + 1),
              C.tensor(C.intros(x), C.identity((c + 1) * width))]
    for i in range(c):
        stages.append(C.tensor(feedback, C.identity((c - i) * width)))
    stages.append(final)
    return MealyForm(pre.state, C.compose(*stages))


def to_mealy_form(term, interp):
    """Mealy form of a circuit.

    Parameters
    ----------
    term : Circuit
        The circuit.

    interp : Interpretation
        Provides the lattice.

    Returns
    -------
    form : MealyForm
        Register word and combinational core.
    """
    form = global_trace_delay_form(term)
    pre = mealy_rule(form, bottom=interp.lattice.bottom)
    return instant_feedback(pre, interp)


def productivity_step(form, word, interp):
    """One reduction cycle of a circuit in Mealy form.

    The core is evaluated on the register word and the inputs, which is
    the normal form of streaming the inputs in and applying the value
    rules exhaustively.

    Parameters
    ----------
    form : MealyForm
        The circuit.

    word : sequence of int
        Input values for this cycle.

    interp : Interpretation
        Meaning of the primitives.

    Returns
    -------
    outputs : tuple of int
        Output values of this cycle.

    next_form : MealyForm
        Same core, next register word.
    """
    if len(word) != form.n_inputs:
        raise ArityError("Circuit has %d inputs, got %d"
                         % (form.n_inputs, len(word)))
    out = form._netlist(interp).step((), tuple(form.state) + tuple(word))[1]
    k = len(form.state)
    return out[k:], form.with_state(out[:k])


def run_waveform(term, waveform, interp):
    """Outputs of a circuit on an input waveform, cycle by cycle.

    Parameters
    ----------
    term : Circuit
        The circuit.

    waveform : Waveform
        Input words.

    interp : Interpretation
        Meaning of the primitives.

    Returns
    -------
    outputs : Waveform
        One output word per cycle.
    """
    if waveform.width != term.n_inputs:
        raise ArityError("Circuit has %d inputs, waveform has width %d"
                         % (term.n_inputs, waveform.width))
    form = to_mealy_form(term, interp)
    out = []
    for word in waveform:
        b, form = productivity_step(form, word, interp)
        out.append(b)
    return Waveform(out, term.n_outputs)


def _transitions(form, interp, inputs, cache):
    if form.state not in cache:
        net = form._netlist(interp)
        k = len(form.state)
        states = np.repeat(np.array(form.state, dtype=np.intp).reshape(-1, 1),
                           inputs.shape[1], axis=1)
        _, out = net.evaluate(np.zeros((0, inputs.shape[1]), dtype=np.intp),
                              np.vstack([states, inputs]))
        cache[form.state] = [(tuple(int(v) for v in o[:k]),
                              tuple(int(v) for v in o[k:])) for o in out.T]
    return cache[form.state]


def obs_equiv(t1, t2, interp, mode='oracle', max_waveforms=MAX_WAVEFORMS,
              max_pairs=MAX_PAIRS, return_witness=False, verbose=0):
    """Whether two circuits produce the same outputs on all inputs.

    Parameters
    ----------
    t1 : Circuit
        First circuit.

    t2 : Circuit
        Second circuit, same arity.

    interp : Interpretation
        Meaning of the primitives.

    mode : 'oracle' | 'exhaustive', optional
        'oracle' decides bisimilarity of the two machines. 'exhaustive'
        compares the outputs on every input waveform of length
        ``|V| ** c + 1``, ``c`` the longest register word.

    max_waveforms : int, optional
        Budget on the number of waveforms in exhaustive mode.

    max_pairs : int, optional
        Budget on state pairs in oracle mode.

    return_witness : bool, optional
        If True, also return a distinguishing input waveform (None when
        equivalent).

    verbose : int, optional
        Verbosity level.

    Returns
    -------
    equivalent : bool
        The verdict.

    witness : Waveform | None
        Only returned when ``return_witness`` is True.
    """
    if t1.arity != t2.arity:
        raise ArityError("Circuits have arities %s and %s"
                         % (t1.arity, t2.arity))
    if mode == 'oracle':
        witness = distinguishing_waveform(circuit_to_mealy(t1, interp),
                                          circuit_to_mealy(t2, interp),
                                          max_pairs=max_pairs)
    elif mode == 'exhaustive':
        witness = _exhaustive(t1, t2, interp, max_waveforms, verbose)
    else:
        raise ValueError("Unsupported mode %s" % mode)
    if return_witness:
        return witness is None, witness
    return witness is None


def _exhaustive(t1, t2, interp, max_waveforms, verbose):
    f1, f2 = to_mealy_form(t1, interp), to_mealy_form(t2, interp)
    n_values = interp.lattice.size
    c = max(len(f1.state), len(f2.state))
    length = n_values ** c + 1
    n_words = n_values ** t1.n_inputs
    if length * np.log(max(n_words, 1)) > np.log(max_waveforms):
        raise BudgetExceededError('waveforms', max_waveforms)
    words = list(product(range(n_values), repeat=t1.n_inputs))
    inputs = np.array(words, dtype=np.intp).reshape(len(words),
                                                    t1.n_inputs).T
    cache1, cache2 = {}, {}
    if verbose:
        print("checking %d waveforms of length %d"
              % (n_words ** length, length))
    first = tqdm(range(len(words)), disable=not verbose)
    # depth first over all prefixes, states are kept along the path
    for i0 in first:
        stack = [(f1.state, f2.state, [i0])]
        while stack:
            s1, s2, path = stack.pop()
            i = path[-1]
            n1, o1 = _transitions(f1.with_state(s1), interp, inputs,
                                  cache1)[i]
            n2, o2 = _transitions(f2.with_state(s2), interp, inputs,
                                  cache2)[i]
            if o1 != o2:
                return Waveform([words[j] for j in path], t1.n_inputs)
            if len(path) < length:
                for j in range(len(words) - 1, -1, -1):
                    stack.append((n1, n2, path + [j]))
    return None


def _value_like(t):
    return t.kind in (C.VALUE, C.INTRO)


def _letters(t, bottom):
    return (bottom,) if t.kind == C.INTRO else t.params


def _cut_points(children, attr):
    points, pos = set(), 0
    for child in children:
        pos += getattr(child, attr)
        points.add(pos)
    return points


def _split(children, attr, cuts):
    blocks, current, pos = [], [], 0
    for child in children:
        current.append(child)
        pos += getattr(child, attr)
        if pos in cuts:
            blocks.append(current)
            current = []
    if current:
        blocks.append(current)
    return blocks


def _pair_rule(a, b, interp):
    """Value rule for ``a ; b``, or None."""
    lattice = interp.lattice
    if _value_like(a):
        word = _letters(a, lattice.bottom)
        if b.kind == C.PRIMITIVE:
            return C.value(interp.semantics[b.params[0]](*word))
        if b.kind == C.FORK:
            return C.value(word * 2)
        if b.kind == C.JOIN:
            return C.value(lattice.join_words(word[:1], word[1:]))
        if b.kind == C.ELIM:
            return C.identity(0)
        if b.kind == C.SYMMETRY:
            m = b.params[0]
            return C.value(word[m:] + word[:m])
        if b.kind == C.PAR:
            parts, start = [], 0
            for child in b.children:
                piece = C.value(word[start:start + child.n_inputs])
                parts.append(C.compose(piece, child))
                start += child.n_inputs
            return C.tensor(*parts)
        return None
    if a.kind == C.PAR and b.kind == C.PAR:
        cuts = (_cut_points(a.children, 'n_outputs') &
                _cut_points(b.children, 'n_inputs'))
        cuts.discard(a.n_outputs)
        if not cuts:
            return None
        a_blocks = _split(a.children, 'n_outputs', cuts)
        b_blocks = _split(b.children, 'n_inputs', cuts)
        if not any(all(_value_like(c) for c in blk) for blk in a_blocks):
            return None
        return C.tensor(*[C.compose(C.tensor(*ab), C.tensor(*bb))
                          for ab, bb in zip(a_blocks, b_blocks)])
    return None


def _node_rule(t, interp):
    """Merge adjacent values inside a tensor, or None."""
    if t.kind != C.PAR:
        return None
    children = list(t.children)
    for i in range(len(children) - 1):
        if _value_like(children[i]) and _value_like(children[i + 1]):
            bottom = interp.lattice.bottom
            merged = C.value(_letters(children[i], bottom) +
                             _letters(children[i + 1], bottom))
            return C.tensor(*(children[:i] + [merged] + children[i + 2:]))
    return None


def _rewrite(t, interp, reverse):
    if t.kind in (C.SEQ, C.PAR):
        order = range(len(t.children))
        for i in (reversed(order) if reverse else order):
            new = _rewrite(t.children[i], interp, reverse)
            if new is not None:
                children = list(t.children)
                children[i] = new
                return (C.compose if t.kind == C.SEQ else C.tensor)(
                    *children)
    elif t.kind == C.TRACE:
        new = _rewrite(t.children[0], interp, reverse)
        if new is not None:
            return C.trace(t.params[0], new)
    if t.kind == C.SEQ:
        pairs = range(len(t.children) - 1)
        for i in (reversed(pairs) if reverse else pairs):
            new = _pair_rule(t.children[i], t.children[i + 1], interp)
            if new is not None:
                children = list(t.children)
                return C.compose(*(children[:i] + [new] +
                                   children[i + 2:]))
        return None
    return _node_rule(t, interp)


def value_rule_step(term, interp, strategy='leftmost'):
    """Apply one value rule.

    Values entering a gate become the gate's output values, values
    entering a fork are copied, two values entering a join are joined,
    a value entering an elim disappears. Values also travel through
    symmetries and tensors, and intros count as bottom values.

    Parameters
    ----------
    term : Circuit
        The term.

    interp : Interpretation
        Meaning of the primitives.

    strategy : 'leftmost' | 'rightmost', optional
        Which innermost redex is reduced.

    Returns
    -------
    term : Circuit | None
        The reduced term, None when no rule applies.
    """
    if strategy not in ('leftmost', 'rightmost'):
        raise ValueError("Unsupported strategy %s" % strategy)
    return _rewrite(term, interp, strategy == 'rightmost')


def value_normal_form(term, interp, strategy='leftmost',
                      max_steps=MAX_STEPS):
    """Apply value rules until none applies.

    Parameters
    ----------
    term : Circuit
        The term.

    interp : Interpretation
        Meaning of the primitives.

    strategy : 'leftmost' | 'rightmost', optional
        Redex selection.

    max_steps : int, optional
        Budget on rewrite steps.

    Returns
    -------
    term : Circuit
        The normal form.
    """
    for _ in range(max_steps):
        new = value_rule_step(term, interp, strategy)
        if new is None:
            return term
        term = new
    raise BudgetExceededError('value rule steps', max_steps)
