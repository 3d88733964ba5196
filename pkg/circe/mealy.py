# License: BSD 3 clause
"""Finite initialised monotone Mealy machines.

Circuits denote machines through :func:`circuit_to_mealy`, whose states
are register words. Machines compose with :func:`cascade`,
:func:`direct` and :func:`mealy_trace`, and are compared with
:func:`bisimilar`.
"""

from collections import deque
from itertools import product

import numpy as np

from .interp import all_words, lattice_height
from .netlist import Netlist
from .exceptions import ArityError, BudgetExceededError, FixpointError

MAX_STATES = 10 ** 5
MAX_PAIRS = 10 ** 6


class Waveform:
    """Finite sequence of value words of a fixed width.

    Parameters
    ----------
    values : array-like of int, shape (n_ticks, width)
        One word per tick.

    width : int, optional
        Word width, needed when ``values`` is empty.
    """

    def __init__(self, values=(), width=None):
        values = np.array(values, dtype=np.intp)
        if values.ndim == 1 and values.size == 0:
            values = values.reshape(0, 0 if width is None else width)
        if values.ndim != 2:
            raise ValueError("A waveform is a 2D array, got shape %s"
                             % (values.shape,))
        if width is not None and values.shape[1] != width:
            raise ArityError("Waveform has width %d, expected %d"
                             % (values.shape[1], width))
        self.values = values
        self.values.flags.writeable = False

    @property
    def width(self):
        return self.values.shape[1]

    def __len__(self):
        return self.values.shape[0]

    def __iter__(self):
        for row in self.values:
            yield tuple(int(v) for v in row)

    def __getitem__(self, key):
        if isinstance(key, slice):
            return Waveform(self.values[key], self.width)
        return tuple(int(v) for v in self.values[key])

    def __add__(self, other):
        if self.width != other.width:
            raise ArityError("Cannot concatenate widths %d and %d"
                             % (self.width, other.width))
        return Waveform(np.vstack([self.values, other.values]), self.width)

    def __eq__(self, other):
        return (isinstance(other, Waveform) and self.width == other.width
                and np.array_equal(self.values, other.values))

    def __hash__(self):
        return hash((self.values.shape, self.values.tobytes()))

    def __repr__(self):
        return "Waveform(%s)" % [tuple(w) for w in self]


class MealyMachine:
    """Initialised Mealy machine over a finite value lattice.

    Parameters
    ----------
    n_inputs : int
        Input width.

    n_outputs : int
        Output width.

    lattice : Lattice
        Values carried by inputs and outputs.

    initial : hashable
        Initial state.

    transition : callable
        ``transition(state, word)`` returns ``(next_state, output_word)``
        with words as tuples of value indices.

    leq : callable, optional
        Order on states. When None the states are discretely ordered and
        the machine is flagged as unordered.
    """

    def __init__(self, n_inputs, n_outputs, lattice, initial, transition,
                 leq=None):
        self.n_inputs = n_inputs
        self.n_outputs = n_outputs
        self.lattice = lattice
        self.initial = initial
        self._transition = transition
        self.ordered = leq is not None
        self._leq = leq if leq is not None else (lambda s, t: s == t)
        self._succ = {}

    @classmethod
    def from_table(cls, n_inputs, n_outputs, lattice, initial, table,
                   order=None):
        """Machine given by an explicit transition table.

        Parameters
        ----------
        n_inputs : int
            Input width.

        n_outputs : int
            Output width.

        lattice : Lattice
            Values carried by inputs and outputs.

        initial : hashable
            Initial state.

        table : dict
            Maps ``(state, input_word)`` to ``(next_state, output_word)``.

        order : iterable of (state, state), optional
            Generating pairs of the state order, closed reflexively and
            transitively. None gives an unordered machine.

        Returns
        -------
        machine : MealyMachine
            The machine.
        """
        table = {(s, tuple(a)): (t, tuple(b))
                 for (s, a), (t, b) in table.items()}
        leq = None
        if order is not None:
            below = _closure(order)
            leq = (lambda s, t: s == t or (s, t) in below)
        machine = cls(n_inputs, n_outputs, lattice, initial,
                      lambda s, a: table[s, a], leq)
        machine.table = table
        return machine

    def step(self, state, word):
        """Transition and output.

        Parameters
        ----------
        state : hashable
            Current state.

        word : sequence of int
            Input word.

        Returns
        -------
        next_state : hashable
            Next state.

        outputs : tuple of int
            Output word.
        """
        word = tuple(int(v) for v in word)
        if len(word) != self.n_inputs:
            raise ArityError("Machine has %d inputs, got %d"
                             % (self.n_inputs, len(word)))
        return self._transition(state, word)

    def leq(self, s, t):
        """Order on states.

        Parameters
        ----------
        s : hashable
            A state.

        t : hashable
            Another state.

        Returns
        -------
        below : bool
            Whether ``s`` is below ``t``.
        """
        return self._leq(s, t)

    def successors(self, state):
        """Transitions from a state under every input word.

        Parameters
        ----------
        state : hashable
            The state.

        Returns
        -------
        transitions : list of (tuple, hashable, tuple)
            ``(input_word, next_state, output_word)`` in lexicographic
            order of the inputs.
        """
        if state not in self._succ:
            self._succ[state] = [
                (a,) + tuple(self.step(state, a))
                for a in product(range(self.lattice.size),
                                 repeat=self.n_inputs)]
        return self._succ[state]

    def __repr__(self):
        return "%s(%d -> %d)" % (type(self).__name__, self.n_inputs,
                                 self.n_outputs)


def _closure(pairs):
    below = set(tuple(p) for p in pairs)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in product(list(below), repeat=2):
            if b == c and (a, d) not in below:
                below.add((a, d))
                changed = True
    return below


class CircuitMealy(MealyMachine):
    """Machine of a circuit; states are register words.

    Parameters
    ----------
    netlist : Netlist
        The compiled circuit.
    """

    def __init__(self, netlist):
        lattice = netlist.interp.lattice
        super().__init__(netlist.n_inputs, netlist.n_outputs, lattice,
                         netlist.initial_state, netlist.step,
                         leq=lattice.leq_words)
        self.netlist = netlist
        self._inputs = all_words(lattice.size, netlist.n_inputs).T

    def successors(self, state):
        """Transitions from a state under every input word, in one batch.

        Parameters
        ----------
        state : tuple of int
            Register word.

        Returns
        -------
        transitions : list of (tuple, tuple, tuple)
            ``(input_word, next_state, output_word)`` in lexicographic
            order of the inputs.
        """
        if state not in self._succ:
            batch = self._inputs.shape[1]
            states = np.repeat(np.array(state, dtype=np.intp).reshape(-1, 1),
                               batch, axis=1)
            nxt, out = self.netlist.evaluate(states, self._inputs)
            self._succ[state] = [
                (tuple(int(v) for v in a), tuple(int(v) for v in s),
                 tuple(int(v) for v in b))
                for a, s, b in zip(self._inputs.T, nxt.T, out.T)]
        return self._succ[state]


def circuit_to_mealy(term, interp):
    """Machine denoted by a circuit.

    The state holds one letter per delayed wire (initially bottom) and
    per value letter (initially the letter, bottom after the first
    tick). A step computes every wire as the least fixed point of the
    propagation map.

    Parameters
    ----------
    term : Circuit
        The circuit.

    interp : Interpretation
        Meaning of the primitives.

    Returns
    -------
    machine : CircuitMealy
        The machine.
    """
    return CircuitMealy(Netlist(term, interp))


def step(machine, state, word):
    """Transition and output of a machine.

    Parameters
    ----------
    machine : MealyMachine
        The machine.

    state : hashable
        Current state.

    word : sequence of int
        Input word.

    Returns
    -------
    next_state : hashable
        Next state.

    outputs : tuple of int
        Output word.
    """
    return machine.step(state, word)


def _product_leq(m1, m2):
    if not (m1.ordered and m2.ordered):
        return None
    return lambda s, t: m1.leq(s[0], t[0]) and m2.leq(s[1], t[1])


def cascade(m1, m2):
    """Cascade product: ``m2`` reads the output of ``m1`` in the same tick.

    Parameters
    ----------
    m1 : MealyMachine
        First machine.

    m2 : MealyMachine
        Second machine.

    Returns
    -------
    machine : MealyMachine
        Machine over pairs of states.
    """
    if m1.n_outputs != m2.n_inputs:
        raise ArityError("Cannot cascade %d outputs into %d inputs"
                         % (m1.n_outputs, m2.n_inputs))

    def transition(state, word):
        s, b = m1.step(state[0], word)
        t, c = m2.step(state[1], b)
        return (s, t), c

    return MealyMachine(m1.n_inputs, m2.n_outputs, m1.lattice,
                        (m1.initial, m2.initial), transition,
                        _product_leq(m1, m2))


def direct(m1, m2):
    """Direct product: both machines run side by side.

    Parameters
    ----------
    m1 : MealyMachine
        Upper machine.

    m2 : MealyMachine
        Lower machine.

    Returns
    -------
    machine : MealyMachine
        Machine with added widths.
    """
    k = m1.n_inputs

    def transition(state, word):
        s, b = m1.step(state[0], word[:k])
        t, c = m2.step(state[1], word[k:])
        return (s, t), b + c

    return MealyMachine(k + m2.n_inputs, m1.n_outputs + m2.n_outputs,
                        m1.lattice, (m1.initial, m2.initial), transition,
                        _product_leq(m1, m2))


def mealy_trace(machine, x):
    """Feed the first ``x`` outputs back into the first ``x`` inputs.

    The fed-back wires are the least fixed point of the wire map,
    computed by Kleene iteration from bottom.

    Parameters
    ----------
    machine : MealyMachine
        A monotone machine.

    x : int
        Number of traced wires.

    Returns
    -------
    machine : MealyMachine
        The traced machine, on the same states.
    """
    if x > machine.n_inputs or x > machine.n_outputs:
        raise ArityError("Cannot trace %d wires of a %d -> %d machine"
                         % (x, machine.n_inputs, machine.n_outputs))
    if x == 0:
        return machine
    lattice = machine.lattice
    bound = x * lattice_height(lattice) + 1

    def transition(state, word):
        loop = (lattice.bottom,) * x
        for _ in range(bound + 1):
            nxt, out = machine.step(state, loop + tuple(word))
            if out[:x] == loop:
                return nxt, out[x:]
            loop = out[:x]
        raise FixpointError("Trace did not stabilise within %d iterations"
                            % bound)

    leq = machine.leq if machine.ordered else None
    return MealyMachine(machine.n_inputs - x, machine.n_outputs - x,
                        lattice, machine.initial, transition, leq)


def reachable(machine, max_states=MAX_STATES, verbose=0):
    """Restriction of a machine to its reachable states.

    States are visited breadth first, inputs in lexicographic order.

    Parameters
    ----------
    machine : MealyMachine
        The machine.

    max_states : int, optional
        Budget on the number of states.

    verbose : int, optional
        Verbosity level.

    Returns
    -------
    machine : MealyMachine
        Table machine; ``machine.states`` lists states in visit order.
    """
    order = [machine.initial]
    seen = {machine.initial}
    table = {}
    queue = deque(order)
    while queue:
        s = queue.popleft()
        for a, t, b in machine.successors(s):
            table[s, a] = (t, b)
            if t not in seen:
                if len(seen) >= max_states:
                    raise BudgetExceededError('reachable states',
                                              max_states)
                seen.add(t)
                order.append(t)
                queue.append(t)
    if verbose:
        print("%d reachable states" % len(order))
    leq = machine._leq if machine.ordered else None
    result = MealyMachine(machine.n_inputs, machine.n_outputs,
                          machine.lattice, machine.initial,
                          lambda s, a: table[s, a], leq)
    result.table = table
    result.states = order
    return result


def _partition(machine):
    states = machine.states
    sig = {s: tuple(b for _, _, b in machine.successors(s)) for s in states}
    block = _number(states, sig)
    while True:
        sig = {s: (block[s],) + tuple(block[t]
                                      for _, t, _ in machine.successors(s))
               for s in states}
        refined = _number(states, sig)
        if len(set(refined.values())) == len(set(block.values())):
            return refined
        block = refined


def _number(states, sig):
    ids = {}
    return {s: ids.setdefault(sig[s], len(ids)) for s in states}


def minimize(machine, max_states=MAX_STATES, verbose=0):
    """Smallest machine with the same behaviour.

    Reachable states are merged by partition refinement; blocks are
    numbered in breadth-first order of their first state, so the initial
    state is block 0. A state order is carried over to the blocks: a block
    is below another when one of its states is below one of the other.

    Parameters
    ----------
    machine : MealyMachine
        The machine.

    max_states : int, optional
        Budget on the number of reachable states.

    verbose : int, optional
        Verbosity level.

    Returns
    -------
    machine : MealyMachine
        Table machine on states ``0 .. k - 1``.
    """
    reach = reachable(machine, max_states=max_states)
    block = _partition(reach)
    table = {}
    for s in reach.states:
        for a, t, b in reach.successors(s):
            table[block[s], a] = (block[t], b)
    order = None
    if machine.ordered:
        order = {(block[s], block[t]) for s, t in product(reach.states,
                                                          repeat=2)
                 if block[s] != block[t] and machine.leq(s, t)}
    if verbose:
        print("%d states, %d after minimisation"
              % (len(reach.states), len(set(block.values()))))
    result = MealyMachine.from_table(machine.n_inputs, machine.n_outputs,
                                     machine.lattice, block[machine.initial],
                                     table, order=order)
    result.states = sorted(set(block.values()))
    return result


def _check_widths(m1, m2):
    if (m1.n_inputs, m1.n_outputs) != (m2.n_inputs, m2.n_outputs):
        raise ArityError("Machines have widths %d -> %d and %d -> %d"
                         % (m1.n_inputs, m1.n_outputs, m2.n_inputs,
                            m2.n_outputs))
    if m1.lattice.size != m2.lattice.size:
        raise ValueError("Machines are over different value sets")


def distinguishing_waveform(m1, m2, max_pairs=MAX_PAIRS):
    """Shortest input waveform on which two machines differ.

    Parameters
    ----------
    m1 : MealyMachine
        First machine.

    m2 : MealyMachine
        Second machine, same widths.

    max_pairs : int, optional
        Budget on explored pairs of states.

    Returns
    -------
    witness : Waveform | None
        The witness, or None when the machines are bisimilar.
    """
    _check_widths(m1, m2)
    start = (m1.initial, m2.initial)
    parent = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        for (a, s, b), (_, t, c) in zip(m1.successors(pair[0]),
                                        m2.successors(pair[1])):
            if b != c:
                word = [a]
                node = pair
                while parent[node] is not None:
                    node, letter = parent[node]
                    word.append(letter)
                return Waveform(word[::-1], m1.n_inputs)
            nxt = (s, t)
            if nxt not in parent:
                if len(parent) >= max_pairs:
                    raise BudgetExceededError('state pairs', max_pairs)
                parent[nxt] = (pair, a)
                queue.append(nxt)
    return None


def bisimilar(m1, m2, max_pairs=MAX_PAIRS):
    """Whether two machines have the same behaviour.

    Parameters
    ----------
    m1 : MealyMachine
        First machine.

    m2 : MealyMachine
        Second machine, same widths.

    max_pairs : int, optional
        Budget on explored pairs of states. Exceeding it raises
        BudgetExceededError rather than answering.

    Returns
    -------
    bisimilar : bool
        True when the initial states are bisimilar.
    """
    return distinguishing_waveform(m1, m2, max_pairs=max_pairs) is None


def run_from(machine, state, waveform):
    """Run a machine from a given state.

    Parameters
    ----------
    machine : MealyMachine
        The machine.

    state : hashable
        Starting state.

    waveform : Waveform
        Input words.

    Returns
    -------
    outputs : Waveform
        One output word per input word.

    state : hashable
        State after the last tick.
    """
    if waveform.width != machine.n_inputs:
        raise ArityError("Machine has %d inputs, waveform has width %d"
                         % (machine.n_inputs, waveform.width))
    out = []
    for word in waveform:
        state, b = machine.step(state, word)
        out.append(b)
    return Waveform(out, machine.n_outputs), state


def run(machine, waveform):
    """Run a machine from its initial state.

    Parameters
    ----------
    machine : MealyMachine
        The machine.

    waveform : Waveform
        Input words.

    Returns
    -------
    outputs : Waveform
        One output word per input word.
    """
    return run_from(machine, machine.initial, waveform)[0]


def check_mealy_monotone(machine, max_states=MAX_STATES):
    """Monotonicity violations of an ordered machine.

    Parameters
    ----------
    machine : MealyMachine
        An ordered machine.

    max_states : int, optional
        Budget on the number of reachable states.

    Returns
    -------
    violations : list of tuple
        ``(s, a, t, b)`` with ``(s, a)`` below ``(t, b)`` whose
        transitions are not ordered.
    """
    if not machine.ordered:
        raise ValueError("Machine has no state order")
    reach = reachable(machine, max_states=max_states)
    lattice = machine.lattice
    violations = []
    for s, t in product(reach.states, repeat=2):
        if not machine.leq(s, t):
            continue
        for (a, s2, b), (c, t2, d) in product(reach.successors(s),
                                              reach.successors(t)):
            if not lattice.leq_words(a, c):
                continue
            if not (machine.leq(s2, t2) and lattice.leq_words(b, d)):
                violations.append((s, a, t, c))
    return violations
