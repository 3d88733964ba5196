# License: BSD 3 clause
"""Synthesis of circuits from Mealy machines over Belnap logic.

Reachable states are encoded as words of top and bottom, the encoded
step function is completed into a monotone truth table, and every output
column is expressed with AND, OR, NOT, joins and constants through a
falsy and a truthy disjunctive normal form.
"""

from functools import lru_cache
from itertools import product

import numpy as np

from . import circuit as C
from .interp import (BOT, FALSE, TRUE, TOP, TruthTable, all_words,
                     belnap)
from .mealy import MAX_STATES, reachable
from .exceptions import (ArityError, BudgetExceededError,
                         NotMonotoneError)

MAX_ROWS = 4 ** 10


class Encoding:
    """Assignment of code words to states.

    Parameters
    ----------
    states : list
        States in the chosen total order.

    code : dict
        Maps each state to its code word, a tuple of value indices.
    """

    def __init__(self, states, code):
        self.states = list(states)
        self.code = dict(code)
        self.width = len(self.states)
        self.decode = {w: s for s, w in self.code.items()}

    def __repr__(self):
        return "Encoding(%d states)" % self.width


def encoding(states, leq, lattice):
    """Order encoding of states.

    Letter ``i`` of the code of ``s`` is top when the ``i``-th state is
    below ``s`` and bottom otherwise, so the code reflects the order.

    Parameters
    ----------
    states : list
        States listed in a total order.

    leq : callable
        Partial order on states, ``leq(s, t)``.

    lattice : Lattice
        Provides the top and bottom values used as letters.

    Returns
    -------
    enc : Encoding
        The encoding.
    """
    code = {s: tuple(lattice.top if leq(si, s) else lattice.bottom
                     for si in states) for s in states}
    return Encoding(states, code)


def _input_words(n_values, n_inputs, value_order):
    rank = {v: r for r, v in enumerate(value_order)}
    words = list(product(range(n_values), repeat=n_inputs))
    return sorted(words, key=lambda w: tuple(rank[v] for v in w))


def chosen_state_order(machine, value_order=None, max_states=MAX_STATES):
    """Order reachable states by their shortest, then least, access word.

    Parameters
    ----------
    machine : MealyMachine
        The machine.

    value_order : sequence of int, optional
        Total order on values used to compare access words. Defaults to
        the index order.

    max_states : int, optional
        Budget on the number of reachable states.

    Returns
    -------
    states : list
        Reachable states, the initial state first.
    """
    n_values = machine.lattice.size
    if value_order is None:
        value_order = range(n_values)
    value_order = list(value_order)
    if sorted(value_order) != list(range(n_values)):
        raise ValueError("%s is not a total order on %d values"
                         % (value_order, n_values))
    inputs = _input_words(n_values, machine.n_inputs, value_order)
    order = [machine.initial]
    seen = {machine.initial}
    head = 0
    # breadth first with ordered inputs visits states in shortlex order
    # of their minimal access words
    while head < len(order):
        s = order[head]
        head += 1
        for a in inputs:
            t, _ = machine.step(s, a)
            if t not in seen:
                if len(seen) >= max_states:
                    raise BudgetExceededError('reachable states',
                                              max_states)
                seen.add(t)
                order.append(t)
    return order


def _complete(known_inputs, known_outputs, lattice, length):
    """Least monotone extension of a partial map on words, everywhere."""
    words = all_words(lattice.size, length)
    n_out = known_outputs.shape[1]
    result = np.full((len(words), n_out), lattice.bottom, dtype=np.intp)
    for a, b in zip(known_inputs, known_outputs):
        below = np.all(lattice.leq[a[None, :], words], axis=1)
        contrib = np.where(below[:, None], b[None, :], lattice.bottom)
        result = lattice.join_table[result, contrib]
    return words, result


def monotone_completion(partial, domain, codomain):
    """Extend a monotone partial map to the whole lattice.

    Each element is sent to the join of the images of the elements of
    the domain of definition below it, bottom when there are none.

    Parameters
    ----------
    partial : dict of int to int
        The partial map, on element indices.

    domain : Lattice
        Lattice the map is defined on.

    codomain : Lattice
        Lattice of the values.

    Returns
    -------
    completed : list of int
        Image of every element of ``domain``, in index order.
    """
    keys = sorted(partial)
    result = np.full(domain.size, codomain.bottom, dtype=np.intp)
    for a in keys:
        b = partial[a]
        below = domain.leq[a, :]
        result = codomain.join_table[result,
                                     np.where(below, b, codomain.bottom)]
    for a in keys:
        if result[a] != partial[a]:
            raise NotMonotoneError("Partial map is not monotone at %s"
                                   % domain.names[a])
    return [int(v) for v in result]


def mealy_encoding(machine, enc, max_states=MAX_STATES):
    """Truth table of the encoded step function, completed monotonically.

    Parameters
    ----------
    machine : MealyMachine
        The machine.

    enc : Encoding
        Encoding of exactly the reachable states of ``machine``.

    max_states : int, optional
        Budget on the number of reachable states.

    Returns
    -------
    table : TruthTable
        Table ``V^(k + m) -> V^(k + n)``.
    """
    reach = reachable(machine, max_states=max_states)
    if set(reach.states) != set(enc.states):
        raise ValueError("Encoding covers %d states, machine reaches %d"
                         % (enc.width, len(reach.states)))
    lattice = machine.lattice
    # the completed table has one row per code and input word
    if lattice.size ** (enc.width + machine.n_inputs) > MAX_ROWS:
        raise BudgetExceededError('truth table rows', MAX_ROWS)
    known_in, known_out = [], []
    for s in reach.states:
        for a, t, b in reach.successors(s):
            known_in.append(enc.code[s] + a)
            known_out.append(enc.code[t] + b)
    length = enc.width + machine.n_inputs
    known_in = np.array(known_in, dtype=np.intp).reshape(len(known_in),
                                                         length)
    known_out = np.array(known_out, dtype=np.intp).reshape(
        len(known_in), enc.width + machine.n_outputs)
    words, rows = _complete(known_in, known_out, lattice, length)
    index = np.ravel_multi_index(known_in.T, (lattice.size,) * length)
    if not np.array_equal(rows[index], known_out):
        raise NotMonotoneError("Machine step is not monotone for the "
                               "encoded state order")
    return TruthTable.from_rows(rows, lattice.size, length)


# translator targets: bit 0 (falsy) or bit 1 (truthy) of a value, written
# in {bot, f} or in {bot, t}
_BITS = {
    ('falsy', 0): (BOT, FALSE, BOT, FALSE),
    ('falsy', 1): (BOT, BOT, FALSE, FALSE),
    ('truthy', 0): (BOT, TRUE, BOT, TRUE),
    ('truthy', 1): (BOT, BOT, TRUE, TRUE),
}


@lru_cache(maxsize=None)
def _expressions(max_depth):
    x = np.array([BOT, FALSE, TRUE, TOP])
    sem = belnap().semantics
    and_, or_ = sem["AND"].table[..., 0], sem["OR"].table[..., 0]
    not_ = sem["NOT"].table[:, 0]
    found = {tuple(x): 'x', (BOT,) * 4: 'bot'}
    layers = [list(found.items())]
    for _ in range(max_depth):
        pool = [item for layer in layers for item in layer]
        new = []
        for vec, expr in pool:
            out = tuple(not_[list(vec)])
            if out not in found:
                found[out] = ('NOT', expr)
                new.append((out, found[out]))
        for (v1, e1), (v2, e2) in product(pool, repeat=2):
            for name, tab in (('AND', and_), ('OR', or_)):
                out = tuple(tab[list(v1), list(v2)])
                if out not in found:
                    found[out] = (name, e1, e2)
                    new.append((out, found[out]))
        layers.append(new)
    return found


def search_translator(target, max_depth=3):
    """Find a gate expression realising a unary Belnap function.

    Expressions are built from the input, bottom, AND, OR and NOT,
    breadth first by depth.

    Parameters
    ----------
    target : sequence of int
        Images of bot, f, t and top.

    max_depth : int, optional
        Maximum expression depth.

    Returns
    -------
    expr : str | tuple
        Nested tuples ``('AND', e1, e2)``, ``('NOT', e)`` over the leaves
        ``'x'`` and ``'bot'``, or None when no expression exists.
    """
    return _expressions(max_depth).get(tuple(target))


def expression_to_circuit(expr):
    """Circuit ``1 -> 1`` of a gate expression in one variable.

    Parameters
    ----------
    expr : str | tuple
        Expression as returned by :func:`search_translator`.

    Returns
    -------
    term : Circuit
        The circuit.
    """
    if expr == 'x':
        return C.identity(1)
    if expr == 'bot':
        return C.compose(C.elim(), C.intro())
    if expr[0] == 'NOT':
        return C.compose(expression_to_circuit(expr[1]),
                         C.primitive('NOT', 1, 1))
    return C.compose(C.fork(), C.tensor(expression_to_circuit(expr[1]),
                                        expression_to_circuit(expr[2])),
                     C.primitive(expr[0], 2, 1))


def _translator(part, bit):
    expr = search_translator(_BITS[part, bit])
    if expr is None:
        raise RuntimeError("No translator for bit %d in %s" % (bit, part))
    return expression_to_circuit(expr)


def constant(v):
    """Register loop emitting ``v`` on every tick.

    Parameters
    ----------
    v : int
        The value.

    Returns
    -------
    term : Circuit
        A term ``0 -> 1``.
    """
    return C.trace(1, C.compose(C.register((v,)), C.fork()))


def _clause(clause, width, conj, one):
    """Conjunction of the selected bus wires, ``width -> 1``."""
    if not clause:
        return C.compose(C.elims(width), constant(one))
    rest = [w for w in range(width) if w not in clause]
    select = C.compose(C.permutation(list(clause) + rest),
                       C.tensor(C.identity(len(clause)),
                                C.elims(len(rest))))
    gates = []
    for k in range(1, len(clause)):
        gates.append(C.tensor(C.primitive(conj, 2, 1),
                              C.identity(len(clause) - k - 1)))
    return C.compose(select, *gates)


def _dnf(clauses, width, conj, disj, one):
    """Disjunction of clauses over a bus, ``width -> 1``.

    The bus is tapped once per clause and the partial disjunction is
    carried alongside it, so the wiring never exceeds ``width + 2``.
    """
    if not clauses:
        return C.compose(C.elims(width), C.intro())
    stages = [C.fork_bus(width, 2),
              C.tensor(C.identity(width), _clause(clauses[0], width, conj,
                                                  one))]
    for clause in clauses[1:]:
        stages += [C.tensor(C.fork_bus(width, 2), C.identity(1)),
                   C.tensor(C.identity(width),
                            _clause(clause, width, conj, one),
                            C.identity(1)),
                   C.tensor(C.identity(width), C.primitive(disj, 2, 1))]
    stages.append(C.tensor(C.elims(width), C.identity(1)))
    return C.compose(*stages)


def _minimal_rows(hit, inputs, lattice):
    """Rows where ``hit`` holds but fails one covering step below."""
    strides = lattice.size ** np.arange(inputs.shape[1] - 1, -1, -1)
    minimal = hit.copy()
    for k in range(inputs.shape[1]):
        for a, b in lattice.covers:
            upper = np.flatnonzero(inputs[:, k] == b)
            lower = upper - (b - a) * strides[k]
            minimal[upper[hit[lower]]] = False
    return minimal


def _check_belnap(table):
    if table.n_values != 4:
        raise ValueError("Synthesis needs Belnap values, table is over %d"
                         % table.n_values)


def belnap_express(table):
    """Circuit computing a monotone single-output Belnap function.

    Every input is split by four translators into its falsy and truthy
    bits. The falsy bit of the output is a disjunctive normal form over
    ``{bot, f}``, where OR conjoins and AND disjoins, the truthy bit one
    over ``{bot, t}``, and the two are joined. Only minimal rows give
    clauses, since a monotone bit holds exactly above one of them.

    Parameters
    ----------
    table : TruthTable
        Monotone function ``V^m -> V``.

    Returns
    -------
    term : Circuit
        A term ``m -> 1`` evaluating to ``table`` on every input, constant
        over time.
    """
    _check_belnap(table)
    if table.n_outputs != 1:
        raise ArityError("belnap_express takes one output, got %d"
                         % table.n_outputs)
    lattice = belnap().lattice
    bad = table.violations(lattice)
    if bad:
        raise NotMonotoneError("Table is not monotone: %s is below %s"
                               % bad[0])
    m = table.n_inputs
    inputs, outputs = table.rows()
    falsy_in = np.isin(inputs, (FALSE, TOP))
    truthy_in = np.isin(inputs, (TRUE, TOP))
    # bus wire 2 i carries bit 0 of input i, wire 2 i + 1 its bit 1
    bits = np.empty((len(inputs), 2 * m), dtype=bool)
    bits[:, 0::2] = falsy_in
    bits[:, 1::2] = truthy_in

    parts = []
    for part, conj, disj, one, out_bits in (
            ('falsy', 'OR', 'AND', FALSE, np.isin(outputs[:, 0],
                                                 (FALSE, TOP))),
            ('truthy', 'AND', 'OR', TRUE, np.isin(outputs[:, 0],
                                                 (TRUE, TOP)))):
        keep = _minimal_rows(out_bits, inputs, lattice)
        clauses = [tuple(np.flatnonzero(row)) for row in bits[keep]]
        parts.append(_dnf(clauses, 2 * m, conj, disj, one))

    translate = C.tensor(*[
        C.compose(C.fork_bus(1, 4),
                  C.tensor(_translator('falsy', 0), _translator('falsy', 1),
                           _translator('truthy', 0),
                           _translator('truthy', 1)))
        for _ in range(m)])
    order = [4 * i + k for i in range(m) for k in (0, 1)] + \
        [4 * i + k for i in range(m) for k in (2, 3)]
    return C.compose(translate, C.permutation(order), C.tensor(*parts),
                     C.join())


def normalised_circuit(table):
    """Circuit computing a monotone Belnap truth table.

    Parameters
    ----------
    table : TruthTable
        Monotone function ``V^m -> V^n``.

    Returns
    -------
    term : Circuit
        The inputs forked to one :func:`belnap_express` circuit per
        output column.
    """
    _check_belnap(table)
    m, n = table.n_inputs, table.n_outputs
    columns = [belnap_express(TruthTable(table.table[..., j:j + 1], 4))
               for j in range(n)]
    return C.compose(C.fork_bus(m, n), C.tensor(*columns))


def mealy_to_circuit(machine, value_order=None, max_states=MAX_STATES):
    """Circuit whose machine is bisimilar to a Belnap Mealy machine.

    Parameters
    ----------
    machine : MealyMachine
        A monotone machine over Belnap values.

    value_order : sequence of int, optional
        Total order on values used to order the states.

    max_states : int, optional
        Budget on the number of reachable states.

    Returns
    -------
    term : Circuit
        A register holding the code of the initial state, feeding the
        normalised circuit of the encoded step function, with the state
        wires traced back.
    """
    if machine.lattice.size != 4:
        raise ValueError("Synthesis needs Belnap values")
    states = chosen_state_order(machine, value_order, max_states)
    enc = encoding(states, machine.leq, machine.lattice)
    table = mealy_encoding(machine, enc, max_states)
    core = normalised_circuit(table)
    k, m = enc.width, machine.n_inputs
    return C.trace(k, C.compose(
        C.tensor(C.register(enc.code[machine.initial]), C.identity(m)),
        core))
