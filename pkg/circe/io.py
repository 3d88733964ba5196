# License: BSD 3 clause
"""Readers and writers for the file formats used by the command line.

Every format starts with a version marker: a ``# circe <kind> 1`` comment
line for the text formats, a ``"format"`` key for the JSON ones.
"""

import csv
import json
from contextlib import contextmanager

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .interp import Interpretation, Lattice, TruthTable, belnap
from .mealy import MAX_STATES, MealyMachine, Waveform, reachable
from .dpo import make_rule
from .lang import parse, elaborate
from .exceptions import ArityError

FORMAT_VERSION = 1


@contextmanager
def _handle(fname, mode):
    if hasattr(fname, 'read') or hasattr(fname, 'write'):
        yield fname
    else:
        with open(fname, mode, newline='') as f:
            yield f


def _rows(f):
    """CSV rows with comment lines and blank lines skipped."""
    lines = (line for line in f
             if line.strip() and not line.lstrip().startswith('#'))
    for row in csv.reader(lines):
        yield [cell.strip() for cell in row]


def _values(row, interp, lineno):
    try:
        return [interp.parse_value(cell) for cell in row]
    except ValueError as err:
        raise ValueError("Row %d: %s" % (lineno, err))


def read_waveform_csv(fname, interp=None):
    """Read a waveform from CSV.

    The first row names the wires, each following row is one tick.

    Parameters
    ----------
    fname : str or file
        Path or open file.

    interp : Interpretation, optional
        Provides the value names, Belnap by default.

    Returns
    -------
    names : list of str
        Wire names, in column order.

    waveform : Waveform
        The ticks.
    """
    interp = belnap() if interp is None else interp
    with _handle(fname, 'r') as f:
        rows = list(_rows(f))
    if not rows:
        raise ValueError("Waveform file has no header row")
    names, ticks = rows[0], []
    for k, row in enumerate(rows[1:], start=1):
        if len(row) != len(names):
            raise ArityError("Row %d has %d values, expected %d"
                             % (k, len(row), len(names)))
        ticks.append(_values(row, interp, k))
    return names, Waveform(ticks, width=len(names))


def write_waveform_csv(waveform, fname, names=None, interp=None):
    """Write a waveform as CSV.

    Parameters
    ----------
    waveform : Waveform
        The ticks.

    fname : str or file
        Path or open file.

    names : list of str, optional
        Wire names, ``w0, w1, ...`` by default.

    interp : Interpretation, optional
        Provides the value names, Belnap by default.
    """
    interp = belnap() if interp is None else interp
    if names is None:
        names = ['w%d' % k for k in range(waveform.width)]
    if len(names) != waveform.width:
        raise ArityError("%d names for a waveform of width %d"
                         % (len(names), waveform.width))
    with _handle(fname, 'w') as f:
        f.write("# circe waveform %d\n" % FORMAT_VERSION)
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(names)
        for word in waveform:
            writer.writerow([interp.lattice.names[v] for v in word])


def load_truth_table_csv(fname, interp=None):
    """Read a truth table from CSV.

    After the header row there is one row per input word, in
    lexicographic order, holding the input values then the output
    values. The input width is read off the row count.

    Parameters
    ----------
    fname : str or file
        Path or open file.

    interp : Interpretation, optional
        Provides the value names, Belnap by default.

    Returns
    -------
    table : TruthTable
        The table.
    """
    interp = belnap() if interp is None else interp
    n_values = interp.lattice.size
    with _handle(fname, 'r') as f:
        rows = list(_rows(f))[1:]
    n_inputs = int(round(np.log(len(rows)) / np.log(n_values))) \
        if len(rows) > 1 else 0
    if n_values ** n_inputs != len(rows):
        raise ValueError("%d rows is not a power of %d"
                         % (len(rows), n_values))
    words = np.array([_values(row, interp, k)
                      for k, row in enumerate(rows, start=1)],
                     dtype=np.intp)
    if words.ndim != 2 or words.shape[1] <= n_inputs:
        raise ArityError("Rows need %d inputs and at least one output"
                         % n_inputs)
    table = TruthTable.from_rows(words[:, n_inputs:], n_values, n_inputs)
    expected, _ = table.rows()
    if not np.array_equal(words[:, :n_inputs], expected):
        raise ValueError("Input columns are not in lexicographic order")
    return table


def dump_truth_table_csv(table, fname, interp=None, names=None):
    """Write a truth table as CSV.

    Parameters
    ----------
    table : TruthTable
        The table.

    fname : str or file
        Path or open file.

    interp : Interpretation, optional
        Provides the value names, Belnap by default.

    names : list of str, optional
        Column names, ``x0, ..., y0, ...`` by default.
    """
    interp = belnap() if interp is None else interp
    if names is None:
        names = ['x%d' % k for k in range(table.n_inputs)] + \
            ['y%d' % k for k in range(table.n_outputs)]
    value_names = interp.lattice.names
    inputs, outputs = table.rows()
    with _handle(fname, 'w') as f:
        f.write("# circe truth-table %d\n" % FORMAT_VERSION)
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(names)
        for a, b in zip(inputs, outputs):
            writer.writerow([value_names[v] for v in a] +
                            [value_names[v] for v in b])


def _check_format(doc, kind):
    tag = doc.get('format')
    if tag != "circe-%s %d" % (kind, FORMAT_VERSION):
        raise ValueError("Not a circe %s file (format %r)" % (kind, tag))


def load_interpretation(fname):
    """Read an interpretation from JSON.

    The file lists value names, generating pairs of the order (closed
    reflexively and transitively) and one flat table per primitive in
    row-major input order. With ``"base": "belnap"`` the primitives are
    added to the Belnap interpretation instead.

    Parameters
    ----------
    fname : str or file
        Path or open file.

    Returns
    -------
    interp : Interpretation
        The interpretation.
    """
    with _handle(fname, 'r') as f:
        doc = json.load(f)
    _check_format(doc, 'interpretation')
    if doc.get('base') == 'belnap':
        base = belnap()
        lattice = base.lattice
    else:
        names = doc['values']
        n = len(names)
        index = {name: k for k, name in enumerate(names)}
        adj = np.zeros((n, n))
        for a, b in doc.get('leq', []):
            adj[index[a], index[b]] = 1
        dist = csgraph.shortest_path(sparse.csr_matrix(adj), unweighted=True)
        lattice = Lattice(names, np.isfinite(dist))
        base = Interpretation(lattice, {})
    semantics = {}
    for name, entry in doc.get('primitives', {}).items():
        flat = [lattice.index(v) for v in entry['table']]
        rows = np.array(flat, dtype=np.intp).reshape(-1, entry['outputs'])
        semantics[name] = TruthTable.from_rows(rows, lattice.size,
                                               entry['inputs'])
    return base.extend(semantics)


def dump_interpretation(interp, fname):
    """Write an interpretation as JSON.

    Parameters
    ----------
    interp : Interpretation
        The interpretation.

    fname : str or file
        Path or open file.
    """
    lattice = interp.lattice
    names = lattice.names
    leq = [[names[a], names[b]] for a, b in zip(*np.nonzero(lattice.leq))
           if a != b]
    primitives = {}
    for name, table in interp.semantics.items():
        _, outputs = table.rows()
        primitives[name] = {'inputs': table.n_inputs,
                            'outputs': table.n_outputs,
                            'table': [names[v] for v in outputs.ravel()]}
    doc = {'format': "circe-interpretation %d" % FORMAT_VERSION,
           'values': list(names), 'leq': leq, 'primitives': primitives}
    with _handle(fname, 'w') as f:
        json.dump(doc, f, indent=1)


def dump_mealy(machine, fname, max_states=MAX_STATES):
    """Write the reachable part of a machine as JSON.

    States are renamed ``s0, s1, ...`` in breadth-first visit order, so
    ``s0`` is the initial state.

    Parameters
    ----------
    machine : MealyMachine
        The machine.

    fname : str or file
        Path or open file.

    max_states : int, optional
        Budget on the number of reachable states.
    """
    m = reachable(machine, max_states=max_states)
    names = m.lattice.names
    state_names = {s: 's%d' % k for k, s in enumerate(m.states)}
    transitions = []
    for s in m.states:
        for a, t, b in m.successors(s):
            transitions.append([state_names[s], [names[v] for v in a],
                                state_names[t], [names[v] for v in b]])
    order = None
    if m.ordered:
        order = [[state_names[s], state_names[t]] for s in m.states
                 for t in m.states if s != t and m.leq(s, t)]
    doc = {'format': "circe-mealy %d" % FORMAT_VERSION,
           'values': list(names), 'n_inputs': m.n_inputs,
           'n_outputs': m.n_outputs, 'states': list(state_names.values()),
           'initial': state_names[m.initial], 'order': order,
           'transitions': transitions}
    with _handle(fname, 'w') as f:
        json.dump(doc, f, indent=1)


def load_mealy(fname, interp=None):
    """Read a machine written by :func:`dump_mealy`.

    Parameters
    ----------
    fname : str or file
        Path or open file.

    interp : Interpretation, optional
        Provides the lattice, Belnap by default. Its value names must
        match the file.

    Returns
    -------
    machine : MealyMachine
        Table machine with string states.
    """
    interp = belnap() if interp is None else interp
    with _handle(fname, 'r') as f:
        doc = json.load(f)
    _check_format(doc, 'mealy')
    lattice = interp.lattice
    if tuple(doc['values']) != lattice.names:
        raise ValueError("Machine values %s do not match %s"
                         % (doc['values'], list(lattice.names)))
    table = {}
    for s, a, t, b in doc['transitions']:
        table[s, tuple(lattice.index(v) for v in a)] = \
            (t, tuple(lattice.index(v) for v in b))
    expected = len(doc['states']) * lattice.size ** doc['n_inputs']
    if len(table) != expected:
        raise ValueError("Transition table has %d entries, expected %d"
                         % (len(table), expected))
    order = doc.get('order')
    return MealyMachine.from_table(
        doc['n_inputs'], doc['n_outputs'], lattice, doc['initial'], table,
        order=None if order is None else [tuple(p) for p in order])


def load_rules(fname, interp=None, absorb='comonoid'):
    """Read rewrite rules from a circuit-language file.

    Circuits ``NAME_lhs`` and ``NAME_rhs`` form the rule ``NAME``; other
    circuits of the file may be used as subcircuits.

    Parameters
    ----------
    fname : str or file
        Path or open file.

    interp : Interpretation, optional
        Primitives and value names, Belnap by default.

    absorb : 'comonoid' | 'frobenius', optional
        Translation of the rule sides.

    Returns
    -------
    rules : list of DpoRule
        Rules in file order.
    """
    with _handle(fname, 'r') as f:
        source = parse(f.read())
    names = source.names()
    rules = []
    for name in names:
        if not name.endswith('_lhs'):
            continue
        stem = name[:-len('_lhs')]
        if stem + '_rhs' not in names:
            raise ValueError("Rule %s has no right-hand side" % stem)
        lhs = elaborate(source, interp=interp, name=name)
        rhs = elaborate(source, interp=interp, name=stem + '_rhs')
        rules.append(make_rule(lhs, rhs, name=stem, absorb=absorb))
    if not rules:
        raise ValueError("No rules found, expected NAME_lhs / NAME_rhs "
                         "circuit pairs")
    return rules
