# License: BSD 3 clause
"""Compiled evaluation of circuits over batches of inputs.

A term is translated into its hypergraph (forks and elims absorbed,
joins and intros kept as edges), the stateless edges are levelised with
a condensation of their dependency graph, and one tick is computed as a
least fixed point: every vertex starts at bottom and cyclic levels are
iterated until stable.
"""

import numpy as np
import networkx as nx

from .hypergraph import term_to_cospan
from .interp import lattice_height
from .exceptions import ArityError, FixpointError

_STATEFUL = ('delay', 'value')


class _Group:
    """Edges of one level sharing a label, evaluated in one numpy call."""

    def __init__(self, label, edges):
        self.label = label
        self.sources = np.array([e.sources for e in edges], dtype=np.intp)
        self.targets = np.array([e.targets for e in edges], dtype=np.intp)
        self.values = np.array([e.value if e.value is not None else 0
                                for e in edges], dtype=np.intp)


class Netlist:
    """Circuit compiled for repeated evaluation.

    The state is one letter per delayed wire and per value letter, in
    edge order: a delay slot holds its last input, a value slot holds its
    letter on the first tick and bottom afterwards.

    Parameters
    ----------
    term : Circuit
        The circuit. Uncertain generators must be resolved first.

    interp : Interpretation
        Meaning of the primitives.
    """

    def __init__(self, term, interp):
        self.interp = interp
        lattice = interp.lattice
        self.bottom = lattice.bottom
        cospan = term_to_cospan(term, absorb='comonoid')
        self.n_vertices = cospan.n_vertices
        self.inputs = np.array(cospan.inputs, dtype=np.intp)
        self.outputs = np.array(cospan.outputs, dtype=np.intp)
        self.n_inputs, self.n_outputs = term.n_inputs, term.n_outputs

        state_edges, logic = [], []
        for e in cospan.edges:
            if e.label.startswith('uncertain'):
                raise ValueError("Resolve uncertain values before "
                                 "evaluating a circuit")
            if e.label in ('join', 'intro', 'waveform') + _STATEFUL:
                pass
            elif e.label not in interp.semantics:
                raise ValueError("Unknown primitive %s" % e.label)
            elif interp.signature.arity(e.label) != (len(e.sources),
                                                     len(e.targets)):
                raise ArityError("Primitive %s used with arity %d -> %d"
                                 % (e.label, len(e.sources),
                                    len(e.targets)))
            (state_edges if e.label in _STATEFUL else logic).append(e)

        self.state_targets = np.array([e.targets[0] for e in state_edges],
                                      dtype=np.intp)
        self.delay_sources = np.array(
            [e.sources[0] if e.label == 'delay' else -1
             for e in state_edges], dtype=np.intp)
        self.initial_state = tuple(
            self.bottom if e.label == 'delay' else int(e.value)
            for e in state_edges)
        self.n_state = len(state_edges)
        self.levels = self._levelise(logic)
        self.max_rounds = self.n_vertices * lattice_height(lattice) + 1

    def _levelise(self, logic):
        driver = {}
        for k, e in enumerate(logic):
            for v in e.targets:
                driver[v] = k
        deps = nx.DiGraph()
        deps.add_nodes_from(range(len(logic)))
        for k, e in enumerate(logic):
            deps.add_edges_from((driver[v], k) for v in e.sources
                                if v in driver)
        cond = nx.condensation(deps)

        def _is_cyclic(scc):
            members = cond.nodes[scc]['members']
            k = next(iter(members))
            return len(members) > 1 or deps.has_edge(k, k)

        levels = []
        for generation in nx.topological_generations(cond):
            members = sorted(k for scc in generation
                             for k in cond.nodes[scc]['members'])
            cyclic = any(_is_cyclic(scc) for scc in generation)
            groups = {}
            for k in members:
                groups.setdefault(logic[k].label, []).append(logic[k])
            levels.append((cyclic, [_Group(label, edges)
                                    for label, edges in groups.items()]))
        return levels

    def _apply(self, group, values):
        label = group.label
        if label == 'intro':
            return
        if label == 'waveform':
            values[group.targets[:, 0]] = group.values[:, None]
            return
        if label == 'join':
            a = values[group.sources[:, 0]]
            b = values[group.sources[:, 1]]
            values[group.targets[:, 0]] = \
                self.interp.lattice.join_table[a, b]
            return
        table = self.interp.semantics[label].table
        idx = tuple(values[group.sources[:, k]]
                    for k in range(group.sources.shape[1]))
        batch = values.shape[1]
        res = table[idx] if idx else np.broadcast_to(
            table, (len(group.targets), batch, table.shape[-1]))
        values[group.targets] = np.transpose(res, (0, 2, 1))

    def evaluate(self, state, inputs):
        """One tick for a batch of states and inputs.

        Parameters
        ----------
        state : ndarray, shape (n_state, n_batch)
            Register contents, one column per batch element.

        inputs : ndarray, shape (n_inputs, n_batch)
            Input values.

        Returns
        -------
        next_state : ndarray, shape (n_state, n_batch)
            Register contents after the tick.

        outputs : ndarray, shape (n_outputs, n_batch)
            Output values.
        """
        inputs = np.asarray(inputs, dtype=np.intp)
        state = np.asarray(state, dtype=np.intp)
        batch = inputs.shape[1] if inputs.ndim == 2 else state.shape[1]
        values = np.full((self.n_vertices, batch), self.bottom,
                         dtype=np.intp)
        values[self.inputs] = inputs
        values[self.state_targets] = state
        for cyclic, groups in self.levels:
            if not cyclic:
                for group in groups:
                    self._apply(group, values)
                continue
            for _ in range(self.max_rounds + 1):
                before = values.copy()
                for group in groups:
                    self._apply(group, values)
                if np.array_equal(before, values):
                    break
            else:
                raise FixpointError("Feedback did not stabilise within %d "
                                    "rounds" % self.max_rounds)
        next_state = np.full_like(state, self.bottom)
        delayed = self.delay_sources >= 0
        next_state[delayed] = values[self.delay_sources[delayed]]
        return next_state, values[self.outputs]

    def step(self, state, word):
        """One tick for a single state and input word.

        Parameters
        ----------
        state : sequence of int
            Register contents.

        word : sequence of int
            Input values.

        Returns
        -------
        next_state : tuple of int
            Register contents after the tick.

        outputs : tuple of int
            Output values.
        """
        if len(word) != self.n_inputs:
            raise ArityError("Circuit has %d inputs, got %d"
                             % (self.n_inputs, len(word)))
        state = np.array(state, dtype=np.intp).reshape(self.n_state, 1)
        inputs = np.array(word, dtype=np.intp).reshape(self.n_inputs, 1)
        nxt, out = self.evaluate(state, inputs)
        return (tuple(int(v) for v in nxt[:, 0]),
                tuple(int(v) for v in out[:, 0]))


def evaluate_combinational(term, interp, word):
    """Evaluate a term on one input word from its initial state.

    For a combinational term this is its function.

    Parameters
    ----------
    term : Circuit
        The term.

    interp : Interpretation
        Meaning of the primitives.

    word : sequence of int
        Input values.

    Returns
    -------
    outputs : tuple of int
        Output values on the first tick.
    """
    net = Netlist(term, interp)
    return net.step(net.initial_state, word)[1]
