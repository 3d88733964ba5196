# License: BSD 3 clause
"""Seeded builders of random circuits, tables and machines for tests."""

from sklearn.utils import check_random_state

from ..interp import TruthTable, belnap
from ..lang import loads
from ..mealy import circuit_to_mealy, reachable
from ..netlist import evaluate_combinational

GATES = (('AND', 2), ('OR', 2), ('NOT', 1))


def random_source(n_inputs=2, n_outputs=1, n_gates=4, n_delays=1,
                  instant=False, random_state=0):
    """Circuit-language source of a random Belnap circuit.

    Gates read any earlier wire or any register output. Registers are
    feedback wires bound to a delayed wire, so all feedback is delay
    guarded unless ``instant`` is set.
    """
    rng = check_random_state(random_state)
    inputs = ['x%d' % k for k in range(n_inputs)]
    regs = ['q%d' % k for k in range(n_delays)]
    loops = ['l0'] if instant else []
    wires = inputs + regs + loops
    lines = []
    for k in range(n_gates):
        name, arity = GATES[rng.randint(len(GATES))]
        args = [wires[rng.randint(len(wires))] for _ in range(arity)]
        lines.append("w%d = %s(%s);" % (k, name, ', '.join(args)))
        wires.append('w%d' % k)
    inner = wires[n_inputs:] or inputs
    for q in regs:
        lines.append("%s = delay(%s);" % (q, inner[rng.randint(len(inner))]))
    for lp in loops:
        lines.append("%s = %s(%s);" % (lp, 'NOT',
                                       inner[rng.randint(len(inner))]))
    outputs = [wires[rng.randint(len(wires))] for _ in range(n_outputs)]
    feedback = regs + loops
    body = ["feedback %s;" % ', '.join(feedback)] if feedback else []
    body += lines
    return "circuit rand(%s) -> (%s) {\n    %s\n}\n" % (
        ', '.join(inputs), ', '.join(outputs), '\n    '.join(body))


def random_circuit(n_inputs=2, n_outputs=1, n_gates=4, n_delays=1,
                   instant=False, random_state=0):
    """Random Belnap circuit, see :func:`random_source`."""
    return loads(random_source(n_inputs, n_outputs, n_gates, n_delays,
                               instant, random_state))


def random_monotone_table(n_inputs=2, n_gates=6, random_state=0):
    """Bottom-preserving monotone Belnap function ``V^m -> V``.

    Tabulates a random combinational gate circuit, whose function is
    monotone and bottom-preserving because the gates are.
    """
    interp = belnap()
    rng = check_random_state(random_state)
    src = random_source(n_inputs, 1, n_gates, 0, False, rng)
    term = loads(src)
    return TruthTable.from_function(
        lambda w: evaluate_combinational(term, interp, w),
        interp.lattice.size, n_inputs, 1)


def random_machine(n_inputs=1, n_outputs=1, n_gates=4, n_delays=1,
                   random_state=0):
    """Reachable monotone table machine of a random circuit.

    With ``n_delays`` registers the machine has at most ``4 **
    n_delays`` states.
    """
    term = random_circuit(n_inputs, n_outputs, n_gates, n_delays,
                          random_state=random_state)
    return reachable(circuit_to_mealy(term, belnap()))
