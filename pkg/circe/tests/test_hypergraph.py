# License: BSD 3 clause

import pytest

from circe import (Hypergraph, InterfacedHypergraph, belnap, bisimilar,
                   check_monogamous_acyclic, check_partial_left_monogamous,
                   check_partial_monogamous, circuit_to_mealy,
                   compose_cospans, cospan_iso, extract_term,
                   fold_interfaces, tensor_cospans, term_to_cospan,
                   to_dot, trace_cospan, unfold_interfaces)
from circe import circuit as C
from circe.datasets import load_circuit
from circe.hypergraph import Edge, degree
from circe.exceptions import (ArityError, BudgetExceededError,
                              InvalidCospanError)


E1 = C.primitive('e1', 1, 1)
E2 = C.primitive('e2', 1, 1)
G = C.primitive('g', 2, 1)


def same(t1, t2, absorb='frobenius'):
    return cospan_iso(term_to_cospan(t1, absorb=absorb),
                      term_to_cospan(t2, absorb=absorb)) is not None


def test_translation_shapes():
    c = term_to_cospan(C.compose(E1, E2))
    assert (c.n_vertices, len(c.edges), c.arity) == (3, 2, (1, 1))
    assert check_monogamous_acyclic(c)
    assert degree(c, c.inputs[0]) == (0, 1)
    assert degree(c, c.outputs[0]) == (1, 0)

    fork = term_to_cospan(C.fork())
    assert fork.n_vertices == 1 and fork.outputs == (0, 0)
    valid, report = check_partial_monogamous(fork, return_report=True)
    assert not valid and "output map is not injective" in report
    assert check_partial_left_monogamous(fork)

    # joins and intros stay edges in the comonoid reading
    join = term_to_cospan(C.join(), absorb='comonoid')
    assert [e.label for e in join.edges] == ['join']
    assert term_to_cospan(C.join()).n_vertices == 1
    with pytest.raises(ValueError):
        term_to_cospan(E1, absorb='cartesian')


def test_trace_validators():
    loop = term_to_cospan(C.trace(1, C.compose(G, C.fork())))
    assert not check_monogamous_acyclic(loop)
    assert not check_partial_monogamous(loop)
    assert check_partial_left_monogamous(loop)

    feedback = term_to_cospan(C.trace(1, C.primitive('e', 2, 2)))
    valid, report = check_monogamous_acyclic(feedback, return_report=True)
    assert not valid and "graph has a directed cycle" in report
    assert check_partial_monogamous(feedback)


def test_structural_laws():
    assert same(C.trace(1, C.symmetry(1, 1)), C.identity(1))
    assert same(C.compose(C.symmetry(1, 1), C.symmetry(1, 1)),
                C.identity(2))
    assert same(C.compose(C.tensor(E1, E2), C.symmetry(1, 1)),
                C.compose(C.symmetry(1, 1), C.tensor(E2, E1)))
    assert same(C.compose(C.fork(), C.join()), C.identity(1))
    assert not same(C.compose(C.fork(), C.join()), C.identity(1),
                    absorb='comonoid')
    assert not same(C.compose(E1, E2), C.compose(E2, E1))


def test_cospan_operations():
    c1, c2 = term_to_cospan(E1), term_to_cospan(G)
    assert cospan_iso(tensor_cospans(c1, c2),
                      term_to_cospan(C.tensor(E1, G))) is not None
    assert cospan_iso(compose_cospans(tensor_cospans(c1, c1), c2),
                      term_to_cospan(C.compose(C.tensor(E1, E1), G))) \
        is not None
    body = C.compose(C.tensor(C.identity(1), E1), G, C.fork())
    assert cospan_iso(trace_cospan(1, term_to_cospan(body)),
                      term_to_cospan(C.trace(1, body))) is not None
    with pytest.raises(ArityError):
        compose_cospans(c2, c2)
    with pytest.raises(ArityError):
        trace_cospan(2, c1)

    folded = fold_interfaces(c2)
    assert folded.arity == (0, 3)
    back = unfold_interfaces(folded, 2)
    assert (back.inputs, back.outputs) == (c2.inputs, c2.outputs)


def test_iso_budget():
    c = term_to_cospan(load_circuit('half_adder'))
    assert cospan_iso(c, c) is not None
    with pytest.raises(BudgetExceededError):
        cospan_iso(c, c, max_steps=1)


def test_validation():
    with pytest.raises(ValueError, match="missing vertex"):
        Hypergraph(1, [Edge('e1', (0,), (1,))])
    with pytest.raises(ValueError, match="missing vertex"):
        InterfacedHypergraph(Hypergraph(1), (0,), (2,))


@pytest.mark.parametrize("name", ['half_adder', 'sr_latch', 'cyclic_mux'])
def test_extract_term(name):
    term = load_circuit(name)
    c = term_to_cospan(term, absorb='comonoid')
    back = extract_term(c, mode='traced_comonoid')
    assert back.arity == term.arity
    assert cospan_iso(term_to_cospan(back, absorb='comonoid'), c) \
        is not None
    interp = belnap()
    assert bisimilar(circuit_to_mealy(back, interp),
                     circuit_to_mealy(term, interp))


def test_extract_traced_mode():
    term = C.trace(1, C.compose(C.primitive('e', 2, 2), C.symmetry(1, 1)))
    c = term_to_cospan(term)
    back = extract_term(c, mode='traced')
    assert cospan_iso(term_to_cospan(back), c) is not None
    with pytest.raises(InvalidCospanError):
        extract_term(term_to_cospan(C.fork()), mode='traced')
    with pytest.raises(ValueError):
        extract_term(c, mode='frobenius')


def test_to_dot():
    c = term_to_cospan(C.compose(C.value([2]), E1), absorb='comonoid')
    dot = to_dot(c, name='demo', value_names=belnap().lattice.names)
    assert dot.source.startswith('digraph demo')
    assert 'value t' in dot.source
    assert 'e1' in dot.source
