# License: BSD 3 clause

import pytest

from circe import (TRUE, belnap, bisimilar, circuit_to_mealy,
                   evaluate_combinational, is_combinational, stats,
                   substitute)
from circe import circuit as C
from circe.datasets import load_circuit
from circe.exceptions import ArityError


AND = C.primitive('AND', 2, 1)
NOT = C.primitive('NOT', 1, 1)


def test_arities():
    assert C.compose(C.fork(), AND).arity == (1, 1)
    assert C.tensor(NOT, AND).arity == (3, 2)
    assert C.trace(1, C.symmetry(1, 1)).arity == (1, 1)
    assert C.symmetry(2, 3).arity == (5, 5)
    assert C.value([TRUE, TRUE]).arity == (0, 2)
    assert C.delay(3).arity == (3, 3)
    assert C.permutation([2, 0, 1]).arity == (3, 3)

    with pytest.raises(ArityError):
        C.compose(AND, AND)
    with pytest.raises(ArityError):
        C.trace(2, NOT)
    with pytest.raises(ArityError):
        C.uncertain([(TRUE,), (TRUE, TRUE)])
    with pytest.raises(ValueError):
        C.permutation([0, 0])


def test_normalised_nesting():
    # identities vanish from compositions and merge in tensors
    assert C.compose(C.identity(1), NOT, C.identity(1)) == NOT
    assert C.tensor(C.identity(1), C.identity(2)) == C.identity(3)
    assert C.tensor(C.identity(0), NOT) == NOT
    assert C.trace(0, AND) is AND
    seq = C.compose(C.compose(NOT, NOT), NOT)
    assert len(seq.children) == 3
    assert C.value([]) == C.identity(0)
    assert C.uncertain([(TRUE,), (TRUE,)], forever=True) == \
        C.waveform([TRUE])


def test_stats():
    half_adder = load_circuit('half_adder')
    assert half_adder.arity == (2, 2)
    res = stats(half_adder)
    assert res['delay_count'] == 0 and res['value_count'] == 0
    assert res['gate_count'] == 5
    assert res['is_combinational']

    latch = load_circuit('sr_latch')
    res = stats(latch)
    assert latch.arity == (2, 2)
    assert res['delay_count'] == 1
    assert not res['is_combinational']

    assert not is_combinational(C.value([TRUE]))
    assert is_combinational(C.value([0]))


def test_substitute():
    term = C.compose(C.primitive('g', 1, 1), C.primitive('g', 1, 1))
    new = substitute(term, 'g', NOT)
    assert new == C.compose(NOT, NOT)
    with pytest.raises(ArityError):
        substitute(term, 'g', AND)


def test_yanking():
    interp = belnap()
    loop = C.trace(1, C.symmetry(1, 1))
    assert bisimilar(circuit_to_mealy(loop, interp),
                     circuit_to_mealy(C.identity(1), interp))


@pytest.mark.parametrize("order", [[0, 1, 2], [2, 0, 1], [1, 2, 0],
                                   [2, 1, 0]])
def test_permutation_routes(order):
    interp = belnap()
    word = (0, 1, 2)
    out = evaluate_combinational(C.permutation(order), interp, word)
    assert out == tuple(word[k] for k in order)
