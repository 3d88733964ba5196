# License: BSD 3 clause

from itertools import product

import numpy as np
import pytest

from circe import (BOT, FALSE, TRUE, TOP, MealyMachine, TruthTable, belnap,
                   belnap_express, bisimilar, chain_lattice,
                   chosen_state_order, circuit_to_mealy, encoding,
                   mealy_encoding, mealy_to_circuit, monotone_completion,
                   normalised_circuit, search_translator)
from circe import circuit as C
from circe.exceptions import BudgetExceededError, NotMonotoneError
from circe.utils.testing import random_machine, random_monotone_table


def check_table(term, table, n_ticks=2):
    """The machine of term outputs the table on every tick."""
    m = circuit_to_mealy(term, belnap())
    for word in product(range(4), repeat=table.n_inputs):
        state = m.initial
        for _ in range(n_ticks):
            state, out = m.step(state, word)
            assert out == table(*word)


def test_encoding():
    lattice = belnap().lattice
    leq = lambda s, t: bool(lattice.leq[s, t])  # noqa: E731
    enc = encoding([BOT, FALSE, TRUE, TOP], leq, lattice)
    assert enc.code[BOT] == (TOP, BOT, BOT, BOT)
    assert enc.code[FALSE] == (TOP, TOP, BOT, BOT)
    assert enc.code[TRUE] == (TOP, BOT, TOP, BOT)
    assert enc.code[TOP] == (TOP, TOP, TOP, TOP)
    for s, t in product(range(4), repeat=2):
        assert leq(s, t) == lattice.leq_words(enc.code[s], enc.code[t])
    assert enc.decode[TOP, TOP, BOT, BOT] == FALSE


def test_monotone_completion():
    completed = monotone_completion({2: 6, 4: 7}, chain_lattice(5),
                                    chain_lattice(8))
    assert completed == [0, 0, 6, 6, 7]
    with pytest.raises(NotMonotoneError):
        monotone_completion({2: 6, 4: 5}, chain_lattice(5),
                            chain_lattice(8))


def test_search_translator():
    assert search_translator([BOT, TRUE, FALSE, TOP]) == ('NOT', 'x')
    assert search_translator([BOT, FALSE, TRUE, TOP]) == 'x'
    # t on bottom is not bottom preserving, no gate expression has it
    assert search_translator([TRUE] * 4) is None


@pytest.mark.parametrize("name", ['AND', 'OR', 'NOT'])
def test_express_gates(name):
    table = belnap().semantics[name]
    check_table(belnap_express(table), table)


def test_express_rejects_non_monotone():
    h = TruthTable(np.array([BOT, BOT, FALSE, BOT])[:, None], 4)
    with pytest.raises(NotMonotoneError):
        belnap_express(h)
    with pytest.raises(ValueError):
        belnap_express(TruthTable([[0], [1]], 2))


@pytest.mark.parametrize("seed", range(10))
def test_express_random(seed):
    table = random_monotone_table(n_inputs=2, random_state=seed)
    term = belnap_express(table)
    assert term.arity == (2, 1)
    check_table(term, table)


def test_normalised_circuit():
    sem = belnap().semantics
    rows = [sem['AND'](*w) + sem['OR'](*w)
            for w in product(range(4), repeat=2)]
    table = TruthTable.from_rows(rows, 4, 2)
    term = normalised_circuit(table)
    assert term.arity == (2, 2)
    check_table(term, table, n_ticks=1)


def latch_machine():
    """Two states, the second reached once t or top was read."""
    lattice = belnap().lattice
    table = {}
    for s, a in product((0, 1), range(4)):
        seen = int(s == 1 or a in (TRUE, TOP))
        table[s, (a,)] = (seen, (TRUE,) if s else (BOT,))
    return MealyMachine.from_table(1, 1, lattice, 0, table,
                                   order=[(0, 1)])


def test_chosen_state_order():
    m = latch_machine()
    assert chosen_state_order(m) == [0, 1]
    with pytest.raises(ValueError):
        chosen_state_order(m, value_order=[0, 1, 2])


def test_mealy_encoding():
    m = latch_machine()
    enc = encoding([0, 1], m.leq, m.lattice)
    table = mealy_encoding(m, enc)
    assert (table.n_inputs, table.n_outputs) == (3, 3)
    assert table(*(enc.code[0] + (TRUE,))) == enc.code[1] + (BOT,)
    assert table(*(enc.code[1] + (FALSE,))) == enc.code[1] + (TRUE,)
    with pytest.raises(ValueError):
        mealy_encoding(m, encoding([0], m.leq, m.lattice))


@pytest.mark.parametrize("machine", [
    latch_machine(),
    circuit_to_mealy(C.value([TRUE]), belnap()),
])
def test_round_trip(machine):
    term = mealy_to_circuit(machine)
    assert bisimilar(circuit_to_mealy(term, belnap()), machine)


@pytest.mark.parametrize("seed", range(8))
def test_round_trip_random(seed):
    machine = random_machine(n_inputs=1, n_outputs=1, n_delays=1,
                             random_state=seed)
    term = mealy_to_circuit(machine)
    assert bisimilar(circuit_to_mealy(term, belnap()), machine)


def test_round_trip_eight_states():
    machine = random_machine(n_delays=2, random_state=3)
    assert len(machine.states) == 8
    term = mealy_to_circuit(machine)
    assert bisimilar(circuit_to_mealy(term, belnap()), machine)


def test_round_trip_budget():
    # sixteen states and one input give a table of 4 ** 17 rows
    with pytest.raises(BudgetExceededError):
        mealy_to_circuit(circuit_to_mealy(C.delay(2), belnap()))
