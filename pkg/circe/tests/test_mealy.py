# License: BSD 3 clause

import numpy as np
import pytest

from circe import (BOT, FALSE, TRUE, TOP, MealyMachine, Waveform, belnap,
                   bisimilar, cascade, check_mealy_monotone,
                   circuit_to_mealy, direct, distinguishing_waveform,
                   mealy_trace, minimize, reachable, run, run_from)
from circe import circuit as C
from circe.datasets import load_circuit
from circe.exceptions import ArityError, BudgetExceededError
from circe.utils.testing import random_machine


def machine(term):
    return circuit_to_mealy(term, belnap())


def test_waveform():
    wave = Waveform([(TRUE, FALSE), (BOT, TOP)])
    assert wave.width == 2 and len(wave) == 2
    assert wave[1] == (BOT, TOP)
    assert list(wave[:1]) == [(TRUE, FALSE)]
    assert len(wave + wave) == 4
    assert Waveform([], width=3).width == 3
    with pytest.raises(ArityError):
        wave + Waveform([(TRUE,)])


def test_delay_states():
    m = machine(C.delay(1))
    reach = reachable(m)
    assert len(reach.states) == 4
    assert reach.states[0] == (BOT,)
    assert len(minimize(m).states) == 4
    wave = Waveform([(TRUE,), (FALSE,), (TOP,)])
    np.testing.assert_array_equal(run(m, wave).values,
                                  [[BOT], [TRUE], [FALSE]])
    assert check_mealy_monotone(m) == []


def test_value_emitted_once():
    m = machine(C.value([TRUE]))
    out = run(m, Waveform([(), (), ()], width=0))
    np.testing.assert_array_equal(out.values, [[TRUE], [BOT], [BOT]])


def test_sr_latch():
    m = machine(load_circuit('sr_latch'))
    wave = Waveform([(FALSE, TRUE), (FALSE, FALSE), (TRUE, FALSE),
                     (FALSE, FALSE)])
    out, state = run_from(m, m.initial, wave)
    assert out == Waveform([(BOT, FALSE), (TRUE, FALSE), (TRUE, FALSE),
                            (FALSE, TRUE)])
    # the register holds NOT(OR(r, fb)) of the last tick
    assert state == (FALSE,)
    with pytest.raises(ArityError):
        run(m, Waveform([(TRUE,)]))


def test_distinguishing_waveform():
    m_and = machine(C.primitive('AND', 2, 1))
    m_or = machine(C.primitive('OR', 2, 1))
    witness = distinguishing_waveform(m_and, m_or)
    # first differing input in lexicographic order: AND(bot, f) = f
    assert witness == Waveform([(BOT, FALSE)])
    assert not bisimilar(m_and, m_or)
    assert distinguishing_waveform(m_and, m_and) is None
    with pytest.raises(ArityError):
        bisimilar(m_and, machine(C.primitive('NOT', 1, 1)))


def test_products():
    NOT = C.primitive('NOT', 1, 1)
    ident = machine(C.identity(1))
    assert bisimilar(cascade(machine(NOT), machine(NOT)), ident)
    both = direct(machine(NOT), machine(C.delay(1)))
    assert bisimilar(both, machine(C.tensor(NOT, C.delay(1))))
    swap = mealy_trace(machine(C.symmetry(1, 1)), 1)
    assert bisimilar(swap, ident)
    with pytest.raises(ArityError):
        mealy_trace(ident, 2)
    with pytest.raises(ArityError):
        cascade(machine(C.primitive('AND', 2, 1)),
                machine(C.primitive('AND', 2, 1)))


def test_table_machine_monotonicity():
    lattice = belnap().lattice
    table = {('a', ()): ('b', (TRUE,)), ('b', ()): ('b', (FALSE,))}
    m = MealyMachine.from_table(0, 1, lattice, 'a', table,
                                order=[('a', 'b')])
    assert m.leq('a', 'b') and not m.leq('b', 'a')
    assert check_mealy_monotone(m) == [('a', (), 'b', ())]
    with pytest.raises(ValueError, match="no state order"):
        check_mealy_monotone(MealyMachine.from_table(0, 1, lattice, 'a',
                                                     table))


def test_reachable_budget():
    with pytest.raises(BudgetExceededError):
        reachable(machine(C.delay(2)), max_states=3)


@pytest.mark.parametrize("seed", range(4))
def test_minimize_random(seed):
    m = random_machine(n_inputs=1, n_outputs=1, n_delays=2,
                       random_state=seed)
    small = minimize(m)
    assert small.initial == 0
    assert len(small.states) <= len(m.states)
    assert bisimilar(small, m)


def test_closed_circuits():
    NOT = C.primitive('NOT', 1, 1)
    m = machine(C.compose(C.waveform([TRUE]), NOT))
    assert (m.n_inputs, m.n_outputs) == (0, 1)
    ticks = Waveform([(), (), ()], width=0)
    np.testing.assert_array_equal(run(m, ticks).values, [[FALSE]] * 3)
    assert len(reachable(m).states) == 1
    assert bisimilar(m, machine(C.waveform([FALSE])))
    witness = distinguishing_waveform(m, machine(C.value([FALSE])))
    assert witness == Waveform([(), ()], width=0)


def test_minimize_keeps_state_order():
    small = minimize(machine(C.delay(1)))
    assert small.ordered
    # block 0 holds the bottom register, below every other block
    assert all(small.leq(0, s) for s in small.states)
    assert not small.leq(1, 0)
    assert check_mealy_monotone(small) == []
    unordered = MealyMachine.from_table(
        0, 1, belnap().lattice, 'a', {('a', ()): ('a', (TRUE,))})
    assert not minimize(unordered).ordered
