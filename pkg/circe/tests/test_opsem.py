# License: BSD 3 clause

import pytest

from circe import (BOT, FALSE, TRUE, TOP, Waveform, belnap, bisimilar,
                   circuit_to_mealy, global_trace_delay_form, instant_feedback,
                   is_combinational, mealy_rule, obs_equiv,
                   productivity_step, run, run_waveform, to_mealy_form,
                   value_normal_form, value_rule_step)
from circe import circuit as C
from circe.datasets import load_circuit
from circe.exceptions import ArityError, BudgetExceededError
from circe.utils.testing import random_circuit


AND = C.primitive('AND', 2, 1)
OR = C.primitive('OR', 2, 1)
NOT = C.primitive('NOT', 1, 1)

SET_RESET = Waveform([(FALSE, TRUE), (FALSE, FALSE), (TRUE, FALSE),
                      (FALSE, FALSE)])
LATCHED = Waveform([(BOT, FALSE), (TRUE, FALSE), (TRUE, FALSE),
                    (FALSE, TRUE)])


def test_trace_delay_form():
    latch = load_circuit('sr_latch')
    form = global_trace_delay_form(latch)
    assert (form.n_feedback, form.n_delays, form.n_trace) == (1, 1, 2)
    assert form.values == ()
    assert is_combinational(form.core)
    assert (form.n_inputs, form.n_outputs) == (2, 2)
    interp = belnap()
    assert bisimilar(circuit_to_mealy(form.to_circuit(), interp),
                     circuit_to_mealy(latch, interp))

    with pytest.raises(ValueError):
        global_trace_delay_form(C.waveform([TRUE]))


def test_mealy_rule_and_first_step():
    interp = belnap()
    pre = mealy_rule(global_trace_delay_form(load_circuit('sr_latch')))
    assert pre.state == (BOT,)
    assert pre.n_feedback == 1
    form = instant_feedback(pre, interp)
    out, nxt = productivity_step(form, (FALSE, TRUE), interp)
    assert out == (BOT, FALSE)
    assert nxt.state == (TRUE,)
    with pytest.raises(ArityError):
        productivity_step(form, (FALSE,), interp)


def test_values_fused_into_register():
    term = C.tensor(C.value([TRUE]), C.delay(1))
    pre = mealy_rule(global_trace_delay_form(term))
    assert pre.state == (BOT, TRUE)
    # delayed wires start at the given bottom
    pre = mealy_rule(global_trace_delay_form(term), bottom=FALSE)
    assert pre.state == (FALSE, TRUE)


def test_run_waveform():
    interp = belnap()
    assert run_waveform(load_circuit('sr_latch'), SET_RESET, interp) == \
        LATCHED
    with pytest.raises(ArityError):
        run_waveform(AND, Waveform([(TRUE,)]), interp)


def test_cyclic_mux():
    interp = belnap()
    term = load_circuit('cyclic_mux')
    form = to_mealy_form(term, interp)
    assert is_combinational(form.core)
    # inputs (x, c): c = f gives gbox(fbox(x)), c = t gives fbox(gbox(x))
    wave = Waveform([(TRUE, FALSE), (TRUE, TRUE), (FALSE, TRUE)])
    expected = Waveform([(FALSE,), (TRUE,), (TRUE,)])
    assert run_waveform(term, wave, interp) == expected
    assert run(circuit_to_mealy(term, interp), wave) == expected


@pytest.mark.parametrize("seed", range(5))
def test_mealy_form_bisimilar(seed):
    interp = belnap()
    term = random_circuit(n_inputs=1, n_gates=5, n_delays=1,
                          instant=seed % 2 == 1, random_state=seed)
    form = to_mealy_form(term, interp)
    assert bisimilar(circuit_to_mealy(form.to_circuit(), interp),
                     circuit_to_mealy(term, interp))


def test_obs_equiv():
    interp = belnap()
    equiv, witness = obs_equiv(AND, OR, interp, return_witness=True)
    assert not equiv
    assert witness == Waveform([(BOT, FALSE)])

    equiv, witness = obs_equiv(AND, OR, interp, mode='exhaustive',
                               return_witness=True)
    assert not equiv
    assert witness[-1] == (BOT, FALSE)

    for mode in ('oracle', 'exhaustive'):
        assert obs_equiv(C.compose(NOT, NOT), C.identity(1), interp,
                         mode=mode)
    with pytest.raises(ArityError):
        obs_equiv(AND, NOT, interp)
    with pytest.raises(ValueError):
        obs_equiv(NOT, NOT, interp, mode='guess')
    with pytest.raises(BudgetExceededError):
        obs_equiv(C.delay(1), C.delay(1), interp, mode='exhaustive',
                  max_waveforms=10)


def test_value_rules():
    interp = belnap()
    term = C.compose(C.tensor(C.value([TRUE]), C.value([FALSE])), AND)
    assert value_normal_form(term, interp) == C.value([FALSE])

    assert value_normal_form(C.compose(C.value([TRUE]), C.fork()),
                             interp) == C.value([TRUE, TRUE])
    assert value_normal_form(C.compose(C.value([TRUE, FALSE]), C.join()),
                             interp) == C.value([TOP])
    assert value_normal_form(C.compose(C.value([TRUE]), C.elim()),
                             interp) == C.identity(0)
    swapped = C.compose(C.value([TRUE, FALSE]), C.symmetry(1, 1))
    assert value_normal_form(swapped, interp) == C.value([FALSE, TRUE])
    # intros count as bottom
    assert value_normal_form(C.compose(C.intro(), NOT), interp) == \
        C.value([BOT])

    assert value_rule_step(AND, interp) is None
    with pytest.raises(ValueError):
        value_rule_step(AND, interp, strategy='outermost')


def test_value_rules_strategies_agree():
    interp = belnap()
    term = C.compose(C.tensor(C.value([TRUE]), C.value([TOP])),
                     C.tensor(NOT, NOT), OR)
    left = value_normal_form(term, interp, strategy='leftmost')
    right = value_normal_form(term, interp, strategy='rightmost')
    assert left == right == C.value([TOP])
    with pytest.raises(BudgetExceededError):
        value_normal_form(term, interp, max_steps=1)


def test_closed_circuits():
    interp = belnap()
    once = C.compose(C.value([TRUE]), NOT)
    ticks = Waveform([(), (), ()], width=0)
    assert run_waveform(once, ticks, interp) == \
        Waveform([(FALSE,), (BOT,), (BOT,)])
    for mode in ('oracle', 'exhaustive'):
        assert obs_equiv(once, C.value([FALSE]), interp, mode=mode)
        equiv, witness = obs_equiv(once, C.value([TRUE]), interp,
                                   mode=mode, return_witness=True)
        assert not equiv
        assert witness == Waveform([()], width=0)
    assert not obs_equiv(once, C.waveform([FALSE]), interp)


@pytest.mark.parametrize("seed", range(6))
def test_obs_equiv_modes_agree(seed):
    interp = belnap()
    term = random_circuit(n_inputs=1, n_gates=3, n_delays=1,
                          instant=seed % 2 == 1, random_state=seed)
    other = random_circuit(n_inputs=1, n_gates=3, n_delays=1,
                           random_state=seed + 100)
    same = C.compose(term, NOT, NOT)
    for t2 in (other, same):
        assert obs_equiv(term, t2, interp) == \
            obs_equiv(term, t2, interp, mode='exhaustive')
    assert obs_equiv(term, same, interp, mode='exhaustive')
