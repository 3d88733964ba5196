# License: BSD 3 clause

from itertools import product

import pytest

from circe import (BOT, FALSE, TRUE, belnap, bisimilar, circuit_to_mealy,
                   cospan_iso, evaluate_combinational, load, loads, obs_equiv,
                   parse, stats, term_to_cospan, to_source, world_count)
from circe import circuit as C
from circe.datasets import data_path, load_circuit
from circe.exceptions import CircuitSyntaxError
from circe.lang import tokenize
from circe.utils.testing import random_source


def test_tokenize():
    tokens = tokenize("circuit c(a) -> (z) {  # comment\n z = NOT(a); }")
    kinds = [t.kind for t in tokens]
    assert kinds[:3] == ['name', 'name', 'punct']
    assert 'arrow' in kinds and kinds[-1] == 'eof'
    assert all(t.text != '# comment' for t in tokens)
    z = [t for t in tokens if t.text == 'z'][1]
    assert (z.line, z.col) == (2, 2)


def test_half_adder():
    interp = belnap()
    term = load(data_path('half_adder.circ'))
    assert term.arity == (2, 2)
    assert stats(term)['is_combinational']
    assert evaluate_combinational(term, interp, (TRUE, TRUE)) == \
        (FALSE, TRUE)
    assert evaluate_combinational(term, interp, (TRUE, FALSE)) == \
        (TRUE, FALSE)
    assert evaluate_combinational(term, interp, (FALSE, FALSE)) == \
        (FALSE, FALSE)


def test_sr_latch():
    term = load_circuit('sr_latch')
    assert term.arity == (2, 2)
    assert stats(term)['delay_count'] == 1
    with open(data_path('sr_latch.circ')) as f:
        source = parse(f.read())
    assert source.names() == ['sr_latch']
    cdef = source.circuits[0]
    assert [t.text for t in cdef.feedback] == ['fb']
    assert [t.text for t in cdef.outputs] == ['q', 'fb']


def test_library_and_names():
    with open(data_path('cyclic_mux.circ')) as f:
        text = f.read()
    assert parse(text).names() == ['mux', 'fbox', 'gbox', 'cyclic_mux']
    assert loads(text).arity == (2, 1)
    assert loads(text, name='mux').arity == (3, 1)
    with pytest.raises(ValueError, match="No circuit named"):
        loads(text, name='nope')


def test_gate_declarations():
    text = "gate e1 : 1 -> 1;\ncircuit c(x) -> (y) { y = e1(x); }"
    assert parse(text).gates == {'e1': (1, 1)}
    assert loads(text) == C.primitive('e1', 1, 1)


def test_constants():
    interp = belnap()
    held = loads("circuit c(a) -> (z) { z = AND(a, t); }")
    assert obs_equiv(held, C.identity(1), interp)

    once = loads("circuit c(a) -> (z) { z = OR(a, value(t)); }")
    m = circuit_to_mealy(once, interp)
    state, out = m.step(m.initial, (FALSE,))
    assert out == (TRUE,)
    # the value is gone after the first tick
    assert m.step(state, (FALSE,))[1] == (BOT,)

    pair = loads("circuit c() -> (y, z) { y, z = wave(t, f); }")
    assert pair == C.waveform([TRUE, FALSE])

    unsure = loads("circuit c(a) -> (z) { z = AND(a, {t, f}); }")
    assert world_count(unsure) == 2


@pytest.mark.parametrize("text, message, line", [
    ("circuit c(a) -> (z) {\n    z = NOT(b);\n}", "undefined wire b", 2),
    ("circuit c(a) -> (z) {\n  feedback q;\n  z = AND(a, q);\n}",
     "unbound feedback q", 2),
    ("circuit c(a) -> (z) {\n  z = a & a;\n}", "unexpected character", 2),
    ("circuit c(a) -> z { }", r"expected '\('", 1),
    ("circuit gate(a) -> (z) { }", "'gate' is a keyword", 1),
    ("circuit c(a) -> (z) { z = AND(a); }", "AND takes 2 inputs, got 1", 1),
    ("circuit c(a) -> (z) { z = FOO(a); }", "unknown gate or circuit FOO",
     1),
    ("circuit c(t) -> (z) { z = NOT(t); }", "t is reserved", 1),
    ("circuit c(a) -> (z) { z = a; }", "needs a call or a value", 1),
    ("circuit c(a) -> (z) {\n z = NOT(a);\n z = NOT(z);\n}",
     "wire z defined twice", 3),
    ("circuit c(a) -> (z) { z = NOT(a);", "missing '}'", 1),
    ("circuit c(a) -> (z) { z = NOT(a); }\ncircuit c(a) -> (z) { }",
     "circuit c defined twice", 1),
])
def test_syntax_errors(text, message, line):
    with pytest.raises(CircuitSyntaxError, match=message) as exc:
        loads(text)
    assert exc.value.line == line
    assert exc.value.col >= 1


@pytest.mark.parametrize("name", ['sr_latch', 'half_adder', 'cyclic_mux',
                                  'protocol'])
def test_to_source_round_trip(name):
    interp = belnap()
    term = load_circuit(name)
    back = loads(to_source(term, interp, name=name))
    assert back.arity == term.arity
    assert bisimilar(circuit_to_mealy(back, interp),
                     circuit_to_mealy(term, interp))


def test_to_source_declares_gates():
    term = load_circuit('chain')
    text = to_source(term)
    assert text.startswith("gate e3 : 1 -> 1;\ngate e1 : 1 -> 1;\n")
    back = loads(text)
    assert cospan_iso(term_to_cospan(back, absorb='comonoid'),
                      term_to_cospan(term, absorb='comonoid')) is not None


@pytest.mark.parametrize("seed, instant", product(range(4), [False, True]))
def test_random_sources(seed, instant):
    interp = belnap()
    term = loads(random_source(n_inputs=2, n_gates=5, n_delays=1,
                               instant=instant, random_state=seed))
    assert term.arity == (2, 1)
    back = loads(to_source(term, interp))
    assert bisimilar(circuit_to_mealy(back, interp),
                     circuit_to_mealy(term, interp))
