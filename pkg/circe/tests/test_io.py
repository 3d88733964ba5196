# License: BSD 3 clause

import json

import pytest

from circe import (BOT, FALSE, TRUE, TOP, Waveform, belnap, bisimilar,
                   circuit_to_mealy, cospan_iso, dump_interpretation,
                   dump_mealy, dump_truth_table_csv, load_interpretation,
                   load_mealy, load_rules, load_truth_table_csv,
                   read_waveform_csv, rewrite_all, term_to_cospan,
                   write_waveform_csv)
from circe import circuit as C
from circe.datasets import data_path, load_circuit
from circe.exceptions import ArityError


def test_read_set_reset():
    names, wave = read_waveform_csv(data_path('set_reset.csv'))
    assert names == ['r', 's']
    assert wave == Waveform([(FALSE, TRUE), (FALSE, FALSE), (TRUE, FALSE),
                             (FALSE, FALSE)])


def test_waveform_csv(tmp_path):
    fname = str(tmp_path / 'wave.csv')
    wave = Waveform([(BOT, TOP), (TRUE, FALSE)])
    write_waveform_csv(wave, fname, names=['a', 'b'])
    with open(fname) as f:
        text = f.read()
    assert text == "# circe waveform 1\na,b\nbot,top\nt,f\n"
    assert read_waveform_csv(fname) == (['a', 'b'], wave)

    with pytest.raises(ArityError):
        write_waveform_csv(wave, fname, names=['a'])

    with open(fname, 'w') as f:
        f.write("a,b\nt\n")
    with pytest.raises(ArityError):
        read_waveform_csv(fname)
    with open(fname, 'w') as f:
        f.write("a\nmaybe\n")
    with pytest.raises(ValueError, match="Row 1"):
        read_waveform_csv(fname)


def test_truth_table_csv(tmp_path):
    interp = belnap()
    fname = str(tmp_path / 'and.csv')
    dump_truth_table_csv(interp.semantics['AND'], fname)
    with open(fname) as f:
        lines = f.read().splitlines()
    assert lines[:3] == ["# circe truth-table 1", "x0,x1,y0", "bot,bot,bot"]
    assert len(lines) == 2 + 16
    assert load_truth_table_csv(fname) == interp.semantics['AND']

    # rows out of order
    with open(fname, 'w') as f:
        f.write("x,y\nf,t\nbot,bot\nt,f\ntop,top\n")
    with pytest.raises(ValueError, match="lexicographic"):
        load_truth_table_csv(fname)
    with open(fname, 'w') as f:
        f.write("x,y\nbot,bot\nf,t\nt,f\n")
    with pytest.raises(ValueError, match="not a power"):
        load_truth_table_csv(fname)


def test_interpretation_json(tmp_path):
    interp = belnap()
    fname = str(tmp_path / 'belnap.json')
    dump_interpretation(interp, fname)
    back = load_interpretation(fname)
    assert back.lattice == interp.lattice
    assert back.semantics == interp.semantics

    doc = {'format': "circe-interpretation 1", 'base': 'belnap',
           'primitives': {'ID': {'inputs': 1, 'outputs': 1,
                                 'table': ['bot', 'f', 't', 'top']}}}
    with open(fname, 'w') as f:
        json.dump(doc, f)
    extended = load_interpretation(fname)
    assert sorted(extended.semantics) == ['AND', 'ID', 'NOT', 'OR']
    assert extended.semantics['ID'](TRUE) == (TRUE,)

    with open(fname, 'w') as f:
        json.dump({'format': "circe-mealy 1"}, f)
    with pytest.raises(ValueError, match="Not a circe interpretation"):
        load_interpretation(fname)


def test_chain_interpretation(tmp_path):
    fname = str(tmp_path / 'chain.json')
    doc = {'format': "circe-interpretation 1", 'values': ['lo', 'mid', 'hi'],
           'leq': [['lo', 'mid'], ['mid', 'hi']],
           'primitives': {'up': {'inputs': 1, 'outputs': 1,
                                 'table': ['mid', 'hi', 'hi']}}}
    with open(fname, 'w') as f:
        json.dump(doc, f)
    interp = load_interpretation(fname)
    # the order is closed transitively
    assert interp.lattice.leq[0, 2]
    assert not interp.lattice.leq[2, 0]
    assert interp.semantics['up'].is_monotone(interp.lattice)


def test_mealy_json(tmp_path):
    interp = belnap()
    fname = str(tmp_path / 'latch.json')
    machine = circuit_to_mealy(load_circuit('sr_latch'), interp)
    dump_mealy(machine, fname)
    with open(fname) as f:
        doc = json.load(f)
    assert doc['format'] == "circe-mealy 1"
    assert doc['initial'] == 's0'
    back = load_mealy(fname)
    assert back.initial == 's0'
    assert bisimilar(back, machine)

    doc['transitions'] = doc['transitions'][1:]
    with open(fname, 'w') as f:
        json.dump(doc, f)
    with pytest.raises(ValueError, match="Transition table has"):
        load_mealy(fname)


def test_load_rules():
    rules = load_rules(data_path('e1_to_e2.rules'))
    assert [r.name for r in rules] == ['e1_to_e2']
    g = term_to_cospan(load_circuit('chain'), absorb='comonoid')
    results = rewrite_all(rules[0], g, mode='traced_comonoid')
    assert len(results) == 1
    e2, e3 = C.primitive('e2', 1, 1), C.primitive('e3', 1, 1)
    assert cospan_iso(results[0], term_to_cospan(C.compose(e3, e2, e3),
                                                 absorb='comonoid')) \
        is not None


def test_load_rules_errors(tmp_path):
    fname = str(tmp_path / 'bad.rules')
    with open(fname, 'w') as f:
        f.write("circuit r_lhs(x) -> (y) { y = NOT(x); }\n")
    with pytest.raises(ValueError, match="no right-hand side"):
        load_rules(fname)
    with open(fname, 'w') as f:
        f.write("circuit r(x) -> (y) { y = NOT(x); }\n")
    with pytest.raises(ValueError, match="No rules found"):
        load_rules(fname)
