# License: BSD 3 clause

import io
import json

import pytest

from circe import (FALSE, TRUE, Waveform, belnap, cospan_iso,
                   dump_truth_table_csv, loads, obs_equiv, read_waveform_csv,
                   run_waveform, term_to_cospan)
from circe import circuit as C
from circe.cli import main, repl
from circe.datasets import data_path, load_circuit


def write(tmp_path, name, text):
    fname = str(tmp_path / name)
    with open(fname, 'w') as f:
        f.write(text)
    return fname


def test_eval(capsys):
    code = main(['eval', data_path('sr_latch.circ'),
                 '--inputs', data_path('set_reset.csv')])
    assert code == 0
    out = capsys.readouterr().out
    assert out == "# circe waveform 1\nq,fb\nbot,f\nt,f\nt,f\nf,t\n"


def test_equiv(capsys, tmp_path):
    latch = data_path('sr_latch.circ')
    assert main(['equiv', latch, latch]) == 0
    assert capsys.readouterr().out == "equivalent\n"

    f_and = write(tmp_path, 'and.circ',
                  "circuit c(a, b) -> (z) { z = AND(a, b); }")
    f_or = write(tmp_path, 'or.circ',
                 "circuit c(a, b) -> (z) { z = OR(a, b); }")
    assert main(['equiv', f_and, f_or]) == 1
    out = capsys.readouterr().out
    assert out.startswith("not equivalent")
    assert out.endswith("w0,w1\nbot,f\n")


def test_budget_and_usage_errors(capsys, tmp_path):
    latch = data_path('sr_latch.circ')
    code = main(['equiv', latch, latch, '--exhaustive',
                 '--max-waveforms', '10'])
    assert code == 3
    assert capsys.readouterr().err.startswith("circe: ")

    assert main(['mealy', str(tmp_path / 'missing.circ')]) == 2
    bad = write(tmp_path, 'bad.circ', "circuit c(a) -> (z) { z = b; }")
    assert main(['mealy', bad]) == 2
    assert "line 1" in capsys.readouterr().err
    with pytest.raises(SystemExit):
        main(['frobnicate'])


def test_mealy(capsys):
    latch = data_path('sr_latch.circ')
    assert main(['mealy', latch]) == 0
    assert capsys.readouterr().out.startswith("2 -> 2 machine, ")
    assert main(['mealy', latch, '--json']) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc['format'] == "circe-mealy 1"
    assert doc['initial'] == 's0'


def test_synth(capsys, tmp_path):
    interp = belnap()
    fname = str(tmp_path / 'and.csv')
    dump_truth_table_csv(interp.semantics['AND'], fname)
    assert main(['synth', fname, '--circuit-name', 'conj']) == 0
    text = capsys.readouterr().out
    assert text.startswith("circuit conj(")
    assert obs_equiv(loads(text), C.primitive('AND', 2, 1), interp)

    # one input, two outputs: NOT x and x
    fname = write(tmp_path, 'split.csv',
                  "# circe truth-table 1\nx,y0,y1\nbot,bot,bot\n"
                  "f,t,f\nt,f,t\ntop,top,top\n")
    assert main(['synth', fname]) == 0
    split = loads(capsys.readouterr().out)
    assert split.arity == (1, 2)
    expected = C.compose(C.fork(), C.tensor(C.primitive('NOT', 1, 1),
                                            C.identity(1)))
    assert obs_equiv(split, expected, interp)

    # y0 falls from t on f to bot on top
    bad = write(tmp_path, 'bad.csv',
                "# circe truth-table 1\nx,y0,y1\nbot,bot,bot\n"
                "f,t,f\nt,f,t\ntop,bot,top\n")
    assert main(['synth', bad]) == 2


def test_normalize(capsys):
    interp = belnap()
    latch = load_circuit('sr_latch')
    for flag in ('--trace-delay', '--mealy-form'):
        assert main(['normalize', data_path('sr_latch.circ'), flag]) == 0
        back = loads(capsys.readouterr().out)
        assert obs_equiv(back, latch, interp)


def test_graph(capsys):
    assert main(['graph', data_path('sr_latch.circ')]) == 0
    assert capsys.readouterr().out.startswith("digraph sr_latch")

    assert main(['graph', data_path('half_adder.circ'),
                 '--check', 'plm']) == 0
    assert capsys.readouterr().out == "plm: valid\n"

    assert main(['graph', data_path('sr_latch.circ'), '--check', 'ma']) == 1
    out = capsys.readouterr().out
    assert out.startswith("ma: invalid")
    assert "directed cycle" in out


def test_rewrite(capsys):
    chain = data_path('chain.circ')
    rules = data_path('e1_to_e2.rules')
    assert main(['rewrite', chain, '--rules', rules]) == 0
    back = loads(capsys.readouterr().out)
    e2, e3 = C.primitive('e2', 1, 1), C.primitive('e3', 1, 1)
    assert cospan_iso(term_to_cospan(back, absorb='comonoid'),
                      term_to_cospan(C.compose(e3, e2, e3),
                                     absorb='comonoid')) is not None

    assert main(['rewrite', chain, '--rules', rules,
                 '--rule', 'nope']) == 1
    assert "no rule applies" in capsys.readouterr().err


def test_parteval(capsys):
    interp = belnap()
    protocol = data_path('protocol.circ')
    for value in ('{t,f}', 't'):
        assert main(['parteval', protocol, '--fix', 'a=%s' % value]) == 0
        result = loads(capsys.readouterr().out)
        assert result.arity == (1, 1)
        assert obs_equiv(result, C.identity(1), interp)
    assert main(['parteval', protocol, '--fix', 'c=t']) == 2
    assert main(['parteval', protocol, '--fix', 'a']) == 2


def test_repl():
    interp = belnap()
    out = io.StringIO()
    lines = ["f, t", ":state", "f f", "maybe", "", ":reset", ":state",
             ":quit", "t t"]
    history = repl(load_circuit('sr_latch'), interp, lines,
                   in_names=['r', 's'], out_names=['q', 'fb'], out=out)
    assert [w[1] for w in history] == [FALSE, FALSE]
    assert history[1][0] == TRUE
    printed = out.getvalue().splitlines()
    assert printed[0] == "q=bot fb=f | state t"
    assert printed[1] == "state t"
    assert printed[3].startswith("error: ")
    assert printed[-1] == "state bot"


def test_eval_plot(capsys, tmp_path):
    fname = str(tmp_path / 'latch.png')
    code = main(['eval', data_path('sr_latch.circ'),
                 '--inputs', data_path('set_reset.csv'), '--plot', fname])
    assert code == 0
    with open(fname, 'rb') as f:
        assert f.read(4) == b'\x89PNG'


def test_repl_matches_eval():
    interp = belnap()
    term = load_circuit('sr_latch')
    _, inputs = read_waveform_csv(data_path('set_reset.csv'))
    lines = [' '.join(interp.lattice.names[v] for v in w) for w in inputs]
    history = repl(term, interp, lines, out=io.StringIO())
    assert Waveform(history, 2) == run_waveform(term, inputs, interp)
