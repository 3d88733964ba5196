# License: BSD 3 clause

import pytest

from circe import (BOT, FALSE, TRUE, TOP, belnap, bisimilar, cartesian_rules,
                   circuit_to_mealy, cospan_iso, extract_term,
                   filter_boundary, find_matchings, make_rule,
                   mealy_transform, pushout_complements, rewrite, rewrite_all,
                   streaming_rules, term_rewrites, term_to_cospan,
                   value_rules, verify_rule_sound)
from circe import circuit as C
from circe.interp import all_words
from circe.datasets import load_circuit
from circe.exceptions import ArityError, BudgetExceededError


E = C.primitive('e', 2, 2)
E1 = C.primitive('e1', 1, 1)
E1B = C.primitive('e1b', 1, 1)
E2 = C.primitive('e2', 1, 1)
E3 = C.primitive('e3', 1, 1)


def cospan(term, absorb='comonoid'):
    return term_to_cospan(term, absorb=absorb)


def iso(c1, c2):
    return cospan_iso(c1, c2) is not None


def test_make_rule():
    rule = make_rule(E1, E2, name='e1_to_e2')
    assert rule.name == 'e1_to_e2'
    assert (rule.n_inputs, rule.n_outputs) == (1, 1)
    assert rule.left.inputs == () and len(rule.boundary) == 2
    assert [e.label for e in rule.left.edges] == ['e1']
    assert [e.label for e in rule.right.edges] == ['e2']
    with pytest.raises(ArityError):
        make_rule(E1, E)


def test_rewrite_in_chain():
    rule = make_rule(E1, E2)
    g = cospan(C.compose(E3, E1, E3))
    matchings = find_matchings(rule, g)
    assert len(matchings) == 1
    comps = pushout_complements(rule, matchings[0], g)
    assert len(comps) == 1
    h = rewrite(rule, matchings[0], comps[0], g)
    assert iso(h, cospan(C.compose(E3, E2, E3)))
    for mode in ('smc', 'traced', 'traced_comonoid', 'frobenius'):
        results = rewrite_all(rule, g, mode=mode)
        assert len(results) == 1 and iso(results[0], h)


def test_five_complements():
    # the identity matched on the middle wire of e2 ; e3
    rule = make_rule(C.identity(1), E1)
    g = cospan(C.compose(E2, E3))
    middle = g.edges[0].targets[0]
    match = [m for m in find_matchings(rule, g) if m.vertices == (middle,)]
    assert len(match) == 1
    assert len(pushout_complements(rule, match[0], g)) == 5
    with pytest.raises(BudgetExceededError):
        pushout_complements(rule, match[0], g, max_complements=4)


def test_no_dangling_edges():
    rule = make_rule(C.compose(E1, E1B), E3)
    g = cospan(C.compose(E1, C.fork(), C.tensor(E1B, E2)))
    matchings = find_matchings(rule, g)
    assert len(matchings) == 1
    assert pushout_complements(rule, matchings[0], g) == []
    assert rewrite_all(rule, g, mode='frobenius') == []


def test_no_identification():
    a, b = C.primitive('a', 1, 1), C.primitive('b', 1, 1)
    rule = make_rule(C.tensor(C.compose(a, b), C.compose(a, b)),
                     C.identity(2))
    g = cospan(C.compose(C.tensor(a, a), C.join(), C.fork(),
                         C.tensor(b, b)), absorb='frobenius')
    matchings = find_matchings(rule, g)
    assert matchings
    for m in matchings:
        assert pushout_complements(rule, m, g) == []


def test_match_inside_trace():
    e1 = C.primitive('e1', 2, 2)
    rule = make_rule(E, e1)
    g = cospan(C.trace(1, E))
    matchings = find_matchings(rule, g)
    assert len(matchings) == 1
    # the traced input and output of the rule meet in one host vertex
    assert len(set(matchings[0].vertices)) == 3
    results = rewrite_all(rule, g, mode='traced')
    assert len(results) == 1
    assert iso(results[0], cospan(C.trace(1, e1)))


def test_two_traced_complements():
    rule = make_rule(C.identity(2), C.tensor(E1, E2))
    g = cospan(C.trace(1, E))
    loop = [v for v in range(g.n_vertices)
            if v not in g.inputs + g.outputs]
    assert len(loop) == 1
    match = [m for m in find_matchings(rule, g)
             if m.vertices == (loop[0], loop[0])]
    assert len(match) == 1
    comps = pushout_complements(rule, match[0], g)
    assert len(filter_boundary(comps, rule, g, mode='traced')) == 2
    assert len(filter_boundary(comps, rule, g, mode='frobenius')) == \
        len(comps)
    with pytest.raises(ValueError):
        filter_boundary(comps, rule, g, mode='cartesian')


def test_term_rewrites():
    rule = make_rule(E1, E2)
    assert term_rewrites(rule, C.compose(E3, E1, E3)) == \
        [C.compose(E3, E2, E3)]
    window = make_rule(C.compose(E1, E3), E2)
    assert term_rewrites(window, C.compose(E3, E1, E3)) == \
        [C.compose(E3, E2)]
    assert term_rewrites(rule, E3) == []


def test_verify_rule_sound():
    interp = belnap()
    NOT = C.primitive('NOT', 1, 1)
    assert verify_rule_sound(C.compose(NOT, NOT), C.identity(1), interp)
    sound, witness = verify_rule_sound(C.primitive('AND', 2, 1),
                                       C.primitive('OR', 2, 1), interp,
                                       return_witness=True)
    assert not sound and len(witness) == 1


def test_value_rules():
    interp = belnap()
    rules = value_rules(interp)
    # 16 + 16 + 4 gate rules, then fork, elim and 4 joins per value
    assert len(rules) == 36 + 4 * 6
    by_name = {r.name: r for r in rules}
    for r in rules:
        assert verify_rule_sound(r.lhs, r.rhs, interp)

    g = cospan(C.compose(C.value([TRUE, FALSE]), C.primitive('AND', 2, 1)))
    results = rewrite_all(by_name['AND(tf)'], g, mode='traced_comonoid')
    assert len(results) == 1
    assert iso(results[0], cospan(C.value([FALSE])))

    # a value used once is not copied
    single = cospan(C.compose(C.value([TRUE]), C.fork(),
                              C.tensor(C.elim(), C.identity(1)),
                              C.primitive('NOT', 1, 1)))
    assert find_matchings(by_name['fork(t)'], single) == []


def test_streaming_rules():
    interp = belnap()
    AND, NOT = C.primitive('AND', 2, 1), C.primitive('NOT', 1, 1)
    rules = streaming_rules(AND, [(TRUE, FALSE), (BOT, TOP)])
    assert [r.name for r in rules] == ['stream(2,1)', 'stream(0,3)']
    assert all(r.lhs.arity == (2, 1) for r in rules)
    for rule in rules + streaming_rules(NOT, all_words(4, 1)):
        assert verify_rule_sound(rule.lhs, rule.rhs, interp)

    rule = streaming_rules(NOT, [(TRUE,)])[0]
    results = rewrite_all(rule, cospan(rule.lhs), mode='traced_comonoid')
    assert any(iso(h, cospan(rule.rhs)) for h in results)

    with pytest.raises(ValueError):
        streaming_rules(C.delay(1), [(TRUE,)])
    with pytest.raises(ArityError):
        streaming_rules(AND, [(TRUE,)])


def test_cartesian_rules():
    copy, discard = cartesian_rules('NOT', 1, 1)
    assert (copy.name, discard.name) == ('copy(NOT)', 'discard(NOT)')
    assert verify_rule_sound(copy.lhs, copy.rhs, belnap())
    g = cospan(C.compose(C.primitive('NOT', 1, 1), C.elim()))
    results = rewrite_all(discard, g, mode='traced_comonoid')
    assert len(results) == 1
    assert iso(results[0], cospan(C.elim()))


def test_mealy_transform():
    interp = belnap()
    latch = load_circuit('sr_latch')
    h, state = mealy_transform(cospan(latch), interp)
    assert h.arity == (2, 2)
    assert len(state) == 1
    back = extract_term(h, mode='traced_comonoid')
    assert bisimilar(circuit_to_mealy(back, interp),
                     circuit_to_mealy(latch, interp))
