# License: BSD 3 clause
"""Command line interface, ``circe <command> ...``."""

import argparse
import sys

from . import lang
from .interp import belnap
from .io import (dump_mealy, load_interpretation, load_mealy, load_rules,
                 load_truth_table_csv, read_waveform_csv, write_waveform_csv)
from .hypergraph import (check_monogamous_acyclic,
                         check_partial_left_monogamous,
                         check_partial_monogamous, extract_term,
                         term_to_cospan, to_dot)
from .mealy import (MAX_PAIRS, MAX_STATES, circuit_to_mealy, minimize,
                    reachable)
from .opsem import (MAX_WAVEFORMS, global_trace_delay_form, obs_equiv,
                    productivity_step, run_waveform, to_mealy_form,
                    value_normal_form)
from .parteval import MAX_STEPS, partial_evaluate
from .dpo import MAX_COMPLEMENTS, MAX_MATCHINGS, rewrite_all
from .synth import mealy_to_circuit, normalised_circuit
from .plot_utils import plot_waveforms
from .exceptions import BudgetExceededError, FixpointError

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

CHECKS = {'pm': check_partial_monogamous,
          'plm': check_partial_left_monogamous,
          'ma': check_monogamous_acyclic}


def _interp(args):
    return belnap() if args.interp is None else load_interpretation(
        args.interp)


def _circuit(fname, interp, name=None):
    with open(fname) as f:
        source = lang.parse(f.read())
    term = lang.elaborate(source, interp=interp, name=name)
    name = source.names()[-1] if name is None else name
    cdef = source.circuits[source.names().index(name)]
    return term, cdef


def _print_source(term, interp, name):
    sys.stdout.write(lang.to_source(term, interp=interp, name=name))


def cmd_eval(args):
    interp = _interp(args)
    term, cdef = _circuit(args.file, interp, args.name)
    in_names, inputs = read_waveform_csv(args.inputs, interp)
    outputs = run_waveform(term, inputs, interp)
    out_names = [t.text for t in cdef.outputs]
    write_waveform_csv(outputs, sys.stdout, names=out_names, interp=interp)
    if args.plot:
        plot_waveforms(inputs, outputs, input_names=in_names,
                       output_names=out_names,
                       value_names=interp.lattice.names, fname=args.plot)
    return EXIT_OK


def _format(interp, names, word):
    return ' '.join('%s=%s' % (n, interp.lattice.names[v])
                    for n, v in zip(names, word))


def repl(term, interp, lines, in_names=None, out_names=None, out=None):
    """Step a circuit cycle by cycle.

    Each line holds one input word, values separated by commas or
    spaces. ``:state`` prints the register word, ``:reset`` goes back to
    the initial state and ``:quit`` stops.

    Parameters
    ----------
    term : Circuit
        The circuit.

    interp : Interpretation
        Meaning of the primitives.

    lines : iterable of str
        Input lines.

    in_names : list of str, optional
        Input wire names.

    out_names : list of str, optional
        Output wire names.

    out : file, optional
        Where to print, standard output by default.

    Returns
    -------
    outputs : list of tuple of int
        Output words of the cycles run.
    """
    out = sys.stdout if out is None else out
    if in_names is None:
        in_names = ['i%d' % k for k in range(term.n_inputs)]
    if out_names is None:
        out_names = ['o%d' % k for k in range(term.n_outputs)]
    initial = to_mealy_form(term, interp)
    form = initial
    history = []
    for line in lines:
        line = line.strip()
        if not line:
            continue
        if line == ':quit':
            break
        if line == ':reset':
            form = initial
            continue
        if line == ':state':
            print("state %s" % interp.format_word(form.state, sep=' '),
                  file=out)
            continue
        try:
            word = [interp.parse_value(v)
                    for v in line.replace(',', ' ').split()]
            outputs, form = productivity_step(form, word, interp)
        except ValueError as err:
            print("error: %s" % err, file=out)
            continue
        history.append(outputs)
        print("%s | state %s" % (_format(interp, out_names, outputs),
                                 interp.format_word(form.state, sep=' ')),
              file=out)
    return history


def cmd_step(args):
    interp = _interp(args)
    term, cdef = _circuit(args.file, interp, args.name)
    in_names = [t.text for t in cdef.inputs]
    if sys.stdin.isatty():
        print("inputs: %s (:state, :reset, :quit)" % ', '.join(in_names))
    repl(term, interp, sys.stdin, in_names=in_names,
         out_names=[t.text for t in cdef.outputs])
    return EXIT_OK


def cmd_equiv(args):
    interp = _interp(args)
    t1, _ = _circuit(args.first, interp, args.name)
    t2, _ = _circuit(args.second, interp, args.name)
    mode = 'exhaustive' if args.exhaustive else 'oracle'
    same, witness = obs_equiv(t1, t2, interp, mode=mode,
                              max_waveforms=args.max_waveforms,
                              max_pairs=args.max_pairs, return_witness=True,
                              verbose=args.verbose)
    if same:
        print("equivalent")
        return EXIT_OK
    print("not equivalent, distinguishing inputs:")
    write_waveform_csv(witness, sys.stdout, interp=interp)
    return EXIT_FALSE


def cmd_mealy(args):
    interp = _interp(args)
    term, _ = _circuit(args.file, interp, args.name)
    machine = circuit_to_mealy(term, interp)
    if args.json:
        dump_mealy(machine, sys.stdout, max_states=args.max_states)
        sys.stdout.write('\n')
        return EXIT_OK
    m = reachable(machine, max_states=args.max_states, verbose=args.verbose)
    small = minimize(m, max_states=args.max_states)
    print("%d -> %d machine, %d reachable states, %d after minimisation"
          % (m.n_inputs, m.n_outputs, len(m.states), len(small.states)))
    return EXIT_OK


def cmd_synth(args):
    interp = _interp(args)
    if args.file.endswith('.json'):
        term = mealy_to_circuit(load_mealy(args.file, interp),
                                max_states=args.max_states)
    else:
        term = normalised_circuit(load_truth_table_csv(args.file, interp))
    _print_source(term, interp, args.circuit_name)
    return EXIT_OK


def cmd_normalize(args):
    interp = _interp(args)
    term, cdef = _circuit(args.file, interp, args.name)
    if args.mealy_form:
        term = to_mealy_form(term, interp).to_circuit()
    elif args.trace_delay:
        term = global_trace_delay_form(term).to_circuit()
    else:
        term = value_normal_form(term, interp, max_steps=args.max_steps)
    _print_source(term, interp, cdef.name)
    return EXIT_OK


def cmd_graph(args):
    interp = _interp(args)
    term, cdef = _circuit(args.file, interp, args.name)
    c = term_to_cospan(term, absorb=args.absorb)
    if args.dot or not args.check:
        print(to_dot(c, name=cdef.name,
                     value_names=interp.lattice.names).source)
    if not args.check:
        return EXIT_OK
    valid, report = CHECKS[args.check](c, return_report=True)
    if valid:
        print("%s: valid" % args.check)
        return EXIT_OK
    print("%s: invalid" % args.check)
    for line in report:
        print("  %s" % line)
    return EXIT_FALSE


def cmd_rewrite(args):
    interp = _interp(args)
    term, cdef = _circuit(args.file, interp, args.name)
    rules = load_rules(args.rules, interp=interp)
    if args.rule:
        rules = [r for r in rules if r.name in args.rule]
    g = term_to_cospan(term, absorb='comonoid')
    mode = args.mode.replace('-', '_')
    count = 0
    for rule in rules:
        results = rewrite_all(rule, g, mode=mode,
                              max_matchings=args.max_matchings,
                              max_complements=args.max_complements)
        if args.verbose:
            print("# rule %s: %d results" % (rule.name, len(results)))
        for h in results:
            count += 1
            _print_source(extract_term(h, mode='traced_comonoid'), interp,
                          '%s_%d' % (cdef.name, count))
            if not args.all:
                return EXIT_OK
    if not count:
        print("no rule applies", file=sys.stderr)
        return EXIT_FALSE
    return EXIT_OK


def _binding(text, interp, in_names):
    if '=' not in text:
        raise ValueError("Expected WIRE=VALUE, got %r" % text)
    wire, value = (s.strip() for s in text.split('=', 1))
    if wire in in_names:
        position = in_names.index(wire)
    elif wire.isdigit() and int(wire) < len(in_names):
        position = int(wire)
    else:
        raise ValueError("Unknown input %s" % wire)
    if value.startswith('{') and value.endswith('}'):
        return position, [interp.parse_value(v.strip())
                          for v in value[1:-1].split(',')]
    return position, interp.parse_value(value)


def cmd_parteval(args):
    interp = _interp(args)
    term, cdef = _circuit(args.file, interp, args.name)
    in_names = [t.text for t in cdef.inputs]
    bindings = dict(_binding(text, interp, in_names)
                    for text in args.fix or [])
    term = partial_evaluate(term, interp, bindings=bindings,
                            max_steps=args.max_steps, verbose=args.verbose)
    _print_source(term, interp, cdef.name)
    return EXIT_OK


def build_parser():
    """Argument parser of the ``circe`` command.

    Returns
    -------
    parser : argparse.ArgumentParser
        The parser, one subcommand per operation.
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--interp', metavar='FILE', default=None,
                        help='interpretation JSON, Belnap by default')
    common.add_argument('--name', default=None,
                        help='circuit to use, the last one by default')
    common.add_argument('-v', '--verbose', action='count', default=0)
    common.add_argument('--max-states', type=int, default=MAX_STATES)
    common.add_argument('--max-pairs', type=int, default=MAX_PAIRS)
    common.add_argument('--max-waveforms', type=int, default=MAX_WAVEFORMS)
    common.add_argument('--max-matchings', type=int, default=MAX_MATCHINGS)
    common.add_argument('--max-complements', type=int,
                        default=MAX_COMPLEMENTS)
    common.add_argument('--max-steps', type=int, default=MAX_STEPS)

    parser = argparse.ArgumentParser(
        prog='circe', description='Semantics of sequential circuits.')
    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True

    p = sub.add_parser('eval', parents=[common],
                       help='run a circuit on an input waveform')
    p.add_argument('file')
    p.add_argument('--inputs', required=True, metavar='WAVE.csv')
    p.add_argument('--plot', metavar='FILE.png', default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser('step', parents=[common],
                       help='step a circuit interactively')
    p.add_argument('file')
    p.set_defaults(func=cmd_step)

    p = sub.add_parser('equiv', parents=[common],
                       help='observational equivalence of two circuits')
    p.add_argument('first')
    p.add_argument('second')
    p.add_argument('--exhaustive', action='store_true',
                   help='compare on all waveforms of the bounding length')
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser('mealy', parents=[common],
                       help='Mealy machine of a circuit')
    p.add_argument('file')
    p.add_argument('--json', action='store_true')
    p.set_defaults(func=cmd_mealy)

    p = sub.add_parser('synth', parents=[common],
                       help='circuit from a truth table or a machine')
    p.add_argument('file', metavar='TABLE.csv|MEALY.json')
    p.add_argument('--circuit-name', default='synth')
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser('normalize', parents=[common],
                       help='normal forms of a circuit')
    p.add_argument('file')
    form = p.add_mutually_exclusive_group()
    form.add_argument('--mealy-form', action='store_true')
    form.add_argument('--trace-delay', action='store_true')
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser('graph', parents=[common],
                       help='hypergraph of a circuit')
    p.add_argument('file')
    p.add_argument('--dot', action='store_true')
    p.add_argument('--check', choices=sorted(CHECKS))
    p.add_argument('--absorb', choices=('comonoid', 'frobenius'),
                   default='comonoid')
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser('rewrite', parents=[common],
                       help='double pushout rewriting')
    p.add_argument('file')
    p.add_argument('--rules', required=True, metavar='RULES.circ')
    p.add_argument('--rule', action='append',
                   help='only use the named rule')
    p.add_argument('--mode', default='traced',
                   choices=('frobenius', 'smc', 'traced',
                            'traced-comonoid'))
    p.add_argument('--all', action='store_true',
                   help='print every result instead of the first')
    p.set_defaults(func=cmd_rewrite)

    p = sub.add_parser('parteval', parents=[common],
                       help='partial evaluation')
    p.add_argument('file')
    p.add_argument('--fix', action='append', metavar='WIRE=VALUE',
                   help="bind an input, VALUE may be a set like {t,f}")
    p.set_defaults(func=cmd_parteval)
    return parser


def main(argv=None):
    """Entry point of the ``circe`` command.

    Parameters
    ----------
    argv : list of str, optional
        Arguments, ``sys.argv[1:]`` by default.

    Returns
    -------
    code : int
        0 on success, 1 for a negative verdict, 2 for invalid input and
        3 when a budget is exhausted.
    """
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as err:
        print("circe: %s" % err, file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, KeyError, OSError, FixpointError) as err:
        print("circe: %s" % err, file=sys.stderr)
        return EXIT_USAGE
