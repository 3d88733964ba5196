"""Semantics of sequential digital circuits: Mealy machines, operational
reduction, partial evaluation and hypergraph rewriting."""

from .interp import (BOT, FALSE, TRUE, TOP, Lattice, Signature, TruthTable,
                     Interpretation, belnap, chain_lattice,
                     check_interpretation, lattice_height)
from .circuit import Circuit, is_combinational, stats, substitute
from .netlist import Netlist, evaluate_combinational
from .mealy import (Waveform, MealyMachine, circuit_to_mealy, step, cascade,
                    direct, mealy_trace, reachable, minimize, bisimilar,
                    distinguishing_waveform, run, run_from,
                    check_mealy_monotone)
from .synth import (encoding, chosen_state_order, monotone_completion,
                    mealy_encoding, search_translator, belnap_express,
                    normalised_circuit, mealy_to_circuit)
from .opsem import (TraceDelayForm, PreMealyForm, MealyForm,
                    global_trace_delay_form, mealy_rule, instant_feedback,
                    to_mealy_form, productivity_step, run_waveform,
                    obs_equiv, value_rule_step, value_normal_form)
from .parteval import (world_count, resolve_world, bind_inputs, tidy,
                       propagate_waveforms, apply_shortcuts,
                       propagate_uncertain, partial_evaluate)
from .hypergraph import (Hypergraph, InterfacedHypergraph, term_to_cospan,
                         check_monogamous_acyclic, check_partial_monogamous,
                         check_partial_left_monogamous, compose_cospans,
                         tensor_cospans, trace_cospan, fold_interfaces,
                         unfold_interfaces, cospan_iso, extract_term, to_dot)
from .dpo import (DpoRule, make_rule, find_matchings, pushout_complements,
                  filter_boundary, rewrite, rewrite_all, term_rewrites,
                  verify_rule_sound, value_rules, streaming_rules,
                  cartesian_rules, mealy_transform)
from .lang import CircuitSource, parse, elaborate, loads, load, to_source
from .io import (read_waveform_csv, write_waveform_csv,
                 load_truth_table_csv, dump_truth_table_csv,
                 load_interpretation, dump_interpretation, load_mealy,
                 dump_mealy, load_rules)
from .exceptions import (ArityError, NotMonotoneError, BudgetExceededError,
                         FixpointError, CircuitSyntaxError,
                         InvalidCospanError, StuckRedexWarning)


__version__ = '0.1dev'
