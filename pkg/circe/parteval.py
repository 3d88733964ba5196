# License: BSD 3 clause
"""Partial evaluation of circuits with constant and uncertain inputs.

Rewriting happens on the hypergraph of a term with forks and elims
absorbed, so wiring never gets in the way of a redex; the result is read
back as a term. Each rule replaces or removes one edge, and the four rule
families are run round-robin until none applies or the step budget runs
out.

Uncertain values use a single world selector: with ``k`` worlds, world
``i`` reads alternative ``i`` of every uncertain generator, padded with
bottom when a generator lists fewer alternatives.
"""

import warnings

from . import circuit as C
from .hypergraph import (Edge, Hypergraph, InterfacedHypergraph,
                         extract_term, term_to_cospan)
from .interp import FALSE, TRUE, belnap
from .exceptions import ConvergenceWarning, StuckRedexWarning

MAX_STEPS = 10 ** 4

_UNCERTAIN = {'forever': 'uncertain_waveform', 'instant': 'uncertain_value'}
_PLAIN = {'forever': 'waveform', 'instant': 'value'}


class _Work:
    """Mutable cospan: one driver per vertex, edges rewritten in place."""

    def __init__(self, cospan):
        self.n_vertices = cospan.n_vertices
        self.edges = list(cospan.edges)
        self.inputs = list(cospan.inputs)
        self.outputs = list(cospan.outputs)

    def drivers(self):
        return {v: j for j, e in enumerate(self.edges) for v in e.targets}

    def merge(self, keep, drop):
        def _f(v):
            return keep if v == drop else v
        self.edges = [Edge(e.label, tuple(map(_f, e.sources)),
                           tuple(map(_f, e.targets)), e.value)
                      for e in self.edges]
        self.inputs = [_f(v) for v in self.inputs]
        self.outputs = [_f(v) for v in self.outputs]

    def cospan(self):
        used = set(self.inputs) | set(self.outputs)
        for e in self.edges:
            used.update(e.sources + e.targets)
        index = {v: k for k, v in enumerate(sorted(used))}
        edges = [Edge(e.label, [index[v] for v in e.sources],
                      [index[v] for v in e.targets], e.value)
                 for e in self.edges]
        return InterfacedHypergraph(Hypergraph(len(index), edges),
                                    [index[v] for v in self.inputs],
                                    [index[v] for v in self.outputs])


class _Context:
    def __init__(self, interp, bottom, worlds, now=False):
        self.interp = interp
        self.bottom = bottom
        self.worlds = worlds
        self.now = now
        self.shortcuts = _shortcut_labels(interp) if interp else {}


def _shortcut_labels(interp):
    ref = belnap()
    if interp.lattice != ref.lattice:
        return {}
    labels = {}
    for name, table in interp.semantics.items():
        for kind in ('AND', 'OR'):
            if table == ref.semantics[kind]:
                labels[name] = kind
    return labels


def _padded(alternatives, worlds, bottom):
    alts = list(alternatives)
    width = len(alts[0])
    return tuple(alts + [(bottom,) * width] * (worlds - len(alts)))


def _plain_edges(kind, targets, word):
    return [Edge(_PLAIN[kind], (), (t,), v) for t, v in zip(targets, word)]


def _forever(work, drivers, v, bottom):
    """Letter held forever on a vertex, or None."""
    if v in work.inputs:
        return None
    j = drivers.get(v)
    if j is None:
        return bottom
    e = work.edges[j]
    if e.label == 'intro':
        return bottom
    if e.label == 'waveform':
        return e.value
    if e.label == 'value' and e.value == bottom:
        return bottom
    return None


def _world_letters(work, drivers, v, ctx, kind):
    """Letter of a constant vertex in every world, or None."""
    if v in work.inputs:
        return None
    j = drivers.get(v)
    if j is None:
        return [ctx.bottom] * ctx.worlds
    e = work.edges[j]
    if e.label == 'intro':
        return [ctx.bottom] * ctx.worlds
    if e.label == _PLAIN[kind]:
        return [e.value] * ctx.worlds
    if e.label == _UNCERTAIN[kind]:
        port = e.targets.index(v)
        return [w[port] for w in _padded(e.value, ctx.worlds, ctx.bottom)]
    return None


def _image(ctx, e, letters):
    if e.label == 'join':
        return (int(ctx.interp.lattice.join_table[letters[0], letters[1]]),)
    return ctx.interp.semantics[e.label](*letters)


def _is_gate(ctx, e):
    return e.label == 'join' or (ctx.interp is not None and
                                 e.label in ctx.interp.semantics)


# tidying

def _dead_edge(work, ctx):
    live = set(work.outputs)
    alive = set()
    changed = True
    while changed:
        changed = False
        for j, e in enumerate(work.edges):
            if j not in alive and any(v in live for v in e.targets):
                alive.add(j)
                live.update(e.sources)
                changed = True
    for j in range(len(work.edges)):
        if j not in alive:
            del work.edges[j]
            return True
    return False


def _join_unit(work, ctx):
    drivers = work.drivers()
    for j, e in enumerate(work.edges):
        if e.label != 'join':
            continue
        a, b = e.sources
        if a == b:
            other = a
        elif _forever(work, drivers, a, ctx.bottom) == ctx.bottom:
            other = b
        elif _forever(work, drivers, b, ctx.bottom) == ctx.bottom:
            other = a
        else:
            continue
        del work.edges[j]
        work.merge(other, e.targets[0])
        return True
    return False


# infinite waveforms

def _gate_waveform(work, ctx):
    drivers = work.drivers()
    for j, e in enumerate(work.edges):
        if not _is_gate(ctx, e):
            continue
        letters = [_forever(work, drivers, v, ctx.bottom) for v in e.sources]
        if any(v is None for v in letters):
            continue
        work.edges[j:j + 1] = _plain_edges('forever', e.targets,
                                           _image(ctx, e, letters))
        return True
    return False


def _delay_waveform(work, ctx):
    drivers = work.drivers()
    for j, e in enumerate(work.edges):
        if e.label == 'delay' and _forever(
                work, drivers, e.sources[0], ctx.bottom) == ctx.bottom:
            work.edges[j:j + 1] = _plain_edges('forever', e.targets,
                                               (ctx.bottom,))
            return True
    return False


# Belnap shortcuts

def _shortcut(work, ctx):
    drivers = work.drivers()
    for j, e in enumerate(work.edges):
        kind = ctx.shortcuts.get(e.label)
        if kind is None:
            continue
        absorbing, neutral = (FALSE, TRUE) if kind == 'AND' else (TRUE, FALSE)
        a, b = e.sources
        la = _forever(work, drivers, a, ctx.bottom)
        lb = _forever(work, drivers, b, ctx.bottom)
        if absorbing in (la, lb):
            work.edges[j:j + 1] = _plain_edges('forever', e.targets,
                                               (absorbing,))
            return True
        if neutral in (la, lb):
            del work.edges[j]
            work.merge(b if la == neutral else a, e.targets[0])
            return True
    return False


def _instantaneous(work, drivers, v):
    """Whether a vertex is bottom after the first tick.

    True when no input, delay or waveform reaches the vertex: only values
    feed it, through combinational gates which preserve bottom.
    """
    stack, seen = [v], {v}
    while stack:
        u = stack.pop()
        if u in work.inputs:
            return False
        j = drivers.get(u)
        if j is None:
            continue
        e = work.edges[j]
        if e.label in ('delay', 'waveform', _UNCERTAIN['forever']):
            return False
        for w in e.sources:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return True


def _shortcut_instant(work, ctx):
    drivers = work.drivers()
    for j, e in enumerate(work.edges):
        kind = ctx.shortcuts.get(e.label)
        if kind is None:
            continue
        absorbing, neutral = (FALSE, TRUE) if kind == 'AND' else (TRUE, FALSE)
        a, b = e.sources
        for trigger, other in ((a, b), (b, a)):
            k = drivers.get(trigger)
            if trigger in work.inputs or k is None or \
                    work.edges[k].label != 'value':
                continue
            letter = work.edges[k].value
            if letter not in (absorbing, neutral) or not (
                    ctx.now or _instantaneous(work, drivers, other)):
                continue
            if letter == absorbing:
                work.edges[j:j + 1] = _plain_edges('instant', e.targets,
                                                   (absorbing,))
            else:
                del work.edges[j]
                work.merge(other, e.targets[0])
            return True
    return False


# uncertain values

def _collapse(work, ctx):
    for j, e in enumerate(work.edges):
        for kind, label in _UNCERTAIN.items():
            if e.label == label and len(set(_padded(
                    e.value, ctx.worlds, ctx.bottom))) == 1:
                work.edges[j:j + 1] = _plain_edges(kind, e.targets,
                                                   e.value[0])
                return True
    return False


def _gate_uncertain(work, ctx):
    drivers = work.drivers()
    lattice = ctx.interp.lattice
    for j, e in enumerate(work.edges):
        if not _is_gate(ctx, e) or not any(
                work.edges[drivers[v]].label.startswith('uncertain')
                for v in e.sources if v in drivers):
            continue
        for kind in ('forever', 'instant'):
            if kind == 'instant' and e.label != 'join' and not \
                    ctx.interp.semantics[e.label].is_bottom_preserving(
                        lattice):
                continue
            letters = [_world_letters(work, drivers, v, ctx, kind)
                       for v in e.sources]
            if any(w is None for w in letters):
                continue
            alts = tuple(_image(ctx, e, word) for word in zip(*letters))
            if len(set(alts)) == 1:
                new = _plain_edges(kind, e.targets, alts[0])
            else:
                new = [Edge(_UNCERTAIN[kind], (), e.targets, alts)]
            work.edges[j:j + 1] = new
            return True
    return False


def _stuck_redexes(work, ctx):
    drivers = work.drivers()
    stuck = []
    for e in work.edges:
        labels = [work.edges[drivers[v]].label if v in drivers else None
                  for v in e.sources]
        if not any(lab and lab.startswith('uncertain') for lab in labels):
            continue
        if all(v not in work.inputs and v in drivers and labels[k] in
               ('intro', 'value', 'waveform') + tuple(_UNCERTAIN.values())
               for k, v in enumerate(e.sources)):
            stuck.append(e.label)
    return stuck


TIDY_RULES = (_dead_edge, _join_unit)
WAVEFORM_RULES = (_gate_waveform, _delay_waveform)
SHORTCUT_RULES = (_shortcut, _shortcut_instant)
UNCERTAIN_RULES = (_collapse, _gate_uncertain)


def world_count(term):
    """Number of worlds an extended term distinguishes.

    Parameters
    ----------
    term : Circuit
        The term.

    Returns
    -------
    n_worlds : int
        Largest number of alternatives of an uncertain generator, 1 when
        there is none.
    """
    counts = [len(node.params[0]) for node in C.walk(term)
              if node.kind == C.UNCERTAIN]
    return max(counts, default=1)


def resolve_world(term, world, bottom=0):
    """Replace every uncertain generator by its alternative in one world.

    Parameters
    ----------
    term : Circuit
        The term.

    world : int
        World index; generators with fewer alternatives emit bottom.

    bottom : int, optional
        Index of the bottom value.

    Returns
    -------
    term : Circuit
        A term free of uncertain generators.
    """
    def _pick(node):
        if node.kind != C.UNCERTAIN:
            return node
        alts, forever = node.params
        word = alts[world] if world < len(alts) else \
            (bottom,) * node.n_outputs
        return C.waveform(word) if forever else C.value(word)
    return C.rebuild(term, _pick)


def bind_inputs(term, bindings, bottom=0):
    """Precompose constant and uncertain waveforms on some inputs.

    Parameters
    ----------
    term : Circuit
        The circuit.

    bindings : dict
        Maps an input position to a letter (held forever) or to a list of
        letters (an uncertain waveform, one alternative per world).

    bottom : int, optional
        Index of the bottom value, used to pad uncertain bindings to the
        same number of worlds.

    Returns
    -------
    term : Circuit
        The circuit with the bound inputs removed.
    """
    for pos in bindings:
        if not 0 <= pos < term.n_inputs:
            raise ValueError("No input %d in a circuit with %d inputs"
                             % (pos, term.n_inputs))
    worlds = max([len(b) for b in bindings.values()
                  if not isinstance(b, int)], default=1)
    gens = []
    for pos in range(term.n_inputs):
        if pos not in bindings:
            gens.append(C.identity(1))
        elif isinstance(bindings[pos], int):
            gens.append(C.waveform((bindings[pos],)))
        else:
            alts = [(v,) for v in bindings[pos]]
            alts += [(bottom,)] * (worlds - len(alts))
            gens.append(C.uncertain(alts, forever=True))
    return C.compose(C.tensor(*gens), term)


def _run(term, families, interp, max_steps, bottom=None, now=False,
         verbose=0):
    if bottom is None:
        bottom = interp.lattice.bottom if interp is not None else 0
    work = _Work(term_to_cospan(term, absorb='comonoid'))
    worlds = world_count(term)
    for j, e in enumerate(work.edges):
        if e.label in _UNCERTAIN.values():
            work.edges[j] = e._replace(value=_padded(e.value, worlds,
                                                     bottom))
    ctx = _Context(interp, bottom, worlds, now=now)
    steps = 0
    progress = True
    while progress:
        progress = False
        for rules in families:
            while any(rule(work, ctx) for rule in rules):
                steps += 1
                progress = True
                if steps >= max_steps:
                    warnings.warn("Partial evaluation stopped after %d "
                                  "steps, the result is not in normal form"
                                  % max_steps, ConvergenceWarning)
                    return extract_term(work.cospan(),
                                        mode='traced_comonoid')
    if interp is not None and UNCERTAIN_RULES in families:
        stuck = _stuck_redexes(work, ctx)
        if stuck:
            warnings.warn("Uncertain values stuck at %s"
                          % ', '.join(sorted(set(stuck))), StuckRedexWarning)
    if verbose:
        print("partial evaluation: %d steps, %d edges left"
              % (steps, len(work.edges)))
    return extract_term(work.cospan(), mode='traced_comonoid')


def tidy(term, bottom=0, max_steps=MAX_STEPS):
    """Remove dead structure.

    Edges none of whose outputs reach a circuit output are removed (their
    inputs are then discarded), which also cuts traced loops with no
    outputs. Joins with a constant bottom input or with the same wire
    twice become wires.

    Parameters
    ----------
    term : Circuit
        The term.

    bottom : int, optional
        Index of the bottom value.

    max_steps : int, optional
        Budget on rewrite steps.

    Returns
    -------
    term : Circuit
        The tidied term.
    """
    return _run(term, [TIDY_RULES], None, max_steps, bottom=bottom)


def propagate_waveforms(term, interp, max_steps=MAX_STEPS):
    """Push infinite waveforms through gates and joins.

    A gate whose inputs are all held constant forever is replaced by the
    constant waveform of its image. A delay of a constant bottom is a
    constant bottom; other delayed constants are kept since their first
    tick is bottom.

    Parameters
    ----------
    term : Circuit
        The term.

    interp : Interpretation
        Meaning of the primitives.

    max_steps : int, optional
        Budget on rewrite steps.

    Returns
    -------
    term : Circuit
        The rewritten term; replaced inputs are discarded.
    """
    return _run(term, [WAVEFORM_RULES], interp, max_steps)


def apply_shortcuts(term, interp, now=False, max_steps=MAX_STEPS):
    """Belnap shortcut rules.

    An AND gate with an input held at f outputs f forever and an OR gate
    with an input held at t outputs t forever, whatever the other input.
    An AND gate with an input held at t, or an OR gate with an input held
    at f, passes its other input through. Gates are recognised by their
    tables, so the rules only fire over the Belnap lattice.

    The same rules fire on instantaneous values when the other input is
    bottom after the first tick, as in the copy of a streamed circuit
    that computes the current outputs. The result then holds the value
    instead of a waveform.

    Parameters
    ----------
    term : Circuit
        The term.

    interp : Interpretation
        Meaning of the primitives.

    now : bool, optional
        If True, the term is read as the current-tick copy of a streamed
        circuit and only its first tick is kept: instantaneous values
        trigger the rules whatever the other input.

    max_steps : int, optional
        Budget on rewrite steps.

    Returns
    -------
    term : Circuit
        The rewritten term.
    """
    return _run(term, [SHORTCUT_RULES], interp, max_steps, now=now)


def propagate_uncertain(term, interp, max_steps=MAX_STEPS):
    """Push uncertain values through gates, world by world.

    A gate whose inputs are all constant (plain or uncertain) of the same
    duration is replaced by the uncertain constant of its images in every
    world. Forks need no rule since both branches read the same world.
    Uncertain constants whose alternatives all agree become plain ones.

    Parameters
    ----------
    term : Circuit
        The term.

    interp : Interpretation
        Meaning of the primitives.

    max_steps : int, optional
        Budget on rewrite steps.

    Returns
    -------
    term : Circuit
        The rewritten term. A ``StuckRedexWarning`` is emitted when an
        uncertain constant meets a generator with no rule, such as a delay.
    """
    return _run(term, [UNCERTAIN_RULES], interp, max_steps)


def partial_evaluate(term, interp, bindings=None, max_steps=MAX_STEPS,
                     verbose=0):
    """Fix some inputs and simplify.

    Bound inputs become constant or uncertain waveforms, then tidying,
    waveform propagation, shortcuts and uncertain propagation run
    round-robin until none applies.

    Parameters
    ----------
    term : Circuit
        The circuit.

    interp : Interpretation
        Meaning of the primitives.

    bindings : dict, optional
        Maps input positions to a letter or a list of alternative letters,
        see :func:`bind_inputs`.

    max_steps : int, optional
        Budget on rewrite steps over all families. When exhausted, the
        current term is returned with a ``ConvergenceWarning``.

    verbose : int, optional
        Verbosity level.

    Returns
    -------
    term : Circuit
        The simplified circuit over the unbound inputs. In each world it
        behaves as the bound circuit in the same world.
    """
    if bindings:
        term = bind_inputs(term, bindings, bottom=interp.lattice.bottom)
    families = [TIDY_RULES, WAVEFORM_RULES, SHORTCUT_RULES, UNCERTAIN_RULES]
    return _run(term, families, interp, max_steps, verbose=verbose)
