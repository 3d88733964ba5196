# License: BSD 3 clause
"""Value lattices, circuit signatures and interpretations of primitives."""

from collections import namedtuple
from itertools import product

import numpy as np

from .exceptions import ArityError

BOT = 0
FALSE = 1
TRUE = 2
TOP = 3

BELNAP_NAMES = ('bot', 'f', 't', 'top')

# structural hyperedge labels, never usable as primitive names
RESERVED_LABELS = ('join', 'intro', 'fork', 'elim', 'delay', 'value',
                   'waveform', 'uncertain_value', 'uncertain_waveform')


Violation = namedtuple('Violation', ['primitive', 'kind', 'lower', 'upper'])
Violation.__doc__ = """Witness that a primitive is not a bottom-preserving
monotone function. ``kind`` is 'bottom' or 'monotone'; for 'monotone',
``lower`` is below ``upper`` but their images are not ordered."""


def all_words(n_values, length):
    """All words of a given length, in lexicographic order of indices.

    Parameters
    ----------
    n_values : int
        Size of the alphabet.

    length : int
        Length of the words.

    Returns
    -------
    words : ndarray, shape (n_values ** length, length)
        One word per row.
    """
    words = np.array(list(product(range(n_values), repeat=length)),
                     dtype=np.intp)
    return words.reshape(n_values ** length, length)


class Lattice:
    """Finite lattice given by its order relation.

    The relation is validated at construction: it must be a partial order
    with a least element and all binary joins.

    Parameters
    ----------
    names : sequence of str
        Value names, in index order.

    leq : array-like of bool, shape (n_values, n_values)
        ``leq[a, b]`` is True when ``a`` is below ``b``.
    """

    def __init__(self, names, leq):
        self.names = tuple(names)
        leq = np.array(leq, dtype=bool)
        n = len(self.names)
        if n == 0:
            raise ValueError("A lattice needs at least one value")
        if len(set(self.names)) != n:
            raise ValueError("Duplicate value names in %s" % (self.names,))
        if leq.shape != (n, n):
            raise ValueError("Order relation has shape %s, expected %s"
                             % (leq.shape, (n, n)))
        if not np.all(np.diag(leq)):
            raise ValueError("Order relation is not reflexive")
        both = leq & leq.T
        if np.any(both & ~np.eye(n, dtype=bool)):
            raise ValueError("Order relation is not antisymmetric")
        # a <= b <= c must give a <= c
        if np.any((leq.astype(int) @ leq.astype(int) > 0) & ~leq):
            raise ValueError("Order relation is not transitive")
        self.leq = leq
        self.leq.flags.writeable = False

        bottoms = np.flatnonzero(np.all(leq, axis=1))
        if len(bottoms) != 1:
            raise ValueError("Order relation has no least element")
        self.bottom = int(bottoms[0])

        join_table = np.empty((n, n), dtype=np.intp)
        for a, b in product(range(n), repeat=2):
            upper = np.flatnonzero(leq[a] & leq[b])
            least = [c for c in upper if np.all(leq[c, upper])]
            if not least:
                raise ValueError("Values %s and %s have no join"
                                 % (self.names[a], self.names[b]))
            join_table[a, b] = least[0]
        self.join_table = join_table
        self.join_table.flags.writeable = False
        self.top = int(np.flatnonzero(np.all(leq, axis=0))[0])

    @property
    def size(self):
        return len(self.names)

    @property
    def covers(self):
        """Pairs ``(a, b)`` of indices where ``b`` covers ``a``.

        ``b`` covers ``a`` when ``a < b`` with no value strictly between.
        """
        strict = self.leq & ~np.eye(self.size, dtype=bool)
        # a < c < b for some c
        between = (strict.astype(int) @ strict.astype(int)) > 0
        return [(int(a), int(b)) for a, b in np.argwhere(strict & ~between)]

    def index(self, name):
        """Index of a value given by name.

        Parameters
        ----------
        name : str
            The value name.

        Returns
        -------
        index : int
            Its index.
        """
        try:
            return self.names.index(name)
        except ValueError:
            raise ValueError("Unknown value %r, expected one of %s"
                             % (name, ', '.join(self.names)))

    def leq_words(self, a, b):
        """Pointwise order on words.

        Parameters
        ----------
        a : sequence of int
            First word.

        b : sequence of int
            Second word, same length.

        Returns
        -------
        below : bool
            True when every letter of ``a`` is below the one of ``b``.
        """
        a, b = np.asarray(a, dtype=np.intp), np.asarray(b, dtype=np.intp)
        return bool(np.all(self.leq[a, b]))

    def join_words(self, a, b):
        """Pointwise join of two words.

        Parameters
        ----------
        a : sequence of int
            First word.

        b : sequence of int
            Second word, same length.

        Returns
        -------
        word : tuple of int
            The componentwise join.
        """
        a, b = np.asarray(a, dtype=np.intp), np.asarray(b, dtype=np.intp)
        return tuple(int(v) for v in self.join_table[a, b])

    def __eq__(self, other):
        return (isinstance(other, Lattice) and self.names == other.names
                and np.array_equal(self.leq, other.leq))

    def __hash__(self):
        return hash((self.names, self.leq.tobytes()))

    def __repr__(self):
        return "Lattice(%s)" % ', '.join(self.names)


def chain_lattice(n_values, names=None):
    """Total order ``0 < 1 < ... < n_values - 1``.

    Parameters
    ----------
    n_values : int
        Number of elements.

    names : sequence of str, optional
        Value names. Defaults to the decimal indices.

    Returns
    -------
    lattice : Lattice
        The chain.
    """
    if names is None:
        names = [str(i) for i in range(n_values)]
    idx = np.arange(n_values)
    return Lattice(names, idx[:, None] <= idx[None, :])


def join(lattice, v, w):
    """Least upper bound of two values.

    Parameters
    ----------
    lattice : Lattice
        The value lattice.

    v : int
        First value.

    w : int
        Second value.

    Returns
    -------
    u : int
        The join of ``v`` and ``w``.
    """
    return int(lattice.join_table[v, w])


def lattice_height(lattice):
    """Number of strict steps along the longest chain of a lattice.

    Parameters
    ----------
    lattice : Lattice
        The lattice.

    Returns
    -------
    height : int
        Longest chain length, counted in strict steps.
    """
    leq = lattice.leq
    strict = leq & ~np.eye(lattice.size, dtype=bool)
    # elements with fewer predecessors come first in a linear extension
    order = np.argsort(leq.sum(axis=0), kind='stable')
    height = np.zeros(lattice.size, dtype=int)
    for v in order:
        below = np.flatnonzero(strict[:, v])
        if len(below):
            height[v] = height[below].max() + 1
    return int(height.max())


class Signature:
    """Primitive generators with their arities.

    Parameters
    ----------
    primitives : iterable of (str, int, int)
        Triples ``(name, arity, coarity)``.
    """

    def __init__(self, primitives=()):
        self.primitives = []
        self._arities = {}
        for name, arity, coarity in primitives:
            if name in self._arities:
                raise ValueError("Duplicate primitive %s" % name)
            if name in RESERVED_LABELS:
                raise ValueError("%s is a reserved label" % name)
            if arity < 0 or coarity < 0:
                raise ValueError("Negative arity for primitive %s" % name)
            self.primitives.append((name, int(arity), int(coarity)))
            self._arities[name] = (int(arity), int(coarity))

    def arity(self, name):
        """Input and output wire counts of a primitive.

        Parameters
        ----------
        name : str
            Primitive name.

        Returns
        -------
        arity : tuple of int
            ``(n_inputs, n_outputs)``.
        """
        try:
            return self._arities[name]
        except KeyError:
            raise ValueError("Unknown primitive %s" % name)

    def __contains__(self, name):
        return name in self._arities

    def __iter__(self):
        return iter(self.primitives)

    def __len__(self):
        return len(self.primitives)

    def __repr__(self):
        return "Signature(%s)" % ', '.join(
            "%s:%d->%d" % p for p in self.primitives)


class TruthTable:
    """Total function ``V^m -> V^n`` stored as an array.

    Parameters
    ----------
    table : array-like of int, shape (n_values,) * n_inputs + (n_outputs,)
        ``table[a_1, ..., a_m]`` holds the output word for input word
        ``a``.

    n_values : int
        Size of the value set.
    """

    def __init__(self, table, n_values):
        table = np.array(table, dtype=np.intp)
        if table.ndim == 0 or any(s != n_values for s in table.shape[:-1]):
            raise ValueError("Table shape %s does not fit %d values"
                             % (table.shape, n_values))
        if table.size and (table.min() < 0 or table.max() >= n_values):
            raise ValueError("Table entries out of range")
        self.table = table
        self.table.flags.writeable = False
        self.n_values = n_values
        self.n_inputs = table.ndim - 1
        self.n_outputs = table.shape[-1]

    @classmethod
    def from_function(cls, func, n_values, n_inputs, n_outputs):
        """Tabulate a Python function.

        Parameters
        ----------
        func : callable
            Maps a tuple of ``n_inputs`` ints to a sequence of
            ``n_outputs`` ints.

        n_values : int
            Size of the value set.

        n_inputs : int
            Input width.

        n_outputs : int
            Output width.

        Returns
        -------
        table : TruthTable
            The tabulated function.
        """
        table = np.empty((n_values,) * n_inputs + (n_outputs,),
                         dtype=np.intp)
        for word in product(range(n_values), repeat=n_inputs):
            table[word] = func(word)
        return cls(table, n_values)

    @classmethod
    def from_rows(cls, rows, n_values, n_inputs):
        """Build a table from flat rows in lexicographic input order.

        Parameters
        ----------
        rows : array-like of int, shape (n_values ** n_inputs, n_outputs)
            Output words, one per input word.

        n_values : int
            Size of the value set.

        n_inputs : int
            Input width.

        Returns
        -------
        table : TruthTable
            The table.
        """
        rows = np.asarray(rows, dtype=np.intp)
        if rows.ndim == 1:
            rows = rows[:, None]
        if rows.shape[0] != n_values ** n_inputs:
            raise ArityError("Expected %d rows, got %d"
                             % (n_values ** n_inputs, rows.shape[0]))
        shape = (n_values,) * n_inputs + (rows.shape[1],)
        return cls(rows.reshape(shape), n_values)

    def __call__(self, *word):
        if len(word) != self.n_inputs:
            raise ArityError("Table takes %d inputs, got %d"
                             % (self.n_inputs, len(word)))
        return tuple(int(v) for v in self.table[tuple(word)])

    def rows(self):
        """Flat view of the table in lexicographic input order.

        Returns
        -------
        inputs : ndarray, shape (n_rows, n_inputs)
            Input words.

        outputs : ndarray, shape (n_rows, n_outputs)
            Corresponding output words.
        """
        inputs = all_words(self.n_values, self.n_inputs)
        return inputs, self.table.reshape(len(inputs), self.n_outputs)

    def violations(self, lattice):
        """Pairs of input words witnessing non-monotonicity.

        Only covering pairs are compared, ``b`` being ``a`` with one
        letter raised to a value covering it. Every ordered pair of words
        is linked by a chain of covering pairs, so the table is monotone
        exactly when no covering pair is reported.

        Parameters
        ----------
        lattice : Lattice
            Order on the values.

        Returns
        -------
        pairs : list of (tuple, tuple)
            Covering pairs ``(a, b)`` whose images are not ordered, in
            lexicographic order.
        """
        inputs, outputs = self.rows()
        leq = lattice.leq
        strides = self.n_values ** np.arange(self.n_inputs - 1, -1, -1)
        bad = []
        for k in range(self.n_inputs):
            for a, b in lattice.covers:
                lower = np.flatnonzero(inputs[:, k] == a)
                upper = lower + (b - a) * strides[k]
                ok = np.all(leq[outputs[lower], outputs[upper]], axis=1)
                bad.extend(zip(lower[~ok], upper[~ok]))
        return [(tuple(int(v) for v in inputs[i]),
                 tuple(int(v) for v in inputs[j])) for i, j in sorted(bad)]

    def is_monotone(self, lattice):
        """Whether the table respects the pointwise order.

        Parameters
        ----------
        lattice : Lattice
            Order on the values.

        Returns
        -------
        monotone : bool
            True when no violation exists.
        """
        return not self.violations(lattice)

    def is_bottom_preserving(self, lattice):
        """Whether the all-bottom word is mapped to the all-bottom word.

        Parameters
        ----------
        lattice : Lattice
            The value lattice.

        Returns
        -------
        preserving : bool
            The verdict.
        """
        out = self.table[(lattice.bottom,) * self.n_inputs]
        return bool(np.all(out == lattice.bottom))

    def __eq__(self, other):
        return (isinstance(other, TruthTable)
                and self.n_values == other.n_values
                and np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.n_values, self.table.shape, self.table.tobytes()))

    def __repr__(self):
        return "TruthTable(%d -> %d over %d values)" % (
            self.n_inputs, self.n_outputs, self.n_values)


class Interpretation:
    """Semantic parameter: a lattice plus one table per primitive.

    Parameters
    ----------
    lattice : Lattice
        The values.

    semantics : dict of str to TruthTable
        Meaning of each primitive. The signature is read off the tables.
    """

    def __init__(self, lattice, semantics):
        self.lattice = lattice
        self.semantics = dict(semantics)
        for name, table in self.semantics.items():
            if table.n_values != lattice.size:
                raise ValueError("Table of %s is over %d values, lattice "
                                 "has %d" % (name, table.n_values,
                                             lattice.size))
        self.signature = Signature(
            (name, t.n_inputs, t.n_outputs)
            for name, t in self.semantics.items())

    def extend(self, semantics):
        """New interpretation with additional primitives.

        Parameters
        ----------
        semantics : dict of str to TruthTable
            Extra primitives. Existing names are overridden.

        Returns
        -------
        interp : Interpretation
            The extended interpretation.
        """
        merged = dict(self.semantics)
        merged.update(semantics)
        return Interpretation(self.lattice, merged)

    def parse_value(self, name):
        """Index of a value literal.

        Parameters
        ----------
        name : str
            Value name.

        Returns
        -------
        index : int
            Value index.
        """
        return self.lattice.index(name)

    def format_word(self, word, sep=''):
        """Render a word with value names.

        Parameters
        ----------
        word : sequence of int
            Letters.

        sep : str, optional
            Separator between letters.

        Returns
        -------
        text : str
            The rendered word.
        """
        return sep.join(self.lattice.names[v] for v in word)

    def __repr__(self):
        return "Interpretation(%r, %r)" % (self.lattice, self.signature)


def _belnap_lattice():
    leq = np.eye(4, dtype=bool)
    leq[BOT, :] = True
    leq[:, TOP] = True
    return Lattice(BELNAP_NAMES, leq)


_AND = [[BOT, FALSE, BOT, FALSE],
        [FALSE, FALSE, FALSE, FALSE],
        [BOT, FALSE, TRUE, TOP],
        [FALSE, FALSE, TOP, TOP]]

_OR = [[BOT, BOT, TRUE, TRUE],
       [BOT, FALSE, TRUE, TOP],
       [TRUE, TRUE, TRUE, TRUE],
       [TRUE, TOP, TRUE, TOP]]

_NOT = [BOT, TRUE, FALSE, TOP]


def belnap():
    """Belnap four-valued logic with AND, OR and NOT.

    Values are ordered by information: bot below f and t, which are
    incomparable and below top.

    Returns
    -------
    interp : Interpretation
        The Belnap interpretation.
    """
    lattice = _belnap_lattice()
    return Interpretation(lattice, {
        'AND': TruthTable(np.array(_AND)[..., None], 4),
        'OR': TruthTable(np.array(_OR)[..., None], 4),
        'NOT': TruthTable(np.array(_NOT)[:, None], 4)})


def check_interpretation(interp):
    """Check that every primitive is bottom-preserving and monotone.

    Parameters
    ----------
    interp : Interpretation
        The interpretation to check.

    Returns
    -------
    violations : list of Violation
        Empty when the interpretation is valid.
    """
    lattice = interp.lattice
    violations = []
    for name, table in interp.semantics.items():
        if not table.is_bottom_preserving(lattice):
            word = (lattice.bottom,) * table.n_inputs
            violations.append(Violation(name, 'bottom', word, word))
        for lower, upper in table.violations(lattice):
            violations.append(Violation(name, 'monotone', lower, upper))
    return violations
