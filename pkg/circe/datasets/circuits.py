# License: BSD 3 clause

from os.path import dirname, join as pjoin

from ..lang import load

DATA_PATH = pjoin(dirname(__file__), 'data')


NAMES = {'sr_latch': 'sr_latch.circ',
         'half_adder': 'half_adder.circ',
         'cyclic_mux': 'cyclic_mux.circ',
         'protocol': 'protocol.circ',
         'chain': 'chain.circ'}


def list_circuits():
    """Names of the bundled circuits."""
    return sorted(NAMES)


def data_path(fname):
    """Path of a bundled file.

    Parameters
    ----------
    fname : str
        File name, e.g. ``'set_reset.csv'`` or ``'e1_to_e2.rules'``.

    Returns
    -------
    path : str
        Absolute path.
    """
    return pjoin(DATA_PATH, fname)


def load_circuit(name, interp=None):
    """Load a bundled circuit.

    Parameters
    ----------
    name : str
        One of :func:`list_circuits`. The last circuit of the file is
        returned, earlier ones being its subcircuits.

    interp : Interpretation, optional
        Primitives and value names, Belnap by default.

    Returns
    -------
    term : Circuit
        The circuit term.
    """
    if name not in NAMES:
        raise ValueError("Unknown circuit %s, expected one of %s"
                         % (name, ', '.join(list_circuits())))
    return load(data_path(NAMES[name]), interp=interp)
