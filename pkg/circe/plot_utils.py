# License: BSD 3 clause

import numpy as np
import matplotlib.pyplot as plt
from matplotlib.ticker import MaxNLocator
import seaborn as sns

C_LIST = sns.color_palette("colorblind", 8)


def configure_plt():
    params = {'axes.labelsize': 10,
              'font.size': 10,
              'legend.fontsize': 10,
              'xtick.labelsize': 9,
              'ytick.labelsize': 9}
    plt.rcParams.update(params)

    sns.set_palette('colorblind')
    sns.set_context("paper")
    sns.set_style("ticks")


def plot_waveforms(inputs, outputs=None, input_names=None,
                   output_names=None, value_names=None, fname=None):
    """Timing diagram of input and output waveforms.

    One row per wire, the value index on the vertical axis, ticks on the
    horizontal one.

    Parameters
    ----------
    inputs : Waveform
        Input words.

    outputs : Waveform, optional
        Output words, same length as ``inputs``.

    input_names : list of str, optional
        Labels of the input rows.

    output_names : list of str, optional
        Labels of the output rows.

    value_names : sequence of str, optional
        Tick labels of the vertical axes, value indices by default.

    fname : str, optional
        When given, the figure is saved there and closed.

    Returns
    -------
    fig : matplotlib.figure.Figure
        The figure.
    """
    configure_plt()
    rows = [(name, inputs.values[:, k], C_LIST[0]) for k, name in
            enumerate(input_names or
                      ['i%d' % k for k in range(inputs.width)])]
    if outputs is not None:
        rows += [(name, outputs.values[:, k], C_LIST[1]) for k, name in
                 enumerate(output_names or
                           ['o%d' % k for k in range(outputs.width)])]
    if not rows or not len(inputs):
        raise ValueError("Nothing to plot, empty waveform")
    n_values = 1 + max(int(v.max()) if len(v) else 0 for _, v, _ in rows)
    if value_names is not None:
        n_values = len(value_names)
    ticks = np.arange(len(inputs) + 1)

    fig, axarr = plt.subplots(len(rows), 1, sharex=True, squeeze=False,
                              figsize=(max(4, 0.6 * len(ticks)),
                                       0.9 * len(rows) + 0.5))
    for ax, (name, values, color) in zip(axarr[:, 0], rows):
        ax.step(ticks, np.append(values, values[-1:]), where='post',
                color=color)
        ax.set_ylabel(name, rotation=0, ha='right', va='center')
        ax.set_yticks(range(n_values))
        if value_names is not None:
            ax.set_yticklabels(value_names)
        ax.set_ylim(-0.5, n_values - 0.5)
        sns.despine(ax=ax)
    axarr[-1, 0].set_xlabel("tick")
    axarr[-1, 0].xaxis.set_major_locator(MaxNLocator(integer=True))
    plt.tight_layout()
    if fname is not None:
        fig.savefig(fname)
        plt.close(fig)
    return fig
