"""Trajectory figures rendered to standalone SVG via matplotlib.

Output is byte-deterministic: element ids are derived from a fixed hash
salt, text stays as text instead of font-dependent glyph paths, and the
creation date is stripped from the metadata.
"""

from __future__ import annotations

from typing import IO

import matplotlib
from matplotlib.figure import Figure

from .harness import NamedTrajectory

_SVG_RC = {
    "svg.hashsalt": "dynsim",
    "svg.fonttype": "none",
    "path.simplify": False,
}
_FIGSIZE = (8.0, 4.5)


class UnknownChannel(KeyError):
    """A requested plot channel is not one of the trajectory's labels."""


def render_svg(nt: NamedTrajectory, channels: list[str], sink: IO[bytes]) -> None:
    """Plot the requested channels against time as one SVG figure.

    All channels share a single axis pair; an empty selection renders
    the axes alone. Identical inputs produce byte-identical output.
    """
    missing = [c for c in channels if c not in nt.labels]
    if missing:
        raise UnknownChannel(
            f"unknown channel(s) {', '.join(missing)}; have {', '.join(nt.labels)}"
        )
    with matplotlib.rc_context(_SVG_RC):
        fig = Figure(figsize=_FIGSIZE)
        ax = fig.add_subplot(111)
        for label in channels:
            ax.plot(nt.times, nt.channel(label), linewidth=1.2, label=label)
        ax.set_xlabel("t [s]")
        units = {nt.units[nt.labels.index(c)] for c in channels}
        if len(units) == 1:
            ax.set_ylabel(f"[{units.pop()}]")
        ax.grid(True, alpha=0.4)
        if channels:
            ax.legend(loc="best")
        fig.savefig(sink, format="svg", metadata={"Date": None})
