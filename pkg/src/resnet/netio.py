"""Text formats for networks, measures, resistance matrices, trajectories.

Network files are line-oriented: `u v c` per edge with c a positive decimal,
`#` starts a comment, and a line with a single token declares a vertex with no
edges (only legal for a one-vertex network, since networks are connected).
Measure files are `v m` lines. Labels parse as int when possible, else as the
literal string; edges are written in label-sorted order and floats with repr,
so a written file reparses to the same weighted graph byte for byte.
"""

from __future__ import annotations

import csv
import io
from typing import IO, Iterable

import numpy as np

from .errors import ValidationError
from .network import Network, ResistanceMatrix, VertexMeasure


def _parse_label(tok: str):
    try:
        return int(tok)
    except ValueError:
        return tok


def _label_sort_key(v):
    # ints first in numeric order, everything else by its text form
    if isinstance(v, int):
        return (0, v, "")
    return (1, 0, str(v))


def _fmt(x: float) -> str:
    return repr(float(x))


def _tokens(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_network(text: str) -> Network:
    edges = []
    loose = []
    for lineno, toks in _tokens(text):
        if len(toks) == 1:
            loose.append(_parse_label(toks[0]))
        elif len(toks) == 3:
            try:
                c = float(toks[2])
            except ValueError:
                raise ValidationError(f"line {lineno}: bad conductance {toks[2]!r}")
            edges.append((_parse_label(toks[0]), _parse_label(toks[1]), c))
        else:
            raise ValidationError(f"line {lineno}: expected `u v c` or a single vertex")
    if not edges and len(loose) == 1:
        return Network({}, vertices=loose)
    if loose:
        raise ValidationError("vertex-only lines are legal only for a one-vertex file")
    if not edges:
        raise ValidationError("empty network file")
    return Network(edges)


def write_network(net: Network, fh: IO[str]):
    # label-sorted lines, so a written file rewrites to itself after a reparse
    if net.n_edges == 0:
        fh.write(f"{net.vertices[0]}\n")
        return
    rows = []
    for (u, v), c in net.conductances.items():
        if _label_sort_key(v) < _label_sort_key(u):
            u, v = v, u
        rows.append(((_label_sort_key(u), _label_sort_key(v)), f"{u} {v} {_fmt(c)}\n"))
    for _, line in sorted(rows):
        fh.write(line)


def network_to_text(net: Network) -> str:
    buf = io.StringIO()
    write_network(net, buf)
    return buf.getvalue()


def load_network(path) -> Network:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_network(fh.read())


def save_network(net: Network, path):
    with open(path, "w", encoding="utf-8") as fh:
        write_network(net, fh)


def parse_measure(text: str) -> VertexMeasure:
    weights = {}
    for lineno, toks in _tokens(text):
        if len(toks) != 2:
            raise ValidationError(f"line {lineno}: expected `v m`")
        v = _parse_label(toks[0])
        try:
            m = float(toks[1])
        except ValueError:
            raise ValidationError(f"line {lineno}: bad weight {toks[1]!r}")
        if v in weights:
            raise ValidationError(f"line {lineno}: duplicate vertex {v!r}")
        weights[v] = m
    return VertexMeasure(weights)


def write_measure(mu: VertexMeasure, fh: IO[str]):
    for v, m in mu.weights.items():
        fh.write(f"{v} {_fmt(m)}\n")


def load_measure(path) -> VertexMeasure:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_measure(fh.read())


def save_measure(mu: VertexMeasure, path):
    with open(path, "w", encoding="utf-8") as fh:
        write_measure(mu, fh)


def write_resistance_csv(R: ResistanceMatrix, fh: IO[str]):
    """Header row of vertex labels, then one row of values per vertex."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow([str(v) for v in R.labels])
    vals = R.as_float()
    for row in vals:
        w.writerow([_fmt(x) for x in row])


def read_resistance_csv(fh: IO[str]) -> ResistanceMatrix:
    rows = list(csv.reader(fh))
    if not rows:
        raise ValidationError("empty resistance CSV")
    labels = [_parse_label(t) for t in rows[0]]
    n = len(labels)
    if len(rows) != n + 1:
        raise ValidationError(f"expected {n} value rows, got {len(rows) - 1}")
    try:
        vals = np.array([[float(x) for x in row] for row in rows[1:]], dtype=np.float64)
    except ValueError as e:
        raise ValidationError(f"bad matrix entry: {e}") from None
    if vals.shape != (n, n):
        raise ValidationError("resistance CSV is not square")
    return ResistanceMatrix.from_values(labels, vals)


def write_trajectory_csv(traj, fh: IO[str]):
    """CSV `time,vertex` rows, one per jump (first row is the start at 0)."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["time", "vertex"])
    for t, v in zip(traj.jump_times, traj.states):
        w.writerow([_fmt(t), str(v)])


def write_coords_csv(labels: Iterable, coords, fh: IO[str]):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["vertex", "x", "y"])
    for v, (x, y) in zip(labels, coords):
        w.writerow([str(v), _fmt(x), _fmt(y)])
