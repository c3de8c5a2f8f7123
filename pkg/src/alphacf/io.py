"""CSV writers. Every file starts with ``#`` metadata lines, then a header row."""
from __future__ import annotations

import csv
import datetime as _dt
import io
from pathlib import Path


def _header(meta, timestamp):
    lines = [f"# {k}: {v}" for k, v in meta.items()]
    if timestamp:
        lines.append(f"# generated: {_dt.datetime.now(_dt.timezone.utc).isoformat(timespec='seconds')}")
    return "".join(line + "\n" for line in lines)


def format_csv(columns, rows, meta=None, timestamp=False):
    buf = io.StringIO()
    buf.write(_header(meta or {}, timestamp))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)
    return buf.getvalue()


def write_csv(path, columns, rows, meta=None, timestamp=False):
    Path(path).write_text(format_csv(columns, rows, meta, timestamp), encoding="utf-8")


def _num(x):
    return repr(float(x))


def edge_rows(scores, labels=None):
    lab = labels.to_label if labels is not None else str
    for i, (v, w) in enumerate(scores.edges.tolist()):
        row = [lab(v), lab(w), _num(scores.values[i])]
        if scores.stderr is not None:
            row.append(_num(scores.stderr[i]))
        yield row


def edge_columns(scores):
    return ["u", "v", "score"] + (["stderr"] if scores.stderr is not None else [])


def node_rows(scores, labels=None):
    lab = labels.to_label if labels is not None else str
    return ([lab(v), _num(x)] for v, x in enumerate(scores.values))


def correlation_rows(matrix):
    for name, row in zip(matrix.names, matrix.values):
        yield [name] + [f"{x:.6f}" for x in row]


def trace_rows(trace):
    for f, d, c in zip(trace.fractions, trace.inverse_avg_distance, trace.lcc_size):
        yield [f"{f:.6f}", _num(d), int(c)]


def ccdf_rows(dist):
    return ([_num(x), int(c)] for x, c in zip(dist.thresholds, dist.counts))
