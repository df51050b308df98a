"""Delimited output: CSV or JSON lines, preceded by a provenance comment."""

from __future__ import annotations

import json
from datetime import datetime, timezone

from . import __version__


def provenance_line(command, params, timestamp=True):
    parts = [f"ffquad={__version__}", f"command={command}"]
    parts += [f"{k}={v}" for k, v in sorted(params.items()) if v is not None]
    stamp = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ") if timestamp else "none"
    parts.append(f"timestamp={stamp}")
    return "# provenance: " + " ".join(parts)


def render(rows, columns, fmt="csv"):
    """Data section as a string; rows are dicts keyed by column name."""
    lines = []
    if fmt == "csv":
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(str(row[c]) for c in columns))
    elif fmt == "json":
        for row in rows:
            lines.append(json.dumps({c: row[c] for c in columns}, separators=(",", ":")))
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return "".join(line + "\n" for line in lines)


def data_section(text):
    """Strip comment lines (the provenance header) from rendered output."""
    return "".join(line for line in text.splitlines(keepends=True) if not line.startswith("#"))
