"""CSV sample/field files and P2 PGM output.

Sample files have a header ``x,value`` (path) or ``x,y,value`` (grid).
Field files cover the whole domain; a grid field starts with a
``# width=W height=H`` comment line before its ``x,y,value`` header.
Floats are written with ``repr`` so they re-parse bit-identically.
"""

from __future__ import annotations

import csv
import io
import re
from pathlib import Path

import numpy as np

from gvsmooth.domain import Domain, SampleSet, ScalarField, build_grid_domain, build_path_domain
from gvsmooth.errors import FormatError, InvalidArgument

_GRID_LINE = re.compile(r"#\s*width\s*=\s*(\d+)\s+height\s*=\s*(\d+)\s*$")


def format_float(v) -> str:
    return repr(float(v))


def _int(text, path, line, what):
    try:
        v = int(text.strip())
    except ValueError:
        raise FormatError(f"{what} {text!r} is not an integer", path, line) from None
    if v < 0:
        raise FormatError(f"{what} {v} is negative", path, line)
    return v


def _float(text, path, line):
    try:
        v = float(text.strip())
    except ValueError:
        raise FormatError(f"value {text!r} is not a number", path, line) from None
    if not np.isfinite(v):
        raise FormatError(f"value {text!r} is not finite", path, line)
    return v


def _rows(lines, path, first_line):
    """Yield ``(line_no, fields)`` after checking the header row."""
    reader = csv.reader(lines)
    header = None
    for offset, row in enumerate(reader):
        line_no = first_line + offset
        if not row or all(not c.strip() for c in row):
            continue
        if header is None:
            header = [c.strip().lower() for c in row]
            yield line_no, header
            continue
        if len(row) != len(header):
            raise FormatError(f"expected {len(header)} columns, got {len(row)}", path, line_no)
        yield line_no, row
    if header is None:
        raise FormatError("missing header row", path)


def _read_text(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read file ({exc.strerror})", path) from None


def read_samples(path, dom: Domain, value_type=float) -> SampleSet:
    """Guiding samples for ``dom``; ``value_type=int`` for level indices."""
    rows = _rows(io.StringIO(_read_text(path)), path, 1)
    _, header = next(rows)
    expected = ["x", "y", "value"] if dom.is_grid else ["x", "value"]
    if header != expected:
        raise FormatError(f"header must be {','.join(expected)}, got {','.join(header)}", path, 1)
    pairs, seen = [], set()
    for line, row in rows:
        if dom.is_grid:
            x = _int(row[0], path, line, "x")
            y = _int(row[1], path, line, "y")
            if x >= dom.width or y >= dom.height:
                raise FormatError(f"({x}, {y}) outside {dom.width}x{dom.height} grid", path, line)
            v = dom.vertex_at(x, y)
        else:
            x = _int(row[0], path, line, "x")
            if x >= dom.n_vertices:
                raise FormatError(f"x={x} outside path of {dom.n_vertices} vertices", path, line)
            v = x
        if v in seen:
            raise FormatError("duplicate coordinate", path, line)
        seen.add(v)
        if value_type is int:
            val = _int(row[-1], path, line, "level index")
        else:
            val = _float(row[-1], path, line)
        pairs.append((v, val))
    if not pairs:
        raise FormatError("no samples", path)
    return SampleSet.from_pairs(pairs)


def read_coordinates(path, dom: Domain) -> list[int]:
    """Vertex ids listed in a guiding file (``x`` or ``x,y`` columns; extra columns ignored)."""
    rows = _rows(io.StringIO(_read_text(path)), path, 1)
    _, header = next(rows)
    need = ["x", "y"] if dom.is_grid else ["x"]
    if header[: len(need)] != need:
        raise FormatError(f"header must start with {','.join(need)}", path, 1)
    out = []
    for line, row in rows:
        try:
            if dom.is_grid:
                out.append(dom.vertex_at(_int(row[0], path, line, "x"), _int(row[1], path, line, "y")))
            else:
                out.append(dom.vertex_at(_int(row[0], path, line, "x")))
        except FormatError:
            raise
        except InvalidArgument as exc:
            raise FormatError(f"unknown guiding coordinate: {exc}", path, line) from None
    return out


def read_field(path, adjacency: int = 4) -> ScalarField:
    text = _read_text(path)
    lines = text.splitlines()
    first = lines[0].strip() if lines else ""
    if first.startswith("#"):
        m = _GRID_LINE.match(first)
        if not m:
            raise FormatError("expected '# width=W height=H'", path, 1)
        width, height = int(m.group(1)), int(m.group(2))
        if width < 1 or height < 1:
            raise FormatError("grid dimensions must be positive", path, 1)
        dom = build_grid_domain(width, height, adjacency)
        rows = _rows(lines[1:], path, 2)
        expected = ["x", "y", "value"]
    else:
        dom = None
        rows = _rows(lines, path, 1)
        expected = ["x", "value"]
    header_line, header = next(rows)
    if header != expected:
        raise FormatError(f"header must be {','.join(expected)}, got {','.join(header)}", path, header_line)

    values = {}
    for line, row in rows:
        if dom is not None:
            key = (_int(row[0], path, line, "x"), _int(row[1], path, line, "y"))
            if key[0] >= dom.width or key[1] >= dom.height:
                raise FormatError(f"{key} outside {dom.width}x{dom.height} grid", path, line)
        else:
            key = _int(row[0], path, line, "x")
        if key in values:
            raise FormatError("duplicate coordinate", path, line)
        values[key] = _float(row[-1], path, line)

    if dom is None:
        n = len(values)
        if n == 0:
            raise FormatError("field has no rows", path)
        missing = sorted(set(range(n)) - set(values))
        if missing:
            raise FormatError(f"field does not cover x={missing[0]}", path)
        return ScalarField(build_path_domain(n), [values[x] for x in range(n)])
    order = [(x, y) for y in range(dom.height) for x in range(dom.width)]
    for key in order:
        if key not in values:
            raise FormatError(f"field does not cover (x, y)={key}", path)
    return ScalarField(dom, [values[k] for k in order])


def field_to_text(field: ScalarField) -> str:
    dom = field.domain
    out = []
    if dom.is_grid:
        out.append(f"# width={dom.width} height={dom.height}")
        out.append("x,y,value")
        for v, val in enumerate(field.values):
            y, x = divmod(v, dom.width)
            out.append(f"{x},{y},{format_float(val)}")
    elif dom.kind == "path":
        out.append("x,value")
        out.extend(f"{x},{format_float(val)}" for x, val in enumerate(field.values))
    else:
        raise InvalidArgument("only path and grid fields can be written")
    return "\n".join(out) + "\n"


def write_field(path, field: ScalarField) -> None:
    Path(path).write_text(field_to_text(field))


def pgm_text(field: ScalarField) -> str:
    """8-bit plain (P2) PGM, min-max normalised; a constant field is all zeros."""
    a = np.atleast_2d(np.asarray(field.as_array(), dtype=float))
    lo, hi = float(a.min()), float(a.max())
    if hi > lo:
        pix = np.rint((a - lo) / (hi - lo) * 255).astype(int)
    else:
        pix = np.zeros(a.shape, dtype=int)
    h, w = pix.shape
    body = "\n".join(" ".join(str(p) for p in row) for row in pix)
    return f"P2\n{w} {h}\n255\n{body}\n"


def write_pgm(path, field: ScalarField) -> None:
    Path(path).write_text(pgm_text(field))
