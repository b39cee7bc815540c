"""Point cloud and direction file formats.

Point clouds are read from plain ``xyz`` text (``x y z [nx ny nz]`` per
line, ``#`` comments allowed) or from PLY, ascii or binary little-endian,
with ``x y z`` float properties and optional ``nx ny nz``. Directions are
written as a whitespace table and, optionally, as a PLY of colored line
segments (vertex + edge elements).
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .directions import Kind, PrincipalDirection
from .errors import ParseError
from .spatial import PointCloud

__all__ = [
    "DirectionRecord",
    "ORDER_COLORS",
    "OTHER_COLOR",
    "order_color",
    "read_cloud",
    "write_cloud",
    "write_directions",
    "read_directions",
]

TABLE_COLUMNS = "point_index px py pz order kind angle dx dy dz eigenvalue"

ORDER_COLORS = {
    2: (0, 0, 255),  # blue
    3: (0, 255, 0),  # green
    4: (0, 255, 255),  # cyan
    5: (255, 105, 180),  # pink
    6: (139, 69, 19),  # brown
}
OTHER_COLOR = (128, 128, 128)

_PLY_TYPES = {
    "char": "i1", "int8": "i1",
    "uchar": "u1", "uint8": "u1",
    "short": "i2", "int16": "i2",
    "ushort": "u2", "uint16": "u2",
    "int": "i4", "int32": "i4",
    "uint": "u4", "uint32": "u4",
    "float": "f4", "float32": "f4",
    "double": "f8", "float64": "f8",
}


def order_color(order):
    return ORDER_COLORS.get(int(order), OTHER_COLOR)


@dataclass(frozen=True, eq=False)
class DirectionRecord:
    point_index: int
    position: np.ndarray
    direction: PrincipalDirection

    def sort_key(self):
        d = self.direction
        return (self.point_index, d.order, d.angle, d.kind.value)


# ---------------------------------------------------------------- reading


def read_cloud(path) -> PointCloud:
    """Read an ``xyz`` or PLY file (PLY is recognized by its magic line)."""
    path = Path(path)
    with open(path, "rb") as fh:
        data = fh.read()
    if data.startswith(b"ply"):
        return _read_ply(data)
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as err:
        raise ParseError("xyz file is not valid text", f"byte {err.start}") from None
    return _read_xyz(text)


def _finite_or_fail(values, where):
    if not np.all(np.isfinite(values)):
        raise ParseError("non-finite coordinate", where)


def _make_cloud(positions, normals, where):
    if normals is not None:
        lengths = np.linalg.norm(normals, axis=1)
        bad = np.flatnonzero(lengths == 0)
        if bad.size:
            raise ParseError(f"zero-length normal for point {bad[0]}", where)
        normals = normals / lengths[:, None]
    return PointCloud(positions.reshape(-1, 3), None if normals is None else normals.reshape(-1, 3))


def _read_xyz(text):
    rows = []
    width = None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (3, 6):
            raise ParseError(f"expected 3 or 6 values, got {len(parts)}", f"line {lineno}")
        if width is None:
            width = len(parts)
        elif len(parts) != width:
            raise ParseError("inconsistent number of columns", f"line {lineno}")
        try:
            values = [float(p) for p in parts]
        except ValueError:
            raise ParseError("not a number", f"line {lineno}") from None
        _finite_or_fail(values, f"line {lineno}")
        rows.append(values)
    arr = np.array(rows, dtype=float).reshape(-1, width or 3)
    normals = arr[:, 3:6] if width == 6 else None
    return _make_cloud(arr[:, :3], normals, "xyz normals")


def _parse_ply_header(data):
    """Returns ``(format, elements, body_offset, body_line)``.

    ``elements`` is a list of ``(name, count, [(prop, type or None for lists)])``.
    """
    end = data.find(b"end_header")
    if end < 0:
        raise ParseError("missing end_header", "byte 0")
    nl = data.find(b"\n", end)
    body = len(data) if nl < 0 else nl + 1
    try:
        header = data[:body].decode("ascii")
    except UnicodeDecodeError as err:
        raise ParseError("header is not ascii", f"byte {err.start}") from None
    lines = header.replace("\r\n", "\n").split("\n")
    if lines[0].strip() != "ply":
        raise ParseError("missing 'ply' magic", "line 1")
    fmt = None
    elements = []
    lineno = 1
    for lineno, line in enumerate(lines[1:], 2):
        parts = line.split()
        if not parts or parts[0] in ("comment", "obj_info"):
            continue
        key = parts[0]
        if key == "end_header":
            break
        if key == "format":
            if len(parts) != 3 or parts[2] != "1.0":
                raise ParseError("malformed format line", f"line {lineno}")
            if parts[1] not in ("ascii", "binary_little_endian"):
                raise ParseError(f"unsupported PLY format {parts[1]!r}", f"line {lineno}")
            fmt = parts[1]
        elif key == "element":
            if len(parts) != 3:
                raise ParseError("malformed element line", f"line {lineno}")
            try:
                count = int(parts[2])
            except ValueError:
                raise ParseError("element count is not an integer", f"line {lineno}") from None
            if count < 0:
                raise ParseError("negative element count", f"line {lineno}")
            elements.append((parts[1], count, []))
        elif key == "property":
            if not elements:
                raise ParseError("property before any element", f"line {lineno}")
            if len(parts) == 5 and parts[1] == "list":
                elements[-1][2].append((parts[4], None))
            elif len(parts) == 3 and parts[1] in _PLY_TYPES:
                elements[-1][2].append((parts[2], _PLY_TYPES[parts[1]]))
            else:
                raise ParseError("malformed property line", f"line {lineno}")
        else:
            raise ParseError(f"unknown header keyword {key!r}", f"line {lineno}")
    if fmt is None:
        raise ParseError("missing format line", "line 2")
    return fmt, elements, body, lineno + 1


def _read_ply(data):
    fmt, elements, offset, body_line = _parse_ply_header(data)
    if not elements or elements[0][0] != "vertex":
        raise ParseError("the first element must be 'vertex'", "header")
    _, count, props = elements[0]
    names = [p for p, _ in props]
    if any(t is None for _, t in props):
        raise ParseError("list properties on vertices are not supported", "header")
    for axis in "xyz":
        if axis not in names:
            raise ParseError(f"vertex element has no '{axis}' property", "header")
    types = dict(props)
    wanted = ["x", "y", "z"]
    has_normals = all(n in names for n in ("nx", "ny", "nz"))
    if any(n in names for n in ("nx", "ny", "nz")) and not has_normals:
        raise ParseError("incomplete normal properties", "header")
    if has_normals:
        wanted += ["nx", "ny", "nz"]
    for name in wanted:
        if types[name][0] != "f":
            raise ParseError(f"property '{name}' must be float or double", "header")

    if fmt == "binary_little_endian":
        dtype = np.dtype([(p, "<" + t) for p, t in props])
        need = offset + count * dtype.itemsize
        if len(data) < need:
            raise ParseError("truncated vertex data", f"byte {len(data)}")
        table = np.frombuffer(data, dtype=dtype, count=count, offset=offset)
        cols = np.column_stack([table[n].astype(float) for n in wanted]) if count else np.empty((0, len(wanted)))
        bad = np.flatnonzero(~np.all(np.isfinite(cols), axis=1))
        if bad.size:
            raise ParseError("non-finite coordinate", f"byte {offset + bad[0] * dtype.itemsize}")
    else:
        lines = data[offset:].decode("ascii", errors="replace").splitlines()
        cols = np.empty((count, len(wanted)))
        pick = [names.index(n) for n in wanted]
        row = 0
        for i, line in enumerate(lines):
            if row == count:
                break
            parts = line.split()
            if not parts:
                continue
            where = f"line {body_line + i}"
            if len(parts) != len(names):
                raise ParseError(f"expected {len(names)} values, got {len(parts)}", where)
            try:
                values = [float(parts[j]) for j in pick]
            except ValueError:
                raise ParseError("not a number", where) from None
            _finite_or_fail(values, where)
            cols[row] = values
            row += 1
        if row < count:
            raise ParseError(f"expected {count} vertices, found {row}", f"line {body_line + len(lines)}")
    normals = cols[:, 3:6] if has_normals else None
    return _make_cloud(cols[:, :3], normals, "PLY normals")


# ---------------------------------------------------------------- writing


def _fmt(x):
    return format(float(x), ".17g")


def write_cloud(path, cloud: PointCloud, binary=False):
    """Write ``cloud`` as PLY (``.ply`` suffix) or ``xyz`` text, at 17 significant digits."""
    path = Path(path)
    data = cloud.positions if cloud.normals is None else np.hstack([cloud.positions, cloud.normals])
    if path.suffix.lower() != ".ply":
        with open(path, "w") as fh:
            for row in data:
                fh.write(" ".join(_fmt(v) for v in row) + "\n")
        return
    props = ["x", "y", "z"] + ([] if cloud.normals is None else ["nx", "ny", "nz"])
    header = ["ply", f"format {'binary_little_endian' if binary else 'ascii'} 1.0",
              f"element vertex {len(cloud)}"]
    header += [f"property double {p}" for p in props]
    header.append("end_header")
    with open(path, "wb") as fh:
        fh.write(("\n".join(header) + "\n").encode("ascii"))
        if binary:
            fh.write(np.ascontiguousarray(data, dtype="<f8").tobytes())
        else:
            for row in data:
                fh.write((" ".join(_fmt(v) for v in row) + "\n").encode("ascii"))


def write_directions(path, records, ply_path=None, scale=1.0):
    """Direction table at ``path``; optional segment PLY at ``ply_path``.

    Each segment starts at the sample and has length
    ``scale * |eigenvalue| ** (1 / order)``.
    """
    records = list(records)
    with open(path, "w") as fh:
        fh.write("# " + TABLE_COLUMNS + "\n")
        for rec in records:
            d = rec.direction
            fields = [str(int(rec.point_index)), *map(_fmt, rec.position), str(d.order), d.kind.value,
                      _fmt(d.angle), *map(_fmt, d.direction3d), _fmt(d.eigenvalue)]
            fh.write(" ".join(fields) + "\n")
    if ply_path is None:
        return
    header = [
        "ply",
        "format ascii 1.0",
        f"element vertex {2 * len(records)}",
        "property double x",
        "property double y",
        "property double z",
        "property uchar red",
        "property uchar green",
        "property uchar blue",
        f"element edge {len(records)}",
        "property int vertex1",
        "property int vertex2",
        "end_header",
    ]
    with open(ply_path, "w") as fh:
        fh.write("\n".join(header) + "\n")
        for rec in records:
            d = rec.direction
            length = scale * abs(d.eigenvalue) ** (1.0 / d.order)
            color = " ".join(map(str, order_color(d.order)))
            start = np.asarray(rec.position, dtype=float)
            for p in (start, start + length * d.direction3d):
                fh.write(" ".join(_fmt(v) for v in p) + " " + color + "\n")
        for i in range(len(records)):
            fh.write(f"{2 * i} {2 * i + 1}\n")


def read_directions(path):
    """Parse a table written by :func:`write_directions` back into records."""
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            p = line.split()
            if len(p) != 11:
                raise ParseError(f"expected 11 columns, got {len(p)}", f"line {lineno}")
            try:
                order = int(p[4])
                direction = PrincipalDirection(
                    order, float(p[6]), np.array([float(v) for v in p[7:10]]), float(p[10]), Kind(p[5])
                )
                pos = np.array([float(v) for v in p[1:4]])
                out.append(DirectionRecord(int(p[0]), pos, direction))
            except ValueError:
                raise ParseError("malformed direction row", f"line {lineno}") from None
    return out
