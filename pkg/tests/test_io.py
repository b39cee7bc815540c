import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from wavedirs import io
from wavedirs.directions import Kind, PrincipalDirection
from wavedirs.errors import ParseError
from wavedirs.spatial import PointCloud

CUBE8 = """ply
format ascii 1.0
comment unit cube
element vertex 8
property float x
property float y
property float z
end_header
0 0 0
1 0 0
0 1 0
1 1 0
0 0 1
1 0 1
0 1 1
1 1 1
"""


def write(tmp_path, name, text):
    p = tmp_path / name
    if isinstance(text, bytes):
        p.write_bytes(text)
    else:
        p.write_text(text)
    return p


def test_xyz_three_lines(tmp_path):
    cloud = io.read_cloud(write(tmp_path, "a.xyz", "0 0 0\n1 2 3\n# comment\n-1.5 2e-3 4\n"))
    assert len(cloud) == 3
    np.testing.assert_array_equal(cloud.positions[2], [-1.5, 2e-3, 4])
    assert cloud.normals is None


def test_xyz_with_normals_are_normalized(tmp_path):
    cloud = io.read_cloud(write(tmp_path, "a.xyz", "0 0 0 0 0 2\n1 0 0 3 4 0\n"))
    np.testing.assert_allclose(cloud.normals, [[0, 0, 1], [0.6, 0.8, 0]])


@pytest.mark.parametrize(
    "text, line",
    [("0 0 0\n1 1\n", 2), ("0 0 nan\n", 1), ("0 0 0\n\n0 0 x\n", 3), ("0 0 0\n0 0 0 1 0 0\n", 2), ("1 1 inf\n", 1)],
)
def test_xyz_errors_carry_line(tmp_path, text, line):
    with pytest.raises(ParseError) as exc:
        io.read_cloud(write(tmp_path, "bad.xyz", text))
    assert exc.value.location == f"line {line}"


def test_ascii_ply_cube(tmp_path):
    cloud = io.read_cloud(write(tmp_path, "cube.ply", CUBE8))
    assert len(cloud) == 8
    assert set(map(tuple, cloud.positions)) == {(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)}


def test_ply_missing_z(tmp_path):
    text = CUBE8.replace("property float z\n", "")
    with pytest.raises(ParseError, match="'z'"):
        io.read_cloud(write(tmp_path, "noz.ply", text))


@pytest.mark.parametrize(
    "edit, match",
    [
        (("end_header\n", ""), "end_header"),
        (("format ascii 1.0", "format binary_big_endian 1.0"), "unsupported"),
        (("property float x", "property list uchar int x"), "list"),
        (("element vertex 8", "element vertex 9"), "expected 9"),
        (("1 1 1\n", "1 1\n"), "expected 3"),
        (("0 1 1\n", "0 nan 1\n"), "non-finite"),
        (("property float x", "property int x"), "float"),
        (("comment unit cube", "bogus line"), "unknown"),
    ],
)
def test_ply_malformed(tmp_path, edit, match):
    with pytest.raises(ParseError, match=match):
        io.read_cloud(write(tmp_path, "bad.ply", CUBE8.replace(*edit)))


def test_ply_error_line_numbers(tmp_path):
    with pytest.raises(ParseError) as exc:
        io.read_cloud(write(tmp_path, "bad.ply", CUBE8.replace("1 0 1\n", "1 0 q\n")))
    # header is 8 lines, the bad vertex is the 6th body line
    assert exc.value.location == "line 14"


def test_ply_extra_properties_and_elements(tmp_path):
    text = """ply
format ascii 1.0
element vertex 2
property double x
property uchar red
property double y
property double z
property float nx
property float ny
property float nz
element face 1
property list uchar int vertex_indices
end_header
1 255 2 3 0 0 1
4 0 5 6 1 0 0
3 0 1 1
"""
    cloud = io.read_cloud(write(tmp_path, "v.ply", text))
    np.testing.assert_array_equal(cloud.positions, [[1, 2, 3], [4, 5, 6]])
    np.testing.assert_array_equal(cloud.normals, [[0, 0, 1], [1, 0, 0]])


def test_binary_ply(tmp_path):
    rng = np.random.default_rng(0)
    pts = rng.normal(size=(50, 3)).astype("<f4")
    header = b"ply\nformat binary_little_endian 1.0\nelement vertex 50\n"
    header += b"property float x\nproperty float y\nproperty float z\nproperty uchar alpha\nend_header\n"
    dt = np.dtype([("x", "<f4"), ("y", "<f4"), ("z", "<f4"), ("a", "u1")])
    body = np.zeros(50, dt)
    body["x"], body["y"], body["z"] = pts.T
    cloud = io.read_cloud(write(tmp_path, "b.ply", header + body.tobytes()))
    np.testing.assert_array_equal(cloud.positions, pts.astype(float))
    with pytest.raises(ParseError, match="truncated") as exc:
        io.read_cloud(write(tmp_path, "t.ply", header + body.tobytes()[:-5]))
    assert exc.value.location.startswith("byte")
    body["y"][7] = np.inf
    with pytest.raises(ParseError) as exc:
        io.read_cloud(write(tmp_path, "n.ply", header + body.tobytes()))
    assert exc.value.location == f"byte {len(header) + 7 * dt.itemsize}"


finite = st.floats(-1e300, 1e300, allow_nan=False, allow_infinity=False, allow_subnormal=True)


@settings(max_examples=30, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(0, 20), st.just(3)), elements=finite),
       st.sampled_from(["c.xyz", "c.ply", "cb.ply"]))
def test_cloud_round_trip_is_exact(tmp_path_factory, pts, name):
    path = tmp_path_factory.mktemp("rt") / name
    io.write_cloud(path, PointCloud(pts), binary=name.startswith("cb"))
    back = io.read_cloud(path)
    np.testing.assert_array_equal(back.positions, pts)


def test_round_trip_with_normals(tmp_path):
    rng = np.random.default_rng(1)
    n = rng.normal(size=(30, 3))
    n /= np.linalg.norm(n, axis=1, keepdims=True)
    cloud = PointCloud(rng.normal(size=(30, 3)), n)
    for name in ("n.xyz", "n.ply"):
        io.write_cloud(tmp_path / name, cloud)
        back = io.read_cloud(tmp_path / name)
        np.testing.assert_array_equal(back.positions, cloud.positions)
        np.testing.assert_allclose(back.normals, cloud.normals, atol=1e-15)


def record(i, order, kind, angle, lam):
    d = PrincipalDirection(order, angle, np.array([np.cos(angle), np.sin(angle), 0.0]), lam, kind)
    return io.DirectionRecord(i, np.array([i, 0.0, 0.0]), d)


def test_empty_records_give_valid_files(tmp_path):
    io.write_directions(tmp_path / "d.txt", [], tmp_path / "d.ply")
    assert io.read_directions(tmp_path / "d.txt") == []
    text = (tmp_path / "d.ply").read_text()
    assert "element vertex 0" in text and "element edge 0" in text
    assert len(io.read_cloud(tmp_path / "d.ply")) == 0


def test_direction_table_round_trip_and_segments(tmp_path):
    recs = [record(3, 2, Kind.MAXIMUM, 0.25, 4.0), record(3, 3, Kind.MINIMUM, 1.0, -8.0), record(5, 7, Kind.MAXIMUM, 2.0, 1.0)]
    io.write_directions(tmp_path / "d.txt", recs, tmp_path / "d.ply", scale=0.5)
    back = io.read_directions(tmp_path / "d.txt")
    assert [(r.point_index, r.direction.order, r.direction.kind) for r in back] == [
        (3, 2, Kind.MAXIMUM), (3, 3, Kind.MINIMUM), (5, 7, Kind.MAXIMUM)]
    assert back[1].direction.eigenvalue == -8.0
    assert back[0].direction.angle == 0.25
    lines = (tmp_path / "d.ply").read_text().splitlines()
    body = lines[lines.index("end_header") + 1:]
    verts = np.array([[float(v) for v in line.split()] for line in body[:6]])
    lengths = np.linalg.norm(verts[1::2, :3] - verts[::2, :3], axis=1)
    np.testing.assert_allclose(lengths, [0.5 * 4.0 ** 0.5, 0.5 * 8.0 ** (1 / 3), 0.5])
    np.testing.assert_array_equal(verts[::2, 3:], [[0, 0, 255], [0, 255, 0], [128, 128, 128]])
    assert body[6:] == ["0 1", "2 3", "4 5"]


def test_palette():
    assert io.order_color(2) == (0, 0, 255)
    assert io.order_color(3) == (0, 255, 0)
    assert io.order_color(4) == (0, 255, 255)
    assert io.order_color(5) == (255, 105, 180)
    assert io.order_color(6) == (139, 69, 19)
    assert io.order_color(9) == io.OTHER_COLOR
