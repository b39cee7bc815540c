import io as stdio
import subprocess
import sys

import numpy as np
import pytest

from wavedirs import io, synthetic
from wavedirs.cli import compute_records, run_pipeline
from wavedirs.directions import Kind
from wavedirs.regression import FitConfig
from wavedirs.spatial import PointCloud


def run(*argv):
    out, err = stdio.StringIO(), stdio.StringIO()
    code = run_pipeline([str(a) for a in argv], out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(scope="module")
def monkey_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "monkey.xyz"
    assert run("synth", "monkey", "--n", 10000, "--output", path)[0] == 0
    return path


def test_synth_writes_generator_output(tmp_path):
    path = tmp_path / "m.ply"
    code, _, err = run("synth", "monkey", "--n", 500, "--seed", 3, "--output", path)
    assert code == 0 and "500 points" in err
    np.testing.assert_array_equal(io.read_cloud(path).positions, synthetic.monkey_saddle(500, seed=3).cloud.positions)


@pytest.mark.parametrize("gen", ["octopus", "cube", "planes", "tjunction"])
def test_synth_generators(tmp_path, gen):
    code, _, _ = run("synth", gen, "--n", 2000, "--noise-pct", 0.05, "--output", tmp_path / "c.xyz")
    assert code == 0
    assert len(io.read_cloud(tmp_path / "c.xyz")) > 1000


def test_synth_planes_angles(tmp_path):
    code, _, _ = run("synth", "planes", "--n", 500, "--angles", "0,100,200", "--output", tmp_path / "p.xyz")
    assert code == 0
    code, _, err = run("synth", "planes", "--n", 500, "--angles", "0,10", "--output", tmp_path / "p.xyz")
    assert code != 0 and "invalid argument" in err


def test_monkey_center_gives_six_segments(monkey_file, tmp_path):
    cloud = io.read_cloud(monkey_file)
    records, failures = compute_records(cloud, FitConfig(radius=0.5), [3], indices=[0])
    assert not failures
    io.write_directions(tmp_path / "d.txt", records, tmp_path / "d.ply")
    segments = io.read_cloud(tmp_path / "d.ply")
    assert len(segments) == 12
    kinds = [r.direction.kind for r in records]
    assert kinds.count(Kind.MAXIMUM) == 3 and kinds.count(Kind.MINIMUM) == 3
    np.testing.assert_allclose([abs(r.direction.eigenvalue) for r in records], 6.0, rtol=1e-3)


def test_dirs_end_to_end(monkey_file, tmp_path):
    out, ply = tmp_path / "d.txt", tmp_path / "d.ply"
    code, _, err = run("dirs", "--input", monkey_file, "--radius", 0.5, "--orders", "2,3", "--subsample", 30,
                       "--output", out, "--ply-out", ply, "--scale", 0.1)
    assert code == 0, err
    recs = io.read_directions(out)
    assert len({r.point_index for r in recs}) <= 30
    assert {r.direction.order for r in recs} <= {2, 3}
    assert len(io.read_cloud(ply)) == 2 * len(recs)


def test_max_only(monkey_file, tmp_path):
    out = tmp_path / "d.txt"
    assert run("dirs", "--input", monkey_file, "--radius", 0.5, "--orders", 3, "--subsample", 10, "--max-only",
               "--output", out)[0] == 0
    assert {r.direction.kind for r in io.read_directions(out)} == {Kind.MAXIMUM}


def test_threads_do_not_change_output(monkey_file, tmp_path):
    texts = []
    for threads in (1, 3):
        out = tmp_path / f"d{threads}.txt"
        code, _, _ = run("dirs", "--input", monkey_file, "--radius", 0.3, "--orders", "2,3,4", "--subsample", 60,
                         "--seed", 9, "--threads", threads, "--output", out)
        assert code == 0
        texts.append(out.read_text())
    assert texts[0] == texts[1]
    # same seed, same subsample
    out = tmp_path / "again.txt"
    run("dirs", "--input", monkey_file, "--radius", 0.3, "--orders", "2,3,4", "--subsample", 60, "--seed", 9,
        "--output", out)
    assert out.read_text() == texts[0]


def test_config_file(monkey_file, tmp_path):
    cfg = tmp_path / "run.cfg"
    out = tmp_path / "d.txt"
    cfg.write_text(f"# defaults\ninput = {monkey_file}\nradius = 0.5\norders = 3\nmax-only = true\nsubsample=5\n")
    code, _, err = run("dirs", "--config", cfg, "--output", out)
    assert code == 0, err
    recs = io.read_directions(out)
    assert {r.direction.order for r in recs} == {3}
    assert {r.direction.kind for r in recs} == {Kind.MAXIMUM}
    # command line beats the file
    code, _, _ = run("dirs", "--config", cfg, "--output", out, "--orders", 2)
    assert {r.direction.order for r in io.read_directions(out)} <= {2}
    cfg.write_text("colour = red\n")
    code, _, err = run("dirs", "--config", cfg)
    assert code != 0 and "unknown key" in err


@pytest.mark.parametrize(
    "extra, message",
    [
        (["--radius", "0"], "radius must be positive"),
        (["--radius", "-1"], "radius must be positive"),
        (["--radius", "0.5", "--orders", "11"], "order 11"),
        (["--radius", "0.5", "--orders", "1"], "order 1"),
        (["--radius", "0.5", "--threads", "0"], "threads"),
        (["--radius", "0.5", "--subsample", "0"], "subsample"),
    ],
)
def test_dirs_invalid_arguments(monkey_file, tmp_path, extra, message):
    code, _, err = run("dirs", "--input", monkey_file, "--output", tmp_path / "d.txt", *extra)
    assert code != 0
    assert "invalid argument" in err and message in err


def test_dirs_missing_and_malformed_input(tmp_path):
    code, _, err = run("dirs", "--input", tmp_path / "none.xyz", "--radius", 0.1)
    assert code != 0 and "error" in err
    bad = tmp_path / "bad.xyz"
    bad.write_text("0 0 0\n1 2\n")
    code, _, err = run("dirs", "--input", bad, "--radius", 0.1)
    assert code != 0 and "parse error" in err and "line 2" in err


def test_argparse_errors_are_nonzero():
    assert run("nonsense")[0] != 0
    assert run("dirs", "--norm", "l3")[0] != 0


def test_sparse_points_are_skipped(tmp_path):
    pts = np.random.default_rng(0).uniform(-1, 1, (200, 3)) * [1, 1, 0]
    io.write_cloud(tmp_path / "c.xyz", PointCloud(pts))
    code, _, err = run("dirs", "--input", tmp_path / "c.xyz", "--radius", 0.05, "--output", tmp_path / "d.txt")
    assert code == 0
    assert "skipped 200 points" in err
    assert io.read_directions(tmp_path / "d.txt") == []


def test_selftest_command_passes():
    code, out, _ = run("selftest", "--rows", 20)
    assert code == 0, out
    assert out.count("PASS") == 6


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "wavedirs.cli", "dirs", "--input", "x.xyz", "--radius", "0"],
                          capture_output=True, text=True, cwd=tmp_path)
    assert proc.returncode != 0
    assert "radius must be positive" in proc.stderr
