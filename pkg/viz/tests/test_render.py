import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from qpc_viz import CsvFormatError, PlotJob, render
from qpc_viz.cli import main as viz_main


def qpc(*args):
    subprocess.run([sys.executable, "-m", "qpc", *args], check=True,
                   stdout=subprocess.DEVNULL)


@pytest.fixture(scope="module")
def exports(tmp_path_factory):
    """CSV bundle produced through the primary CLI (the external interface)."""
    root = tmp_path_factory.mktemp("exports")
    qpc("umbilic", "--family", "Q2", "--semiaxes2", "4,3,2,1", "--n", "40",
        "--out", str(root / "q2_locus.csv"))
    # seeds: one closed-foliation leaf, one escaping leaf (radius capped)
    qpc("trace", "--family", "Q2", "--semiaxes2", "4,3,2,1", "--foliation",
        "1", "--start=2.2144698489843660,0.302630905048484,"
        "0.1973693291011461,0.4868473479546196",
        "--out", str(root / "q2_leaf_f1.csv"))
    qpc("trace", "--family", "Q2", "--semiaxes2", "4,3,2,1", "--foliation",
        "2", "--start=2.2144698489843660,0.302630905048484,"
        "0.1973693291011461,0.4868473479546196", "--escape-radius", "8",
        "--out", str(root / "q2_leaf_f2.csv"))
    qpc("umbilic3", "--family", "q0", "--semiaxes2", "4,3,1",
        "--out", str(root / "q0_umbilics.csv"))
    qpc("trace", "--family", "q0", "--semiaxes2", "4,3,1", "--foliation", "1",
        "--start=1.0,1.0,0.6454972243679028",
        "--out", str(root / "q0_leaf_f1.csv"))
    qpc("trace", "--family", "q0", "--semiaxes2", "4,3,1", "--foliation", "2",
        "--start=1.0,1.0,0.6454972243679028",
        "--out", str(root / "q0_leaf_f2.csv"))
    return root


def test_q2_locus_and_leaves_figure(exports, tmp_path):
    out = tmp_path / "q2_global.png"
    rc = viz_main(["--locus", str(exports / "q2_locus.csv"),
                   "--trace", str(exports / "q2_leaf_f1.csv"),
                   "--trace", str(exports / "q2_leaf_f2.csv"),
                   "--projection", "drop_z", "--out", str(out)])
    assert rc == 0
    assert out.stat().st_size > 10_000


def test_q0_principal_net_figure(exports, tmp_path):
    out = tmp_path / "q0_net.png"
    rc = viz_main(["--trace", str(exports / "q0_leaf_f1.csv"),
                   "--trace", str(exports / "q0_leaf_f2.csv"),
                   "--umbilics", str(exports / "q0_umbilics.csv"),
                   "--out", str(out)])
    assert rc == 0
    assert out.stat().st_size > 10_000


def test_rerun_identical_bytes(exports, tmp_path):
    jobs = {
        "q2": ["--locus", str(exports / "q2_locus.csv"),
               "--trace", str(exports / "q2_leaf_f1.csv"),
               "--trace", str(exports / "q2_leaf_f2.csv"),
               "--projection", "drop_z"],
        "q0": ["--trace", str(exports / "q0_leaf_f1.csv"),
               "--trace", str(exports / "q0_leaf_f2.csv"),
               "--umbilics", str(exports / "q0_umbilics.csv")],
    }
    for name, args in jobs.items():
        a, b = tmp_path / f"{name}_a.png", tmp_path / f"{name}_b.png"
        assert viz_main(args + ["--out", str(a)]) == 0
        assert viz_main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


def test_empty_csv_empty_axes_exit0(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    out = tmp_path / "empty.png"
    assert viz_main(["--trace", str(empty), "--out", str(out)]) == 0
    assert out.exists()


def test_malformed_csv_reports_row(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("s,x,y,z,t\n0,1,2,3,4\n1,oops,2,3,4\n")
    out = tmp_path / "bad.png"
    rc = viz_main(["--trace", str(bad), "--out", str(out)])
    assert rc == 1


def test_malformed_csv_row_number_in_message(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("s,x,y,z,t\n0,1,2,3,4\n1,oops,2,3,4\n")
    rc = viz_main(["--trace", str(bad), "--out", str(tmp_path / "x.png")])
    assert rc == 1
    assert "row 3" in capsys.readouterr().err


def test_unknown_columns_rejected(tmp_path):
    weird = tmp_path / "weird.csv"
    weird.write_text("s,x,y,z,t,extra\n0,1,2,3,4,5\n")
    with pytest.raises(CsvFormatError):
        render(PlotJob(trace_csvs=[str(weird)], out=str(tmp_path / "w.png")))


def test_drop_t_projection_uses_xyz(exports, tmp_path):
    from qpc_viz.render import read_trace, _project

    pts, foliation = read_trace(str(exports / "q2_leaf_f1.csv"))
    assert foliation == 1
    job = PlotJob(projection="drop_t", out="x.png")
    p3 = _project(pts, job)
    assert p3.shape[1] == 3
    assert np.allclose(p3, pts[:, :3])


def test_chart_projection_scales(exports, tmp_path):
    from qpc_viz.render import read_locus, _project

    cid, kind, pts = read_locus(str(exports / "q2_locus.csv"))[0]
    assert kind == "P23"
    job = PlotJob(projection="chart", semiaxes_sq=(4, 3, 2, 1), out="x.png")
    p3 = _project(pts, job)
    # graph coordinates of the locus satisfy the conic (5/6)u^2+(4/5)v^2 = 1
    conic = (5 / 6) * p3[:, 0] ** 2 + (4 / 5) * p3[:, 1] ** 2
    assert np.allclose(conic, 1.0, atol=1e-9)


def test_svg_output(exports, tmp_path):
    out = tmp_path / "fig.svg"
    rc = viz_main(["--trace", str(exports / "q0_leaf_f1.csv"),
                   "--out", str(out)])
    assert rc == 0
    text = out.read_text()
    assert text.startswith("<?xml")
