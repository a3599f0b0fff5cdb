"""Drives the command line tool through a small pipeline."""

import os
import subprocess

import pytest

CLI = os.environ.get("LAGNET_CLI", "")

pytestmark = pytest.mark.skipif(not CLI, reason="LAGNET_CLI not set")


def run(*args, cwd):
    result = subprocess.run([CLI, *args], cwd=cwd, capture_output=True, text=True)
    assert result.returncode == 0, result.stderr
    return result


def test_cli_pipeline(tmp_path):
    run("gen-graph", "--graph", "er", "--nodes", "12", "--p", "0.5",
        "--graph-seed", "4", "--out", "net.txt", cwd=tmp_path)
    assert (tmp_path / "net.txt").read_text().strip()

    run("simulate", "--graph", "file", "--edges-file", "net.txt", "--rho", "0.8",
        "--beta", "1", "-n", "5000", "--seed", "2", "--extra-tail", "3",
        "--out", "traj.csv", cwd=tmp_path)
    header = (tmp_path / "traj.csv").read_text().splitlines()[0]
    assert header.startswith("t,y0,y1")

    run("moments", "--input", "traj.csv", "--min-lag", "-1", "--max-lag", "3",
        "--out-dir", "mom", cwd=tmp_path)
    assert (tmp_path / "mom" / "R_-1.csv").exists()
    assert (tmp_path / "mom" / "R_3.csv").exists()

    run("estimate", "--input", "traj.csv", "--kind", "granger", "--out", "granger.csv",
        cwd=tmp_path)
    rows = (tmp_path / "granger.csv").read_text().strip().splitlines()
    assert len(rows) == 12

    result = run("feasibility", "--graph", "file", "--edges-file", "net.txt",
                 "--rho", "0.8", "--beta", "1", cwd=tmp_path)
    assert "feasible=true" in result.stdout

    run("features", "--input", "traj.csv", "--min-lag", "-3", "--max-lag", "3",
        "--kind", "k", "--label-edges", "net.txt", "--label-rho", "0.8",
        "--scale", "--out", "features.csv", cwd=tmp_path)
    head = (tmp_path / "features.csv").read_text().splitlines()
    assert head[0].startswith("pair_i,pair_j,label,k_0")
    assert len(head) == 1 + 12 * 11

    (tmp_path / "sweep.json").write_text(
        """
        {
          "axis": "beta",
          "axis_values": [0, 10],
          "output_path": "report.csv",
          "frozen": {
            "n_nodes": 8, "observed_count": 6, "connection_p": 0.5,
            "seeds_per_cell": 2, "estimators": ["nig_gmm"],
            "analytic_moments": true, "master_seed": 3
          }
        }
        """
    )
    run("sweep", "--config", "sweep.json", cwd=tmp_path)
    assert (tmp_path / "report.csv").exists()
    assert (tmp_path / "report.meta.json").exists()

    run("plot", "--input", "report.csv", "--out", "report.svg",
        "--axis-label", "beta", cwd=tmp_path)
    assert "<svg" in (tmp_path / "report.svg").read_text()
