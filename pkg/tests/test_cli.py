import json
import shlex
import subprocess

import pytest

from localspec.cli import main
from localspec.generators import barbell_graph, ring_of_cliques
from localspec.io import PROFILE_HEADER, read_profile_csv, write_edge_list


@pytest.fixture
def barbell_file(tmp_path):
    p = tmp_path / "barbell.txt"
    p.write_text(write_edge_list(barbell_graph()))
    return str(p)


@pytest.fixture
def ring_file(tmp_path):
    p = tmp_path / "ring.txt"
    p.write_text(write_edge_list(ring_of_cliques(4, 5)))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    doc = json.loads(out)
    assert doc["schema"] == 1
    assert doc["manifest"]["command"] == argv[0]
    assert doc["manifest"]["argv"] == list(argv)
    return doc


class TestCommands:
    def test_global(self, capsys, barbell_file):
        doc = run_json(capsys, "global", "--graph", barbell_file)
        assert doc["cut"]["conductance"] == pytest.approx(2 / 7)
        assert sorted(doc["cut"]["members"]) in (["0", "1", "2"], ["3", "4", "5"])

    def test_solve_kappa_and_gamma(self, capsys, barbell_file):
        doc = run_json(capsys, "solve", "--graph", barbell_file, "--seed", "node:0", "--kappa", "0.5")
        sol = doc["solution"]
        assert sol["kappa_achieved"] == pytest.approx(0.5, abs=1e-9)
        assert len(sol["x"]) == 6 and sol["labels"] == [str(i) for i in range(6)]
        g = sol["gamma"]
        doc = run_json(capsys, "solve", "--graph", barbell_file, "--seed", "node:0", "--gamma", repr(g))
        assert doc["solution"]["kappa_achieved"] == pytest.approx(0.5, abs=1e-8)

    def test_inactive_note(self, capsys, barbell_file):
        doc = run_json(capsys, "solve", "--graph", barbell_file, "--seed", "set:0,1,2", "--kappa", "0.0")
        assert doc["solution"]["note"] == "constraint inactive"

    def test_localcut(self, capsys, barbell_file):
        doc = run_json(capsys, "localcut", "--graph", barbell_file, "--seed", "node:0", "--gamma", "-0.5")
        assert sorted(doc["cut"]["members"]) == ["0", "1", "2"] and doc["volume_cap"] is None
        doc = run_json(capsys, "localcut", "--graph", barbell_file, "--seed", "node:0", "--gamma", "-0.5", "--size-factor", "2")
        assert doc["volume_cap"] == pytest.approx(2 * doc["solution"]["k_gamma"])

    def test_improve(self, capsys, barbell_file):
        doc = run_json(capsys, "improve", "--graph", barbell_file, "--seed", "set:0,1,2", "--target-set", "0,1,2", "--kappa", "0.5")
        assert doc["bound"] <= doc["target"]["conductance"] + 1e-9

    def test_certify(self, capsys, barbell_file):
        doc = run_json(capsys, "certify", "--graph", barbell_file, "--seed", "node:0", "--kappa", "0.3")
        assert doc["certificate"]["feasible"]
        assert doc["duality_gap"] < 1e-6

    def test_ball(self, capsys, barbell_file):
        doc = run_json(capsys, "ball", "--graph", barbell_file, "--seed", "node:0")
        assert [b["radius"] for b in doc["balls"]] == [1, 2]
        assert doc["balls"][0]["conductance"] == pytest.approx(2 / 7)

    def test_out_file(self, capsys, barbell_file, tmp_path):
        out = tmp_path / "r.json"
        code, stdout, _ = run(capsys, "global", "--graph", barbell_file, "--out", str(out))
        assert code == 0 and stdout == ""
        assert json.loads(out.read_text())["schema"] == 1


class TestProfile:
    def test_csv_and_manifest(self, capsys, ring_file, tmp_path):
        out = tmp_path / "p.csv"
        argv = ["profile", "--graph", ring_file, "--seed", "node:0", "--gamma-start", "-1",
                "--gamma-stop", "0", "--gamma-step", "0.25", "--out", str(out)]
        assert run(capsys, *argv)[0] == 0
        text = out.read_text()
        assert text.splitlines()[0] == "gamma,c,volume,conductance,lower_bound_lambda,k_gamma,status"
        assert tuple(text.splitlines()[0].split(",")) == PROFILE_HEADER
        rows = read_profile_csv(text)
        assert [float(r["gamma"]) for r in rows] == [-1, -0.75, -0.5, -0.25, 0]
        manifest = json.loads((tmp_path / "p.csv.manifest.json").read_text())
        assert manifest["schema"] == 1 and manifest["points"] == 5

        # Re-running the recorded command reproduces the artifact byte for byte.
        recorded = shlex.split(shlex.join(["localspec", *manifest["manifest"]["argv"]]))[1:]
        out.unlink()
        assert main(recorded) == 0
        assert out.read_text() == text

    def test_stdout(self, capsys, ring_file):
        code, out, _ = run(capsys, "profile", "--graph", ring_file, "--seed", "node:0", "--gamma-start", "-1",
                           "--gamma-stop", "-0.5", "--gamma-step", "0.5", "--threads", "2")
        assert code == 0 and len(out.splitlines()) == 3

    def test_threads_env(self, capsys, ring_file, monkeypatch):
        monkeypatch.setenv("LOCALSPEC_THREADS", "zero")
        code, _, err = run(capsys, "profile", "--graph", ring_file, "--seed", "node:0", "--gamma-start", "-1",
                           "--gamma-stop", "-0.5", "--gamma-step", "0.5")
        assert code == 2 and "LOCALSPEC_THREADS" in err


def test_json_reproducible(capsys, barbell_file):
    argv = ["solve", "--graph", barbell_file, "--seed", "node:1", "--kappa", "0.4"]
    first = run(capsys, *argv)[1]
    doc = json.loads(first)
    assert run(capsys, *doc["manifest"]["argv"])[1] == first


class TestExitCodes:
    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["bogus"],
            ["solve", "--seed", "node:0", "--kappa", "0.5"],
            ["solve", "--graph", "G", "--seed", "node:0"],
            ["solve", "--graph", "G", "--seed", "node:0", "--kappa", "0.5", "--gamma", "-1"],
            ["solve", "--graph", "G", "--seed", "node:0", "--kappa", "half"],
        ],
    )
    def test_usage(self, capsys, argv):
        code, _, err = run(capsys, *argv)
        assert code == 1 and "usage error" in err

    def test_ball_needs_node(self, capsys, barbell_file):
        assert run(capsys, "ball", "--graph", barbell_file, "--seed", "set:0,1")[0] == 1

    @pytest.mark.parametrize(
        "extra",
        [
            ["global"],
            ["solve", "--seed", "node:99", "--kappa", "0.5"],
            ["solve", "--seed", "node:0", "--kappa", "1.5"],
            ["solve", "--seed", "bogus", "--kappa", "0.5"],
            ["localcut", "--seed", "node:0", "--gamma", "0.5"],
        ],
    )
    def test_data(self, capsys, barbell_file, extra):
        argv = [extra[0], "--graph", barbell_file if extra != ["global"] else "/nonexistent/graph.txt", *extra[1:]]
        code, _, err = run(capsys, *argv)
        assert code == 2, err
        assert "data error" in err

    def test_bad_file_contents(self, capsys, tmp_path):
        p = tmp_path / "bad.net"
        p.write_text("*Vertices 2\n*Arcs\n1 2\n")
        code, _, err = run(capsys, "global", "--graph", str(p))
        assert code == 2 and "directed" in err

    def test_numerical(self, capsys, tmp_path, monkeypatch):
        import localspec.cli as cli
        from localspec.errors import SolverError

        def boom(*a, **k):
            raise SolverError("bracket [-1, 0] did not converge")

        monkeypatch.setattr(cli, "solve_localspectral", boom)
        p = tmp_path / "g.txt"
        p.write_text(write_edge_list(barbell_graph()))
        code, _, err = run(capsys, "solve", "--graph", str(p), "--seed", "node:0", "--kappa", "0.5")
        assert code == 3 and "numerical failure" in err


def test_console_script(barbell_file):
    out = subprocess.run(["localspec", "global", "--graph", barbell_file], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["schema"] == 1
    out = subprocess.run(["localspec", "solve", "--graph", barbell_file], capture_output=True, text=True)
    assert out.returncode == 1
