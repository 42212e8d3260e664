import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from bippr import approximate_pagerank, exact_ppr, exact_ppr_from
from bippr.cli import main

from conftest import random_connected


def run_cli(*args, env=None):
    full_env = dict(os.environ)
    full_env.pop("BIPPR_SEED", None)
    if env:
        full_env.update(env)
    return subprocess.run([sys.executable, "-m", "bippr.cli", *args],
                          capture_output=True, text=True, env=full_env)


@pytest.fixture
def k2_file(tmp_path):
    path = tmp_path / "k2.txt"
    path.write_text("a b\n")
    return str(path)


@pytest.fixture
def k3_file(tmp_path):
    path = tmp_path / "k3.txt"
    path.write_text("a b\nb c\na c\n")
    return str(path)


class TestEstimateCommand:
    def test_k2_record(self, k2_file):
        proc = run_cli("estimate", "--graph", k2_file, "--source", "a",
                       "--target", "b", "--delta", "0.01", "--seed", "3")
        assert proc.returncode == 0
        record = json.loads(proc.stdout)
        assert 0.40 <= record["estimate"] <= 0.49
        assert record["estimate"] == pytest.approx(
            record["push_term"] + record["walk_term"])
        for key in ("alpha", "delta", "eps", "p_fail", "c", "r_max", "w"):
            assert key in record["params"]
        for key in ("push_count", "degree_work", "walk_steps"):
            assert key in record["work"]
        assert record["seed"] == 3

    def test_missing_graph_file_exit_1(self):
        proc = run_cli("estimate", "--graph", "/nonexistent/g.txt",
                       "--source", "a", "--target", "b")
        assert proc.returncode == 1

    def test_unknown_target_exit_2(self, k2_file):
        proc = run_cli("estimate", "--graph", k2_file, "--source", "a",
                       "--target", "zzz")
        assert proc.returncode == 2

    def test_malformed_graph_exit_1(self, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("a b c d\n")
        proc = run_cli("estimate", "--graph", str(bad), "--source", "a",
                       "--target", "b")
        assert proc.returncode == 1

    def test_trace_push_dump(self, k2_file):
        proc = run_cli("estimate", "--graph", k2_file, "--source", "a",
                       "--target", "b", "--seed", "0", "--trace-push")
        record = json.loads(proc.stdout)
        assert set(record["push"]) == {"p", "r", "push_count", "degree_work"}

    def test_env_seed_fallback(self, k2_file):
        a = run_cli("estimate", "--graph", k2_file, "--source", "a",
                    "--target", "b", env={"BIPPR_SEED": "11"})
        b = run_cli("estimate", "--graph", k2_file, "--source", "a",
                    "--target", "b", "--seed", "11")
        assert a.stdout == b.stdout
        assert json.loads(a.stdout)["seed"] == 11


class TestExactCommand:
    def test_k3_values_sorted(self, k3_file):
        proc = run_cli("exact", "--graph", k3_file, "--source", "a",
                       "--alpha", "0.2")
        assert proc.returncode == 0
        lines = proc.stdout.strip().splitlines()
        assert lines[0] == "node,value"
        rows = [line.split(",") for line in lines[1:]]
        assert rows[0][0] == "a"
        assert float(rows[0][1]) == pytest.approx(3 / 7, abs=1e-9)
        assert float(rows[1][1]) == pytest.approx(2 / 7, abs=1e-9)
        assert float(rows[2][1]) == pytest.approx(2 / 7, abs=1e-9)

    def test_cap_exceeded_exit_3(self, k3_file):
        proc = run_cli("exact", "--graph", k3_file, "--source", "a",
                       "--cap", "2")
        assert proc.returncode == 3

    def test_isolated_source_exit_2(self, tmp_path):
        path = tmp_path / "loop.txt"
        path.write_text("a b\nc c\n")
        # self-loop node is walkable; use a fresh isolated check via bad label
        proc = run_cli("exact", "--graph", str(path), "--source", "missing")
        assert proc.returncode == 2

    def test_mstp_dump(self, k2_file):
        proc = run_cli("exact", "--graph", k2_file, "--source", "a",
                       "--ell", "2")
        lines = proc.stdout.strip().splitlines()
        assert lines[1] == "a,1.0"


class TestBenchCommand:
    def test_summary_violation_rate(self, k3_file):
        proc = run_cli("bench", "--graph", k3_file, "--source", "a",
                       "--target", "b", "--trials", "20", "--seed", "1",
                       "--delta", "0.01")
        assert proc.returncode == 0
        lines = proc.stdout.strip().splitlines()
        header = lines[0].split(",")
        summaries = [dict(zip(header, line.split(",")))
                     for line in lines[1:] if line.startswith("summary")]
        by_name = {s["estimator"]: s for s in summaries}
        assert set(by_name) == {"bippr", "mc", "push"}
        assert float(by_name["bippr"]["violation_rate"]) <= 0.01 + 0.05
        # the mc-vs-bippr work gap is reported in the rel_error/ratio slot
        assert float(by_name["mc"]["rel_error"]) > 1.0

    def test_trial_rows_echo_truth(self, k2_file):
        proc = run_cli("bench", "--graph", k2_file, "--source", "a",
                       "--target", "b", "--trials", "2", "--seed", "0",
                       "--estimator", "bippr", "--delta", "0.01")
        lines = [l for l in proc.stdout.strip().splitlines()
                 if l.startswith("trial")]
        assert len(lines) == 2
        true_value = float(lines[0].split(",")[5])
        assert true_value == pytest.approx(4 / 9, abs=1e-9)


class TestPushOnlyErrorBound:
    def test_bound_from_global_pagerank(self):
        # |p_s[t] - pi_s[t]| <= r_max * d_t * n * pi_unif[t] on fixtures
        for seed in (0, 1):
            g = random_connected(30, "er", seed=seed)
            alpha, r_max = 0.2, 0.01
            res = approximate_pagerank(g, alpha, 0, r_max)
            pi_s = exact_ppr(g, alpha, 0, tol=1e-13)
            pi_unif = exact_ppr_from(g, alpha, np.full(g.n, 1 / g.n), tol=1e-13)
            for t in range(g.n):
                err = abs(res.p.get(t, 0.0) - pi_s[t])
                assert err <= r_max * g.degree(t) * g.n * pi_unif[t] + 1e-12


class TestDiffusionCommand:
    def test_heat_kernel_k2(self, k2_file):
        proc = run_cli("diffusion", "--graph", k2_file, "--source", "a",
                       "--target", "b", "--family", "heat-kernel",
                       "--gamma", "1", "--trunc-tol", "1e-6", "--seed", "0")
        assert proc.returncode == 0
        record = json.loads(proc.stdout)
        assert abs(record["value"] - math.sinh(1) / math.e) < 0.01
        assert record["trunc_bound"] <= 1e-6
        assert len(record["per_level"]) == record["ell_max"] + 1

    def test_pagerank_family(self, k2_file):
        proc = run_cli("diffusion", "--graph", k2_file, "--source", "a",
                       "--target", "b", "--family", "pagerank",
                       "--alpha", "0.2", "--trunc-tol", "1e-6", "--seed", "0")
        record = json.loads(proc.stdout)
        assert abs(record["value"] - 4 / 9) < 0.01

    def test_unknown_family_exit_2(self, k2_file):
        proc = run_cli("diffusion", "--graph", k2_file, "--source", "a",
                       "--target", "b", "--family", "uniform")
        assert proc.returncode == 2


class TestValidateCommand:
    def test_valid_graph(self, k3_file):
        proc = run_cli("validate", "--graph", k3_file)
        assert proc.returncode == 0
        record = json.loads(proc.stdout)
        assert record["nodes"] == 3
        assert record["edges"] == 3
        assert record["symmetric"] is True


class TestDeterminism:
    def test_repeated_runs_byte_identical(self, k3_file):
        commands = [
            ["estimate", "--graph", k3_file, "--source", "a", "--target", "b",
             "--seed", "5", "--threads", "1"],
            ["exact", "--graph", k3_file, "--source", "a", "--threads", "1"],
            ["bench", "--graph", k3_file, "--source", "a", "--target", "c",
             "--trials", "3", "--seed", "5", "--threads", "1"],
            ["diffusion", "--graph", k3_file, "--source", "a", "--target", "b",
             "--family", "pagerank", "--seed", "5", "--threads", "1"],
            ["validate", "--graph", k3_file, "--threads", "1"],
        ]
        for cmd in commands:
            a = run_cli(*cmd)
            b = run_cli(*cmd)
            assert a.returncode == 0, a.stderr
            assert a.stdout == b.stdout


class TestInProcessEntryPoint:
    def test_main_returns_exit_code(self, k2_file, capsys):
        assert main(["validate", "--graph", k2_file]) == 0
        capsys.readouterr()
        assert main(["estimate", "--graph", k2_file, "--source", "a",
                     "--target", "nope"]) == 2
