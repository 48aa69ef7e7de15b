import os
import subprocess
import sys
from pathlib import Path

import actsynth.sat as sat

BENCH = Path(__file__).resolve().parent.parent / "benchmarks" / "bench_sat.py"


def test_backend_selected_at_import():
    assert sat.BACKEND in ("cython", "python")
    assert sat.Solver.backend == sat.BACKEND


def test_pure_python_switch():
    env = dict(os.environ, ACTSYNTH_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import actsynth.sat as s; print(s.BACKEND)"],
                         capture_output=True, text=True, env=env)
    assert out.stdout.strip() == "python"


def test_benchmark_runs():
    if sat.CSolver is None:
        return
    out = subprocess.run([sys.executable, str(BENCH), "--vars", "30", "--instances", "2", "--steps", "40"],
                         capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    assert "speedup" in out.stdout
