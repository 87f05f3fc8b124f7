import importlib.util
import os
import subprocess
import sys


def backend_name(force_python):
    env = {k: v for k, v in os.environ.items() if k != "NSDIV_PURE_PYTHON"}
    if force_python:
        env["NSDIV_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", "import nsdiv.kernels as k; print(k.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True)
    return out.stdout.strip()


def test_force_pure_python():
    assert backend_name(force_python=True) == "python"


def test_default_prefers_compiled():
    built = importlib.util.find_spec("nsdiv._kernels_c") is not None
    assert backend_name(force_python=False) == ("cython" if built else "python")
