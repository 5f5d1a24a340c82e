import os
import subprocess
import sys

import numpy as np
import pytest

from risjam import _kernels as kernels


@pytest.fixture(autouse=True)
def restore_backend():
    before = kernels.BACKEND
    yield
    kernels.select_backend(before)


def test_some_backend_active():
    assert kernels.BACKEND in ("cython", "numpy")
    assert kernels.coherent_sum is not None


def test_numpy_backend_always_available():
    assert "numpy" in kernels.available_backends()


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        kernels.select_backend("fortran")


def test_select_switches_function():
    kernels.select_backend("numpy")
    numpy_fn = kernels.coherent_sum
    assert kernels.BACKEND == "numpy"
    if "cython" in kernels.available_backends():
        kernels.select_backend("cython")
        assert kernels.coherent_sum is not numpy_fn


def test_mismatched_lengths_rejected():
    for name in kernels.available_backends():
        kernels.select_backend(name)
        with pytest.raises(ValueError):
            kernels.coherent_sum(np.ones(3), np.ones(2), np.ones(3))


def test_simple_values_both_backends():
    amp = np.array([1.0, 2.0])
    psi = np.array([0.0, np.pi])
    theta = np.array([0.0, 0.0])
    for name in kernels.available_backends():
        kernels.select_backend(name)
        got = kernels.coherent_sum(amp, psi, theta)
        assert got == pytest.approx(1.0 - 2.0 + 0j, abs=1e-12)


@pytest.mark.skipif("cython" not in kernels.available_backends(),
                    reason="compiled kernel not built")
def test_backend_equivalence_random():
    rng = np.random.default_rng(99)
    cy = kernels._BACKENDS["cython"].coherent_sum
    npy = kernels._BACKENDS["numpy"].coherent_sum
    for _ in range(50):
        n = int(rng.integers(1, 300))
        amp = np.ascontiguousarray(rng.uniform(0.0, 3.0, n))
        psi = np.ascontiguousarray(rng.uniform(0.0, 2 * np.pi, n))
        theta = np.ascontiguousarray(rng.choice([0.0, np.pi], n))
        a = cy(amp, psi, theta)
        b = npy(amp, psi, theta)
        scale = max(abs(a), abs(b), 1e-30)
        assert abs(a - b) / scale < 1e-12


def test_env_var_forces_numpy_backend():
    code = "import risjam; print(risjam.kernel_backend())"
    env = dict(os.environ, RISJAM_KERNEL="numpy")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
