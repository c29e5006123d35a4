import random
from itertools import product

import numpy as np
import pytest

from ballobs.errors import UsageError
from ballobs.kernels import (HAVE_NUMBA, available_backends,
                             constrained_vectors_numpy, resolve_backend)

needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not importable")


def brute_solutions(rows, dots, norm):
    """Product-scan oracle: every x in the norm box, filtered directly."""
    rows = np.asarray(rows, dtype=np.int64)
    dots = np.asarray(dots, dtype=np.int64)
    k, u = rows.shape
    vmax = int(np.floor(np.sqrt(norm)))
    out = []
    for x in product(range(-vmax, vmax + 1), repeat=u):
        xq = sum(v * v for v in x)
        if xq > norm:
            continue
        if all(sum(a * b for a, b in zip(rows[j], x)) == dots[j] for j in range(k)):
            out.append(tuple(x) + (xq,))
    return out


def random_instance(rng):
    k = rng.randrange(1, 4)
    u = rng.randrange(1, 5)
    rows = np.array([[rng.randrange(-2, 3) for _ in range(u)] for _ in range(k)],
                    dtype=np.int64)
    # bias towards satisfiable instances: derive dots from a planted solution
    if rng.random() < 0.7:
        x = [rng.randrange(-2, 3) for _ in range(u)]
        dots = rows @ np.array(x, dtype=np.int64)
        norm = sum(v * v for v in x) + rng.randrange(0, 3)
    else:
        dots = np.array([rng.randrange(-3, 4) for _ in range(k)], dtype=np.int64)
        norm = rng.randrange(1, 10)
    return rows, np.asarray(dots, dtype=np.int64), int(norm)


class TestNumpyKernel:
    def test_matches_brute_force(self):
        rng = random.Random(11)
        for _ in range(300):
            rows, dots, norm = random_instance(rng)
            got = [tuple(int(v) for v in row)
                   for row in constrained_vectors_numpy(rows, dots, norm)]
            assert got == brute_solutions(rows, dots, norm)

    def test_lexicographic_order(self):
        rows = np.array([[1, 1, 0]], dtype=np.int64)
        out = constrained_vectors_numpy(rows, np.array([0], dtype=np.int64), 2)
        vecs = [tuple(int(v) for v in row[:-1]) for row in out]
        assert vecs == sorted(vecs)

    def test_empty_result(self):
        rows = np.array([[2, 0]], dtype=np.int64)
        out = constrained_vectors_numpy(rows, np.array([1], dtype=np.int64), 1)
        assert out.shape == (0, 3)


@needs_numba
class TestNumbaKernel:
    def test_matches_numpy_backend(self):
        numba_kernel = resolve_backend("numba")
        rng = random.Random(23)
        for _ in range(300):
            rows, dots, norm = random_instance(rng)
            a = numba_kernel(rows, dots, norm)
            b = constrained_vectors_numpy(rows, dots, norm)
            assert np.array_equal(a, b)

    def test_matches_brute_force(self):
        numba_kernel = resolve_backend("numba")
        rng = random.Random(37)
        for _ in range(100):
            rows, dots, norm = random_instance(rng)
            got = [tuple(int(v) for v in row) for row in numba_kernel(rows, dots, norm)]
            assert got == brute_solutions(rows, dots, norm)


class TestBackendSelection:
    def test_available(self):
        assert "numpy" in available_backends()

    def test_env_flag(self, monkeypatch):
        monkeypatch.setenv("BALLOBS_KERNELS", "numpy")
        assert resolve_backend(None) is constrained_vectors_numpy

    def test_unknown_rejected(self):
        with pytest.raises(UsageError):
            resolve_backend("fortran")

    def test_without_numba_falls_back(self, monkeypatch):
        import ballobs.kernels as kernels
        monkeypatch.setattr(kernels, "HAVE_NUMBA", False)
        monkeypatch.delenv("BALLOBS_KERNELS", raising=False)
        assert kernels.default_backend() == "numpy"
        assert kernels.available_backends() == ("numpy",)
        assert kernels.resolve_backend(None) is constrained_vectors_numpy
        with pytest.raises(UsageError):
            kernels.resolve_backend("numba")
