import importlib
import os
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from symtorsion import _kernels
from symtorsion._kernels import _pykernels

ints = st.integers(-50, 50)


def grids(max_rows=6, max_cols=6):
    return st.integers(0, max_rows).flatmap(
        lambda r: st.integers(0, max_cols).flatmap(
            lambda c: st.lists(st.lists(ints, min_size=c, max_size=c), min_size=r, max_size=r).map(lambda g: (g, c))
        )
    )


try:
    _c = importlib.import_module("symtorsion._kernels._ckernels")
except ImportError:  # extension not built
    _c = None

needs_c = pytest.mark.skipif(_c is None, reason="compiled kernels not built")


def test_backend_is_reported():
    assert _kernels.BACKEND in ("c", "python")


def test_env_var_forces_fallback():
    env = dict(os.environ, SYMTORSION_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import symtorsion; print(symtorsion.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_python_gauss_jordan_small():
    rows, piv = _pykernels.gauss_jordan([[2, 4], [1, 2]], 2)
    assert piv == [0]
    assert rows[1] == [0, 0]


def test_python_det_small():
    assert _pykernels.bareiss_det([]) == 1
    assert _pykernels.bareiss_det([[0, 1], [1, 0]]) == -1
    assert _pykernels.bareiss_det([[2, 0, 0], [0, 3, 0], [0, 0, 4]]) == 24


@needs_c
@given(grids())
def test_gauss_jordan_parity(grid):
    g, c = grid
    assert _c.gauss_jordan([r[:] for r in g], c) == _pykernels.gauss_jordan([r[:] for r in g], c)


@needs_c
@given(st.integers(0, 6).flatmap(lambda n: st.lists(st.lists(ints, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_parity(g):
    assert _c.bareiss_det([r[:] for r in g]) == _pykernels.bareiss_det([r[:] for r in g])


@needs_c
@given(grids(), st.integers(0, 5), st.data())
def test_matmul_parity(grid, k, data):
    a, inner = grid
    bcols = data.draw(st.lists(st.lists(ints, min_size=inner, max_size=inner), min_size=k, max_size=k))
    assert _c.matmul(a, bcols) == _pykernels.matmul(a, bcols)


@needs_c
def test_big_integers_survive():
    big = 10**40
    g = [[big, 1], [1, big]]
    assert _c.bareiss_det([r[:] for r in g]) == big * big - 1
