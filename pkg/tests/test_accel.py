import json
import os
import subprocess
import sys

import numpy as np
import pytest

from clustermaps import _accel
from clustermaps.quiver import build_period1, primitive


def test_backend_name():
    assert _accel.backend() in ("numba", "numpy")
    assert set(_accel.numpy_impl) == set(_accel.kernel_impl)


@pytest.mark.parametrize("seed", range(5))
def test_mutate_agrees(seed):
    rng = np.random.default_rng(seed)
    half = list(rng.integers(-3, 4, 3))
    b = np.ascontiguousarray(build_period1(half + [int(rng.integers(-3, 4))] + half[::-1]).b)
    for k in range(b.shape[0]):
        assert np.array_equal(_accel.numpy_impl["mutate"](b, k), _accel.kernel_impl["mutate"](b, k))


def test_periodic_chain_agrees():
    for n in range(2, 9):
        b = np.ascontiguousarray(primitive(n, 1).b)
        assert _accel.numpy_impl["periodic_chain"](b, 4) == _accel.kernel_impl["periodic_chain"](b, 4) == 1


def test_tropical_agrees():
    tup = np.array([1, -2, -2, 1])
    pos = np.maximum(tup, 0).astype(np.int64)
    neg = np.maximum(-tup, 0).astype(np.int64)
    seed = np.array([-1, 0, 0, 0, 0], dtype=np.int64)
    a = _accel.numpy_impl["tropical"](pos, neg, seed, 60)
    b = _accel.kernel_impl["tropical"](pos, neg, seed, 60)
    assert np.array_equal(a[0], b[0]) and a[1] == b[1]


@pytest.mark.parametrize("width", [1 << 10, 1 << 24])
def test_sparse_mul_agrees(width):
    rng = np.random.default_rng(width)
    ka, kb = (np.sort(rng.choice(width, 200, replace=False)).astype(np.int64) for _ in range(2))
    ca, cb = (rng.integers(-9, 10, 200).astype(np.int64) for _ in range(2))
    ref = _accel.numpy_impl["sparse_mul"](ka, ca, kb, cb, np.int64(0))
    got = _accel.kernel_impl["sparse_mul"](ka, ca, kb, cb, np.int64(0))
    assert all(np.array_equal(x, y) for x, y in zip(ref, got))


_SCRIPT = """
import json
from clustermaps import _accel, iterate, tropical_degrees
from clustermaps.fixtures import spec
from clustermaps.dynamics import iterate_symbolic
sym = iterate_symbolic(spec("s4"), 12)
print(json.dumps({
    "backend": _accel.backend(),
    "orbit": [str(v) for v in iterate(spec("s5"), [1] * 5, 30).values],
    "trop": [int(v) for v in tropical_degrees(spec("s4"), 40).values],
    "sym": [str(v) for v in sym.values],
}))
"""


def _run(disable):
    env = dict(os.environ)
    env["CLUSTERMAPS_DISABLE_NUMBA"] = "1" if disable else "0"
    out = subprocess.run([sys.executable, "-c", _SCRIPT], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def test_backends_agree_end_to_end():
    fallback = _run(True)
    active = _run(False)
    assert fallback["backend"] == "numpy"
    assert {k: v for k, v in fallback.items() if k != "backend"} == {
        k: v for k, v in active.items() if k != "backend"
    }
