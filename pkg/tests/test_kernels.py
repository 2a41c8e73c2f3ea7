import numpy as np
import pytest

from tracereason.engine import kernels
from tracereason.engine.kernels import NUMBA, NUMPY, get_backend

pytestmark = pytest.mark.skipif(NUMBA is None, reason="numba not installed")


def _random(seed, n=9, V=4):
    rng = np.random.default_rng(seed)
    adj = rng.random((n, n)) < 0.3
    masks = [rng.random(n) < 0.7 for _ in range(2)]
    bind = np.full((rng.integers(1, 6), V), -1, dtype=np.int32)
    bind[:, 0] = rng.integers(0, n, bind.shape[0])
    bind[:, 1] = rng.integers(0, n, bind.shape[0])
    return adj, masks, bind


@pytest.mark.parametrize("seed", range(25))
def test_backends_agree_row_for_row(seed):
    adj, (m1, m2), bind = _random(seed)
    seed_bind = bind[:, :].copy()
    seed_bind[:, 2:] = -1
    cases = [
        ("seed_pairs", (seed_bind, 2, 3, adj, m1, m2)),
        ("seed_loops", (seed_bind, 2, adj, m1)),
        ("extend", (bind, 0, 2, adj, m1)),
        ("filter_edges", (bind, 0, 1, adj)),
        ("cross", (bind, 3, m2)),
    ]
    for name, args in cases:
        a = getattr(NUMPY, name)(*args)
        b = getattr(NUMBA, name)(*args)
        assert a.dtype == b.dtype == np.int32
        np.testing.assert_array_equal(a, b, err_msg=name)


def test_env_flag(monkeypatch):
    monkeypatch.setenv("TRACEREASON_JIT", "0")
    assert not kernels.jit_enabled()
    assert get_backend().name == "numpy"
    monkeypatch.setenv("TRACEREASON_JIT", "1")
    assert get_backend().name == "numba"
    with pytest.raises(ValueError):
        get_backend("cuda")
