import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hqmap import kernel
from hqmap.syscode import OP_ID

BACKENDS = ["python"] + (["cython"] if kernel.BACKEND == "cython" else [])


def _grid(W, H, n):
    pos = np.arange(n, dtype=np.int64)
    occ = np.full(W * H, -1, dtype=np.int64)
    occ[:n] = np.arange(n)
    return pos, occ, np.zeros(W * H, dtype=np.int64), np.zeros(W * H, dtype=np.int64)


def _run(backend, ops, W, H, n):
    pos, occ, free, cyc = _grid(W, H, n)
    stats = np.zeros(2, dtype=np.int64)
    blk = kernel.schedule(ops, 0, len(ops), pos, occ, free, cyc, W, H, 30, 1, stats, module="m", backend=backend)
    return blk, pos, occ, free, cyc, stats


@pytest.mark.parametrize("backend", BACKENDS)
def test_distance_three_two_swaps(backend):
    ops = kernel.OpArrays.from_lists([2], [0], [3], [OP_ID["CNOT"]], [10], [0])
    blk, pos, occ, *_ , stats = _run(backend, ops, 4, 1, 4)
    recs = list(blk.records())
    assert [r[2] for r in recs] == ["SWAP", "SWAP", "CNOT"]
    assert recs[-1][:5] == (60, 10, "CNOT", 2, 0)
    assert list(occ) == [1, 2, 0, 3]  # occupants shifted back by one
    assert tuple(stats) == (70, 3)


@pytest.mark.parametrize("backend", BACKENDS)
def test_max_rule(backend):
    ops = kernel.OpArrays.from_lists([1, 2], [1, 0], [0, 1], [OP_ID["T"], OP_ID["CNOT"]], [5, 10], [0, 1])
    blk, pos, occ, free, cyc, stats = _run(backend, ops, 2, 1, 2)
    assert list(blk.records())[1][:2] == (5, 10)
    assert list(free) == [15, 15] and list(cyc) == [2, 2]


def _random_ops(seed, n_q, n_ops):
    rng = np.random.default_rng(seed)
    kind = rng.integers(1, 3, n_ops)
    qa = rng.integers(0, n_q, n_ops)
    qb = (qa + rng.integers(1, n_q, n_ops)) % n_q
    code = np.where(kind == 1, OP_ID["H"], OP_ID["CNOT"])
    dur = np.where(kind == 1, 1, 10)
    return kernel.OpArrays.from_lists(kind, qa, qb, code, dur, np.arange(n_ops))


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled kernel not built")
@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6), n_q=st.integers(2, 30), n_ops=st.integers(0, 400))
def test_backends_agree(seed, n_q, n_ops):
    W = int(np.ceil(np.sqrt(n_q)))
    H = -(-n_q // W)
    ops = _random_ops(seed, n_q, n_ops)
    a = _run("python", ops, W, H, n_q)
    b = _run("cython", ops, W, H, n_q)
    assert list(a[0].records()) == list(b[0].records())
    for x, y in zip(a[1:], b[1:]):
        assert np.array_equal(x, y)


def test_chunking_preserves_output(monkeypatch):
    ops = _random_ops(3, 9, 3000)
    ref = list(_run(None, ops, 3, 3, 9)[0].records())
    monkeypatch.setattr(kernel, "_CHUNK", 64)
    assert list(_run(None, ops, 3, 3, 9)[0].records()) == ref
