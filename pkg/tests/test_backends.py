"""The two program backends must agree bit for bit."""

import numpy as np
import pytest

import fgfp.backends as backends
from fgfp import EvaluationError, eval_map_batch, parse_map

EXPRESSIONS = [
    "(a1 - b1)/3",
    "(4*a1 - 3*b1)/17",
    "a1/4 + 1",
    "-b1/3",
    "min(a1, b1) + max(a1, -b1, 0.5)",
    "abs(a1*b1 - a1/(b1 + 100))",
    "2*a1 - -3*b1",
    "0.1",
]


@pytest.fixture
def restore_backend():
    original = backends.active_backend()
    yield
    backends.set_backend(original)


needs_numba = pytest.mark.skipif(not backends.HAS_NUMBA, reason="numba not installed")


@needs_numba
@pytest.mark.parametrize("text", EXPRESSIONS)
def test_backends_bitwise_identical(text, restore_backend):
    m = parse_map(text, 1, 1, 1)
    rng = np.random.default_rng(123)
    A = rng.uniform(-50, 50, (512, 1))
    B = rng.uniform(-50, 50, (512, 1))
    backends.set_backend("numpy")
    ref = eval_map_batch(m, A, B)
    backends.set_backend("numba")
    jit = eval_map_batch(m, A, B)
    assert np.array_equal(ref, jit)
    assert ref.dtype == jit.dtype == np.float64


@needs_numba
def test_backends_agree_on_failure(restore_backend):
    m = parse_map("a1/b1", 1, 1, 1)
    A = np.array([[1.0]])
    B = np.array([[0.0]])
    backends.set_backend("numpy")
    with pytest.raises(EvaluationError):
        eval_map_batch(m, A, B)
    backends.set_backend("numba")
    with pytest.raises(EvaluationError):
        eval_map_batch(m, A, B)


def test_set_backend_rejects_unknown_name():
    with pytest.raises(ValueError):
        backends.set_backend("cuda")


def test_env_flag_selects_backend(monkeypatch):
    monkeypatch.setenv("FGFP_BACKEND", "numpy")
    assert backends._resolve_initial_backend() == "numpy"
    monkeypatch.setenv("FGFP_BACKEND", "auto")
    assert backends._resolve_initial_backend() == "auto"
    monkeypatch.setenv("FGFP_BACKEND", "hexagon")
    with pytest.raises(ValueError):
        backends._resolve_initial_backend()


@needs_numba
def test_auto_mode_jits_only_large_batches(restore_backend, monkeypatch):
    calls = []
    real = backends._kernel_for

    def spy(source):
        calls.append(source)
        return real(source)

    monkeypatch.setattr(backends, "_kernel_for", spy)
    backends.set_backend("auto")
    m = parse_map("a1 + b1", 1, 1, 1)
    small = np.zeros((8, 1))
    eval_map_batch(m, small, small)
    assert calls == []
    big = np.zeros((backends.JIT_MIN_ROWS, 1))
    eval_map_batch(m, big, big)
    assert len(calls) == 1


def test_numpy_backend_copies_bare_variable_output(restore_backend):
    backends.set_backend("numpy")
    m = parse_map("a1", 1, 1, 1)
    A = np.array([[1.0], [2.0]])
    B = np.array([[0.0], [0.0]])
    out = eval_map_batch(m, A, B)
    A[0, 0] = 99.0
    assert out[0, 0] == 1.0
