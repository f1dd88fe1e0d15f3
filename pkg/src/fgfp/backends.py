"""Batch execution of compiled map programs.

Two interchangeable backends evaluate the same programs:

* ``numpy`` - a vectorised postfix interpreter pushing (n,) arrays;
* ``numba`` - a fused scalar loop generated from the expression and
  jitted per program (compiled once per process, then 2-12x faster than
  the numpy path on large batches).

Both apply the identical IEEE operations in the identical order, so their
outputs are bit-for-bit equal.  The mode comes from the environment
variable ``FGFP_BACKEND`` (``numba``, ``numpy`` or ``auto``) or from
``set_backend()``.  ``auto`` (the default) picks numpy below
``JIT_MIN_ROWS`` samples, where JIT warm-up costs more than it saves, and
numba above.  ``benchmarks/bench_backends.py`` compares the two.
"""

from __future__ import annotations

import os
import warnings

import numpy as np

# Opcodes for the postfix programs.
OP_CONST = 0
OP_LOAD_A = 1
OP_LOAD_B = 2
OP_ADD = 3
OP_SUB = 4
OP_MUL = 5
OP_DIV = 6
OP_NEG = 7
OP_ABS = 8
OP_MIN = 9
OP_MAX = 10

# In auto mode, batches smaller than this run on the numpy path: the
# one-time ~0.3 s kernel compile only pays off on big or repeated batches.
JIT_MIN_ROWS = 100_000

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - environment without numba
    HAS_NUMBA = False


def _resolve_initial_backend() -> str:
    env = os.environ.get("FGFP_BACKEND", "auto").strip().lower() or "auto"
    if env == "auto":
        return "auto"
    if env == "numpy":
        return "numpy"
    if env == "numba":
        if HAS_NUMBA:
            return "numba"
        warnings.warn("FGFP_BACKEND=numba requested but numba is unavailable; using numpy")
        return "numpy"
    raise ValueError(f"unknown FGFP_BACKEND value {env!r} (use 'numba', 'numpy' or 'auto')")


_BACKEND = _resolve_initial_backend()


def active_backend() -> str:
    return _BACKEND


def set_backend(name: str) -> None:
    global _BACKEND
    name = name.strip().lower()
    if name not in ("auto", "numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAS_NUMBA:
        raise ValueError("numba backend requested but numba is not importable")
    _BACKEND = name


def _run_numpy(codes: np.ndarray, args: np.ndarray, consts: np.ndarray,
               A: np.ndarray, B: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    stack: list[np.ndarray] = []
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for pc in range(codes.shape[0]):
            op = codes[pc]
            k = args[pc]
            if op == OP_CONST:
                stack.append(np.full(n, consts[k]))
            elif op == OP_LOAD_A:
                stack.append(A[:, k])
            elif op == OP_LOAD_B:
                stack.append(B[:, k])
            elif op == OP_ADD:
                r = stack.pop()
                stack[-1] = stack[-1] + r
            elif op == OP_SUB:
                r = stack.pop()
                stack[-1] = stack[-1] - r
            elif op == OP_MUL:
                r = stack.pop()
                stack[-1] = stack[-1] * r
            elif op == OP_DIV:
                r = stack.pop()
                stack[-1] = stack[-1] / r
            elif op == OP_NEG:
                stack[-1] = -stack[-1]
            elif op == OP_ABS:
                stack[-1] = np.abs(stack[-1])
            elif op == OP_MIN:
                r = stack.pop()
                stack[-1] = np.minimum(stack[-1], r)
            elif op == OP_MAX:
                r = stack.pop()
                stack[-1] = np.maximum(stack[-1], r)
    out = stack[-1]
    if not out.flags.owndata:  # bare variable expression: detach the view
        out = out.copy()
    return out


if HAS_NUMBA:

    # match np.minimum / np.maximum: NaN from either side propagates
    @njit(inline="always")
    def _nmin(a, b):  # pragma: no cover - jitted
        if a != a:
            return a
        if b != b:
            return b
        return b if b < a else a

    @njit(inline="always")
    def _nmax(a, b):  # pragma: no cover - jitted
        if a != a:
            return a
        if b != b:
            return b
        return b if b > a else a

    _KERNELS: dict[str, object] = {}

    def _kernel_for(source: str):
        """Jit the generated per-sample loop for one program (cached)."""
        kernel = _KERNELS.get(source)
        if kernel is None:
            namespace = {"_nmin": _nmin, "_nmax": _nmax}
            exec(source, namespace)
            # error_model="numpy": x/0 yields inf/nan like the numpy path;
            # the caller turns non-finite outputs into EvaluationError.
            kernel = njit(error_model="numpy")(namespace["_kernel"])
            _KERNELS[source] = kernel
        return kernel


def run_program(program, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Evaluate one compiled program over sample batches A (n,da), B (n,db)."""
    use_numba = HAS_NUMBA and (
        _BACKEND == "numba"
        or (_BACKEND == "auto" and A.shape[0] >= JIT_MIN_ROWS))
    if use_numba:
        out = np.empty(A.shape[0], dtype=np.float64)
        _kernel_for(program.source)(A, B, out)
        return out
    return _run_numpy(program.codes, program.args, program.consts, A, B)
