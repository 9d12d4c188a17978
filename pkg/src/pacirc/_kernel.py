"""Circuit-growth kernels for the Monte Carlo harness.

The compiled kernel and the pure-Python twin implement the identical
gap-table growth with the identical SplitMix64 draw stream, so equal
per-replicate states grow bit-identical circuits. The Python twin is the
reference the compiled path is tested against (and the fallback when no
JIT is available).
"""

from __future__ import annotations

import numpy as np

from .rng import RandomSource

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):  # type: ignore[misc]
        def wrap(fn):
            return fn

        return wrap


_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MULT1 = np.uint64(0xBF58476D1CE4E5B9)
_MULT2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_U1 = np.uint64(1)
_U64 = np.uint64(64)


@njit(cache=True, nogil=True)
def _grow_chunk_numba(m, n, states, deg_nodes, out_vals, out_steps):  # pragma: no cover - exercised via tests against the Python twin
    tau = (m + 1) * n + 1
    # top-bits rejection shift per gap-table size
    shifts = np.empty(tau + 1, np.uint64)
    for t in range(2, tau + 1):
        v = t - 1
        bits = np.uint64(0)
        while v > 0:
            v >>= 1
            bits += _U1
        shifts[t] = _U64 - bits
    gaps = np.empty(tau, np.int64)
    outdeg = np.empty(n + 1, np.int64)
    n_deg = deg_nodes.shape[0]

    for r in range(states.shape[0]):
        s = states[r]
        outdeg[:] = 0
        gaps[0] = 0
        white = 1
        blue = 0
        max_dw = 0
        max_db = 0
        t = 1
        for k in range(1, n + 1):
            w_before = white
            b_before = blue
            for _ in range(m):
                if t == 1:
                    idx = 0
                else:
                    bound = np.uint64(t)
                    shift = shifts[t]
                    while True:
                        s = s + _GAMMA
                        z = s
                        z = (z ^ (z >> _S30)) * _MULT1
                        z = (z ^ (z >> _S27)) * _MULT2
                        z = z ^ (z >> _S31)
                        x = z >> shift
                        if x < bound:
                            idx = np.int64(x)
                            break
                owner = gaps[idx]
                od = outdeg[owner]
                if od == 0:
                    white -= 1
                    blue += 2
                elif od == 1:
                    blue -= 2
                outdeg[owner] = od + 1
                gaps[t] = owner
                t += 1
            gaps[t] = k
            t += 1
            white += 1
            dw = white - w_before
            if dw < 0:
                dw = -dw
            db = blue - b_before
            if db < 0:
                db = -db
            if dw > max_dw:
                max_dw = dw
            if db > max_db:
                max_db = db
        out_vals[r, 0] = white
        out_vals[r, 1] = blue // 2
        for i in range(n_deg):
            node = deg_nodes[i]
            out_vals[r, 2 + i] = outdeg[node] + (m if node > 0 else 0)
        out_steps[r, 0] = max_dw
        out_steps[r, 1] = max_db


def _grow_chunk_python(m, n, states, deg_nodes, out_vals, out_steps):
    """Reference implementation of the kernel contract, one RandomSource per replicate."""
    for r in range(states.shape[0]):
        rng = RandomSource.from_state(int(states[r]))
        gaps = [0]
        outdeg = [0] * (n + 1)
        white = 1
        blue = 0
        max_dw = 0
        max_db = 0
        for k in range(1, n + 1):
            w_before = white
            b_before = blue
            for _ in range(m):
                owner = gaps[rng.below(len(gaps))]
                od = outdeg[owner]
                if od == 0:
                    white -= 1
                    blue += 2
                elif od == 1:
                    blue -= 2
                outdeg[owner] = od + 1
                gaps.append(owner)
            gaps.append(k)
            white += 1
            max_dw = max(max_dw, abs(white - w_before))
            max_db = max(max_db, abs(blue - b_before))
        out_vals[r, 0] = white
        out_vals[r, 1] = blue // 2
        for i, node in enumerate(deg_nodes):
            out_vals[r, 2 + i] = outdeg[node] + (m if node > 0 else 0)
        out_steps[r, 0] = max_dw
        out_steps[r, 1] = max_db


def grow_chunk(m, n, states, deg_nodes, out_vals, out_steps, engine: str = "auto") -> None:
    """Grow one circuit per entry of ``states`` and record the requested statistics.

    ``out_vals`` columns are (y0, y1, degree of each listed node);
    ``out_steps`` columns are the per-replicate maxima of |step change of
    y0| and |step change of the blue count|.
    """
    if engine not in ("auto", "numba", "python"):
        raise ValueError(f"unknown engine {engine!r}")
    if engine == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba requested but not importable")
    if engine in ("auto", "numba") and HAVE_NUMBA:
        _grow_chunk_numba(m, n, states, deg_nodes, out_vals, out_steps)
    else:
        _grow_chunk_python(m, n, states, deg_nodes, out_vals, out_steps)
