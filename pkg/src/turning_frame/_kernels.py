"""Hot numeric kernels: branchwise phase laws, displacement kernels, stencils.

Every kernel exists twice: a pure-NumPy implementation (``_*_np``) and a
numba ``@njit`` loop compiled lazily on first use.  The active backend is
chosen at import time:

* numba is used whenever it imports successfully,
* setting the environment variable ``TURNING_FRAME_NO_NUMBA=1`` forces the
  NumPy path (useful for debugging and for the benchmark baseline).

Both backends evaluate the same expressions in the same order, so results
agree to the last few ulps; ``benchmarks/bench_kernels.py`` compares their
speed.

Numerical conventions shared by both paths:

* Square-root branch arguments are snapped to zero within ``_SNAP``
  relative to ``p**2`` so that values computed exactly at a branch
  boundary land on the closed-form joint value instead of picking up a
  ``sqrt(eps)`` spray from the infinite one-sided slope.
* Branch dispatch assigns boundary points to the earlier branch;
  continuity makes the choice unobservable.
* All loops accumulate in a fixed order; no parallel reductions.
"""

from __future__ import annotations

import math
import os

import numpy as np

_EPS = float(np.finfo(np.float64).eps)
_SNAP = 8.0 * _EPS

_DISABLED = os.environ.get("TURNING_FRAME_NO_NUMBA", "").strip().lower() in {
    "1", "true", "yes", "on",
}

try:
    if _DISABLED:
        raise ImportError("numba disabled by TURNING_FRAME_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# NumPy implementations
# ---------------------------------------------------------------------------

def _phase_profile_np(p, tau, lam):
    """Accumulated evolution phase for every momentum node at scale tau."""
    if tau <= 0.0:
        return p * tau
    p2 = p * p
    u = p2 - lam * tau
    u = np.where(np.abs(u) <= _SNAP * p2, 0.0, u)
    s = np.sqrt(np.abs(u))
    # u >= 0: (2/3)(p^3 - u^{3/2})/lam ; u < 0: (2/3)(p^3 + |u|^{3/2})/lam
    mid = (2.0 / 3.0) * (p2 * p - u * s) / lam
    late = p * tau - (2.0 / 3.0) * p2 * p / lam
    return np.where(p2 >= 0.5 * lam * tau, mid, late)


def _displacement_profile_np(p, tau, lam):
    """Per-momentum displacement kernel at scale tau."""
    if tau <= 0.0:
        return np.full_like(p, tau)
    p2 = p * p
    u = p2 - lam * tau
    u = np.where(np.abs(u) <= _SNAP * p2, 0.0, u)
    s = np.sqrt(np.abs(u))
    # Approaching branch: 2(p^2 - p sqrt(u))/lam rewritten as 2 p tau/(p+sqrt(u))
    # to avoid the p^2 - p*sqrt(p^2 - lam*tau) cancellation near tau -> 0.
    # The rewrite needs p + sqrt(u) > 0, so keep the direct form for p <= 0.
    denom = np.where((u >= 0.0) & (p > 0.0), p + s, 1.0)
    approach = np.where(
        (u >= 0.0) & (p > 0.0),
        2.0 * p * tau / denom,
        2.0 * (p2 - p * s) / lam,
    )
    late = tau - 2.0 * p2 / lam
    return np.where(p2 >= 0.5 * lam * tau, approach, late)


def _classical_position_profile_np(taus, q0, p, lam):
    """Closed-form relational trajectory q(tau) for conserved momentum p."""
    p2 = p * p
    u = p2 - lam * taus
    u = np.where(np.abs(u) <= _SNAP * p2, 0.0, u)
    s = np.sqrt(np.abs(u) / p2)
    rising = q0 + 2.0 * taus / (1.0 + s)          # 0 <= tau <= p^2/lam
    returning = q0 + 2.0 * p2 * (1.0 + s) / lam   # p^2/lam <= tau <= 2 p^2/lam
    out = np.where(u >= 0.0, rising, np.where(lam * taus <= 2.0 * p2, returning,
                                              q0 + taus + 2.0 * p2 / lam))
    return np.where(taus <= 0.0, q0 + taus, out)


def _apply_phase_np(amps, phase, hbar):
    """Multiply amplitudes by exp(-i phase / hbar)."""
    return amps * np.exp(-1j * phase / hbar)


def _derivative_np(values, h):
    """Fourth-order finite-difference derivative on a uniform grid (n >= 5)."""
    d = np.empty_like(values)
    d[2:-2] = (values[:-4] - 8.0 * values[1:-3]
               + 8.0 * values[3:-1] - values[4:]) / (12.0 * h)
    d[0] = (-25.0 * values[0] + 48.0 * values[1] - 36.0 * values[2]
            + 16.0 * values[3] - 3.0 * values[4]) / (12.0 * h)
    d[1] = (-3.0 * values[0] - 10.0 * values[1] + 18.0 * values[2]
            - 6.0 * values[3] + values[4]) / (12.0 * h)
    d[-2] = (3.0 * values[-1] + 10.0 * values[-2] - 18.0 * values[-3]
             + 6.0 * values[-4] - values[-5]) / (12.0 * h)
    d[-1] = (25.0 * values[-1] - 48.0 * values[-2] + 36.0 * values[-3]
             - 16.0 * values[-4] + 3.0 * values[-5]) / (12.0 * h)
    return d


def _position_transform_np(p, amps, q, hbar):
    """Plane-wave quadrature sum_i amps_i exp(i p_i q / hbar) per q node.

    Evaluated in fixed-size blocks to bound the phase-matrix memory.
    """
    out = np.empty(q.shape[0], dtype=np.complex128)
    block = 256
    for start in range(0, q.shape[0], block):
        qb = q[start:start + block]
        out[start:start + block] = np.exp(1j * np.outer(qb, p) / hbar) @ amps
    return out


# ---------------------------------------------------------------------------
# numba implementations (same arithmetic, explicit loops)
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _phase_profile_nb(p, tau, lam):  # pragma: no cover - numba
        n = p.shape[0]
        out = np.empty(n, dtype=np.float64)
        if tau <= 0.0:
            for i in range(n):
                out[i] = p[i] * tau
            return out
        for i in range(n):
            pi = p[i]
            p2 = pi * pi
            u = p2 - lam * tau
            if abs(u) <= _SNAP * p2:
                u = 0.0
            if p2 >= 0.5 * lam * tau:
                s = math.sqrt(abs(u))
                out[i] = (2.0 / 3.0) * (p2 * pi - u * s) / lam
            else:
                out[i] = pi * tau - (2.0 / 3.0) * p2 * pi / lam
        return out

    @njit(cache=True)
    def _displacement_profile_nb(p, tau, lam):  # pragma: no cover - numba
        n = p.shape[0]
        out = np.empty(n, dtype=np.float64)
        if tau <= 0.0:
            for i in range(n):
                out[i] = tau
            return out
        for i in range(n):
            pi = p[i]
            p2 = pi * pi
            u = p2 - lam * tau
            if abs(u) <= _SNAP * p2:
                u = 0.0
            if p2 >= 0.5 * lam * tau:
                s = math.sqrt(abs(u))
                if u >= 0.0 and pi > 0.0:
                    out[i] = 2.0 * pi * tau / (pi + s)
                else:
                    out[i] = 2.0 * (p2 - pi * s) / lam
            else:
                out[i] = tau - 2.0 * p2 / lam
        return out

    @njit(cache=True)
    def _classical_position_profile_nb(taus, q0, p, lam):  # pragma: no cover
        n = taus.shape[0]
        out = np.empty(n, dtype=np.float64)
        p2 = p * p
        for i in range(n):
            t = taus[i]
            if t <= 0.0:
                out[i] = q0 + t
                continue
            u = p2 - lam * t
            if abs(u) <= _SNAP * p2:
                u = 0.0
            s = math.sqrt(abs(u) / p2)
            if u >= 0.0:
                out[i] = q0 + 2.0 * t / (1.0 + s)
            elif lam * t <= 2.0 * p2:
                out[i] = q0 + 2.0 * p2 * (1.0 + s) / lam
            else:
                out[i] = q0 + t + 2.0 * p2 / lam
        return out

    @njit(cache=True)
    def _apply_phase_nb(amps, phase, hbar):  # pragma: no cover - numba
        n = amps.shape[0]
        out = np.empty(n, dtype=np.complex128)
        for i in range(n):
            th = -phase[i] / hbar
            out[i] = amps[i] * complex(math.cos(th), math.sin(th))
        return out

    @njit(cache=True)
    def _derivative_nb(values, h):  # pragma: no cover - numba
        n = values.shape[0]
        d = np.empty_like(values)
        inv = 1.0 / (12.0 * h)
        for i in range(2, n - 2):
            d[i] = (values[i - 2] - 8.0 * values[i - 1]
                    + 8.0 * values[i + 1] - values[i + 2]) * inv
        d[0] = (-25.0 * values[0] + 48.0 * values[1] - 36.0 * values[2]
                + 16.0 * values[3] - 3.0 * values[4]) * inv
        d[1] = (-3.0 * values[0] - 10.0 * values[1] + 18.0 * values[2]
                - 6.0 * values[3] + values[4]) * inv
        d[n - 2] = (3.0 * values[n - 1] + 10.0 * values[n - 2]
                    - 18.0 * values[n - 3] + 6.0 * values[n - 4]
                    - values[n - 5]) * inv
        d[n - 1] = (25.0 * values[n - 1] - 48.0 * values[n - 2]
                    + 36.0 * values[n - 3] - 16.0 * values[n - 4]
                    + 3.0 * values[n - 5]) * inv
        return d

    @njit(cache=True)
    def _position_transform_nb(p, amps, q, hbar):  # pragma: no cover - numba
        n_q = q.shape[0]
        n_p = p.shape[0]
        out = np.empty(n_q, dtype=np.complex128)
        for j in range(n_q):
            acc = 0.0 + 0.0j
            for i in range(n_p):
                th = q[j] * p[i] / hbar
                acc += amps[i] * complex(math.cos(th), math.sin(th))
            out[j] = acc
        return out

    phase_profile = _phase_profile_nb
    displacement_profile = _displacement_profile_nb
    classical_position_profile = _classical_position_profile_nb
    apply_phase = _apply_phase_nb
    derivative = _derivative_nb
    position_transform = _position_transform_nb
else:
    phase_profile = _phase_profile_np
    displacement_profile = _displacement_profile_np
    classical_position_profile = _classical_position_profile_np
    apply_phase = _apply_phase_np
    derivative = _derivative_np
    position_transform = _position_transform_np


def backend() -> str:
    """Name of the active kernel backend ("numba" or "numpy")."""
    return "numba" if HAVE_NUMBA else "numpy"
