"""Adaptive nested quadrature used by the field and metric layers.

A 15-point Kronrod rule nested over 7-point Gauss gives the per-interval
estimate and error; intervals are bisected worst-first until the global
error meets tolerance or the refinement budget (depth / interval count)
is exhausted, in which case a ``NumericalFailureError`` carrying the
achieved estimate is raised. Integrands receive a node array and must
return an array (real or complex), so oscillatory kernels stay cheap.

Two-dimensional integrals are tensor products: an adaptive outer rule
whose integrand is an adaptive inner rule with the same budget per axis.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, NumericalFailureError

# 15-point Kronrod abscissae/weights with the embedded 7-point Gauss rule
# (positive half; mirrored below).
_XGK_HALF = np.array([
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
])
_WGK_HALF = np.array([
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
])
_WG_HALF = np.array([
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
])

_NODES = np.concatenate([-_XGK_HALF[:7], _XGK_HALF[7:8], _XGK_HALF[6::-1]])
_WK = np.concatenate([_WGK_HALF[:7], _WGK_HALF[7:8], _WGK_HALF[6::-1]])
_WG = np.zeros(15)
_WG[1:14:2] = np.concatenate([_WG_HALF[:3], _WG_HALF[3:4], _WG_HALF[2::-1]])

DEFAULT_ABS_TOL = 1e-10
DEFAULT_REL_TOL = 1e-8
MAX_DEPTH = 20
MAX_INTERVALS = 20000

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadResult:
    value: complex | float
    error_estimate: float
    n_evals: int


def _gk15(f, a, b):
    """One Gauss-Kronrod pass on [a, b]: (estimate, error, |f| integral)."""
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    y = np.asarray(f(center + half * _NODES))
    if y.shape != (15,):
        raise InvalidArgumentError(
            "quadrature integrand must return one value per node")
    ik = half * np.sum(_WK * y)
    ig = half * np.sum(_WG * y)
    resabs = abs(half) * float(np.sum(_WK * np.abs(y)))
    mean = ik / (b - a)
    resasc = abs(half) * float(np.sum(_WK * np.abs(y - mean)))
    diff = abs(ik - ig)
    if resasc != 0.0 and diff != 0.0:
        err = resasc * min(1.0, (200.0 * diff / resasc) ** 1.5)
    else:
        err = diff
    return ik, err, resabs


def adaptive_quad(f, a, b, *, abs_tol=DEFAULT_ABS_TOL, rel_tol=DEFAULT_REL_TOL,
                  max_depth=MAX_DEPTH, max_intervals=MAX_INTERVALS) -> QuadResult:
    """Integrate ``f`` over [a, b] with worst-interval-first bisection.

    ``f`` is called with an ndarray of nodes and must return the integrand
    values (complex allowed). Raises ``NumericalFailureError`` carrying the
    partial value and achieved error when the budget runs out.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise InvalidArgumentError("integration limits must be finite")
    if a == b:
        return QuadResult(0.0, 0.0, 0)
    sign = 1.0
    if a > b:
        a, b, sign = b, a, -1.0

    val, err, resabs = _gk15(f, a, b)
    n_evals = 15
    total_val = val
    total_err = err
    total_resabs = resabs
    counter = itertools.count()
    heap = [(-err, next(counter), a, b, val, err, resabs, 0)]

    def tolerance():
        return max(abs_tol, rel_tol * abs(total_val), 100.0 * _EPS * total_resabs)

    while total_err > tolerance():
        neg_err, _, ia, ib, ival, ierr, iresabs, depth = heapq.heappop(heap)
        if depth >= max_depth or len(heap) + 2 > max_intervals:
            total_err = max(total_err, -neg_err)
            raise NumericalFailureError(
                f"quadrature failed to converge on [{a}, {b}]: "
                f"achieved error {total_err:.3e} after "
                f"{len(heap) + 1} intervals (depth limit {max_depth})",
                value=sign * total_val, error_estimate=total_err)
        mid = 0.5 * (ia + ib)
        lval, lerr, lresabs = _gk15(f, ia, mid)
        rval, rerr, rresabs = _gk15(f, mid, ib)
        n_evals += 30
        total_val += (lval + rval) - ival
        total_err += (lerr + rerr) - ierr
        total_resabs += (lresabs + rresabs) - iresabs
        heapq.heappush(heap, (-lerr, next(counter), ia, mid, lval, lerr,
                              lresabs, depth + 1))
        heapq.heappush(heap, (-rerr, next(counter), mid, ib, rval, rerr,
                              rresabs, depth + 1))

    return QuadResult(sign * total_val, total_err, n_evals)


def adaptive_quad_2d(f, ax, bx, ay, by, *, abs_tol=DEFAULT_ABS_TOL,
                     rel_tol=DEFAULT_REL_TOL, max_depth=MAX_DEPTH,
                     max_intervals=MAX_INTERVALS) -> QuadResult:
    """Tensor-product double integral of ``f(x_nodes, y_scalar)`` over a box.

    The outer (y) rule is adaptive, and each outer node evaluates an inner
    adaptive rule over x with the same budget. The reported error bounds the
    outer error plus the worst inner error spread over the y-extent.
    """
    state = {"inner_err": 0.0, "evals": 0}

    def outer(ys):
        vals = np.empty(len(ys), dtype=complex)
        for i, y in enumerate(ys):
            res = adaptive_quad(lambda xs: f(xs, y), ax, bx,
                                abs_tol=abs_tol, rel_tol=rel_tol,
                                max_depth=max_depth, max_intervals=max_intervals)
            vals[i] = res.value
            state["inner_err"] = max(state["inner_err"], res.error_estimate)
            state["evals"] += res.n_evals
        return vals

    res = adaptive_quad(outer, ay, by, abs_tol=abs_tol, rel_tol=rel_tol,
                        max_depth=max_depth, max_intervals=max_intervals)
    err = res.error_estimate + abs(by - ay) * state["inner_err"]
    return QuadResult(res.value, err, res.n_evals + state["evals"])
