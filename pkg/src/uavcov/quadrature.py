"""Adaptive Gauss-Kronrod integration over explicit panel lists.

The coverage integrands are smooth between known breakpoints but carry
square-root behaviour at interval endpoints (vanishing chord angles,
circle-overlap kinks).  Callers therefore pass the panel decomposition
explicitly and mark singular endpoints; a t**2 substitution absorbs the
square root so the 7/15 rule converges at full order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

# 15-point Kronrod extension of 7-point Gauss (QUADPACK constants),
# positive half; the full rule mirrors around zero.
_XGK_HALF = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK_HALF = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
# Gauss-7 weights, aligned with every second Kronrod node.
_WG_HALF = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)

GK_NODES = np.array([-x for x in _XGK_HALF[:-1]] + [0.0] + [x for x in reversed(_XGK_HALF[:-1])])
GK_WEIGHTS = np.array(list(_WGK_HALF[:-1]) + [_WGK_HALF[-1]] + list(reversed(_WGK_HALF[:-1])))
_wg_full = [0.0] * 15
for _i, _w in enumerate(_WG_HALF[:-1]):
    _wg_full[2 * _i + 1] = _w
    _wg_full[13 - 2 * _i] = _w
_wg_full[7] = _WG_HALF[-1]
GAUSS_WEIGHTS = np.array(_wg_full)
del _wg_full, _i, _w


@dataclass(frozen=True)
class Panel:
    """One integration interval; singular flags request the t**2 substitution."""

    lo: float
    hi: float
    singular_lo: bool = False
    singular_hi: bool = False


class QuadratureError(RuntimeError):
    """Refinement budget exhausted before reaching the tolerance."""

    def __init__(self, message, total_error=None, worst_panel=None, evaluations=None):
        super().__init__(message)
        self.total_error = total_error
        self.worst_panel = worst_panel
        self.evaluations = evaluations


def panel_nodes(panel: Panel) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Evaluation abscissae and (Kronrod, Gauss) weights for one panel.

    Singular endpoints are absorbed by x = end +/- t**2: with s in (0, 1),
    x = lo + s^2 (hi - lo) and dx = 2 s (hi - lo) ds, which turns an
    inverse-square-root factor into a bounded one.
    """
    lo, hi = panel.lo, panel.hi
    length = hi - lo
    if panel.singular_lo and panel.singular_hi:
        raise ValueError("split panels with two singular endpoints before evaluation")
    if panel.singular_lo or panel.singular_hi:
        s = 0.5 * (GK_NODES + 1.0)
        jac = s * length  # includes the d(xi) -> ds factor 1/2 times 2 s length
        x = lo + s * s * length if panel.singular_lo else hi - s * s * length
        return x, GK_WEIGHTS * jac, GAUSS_WEIGHTS * jac
    half = 0.5 * length
    x = lo + half * (GK_NODES + 1.0)
    return x, GK_WEIGHTS * half, GAUSS_WEIGHTS * half


def _split_double_singular(panels: Sequence[Panel]) -> list[Panel]:
    out = []
    for p in panels:
        if p.hi < p.lo:
            raise ValueError(f"panel with negative length: {p}")
        if p.hi == p.lo:
            continue
        if p.singular_lo and p.singular_hi:
            mid = 0.5 * (p.lo + p.hi)
            out.append(Panel(p.lo, mid, True, False))
            out.append(Panel(mid, p.hi, False, True))
        else:
            out.append(p)
    return out


def integrate_adaptive(
    f: Callable[[np.ndarray], np.ndarray],
    panels: Sequence[Panel],
    abs_tol: float = 1e-9,
    max_evals: int = 100_000,
):
    """Integrate a vectorized (possibly vector-valued) integrand.

    ``f`` maps an (n,) array of abscissae to (n,) or (n, k) values.  Returns
    ``(value, error)`` where value is a float (or length-k array) and error
    bounds the total across components.  The worst panel is bisected until
    the summed Kronrod-Gauss discrepancy drops below ``abs_tol``; exceeding
    ``max_evals`` raises QuadratureError with diagnostics.
    """
    work = _split_double_singular(panels)
    if not work:
        return 0.0, 0.0

    evals = 0
    entries = []  # (error, panel, kronrod_value_vector)

    def do_panel(p: Panel):
        nonlocal evals
        x, wk, wg = panel_nodes(p)
        y = np.atleast_2d(np.asarray(f(x), dtype=float))
        if y.shape[0] == 1 and len(x) != 1:
            y = y.T
        if y.shape[0] != len(x):
            raise ValueError("integrand returned a shape not matching its input")
        evals += len(x)
        val_k = wk @ y
        val_g = wg @ y
        return float(np.sum(np.abs(val_k - val_g))), p, val_k

    for p in work:
        entries.append(do_panel(p))

    while True:
        total_err = sum(e[0] for e in entries)
        if total_err <= abs_tol:
            break
        idx = max(range(len(entries)), key=lambda i: entries[i][0])
        err, p, _ = entries[idx]
        width_floor = 1e-14 * max(1.0, abs(p.lo), abs(p.hi))
        if p.hi - p.lo <= width_floor:
            break  # cannot meaningfully refine further
        if evals + 30 > max_evals:
            raise QuadratureError(
                f"refinement budget {max_evals} exhausted with error {total_err:.3e} "
                f"(worst panel [{p.lo}, {p.hi}] err {err:.3e})",
                total_error=total_err, worst_panel=p, evaluations=evals)
        mid = 0.5 * (p.lo + p.hi)
        left = Panel(p.lo, mid, p.singular_lo, False)
        right = Panel(mid, p.hi, False, p.singular_hi)
        entries[idx] = do_panel(left)
        entries.append(do_panel(right))

    total = np.sum([e[2] for e in entries], axis=0)
    total_err = sum(e[0] for e in entries)
    if total.shape == (1,):
        return float(total[0]), total_err
    return total, total_err
