"""Pure numpy/python reference kernels for the per-element sweeps.

The compiled extension (irswet._accel) mirrors these routines.  Both variants
update the phase configuration in place, keep running phasor sums in a
caller-owned state vector so the objective basis stays fixed within a sweep,
and return the objective value after the pass.  The two backends agree to
floating-point roundoff, not necessarily bit for bit.
"""

from __future__ import annotations

import math

import numpy as np

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _beta(theta, beta_min, eta, alpha):
    return (1.0 - beta_min) * ((math.sin(theta - eta) + 1.0) / 2.0) ** alpha + beta_min


def _golden_max(f, a, b, tol, best_x, best_f):
    """Golden-section ascent on [a, b], tracking the best point ever evaluated."""
    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1 = f(x1)
    f2 = f(x2)
    if f1 > best_f:
        best_x, best_f = x1, f1
    if f2 > best_f:
        best_x, best_f = x2, f2
    while b - a > tol:
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INVPHI * (b - a)
            f1 = f(x1)
            if f1 > best_f:
                best_x, best_f = x1, f1
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INVPHI * (b - a)
            f2 = f(x2)
            if f2 > best_f:
                best_x, best_f = x2, f2
    return best_x, best_f


def ao_sweep(thetas, psis, beta_min, eta, alpha, grid, grid_beta, grid_cos,
             grid_sin, refine_tol, uv):
    """One pass of per-element phase updates for the single-target objective.

    Maximizes (u + b(t)cos(t + psi))^2 + (v + b(t)sin(t + psi))^2 element by
    element via a grid scan plus golden-section refinement.  uv holds the
    running cosine/sine sums and is only touched when an update is accepted,
    so a pass with no accepted moves leaves the state bit-identical.
    """
    n = thetas.shape[0]
    step = grid[1] - grid[0]
    u = float(uv[0])
    v = float(uv[1])
    for t in range(n):
        th = float(thetas[t])
        psi = float(psis[t])
        bt = _beta(th, beta_min, eta, alpha)
        ur = u - bt * math.cos(th + psi)
        vr = v - bt * math.sin(th + psi)
        cpsi = math.cos(psi)
        spsi = math.sin(psi)
        cand_cos = grid_cos * cpsi - grid_sin * spsi
        cand_sin = grid_sin * cpsi + grid_cos * spsi
        vals = (ur + grid_beta * cand_cos) ** 2 + (vr + grid_beta * cand_sin) ** 2
        gi = int(np.argmax(vals))

        def f(theta, ur=ur, vr=vr, psi=psi):
            b = _beta(theta, beta_min, eta, alpha)
            un = ur + b * math.cos(theta + psi)
            vn = vr + b * math.sin(theta + psi)
            return un * un + vn * vn

        cur = f(th)
        best_x = float(grid[gi])
        best_f = f(best_x)
        if cur > best_f:
            best_x, best_f = th, cur
        best_x, best_f = _golden_max(f, best_x - step, best_x + step,
                                     refine_tol, best_x, best_f)
        if best_f > cur:
            thetas[t] = best_x
            bb = _beta(best_x, beta_min, eta, alpha)
            u = ur + bb * math.cos(best_x + psi)
            v = vr + bb * math.sin(best_x + psi)
    uv[0] = u
    uv[1] = v
    return u * u + v * v


def maxmin_sweep(thetas, channels, grid, grid_cos, grid_sin, refine_tol, sums):
    """One pass of per-element updates for the worst-receiver objective.

    channels has shape (k, n); sums holds the k running phasor sums
    sum_i exp(i theta_i) c_{k,i} and is only touched on accepted moves.
    Returns min_k |sums_k|^2 after the pass.
    """
    k, n = channels.shape
    step = grid[1] - grid[0]
    for t in range(n):
        th = float(thetas[t])
        col = channels[:, t]
        rest = sums - (math.cos(th) + 1j * math.sin(th)) * col

        def f(theta, rest=rest, col=col):
            z = rest + (math.cos(theta) + 1j * math.sin(theta)) * col
            return float(np.min(z.real ** 2 + z.imag ** 2))

        cur = f(th)
        cand = rest[None, :] + (grid_cos + 1j * grid_sin)[:, None] * col[None, :]
        vals = np.min(cand.real ** 2 + cand.imag ** 2, axis=1)
        gi = int(np.argmax(vals))
        best_x = float(grid[gi])
        best_f = f(best_x)
        if cur > best_f:
            best_x, best_f = th, cur
        best_x, best_f = _golden_max(f, best_x - step, best_x + step,
                                     refine_tol, best_x, best_f)
        if best_f > cur:
            thetas[t] = best_x
            sums[:] = rest + (math.cos(best_x) + 1j * math.sin(best_x)) * col
    return float(np.min(sums.real ** 2 + sums.imag ** 2))
