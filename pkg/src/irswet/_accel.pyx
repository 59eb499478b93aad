# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled per-element sweep kernels.

Mirrors irswet._kernels_py; see that module for the contract.  Kept free of
the numpy C API: plain typed memoryviews and libc math only.
"""

import numpy as np

from libc.math cimport cos, sin, pow

cdef double INVPHI = 0.6180339887498948482


cdef inline double _beta(double theta, double beta_min, double eta, double alpha) noexcept nogil:
    return (1.0 - beta_min) * pow((sin(theta - eta) + 1.0) / 2.0, alpha) + beta_min


cdef inline double _ao_val(double theta, double ur, double vr, double psi,
                           double beta_min, double eta, double alpha) noexcept nogil:
    cdef double b = _beta(theta, beta_min, eta, alpha)
    cdef double un = ur + b * cos(theta + psi)
    cdef double vn = vr + b * sin(theta + psi)
    return un * un + vn * vn


cdef inline double _mm_val(double theta, double* rest_re, double* rest_im,
                           double complex* col, Py_ssize_t k, Py_ssize_t stride) noexcept nogil:
    cdef double ec = cos(theta)
    cdef double es = sin(theta)
    cdef double mn = 1e300
    cdef double cr, ci, ar, ai, val
    cdef Py_ssize_t i
    for i in range(k):
        cr = col[i * stride].real
        ci = col[i * stride].imag
        ar = rest_re[i] + ec * cr - es * ci
        ai = rest_im[i] + ec * ci + es * cr
        val = ar * ar + ai * ai
        if val < mn:
            mn = val
    return mn


def ao_sweep(double[::1] thetas, double[::1] psis,
             double beta_min, double eta, double alpha,
             double[::1] grid, double[::1] grid_beta,
             double[::1] grid_cos, double[::1] grid_sin,
             double refine_tol, double[::1] uv):
    cdef Py_ssize_t n = thetas.shape[0]
    cdef Py_ssize_t g = grid.shape[0]
    cdef double step = grid[1] - grid[0]
    cdef double u = uv[0]
    cdef double v = uv[1]
    cdef Py_ssize_t t, i
    cdef double th, psi, bt, ur, vr, cpsi, spsi, cc, ss, un, vn, val
    cdef double cur, best_x, best_f, a, b, x1, x2, f1, f2, bb
    with nogil:
        for t in range(n):
            th = thetas[t]
            psi = psis[t]
            bt = _beta(th, beta_min, eta, alpha)
            ur = u - bt * cos(th + psi)
            vr = v - bt * sin(th + psi)
            cpsi = cos(psi)
            spsi = sin(psi)
            cur = _ao_val(th, ur, vr, psi, beta_min, eta, alpha)
            best_x = grid[0]
            best_f = -1.0
            for i in range(g):
                cc = grid_cos[i] * cpsi - grid_sin[i] * spsi
                ss = grid_sin[i] * cpsi + grid_cos[i] * spsi
                un = ur + grid_beta[i] * cc
                vn = vr + grid_beta[i] * ss
                val = un * un + vn * vn
                if val > best_f:
                    best_f = val
                    best_x = grid[i]
            # re-evaluate the grid winner in the same arithmetic used below
            best_f = _ao_val(best_x, ur, vr, psi, beta_min, eta, alpha)
            if cur > best_f:
                best_x = th
                best_f = cur
            # golden-section refinement around the incumbent
            a = best_x - step
            b = best_x + step
            x1 = b - INVPHI * (b - a)
            x2 = a + INVPHI * (b - a)
            f1 = _ao_val(x1, ur, vr, psi, beta_min, eta, alpha)
            f2 = _ao_val(x2, ur, vr, psi, beta_min, eta, alpha)
            if f1 > best_f:
                best_x = x1
                best_f = f1
            if f2 > best_f:
                best_x = x2
                best_f = f2
            while b - a > refine_tol:
                if f1 >= f2:
                    b = x2
                    x2 = x1
                    f2 = f1
                    x1 = b - INVPHI * (b - a)
                    f1 = _ao_val(x1, ur, vr, psi, beta_min, eta, alpha)
                    if f1 > best_f:
                        best_x = x1
                        best_f = f1
                else:
                    a = x1
                    x1 = x2
                    f1 = f2
                    x2 = a + INVPHI * (b - a)
                    f2 = _ao_val(x2, ur, vr, psi, beta_min, eta, alpha)
                    if f2 > best_f:
                        best_x = x2
                        best_f = f2
            if best_f > cur:
                thetas[t] = best_x
                bb = _beta(best_x, beta_min, eta, alpha)
                u = ur + bb * cos(best_x + psi)
                v = vr + bb * sin(best_x + psi)
    uv[0] = u
    uv[1] = v
    return u * u + v * v


def maxmin_sweep(double[::1] thetas, double complex[:, ::1] channels,
                 double[::1] grid, double[::1] grid_cos, double[::1] grid_sin,
                 double refine_tol, double complex[::1] sums):
    cdef Py_ssize_t k = channels.shape[0]
    cdef Py_ssize_t n = channels.shape[1]
    cdef Py_ssize_t g = grid.shape[0]
    cdef double step = grid[1] - grid[0]
    rest_buf = np.empty((2, k), dtype=np.float64)
    cdef double[:, ::1] rest = rest_buf
    cdef Py_ssize_t t, i, j
    cdef double th, ec, es, cr, ci, ar, ai, val, mn
    cdef double cur, best_x, best_f, a, b, x1, x2, f1, f2
    cdef double complex* col
    cdef double complex* ch0 = &channels[0, 0]
    with nogil:
        for t in range(n):
            th = thetas[t]
            col = ch0 + t
            ec = cos(th)
            es = sin(th)
            for j in range(k):
                cr = col[j * n].real
                ci = col[j * n].imag
                rest[0, j] = sums[j].real - (ec * cr - es * ci)
                rest[1, j] = sums[j].imag - (ec * ci + es * cr)
            cur = _mm_val(th, &rest[0, 0], &rest[1, 0], col, k, n)
            best_x = grid[0]
            best_f = -1.0
            for i in range(g):
                ec = grid_cos[i]
                es = grid_sin[i]
                mn = 1e300
                for j in range(k):
                    cr = col[j * n].real
                    ci = col[j * n].imag
                    ar = rest[0, j] + ec * cr - es * ci
                    ai = rest[1, j] + ec * ci + es * cr
                    val = ar * ar + ai * ai
                    if val < mn:
                        mn = val
                if mn > best_f:
                    best_f = mn
                    best_x = grid[i]
            best_f = _mm_val(best_x, &rest[0, 0], &rest[1, 0], col, k, n)
            if cur > best_f:
                best_x = th
                best_f = cur
            a = best_x - step
            b = best_x + step
            x1 = b - INVPHI * (b - a)
            x2 = a + INVPHI * (b - a)
            f1 = _mm_val(x1, &rest[0, 0], &rest[1, 0], col, k, n)
            f2 = _mm_val(x2, &rest[0, 0], &rest[1, 0], col, k, n)
            if f1 > best_f:
                best_x = x1
                best_f = f1
            if f2 > best_f:
                best_x = x2
                best_f = f2
            while b - a > refine_tol:
                if f1 >= f2:
                    b = x2
                    x2 = x1
                    f2 = f1
                    x1 = b - INVPHI * (b - a)
                    f1 = _mm_val(x1, &rest[0, 0], &rest[1, 0], col, k, n)
                    if f1 > best_f:
                        best_x = x1
                        best_f = f1
                else:
                    a = x1
                    x1 = x2
                    f1 = f2
                    x2 = a + INVPHI * (b - a)
                    f2 = _mm_val(x2, &rest[0, 0], &rest[1, 0], col, k, n)
                    if f2 > best_f:
                        best_x = x2
                        best_f = f2
            if best_f > cur:
                thetas[t] = best_x
                ec = cos(best_x)
                es = sin(best_x)
                for j in range(k):
                    cr = col[j * n].real
                    ci = col[j * n].imag
                    sums[j] = (rest[0, j] + ec * cr - es * ci) + 1j * (rest[1, j] + ec * ci + es * cr)
    mn = 1e300
    for j in range(k):
        val = sums[j].real ** 2 + sums[j].imag ** 2
        if val < mn:
            mn = val
    return mn
