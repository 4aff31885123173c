# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled 2-jet program evaluator.

Instruction set, operation order, and guard semantics mirror _jetcore_py
exactly so both backends produce bitwise-identical jets. Hessians are computed
on the upper triangle (i <= j) and mirrored.
"""

import numpy as np

from libc.math cimport sin, cos, exp, log, fabs, isfinite

cdef enum:
    OP_CONST = 0
    OP_COORD = 1
    OP_ADD = 2
    OP_SUB = 3
    OP_MUL = 4
    OP_DIV = 5
    OP_NEG = 6
    OP_POW = 7
    OP_SIN = 8
    OP_COS = 9
    OP_EXP = 10
    OP_LOG = 11
    OP_LININV = 12


cdef inline double _ipow(double base, int n) noexcept:
    cdef double acc
    cdef int k
    if n == 0:
        return 1.0
    if n < 0:
        return 1.0 / _ipow(base, -n)
    acc = base
    for k in range(n - 1):
        acc *= base
    return acc


def eval_program(code, consts, point, double eps_den):
    """Run the instruction stream; returns (status, err_slot, value, grad, hess)."""
    cdef int[:, ::1] cd = code
    cdef double[::1] cs = consts
    cdef double[::1] pt = point
    cdef int ns = cd.shape[0]
    cdef int n = pt.shape[0]

    vals_arr = np.zeros(ns)
    grads_arr = np.zeros((ns, n))
    hess_arr = np.zeros((ns, n, n))
    cdef double[::1] vals = vals_arr
    cdef double[:, ::1] grads = grads_arr
    cdef double[:, :, ::1] hs = hess_arr

    cdef int s, op, a, b, i, j, i3, i4
    cdef double av, bv, u, v, g, c1, c2, nf, a0, a3, a4, den, v2, v3, c, t

    for s in range(ns):
        op = cd[s, 0]
        a = cd[s, 1]
        b = cd[s, 2]
        if op == OP_CONST:
            vals[s] = cs[a]
        elif op == OP_COORD:
            vals[s] = pt[a]
            grads[s, a] = 1.0
        elif op == OP_ADD:
            vals[s] = vals[a] + vals[b]
            for i in range(n):
                grads[s, i] = grads[a, i] + grads[b, i]
                for j in range(i, n):
                    t = hs[a, i, j] + hs[b, i, j]
                    hs[s, i, j] = t
                    hs[s, j, i] = t
        elif op == OP_SUB:
            vals[s] = vals[a] - vals[b]
            for i in range(n):
                grads[s, i] = grads[a, i] - grads[b, i]
                for j in range(i, n):
                    t = hs[a, i, j] - hs[b, i, j]
                    hs[s, i, j] = t
                    hs[s, j, i] = t
        elif op == OP_NEG:
            vals[s] = -vals[a]
            for i in range(n):
                grads[s, i] = -grads[a, i]
                for j in range(i, n):
                    t = -hs[a, i, j]
                    hs[s, i, j] = t
                    hs[s, j, i] = t
        elif op == OP_MUL:
            av = vals[a]
            bv = vals[b]
            vals[s] = av * bv
            for i in range(n):
                grads[s, i] = grads[a, i] * bv + av * grads[b, i]
                for j in range(i, n):
                    t = ((hs[a, i, j] * bv + grads[a, i] * grads[b, j])
                         + grads[b, i] * grads[a, j]) + av * hs[b, i, j]
                    hs[s, i, j] = t
                    hs[s, j, i] = t
        elif op == OP_DIV:
            av = vals[a]
            bv = vals[b]
            if fabs(bv) < eps_den:
                return 1, s, 0.0, None, None
            v = av / bv
            vals[s] = v
            for i in range(n):
                grads[s, i] = (grads[a, i] - v * grads[b, i]) / bv
            for i in range(n):
                for j in range(i, n):
                    t = (((hs[a, i, j] - grads[s, i] * grads[b, j])
                          - grads[b, i] * grads[s, j]) - v * hs[b, i, j]) / bv
                    hs[s, i, j] = t
                    hs[s, j, i] = t
        elif op == OP_POW:
            u = vals[a]
            if b < 0 and fabs(u) < eps_den:
                return 4, s, 0.0, None, None
            if b == 0:
                vals[s] = 1.0
            elif b == 1:
                vals[s] = u
                for i in range(n):
                    grads[s, i] = grads[a, i]
                    for j in range(i, n):
                        hs[s, i, j] = hs[a, i, j]
                        hs[s, j, i] = hs[a, j, i]
            else:
                nf = <double> b
                c1 = nf * _ipow(u, b - 1)
                c2 = nf * (nf - 1.0) * _ipow(u, b - 2)
                vals[s] = _ipow(u, b)
                for i in range(n):
                    grads[s, i] = c1 * grads[a, i]
                    for j in range(i, n):
                        t = c2 * (grads[a, i] * grads[a, j]) + c1 * hs[a, i, j]
                        hs[s, i, j] = t
                        hs[s, j, i] = t
        elif op == OP_SIN or op == OP_COS or op == OP_EXP or op == OP_LOG:
            u = vals[a]
            if op == OP_SIN:
                v = sin(u)
                c1 = cos(u)
                c2 = -v
            elif op == OP_COS:
                v = cos(u)
                c1 = -sin(u)
                c2 = -v
            elif op == OP_EXP:
                v = exp(u)
                c1 = v
                c2 = v
            else:
                if u < eps_den:
                    return 2, s, 0.0, None, None
                v = log(u)
                c1 = 1.0 / u
                c2 = -(c1 * c1)
            vals[s] = v
            for i in range(n):
                grads[s, i] = c1 * grads[a, i]
                for j in range(i, n):
                    t = c2 * (grads[a, i] * grads[a, j]) + c1 * hs[a, i, j]
                    hs[s, i, j] = t
                    hs[s, j, i] = t
        elif op == OP_LININV:
            a0 = cs[a]
            a3 = cs[a + 1]
            a4 = cs[a + 2]
            i3 = n - 2
            i4 = n - 1
            den = (a0 + a3 * pt[i3]) + a4 * pt[i4]
            if fabs(den) < eps_den:
                return 3, s, 0.0, None, None
            v = 1.0 / den
            v2 = v * v
            v3 = v2 * v
            c = 2.0 * v3
            vals[s] = v
            grads[s, i3] = -a3 * v2
            grads[s, i4] = -a4 * v2
            hs[s, i3, i3] = c * (a3 * a3)
            hs[s, i3, i4] = c * (a3 * a4)
            hs[s, i4, i3] = hs[s, i3, i4]
            hs[s, i4, i4] = c * (a4 * a4)
        else:
            return 5, s, 0.0, None, None
        if not isfinite(vals[s]):
            return 5, s, 0.0, None, None

    cdef int last = ns - 1
    return 0, -1, float(vals[last]), grads_arr[last].copy(), hess_arr[last].copy()
