"""Pure-Python 2-jet program evaluator, the fallback for the compiled kernel.

Both kernels execute the same flat instruction stream with the same operation
order, so their outputs agree bitwise. Hessians are formed from the upper
triangle and mirrored, which makes hess[i][j] == hess[j][i] exact.

Status codes: 0 ok, 1 division guard, 2 log guard, 3 lin_inv guard,
4 negative-power guard, 5 non-finite value.
"""

import math

import numpy as np

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


def _ipow(base, n):
    if n == 0:
        return 1.0
    if n < 0:
        return 1.0 / _ipow(base, -n)
    acc = base
    for _ in range(n - 1):
        acc *= base
    return acc


def eval_program(code, consts, point, eps_den):
    """Run the instruction stream; returns (status, err_slot, value, grad, hess)."""
    ns = code.shape[0]
    n = point.shape[0]
    vals = np.zeros(ns)
    grads = np.zeros((ns, n))
    hesss = np.zeros((ns, n, n))
    iu, ju = np.triu_indices(n, k=1)

    for s in range(ns):
        op = code[s, 0]
        a = code[s, 1]
        b = code[s, 2]
        mirror = False
        if op == OP_CONST:
            vals[s] = consts[a]
        elif op == OP_COORD:
            vals[s] = point[a]
            grads[s, a] = 1.0
        elif op == OP_ADD:
            vals[s] = vals[a] + vals[b]
            grads[s] = grads[a] + grads[b]
            hesss[s] = hesss[a] + hesss[b]
        elif op == OP_SUB:
            vals[s] = vals[a] - vals[b]
            grads[s] = grads[a] - grads[b]
            hesss[s] = hesss[a] - hesss[b]
        elif op == OP_NEG:
            vals[s] = -vals[a]
            grads[s] = -grads[a]
            hesss[s] = -hesss[a]
        elif op == OP_MUL:
            av, bv = vals[a], vals[b]
            ag, bg = grads[a], grads[b]
            vals[s] = av * bv
            grads[s] = ag * bv + av * bg
            hesss[s] = hesss[a] * bv + np.outer(ag, bg) + np.outer(bg, ag) + av * hesss[b]
            mirror = True
        elif op == OP_DIV:
            av, bv = vals[a], vals[b]
            if abs(bv) < eps_den:
                return 1, s, 0.0, None, None
            v = av / bv
            g = (grads[a] - v * grads[b]) / bv
            vals[s] = v
            grads[s] = g
            hesss[s] = (hesss[a] - np.outer(g, grads[b]) - np.outer(grads[b], g)
                        - v * hesss[b]) / bv
            mirror = True
        elif op == OP_POW:
            u = vals[a]
            if b < 0 and abs(u) < eps_den:
                return 4, s, 0.0, None, None
            if b == 0:
                vals[s] = 1.0
            elif b == 1:
                vals[s] = u
                grads[s] = grads[a]
                hesss[s] = hesss[a]
            else:
                nf = float(b)
                c1 = nf * _ipow(u, b - 1)
                c2 = nf * (nf - 1.0) * _ipow(u, b - 2)
                vals[s] = _ipow(u, b)
                grads[s] = c1 * grads[a]
                hesss[s] = c2 * np.outer(grads[a], grads[a]) + c1 * hesss[a]
                mirror = True
        elif op in (OP_SIN, OP_COS, OP_EXP, OP_LOG):
            u = vals[a]
            if op == OP_SIN:
                v = math.sin(u)
                c1 = math.cos(u)
                c2 = -v
            elif op == OP_COS:
                v = math.cos(u)
                c1 = -math.sin(u)
                c2 = -v
            elif op == OP_EXP:
                v = math.exp(u)
                c1 = v
                c2 = v
            else:
                if u < eps_den:
                    return 2, s, 0.0, None, None
                v = math.log(u)
                c1 = 1.0 / u
                c2 = -(c1 * c1)
            vals[s] = v
            grads[s] = c1 * grads[a]
            hesss[s] = c2 * np.outer(grads[a], grads[a]) + c1 * hesss[a]
            mirror = True
        elif op == OP_LININV:
            a0, a3, a4 = consts[a], consts[a + 1], consts[a + 2]
            i3, i4 = n - 2, n - 1
            den = (a0 + a3 * point[i3]) + a4 * point[i4]
            if abs(den) < eps_den:
                return 3, s, 0.0, None, None
            v = 1.0 / den
            v2 = v * v
            v3 = v2 * v
            c = 2.0 * v3
            vals[s] = v
            grads[s, i3] = -a3 * v2
            grads[s, i4] = -a4 * v2
            hesss[s, i3, i3] = c * (a3 * a3)
            hesss[s, i3, i4] = c * (a3 * a4)
            hesss[s, i4, i3] = hesss[s, i3, i4]
            hesss[s, i4, i4] = c * (a4 * a4)
        else:
            return 5, s, 0.0, None, None
        if not math.isfinite(vals[s]):
            return 5, s, 0.0, None, None
        if mirror and n > 1:
            h = hesss[s]
            h[ju, iu] = h[iu, ju]

    last = ns - 1
    return 0, -1, float(vals[last]), grads[last].copy(), hesss[last].copy()
