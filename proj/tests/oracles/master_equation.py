"""Truncated master-equation oracle for the two-species TASEP.

Solves the forward equation dp/dt = p G on a finite window by sparse
matrix exponentiation. Particles cannot jump past the right edge of the
window; with the window chosen a few dozen sites beyond the initial
rightmost particle the truncation error is a Poisson tail below 1e-16.

Used once to produce the frozen reference values in the C++ tests.
"""
import itertools
import sys

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply


def build(n, lo, hi):
    states = []
    for pos in itertools.combinations(range(lo, hi + 1), n):
        for spc in itertools.product((1, 2), repeat=n):
            states.append((pos, spc))
    index = {s: i for i, s in enumerate(states)}
    rows, cols, vals = [], [], []
    for s, i in index.items():
        pos, spc = s
        out = 0.0
        for p in range(n):
            tgt = pos[p] + 1
            if tgt > hi:
                continue
            if p + 1 < n and pos[p + 1] == tgt:
                if spc[p] == 2 and spc[p + 1] == 1:
                    nspc = list(spc)
                    nspc[p], nspc[p + 1] = 1, 2
                    j = index[(pos, tuple(nspc))]
                else:
                    continue
            else:
                npos = list(pos)
                npos[p] = tgt
                j = index[(tuple(npos), spc)]
            rows.append(i)
            cols.append(j)
            vals.append(1.0)
            out += 1.0
        rows.append(i)
        cols.append(i)
        vals.append(-out)
    g = sp.csr_matrix((vals, (rows, cols)), shape=(len(states), len(states)))
    return states, index, g


def distribution(y, nu, t, margin=40):
    n = len(y)
    states, index, g = build(n, y[0], y[-1] + margin)
    p0 = np.zeros(len(states))
    p0[index[(tuple(y), tuple(nu))]] = 1.0
    p = expm_multiply(g.T * t, p0) if t > 0 else p0
    return states, index, p


def leftmost(y, nu, xs, t, head=None):
    states, index, p = distribution(y, nu, t)
    n = len(y)
    head = head or tuple([2] + [1] * (n - 1))
    out = {}
    for x in xs:
        out[x] = sum(p[i] for (pos, spc), i in index.items() if pos[0] == x and spc == head)
    return out


if __name__ == "__main__":
    np.set_printoptions(precision=17)
    cases = [
        ("leftmost step N=2 t=1", (1, 2), (2, 1), 1.0),
        ("leftmost step N=3 t=0.5", (1, 2, 3), (2, 1, 1), 0.5),
        ("leftmost step N=3 t=2", (1, 2, 3), (2, 1, 1), 2.0),
        ("leftmost Y=(1,3) t=1", (1, 3), (2, 1), 1.0),
        ("leftmost Y=(0,2,5) t=1.5", (0, 2, 5), (2, 1, 1), 1.5),
    ]
    for name, y, nu, t in cases:
        vals = leftmost(y, nu, range(y[0], y[0] + 7), t)
        print(name, {k: repr(v) for k, v in vals.items()})
    # single-species leftmost
    for y, t in [((1, 2), 1.0), ((1, 2, 3), 2.0)]:
        n = len(y)
        vals = leftmost(y, tuple([1] * n), range(1, 7), t, head=tuple([1] * n))
        print("tasep", y, t, {k: repr(v) for k, v in vals.items()})
    # transition spots
    for y, nu, x, pi, t in [((1, 2), (2, 1), (1, 3), (2, 1), 1.0),
                            ((1, 2), (2, 1), (2, 3), (1, 2), 1.0),
                            ((1, 2), (2, 1), (2, 3), (2, 1), 1.0),
                            ((1, 2), (1, 2), (2, 4), (1, 2), 0.7),
                            ((0, 1, 3), (2, 1, 1), (1, 2, 4), (1, 2, 1), 1.2),
                            ((0, 1, 3), (1, 2, 1), (1, 3, 4), (1, 1, 2), 0.8)]:
        states, index, p = distribution(y, nu, t)
        print("transition", y, nu, x, pi, t, repr(p[index[(x, pi)]]))
