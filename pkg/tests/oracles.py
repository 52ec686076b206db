"""Reference computations kept independent of the library's code paths."""

import itertools
import math
from collections import defaultdict

import numpy as np
from scipy import integrate


def brute_permanent(a):
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    return complex(
        sum(math.prod(a[i, s[i]] for i in range(n)) for s in itertools.permutations(range(n)))
    )


def second_quantized_amplitude(u, inp, out):
    """<out| U |in> by expanding prod_i (sum_j U[j,i] a_j^dag)^{n_i} as a polynomial."""
    u = np.asarray(u, dtype=complex)
    m = u.shape[0]
    poly = {tuple([0] * m): 1 + 0j}
    for i, n_i in enumerate(inp):
        for _ in range(n_i):
            nxt = defaultdict(complex)
            for mono, c in poly.items():
                for j in range(m):
                    if u[j, i] == 0:
                        continue
                    k = list(mono)
                    k[j] += 1
                    nxt[tuple(k)] += c * u[j, i]
            poly = nxt
    coeff = poly.get(tuple(out), 0j)
    norm_in = math.prod(math.factorial(n) for n in inp)
    norm_out = math.prod(math.factorial(n) for n in out)
    return coeff * math.sqrt(norm_out / norm_in)


def all_occupations(m, n):
    return [occ for occ in itertools.product(range(n + 1), repeat=m) if sum(occ) == n]


def square_probability(delta):
    """Area of {(x, y) in [0,1]^2 : x + delta > y} by 2-D quadrature."""
    area, _ = integrate.dblquad(
        lambda y, x: 1.0,
        0.0,
        1.0,
        lambda x: 0.0,
        lambda x: min(1.0, x + delta),
        epsabs=1e-12,
        epsrel=1e-12,
    )
    return area
