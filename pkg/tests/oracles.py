"""Brute-force reference implementations, deliberately independent of the library code paths."""
import itertools
import math


def leibniz_det(mat):
    n = len(mat)
    total = 0j
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        prod = 1 + 0j
        for i in range(n):
            prod *= mat[i][perm[i]]
        total += (-1) ** inv * prod
    return total


def a_p(p, z):
    return leibniz_det([[zi ** pj for pj in p] for zi in z])


def elementary(z):
    n = len(z)
    return [sum(math.prod(c) for c in itertools.combinations(z, i)) for i in range(1, n + 1)]


def complete_homogeneous(k, z):
    if k < 0:
        return 0
    return sum(math.prod(c) for c in itertools.combinations_with_replacement(z, k))


def partitions_brute(n, max_weight):
    """Filter all n-tuples in a box; sorted by (weight, tuple)."""
    out = [
        t
        for t in itertools.product(range(max_weight + 1), repeat=n)
        if sum(t) <= max_weight and all(t[i] >= t[i + 1] for i in range(n - 1))
    ]
    return sorted(out, key=lambda t: (sum(t), t))


def schur_ssyt(m, z):
    """Schur polynomial as a sum over semistandard tableaux of shape m with entries 1..n."""
    n = len(z)
    shape = [r for r in m if r > 0]
    cells = [(i, j) for i, r in enumerate(shape) for j in range(r)]
    total = 0j

    def fill(k, tab):
        nonlocal total
        if k == len(cells):
            total += math.prod(z[v] for v in tab.values())
            return
        i, j = cells[k]
        lo = 0
        if j > 0:
            lo = max(lo, tab[(i, j - 1)])
        if i > 0:
            lo = max(lo, tab[(i - 1, j)] + 1)
        for v in range(lo, n):
            tab[(i, j)] = v
            fill(k + 1, tab)
            del tab[(i, j)]

    fill(0, {})
    return total


def beta_moment(m, lam):
    """E[t^m] under density (lam-1)(1-t)^(lam-2) on [0, 1], by adaptive quadrature."""
    from scipy.integrate import quad

    val, _ = quad(lambda t: t**m * (lam - 1) * (1 - t) ** (lam - 2), 0.0, 1.0, epsabs=1e-14, epsrel=1e-13)
    return val
