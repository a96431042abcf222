"""Independent reference values frozen into the C++ test fixtures.

Run with `python3 tests/oracles/oracles.py`; it prints every value the tests
hard-code, computed from definitions without sharing code with the library.
"""
from fractions import Fraction
from itertools import combinations

import mpmath

mpmath.mp.dps = 50


def counting_bound():
    d, k, m, eps = mpmath.mpf(1000), 3, 100, mpmath.mpf("0.1")
    deltas = {2: mpmath.mpf(500), 3: mpmath.mpf(10) ** 5}
    prefactor = (1 - d ** (-(eps ** 4))) * d
    exponent = (k - 1) + sum(v / (j * d ** (j - 1)) for j, v in deltas.items())
    return m * (mpmath.log(prefactor) - exponent)


def trajectory_endpoint():
    n, k, d, mu = mpmath.mpf(3000), 3, mpmath.mpf(100), mpmath.mpf("0.1")
    x = (1 - mu) * n / k
    p_v = 1 - k * x / n
    d_hat = d * p_v ** (k - 1)
    return n / k * p_v * d_hat


def steiner_conflicts(m, ell):
    """Minimal forbidden matchings of 2..ell triples on [m] (s=3, t=2)."""
    triples = list(combinations(range(m), 3))
    def pairs(b):
        return set(combinations(b, 2))
    def matching(bs):
        seen = set()
        for b in bs:
            p = pairs(b)
            if seen & p:
                return False
            seen |= p
        return True
    def forbidden(bs):
        return len(set().union(*bs)) < len(bs) + 3  # pi(j) = j + 3
    counts = {}
    for j in range(2, ell + 1):
        c = 0
        for bs in combinations(triples, j):
            if len(set().union(*bs)) > j + 2 or not matching(bs) or not forbidden(bs):
                continue
            if any(forbidden(sub) for r in range(2, j) for sub in combinations(bs, r)):
                continue
            c += 1
        counts[j] = c
    return counts


def latin_conflicts(m, ell):
    """Minimal cell sets of size 2..ell on at most |cells| + 2 lines."""
    cells = [(r, c, x) for r in range(m) for c in range(m) for x in range(m)]
    def lines(cs):
        return {("r", a) for a, _, _ in cs} | {("c", b) for _, b, _ in cs} | {("x", x) for _, _, x in cs}
    def matching(cs):
        for a, b in combinations(cs, 2):
            shared = (a[0] == b[0]) + (a[1] == b[1]) + (a[2] == b[2])
            if shared >= 2:
                return False
        return True
    def forbidden(cs):
        return len(lines(cs)) <= len(cs) + 2
    counts = {}
    for j in range(2, ell + 1):
        c = 0
        for cs in combinations(cells, j):
            if not forbidden(cs) or not matching(cs):
                continue
            if any(forbidden(sub) for r in range(2, j) for sub in combinations(cs, r)):
                continue
            c += 1
        counts[j] = c
    return counts


def exact_law(edges, conflicts):
    """Final-matching law of the random greedy conflict-free process."""
    conflicts = [frozenset(c) for c in conflicts]
    def available(matched):
        used = set().union(*(edges[e] for e in matched)) if matched else set()
        out = []
        for e in range(len(edges)):
            if e in matched or used & edges[e]:
                continue
            if any(c <= matched | {e} and e in c for c in conflicts):
                continue
            out.append(e)
        return out
    law = {}
    def walk(matched, p):
        av = available(matched)
        if not av:
            key = tuple(sorted(matched))
            law[key] = law.get(key, 0) + p
            return
        for e in av:
            walk(matched | {e}, p / len(av))
    walk(frozenset(), Fraction(1))
    return law


if __name__ == "__main__":
    print("counting_bound", mpmath.nstr(counting_bound(), 20))
    print("trajectory_endpoint_h", mpmath.nstr(trajectory_endpoint(), 20))
    for m, ell in [(7, 4), (7, 5), (8, 5)]:
        print("steiner", m, ell, steiner_conflicts(m, ell))
    for m, ell in [(2, 4), (3, 5), (3, 6)]:
        print("latin", m, ell, latin_conflicts(m, ell))
    k4 = [{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}]
    law = exact_law(k4, [{0, 5}])  # edges 01 and 23
    print("k4_conflict", {k: str(v) for k, v in law.items()})
    p4 = [{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}]
    print("path5", {k: str(v) for k, v in exact_law(p4, [{0, 4}]).items()})
