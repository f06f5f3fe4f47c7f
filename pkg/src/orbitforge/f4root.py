"""The F4 root system, its Weyl group orbits, and weight bookkeeping.

Coordinates are 4-tuples of exact rationals in the standard Euclidean
basis e1..e4.  Positivity is lexicographic with the last coordinate
heaviest: a vector is positive when its first nonzero entry, scanning
x4, x3, x2, x1, is positive.  Under this convention the dominant
fundamental weights are

    w1 = e4
    w2 = e3 + e4
    w3 = (e1 + e2 + e3 + 3 e4) / 2
    w4 = e2 + e3 + 2 e4

with Weyl orbit sizes 24, 24, 96, 96.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from .exactmath import Rat


HALF = Rat(1, 2)


def vec(*xs):
    return tuple(Rat(x) for x in xs)


def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Rat(0))


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vscale(c, u):
    return tuple(Rat(c) * a for a in u)


def is_positive(v):
    """Positivity: first nonzero coordinate scanning x4 down to x1."""
    for x in reversed(v):
        if x != 0:
            return x > 0
    return False


def reflect(v, alpha):
    """Reflect v in the hyperplane orthogonal to the root alpha."""
    n2 = dot(alpha, alpha)
    c = 2 * dot(v, alpha) / n2
    return tuple(a - c * b for a, b in zip(v, alpha))


class RootSystem:
    """Holds the 48 roots of F4 split by length and sign."""

    def __init__(self, positive_short, positive_long, simple_roots,
                 fundamental_weights):
        self.positive_short = positive_short
        self.positive_long = positive_long
        self.simple_roots = simple_roots
        self.fundamental_weights = fundamental_weights

    @property
    def positive(self):
        return self.positive_short + self.positive_long

    @property
    def all_roots(self):
        return self.positive + [vscale(-1, a) for a in self.positive]


@lru_cache(maxsize=None)
def build_root_system():
    short = []
    long_ = []
    # +-e_i and e_i +- e_j
    for i in range(4):
        e = [Rat(0)] * 4
        e[i] = Rat(1)
        short.append(tuple(e))
        for j in range(i + 1, 4):
            for s in (1, -1):
                r = [Rat(0)] * 4
                r[i] = Rat(1)
                r[j] = Rat(s)
                long_.append(tuple(r))
    # (+-e1 +-e2 +-e3 +-e4)/2
    for signs in product((1, -1), repeat=4):
        short.append(tuple(HALF * s for s in signs))
    pos_short = sorted((r if is_positive(r) else vscale(-1, r) for r in short),
                       key=lambda v: tuple(reversed(v)), reverse=True)
    pos_long = sorted((r if is_positive(r) else vscale(-1, r) for r in long_),
                      key=lambda v: tuple(reversed(v)), reverse=True)
    pos_short = _dedupe(pos_short)
    pos_long = _dedupe(pos_long)
    assert len(pos_short) == 12 and len(pos_long) == 12
    simple = [
        vec(Rat(-1, 2), Rat(-1, 2), Rat(-1, 2), Rat(1, 2)),
        vec(1, 0, 0, 0),
        vec(-1, 1, 0, 0),
        vec(0, -1, 1, 0),
    ]
    fund = [
        vec(0, 0, 0, 1),
        vec(0, 0, 1, 1),
        vec(HALF, HALF, HALF, Rat(3, 2)),
        vec(0, 1, 1, 2),
    ]
    return RootSystem(pos_short, pos_long, simple, fund)


def _dedupe(vs):
    seen = set()
    out = []
    for v in vs:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def weyl_orbit(seed, generators=None):
    """Weyl group orbit of a vector, as a deterministically ordered list
    (descending in the x4-heavy lexicographic key)."""
    if generators is None:
        generators = build_root_system().simple_roots
    seed = tuple(Rat(x) for x in seed)
    seen = {seed}
    frontier = [seed]
    while frontier:
        new = []
        for v in frontier:
            for a in generators:
                w = reflect(v, a)
                if w not in seen:
                    seen.add(w)
                    new.append(w)
        frontier = sorted(new, key=lambda v: tuple(reversed(v)))
    return sorted(seen, key=lambda v: tuple(reversed(v)), reverse=True)


def weight_of_label(label):
    """Euclidean weight vector for a quantum-number tuple
    (n1, n2, n3, n4) over the fundamental weights."""
    rs = build_root_system()
    w = (Rat(0),) * 4
    for n, f in zip(label, rs.fundamental_weights):
        w = vadd(w, vscale(n, f))
    return w


def pairing(p, q):
    """Euclidean pairing of two quantum-number tuples."""
    return dot(weight_of_label(p), weight_of_label(q))


def deformed_weyl(mu, nu):
    """Coupling-weighted half-sum of positive roots:
    (mu * sum short + nu * sum long) / 2."""
    rs = build_root_system()
    s = (Rat(0),) * 4
    for a in rs.positive_short:
        s = vadd(s, vscale(mu, a))
    for a in rs.positive_long:
        s = vadd(s, vscale(nu, a))
    return vscale(HALF, s)


def flag_characteristic_constants():
    """Known characteristic vectors: the minimal one shared by both
    models, and the further trigonometric ones."""
    return {
        "minimal": (1, 2, 2, 3),
        "trig_extra": [
            (2, 2, 3, 4),
            (2, 3, 4, 6),
            (2, 4, 4, 6),
            (8, 11, 15, 21),
            (11, 16, 21, 30),
        ],
        "counterexample": (1, 1, 1, 1),
    }
