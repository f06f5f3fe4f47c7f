"""Exact arithmetic building blocks: rationals, sparse multivariate
(Laurent) polynomials, linear differential operators and exact linear
algebra.

Every coefficient in this package is an arbitrary-precision rational.
Nothing in here ever rounds, so "equal" always means identically equal.
"""

from __future__ import annotations

import json
from math import comb

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as Rat


def rat(x):
    """Coerce an int, string ("p/q") or rational to Rat."""
    if isinstance(x, (int, str)):
        return Rat(x)
    return Rat(x.numerator, x.denominator) if not isinstance(x, type(Rat(0))) else x


def rat_str(q):
    """Render a rational in lowest terms, "p" or "p/q" with q > 0."""
    q = Rat(q)
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


def parse_rat(s):
    """Parse "p" or "p/q" into a Rat.  Raises ValueError on junk."""
    try:
        return Rat(s.strip())
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ValueError("not a rational: %r" % (s,)) from exc


class MPoly:
    """Sparse multivariate polynomial with exact rational coefficients.

    Terms are stored as a dict mapping exponent tuples to nonzero
    coefficients.  With laurent=True negative exponents are allowed
    (used for the trigonometric model, where everything lives in
    Laurent monomials of the quarter-angle variables).

    Instances are treated as immutable: no method mutates self.
    """

    __slots__ = ("vars", "terms", "laurent")

    def __init__(self, vars, terms=None, laurent=False):
        self.vars = tuple(vars)
        self.laurent = bool(laurent)
        clean = {}
        if terms:
            n = len(self.vars)
            for e, c in terms.items():
                c = c if isinstance(c, type(Rat(0))) else Rat(c)
                if c == 0:
                    continue
                e = tuple(e)
                if len(e) != n:
                    raise ValueError("exponent %r has wrong arity" % (e,))
                if not self.laurent and any(k < 0 for k in e):
                    raise ValueError("negative exponent in non-Laurent poly")
                clean[e] = c
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, vars, laurent=False):
        return cls(vars, {}, laurent)

    @classmethod
    def const(cls, vars, c, laurent=False):
        return cls(vars, {(0,) * len(tuple(vars)): Rat(c)}, laurent)

    @classmethod
    def var(cls, vars, name, laurent=False):
        vars = tuple(vars)
        i = vars.index(name)
        e = [0] * len(vars)
        e[i] = 1
        return cls(vars, {tuple(e): Rat(1)}, laurent)

    @classmethod
    def monomial(cls, vars, e, c=1, laurent=False):
        return cls(vars, {tuple(e): Rat(c)}, laurent)

    @classmethod
    def gens(cls, vars, laurent=False):
        """All generators as a tuple, in variable order."""
        return tuple(cls.var(vars, v, laurent) for v in vars)

    # -- basic queries -------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        z = (0,) * len(self.vars)
        return all(e == z for e in self.terms)

    def constant_value(self):
        z = (0,) * len(self.vars)
        if any(e != z for e in self.terms):
            raise ValueError("not a constant")
        return self.terms.get(z, Rat(0))

    def total_degree(self):
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def grading(self, weights):
        """Max weighted degree over all terms."""
        if not self.terms:
            return 0
        return max(sum(w * k for w, k in zip(weights, e)) for e in self.terms)

    def coeff(self, e):
        return self.terms.get(tuple(e), Rat(0))

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.vars == other.vars and self.terms == other.terms
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return NotImplemented if r is NotImplemented else not r

    def __repr__(self):
        return "MPoly(%s)" % self.pretty()

    def pretty(self):
        if not self.terms:
            return "0"
        bits = []
        for e in self.sorted_exponents():
            c = self.terms[e]
            mono = "*".join(
                "%s^%d" % (v, k) if k != 1 else v
                for v, k in zip(self.vars, e) if k != 0
            )
            if mono:
                bits.append("%s*%s" % (rat_str(c), mono))
            else:
                bits.append(rat_str(c))
        return " + ".join(bits)

    # -- ordering / serialization ---------------------------------------

    def sorted_exponents(self):
        """Graded-lexicographic order: by total degree, then exponents."""
        return sorted(self.terms, key=lambda e: (sum(e), e))

    def to_json_dict(self):
        return {
            "vars": list(self.vars),
            "terms": [
                {"e": list(e), "c": rat_str(self.terms[e])}
                for e in self.sorted_exponents()
            ],
        }

    def to_json(self):
        return json.dumps(self.to_json_dict(), sort_keys=False)

    @classmethod
    def from_json_dict(cls, d, laurent=None):
        terms = {tuple(t["e"]): parse_rat(t["c"]) for t in d["terms"]}
        if laurent is None:
            laurent = any(k < 0 for e in terms for k in e)
        return cls(tuple(d["vars"]), terms, laurent)

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MPoly):
            if other.vars != self.vars:
                raise ValueError(
                    "variable mismatch: %r vs %r" % (self.vars, other.vars))
            return other
        if isinstance(other, (int, str)) or hasattr(other, "denominator"):
            return MPoly.const(self.vars, other, self.laurent)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s == 0:
                    del out[e]
                else:
                    out[e] = s
        return self._make(out, self.laurent or other.laurent)

    __radd__ = __add__

    def __neg__(self):
        return self._make({e: -c for e, c in self.terms.items()}, self.laurent)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def _make(self, terms, laurent):
        p = MPoly.__new__(MPoly)
        p.vars = self.vars
        p.terms = terms
        p.laurent = laurent
        return p

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            c = Rat(other)
            if c == 0:
                return self._make({}, self.laurent)
            return self._make({e: c * v for e, v in self.terms.items()},
                              self.laurent)
        other = self._coerce(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out = {}
        get = out.get
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(map(int.__add__, ea, eb))
                s = get(e)
                if s is None:
                    out[e] = ca * cb
                else:
                    s = s + ca * cb
                    if s == 0:
                        del out[e]
                    else:
                        out[e] = s
        return self._make(out, self.laurent or other.laurent)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result = MPoly.const(self.vars, 1, self.laurent)
        base = self
        while n:
            if n & 1:
                result = result * base
            base2 = base * base if n > 1 else base
            base = base2
            n >>= 1
        return result

    # -- calculus --------------------------------------------------------

    def derive(self, name):
        """Partial derivative with respect to the named variable."""
        i = self.vars.index(name)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k == 0:
                continue
            e2 = e[:i] + (k - 1,) + e[i + 1:]
            c2 = c * k
            s = out.get(e2)
            out[e2] = c2 if s is None else s + c2
        return self._make({e: c for e, c in out.items() if c != 0},
                          self.laurent)

    def euler_derive(self, name):
        """x * d/dx, exponent-safe for Laurent polynomials."""
        i = self.vars.index(name)
        return self._make(
            {e: c * e[i] for e, c in self.terms.items() if e[i] != 0},
            self.laurent)

    # -- substitution -----------------------------------------------------

    def evaluate(self, point):
        """Evaluate at a dict name -> rational.  Exact; negative
        exponents invert (zero base raises)."""
        vals = [Rat(point[v]) for v in self.vars]
        total = Rat(0)
        for e, c in self.terms.items():
            t = c
            for val, k in zip(vals, e):
                if k == 0:
                    continue
                if k < 0:
                    if val == 0:
                        raise ZeroDivisionError("pole at evaluation point")
                    t = t / val ** (-k)
                else:
                    t = t * val ** k
            total += t
        return total

    def substitute(self, images):
        """Substitute polynomials for variables.

        images maps every variable name of self to an MPoly (all over a
        common target variable set).  Plain polynomials go through a
        Horner scheme; Laurent exponents additionally require each image
        to be a single invertible monomial.
        """
        target = None
        imgs = []
        for v in self.vars:
            p = images[v]
            if target is None:
                target = p
            elif p.vars != target.vars:
                raise ValueError("images live in different rings")
            imgs.append(p)
        if target is None:
            raise ValueError("no variables to substitute")
        laurent = any(p.laurent for p in imgs)
        zero = MPoly.zero(target.vars, laurent)
        one = MPoly.const(target.vars, 1, laurent)
        if any(k < 0 for e in self.terms for k in e):
            # Laurent source: term-by-term, images must be monomials.
            total = zero
            for e, c in self.terms.items():
                t = one * c
                for p, k in zip(imgs, e):
                    if k == 0:
                        continue
                    if k > 0:
                        t = t * p ** k
                    else:
                        if len(p.terms) != 1:
                            raise ValueError(
                                "negative power of a non-monomial image")
                        (me, mc), = p.terms.items()
                        inv = MPoly(p.vars,
                                    {tuple(-x for x in me): 1 / mc}, True)
                        t = t * inv ** (-k)
                total = total + t
            return total

        def horner(terms):
            if not terms:
                return zero
            # pick the variable with the largest exponent spread
            n = len(self.vars)
            best, best_deg = -1, 0
            for i in range(n):
                d = max(e[i] for e in terms)
                if d > best_deg:
                    best, best_deg = i, d
            if best < 0:
                (e,), = (list(terms),)
                return one * terms[e]
            layers = {}
            for e, c in terms.items():
                k = e[best]
                e2 = e[:best] + (0,) + e[best + 1:]
                layers.setdefault(k, {})[e2] = c
            img = imgs[best]
            acc = zero
            for k in range(max(layers), -1, -1):
                if acc:
                    acc = acc * img
                sub = layers.get(k)
                if sub:
                    acc = acc + horner(sub)
            return acc

        return horner(self.terms)

    def eval_partial(self, point):
        """Substitute rationals for a subset of variables, dropping them.

        point maps names to rationals; remaining variables survive."""
        keep = [v for v in self.vars if v not in point]
        idx = [self.vars.index(v) for v in keep]
        vals = {self.vars.index(v): Rat(c) for v, c in point.items()}
        out = {}
        for e, c in self.terms.items():
            for i, val in vals.items():
                k = e[i]
                if k == 0:
                    continue
                if k < 0:
                    if val == 0:
                        raise ZeroDivisionError("pole at evaluation point")
                    c = c / val ** (-k)
                else:
                    c = c * val ** k
            if c == 0:
                continue
            e2 = tuple(e[i] for i in idx)
            s = out.get(e2)
            s = c if s is None else s + c
            if s == 0:
                out.pop(e2, None)
            else:
                out[e2] = s
        return MPoly(tuple(keep), out, self.laurent)

    def extend(self, vars):
        """Reinterpret over a superset of variables (slot-for-slot)."""
        vars = tuple(vars)
        idx = [vars.index(v) for v in self.vars]
        n = len(vars)
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * n
            for i, k in zip(idx, e):
                e2[i] = k
            out[tuple(e2)] = c
        return MPoly(vars, out, self.laurent)

    def split_by(self, names):
        """Group terms by the exponents of the named variables.

        Returns a dict mapping exponent tuples (of names, in the given
        order) to MPoly over the remaining variables.  Used to collect
        identities coefficient-by-coefficient in symbolic parameters.
        """
        names = tuple(names)
        sel = [self.vars.index(v) for v in names]
        keep = [i for i in range(len(self.vars)) if i not in sel]
        kvars = tuple(self.vars[i] for i in keep)
        groups = {}
        for e, c in self.terms.items():
            key = tuple(e[i] for i in sel)
            e2 = tuple(e[i] for i in keep)
            groups.setdefault(key, {})[e2] = c
        return {k: MPoly(kvars, t, self.laurent) for k, t in groups.items()}

    # -- division ----------------------------------------------------------

    def exact_div(self, divisor):
        """Exact polynomial division.  Returns the quotient, or None if
        self is not a polynomial multiple of divisor.  Non-Laurent only."""
        if self.laurent or divisor.laurent:
            raise ValueError("exact_div is for plain polynomials")
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return MPoly.zero(self.vars)
        key = lambda e: (sum(e), e)
        dlead = max(divisor.terms, key=key)
        dcoef = divisor.terms[dlead]
        rem = dict(self.terms)
        quo = {}
        while rem:
            rlead = max(rem, key=key)
            diff = tuple(map(int.__sub__, rlead, dlead))
            if any(k < 0 for k in diff):
                return None
            c = rem[rlead] / dcoef
            quo[diff] = c
            for e, dc in divisor.terms.items():
                e2 = tuple(map(int.__add__, e, diff))
                s = rem.get(e2, Rat(0)) - c * dc
                if s == 0:
                    rem.pop(e2, None)
                else:
                    rem[e2] = s
        return MPoly(self.vars, quo)


class DiffOp:
    """Linear differential operator with MPoly coefficients.

    terms maps derivative multi-indices (one slot per variable) to their
    coefficient polynomials.  The Hamiltonian constructors only ever
    produce total order <= 2; compositions (the particular integrals)
    may be of higher order.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, vars, terms=None):
        self.vars = tuple(vars)
        clean = {}
        if terms:
            for d, c in (terms.items() if isinstance(terms, dict) else terms):
                d = tuple(d)
                if len(d) != len(self.vars) or any(k < 0 for k in d):
                    raise ValueError("bad derivative multi-index %r" % (d,))
                if not isinstance(c, MPoly):
                    c = MPoly.const(self.vars, c)
                if c.vars != self.vars:
                    raise ValueError("coefficient variable mismatch")
                if c.is_zero():
                    continue
                if d in clean:
                    c = clean[d] + c
                if c.is_zero():
                    clean.pop(d, None)
                else:
                    clean[d] = c
        self.terms = clean

    def order(self):
        return max((sum(d) for d in self.terms), default=0)

    def is_zero(self):
        return not self.terms

    def coefficient(self, d):
        return self.terms.get(tuple(d), MPoly.zero(self.vars))

    def __eq__(self, other):
        if isinstance(other, DiffOp):
            return self.vars == other.vars and self.terms == other.terms
        return NotImplemented

    def __add__(self, other):
        if not isinstance(other, DiffOp) or other.vars != self.vars:
            return NotImplemented
        out = dict(self.terms)
        for d, c in other.terms.items():
            s = out.get(d)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(d, None)
            else:
                out[d] = s
        return DiffOp(self.vars, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return DiffOp(self.vars, {d: p * c for d, p in self.terms.items()})

    def apply(self, p):
        """Apply to an MPoly over the same variables."""
        if p.vars != self.vars:
            raise ValueError("operand variable mismatch")
        total = MPoly.zero(self.vars, p.laurent)
        for d, coef in self.terms.items():
            q = p
            for name, k in zip(self.vars, d):
                for _ in range(k):
                    q = q.derive(name)
                if q.is_zero():
                    break
            if q.is_zero():
                continue
            total = total + coef * q
        return total

    def compose(self, other):
        """Operator composition self . other (apply other first)."""
        if other.vars != self.vars:
            raise ValueError("operand variable mismatch")
        n = len(self.vars)
        out = {}

        def add_term(d, c):
            d = tuple(d)
            s = out.get(d)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(d, None)
            else:
                out[d] = s

        for d1, c1 in self.terms.items():
            for d2, c2 in other.terms.items():
                # Leibniz: d^{d1} (c2 d^{d2} f)
                gammas = [()]
                for k in d1:
                    gammas = [g + (j,) for g in gammas for j in range(k + 1)]
                for g in gammas:
                    dc2 = c2
                    mult = 1
                    ok = True
                    for i in range(n):
                        mult *= comb(d1[i], g[i])
                        for _ in range(g[i]):
                            dc2 = dc2.derive(self.vars[i])
                        if dc2.is_zero():
                            ok = False
                            break
                    if not ok or dc2.is_zero():
                        continue
                    d = tuple(d1[i] - g[i] + d2[i] for i in range(n))
                    add_term(d, c1 * dc2 * mult)
        return DiffOp(self.vars, out)


def solve_linear(rows, rhs):
    """Solve an exact linear system A x = b.

    rows: list of coefficient lists, rhs: list of rationals.  Returns
    ("unique", [x...]), ("underdetermined", None) or ("inconsistent",
    None).  Plain Gaussian elimination over rationals: exact, with
    back-substitution.
    """
    m = len(rows)
    if m == 0:
        return ("underdetermined", None)
    n = len(rows[0])
    aug = [[Rat(v) for v in row] + [Rat(b)] for row, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for col in range(n):
        piv = None
        for i in range(r, m):
            if aug[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        prow = aug[r]
        pval = prow[col]
        for i in range(r + 1, m):
            f = aug[i][col]
            if f == 0:
                continue
            f = f / pval
            row = aug[i]
            for j in range(col, n + 1):
                row[j] = row[j] - f * prow[j]
        pivots.append(col)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][n] != 0:
            return ("inconsistent", None)
    if len(pivots) < n:
        return ("underdetermined", None)
    x = [Rat(0)] * n
    for i in range(len(pivots) - 1, -1, -1):
        col = pivots[i]
        s = aug[i][n]
        row = aug[i]
        for j in range(col + 1, n):
            if row[j] != 0:
                s -= row[j] * x[j]
        x[col] = s / row[col]
    return ("unique", x)


def det4(matrix):
    """Determinant of a 4x4 matrix of MPoly (or Rat) by cofactor
    expansion via 2x2 minors, exact."""
    m = matrix
    if len(m) != 4 or any(len(row) != 4 for row in m):
        raise ValueError("need a 4x4 matrix")

    # 2x2 minors of rows 2,3 in columns (i<j)
    minors = {}
    for i in range(4):
        for j in range(i + 1, 4):
            minors[(i, j)] = m[2][i] * m[3][j] - m[2][j] * m[3][i]
    total = None
    for i in range(4):
        for j in range(4):
            if i == j:
                continue
            sign = 1
            # permutation sign of (i, j, rest...)
            rest = [k for k in range(4) if k not in (i, j)]
            perm = [i, j] + rest
            inv = sum(1 for a in range(4) for b in range(a + 1, 4)
                      if perm[a] > perm[b])
            sign = -1 if inv % 2 else 1
            lo, hi = min(rest), max(rest)
            term = m[0][i] * m[1][j] * minors[(lo, hi)]
            if sign < 0:
                term = term * -1
            total = term if total is None else total + term
    return total
