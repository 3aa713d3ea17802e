"""Exact rational linear algebra and polynomial utilities.

Everything here works over `fractions.Fraction`; no floating point is used
anywhere, so results are reproducible and comparisons are exact.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

Rat = Fraction


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


# ---------------------------------------------------------------------------
# matrices (tuple-of-tuples of Fraction)


class QMat:
    """Immutable dense rational matrix."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows):
        self.rows = tuple(tuple(_frac(x) for x in r) for r in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        for r in self.rows:
            if len(r) != self.ncols:
                raise ValueError("ragged matrix")

    @staticmethod
    def identity(n: int) -> "QMat":
        return QMat([[Fraction(int(i == j)) for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(n: int, m: int) -> "QMat":
        return QMat([[Fraction(0)] * m for _ in range(n)])

    def __eq__(self, other):
        return isinstance(other, QMat) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __add__(self, other: "QMat") -> "QMat":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        return QMat([[a + b for a, b in zip(r1, r2)]
                     for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other: "QMat") -> "QMat":
        return self + other.scale(-1)

    def scale(self, c) -> "QMat":
        c = _frac(c)
        return QMat([[c * x for x in r] for r in self.rows])

    def __mul__(self, other: "QMat") -> "QMat":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.rows))
        return QMat([[sum(a * b for a, b in zip(row, col)) for col in cols]
                     for row in self.rows])

    def matvec(self, v):
        """self @ v for a vector given as a tuple; returns a tuple."""
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.rows)

    def vecmat(self, v):
        """v @ self for a row vector; returns a tuple."""
        return tuple(sum(v[i] * self.rows[i][j] for i in range(self.nrows))
                     for j in range(self.ncols))

    def transpose(self) -> "QMat":
        return QMat(list(zip(*self.rows)))

    def trace(self) -> Fraction:
        return sum(self.rows[i][i] for i in range(self.nrows))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def power(self, e: int) -> "QMat":
        if self.nrows != self.ncols:
            raise ValueError("not square")
        result = QMat.identity(self.nrows)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __repr__(self):
        return "QMat(%r)" % (self.rows,)


def gauss_rank(rows) -> int:
    """Rank of a list of rational row vectors."""
    mat = [list(map(_frac, r)) for r in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    col = 0
    while rank < len(mat) and col < ncols:
        pivot = next((i for i in range(rank, len(mat)) if mat[i][col] != 0), None)
        if pivot is None:
            col += 1
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        pv = mat[rank][col]
        mat[rank] = [x / pv for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
        col += 1
    return rank


class RowBasis:
    """Incremental basis of rational row vectors (for reachability closures).

    `insert` returns True when the vector enlarged the span.  `coords`
    expresses a vector in the current basis, or returns None when the
    vector is outside the span.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.vectors = []   # raw inserted vectors, in insertion order
        self._rref = []     # row-reduced copies
        self._pivots = []   # pivot column of each rref row

    def _reduce(self, v):
        v = list(map(_frac, v))
        for row, p in zip(self._rref, self._pivots):
            if v[p] != 0:
                f = v[p]
                for j in range(self.dim):
                    v[j] -= f * row[j]
        return v

    def contains(self, v) -> bool:
        return all(x == 0 for x in self._reduce(v))

    def insert(self, v) -> bool:
        red = self._reduce(v)
        pivot = next((j for j in range(self.dim) if red[j] != 0), None)
        if pivot is None:
            return False
        pv = red[pivot]
        red = [x / pv for x in red]
        self.vectors.append(tuple(map(_frac, v)))
        self._rref.append(red)
        self._pivots.append(pivot)
        return True

    def coords(self, v):
        """Coefficients c with v == sum c_i * vectors[i], or None."""
        n = len(self.vectors)
        if n == 0:
            return None if any(_frac(x) != 0 for x in v) else ()
        # solve the transposed system by elimination
        aug = [[self.vectors[i][j] for i in range(n)] + [_frac(v[j])]
               for j in range(self.dim)]
        sol = solve_linear(aug)
        return None if sol is None else tuple(sol)

    def __len__(self):
        return len(self.vectors)


def solve_linear(aug):
    """Solve an augmented system [A | b] exactly.

    Returns one solution as a tuple, or None when inconsistent.  Free
    variables are set to zero.
    """
    mat = [list(map(_frac, r)) for r in aug]
    nrows = len(mat)
    ncols = len(mat[0]) - 1 if mat else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        pv = mat[r][c]
        mat[r] = [x / pv for x in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if mat[i][ncols] != 0:
            return None
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        sol[c] = mat[i][ncols]
    return tuple(sol)


# ---------------------------------------------------------------------------
# univariate polynomials (coefficients low degree -> high degree)


class UPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [
            _frac(c) for c in coeffs
        ]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @staticmethod
    def x() -> "UPoly":
        return UPoly([0, 1])

    @staticmethod
    def const(c) -> "UPoly":
        return UPoly([c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (Fraction(1),)

    def monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __eq__(self, other):
        return isinstance(other, UPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [Fraction(0)] * (n - len(other.coeffs))
        return UPoly([x + y for x, y in zip(a, b)])

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = _frac(c)
        return UPoly([c * x for x in self.coeffs])

    def __mul__(self, other):
        if self.is_zero() or other.is_zero():
            return UPoly([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UPoly(out)

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(0, len(rem) - len(other.coeffs) + 1)
        d = other.degree
        lead = other.coeffs[-1]
        while len(rem) - 1 >= d and any(c != 0 for c in rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < d:
                break
            f = rem[-1] / lead
            shift = len(rem) - 1 - d
            q[shift] = f
            for i, c in enumerate(other.coeffs):
                rem[shift + i] -= f * c
            rem.pop()
        return UPoly(q), UPoly(rem)

    def divides_exactly(self, other):
        """Return self / other if the division is exact, else None."""
        q, r = self.divmod(other)
        return q if r.is_zero() else None

    def eval(self, x):
        x = _frac(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append("%s*X" % c if c != 1 else "X")
            else:
                parts.append("%s*X^%d" % (c, i) if c != 1 else "X^%d" % i)
        return " + ".join(parts)


def char_poly(m: QMat) -> UPoly:
    """Characteristic polynomial via the Faddeev-LeVerrier recurrence."""
    n = m.nrows
    if n != m.ncols:
        raise ValueError("not square")
    coeffs = [Fraction(1)]  # c_0 = 1 (leading)
    mk = QMat.identity(n)
    for k in range(1, n + 1):
        mk = m * mk
        ck = -mk.trace() / k
        coeffs.append(ck)
        if k < n:
            mk = mk + QMat.identity(n).scale(ck)
    # coeffs are for X^n, X^{n-1}, ..., X^0
    return UPoly(list(reversed(coeffs)))


# ---------------------------------------------------------------------------
# cyclotomic polynomials and root classification


def euler_phi(n: int) -> int:
    result = n
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


_CYCLO_CACHE: dict[int, UPoly] = {}


def cyclotomic(n: int) -> UPoly:
    if n in _CYCLO_CACHE:
        return _CYCLO_CACHE[n]
    # X^n - 1 divided by the cyclotomic polynomials of the proper divisors
    p = UPoly([-1] + [0] * (n - 1) + [1])
    for d in range(1, n):
        if n % d == 0:
            q = p.divides_exactly(cyclotomic(d))
            if q is None:
                raise AssertionError("cyclotomic division failed")
            p = q
    _CYCLO_CACHE[n] = p
    return p


def classify_roots(p: UPoly, mode: str) -> bool:
    """Check where all complex roots of a monic rational polynomial lie.

    mode "zero_one": every root is 0 or 1, i.e. p = X^a (X-1)^b.
    mode "zero_union_unity": every root is 0 or a root of unity, i.e. the
    nonzero part of p is a product of cyclotomic polynomials.
    """
    if not p.monic():
        raise ValueError("classify_roots requires a monic polynomial")
    if mode not in ("zero_one", "zero_union_unity"):
        raise ValueError("unknown mode %r" % mode)
    cur = p
    x = UPoly.x()
    while not cur.is_one() and cur.coeffs[0] == 0:
        cur = cur.divides_exactly(x)
    if mode == "zero_one":
        xm1 = UPoly([-1, 1])
        while not cur.is_one():
            q = cur.divides_exactly(xm1)
            if q is None:
                return False
            cur = q
        return True
    deg0 = cur.degree
    n = 1
    while not cur.is_one():
        if euler_phi(n) > deg0:
            return False
        phi_n = cyclotomic(n)
        while True:
            q = cur.divides_exactly(phi_n)
            if q is None:
                break
            cur = q
        n += 1
    return True


# ---------------------------------------------------------------------------
# multivariate polynomials (dict: exponent tuple -> coefficient)


class MPoly:
    __slots__ = ("arity", "terms")

    def __init__(self, arity: int, terms=None):
        self.arity = arity
        tt = {}
        for e, c in (terms or {}).items():
            c = _frac(c)
            if c != 0:
                tt[tuple(e)] = tt.get(tuple(e), Fraction(0)) + c
        self.terms = {e: c for e, c in tt.items() if c != 0}

    @staticmethod
    def const(arity: int, c) -> "MPoly":
        return MPoly(arity, {(0,) * arity: c})

    @staticmethod
    def var(arity: int, i: int) -> "MPoly":
        e = [0] * arity
        e[i] = 1
        return MPoly(arity, {tuple(e): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Max total degree, or -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def __eq__(self, other):
        return (isinstance(other, MPoly) and self.arity == other.arity
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.arity, frozenset(self.terms.items())))

    def __add__(self, other):
        if self.arity != other.arity:
            raise ValueError("arity mismatch")
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, Fraction(0)) + c
        return MPoly(self.arity, t)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = _frac(c)
        return MPoly(self.arity, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if self.arity != other.arity:
            raise ValueError("arity mismatch")
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, Fraction(0)) + c1 * c2
        return MPoly(self.arity, t)

    def eval(self, point):
        point = tuple(map(_frac, point))
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                v *= x ** k
            total += v
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), e)):
            c = self.terms[e]
            mon = "*".join("X%d^%d" % (i + 1, k) if k > 1 else "X%d" % (i + 1)
                           for i, k in enumerate(e) if k)
            parts.append(str(c) if not mon else
                         ("%s*%s" % (c, mon) if c != 1 else mon))
        return " + ".join(parts)


def interpolate_grid(arity: int, per_var_degree: int, x0: int, value_at) -> MPoly:
    """Exact tensor-Lagrange interpolation on the grid {x0..x0+d}^arity.

    `value_at` maps a grid point (tuple of ints) to a rational value.
    The result has per-variable degree at most `per_var_degree` and agrees
    with `value_at` on the whole grid.
    """
    d = per_var_degree
    nodes = list(range(x0, x0 + d + 1))
    # 1-d Lagrange basis polynomials, as univariate coefficient lists
    basis = []
    for j, xj in enumerate(nodes):
        p = UPoly.const(1)
        for m, xm in enumerate(nodes):
            if m == j:
                continue
            p = p * UPoly([Fraction(-xm, 1) / (xj - xm), Fraction(1, xj - xm)])
        basis.append(p)
    if arity == 0:
        return MPoly.const(0, value_at(()))
    result = MPoly(arity)
    for idx in itertools.product(range(d + 1), repeat=arity):
        point = tuple(nodes[i] for i in idx)
        val = _frac(value_at(point))
        if val == 0:
            continue
        mono = MPoly.const(arity, val)
        for var, i in enumerate(idx):
            up = basis[i]
            mp = MPoly(arity, {tuple(k if v == var else 0 for v in range(arity)): c
                               for k, c in enumerate(up.coeffs)})
            mono = mono * mp
        result = result + mono
    return result


# ---------------------------------------------------------------------------
# power sums and Cauchy products of polynomials


_POWER_SUM_CACHE: dict[int, UPoly] = {}


def power_sum(p: int) -> UPoly:
    """The polynomial S_p with S_p(X) = sum_{i=0}^{X} i^p for integer X >= 0."""
    if p in _POWER_SUM_CACHE:
        return _POWER_SUM_CACHE[p]
    # interpolate on p+2 points; the sum is a polynomial of degree p+1
    pts = list(range(p + 2))
    vals = []
    acc = Fraction(0)
    for x in pts:
        acc += Fraction(x ** p if x > 0 or p > 0 else 1)
        vals.append(acc)
    poly = UPoly([0])
    for j, xj in enumerate(pts):
        lagr = UPoly.const(vals[j])
        for m, xm in enumerate(pts):
            if m == j:
                continue
            lagr = lagr * UPoly([Fraction(-xm, xj - xm), Fraction(1, xj - xm)])
        poly = poly + lagr
    _POWER_SUM_CACHE[p] = poly
    return poly


def _mono_cauchy_1d(a: int, b: int) -> UPoly:
    """Closed form of X^a (x) X^b, i.e. sum_{i=0}^{X} i^a (X-i)^b."""
    out = UPoly([])
    for k in range(b + 1):
        c = Fraction(math.comb(b, k) * (-1) ** (b - k))
        s = power_sum(a + b - k)
        out = out + UPoly([0] * k + [1]).scale(c) * s
    return out


def poly_cauchy(p: MPoly, q: MPoly, var: int = 0) -> MPoly:
    """Cauchy product along variable `var`:

    (p (x) q)(X, Y..) = sum_{i=0}^{X} p(i, Y..) q(X - i, Y..)
    exactly, as a polynomial identity for integer X >= 0.
    """
    if p.arity != q.arity:
        raise ValueError("arity mismatch")
    arity = p.arity
    out = MPoly(arity)
    for e1, c1 in p.terms.items():
        for e2, c2 in q.terms.items():
            conv = _mono_cauchy_1d(e1[var], e2[var])
            rest = tuple(a + b if i != var else 0
                         for i, (a, b) in enumerate(zip(e1, e2)))
            for k, ck in enumerate(conv.coeffs):
                if ck == 0:
                    continue
                e = tuple(rest[i] if i != var else k for i in range(arity))
                out = out + MPoly(arity, {e: c1 * c2 * ck})
    return out
