"""Arithmetic for the finite fields F_q with q <= 16.

Field elements are integers in [0, q).  For q = p**e the integer a
stands for the polynomial sum(d_i * t**i), where (d_0, ..., d_{e-1})
are the base-p digits of a.  The defining modulus is the
lexicographically least monic irreducible polynomial of degree e over
F_p, comparing coefficient tuples from the constant term up with
0 < 1 < ... < p-1, so every run builds identical tables.

Extensions F_{q**l} follow the same convention one level up: elements
are integers in [0, q**l) read as base-q digit vectors over F_q, and
the modulus is the lexicographically least monic irreducible of degree
l over F_q.
"""

from __future__ import annotations

from itertools import product

from .errors import BadParams, NotPrimePower, Unsupported

MAX_ORDER = 16


def _prime_power(q: int):
    """Split q into (p, e) with q = p**e and p prime; None if impossible."""
    if q < 2:
        return None
    p = 2
    while p * p <= q:
        if q % p == 0:
            break
        p += 1
    else:
        p = q
    e, m = 0, q
    while m % p == 0:
        m //= p
        e += 1
    if m != 1:
        return None
    return p, e


# ---------------------------------------------------------------------------
# Polynomial helpers over an arbitrary coefficient field.  A "field" here is
# anything exposing q, add(a, b), sub(a, b), mul(a, b), inv(a) on integer
# elements 0..q-1, with 0 and 1 the additive and multiplicative identities.
# ---------------------------------------------------------------------------

def _poly_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul(F, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if bj:
                out[i + j] = F.add(out[i + j], F.mul(ai, bj))
    return _poly_trim(out)


def _poly_mod(F, a, m):
    """Remainder of a modulo the monic polynomial m."""
    r = list(a)
    dm = len(m) - 1
    while len(r) > dm:
        lead = r[-1]
        if lead:
            shift = len(r) - 1 - dm
            for i in range(dm):
                if m[i]:
                    r[shift + i] = F.sub(r[shift + i], F.mul(lead, m[i]))
        r.pop()
    return _poly_trim(r)


def _monic_polys(q: int, deg: int):
    """Yield monic coefficient tuples (c0, ..., c_{deg-1}, 1) in lex order."""
    for tail in product(range(q), repeat=deg):
        yield tail + (1,)


def _poly_is_irreducible(F, m):
    """Trial division by every monic polynomial of degree 1..deg//2."""
    deg = len(m) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for g in _monic_polys(F.q, d):
            if not _poly_mod(F, m, g):
                return False
    return True


def _least_irreducible(F, deg):
    for m in _monic_polys(F.q, deg):
        if _poly_is_irreducible(F, m):
            return m
    raise AssertionError(f"no irreducible of degree {deg} over F_{F.q}")


class _PrimeOps:
    """Bare mod-p arithmetic used while bootstrapping an extension field."""

    def __init__(self, p):
        self.q = p
        self._p = p

    def add(self, a, b):
        return (a + b) % self._p

    def sub(self, a, b):
        return (a - b) % self._p

    def mul(self, a, b):
        return (a * b) % self._p

    def inv(self, a):
        if a % self._p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self._p - 2, self._p)


class FqField:
    """Arithmetic context for F_q; all tables fixed at construction.

    Attributes
    ----------
    q, p, e : order, characteristic, extension degree over the prime field.
    modulus : coefficient tuple of the defining polynomial, constant first.
    exp_table, log_table : powers of the chosen generator and their inverse
        lookup (log_table[0] is None).
    """

    def __init__(self, q: int):
        pe = _prime_power(q)
        if pe is None:
            raise NotPrimePower(f"q={q} is not a prime power")
        if q > MAX_ORDER:
            raise Unsupported(f"q={q} exceeds the supported maximum {MAX_ORDER}")
        self.q = q
        self.p, self.e = pe
        if self.e == 1:
            self.modulus = (0, 1)
        else:
            self.modulus = tuple(_least_irreducible(_PrimeOps(self.p), self.e))
        self._build_tables()
        self._find_generator()

    # -- element <-> coefficient vector over F_p ---------------------------
    def digits(self, a: int):
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return out

    def from_digits(self, ds):
        a = 0
        for d in reversed(list(ds)):
            a = a * self.p + (d % self.p)
        return a

    def _build_tables(self):
        q, p = self.q, self.p
        if self.e == 1:
            self._add = [[(a + b) % p for b in range(q)] for a in range(q)]
            self._mul = [[(a * b) % p for b in range(q)] for a in range(q)]
        else:
            prime = _PrimeOps(p)
            digs = [self.digits(a) for a in range(q)]
            self._add = [
                [self.from_digits((x + y) % p for x, y in zip(digs[a], digs[b]))
                 for b in range(q)]
                for a in range(q)
            ]
            mod = list(self.modulus)
            self._mul = []
            for a in range(q):
                row = []
                pa = _poly_trim(digs[a])
                for b in range(q):
                    prod_ = _poly_mul(prime, pa, _poly_trim(digs[b]))
                    row.append(self.from_digits(_poly_mod(prime, prod_, mod) + [0] * self.e))
                self._mul.append(row)
        self._neg = [self._add[a].index(0) for a in range(q)]
        self._inv = [None] * q
        for a in range(1, q):
            self._inv[a] = self._mul[a].index(1)

    def _find_generator(self):
        q = self.q
        for g in range(1, q):
            order, x = 1, g
            while x != 1:
                x = self._mul[x][g]
                order += 1
            if order == q - 1:
                break
        else:  # q == 2: g = 1 has order 1 == q - 1
            g = 1
        self.generator = g
        self.exp_table = []
        x = 1
        for _ in range(q - 1):
            self.exp_table.append(x)
            x = self._mul[x][g]
        self.log_table = [None] * q
        for i, v in enumerate(self.exp_table):
            self.log_table[v] = i

    # -- arithmetic ---------------------------------------------------------
    def add(self, a, b):
        return self._add[a][b]

    def sub(self, a, b):
        return self._add[a][self._neg[b]]

    def neg(self, a):
        return self._neg[a]

    def mul(self, a, b):
        return self._mul[a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._inv[a]

    def div(self, a, b):
        return self._mul[a][self.inv(b)]

    def pow(self, a, k: int):
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("inverse of zero")
            return 1 if k == 0 else 0
        k %= self.q - 1 if self.q > 2 else 1
        if self.q == 2:
            return a
        return self.exp_table[(self.log_table[a] * k) % (self.q - 1)]

    def elements(self):
        return range(self.q)

    def __repr__(self):
        return f"FqField(q={self.q})"

    def __eq__(self, other):
        return isinstance(other, FqField) and other.q == self.q

    def __hash__(self):
        return hash(("FqField", self.q))


def field_new(q: int) -> FqField:
    """Build the arithmetic context for F_q, q a prime power in [2, 16]."""
    return FqField(q)


class ExtField:
    """F_{q**degree} over a base FqField.

    Elements are integers in [0, q**degree) read as base-q digit vectors;
    digit i is the coefficient of t**i in the power basis, which realises
    the vector-space isomorphism with F_q**degree.
    """

    def __init__(self, base: FqField, degree: int):
        if degree < 1:
            raise BadParams("extension degree must be >= 1")
        self.base = base
        self.degree = degree
        self.order = base.q ** degree
        if degree == 1:
            self.modulus = (0, 1)
        else:
            self.modulus = tuple(_least_irreducible(base, degree))

    # -- element <-> coefficient vector over F_q ----------------------------
    def coeffs(self, a: int):
        q, out = self.base.q, []
        for _ in range(self.degree):
            out.append(a % q)
            a //= q
        return tuple(out)

    def element(self, cs):
        a = 0
        for c in reversed(list(cs)):
            a = a * self.base.q + c
        return a

    def add(self, a, b):
        F = self.base
        return self.element(F.add(x, y) for x, y in zip(self.coeffs(a), self.coeffs(b)))

    def sub(self, a, b):
        F = self.base
        return self.element(F.sub(x, y) for x, y in zip(self.coeffs(a), self.coeffs(b)))

    def mul(self, a, b):
        F = self.base
        prod_ = _poly_mul(F, _poly_trim(self.coeffs(a)), _poly_trim(self.coeffs(b)))
        red = _poly_mod(F, prod_, list(self.modulus))
        return self.element(red + [0] * (self.degree - len(red)))

    def pow(self, a, k: int):
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("inverse of zero")
            return 1 if k == 0 else 0
        if k < 0:
            a, k = self.inv(a), -k
        out, x = 1, a
        while k:
            if k & 1:
                out = self.mul(out, x)
            x = self.mul(x, x)
            k >>= 1
        return out

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.pow(a, self.order - 2)

    def elements(self):
        return range(self.order)

    def mul_map_columns(self, alpha: int):
        """Columns of the F_q-linear map x -> alpha*x in the power basis.

        Column j is coeffs(alpha * t**j); the first n of these columns give
        the matrix of u -> alpha * (u_1 + u_2 t + ... + u_n t**(n-1)).
        """
        cols, tj = [], 1
        t = self.element([0, 1] + [0] * (self.degree - 2)) if self.degree > 1 else None
        for _ in range(self.degree):
            cols.append(self.coeffs(self.mul(alpha, tj)))
            if self.degree > 1:
                tj = self.mul(tj, t)
        return cols

    def __repr__(self):
        return f"ExtField(q={self.base.q}, degree={self.degree})"


def ext_field(base: FqField, degree: int) -> ExtField:
    """Build F_{q**degree} with the power-basis identification to F_q**degree."""
    return ExtField(base, degree)
