"""Sparse multivariate polynomials over exact rationals.

Terms are kept in a dict mapping exponent tuples to nonzero Fractions.  The
renderer is deterministic (graded lexicographic, descending, with the first
variable most significant) so printed matrices can be pinned byte-for-byte in
tests.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as _product

_Rat = (int, Fraction)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class MPoly:
    """Polynomial in ``len(names)`` variables with Fraction coefficients."""

    __slots__ = ("names", "terms")

    def __init__(self, names: tuple[str, ...], terms: dict | None = None):
        self.names = tuple(names)
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for exps, c in terms.items():
                c = _as_fraction(c)
                if c != 0:
                    exps = tuple(int(e) for e in exps)
                    if len(exps) != len(self.names):
                        raise ValueError("exponent tuple length does not match variables")
                    clean[exps] = c
        self.terms = clean

    # ---------------------------------------------------------------- constructors

    @classmethod
    def zero(cls, names) -> "MPoly":
        return cls(names, {})

    @classmethod
    def constant(cls, c, names) -> "MPoly":
        n = len(names)
        return cls(names, {(0,) * n: _as_fraction(c)})

    @classmethod
    def variable(cls, i: int, names) -> "MPoly":
        exps = [0] * len(names)
        exps[i] = 1
        return cls(names, {tuple(exps): Fraction(1)})

    @classmethod
    def gens(cls, names) -> tuple["MPoly", ...]:
        return tuple(cls.variable(i, names) for i in range(len(names)))

    # ---------------------------------------------------------------- inspection

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def coefficient(self, exps: tuple[int, ...]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    # ---------------------------------------------------------------- arithmetic

    def _check(self, other: "MPoly"):
        if self.names != other.names:
            raise ValueError("polynomials live in different variable sets")

    def __neg__(self) -> "MPoly":
        return MPoly(self.names, {e: -c for e, c in self.terms.items()})

    def __add__(self, other) -> "MPoly":
        if isinstance(other, _Rat):
            other = MPoly.constant(other, self.names)
        if not isinstance(other, MPoly):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return MPoly(self.names, out)

    __radd__ = __add__

    def __sub__(self, other) -> "MPoly":
        if isinstance(other, _Rat):
            other = MPoly.constant(other, self.names)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "MPoly":
        return (-self) + other

    def __mul__(self, other) -> "MPoly":
        if isinstance(other, _Rat):
            c = _as_fraction(other)
            return MPoly(self.names, {e: c * v for e, v in self.terms.items()})
        if not isinstance(other, MPoly):
            return NotImplemented
        self._check(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                out[key] = out.get(key, Fraction(0)) + ca * cb
        return MPoly(self.names, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MPoly":
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = MPoly.constant(1, self.names)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def partial(self, i: int) -> "MPoly":
        """Partial derivative with respect to the i-th variable."""
        out: dict[tuple[int, ...], Fraction] = {}
        for exps, c in self.terms.items():
            e = exps[i]
            if e:
                new = list(exps)
                new[i] = e - 1
                key = tuple(new)
                out[key] = out.get(key, Fraction(0)) + c * e
        return MPoly(self.names, out)

    def eval(self, values):
        """Evaluate at a point; exact if every value is a Fraction/int."""
        if len(values) != len(self.names):
            raise ValueError("wrong number of values")
        total = None
        for exps, c in self.terms.items():
            term = c
            for v, e in zip(values, exps):
                if e:
                    term = term * v ** e
            total = term if total is None else total + term
        if total is None:
            return Fraction(0)
        return total

    # ---------------------------------------------------------------- comparison

    def __eq__(self, other) -> bool:
        if isinstance(other, _Rat):
            other = MPoly.constant(other, self.names)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.names == other.names and self.terms == other.terms

    __hash__ = None

    # ---------------------------------------------------------------- rendering

    def _sorted_terms(self):
        # graded lex, descending: higher total degree first, then lexicographically
        # larger exponent tuple (earlier variables most significant)
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for exps, c in self._sorted_terms():
            factors = []
            for name, e in zip(self.names, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mag = abs(c)
            if factors:
                head = [] if mag == 1 else [str(mag)]
                body = "*".join(head + factors)
            else:
                body = str(mag)
            pieces.append(("-" if c < 0 else "+", body))
        sign0, body0 = pieces[0]
        text = ("-" if sign0 == "-" else "") + body0
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"MPoly({self})"


def det(matrix: list[list[MPoly]]) -> MPoly:
    """Exact determinant by Laplace expansion along the first row."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("determinant requires a square matrix")
    if n == 1:
        return matrix[0][0]
    if n == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    names = matrix[0][0].names
    total = MPoly.zero(names)
    for j in range(n):
        minor = [[row[k] for k in range(n) if k != j] for row in matrix[1:]]
        term = matrix[0][j] * det(minor)
        total = total + (term if j % 2 == 0 else -term)
    return total


def adjugate2(matrix: list[list[MPoly]]) -> list[list[MPoly]]:
    """Adjugate of a 2x2 polynomial matrix: adj(M)*M = det(M)*I."""
    (a, b), (c, d) = matrix
    return [[d, -b], [-c, a]]


def mat_mul(a, b):
    """Product of matrices of MPoly (or anything supporting * and +)."""
    n, k, m = len(a), len(b), len(b[0])
    assert all(len(row) == k for row in a), "inner dimensions do not match"
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = None
            for s in range(k):
                term = a[i][s] * b[s][j]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def mat_scale(m, factor):
    return [[factor * entry for entry in row] for row in m]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]
