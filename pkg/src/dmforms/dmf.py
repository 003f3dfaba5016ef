"""The graded algebra generated by g1, g2, g3 with its derivation and Hecke action.

Elements are exact rational polynomials in three generators of weight 2, 4, 6.
The depth of a monomial is its g1-degree; weight-m elements of depth <= n form
the finite-dimensional space whose monomial basis drives Hecke reconstruction.

q-expansion substitutes g1 -> E2, g2 -> 12*E4, g3 -> 8*E6 (the rational frame
in which the derivation below corresponds to 12*q*d/dq and the Hecke action
commutes with it); numeric evaluation then attaches u^(weight/2), u = 2*pi*i/12.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .config import DEFAULTS
from .errors import (
    Inhomogeneous,
    LowImaginaryPart,
    ReconstructionFailed,
    Singular,
    Inconsistent,
)
from .eisenstein import GEN_MULTIPLIER, U, eisenstein_series, nome
from .linsolve import solve_linear_exact
from .qseries import QSeries

_Rat = (int, Fraction)

#: weights of (g1, g2, g3)
GEN_WEIGHTS = (2, 4, 6)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class DmfElement:
    """Exact polynomial in g1, g2, g3; keys are exponent triples (a, b, c)."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        clean: dict[tuple[int, int, int], Fraction] = {}
        if terms:
            for exps, c in terms.items():
                c = _as_fraction(c)
                if c != 0:
                    a, b, cc = (int(e) for e in exps)
                    if min(a, b, cc) < 0:
                        raise ValueError("negative exponents are not allowed")
                    clean[(a, b, cc)] = c
        self.terms = clean

    # ---------------------------------------------------------------- constructors

    @classmethod
    def zero(cls) -> "DmfElement":
        return cls()

    @classmethod
    def one(cls) -> "DmfElement":
        return cls({(0, 0, 0): 1})

    @classmethod
    def constant(cls, c) -> "DmfElement":
        return cls({(0, 0, 0): c})

    @classmethod
    def gen(cls, i: int) -> "DmfElement":
        """The i-th generator, i in {1, 2, 3}."""
        exps = [0, 0, 0]
        exps[i - 1] = 1
        return cls({tuple(exps): 1})

    @classmethod
    def monomial(cls, c, exps) -> "DmfElement":
        return cls({tuple(exps): c})

    # ---------------------------------------------------------------- grading

    def is_zero(self) -> bool:
        return not self.terms

    @staticmethod
    def monomial_weight(exps: tuple[int, int, int]) -> int:
        return sum(w * e for w, e in zip(GEN_WEIGHTS, exps))

    def weight(self) -> int:
        """Common weight of all terms; Inhomogeneous if weights are mixed."""
        weights = {self.monomial_weight(e) for e in self.terms}
        if not weights:
            return 0
        if len(weights) > 1:
            raise Inhomogeneous(f"mixed weights {sorted(weights)}")
        return weights.pop()

    def depth(self) -> int:
        """Exact g1-degree (0 for the zero element)."""
        return max((e[0] for e in self.terms), default=0)

    def grade(self) -> tuple[int, int]:
        return self.weight(), self.depth()

    def is_homogeneous(self) -> bool:
        try:
            self.weight()
        except Inhomogeneous:
            return False
        return True

    def homogeneous_parts(self) -> dict[int, "DmfElement"]:
        parts: dict[int, dict] = {}
        for exps, c in self.terms.items():
            parts.setdefault(self.monomial_weight(exps), {})[exps] = c
        return {w: DmfElement(t) for w, t in sorted(parts.items())}

    # ---------------------------------------------------------------- arithmetic

    def __neg__(self) -> "DmfElement":
        return DmfElement({e: -c for e, c in self.terms.items()})

    def __add__(self, other) -> "DmfElement":
        if isinstance(other, _Rat):
            other = DmfElement.constant(other)
        if not isinstance(other, DmfElement):
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return DmfElement(out)

    __radd__ = __add__

    def __sub__(self, other) -> "DmfElement":
        if isinstance(other, _Rat):
            other = DmfElement.constant(other)
        if not isinstance(other, DmfElement):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "DmfElement":
        return (-self) + other

    def __mul__(self, other) -> "DmfElement":
        if isinstance(other, _Rat):
            c = _as_fraction(other)
            return DmfElement({e: c * v for e, v in self.terms.items()})
        if not isinstance(other, DmfElement):
            return NotImplemented
        out: dict[tuple[int, int, int], Fraction] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                key = (ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2])
                out[key] = out.get(key, Fraction(0)) + ca * cb
        return DmfElement(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "DmfElement":
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = DmfElement.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, _Rat):
            other = DmfElement.constant(other)
        if not isinstance(other, DmfElement):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    # ---------------------------------------------------------------- rendering

    def _sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0], reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = ("g1", "g2", "g3")
        pieces = []
        for exps, c in self._sorted_terms():
            factors = []
            for name, e in zip(names, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mag = abs(c)
            if factors:
                head = "" if mag == 1 else f"{mag} "
                body = head + " ".join(factors)
            else:
                body = str(mag)
            pieces.append(("-" if c < 0 else "+", body))
        sign0, body0 = pieces[0]
        text = ("-" if sign0 == "-" else "") + body0
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"DmfElement({self})"


G1 = DmfElement.gen(1)
G2 = DmfElement.gen(2)
G3 = DmfElement.gen(3)

#: images of the generators under the weight-raising derivation
DERIVATION_IMAGES = {
    1: G1 * G1 - G2 * Fraction(1, 12),
    2: 4 * (G1 * G2) - 6 * G3,
    3: 6 * (G1 * G3) - G2 * G2 * Fraction(1, 3),
}


def derivation(f: DmfElement) -> DmfElement:
    """The weight-2-raising derivation determined by its generator images."""
    out = DmfElement.zero()
    for exps, c in f.terms.items():
        for i in (1, 2, 3):
            e = exps[i - 1]
            if e == 0:
                continue
            lowered = list(exps)
            lowered[i - 1] = e - 1
            out = out + DmfElement.monomial(c * e, lowered) * DERIVATION_IMAGES[i]
    return out


#: spec-facing aliases
def diff_op(f: DmfElement) -> DmfElement:
    """Alias for :func:`derivation`."""
    return derivation(f)


def grade(f: DmfElement) -> tuple[int, int]:
    """(weight, depth) of a homogeneous element; Inhomogeneous on mixed weight."""
    return f.grade()


def associated_functions(f: DmfElement, n: int | None = None) -> list[DmfElement]:
    """The full list [f_0, ..., f_n]; f_0 = f."""
    if n is None:
        n = f.depth()
    return [associated_function(f, i, n) for i in range(n + 1)]


def partial_g1(f: DmfElement) -> DmfElement:
    """Formal partial derivative with respect to g1."""
    out = {}
    for (a, b, c), v in f.terms.items():
        if a:
            key = (a - 1, b, c)
            out[key] = out.get(key, Fraction(0)) + v * a
    return DmfElement(out)


def associated_function(f: DmfElement, i: int, n: int | None = None) -> DmfElement:
    """The i-th associated component f_i = (1 / (i! * C(n, i))) * d^i f / d g1^i.

    ``n`` defaults to the exact depth of f; f_0 = f, and f_i = 0 for i > n.
    """
    if n is None:
        n = f.depth()
    if i < 0:
        raise ValueError("index must be nonnegative")
    if i > n:
        return DmfElement.zero()
    g = f
    for _ in range(i):
        g = partial_g1(g)
    return g * Fraction(1, math.factorial(i) * math.comb(n, i))


# -------------------------------------------------------------------- expansion

def to_qseries(f: DmfElement, order: int = DEFAULTS.series_order) -> QSeries:
    """q-expansion under g1 -> E2, g2 -> 12*E4, g3 -> 8*E6, exact to ``order``."""
    series = {k: eisenstein_series(k, order) for k in (1, 2, 3)}
    powers: dict[tuple[int, int], QSeries] = {}

    def spow(k: int, e: int) -> QSeries:
        key = (k, e)
        if key not in powers:
            powers[key] = series[k] ** e
        return powers[key]

    total = QSeries.zero(order)
    for (a, b, c), coeff in f.terms.items():
        scale = coeff * GEN_MULTIPLIER[2] ** b * GEN_MULTIPLIER[3] ** c
        term = QSeries.constant(scale, order)
        if a:
            term = term * spow(1, a)
        if b:
            term = term * spow(2, b)
        if c:
            term = term * spow(3, c)
        total = total + term
    return total.truncate(order)


def numeric_eval(f: DmfElement, z: complex, order: int = DEFAULTS.series_order) -> complex:
    """Value of f at z in the upper half plane, frame factors included."""
    q = nome(z)
    total = 0j
    for w, part in f.homogeneous_parts().items():
        total += U ** (w // 2) * to_qseries(part, order).evaluate(q)
    return total


def slash_eval(
    f: DmfElement,
    a_matrix,
    z: complex,
    order: int = DEFAULTS.series_order,
) -> complex:
    """Numeric value of the weight-m double-slash action of a GL2+(R) matrix at z.

    Combines the associated components at the moved point with binomial weights
    and powers of the inverse-matrix lower-left entry.
    """
    (a, b), (c, d) = a_matrix
    det_a = a * d - b * c
    if not det_a > 0:
        raise ValueError("matrix must have positive determinant")
    m, n = f.grade()
    jz = c * z + d
    if jz == 0:
        raise ZeroDivisionError("matrix denominator vanishes at z")
    az = (a * z + b) / jz
    if z.imag < DEFAULTS.im_floor or az.imag < DEFAULTS.im_floor:
        raise LowImaginaryPart(
            f"Im(z) = {z.imag:.4f} or Im(Az) = {az.imag:.4f} below floor {DEFAULTS.im_floor}"
        )
    c_inv = -c / det_a  # lower-left entry of the true inverse matrix
    total = 0j
    for i in range(n + 1):
        fi = associated_function(f, i, n)
        if fi.is_zero():
            continue
        total += (
            math.comb(n, i)
            * c_inv ** i
            * jz ** (i - m)
            * numeric_eval(fi, az, order)
        )
    return det_a ** (m - n - 1) * total


# -------------------------------------------------------------------- Hecke

def basis(n: int, m: int) -> list[tuple[int, int, int]]:
    """Monomial basis of the weight-m, depth-<=-n space, sorted descending."""
    if m < 0 or n < 0:
        return []
    out = []
    for b in range(m // 4 + 1):
        for c in range((m - 4 * b) // 6 + 1):
            rem = m - 4 * b - 6 * c
            if rem % 2 == 0 and rem // 2 <= n:
                out.append((rem // 2, b, c))
    return sorted(out, reverse=True)


def dimension(n: int, m: int) -> int:
    return len(basis(n, m))


def basis_and_dimension(n: int, m: int) -> tuple[list[tuple[int, int, int]], int]:
    mono = basis(n, m)
    return mono, len(mono)


def hecke_coefficient(series: QSeries, j: int, p: int, m: int, n: int) -> Fraction:
    """Coefficient of q^j in the p-th Hecke image of a (weight m, depth n) expansion."""
    total = Fraction(0)
    for d in range(1, p + 1):
        if p % d:
            continue
        step = p // d
        if j % step:
            continue
        total += Fraction(d) ** (1 - m) * series.coeff(j * d * d // p)
    return Fraction(p) ** (m - n - 1) * total


def hecke_image_series(
    series: QSeries, p: int, m: int, n: int, order: int
) -> QSeries:
    """The p-th Hecke image as a q-series, exact to ``order``."""
    coeffs = [hecke_coefficient(series, j, p, m, n) for j in range(order)]
    return QSeries(0, coeffs, order)


def hecke(
    f: DmfElement,
    p: int,
    n: int | None = None,
    surplus: int = DEFAULTS.hecke_surplus,
) -> DmfElement:
    """The p-th Hecke operator at ambient depth n (default: exact depth of f).

    The image is reconstructed exactly from its q-expansion against the
    monomial basis of the ambient space; ``surplus`` extra coefficient rows
    must agree or ReconstructionFailed is raised.
    """
    if p < 1:
        raise ValueError("p must be a positive integer")
    if f.is_zero():
        return DmfElement.zero()
    m = f.weight()
    exact_n = f.depth()
    if n is None:
        n = exact_n
    if n < exact_n:
        raise ValueError(f"ambient depth {n} is below the exact depth {exact_n}")
    mono = basis(n, m)
    dim = len(mono)
    rows = dim + surplus
    src_order = p * rows + 1
    fs = to_qseries(f, src_order)
    target = [hecke_coefficient(fs, j, p, m, n) for j in range(rows)]
    columns = [to_qseries(DmfElement.monomial(1, e), rows) for e in mono]
    matrix = [[col.coeff(j) for col in columns] for j in range(rows)]
    try:
        solution = solve_linear_exact(matrix, target)
    except (Singular, Inconsistent) as exc:
        raise ReconstructionFailed(
            f"Hecke image of weight {m} depth {n} does not match the expected space: {exc}"
        ) from exc
    return DmfElement({e: c for e, c in zip(mono, solution)})


def hecke_composition_check(p: int, q: int, f: DmfElement, n: int | None = None) -> dict:
    """Verify T_p(T_q f) against the depth-aware composition law, exactly.

    The law is T_p∘T_q = sum over d | gcd(p, q) of d^(m-2n-1) * T_(pq/d^2), all
    operators at the same ambient depth n.  The d-exponent reduces to the
    classically quoted m-n-1 only at depth n = 0; the depth-aware exponent is
    the one the frozen eigenvalues force (e.g. on g1: 9/4 = 7/4 + 2^-1).
    """
    m = f.weight()
    if n is None:
        n = f.depth()
    lhs = hecke(hecke(f, q, n=n), p, n=n)
    g = math.gcd(p, q)
    rhs = DmfElement.zero()
    for d in range(1, g + 1):
        if g % d:
            continue
        rhs = rhs + Fraction(d) ** (m - 2 * n - 1) * hecke(f, p * q // (d * d), n=n)
    passed = lhs == rhs
    return {
        "passed": passed,
        "p": p,
        "q": q,
        "weight": m,
        "depth": n,
        "exponent_rule": "m - 2n - 1",
        "lhs": str(lhs),
        "rhs": str(rhs),
    }


def random_element(rng, n: int, m: int, coeff_bound: int = 9) -> DmfElement:
    """Random weight-m element of depth <= n with small nonzero rational coefficients."""
    terms = {}
    for exps in basis(n, m):
        num = rng.randint(-coeff_bound, coeff_bound)
        den = rng.randint(1, 4)
        terms[exps] = Fraction(num, den)
    return DmfElement(terms)
