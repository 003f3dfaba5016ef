"""Exact dense linear algebra over Fraction.

Gauss-Jordan elimination with exact pivoting.  Overdetermined systems are
accepted: surplus rows must reduce to 0 = 0, otherwise Inconsistent is
raised; rank deficiency raises Singular.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import Inconsistent, Singular


def solve_linear_exact(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Solve rows @ x = rhs exactly; requires full column rank."""
    m = len(rows)
    if m == 0:
        raise Singular("empty system")
    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows) or len(rhs) != m:
        raise ValueError("ragged system")
    aug = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(rows)]
    r = 0
    pivots: list[int] = []
    for col in range(ncols):
        p = next((i for i in range(r, m) if aug[i][col] != 0), None)
        if p is None:
            raise Singular(f"no pivot in column {col}")
        aug[r], aug[p] = aug[p], aug[r]
        pv = aug[r][col]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    if r < ncols:
        raise Singular(f"rank {r} < {ncols} unknowns")
    for i in range(r, m):
        if aug[i][ncols] != 0:
            raise Inconsistent(f"surplus row {i} reduces to 0 = {aug[i][ncols]}")
    x = [Fraction(0)] * ncols
    for k, col in enumerate(pivots):
        x[col] = aug[k][ncols]
    return x
