"""Dense exact linear algebra over Fraction / RatFun entries."""

from __future__ import annotations

from fractions import Fraction

from .exact_arith import as_scalar

Matrix = list  # list of rows


def zeros(r: int, c: int) -> Matrix:
    return [[Fraction(0)] * c for _ in range(r)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def matmul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = zeros(n, m)
    for i in range(n):
        row = a[i]
        orow = out[i]
        for t in range(k):
            v = row[t]
            if v == 0:
                continue
            brow = b[t]
            for j in range(m):
                w = brow[j]
                if w != 0:
                    orow[j] = orow[j] + v * w
    return out


def matvec(a: Matrix, v: list) -> list:
    return [sum((a[i][j] * v[j] for j in range(len(v)) if a[i][j] != 0 and v[j] != 0),
                Fraction(0)) for i in range(len(a))]


def matadd(a: Matrix, b: Matrix, scale=1) -> Matrix:
    return [[x + scale * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def is_zero_matrix(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns; input is not modified."""
    m = [[as_scalar(x) for x in r] for r in a]
    rows = len(m)
    cols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a: Matrix) -> int:
    return len(rref(a)[1]) if a else 0


def solve_affine(a: Matrix, b: list) -> tuple[list, list[list]] | None:
    """All solutions of ``a x = b`` as (particular, kernel basis); None if inconsistent."""
    n = len(a[0]) if a else 0
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    red, pivots = rref(aug)
    if n in pivots:
        return None
    part = [Fraction(0)] * n
    for r, c in enumerate(pivots):
        part[c] = red[r][n]
    free = [c for c in range(n) if c not in pivots]
    kernel = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -red[r][f]
        kernel.append(v)
    return part, kernel


def det(a: Matrix):
    m = [[as_scalar(x) for x in r] for r in a]
    n = len(m)
    out = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            out = -out
        p = m[c][c]
        out = out * p
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / p
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return out


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(row) + e for row, e in zip(a, identity(n))]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def trace(a: Matrix):
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


def charpoly(a: Matrix) -> list:
    """Coefficients of det(tI - a), highest degree first (Faddeev-LeVerrier)."""
    n = len(a)
    coeffs = [Fraction(1)]
    mk = zeros(n, n)
    c_prev = Fraction(1)
    for k in range(1, n + 1):
        mk = matmul(a, mk)
        for i in range(n):
            mk[i][i] = mk[i][i] + c_prev
        c_prev = -trace(matmul(a, mk)) / k
        coeffs.append(c_prev)
    return coeffs
