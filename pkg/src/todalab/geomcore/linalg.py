"""Small dense linear algebra over any scalar type (rationals, duals, floats).

Matrices are lists of lists.  Nothing here assumes an ordering on scalars;
pivots are chosen as the first entry whose underlying value is nonzero.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Any, Sequence

from .scalars import is_null, is_zero

Mat = list[list[Any]]


class SingularMatrix(ZeroDivisionError):
    pass


def zeros(n: int, m: int | None = None, zero: Any = 0) -> Mat:
    return [[zero] * (n if m is None else m) for _ in range(n)]


def identity(n: int) -> Mat:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(A: Mat, B: Mat) -> Mat:
    m = len(B[0]) if B else 0
    out = []
    for row in A:
        r = []
        for j in range(m):
            s = 0
            for a, brow in zip(row, B):
                b = brow[j]
                if not (is_null(a) or is_null(b)):
                    s = s + a * b
            r.append(s)
        out.append(r)
    return out


def matvec(A: Mat, v: Sequence[Any]) -> list:
    out = []
    for row in A:
        s = 0
        for a, x in zip(row, v):
            if not (is_null(a) or is_null(x)):
                s = s + a * x
        out.append(s)
    return out


def transpose(A: Mat) -> Mat:
    return [list(r) for r in zip(*A)] if A else []


def trace(A: Mat) -> Any:
    s = 0
    for i in range(len(A)):
        s = s + A[i][i]
    return s


def matpow(A: Mat, k: int) -> Mat:
    out = identity(len(A))
    for _ in range(k):
        out = matmul(out, A)
    return out


def solve(A: Mat, B: Mat) -> Mat:
    """Gauss-Jordan solve of A X = B."""
    n = len(A)
    M = [list(A[i]) + list(B[i]) for i in range(n)]
    w = len(M[0]) if n else 0
    for c in range(n):
        p = next((r for r in range(c, n) if not is_zero(M[r][c])), None)
        if p is None:
            raise SingularMatrix("singular matrix")
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for r in range(n):
            if r != c and not is_null(M[r][c]):
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:w] for row in M]


def inverse(A: Mat) -> Mat:
    return solve(A, identity(len(A)))


@lru_cache(maxsize=None)
def _subsets(n: int, k: int):
    from itertools import combinations

    return list(combinations(range(n), k))


def det(A: Mat) -> Any:
    """Cofactor (Laplace) expansion with memoization over column subsets.

    Division-free, so it works for polynomial-valued entries too.
    """
    n = len(A)
    if n == 0:
        return 1
    # minors of the last (n-k) rows, keyed by the set of columns used
    prev = {(): 1}
    for k in range(n):
        row = A[n - 1 - k]
        cur = {}
        for cols in _subsets(n, k + 1):
            s = 0
            for pos, c in enumerate(cols):
                rest = cols[:pos] + cols[pos + 1 :]
                m = prev.get(rest)
                a = row[c]
                if m is None or is_null(a) or is_null(m):
                    continue
                t = a * m
                s = s - t if pos % 2 else s + t
            cur[cols] = s
        prev = cur
    return prev[tuple(range(n))]


# polynomials in an auxiliary variable (lists of coefficients, low degree first)

def padd(p: list, q: list) -> list:
    n = max(len(p), len(q))
    return [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]


def psub(p: list, q: list) -> list:
    return padd(p, [-c for c in q])


def pmul(p: list, q: list) -> list:
    if not p or not q:
        return []
    out: list[Any] = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if is_null(a):
            continue
        for j, b in enumerate(q):
            if not is_null(b):
                out[i + j] = out[i + j] + a * b
    return out


class _P:
    """Wrapper so :func:`det` can expand matrices of lambda-polynomials."""

    __slots__ = ("c",)

    def __init__(self, c):
        self.c = c

    def __mul__(self, o):
        return _P(pmul(self.c, o.c if isinstance(o, _P) else [o]))

    __rmul__ = __mul__

    def __add__(self, o):
        return _P(padd(self.c, o.c if isinstance(o, _P) else [o]))

    __radd__ = __add__

    def __sub__(self, o):
        return _P(psub(self.c, o.c if isinstance(o, _P) else [o]))

    def __rsub__(self, o):
        return _P(psub([o], self.c))

    def is_null(self):
        return all(is_null(a) for a in self.c)


def char_minor(X: Mat, k: int) -> list:
    """Coefficients (highest degree first) of det((X - lam I) with the first
    k rows and last k columns removed)."""
    n = len(X)
    rows = range(k, n)
    cols = range(0, n - k)
    M = [[_P([X[i][j], -1] if i == j else [X[i][j]]) for j in cols] for i in rows]
    d = det(M)
    coeffs = list(d.c if isinstance(d, _P) else [d])
    deg = n - 2 * k
    coeffs = (coeffs + [0] * (deg + 1))[: deg + 1]  # higher terms cancel identically
    return list(reversed(coeffs))
