"""Exact dense linear algebra over the scalar tower.

Matrices are lists of rows.  Entries may be :class:`Scalar` or
``Fraction``; when every entry is rational the work is done on plain
fractions, which is much faster, and the results are converted back.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .scalars import Scalar, ScalarError

Matrix = list


def _rational_view(rows) -> list | None:
    out = []
    for row in rows:
        new = []
        for x in row:
            if isinstance(x, Fraction):
                new.append(x)
            elif isinstance(x, int):
                new.append(Fraction(x))
            elif x.is_rational():
                new.append(x.to_fraction())
            else:
                return None
        out.append(new)
    return out


def _to_scalars(rows) -> list:
    return [[x if isinstance(x, Scalar) else Scalar(x) for x in row] for row in rows]


def zeros(n: int, m: int) -> Matrix:
    return [[Scalar(0) for _ in range(m)] for _ in range(n)]


def identity(n: int) -> Matrix:
    return [[Scalar(1 if i == j else 0) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [Scalar(0)] * cols
        for t in range(inner):
            x = row[t]
            if not x:
                continue
            brow = b[t]
            for j in range(cols):
                y = brow[j]
                if y:
                    acc[j] = acc[j] + x * y
        out.append(acc)
    return out


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def adjoint(a: Matrix) -> Matrix:
    return [[x.conjugate() for x in col] for col in zip(*a)] if a else []


def add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(a: Matrix, c) -> Matrix:
    return [[x * c for x in row] for row in a]


def is_zero_matrix(a: Matrix) -> bool:
    return all(not x for row in a for x in row)


def equal(a: Matrix, b: Matrix) -> bool:
    return len(a) == len(b) and all(list(ra) == list(rb) for ra, rb in zip(a, b))


def trace(a: Matrix):
    total = Scalar(0)
    for i in range(len(a)):
        total = total + a[i][i]
    return total


def _rref_generic(rows: list, ncols: int):
    """In-place reduced row echelon form; returns pivot columns."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r >= nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        pivot_row = rows[r]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    rows[i] = [x - f * y for x, y in zip(rows[i], pivot_row)]
        pivots.append(c)
        r += 1
    return pivots


def rref(a: Matrix, ncols: int | None = None):
    """Return ``(R, pivots)`` with ``R`` the reduced row echelon form of ``a``."""
    if ncols is None:
        ncols = len(a[0]) if a else 0
    fr = _rational_view(a)
    if fr is not None:
        piv = _rref_generic(fr, ncols)
        return _to_scalars(fr), piv
    rows = [[Scalar(x) for x in row] for row in a]
    piv = _rref_generic(rows, ncols)
    return rows, piv


def rank(a: Matrix) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a)[1])


def nullspace(a: Matrix, ncols: int | None = None) -> list:
    """Basis of ``{x : a x = 0}`` as a list of column vectors."""
    if ncols is None:
        ncols = len(a[0]) if a else 0
    if not a:
        return [[Scalar(1 if i == j else 0) for i in range(ncols)] for j in range(ncols)]
    r, piv = rref(a, ncols)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for f in free:
        v = [Scalar(0)] * ncols
        v[f] = Scalar(1)
        for row_idx, pc in enumerate(piv):
            v[pc] = -r[row_idx][f]
        basis.append(v)
    return basis


def solve(a: Matrix, b: Sequence) -> list | None:
    """One solution of ``a x = b`` or ``None`` when inconsistent."""
    n = len(a[0]) if a else 0
    aug = [list(row) + [b[i]] for i, row in enumerate(a)]
    r, piv = rref(aug, n + 1)
    if n in piv:
        return None
    x = [Scalar(0)] * n
    for row_idx, pc in enumerate(piv):
        x[pc] = r[row_idx][n]
    return x


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("only square matrices are invertible")
    aug = [list(row) + [Scalar(1 if i == j else 0) for j in range(n)] for i, row in enumerate(a)]
    r, piv = rref(aug, n)
    if piv != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in r]


def matpow(a: Matrix, k: int) -> Matrix:
    if k < 0:
        return matpow(inverse(a), -k)
    result = identity(len(a))
    base = a
    while k:
        if k & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        k >>= 1
    return result


def matvec(a: Matrix, v: Sequence) -> list:
    return [sum((x * y for x, y in zip(row, v) if x and y), Scalar(0)) for row in a]


def column_space_basis(vectors: list) -> list:
    """Independent subset spanning the same space (echelon rows)."""
    if not vectors:
        return []
    r, piv = rref(vectors)
    return r[:len(piv)]


def psd_status(g: Matrix) -> tuple[bool, str, dict | None]:
    """Decide positive semidefiniteness of a Hermitian matrix.

    Uses an exact LDL* factorisation.  Pivot signs are decided exactly for
    rational pivots and by a certified high precision evaluation otherwise.
    Returns ``(ok, mode, witness)`` where ``mode`` is ``"exact"`` or
    ``"certified-numeric"``.
    """
    n = len(g)
    work = [[Scalar(x) for x in row] for row in g]
    mode = "exact"
    for i in range(n):
        for j in range(n):
            if work[i][j] != work[j][i].conjugate():
                return False, mode, {"reason": "not hermitian", "entry": [i, j]}
    remaining = list(range(n))
    while remaining:
        k = remaining.pop(0)
        d = work[k][k]
        if not d:
            bad = next((j for j in remaining if work[k][j]), None)
            if bad is not None:
                return False, mode, {"reason": "zero pivot with nonzero row", "entry": [k, bad]}
            continue
        if not d.is_rational():
            mode = "certified-numeric"
        try:
            s = d.sign()
        except ScalarError as exc:
            return False, mode, {"reason": f"undecidable pivot sign: {exc}", "entry": [k, k]}
        if s < 0:
            return False, mode, {"reason": "negative pivot", "entry": [k, k], "pivot": str(d)}
        inv = d.inverse()
        for i in remaining:
            f = work[i][k]
            if not f:
                continue
            fi = f * inv
            for j in remaining:
                work[i][j] = work[i][j] - fi * work[k][j]
    return True, mode, None
