"""Dense exact matrices over a valued field F and normal forms over O.

Matrices are lists of rows.  Lattice bases are stored by columns, so
``basis[i][j]`` is coordinate i of basis vector j.
"""

from __future__ import annotations

from .scalars import ValuedField


class SingularMatrixError(ValueError):
    pass


def identity(n: int, field: ValuedField) -> list[list]:
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def transpose(a):
    return [list(col) for col in zip(*a)]


def columns(a) -> list[list]:
    return transpose(a)


def from_columns(cols) -> list[list]:
    return transpose(cols)


def matmul(a, b):
    bt = list(zip(*b))
    out = []
    for row in a:
        out_row = []
        for col in bt:
            total = 0
            for x, y in zip(row, col):
                if x and y:
                    total = total + x * y
            out_row.append(total)
        out.append(out_row)
    return out


def matvec(a, v):
    out = []
    for row in a:
        total = 0
        for x, y in zip(row, v):
            if x and y:
                total = total + x * y
        out.append(total)
    return out


def diag(entries, field: ValuedField):
    n = len(entries)
    return [[entries[i] if i == j else field.zero for j in range(n)] for i in range(n)]


def inverse(a, field: ValuedField):
    """Gauss-Jordan inverse; raises SingularMatrixError."""
    n = len(a)
    aug = [list(row) + [field.one if i == j else field.zero for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c]), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                factor = aug[r][c]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def determinant(a, field: ValuedField):
    n = len(a)
    m = [list(row) for row in a]
    det = field.one
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return field.zero
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            if m[r][c]:
                factor = m[r][c] * inv
                m[r] = [x - factor * y for x, y in zip(m[r], m[c])]
    return det


def min_entry_valuation(a, field: ValuedField):
    return min((field.valuation(x) for row in a for x in row if x), default=float("inf"))


def is_integral_matrix(a, field: ValuedField) -> bool:
    return all(field.is_integral(x) for row in a for x in row if x)


def hermite_columns(cols: list[list], field: ValuedField) -> tuple[list[list], list[int]]:
    """Lower-triangular column Hermite form of the O-span of ``cols``.

    Returns the r basis columns and the pivot exponents a_i: column i has
    pi^(a_i) in row i, zeros above, and each entry left of a pivot is the
    canonical representative modulo pi^(a_i) O.  The O-span must have full
    rank r.
    """
    cols = [list(c) for c in cols]
    r = len(cols[0]) if cols else 0
    exps = []
    for i in range(r):
        best, best_v = None, None
        for j in range(i, len(cols)):
            x = cols[j][i]
            if x:
                v = field.valuation(x)
                if best is None or v < best_v:
                    best, best_v = j, v
        if best is None:
            raise SingularMatrixError("basis does not span F^r")
        cols[i], cols[best] = cols[best], cols[i]
        scale = field.pi_power(best_v) / cols[i][i]
        piv_col = [x * scale for x in cols[i]]
        piv_col[i] = field.pi_power(best_v)
        cols[i] = piv_col
        inv_piv = field.pi_power(-best_v)
        for j in range(i + 1, len(cols)):
            x = cols[j][i]
            if x:
                c = x * inv_piv
                cols[j] = [a - c * b if b else a for a, b in zip(cols[j], piv_col)]
                cols[j][i] = field.zero
        exps.append(best_v)
    cols = cols[:r]
    for i in range(1, r):
        piv = field.pi_power(-exps[i])
        for j in range(i):
            x = cols[j][i]
            if not x:
                continue
            rep = field.reduce(x, exps[i])
            if rep == x:
                continue
            q = (x - rep) * piv
            cols[j] = [a - q * b if b else a for a, b in zip(cols[j], cols[i])]
            cols[j][i] = rep
    return cols, exps


def smith_form(k, field: ValuedField):
    """P, exponents, Q with P k Q = diag(pi^a_1, ..., pi^a_n), P and Q in GL_n(O).

    ``k`` must be square and nonsingular; exponents come out non-decreasing.
    """
    n = len(k)
    a = [list(row) for row in k]
    p = identity(n, field)
    q = identity(n, field)
    exps = []
    for s in range(n):
        best, best_v = None, None
        for i in range(s, n):
            for j in range(s, n):
                if a[i][j]:
                    v = field.valuation(a[i][j])
                    if best is None or v < best_v:
                        best, best_v = (i, j), v
        if best is None:
            raise SingularMatrixError("matrix is singular")
        i, j = best
        a[s], a[i] = a[i], a[s]
        p[s], p[i] = p[i], p[s]
        for row in a:
            row[s], row[j] = row[j], row[s]
        for row in q:
            row[s], row[j] = row[j], row[s]
        unit = field.pi_power(best_v) / a[s][s]
        a[s] = [x * unit for x in a[s]]
        p[s] = [x * unit for x in p[s]]
        inv_piv = field.pi_power(-best_v)
        for r in range(s + 1, n):
            if a[r][s]:
                c = a[r][s] * inv_piv
                a[r] = [x - c * y for x, y in zip(a[r], a[s])]
                p[r] = [x - c * y for x, y in zip(p[r], p[s])]
        for c_idx in range(s + 1, n):
            if a[s][c_idx]:
                c = a[s][c_idx] * inv_piv
                for row in a:
                    row[c_idx] = row[c_idx] - c * row[s]
                for row in q:
                    row[c_idx] = row[c_idx] - c * row[s]
        exps.append(best_v)
    return p, exps, q
