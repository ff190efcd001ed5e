"""Small exact linear algebra over field or truncated-ring elements.

Matrices are tuples of tuples (rows).  Elements must support +, -, *,
unary -, ==, .is_zero(), and .inv() where inversion is required.  The
characteristic polynomial uses the division-free Berkowitz algorithm so
it is valid over any commutative ring (in particular over W_n where
dividing by integers sharing a factor with p is not allowed).
"""

from __future__ import annotations

from .errors import ValidationError

Matrix = tuple


def freeze(rows) -> Matrix:
    return tuple(tuple(r) for r in rows)


def mat_mul(A, B) -> Matrix:
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        Ai = A[i]
        for j in range(m):
            acc = Ai[0] * B[0][j]
            for t in range(1, k):
                acc = acc + Ai[t] * B[t][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_vec(A, v) -> tuple:
    out = []
    for row in A:
        acc = row[0] * v[0]
        for t in range(1, len(v)):
            acc = acc + row[t] * v[t]
        out.append(acc)
    return tuple(out)


def mat_add(A, B) -> Matrix:
    return tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_sub(A, B) -> Matrix:
    return tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_neg(A) -> Matrix:
    return tuple(tuple(-a for a in row) for row in A)


def mat_scale(c, A) -> Matrix:
    return tuple(tuple(c * a for a in row) for row in A)


def transpose(A) -> Matrix:
    return tuple(zip(*A))


def mat_map(f, A) -> Matrix:
    return tuple(tuple(f(a) for a in row) for row in A)


def identity_matrix(n: int, one, zero) -> Matrix:
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def scalar_matrix(n: int, c, zero) -> Matrix:
    return tuple(tuple(c if i == j else zero for j in range(n)) for i in range(n))


def charpoly(A, one, zero) -> list:
    """Coefficients of det(T*I - A), highest degree first (Berkowitz)."""
    n = len(A)
    coeffs = [one]
    for k in range(1, n + 1):
        a = A[k - 1][k - 1]
        ts = [one, -a]
        if k >= 2:
            R = A[k - 1][: k - 1]
            w = [A[i][k - 1] for i in range(k - 1)]
            M = [row[: k - 1] for row in A[: k - 1]]
            for m in range(2, k + 1):
                if m > 2:
                    w = list(mat_vec(M, w))
                acc = R[0] * w[0]
                for t in range(1, k - 1):
                    acc = acc + R[t] * w[t]
                ts.append(-acc)
        new = []
        for i in range(k + 1):
            acc = zero
            for j in range(max(0, i - k), min(i, k - 1) + 1):
                acc = acc + ts[i - j] * coeffs[j]
            new.append(acc)
        coeffs = new
    return coeffs


def det(A, one, zero):
    """Determinant via the Berkowitz characteristic polynomial."""
    n = len(A)
    if n == 0:
        return one
    c0 = charpoly(A, one, zero)[-1]
    return c0 if n % 2 == 0 else -c0


# ---------------------------------------------------------------------------
# Gauss over a field (elements with .inv())


def _rref(rows):
    """Row-reduce in place; returns (rref_rows, pivot_columns)."""
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if not rows[i][c].is_zero():
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c].inv()
        rows[r] = [inv * x for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(A) -> int:
    return len(_rref(list(A))[1])


def nullspace(A, one, zero) -> list[tuple]:
    """Basis of the right kernel, one vector per free column, in column order."""
    if not A:
        return []
    ncols = len(A[0])
    rref, pivots = _rref(list(A))
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for r, pc in enumerate(pivots):
            v[pc] = -rref[r][fc]
        basis.append(tuple(v))
    return basis


def inverse(A, one, zero) -> Matrix:
    """Inverse over a field; raises ValidationError when singular."""
    n = len(A)
    aug = [list(A[i]) + [one if j == i else zero for j in range(n)] for i in range(n)]
    rref, pivots = _rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValidationError("matrix is singular")
    return tuple(tuple(rref[i][n:]) for i in range(n))


def is_invertible(A) -> bool:
    return rank(A) == len(A)


# ---------------------------------------------------------------------------
# Gauss over a truncated Witt ring (pivots must be units, val == 0)


def inverse_witt(A, ring) -> Matrix:
    n = len(A)
    one, zero = ring.one(), ring.zero()
    aug = [list(A[i]) + [one if j == i else zero for j in range(n)] for i in range(n)]
    for c in range(n):
        pivot = None
        for i in range(c, n):
            if aug[i][c].val() == 0:
                pivot = i
                break
        if pivot is None:
            raise ValidationError("matrix is not invertible over the truncated ring")
        aug[c], aug[pivot] = aug[pivot], aug[c]
        inv = aug[c][c].inv()
        aug[c] = [inv * x for x in aug[c]]
        for i in range(n):
            if i != c and not aug[i][c].is_zero():
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return tuple(tuple(aug[i][n:]) for i in range(n))


# ---------------------------------------------------------------------------
# column echelon form, for quotients V = F^h / span(columns)


def column_echelon(cols) -> dict[int, tuple]:
    """Echelonize a list of column vectors over a field.

    Returns {pivot_row: column}, where each column has a 1 at its pivot
    row and 0 at every other pivot row.
    """
    ech: dict[int, tuple] = {}
    for col in cols:
        v = reduce_mod_columns(col, ech)
        pivot = next((i for i, x in enumerate(v) if not x.is_zero()), None)
        if pivot is None:
            continue
        inv = v[pivot].inv()
        v = tuple(inv * x for x in v)
        for r in list(ech):
            c = ech[r]
            if not c[pivot].is_zero():
                f = c[pivot]
                ech[r] = tuple(x - f * y for x, y in zip(c, v))
        ech[pivot] = v
    return ech


def reduce_mod_columns(v, ech: dict[int, tuple]) -> tuple:
    v = list(v)
    for r, col in ech.items():
        if not v[r].is_zero():
            f = v[r]
            v = [x - f * y for x, y in zip(v, col)]
    return tuple(v)
