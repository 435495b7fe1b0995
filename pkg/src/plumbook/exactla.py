"""Exact integer / rational linear algebra on small dense matrices.

Everything here works on plain lists of Python ints or fractions.Fraction,
so results are exact at any size.  Matrices are lists of row lists.
"""

from fractions import Fraction


class SingularMatrixError(ValueError):
    """Raised when an exact solve meets a singular matrix."""


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    """Matrix product of two list-of-lists matrices (int or Fraction)."""
    n, k, m = len(a), len(b), len(b[0])
    assert len(a[0]) == k
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)]
            for i in range(n)]


def mat_vec(a, v):
    return [sum(row[j] * v[j] for j in range(len(v))) for row in a]


def transpose(a):
    return [list(col) for col in zip(*a)]


def det_int(matrix):
    """Determinant of a square integer matrix, by fraction-free elimination.

    Bareiss' algorithm: all intermediate entries stay integers, so the
    result is exact for arbitrary-precision inputs.
    """
    n = len(matrix)
    if n == 0:
        return 1
    m = [list(map(int, row)) for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            # pivot search below; a fully zero column means det = 0
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def leading_principal_minors(matrix):
    """Determinants of the k-by-k upper-left submatrices, k = 1..n."""
    n = len(matrix)
    return [det_int([row[: k + 1] for row in matrix[: k + 1]])
            for k in range(n)]


def solve_exact(matrix, rhs):
    """Solve matrix @ x = rhs exactly over the rationals.

    rhs may be a vector or a matrix (list of columns given as a
    list-of-rows with multiple entries per row).  Raises
    SingularMatrixError when the matrix has no inverse.
    """
    n = len(matrix)
    vector_rhs = rhs and not isinstance(rhs[0], (list, tuple))
    cols = [[Fraction(x)] for x in rhs] if vector_rhs else \
        [[Fraction(x) for x in row] for row in rhs]
    a = [[Fraction(x) for x in row] + cols[i] for i, row in enumerate(matrix)]
    width = len(a[0])
    for k in range(n):
        pivot_row = next((i for i in range(k, n) if a[i][k] != 0), None)
        if pivot_row is None:
            raise SingularMatrixError("matrix is singular")
        if pivot_row != k:
            a[k], a[pivot_row] = a[pivot_row], a[k]
        pivot = a[k][k]
        a[k] = [x / pivot for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                factor = a[i][k]
                a[i] = [a[i][j] - factor * a[k][j] for j in range(width)]
    solution = [row[n:] for row in a]
    if vector_rhs:
        return [row[0] for row in solution]
    return solution


def smith_normal_form(matrix):
    """Smith normal form of an integer matrix.

    Returns (s, u, v) with u @ matrix @ v == s, u and v unimodular, and
    s diagonal with each diagonal entry dividing the next.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    s = [list(map(int, row)) for row in matrix]
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        # row dst += q * row src
        s[dst] = [x + q * y for x, y in zip(s[dst], s[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, q):
        for row in s:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    def negate_row(i):
        s[i] = [-x for x in s[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(rows, cols):
        # move a smallest-magnitude nonzero entry of the trailing block to (t, t)
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if s[i][j] != 0 and (pivot is None or abs(s[i][j]) < abs(s[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        if pivot[0] != t:
            swap_rows(t, pivot[0])
        if pivot[1] != t:
            swap_cols(t, pivot[1])

        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, rows):
                if s[i][t] != 0:
                    q = s[i][t] // s[t][t]
                    add_row(t, i, -q)
                    if s[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, cols):
                if s[t][j] != 0:
                    q = s[t][j] // s[t][t]
                    add_col(t, j, -q)
                    if s[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
        if s[t][t] < 0:
            negate_row(t)
        # enforce divisibility: fold any non-multiple into the pivot position
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if s[i][j] % s[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(offender, t, 1)
            continue
        t += 1
    return s, u, v


def invariant_factors(matrix):
    """Nonzero diagonal of the Smith normal form, in divisibility order."""
    s, _, _ = smith_normal_form(matrix)
    diag = [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0))]
    return [d for d in diag if d != 0]


def is_unimodular(matrix):
    return abs(det_int(matrix)) == 1


def rank_exact(matrix):
    """Rank over the rationals, by exact Gaussian elimination."""
    if not matrix:
        return 0
    a = [[Fraction(x) for x in row] for row in matrix]
    rows, cols = len(a), len(a[0])
    rank = 0
    col = 0
    while rank < rows and col < cols:
        pivot_row = next((i for i in range(rank, rows) if a[i][col] != 0), None)
        if pivot_row is None:
            col += 1
            continue
        a[rank], a[pivot_row] = a[pivot_row], a[rank]
        pivot = a[rank][col]
        for i in range(rank + 1, rows):
            if a[i][col] != 0:
                factor = a[i][col] / pivot
                a[i] = [a[i][j] - factor * a[rank][j] for j in range(cols)]
        rank += 1
        col += 1
    return rank
