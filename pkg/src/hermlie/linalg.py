"""Exact linear algebra over ``fractions.Fraction`` for the small dimensions
(n <= 10) this package works with.  Matrices are tuples of row tuples;
vectors are tuples."""

from fractions import Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


class SingularMatrixError(ValueError):
    pass


def vec_zero(n):
    return (_ZERO,) * n


def basis_vector(n, k):
    """k is 1-based."""
    return tuple(_ONE if i == k - 1 else _ZERO for i in range(n))


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, u):
    return tuple(c * a for a in u)


def vec_neg(u):
    return tuple(-a for a in u)


def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), _ZERO)


def is_zero_vec(u):
    return all(a == 0 for a in u)


def identity(n):
    return tuple(tuple(_ONE if i == j else _ZERO for j in range(n)) for i in range(n))


def zeros(rows, cols):
    return tuple((_ZERO,) * cols for _ in range(rows))


def transpose(m):
    return tuple(zip(*m)) if m else ()


def mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_neg(a):
    return tuple(tuple(-x for x in row) for row in a)


def mat_scale(c, a):
    return tuple(tuple(c * x for x in row) for row in a)


def mat_mul(a, b):
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def mat_vec(a, v):
    return tuple(dot(row, v) for row in a)


def is_symmetric(m):
    n = len(m)
    return all(m[i][j] == m[j][i] for i in range(n) for j in range(i + 1, n))


def det(m):
    """Determinant by fraction-free-ish Gaussian elimination (exact)."""
    n = len(m)
    a = [list(row) for row in m]
    result = _ONE
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return _ZERO
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            result = -result
        result *= a[col][col]
        inv = _ONE / a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                factor = a[r][col] * inv
                for c in range(col, n):
                    a[r][c] -= factor * a[col][c]
    return result


def leading_principal_minors(m):
    return [det(tuple(row[: k + 1] for row in m[: k + 1])) for k in range(len(m))]


def inverse(m):
    n = len(m)
    a = [list(row) + list(identity(n)[i]) for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular")
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
        inv = _ONE / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def solve(m, rhs):
    """Solve the square system m x = rhs exactly."""
    return mat_vec(inverse(m), rhs)


class InconsistentSystemError(ValueError):
    pass


class UnderdeterminedSystemError(ValueError):
    pass


def solve_general(rows, rhs):
    """Solve a (possibly rectangular) linear system with a unique solution.

    ``rows`` is a list of coefficient tuples, ``rhs`` the right-hand sides.
    Raises if the system is inconsistent or does not pin every unknown.
    """
    if not rows:
        raise UnderdeterminedSystemError("no equations")
    ncols = len(rows[0])
    a = [list(row) + [r] for row, r in zip(rows, rhs)]
    pivots = []
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(a)) if a[r][col] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        inv = _ONE / a[rank][col]
        a[rank] = [x * inv for x in a[rank]]
        for r in range(len(a)):
            if r != rank and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[rank])]
        pivots.append(col)
        rank += 1
    for r in range(rank, len(a)):
        if a[r][ncols] != 0:
            raise InconsistentSystemError("inconsistent linear system")
    if rank < ncols:
        raise UnderdeterminedSystemError(
            f"system pins {rank} of {ncols} unknowns"
        )
    solution = [_ZERO] * ncols
    for r, col in enumerate(pivots):
        solution[col] = a[r][ncols]
    return tuple(solution)
