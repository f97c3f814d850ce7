"""Small exact dense linear algebra over a field ring (lists of lists)."""

from fractions import Fraction

from .errors import AlgebraError, ArityMismatch, SingularMatrix
from .rings import QQ


def identity(size, ring=QQ):
    return [[ring.one if i == j else ring.zero for j in range(size)] for i in range(size)]


def coerce(matrix, ring=QQ):
    return [[ring(c) for c in row] for row in matrix]


def check_square(matrix):
    size = len(matrix)
    if size == 0 or any(len(row) != size for row in matrix):
        raise ArityMismatch("matrix must be square and non-empty")
    return size


def matmul(a, b, ring=QQ):
    if len(a[0]) != len(b):
        raise ArityMismatch("incompatible matrix shapes")
    add, mul = ring.add, ring.mul
    out = []
    for row in a:
        out_row = []
        for j in range(len(b[0])):
            s = ring.zero
            for k, c in enumerate(row):
                s = add(s, mul(c, b[k][j]))
            out_row.append(s)
        out.append(out_row)
    return out


def transpose(a):
    return [list(col) for col in zip(*a)]


def inverse(matrix, ring=QQ):
    """Gauss-Jordan inverse; raises SingularMatrix."""
    size = check_square(matrix)
    m = [list(row) + identity(size, ring)[i] for i, row in enumerate(coerce(matrix, ring))]
    for col in range(size):
        piv = next((r for r in range(col, size) if not ring.is_zero(m[r][col])), None)
        if piv is None:
            raise SingularMatrix("matrix is singular" + (f" mod {ring.characteristic}"
                                                        if ring.characteristic else ""))
        m[col], m[piv] = m[piv], m[col]
        inv = ring.inv(m[col][col])
        m[col] = [ring.mul(c, inv) for c in m[col]]
        for r in range(size):
            if r != col and not ring.is_zero(m[r][col]):
                f = m[r][col]
                m[r] = [ring.sub(a, ring.mul(f, b)) for a, b in zip(m[r], m[col])]
    return [row[size:] for row in m]


def determinant(matrix, ring=QQ):
    size = check_square(matrix)
    m = coerce(matrix, ring)
    det = ring.one
    for col in range(size):
        piv = next((r for r in range(col, size) if not ring.is_zero(m[r][col])), None)
        if piv is None:
            return ring.zero
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = ring.neg(det)
        det = ring.mul(det, m[col][col])
        inv = ring.inv(m[col][col])
        for r in range(col + 1, size):
            if not ring.is_zero(m[r][col]):
                f = ring.mul(m[r][col], inv)
                m[r] = [ring.sub(a, ring.mul(f, b)) for a, b in zip(m[r], m[col])]
    return det


def solve_rational(columns, rhs):
    """Find rational ``c`` with ``sum_j c_j * columns[j] == rhs`` or return None.

    Vectors are lists of ints/Fractions of equal length.  Elimination is done
    on an integer matrix (rows scaled by denominators) with fraction-free
    Bareiss steps, then back-substitution in Fractions.
    """
    nrows = len(rhs)
    ncols = len(columns)
    # augmented rows: [a_r0 .. a_r(ncols-1) | b_r]
    rows = []
    for r in range(nrows):
        vals = [Fraction(columns[j][r]) for j in range(ncols)] + [Fraction(rhs[r])]
        den = 1
        for v in vals:
            den = den * v.denominator // _gcd(den, v.denominator)
        rows.append([int(v * den) for v in vals])
    pivots = []
    prev = 1
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank][col]
        for r in range(rank + 1, nrows):
            a = rows[r][col]
            row_r, row_k = rows[r], rows[rank]
            rows[r] = [(p * x - a * y) // prev for x, y in zip(row_r, row_k)]
        prev = p
        pivots.append(col)
        rank += 1
    for r in range(rank, nrows):
        if rows[r][ncols] != 0:
            return None
    sol = [Fraction(0)] * ncols
    for i in reversed(range(rank)):
        col = pivots[i]
        s = Fraction(rows[i][ncols])
        for j in range(col + 1, ncols):
            if rows[i][j]:
                s -= rows[i][j] * sol[j]
        sol[col] = s / rows[i][col]
    return [QQ(v) for v in sol]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# symplectic linear algebra ------------------------------------------------

def bracket_matrix(n, ring=QQ):
    """``J[i][j] = delta(i, n+j) - delta(i+n, j)`` (0-based)."""
    size = 2 * n
    return [[ring(int(i == n + j) - int(i + n == j)) for j in range(size)] for i in range(size)]


def pairing(u, v, n):
    """Bracket of the linear forms with coefficient vectors ``u`` and ``v``."""
    s = 0
    for i in range(n):
        s += v[i] * u[i + n] - u[i] * v[i + n]
    return s


def is_symplectic_matrix(a, n, ring=QQ):
    """``A J A^T == J`` for image-row convention (equivalent to ``A^T J A == J``)."""
    if len(a) != 2 * n:
        raise ArityMismatch(f"expected {2 * n}x{2 * n} matrix")
    a = coerce(a, ring)
    j = bracket_matrix(n, ring)
    return matmul(matmul(a, j, ring), transpose(a), ring) == j


def symplectic_completion(form, n):
    """Rational symplectic matrix whose first row is ``form``.

    Rows ``r`` satisfy ``pairing(r_i, r_j) == J[i][j]``; built by symplectic
    Gram-Schmidt starting from ``form`` and the standard basis.
    """
    size = 2 * n
    form = [QQ(c) for c in form]
    if len(form) != size:
        raise ArityMismatch(f"form has {len(form)} coefficients, expected {size}")
    if all(c == 0 for c in form):
        raise AlgebraError("zero form has no symplectic completion")
    cands = [form] + [[QQ(int(i == j)) for j in range(size)] for i in range(size)]
    rows = [None] * size
    for k in range(n):
        a = next(v for v in cands if any(c != 0 for c in v))
        cands.remove(a)
        b = next((v for v in cands if pairing(a, v, n) != 0), None)
        if b is None:
            raise AlgebraError("degenerate candidate set in symplectic completion")
        cands.remove(b)
        # want pairing(a, b) == J[k][k+n] == -1
        scale = Fraction(-1) / pairing(a, b, n)
        b = [QQ(c * scale) for c in b]
        rows[k], rows[k + n] = a, b
        ab = pairing(a, b, n)
        new = []
        for v in cands:
            alpha = -Fraction(pairing(v, b, n)) / ab
            beta = -Fraction(pairing(v, a, n)) / (-ab)
            w = [QQ(x + alpha * y + beta * z) for x, y, z in zip(v, a, b)]
            new.append(w)
        cands = new
    if not is_symplectic_matrix(rows, n):
        raise AlgebraError("symplectic completion failed verification")
    return rows
