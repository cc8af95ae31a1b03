"""Independent reference implementations used to cross-check the package.

Everything here is deliberately naive: textbook Gaussian elimination over
Fraction, cofactor determinants, characteristic polynomials, and a bounded
blow-up search for total discrepancies. Slow and obvious beats fast and
clever for an oracle.
"""

from fractions import Fraction


def gauss_solve(matrix, rhs):
    """Plain fraction Gaussian elimination; raises ValueError when singular."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular system")
        a[col], a[pivot] = a[pivot], a[col]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col] / a[col][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return [a[i][n] / a[i][i] for i in range(n)]


def cofactor_det(matrix):
    """Laplace expansion along the first row. Exponential; fine for n <= 6."""
    n = len(matrix)
    if n == 0:
        return 1
    if n == 1:
        return matrix[0][0]
    total = 0
    for j in range(n):
        if matrix[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1 :] for row in matrix[1:]]
        sign = -1 if j % 2 else 1
        total += sign * matrix[0][j] * cofactor_det(minor)
    return total


def charpoly_negdef(matrix):
    """Negative definiteness through the characteristic polynomial.

    Faddeev-LeVerrier gives det(tI - M) = t^n + c[0] t^(n-1) + ... + c[n-1]
    exactly over Fraction; a symmetric matrix is negative definite iff every
    coefficient is strictly positive.
    """
    n = len(matrix)
    m = [[Fraction(x) for x in row] for row in matrix]
    aux = [[Fraction(0)] * n for _ in range(n)]
    coeffs = []
    c = Fraction(1)
    for k in range(1, n + 1):
        # aux <- M (aux + c I)
        shifted = [row[:] for row in aux]
        for i in range(n):
            shifted[i][i] += c
        aux = [
            [sum(m[i][t] * shifted[t][j] for t in range(n)) for j in range(n)]
            for i in range(n)
        ]
        c = -sum(aux[i][i] for i in range(n)) / k
        coeffs.append(c)
    # det(tI - M) has coefficients (-1)^k e_k(eigenvalues) = coeffs as built
    return all(x > 0 for x in coeffs)


def snc_search_oracle(coefficients, edges, max_blowups=4):
    """Bounded blow-up search for the total discrepancy of an SNC tree.

    State: vertex coefficients (as integer sixths) plus a simple edge set.
    Blowing up the intersection point of i and j inserts a new vertex with
    B_new = B_i + B_j - 6, removes the old edge and joins the new vertex to
    both. The reported value is the minimum of -B/6 over every vertex ever
    seen. Assumes no coefficient exceeds 1 (the callers' grids guarantee it).
    """
    base = tuple(int(Fraction(c) * 6) for c in coefficients)
    for b, c in zip(base, coefficients):
        assert Fraction(b, 6) == Fraction(c), "oracle grid is integer sixths"
    start_edges = frozenset(tuple(sorted(e)) for e in edges)
    assert len(start_edges) == len(list(edges)), "oracle expects a simple graph"
    best = 6  # -B lower bound starts above every candidate (B >= 0 grid)
    for b in base:
        best = min(best, -b)
    seen = set()
    stack = [(base, start_edges, 0)]
    while stack:
        coeffs, es, depth = stack.pop()
        key = (coeffs, es)
        if key in seen:
            continue
        seen.add(key)
        if depth == max_blowups:
            continue
        for i, j in es:
            new = coeffs[i] + coeffs[j] - 6
            best = min(best, -new)
            k = len(coeffs)
            next_edges = (es - {(i, j)}) | {(i, k), (j, k)}
            stack.append((coeffs + (new,), frozenset(next_edges), depth + 1))
    return Fraction(min(best, 6), 6)
