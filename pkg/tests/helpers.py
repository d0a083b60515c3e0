"""Independent oracle implementations shared by the test modules.

Everything here is deliberately written without reusing the library's code
paths: plain rational Gaussian elimination instead of Bareiss, brute-force
searches instead of anchored ones, and explicit constructions instead of LP
solves.  Tests compare library results against these.
"""

import itertools
from fractions import Fraction

from tensorhull.exactmath import RatMatrix
from tensorhull.permutations import Permutation

# The published 16x16 transfer matrix for n=4, sigma=(3 4), transcribed by
# hand as the 1-based column positions of the 1/4 entries in each row.
PRINTED_T_COLUMNS = (
    (1, 8, 11, 14), (2, 5, 12, 15), (4, 7, 10, 13), (3, 6, 9, 16),
    (2, 5, 12, 15), (4, 7, 10, 13), (3, 6, 9, 16), (1, 8, 11, 14),
    (4, 7, 10, 13), (3, 6, 9, 16), (1, 8, 11, 14), (2, 5, 12, 15),
    (3, 6, 9, 16), (1, 8, 11, 14), (2, 5, 12, 15), (4, 7, 10, 13),
)


def printed_transfer_matrix() -> RatMatrix:
    zero, quarter = Fraction(0), Fraction(1, 4)
    data = []
    for cols in PRINTED_T_COLUMNS:
        row = [zero] * 16
        for c in cols:
            row[c - 1] = quarter
        data.append(row)
    return RatMatrix(16, 16, data)


def plain_rank(m: RatMatrix) -> int:
    """Rank by textbook rational Gaussian elimination (pivot, scale, clear)."""
    data = [list(row) for row in m.data]
    nrows, ncols = m.rows, m.cols
    rank = 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if data[i][c]), None)
        if piv is None:
            continue
        data[r], data[piv] = data[piv], data[r]
        inv = 1 / data[r][c]
        data[r] = [v * inv for v in data[r]]
        for i in range(nrows):
            if i != r and data[i][c]:
                f = data[i][c]
                data[i] = [a - f * b for a, b in zip(data[i], data[r])]
        rank += 1
        r += 1
        if r == nrows:
            break
    return rank


def brute_power_set(n: int):
    """All powers of the cycle as image tuples, built by direct iteration."""
    powers = set()
    cur = tuple(range(1, n + 1))
    for _ in range(n):
        powers.add(cur)
        cur = tuple((v % n) + 1 for v in cur)
    return powers


def brute_is_admissible(image: tuple) -> bool:
    """sigma rho sigma^-1 not a power of rho, built entrywise."""
    n = len(image)
    inv = [0] * n
    for i, v in enumerate(image, 1):
        inv[v - 1] = i
    rho = tuple((i % n) + 1 for i in range(1, n + 1))
    conj = tuple(image[rho[inv[i - 1] - 1] - 1] for i in range(1, n + 1))
    return conj not in brute_power_set(n)


def brute_exists_PQ(a_entry, b_entry):
    """All n!^2 pairs, direct comparison of permuted patterns."""
    n = len(a_entry)
    idx = list(range(n))
    for p in itertools.permutations(range(n)):
        for q in itertools.permutations(range(n)):
            if all(b_entry[p[i]][q[k]] == a_entry[i][k]
                   for i in idx for k in idx):
                return (tuple(v + 1 for v in p), tuple(v + 1 for v in q))
    return None


def random_permutation(rng, n: int) -> Permutation:
    img = list(range(1, n + 1))
    rng.shuffle(img)
    return Permutation(img)


def random_doubly_stochastic(rng, n: int, terms: int | None = None) -> RatMatrix:
    """Exact-rational convex combination of random permutation matrices."""
    if terms is None:
        terms = rng.randint(1, n)
    weights = [Fraction(rng.randint(1, 6)) for _ in range(terms)]
    total = sum(weights)
    weights = [w / total for w in weights]
    data = [[Fraction(0)] * n for _ in range(n)]
    for w in weights:
        perm = random_permutation(rng, n)
        for i in range(1, n + 1):
            data[i - 1][perm(i) - 1] += w
    return RatMatrix(n, n, data)


def tensor_product(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    """Kronecker product with the row-major pair flattening."""
    n = a.rows
    nn = n * n
    data = [[Fraction(0)] * nn for _ in range(nn)]
    for i in range(n):
        for k in range(n):
            for j in range(n):
                for l in range(n):
                    data[n * i + k][n * j + l] = a.data[i][j] * b.data[k][l]
    return RatMatrix(nn, nn, data)


def shift_pair(n: int, m: int):
    """(p, q) with p: i -> i+m and q: k -> k-m, both mod n."""
    p = Permutation([(i - 1 + m) % n + 1 for i in range(1, n + 1)])
    q = Permutation([(k - 1 - m) % n + 1 for k in range(1, n + 1)])
    return p, q


def convex_combination(matrices, weights) -> RatMatrix:
    rows, cols = matrices[0].rows, matrices[0].cols
    data = [[Fraction(0)] * cols for _ in range(rows)]
    for m, w in zip(matrices, weights):
        for r in range(rows):
            for c in range(cols):
                if m.data[r][c]:
                    data[r][c] += w * m.data[r][c]
    return RatMatrix(rows, cols, data)
