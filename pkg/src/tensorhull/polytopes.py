"""The two polytopes over doubly stochastic n^2 x n^2 matrices.

``Phi`` is the linearly constrained relaxation: doubly stochastic matrices,
indexed by pairs ((i,k),(j,l)), that additionally satisfy four families of
partial-sum balance equations.  ``Psi`` is the convex hull of all Kronecker
products A (x) B of two n x n doubly stochastic matrices; its extreme points
are exactly the products P (x) Q of permutation matrices, so membership in
Psi is a finite, exactly solvable LP over the n!^2 Kronecker vertices.

Indexing is row-major throughout: the matrix cell (i,k), 1-based, flattens
to n*(i-1)+(k-1), and the entry ((i,k),(j,l)) of an n^2 x n^2 matrix gets
the flat variable index flat(i,k)*n^2 + flat(j,l).
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .exactmath import RatMatrix, format_matrix, lp_feasible, rat_rank
from .permutations import Permutation

SUPPORT_FILTERED = "support_filtered"
FULL = "full"
FULL_MODE_DEFAULT_CAP = 4


class TensorIndex:
    """Row-major flattening of index pairs, shared by every module."""

    __slots__ = ("n",)

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n

    def flat(self, i: int, k: int) -> int:
        """(i,k) 1-based -> 0-based position in 0..n^2-1."""
        return self.n * (i - 1) + (k - 1)

    def pair(self, f: int) -> tuple[int, int]:
        return f // self.n + 1, f % self.n + 1

    def var(self, i: int, k: int, j: int, l: int) -> int:
        """Flat variable index of the entry ((i,k),(j,l)) in 0..n^4-1."""
        return self.flat(i, k) * self.n * self.n + self.flat(j, l)

    def unvar(self, v: int) -> tuple[int, int, int, int]:
        nn = self.n * self.n
        return (*self.pair(v // nn), *self.pair(v % nn))


@dataclass
class ConstraintSystem:
    """Equality system C x = d with nonnegativity implicit, rows labeled.

    Rows are stored sparsely as {flat variable index: integer coefficient};
    the dense RatMatrix view is materialized on demand.
    """

    n: int
    rows: list
    d: list
    labels: list
    strict_families: bool = False
    _dense: RatMatrix | None = field(default=None, repr=False, compare=False)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return self.n ** 4

    def dense_matrix(self) -> RatMatrix:
        if self._dense is None:
            zero = Fraction(0)
            data = []
            for row in self.rows:
                dense = [zero] * self.ncols
                for c, v in row.items():
                    dense[c] = Fraction(v)
                data.append(dense)
            self._dense = RatMatrix(self.nrows, self.ncols, data)
        return self._dense

    def column_submatrix(self, cols) -> RatMatrix:
        cols = list(cols)
        zero = Fraction(0)
        pos = {c: j for j, c in enumerate(cols)}
        data = []
        for row in self.rows:
            dense = [zero] * len(cols)
            for c, v in row.items():
                j = pos.get(c)
                if j is not None:
                    dense[j] = Fraction(v)
            data.append(dense)
        return RatMatrix(self.nrows, len(cols), data)

    def residuals(self, x):
        """Per-row residual C_r . x - d_r for a flat variable vector x."""
        out = []
        for row, rhs in zip(self.rows, self.d):
            acc = -rhs
            for c, v in row.items():
                if x[c]:
                    acc += v * x[c]
            out.append(acc)
        return out

    def to_text(self) -> str:
        """Human-readable export: 'label : coeff*c[i,k][j,l] ... = rhs'."""
        ti = TensorIndex(self.n)
        lines = []
        for row, rhs, label in zip(self.rows, self.d, self.labels):
            terms = []
            for c in sorted(row):
                i, k, j, l = ti.unvar(c)
                v = row[c]
                sign = "+" if v >= 0 else "-"
                terms.append(f"{sign}{abs(v)}*c[{i},{k}][{j},{l}]")
            lines.append(f"{label} : {' '.join(terms)} = {rhs}")
        return "\n".join(lines) + "\n"

    def machine_export(self) -> tuple[str, str]:
        """(matrix text of [C | d] in the shared format, one label per line)."""
        augmented = RatMatrix(
            self.nrows, self.ncols + 1,
            [list(row) + [rhs]
             for row, rhs in zip(self.dense_matrix().data, self.d)])
        return format_matrix(augmented), "\n".join(self.labels) + "\n"


@lru_cache(maxsize=None)
def build_phi_constraints(n: int, strict_families: bool = False) -> ConstraintSystem:
    """All equality rows of the Phi relaxation, with provenance labels.

    Emits 2n^2 global row/column sum rows and four families of (n-1)n^2
    balance rows each.  By default families 3 and 4 distinguish the inner
    index k (k=2..n with i,j free), mirroring families 1 and 2; the literal
    alternate reading (i=2..n with j,k free) sits behind strict_families.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    ti = TensorIndex(n)
    rows, d, labels = [], [], []
    one = Fraction(1)
    zero = Fraction(0)

    def add(row: dict, rhs: Fraction, label: str):
        rows.append({c: v for c, v in row.items() if v})
        d.append(rhs)
        labels.append(label)

    rng = range(1, n + 1)
    for i in rng:
        for k in rng:
            add({ti.var(i, k, j, l): 1 for j in rng for l in rng}, one,
                f"rowsum[{i},{k}]")
            add({ti.var(j, l, i, k): 1 for j in rng for l in rng}, one,
                f"colsum[{i},{k}]")

    def balance(lhs_terms, rhs_terms, label):
        row: dict[int, int] = {}
        for v in lhs_terms:
            row[v] = row.get(v, 0) + 1
        for v in rhs_terms:
            row[v] = row.get(v, 0) - 1
        add(row, zero, label)

    for i in range(2, n + 1):
        for k in rng:
            for l in rng:
                balance((ti.var(i, k, j, l) for j in rng),
                        (ti.var(1, k, j, l) for j in rng),
                        f"fam1[i={i},k={k},l={l}]")
    for i in range(2, n + 1):
        for k in rng:
            for l in rng:
                balance((ti.var(j, k, i, l) for j in rng),
                        (ti.var(1, k, j, l) for j in rng),
                        f"fam2[i={i},k={k},l={l}]")
    if strict_families:
        fam34_outer = [(i, k) for i in range(2, n + 1) for k in rng]
    else:
        fam34_outer = [(i, k) for k in range(2, n + 1) for i in rng]
    for i, k in fam34_outer:
        for j in rng:
            balance((ti.var(i, k, j, l) for l in rng),
                    (ti.var(i, 1, j, l) for l in rng),
                    f"fam3[i={i},k={k},j={j}]")
    for i, k in fam34_outer:
        for j in rng:
            balance((ti.var(i, l, j, k) for l in rng),
                    (ti.var(i, 1, j, l) for l in rng),
                    f"fam4[i={i},k={k},j={j}]")
    return ConstraintSystem(n, rows, d, labels, strict_families)


@dataclass
class PhiCheck:
    """Outcome of a Phi membership test with per-row diagnostics."""

    ok: bool
    negative_entries: list
    violations: list  # (label, residual) pairs

    def __bool__(self):
        return self.ok


def phi_contains(c: RatMatrix, sys: ConstraintSystem) -> PhiCheck:
    """Exact membership: entries >= 0 and every labeled row at zero residual."""
    n = sys.n
    if c.rows != n * n or c.cols != n * n:
        raise ValueError(f"matrix must be {n * n} x {n * n}")
    ti = TensorIndex(n)
    negative = []
    for rf in range(n * n):
        for cf in range(n * n):
            if c.data[rf][cf] < 0:
                negative.append((*ti.pair(rf), *ti.pair(cf)))
    flat = [v for row in c.data for v in row]
    violations = []
    for row, rhs, label in zip(sys.rows, sys.d, sys.labels):
        acc = -rhs
        for col, v in row.items():
            if flat[col]:
                acc += v * flat[col]
        if acc:
            violations.append((label, acc))
    return PhiCheck(not negative and not violations, negative, violations)


def kron(p: Permutation, q: Permutation) -> RatMatrix:
    """Kronecker product of the permutation matrices of p and q.

    Entry ((i,k),(j,l)) is 1 iff j = p(i) and l = q(k).
    """
    if p.n != q.n:
        raise ValueError("size mismatch")
    n = p.n
    ti = TensorIndex(n)
    m = RatMatrix.zeros(n * n, n * n)
    one = Fraction(1)
    for i in range(1, n + 1):
        for k in range(1, n + 1):
            m.data[ti.flat(i, k)][ti.flat(p(i), q(k))] = one
    return m


def kron_support(p: Permutation, q: Permutation):
    """Flat variable indices of the n^2 ones of kron(p, q)."""
    n = p.n
    nn = n * n
    ti = TensorIndex(n)
    return [ti.flat(i, k) * nn + ti.flat(p(i), q(k))
            for i in range(1, n + 1) for k in range(1, n + 1)]


def support_columns(c: RatMatrix):
    """Flat variable indices of the nonzero entries of c."""
    return [rf * c.cols + cf
            for rf in range(c.rows) for cf in range(c.cols) if c.data[rf][cf]]


def is_vertex_of_phi(c: RatMatrix, sys: ConstraintSystem) -> bool:
    """Basic-feasible-point test: member + support columns independent."""
    check = phi_contains(c, sys)
    if not check.ok:
        raise ValueError("matrix is not in Phi; vertexhood undefined")
    rank, size = phi_support_rank(c, sys)
    return rank == size


def phi_support_rank(c: RatMatrix, sys: ConstraintSystem) -> tuple[int, int]:
    """(rank of the support columns of the constraint matrix, support size)."""
    supp = support_columns(c)
    if len(set(supp)) != len(supp):
        raise AssertionError("support indices must be unique")
    sub = sys.column_submatrix(supp)
    return rat_rank(sub), len(supp)


def induced_marginals(c: RatMatrix, n: int,
                      sys: ConstraintSystem | None = None):
    """The two n x n marginal matrices of a Phi member.

    alpha[i][j] = sum_l c[(i,1),(j,l)] and beta[k][l] = sum_j c[(1,k),(j,l)];
    both are doubly stochastic for every member.  Raises on non-members.
    """
    if sys is None:
        sys = build_phi_constraints(n)
    if not phi_contains(c, sys).ok:
        raise ValueError("matrix is not in Phi")
    ti = TensorIndex(n)
    rng = range(1, n + 1)
    alpha = [[sum((c.data[ti.flat(i, 1)][ti.flat(j, l)] for l in rng),
                  Fraction(0)) for j in rng] for i in rng]
    beta = [[sum((c.data[ti.flat(1, k)][ti.flat(j, l)] for j in rng),
                 Fraction(0)) for l in rng] for k in rng]
    return RatMatrix(n, n, alpha), RatMatrix(n, n, beta)


# ---------------------------------------------------------------------------
# Psi membership
# ---------------------------------------------------------------------------

@dataclass
class MembershipResult:
    """Verdict of the Psi membership LP.

    When in_psi, ``weights`` maps (p image, q image) tuples to positive
    weights that sum to 1 and reconstruct the input exactly.  Otherwise
    ``farkas`` is a certificate over the canonical system rows (the n^4
    entry equations followed by the weight normalization row), valid for the
    column set in ``pairs`` and re-checked before being returned.
    """

    in_psi: bool
    mode: str
    pairs: list
    weights: dict | None = None
    farkas: list | None = None
    admissible_count: int | None = None

    @property
    def status(self) -> str:
        return "feasible" if self.in_psi else "infeasible_certified"


def all_pairs(n: int):
    """All (p, q) in lexicographic order of (p image, q image)."""
    perms = [Permutation(img) for img in
             itertools.permutations(range(1, n + 1))]
    return [(p, q) for p in perms for q in perms]


def admissible_pairs(c: RatMatrix, n: int):
    """Pairs whose Kronecker support sits inside the support of c."""
    ti = TensorIndex(n)
    perms = [Permutation(img) for img in
             itertools.permutations(range(1, n + 1))]
    cells = [(i, k) for i in range(1, n + 1) for k in range(1, n + 1)]
    out = []
    for p in perms:
        for q in perms:
            if all(c.data[ti.flat(i, k)][ti.flat(p(i), q(k))] for i, k in cells):
                out.append((p, q))
    return out


def membership_system(c: RatMatrix, n: int, pairs) -> tuple[RatMatrix, list]:
    """The canonical LP data: one row per entry of c plus the sum-to-1 row."""
    nn = n * n
    n4 = nn * nn
    zero, one = Fraction(0), Fraction(1)
    cols = []
    for p, q in pairs:
        col = [zero] * (n4 + 1)
        for v in kron_support(p, q):
            col[v] = one
        col[n4] = one
        cols.append(col)
    data = [[col[r] for col in cols] for r in range(n4 + 1)]
    d = [v for row in c.data for v in row] + [one]
    return RatMatrix(n4 + 1, len(pairs), data), d


def weights_reconstruct(weights: dict, n: int) -> RatMatrix:
    """Sum of weighted Kronecker vertices, as a dense matrix."""
    nn = n * n
    m = RatMatrix.zeros(nn, nn)
    for (p_img, q_img), w in weights.items():
        for v in kron_support(Permutation(p_img), Permutation(q_img)):
            m.data[v // nn][v % nn] += w
    return m


def _reduced_rows(c: RatMatrix, n: int, pairs):
    """Equivalent smaller equation system for the membership LP.

    The n^4 entry equations have row rank ((n-1)^2+1)^2; a spanning subset
    can be written down directly: the entry equations with all four indices
    below n, the block sums over (i,j) with i,j < n, the block sums over
    (k,l) with k,l < n, and the total sum.  Each reduced row is an explicit
    nonnegative combination of canonical rows, so certificates transfer back
    verbatim (see _expand_farkas); any witness is re-checked against the
    full system and falls back to it on mismatch.
    """
    ti = TensorIndex(n)
    rng = range(1, n + 1)
    inner = range(1, n)
    rows, d, tags = [], [], []
    for i in inner:
        for j in inner:
            for k in inner:
                for l in inner:
                    rows.append([1 if (p(i) == j and q(k) == l) else 0
                                 for p, q in pairs])
                    d.append(c.data[ti.flat(i, k)][ti.flat(j, l)])
                    tags.append(("entry", ti.var(i, k, j, l)))
    for i in inner:
        for j in inner:
            rows.append([n if p(i) == j else 0 for p, q in pairs])
            d.append(sum((c.data[ti.flat(i, k)][ti.flat(j, l)]
                          for k in rng for l in rng), Fraction(0)))
            tags.append(("rowblock", i, j))
    for k in inner:
        for l in inner:
            rows.append([n if q(k) == l else 0 for p, q in pairs])
            d.append(sum((c.data[ti.flat(i, k)][ti.flat(j, l)]
                          for i in rng for j in rng), Fraction(0)))
            tags.append(("colblock", k, l))
    rows.append([n * n] * len(pairs))
    d.append(sum((v for row in c.data for v in row), Fraction(0)))
    tags.append(("total",))
    rows.append([1] * len(pairs))
    d.append(Fraction(1))
    tags.append(("sumw",))
    return rows, d, tags


def _expand_farkas(y, tags, n: int):
    """Lift a reduced-system certificate to the canonical row indexing."""
    ti = TensorIndex(n)
    n4 = n ** 4
    rng = range(1, n + 1)
    out = [Fraction(0)] * (n4 + 1)
    for coef, tag in zip(y, tags):
        if not coef:
            continue
        kind = tag[0]
        if kind == "entry":
            out[tag[1]] += coef
        elif kind == "rowblock":
            _, i, j = tag
            for k in rng:
                for l in rng:
                    out[ti.var(i, k, j, l)] += coef
        elif kind == "colblock":
            _, k, l = tag
            for i in rng:
                for j in rng:
                    out[ti.var(i, k, j, l)] += coef
        elif kind == "total":
            for v in range(n4):
                out[v] += coef
        else:  # sumw
            out[n4] += coef
    return out


def _verify_psi_farkas(c: RatMatrix, n: int, pairs, y) -> bool:
    """check_farkas against the canonical system, via column supports."""
    n4 = n ** 4
    for p, q in pairs:
        acc = y[n4]
        for v in kron_support(p, q):
            acc += y[v]
        if acc < 0:
            return False
    dty = y[n4]
    nn = n * n
    for rf in range(nn):
        for cf in range(nn):
            val = c.data[rf][cf]
            if val:
                dty += val * y[rf * nn + cf]
    return dty < 0


def psi_contains(c: RatMatrix, n: int, mode: str = SUPPORT_FILTERED,
                 allow_large: bool = False) -> MembershipResult:
    """Decide exactly whether c is a convex combination of Kronecker vertices.

    support_filtered first discards every pair whose Kronecker product has a
    one where c has a zero (nonnegativity forces their weight to zero), then
    solves the LP over the surviving columns.  full keeps all n!^2 columns
    and is capped at n <= 4 unless allow_large is set.  Both modes return
    verified witnesses or certificates and must agree on every input.
    """
    nn = n * n
    if c.rows != nn or c.cols != nn:
        raise ValueError(f"matrix must be {nn} x {nn}")
    for row in c.data:
        for v in row:
            if v < 0:
                raise ValueError("matrix has negative entries")
    if mode == SUPPORT_FILTERED:
        pairs = admissible_pairs(c, n)
        admissible_count = len(pairs)
    elif mode == FULL:
        if n > FULL_MODE_DEFAULT_CAP and not allow_large:
            raise ValueError(
                f"full mode at n={n} exceeds the default cap "
                f"{FULL_MODE_DEFAULT_CAP}; pass allow_large=True")
        pairs = all_pairs(n)
        admissible_count = None
    else:
        raise ValueError(f"unknown mode {mode!r}")

    rows, d, tags = _reduced_rows(c, n, pairs)
    reduced = RatMatrix.from_rows(rows)
    outcome = lp_feasible(reduced, d)
    if outcome.feasible:
        weights = {(p.image, q.image): w
                   for (p, q), w in zip(pairs, outcome.witness) if w}
        total = sum(weights.values(), Fraction(0))
        if total == 1 and weights_reconstruct(weights, n) == c:
            return MembershipResult(True, mode, pairs, weights=weights,
                                    admissible_count=admissible_count)
        # The reduced equations hold but the full system does not: c is not
        # in the span of the Kronecker vertices.  Solve the canonical system
        # directly; its verdict is authoritative.
        canon, dcanon = membership_system(c, n, pairs)
        outcome = lp_feasible(canon, dcanon)
        if outcome.feasible:
            weights = {(p.image, q.image): w
                       for (p, q), w in zip(pairs, outcome.witness) if w}
            return MembershipResult(True, mode, pairs, weights=weights,
                                    admissible_count=admissible_count)
        return MembershipResult(False, mode, pairs, farkas=outcome.farkas,
                                admissible_count=admissible_count)
    y = _expand_farkas(outcome.farkas, tags, n)
    if not _verify_psi_farkas(c, n, pairs, y):
        raise AssertionError("lifted certificate failed verification")
    return MembershipResult(False, mode, pairs, farkas=y,
                            admissible_count=admissible_count)
