"""Exact rational matrices, rank, and LP feasibility with certificates.

Scalars are `fractions.Fraction` throughout: arbitrary precision, always in
canonical form (reduced, positive denominator).  Nothing in this module ever
touches floating point.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"


def as_fraction(value) -> Fraction:
    """Coerce ints, strings like '3/4', and Fractions; floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


class RatMatrix:
    """Dense matrix of Fractions, row-major list of row lists."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimensions")
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError("data shape does not match rows x cols")
        self.rows = rows
        self.cols = cols
        self.data = data

    @classmethod
    def from_rows(cls, rows) -> "RatMatrix":
        data = [[as_fraction(v) for v in row] for row in rows]
        ncols = len(data[0]) if data else 0
        return cls(len(data), ncols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        zero = Fraction(0)
        return cls(rows, cols, [[zero] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        zero, one = Fraction(0), Fraction(1)
        return cls(n, n, [[one if i == j else zero for j in range(n)] for i in range(n)])

    def __eq__(self, other):
        return (
            isinstance(other, RatMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __repr__(self):
        return f"RatMatrix({self.rows}x{self.cols})"

    def transpose(self) -> "RatMatrix":
        data = [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)]
        return RatMatrix(self.cols, self.rows, data)

    def column_submatrix(self, cols) -> "RatMatrix":
        cols = list(cols)
        data = [[row[c] for c in cols] for row in self.data]
        return RatMatrix(self.rows, len(cols), data)

    def matvec(self, x):
        if len(x) != self.cols:
            raise ValueError("vector length does not match column count")
        return [sum((row[j] * x[j] for j in range(self.cols) if row[j]), Fraction(0))
                for row in self.data]


def parse_matrix(text: str) -> RatMatrix:
    """Parse the text format: first line 'rows cols', then one row per line."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError("header must be 'rows cols'")
    rows, cols = int(head[0]), int(head[1])
    if len(lines) - 1 != rows:
        raise ValueError(f"expected {rows} rows, got {len(lines) - 1}")
    data = []
    for ln in lines[1:]:
        entries = ln.split()
        if len(entries) != cols:
            raise ValueError(f"expected {cols} entries per row, got {len(entries)}")
        data.append([Fraction(e) for e in entries])
    return RatMatrix(rows, cols, data)


def format_matrix(m: RatMatrix) -> str:
    lines = [f"{m.rows} {m.cols}"]
    for row in m.data:
        lines.append(" ".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


def _integer_rows(m: RatMatrix):
    """Clear denominators row by row; returns list of int rows."""
    out = []
    for row in m.data:
        mult = 1
        for v in row:
            mult = lcm(mult, v.denominator)
        out.append([int(v * mult) for v in row])
    return out


def rat_rank(m: RatMatrix) -> int:
    """Exact rank over the rationals via fraction-free (Bareiss) elimination."""
    if m.rows == 0 or m.cols == 0:
        return 0
    mat = _integer_rows(m)
    nrows, ncols = m.rows, m.cols
    rank = 0
    prev = 1
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        prow = mat[r]
        a = prow[c]
        for i in range(r + 1, nrows):
            row = mat[i]
            b = row[c]
            if b == 0:
                if prev != 1:
                    mat[i] = [(a * x) // prev for x in row]
                elif a != 1:
                    mat[i] = [a * x for x in row]
            else:
                mat[i] = [(a * x - b * y) // prev for x, y in zip(row, prow)]
        prev = a
        rank += 1
        r += 1
        if r == nrows:
            break
    return rank


def columns_independent(m: RatMatrix, cols) -> bool:
    """True iff the selected columns of m are linearly independent."""
    cols = list(cols)
    if len(set(cols)) != len(cols):
        raise ValueError("duplicate column indices")
    for c in cols:
        if not 0 <= c < m.cols:
            raise ValueError(f"column index out of range: {c}")
    if not cols:
        return True
    return rat_rank(m.column_submatrix(cols)) == len(cols)


@dataclass
class Feasibility:
    """Outcome of an exact feasibility question {x >= 0 : Cx = d}.

    Exactly one of witness/farkas is set.  A witness satisfies Cx = d, x >= 0;
    a farkas vector y satisfies C'y >= 0 componentwise and d'y < 0, proving
    emptiness.  Both are re-verified before being returned.
    """

    status: str
    witness: list | None = None
    farkas: list | None = None

    @property
    def feasible(self) -> bool:
        return self.status == FEASIBLE


def check_farkas(c_matrix: RatMatrix, d, y) -> bool:
    """Independent check that y certifies infeasibility of {x>=0 : Cx=d}."""
    if len(d) != c_matrix.rows or len(y) != c_matrix.rows:
        raise ValueError("dimension mismatch")
    for j in range(c_matrix.cols):
        s = sum((c_matrix.data[i][j] * y[i] for i in range(c_matrix.rows)
                 if c_matrix.data[i][j]), Fraction(0))
        if s < 0:
            return False
    dty = sum((d[i] * y[i] for i in range(len(d)) if d[i]), Fraction(0))
    return dty < 0


def lp_feasible(c_matrix: RatMatrix, d) -> Feasibility:
    """Decide exactly whether {x >= 0 : Cx = d} is nonempty.

    Phase-1 simplex with integer (fraction-free) pivoting.  Entering column:
    most negative reduced cost, ties broken by lowest index; leaving row:
    lexicographic ratio test keyed on (rhs, artificial columns, structural
    columns), which guarantees termination on degenerate systems and makes
    the output deterministic.  The witness or certificate is re-verified
    against the original data before returning.
    """
    m, nvars = c_matrix.rows, c_matrix.cols
    if len(d) != m:
        raise ValueError("d length does not match row count of C")
    d = [as_fraction(v) for v in d]
    status, x_or_y = _phase1_simplex(c_matrix.data, d, nvars)
    if status == FEASIBLE:
        x = x_or_y
        if any(v < 0 for v in x):
            raise AssertionError("simplex returned a negative witness entry")
        resid = c_matrix.matvec(x)
        if any(resid[i] != d[i] for i in range(m)):
            raise AssertionError("simplex witness failed re-substitution")
        return Feasibility(FEASIBLE, witness=x)
    y = x_or_y
    if not check_farkas(c_matrix, d, y):
        raise AssertionError("simplex certificate failed the farkas check")
    return Feasibility(INFEASIBLE, farkas=y)


def _phase1_simplex(c_rows, d, nvars):
    """Core phase-1 over integer data with a shared denominator (Bareiss pivots)."""
    m = len(c_rows)
    if m == 0:
        return FEASIBLE, [Fraction(0)] * nvars
    # Integerize [C_i | d_i] and flip signs so rhs >= 0; remember the row
    # scaling to map certificates back (scaled row = s_i * original row).
    rows = []
    scales = []
    for i in range(m):
        mult = d[i].denominator
        for v in c_rows[i]:
            mult = lcm(mult, v.denominator)
        crow = [int(v * mult) for v in c_rows[i]]
        rhs = int(d[i] * mult)
        if rhs < 0:
            mult = -mult
            crow = [-x for x in crow]
            rhs = -rhs
        art = [0] * m
        art[i] = 1
        rows.append(crow + art + [rhs])
        scales.append(Fraction(mult))
    width = nvars + m + 1
    RHS = width - 1
    # Reduced-cost row for min(sum of artificials) with the artificial basis.
    z = [0] * width
    for row in rows:
        for j in range(width):
            if row[j]:
                z[j] -= row[j]
    for j in range(nvars, nvars + m):
        z[j] += 1
    det = 1
    basis = list(range(nvars, nvars + m))
    lex_keys = [RHS] + list(range(nvars, nvars + m)) + list(range(nvars))
    while True:
        enter = -1
        best = 0
        for j in range(nvars):  # artificials never re-enter
            if z[j] < best:
                best = z[j]
                enter = j
        if enter < 0:
            break
        cands = [i for i in range(m) if rows[i][enter] > 0]
        if not cands:
            # Phase-1 objective is bounded below by 0, so this cannot happen.
            raise AssertionError("phase-1 ratio test found no pivot row")
        for key in lex_keys:
            if len(cands) == 1:
                break
            best_num = best_den = None
            kept = []
            for i in cands:
                num, den = rows[i][key], rows[i][enter]
                if best_num is None:
                    best_num, best_den, kept = num, den, [i]
                    continue
                cmp = num * best_den - best_num * den
                if cmp < 0:
                    best_num, best_den, kept = num, den, [i]
                elif cmp == 0:
                    kept.append(i)
            cands = kept
        r = cands[0]
        piv = rows[r][enter]
        prow = rows[r]
        for i in range(m):
            if i == r:
                continue
            row = rows[i]
            b = row[enter]
            if b == 0:
                if det != piv:
                    rows[i] = [(piv * x) // det for x in row]
            else:
                rows[i] = [(piv * x - b * y) // det for x, y in zip(row, prow)]
        b = z[enter]
        z = [(piv * x - b * y) // det for x, y in zip(z, prow)]
        det = piv
        basis[r] = enter
    if z[RHS] == 0:
        x = [Fraction(0)] * nvars
        for i in range(m):
            if basis[i] < nvars:
                x[basis[i]] = Fraction(rows[i][RHS], det)
        return FEASIBLE, x
    # Positive phase-1 objective: read the dual off the artificial columns.
    # For artificial i the reduced cost is 1 - y_i, so y_i = 1 - z_i/det; the
    # farkas vector is -y mapped through the row scaling.
    y = []
    for i in range(m):
        yi = Fraction(z[nvars + i], det) - 1
        y.append(yi * scales[i])
    return INFEASIBLE, y


def random_rational_matrix(rng, rows: int, cols: int, max_num: int = 9,
                           max_den: int = 9) -> RatMatrix:
    """Random small-fraction matrix for tests and demos (rng: random.Random)."""
    data = [[Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den))
             for _ in range(cols)] for _ in range(rows)]
    return RatMatrix(rows, cols, data)


__all__ = [
    "Fraction",
    "RatMatrix",
    "Feasibility",
    "FEASIBLE",
    "INFEASIBLE",
    "as_fraction",
    "parse_matrix",
    "format_matrix",
    "rat_rank",
    "columns_independent",
    "lp_feasible",
    "check_farkas",
    "random_rational_matrix",
]
