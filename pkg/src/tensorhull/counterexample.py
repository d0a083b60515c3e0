"""The transfer matrix T of a pair (n, sigma) and the verification pipeline.

T is the n^2 x n^2 matrix with entries 0 and 1/n whose ((i,k),(j,l)) entry
is 1/n exactly when cell (j,l) of the sigma-relabeled circulant holds the
same variable as cell (i,k) of the plain circulant.  Since each variable
fills n cells on either side, T carries each circulant cell to the average
of the matching cells, which is what makes it a member of Phi; for every
admissible sigma it is a vertex of Phi that lies outside Psi.
"""

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .circulants import VarMatrix, build_A, build_B, exists_PQ
from .exactmath import RatMatrix
from .permutations import Permutation, is_counterexample_sigma
from .polytopes import (
    FULL,
    TensorIndex,
    admissible_pairs,
    build_phi_constraints,
    phi_contains,
    phi_support_rank,
    psi_contains,
)

LP_DEFAULT_CAP = 4

LP_INFEASIBLE = "infeasible_certified"
LP_FEASIBLE = "feasible"
LP_SKIPPED = "skipped"


def build_T(n: int, sigma: Permutation) -> RatMatrix:
    """The 0-or-1/n transfer matrix matching variables of B to variables of A."""
    if sigma.n != n:
        raise ValueError("sigma size does not match n")
    a = build_A(n)
    b = build_B(n, sigma)
    ti = TensorIndex(n)
    zero = Fraction(0)
    val = Fraction(1, n)
    nn = n * n
    data = [[zero] * nn for _ in range(nn)]
    for i in range(1, n + 1):
        for k in range(1, n + 1):
            m = a.at(i, k)
            rf = ti.flat(i, k)
            for j in range(1, n + 1):
                for l in range(1, n + 1):
                    if b.at(j, l) == m:
                        data[rf][ti.flat(j, l)] = val
    return RatMatrix(nn, nn, data)


def verify_transfer_identity(t: RatMatrix, n: int, sigma: Permutation) -> bool:
    """Check u_m = T v_m for each variable's indicator vectors u (in A), v (in B).

    The entries of both circulants are single variables, so the n basis
    substitutions prove the transfer identity for all variable values.
    """
    nn = n * n
    if t.rows != nn or t.cols != nn or sigma.n != n:
        raise ValueError("shape mismatch")
    a = build_A(n)
    b = build_B(n, sigma)
    ti = TensorIndex(n)
    one, zero = Fraction(1), Fraction(0)
    for m in range(1, n + 1):
        u = [zero] * nn
        v = [zero] * nn
        for i in range(1, n + 1):
            for k in range(1, n + 1):
                if a.at(i, k) == m:
                    u[ti.flat(i, k)] = one
                if b.at(i, k) == m:
                    v[ti.flat(i, k)] = one
        if t.matvec(v) != u:
            return False
    return True


@dataclass
class BlockReport:
    ok: bool
    failures: list

    def __bool__(self):
        return self.ok


def block_structure_report(t: RatMatrix, n: int) -> BlockReport:
    """Each of the four index-pair slices must be 1/n times a permutation matrix.

    Slices: fix (i,j) and vary (k,l); fix (k,l) and vary (i,j); fix (i,l)
    and vary (k,j); fix (k,j) and vary (i,l).
    """
    nn = n * n
    if t.rows != nn or t.cols != nn:
        raise ValueError("shape mismatch")
    ti = TensorIndex(n)
    rng = range(1, n + 1)
    slices = {
        "fix(i,j)": lambda a, b, x, y: (ti.flat(a, x), ti.flat(b, y)),
        "fix(k,l)": lambda a, b, x, y: (ti.flat(x, a), ti.flat(y, b)),
        "fix(i,l)": lambda a, b, x, y: (ti.flat(a, x), ti.flat(y, b)),
        "fix(k,j)": lambda a, b, x, y: (ti.flat(x, a), ti.flat(b, y)),
    }
    val = Fraction(1, n)
    failures = []
    for name, pick in slices.items():
        for a in rng:
            for b in rng:
                colseen = set()
                ok = True
                for x in rng:
                    hits = []
                    for y in rng:
                        rf, cf = pick(a, b, x, y)
                        v = t.data[rf][cf]
                        if v == val:
                            hits.append(y)
                        elif v:
                            ok = False
                    if len(hits) != 1 or hits[0] in colseen:
                        ok = False
                        break
                    colseen.add(hits[0])
                if not ok:
                    failures.append(f"{name}[{a},{b}]")
    return BlockReport(not failures, failures)


def patterns_from_transfer(t: RatMatrix, n: int) -> tuple[VarMatrix, VarMatrix]:
    """Recover the two variable patterns from T, up to consistent relabeling.

    Rows of T with identical content correspond to cells of the plain
    circulant holding one variable; a column belongs to the class of the
    rows it meets.  Raises if T is not of the transfer-matrix form.
    """
    nn = n * n
    if t.rows != nn or t.cols != nn:
        raise ValueError("shape mismatch")
    val = Fraction(1, n)
    for row in t.data:
        for v in row:
            if v and v != val:
                raise ValueError("entries must be 0 or 1/n")
    classes: dict[tuple, int] = {}
    row_class = []
    for row in t.data:
        key = tuple(row)
        if key not in classes:
            classes[key] = len(classes) + 1
        row_class.append(classes[key])
    if len(classes) != n:
        raise ValueError(f"expected {n} distinct row patterns, got {len(classes)}")
    a_entries = [[row_class[i * n + k] for k in range(n)] for i in range(n)]
    col_class = []
    for cf in range(nn):
        owners = {row_class[rf] for rf in range(nn) if t.data[rf][cf]}
        if len(owners) != 1:
            raise ValueError(f"column {cf} meets {len(owners)} row classes")
        col_class.append(owners.pop())
    b_entries = [[col_class[j * n + l] for l in range(n)] for j in range(n)]
    return VarMatrix(a_entries), VarMatrix(b_entries)


def certify_not_in_psi(t: RatMatrix, n: int, cross_check: bool | None = None) -> bool:
    """True iff no Kronecker vertex has its support inside the support of T.

    A convex combination equal to T would have to give zero weight to every
    vertex with a one outside supp(T); with no support-contained vertex at
    all, no combination exists, so True implies T is outside Psi.  The test
    runs through the pattern search (support containment of kron(p,q) is the
    same as the patterns matching under (p,q)) and, for n <= 5 by default,
    is cross-checked by a direct scan over all n!^2 supports.
    """
    a_rec, b_rec = patterns_from_transfer(t, n)
    absent = exists_PQ(a_rec, b_rec) is None
    if cross_check is None:
        cross_check = n <= 5
    if cross_check:
        scan_absent = not admissible_pairs(t, n)
        if scan_absent != absent:
            raise RuntimeError(
                "pattern search and support scan disagree: "
                f"search says absent={absent}, scan says absent={scan_absent}")
    return absent


@dataclass
class VerificationReport:
    """Machine-checkable outcome of the full pipeline for one (n, sigma)."""

    n: int
    sigma: Permutation
    sigma_admissible: bool = False
    factorization_absent: bool = False
    transfer_identity: bool = False
    block_structure: bool = False
    in_phi: bool = False
    is_vertex: bool = False
    support_certificate: bool = False
    lp_status: str = LP_SKIPPED
    support_size: int = 0
    support_rank: int = 0
    red_flags: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    STAGES = (
        "admissibility",
        "pattern_search",
        "transfer",
        "block_structure",
        "phi_membership",
        "phi_vertex",
        "psi_certificate",
        "psi_lp",
    )

    @property
    def confirmed(self) -> bool:
        return not self.failed_stages()

    def failed_stages(self) -> list:
        checks = {
            "admissibility": self.sigma_admissible,
            "pattern_search": self.factorization_absent,
            "transfer": self.transfer_identity,
            "block_structure": self.block_structure,
            "phi_membership": self.in_phi,
            "phi_vertex": self.is_vertex,
            "psi_certificate": self.support_certificate,
            "psi_lp": self.lp_status in (LP_INFEASIBLE, LP_SKIPPED),
        }
        return [name for name in self.STAGES if not checks[name]]

    def to_dict(self, include_timings: bool = True) -> dict:
        out = {
            "n": self.n,
            "sigma": {
                "image": list(self.sigma.image),
                "cycles": self.sigma.cycle_string(),
            },
            "stages": {
                "admissibility": self.sigma_admissible,
                "pattern_factorization_absent": self.factorization_absent,
                "transfer_identity": self.transfer_identity,
                "block_structure": self.block_structure,
                "phi_membership": self.in_phi,
                "phi_vertex": self.is_vertex,
                "psi_support_certificate": self.support_certificate,
                "psi_lp": self.lp_status,
            },
            "support": {"size": self.support_size, "rank": self.support_rank},
            "confirmed": self.confirmed,
            "failed_stages": self.failed_stages(),
            "red_flags": list(self.red_flags),
        }
        if include_timings:
            out["timings"] = dict(self.timings)
        return out


def full_verification(n: int, sigma: Permutation, run_lp: bool | None = None,
                      strict_families: bool = False) -> VerificationReport:
    """Run every stage for one (n, sigma) and return the complete report.

    No stage is skipped silently: the LP stage records 'skipped' when not
    run (default for n > 4).  A sigma that passes the admissibility filter
    but fails any later stage raises a red flag in the report; it is never
    reconciled away.
    """
    if sigma.n != n:
        raise ValueError("sigma size does not match n")
    if run_lp is None:
        run_lp = n <= LP_DEFAULT_CAP
    report = VerificationReport(n=n, sigma=sigma)
    clock = time.perf_counter

    def stage(name, fn):
        t0 = clock()
        try:
            return fn()
        except Exception as exc:
            raise RuntimeError(f"stage {name} failed: {exc}") from exc
        finally:
            report.timings[name] = clock() - t0

    report.sigma_admissible = stage(
        "admissibility", lambda: is_counterexample_sigma(sigma))
    report.factorization_absent = stage(
        "pattern_search",
        lambda: exists_PQ(build_A(n), build_B(n, sigma)) is None)
    t = stage("build_transfer", lambda: build_T(n, sigma))
    report.transfer_identity = stage(
        "transfer_identity", lambda: verify_transfer_identity(t, n, sigma))
    report.block_structure = stage(
        "block_structure", lambda: block_structure_report(t, n).ok)
    sys = build_phi_constraints(n, strict_families)
    report.in_phi = stage("phi_membership", lambda: phi_contains(t, sys).ok)
    if report.in_phi:
        rank, size = stage("phi_vertex", lambda: phi_support_rank(t, sys))
        report.support_rank, report.support_size = rank, size
        report.is_vertex = rank == size
    report.support_certificate = stage(
        "psi_certificate", lambda: certify_not_in_psi(t, n))
    if run_lp:
        # run_lp=True above the default cap is an explicit request, so the
        # full-mode size guard is waived here.
        lp = stage("psi_lp",
                   lambda: psi_contains(t, n, mode=FULL, allow_large=True))
        report.lp_status = LP_FEASIBLE if lp.in_psi else LP_INFEASIBLE
        if lp.in_psi == report.support_certificate:
            report.red_flags.append(
                "support certificate and LP oracle disagree")
    else:
        report.lp_status = LP_SKIPPED

    if report.sigma_admissible:
        for name in report.failed_stages():
            report.red_flags.append(
                f"admissible sigma failed stage {name}")
    elif report.factorization_absent:
        report.red_flags.append(
            "pattern factorization absent for a non-admissible sigma")
    return report
