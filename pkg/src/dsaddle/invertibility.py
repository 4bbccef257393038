"""Invertibility decision ladder for double saddle-point systems.

Each rule checks its own hypotheses numerically and returns a
:class:`Diagnosis`: a definitive verdict (invertible with the rule that
fired, or singular with a unit kernel witness) or "undetermined" when the
hypotheses do not apply.  Rules never raise on inapplicable input, so the
ladder always terminates with a report.

Condition identifiers used throughout:

    N1   ker(A) ∩ ker(B)           = {0}
    N2   ker(B^T) ∩ ker(D) ∩ ker(C) = {0}
    N3   ker(C^T) ∩ ker(E)         = {0}
    R    ran(B) ∩ ran(C^T)         = {0}
    DS1  ker(A) (+) ker(B)   = R^n   (direct sum)
    DS2  ker(E) (+) ker(C^T) = R^p   (direct sum)

N1, N2, N3 are necessary for invertibility; a failure of any of them yields
an explicit kernel vector of the assembled matrix.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.linalg as sla

from .core import BlockSystem, assemble, block_reversal_permutation, \
    lambda_max_sym, permute_similar
from .subspaces import Definiteness, classify_definiteness, intersection_kernels, \
    is_direct_sum, kernel_basis, matrix_rank, range_intersection_trivial, rank_threshold
from .tolerances import ToleranceConfig, resolve

CONDITION_ORDER = ("N1", "N2", "N3", "R", "DS1", "DS2")


class Verdict(Enum):
    INVERTIBLE = "invertible"
    SINGULAR = "singular"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class ConditionEntry:
    """Outcome of one condition check, with a unit witness when it fails.

    The witness lives in the condition's own space (an intersection vector
    for N1..N3, a shared range direction for R); embedding into the full
    system is done by the rule that uses it.
    """

    cond_id: str
    holds: bool
    witness: np.ndarray | None = None

    def to_dict(self):
        entry = {"id": self.cond_id, "status": "holds" if self.holds else "fails"}
        if self.witness is not None:
            entry["witness"] = [float(x) for x in self.witness]
        return entry


@dataclass
class ConditionReport:
    """Per-condition results plus definiteness tags and achieved ranks."""

    entries: dict = field(default_factory=dict)
    definiteness: dict = field(default_factory=dict)
    ranks: dict = field(default_factory=dict)

    def add(self, entry: ConditionEntry):
        self.entries[entry.cond_id] = entry

    def holds(self, cond_id: str) -> bool:
        return self.entries[cond_id].holds

    def witness(self, cond_id: str):
        return self.entries[cond_id].witness

    def to_dict(self):
        ordered = [self.entries[c].to_dict() for c in CONDITION_ORDER if c in self.entries]
        return {
            "conditions": ordered,
            "definiteness": {k: v.value for k, v in self.definiteness.items()},
            "ranks": {k: int(v) for k, v in self.ranks.items()},
        }


@dataclass(frozen=True)
class Diagnosis:
    """Verdict plus the rule that fired, the report, and certificates."""

    verdict: Verdict
    rule: str | None
    report: ConditionReport
    witness: np.ndarray | None = None
    oracle_check: bool | None = None

    def to_dict(self):
        out = {"verdict": self.verdict.value, "rule": self.rule}
        out.update(self.report.to_dict())
        if self.witness is not None:
            out["witness"] = [float(x) for x in self.witness]
        if self.oracle_check is not None:
            out["oracle_check"] = bool(self.oracle_check)
        return out


def _unit(v):
    v = np.asarray(v, dtype=float).ravel()
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise RuntimeError("zero vector cannot serve as a witness")
    return v / norm


def _singular(sys, rule, witness, report, tol):
    """Build a singular diagnosis, insisting the witness is genuine."""
    u = _unit(witness)
    K = assemble(sys).matrix
    knorm = np.linalg.norm(K, 2)
    residual = np.linalg.norm(K @ u)
    if residual > tol.residual_rtol * max(knorm, 1e-300):
        raise RuntimeError(
            f"rule {rule} constructed a witness with residual {residual:.3e} "
            f"above tolerance; this indicates an input at the rank threshold"
        )
    return Diagnosis(Verdict.SINGULAR, rule, report, witness=u)


def _invertible(rule, report):
    return Diagnosis(Verdict.INVERTIBLE, rule, report)


def _undetermined(report):
    return Diagnosis(Verdict.UNDETERMINED, None, report)


def is_nonsingular(M, tol: ToleranceConfig | None = None) -> bool:
    """Square matrix test sigma_min > threshold under the global rank policy."""
    M = np.asarray(M, dtype=float)
    if M.shape[0] != M.shape[1]:
        raise ValueError("nonsingularity is defined for square matrices only")
    if M.shape[0] == 0:
        return True
    s = np.linalg.svd(M, compute_uv=False)
    return bool(s[-1] > rank_threshold(s[0], M.shape, tol))


def _is_zero_block(M) -> bool:
    return not np.any(M)


def condition_report(sys: BlockSystem, tol: ToleranceConfig | None = None) -> ConditionReport:
    """Evaluate every condition the rules consult, in one pass."""
    tol = resolve(tol)
    report = ConditionReport()

    n1 = intersection_kernels([sys.A, sys.B], tol)
    report.add(ConditionEntry("N1", n1.is_trivial,
                              None if n1.is_trivial else _unit(n1.basis[:, 0])))
    n2 = intersection_kernels([sys.B.T, sys.D, sys.C], tol)
    report.add(ConditionEntry("N2", n2.is_trivial,
                              None if n2.is_trivial else _unit(n2.basis[:, 0])))
    n3 = intersection_kernels([sys.C.T, sys.E], tol)
    report.add(ConditionEntry("N3", n3.is_trivial,
                              None if n3.is_trivial else _unit(n3.basis[:, 0])))

    disjoint, shared = range_intersection_trivial(sys.B, sys.C.T, tol)
    report.add(ConditionEntry("R", disjoint, shared))

    ker_a = kernel_basis(sys.A, tol)
    ker_b = kernel_basis(sys.B, tol)
    ker_e = kernel_basis(sys.E, tol)
    ker_ct = kernel_basis(sys.C.T, tol)
    report.add(ConditionEntry("DS1", is_direct_sum(ker_a, ker_b, tol)))
    report.add(ConditionEntry("DS2", is_direct_sum(ker_e, ker_ct, tol)))

    report.definiteness = {
        "A": classify_definiteness(sys.A, tol),
        "D": classify_definiteness(sys.D, tol),
        "E": classify_definiteness(sys.E, tol),
    }
    report.ranks = {"B": matrix_rank(sys.B, tol), "C": matrix_rank(sys.C, tol)}
    return report


def _embed(sys, x=None, y=None, z=None):
    """Place block-space vectors into a full-length vector [x; y; z]."""
    u = np.zeros(sys.ell)
    if x is not None:
        u[:sys.n] = x
    if y is not None:
        u[sys.n:sys.n + sys.m] = y
    if z is not None:
        u[sys.n + sys.m:] = z
    return u


def necessary_conditions(sys: BlockSystem, tol: ToleranceConfig | None = None) -> ConditionReport:
    """Check the three kernel-intersection conditions N1, N2, N3.

    Any failure certifies singularity: a nonzero x in ker(A) ∩ ker(B) gives
    the kernel vector [x; 0; 0], a nonzero y in the N2 intersection gives
    [0; y; 0], and a nonzero z in the N3 intersection gives [0; 0; z].
    """
    tol = resolve(tol)
    report = ConditionReport()
    n1 = intersection_kernels([sys.A, sys.B], tol)
    n2 = intersection_kernels([sys.B.T, sys.D, sys.C], tol)
    n3 = intersection_kernels([sys.C.T, sys.E], tol)
    for cond_id, basis in (("N1", n1), ("N2", n2), ("N3", n3)):
        report.add(ConditionEntry(cond_id, basis.is_trivial,
                                  None if basis.is_trivial else _unit(basis.basis[:, 0])))
    report.definiteness = {}
    report.ranks = {}
    return report


def _necessary_failure(sys, report, tol):
    """Singular diagnosis from the first failed necessary condition, if any."""
    for cond_id, embed in (("N1", "x"), ("N2", "y"), ("N3", "z")):
        if not report.holds(cond_id):
            w = report.witness(cond_id)
            u = _embed(sys, **{embed: w})
            return _singular(sys, f"necessary:{cond_id}", u, report, tol)
    return None


def schur_sufficient(sys: BlockSystem, tol: ToleranceConfig | None = None, *,
                     report: ConditionReport | None = None) -> Diagnosis:
    """Sufficient test through the two Schur complements.

    When A is numerically nonsingular, forms S1 = D + B A^{-1} B^T and, when
    S1 is nonsingular, S2 = E + C S1^{-1} C^T.  Both nonsingular certifies
    invertibility.  The rule is one-sided: anything else is undetermined.
    """
    tol = resolve(tol)
    report = condition_report(sys, tol) if report is None else report
    if not is_nonsingular(sys.A, tol):
        return _undetermined(report)
    s1 = sys.D + sys.B @ sla.solve(sys.A, sys.B.T, assume_a="sym")
    if not is_nonsingular(s1, tol):
        return _undetermined(report)
    s2 = sys.E + sys.C @ sla.solve(s1, sys.C.T, assume_a="sym")
    if not is_nonsingular(s2, tol):
        return _undetermined(report)
    return _invertible("schur_sufficient", report)


def _all_psd(report, *names):
    return all(report.definiteness[name].is_psd for name in names)


def psd_ladder(sys: BlockSystem, tol: ToleranceConfig | None = None, *,
               report: ConditionReport | None = None) -> Diagnosis:
    """Sufficient conditions under semidefinite diagonal blocks.

    Requires A, D, E positive semidefinite and N2.  Fires the first case
    that matches:

      case 1: A positive definite and N3        -> invertible
      case 2: E positive definite and N1        -> invertible
      case 3: R together with N3 and N1         -> invertible
    """
    tol = resolve(tol)
    report = condition_report(sys, tol) if report is None else report
    if not _all_psd(report, "A", "D", "E") or not report.holds("N2"):
        return _undetermined(report)
    if report.definiteness["A"] is Definiteness.POSITIVE_DEFINITE and report.holds("N3"):
        return _invertible("psd_ladder:case1", report)
    if report.definiteness["E"] is Definiteness.POSITIVE_DEFINITE and report.holds("N1"):
        return _invertible("psd_ladder:case2", report)
    if report.holds("R") and report.holds("N3") and report.holds("N1"):
        return _invertible("psd_ladder:case3", report)
    return _undetermined(report)


def corollary_rules(sys: BlockSystem, tol: ToleranceConfig | None = None, *,
                    report: ConditionReport | None = None) -> Diagnosis:
    """Three if-and-only-if special cases with one zero diagonal block.

      A = 0, D and E positive definite, m >= n:  invertible iff rank(B) = n
      E = 0, A and D positive definite, m >= p:  invertible iff rank(C) = p
      D = 0, A and E positive definite:          invertible iff
                                                 ker(B^T) ∩ ker(C) = {0}

    When a corollary applies the verdict is definitive; singular verdicts
    carry the witness from the corresponding kernel.
    """
    tol = resolve(tol)
    report = condition_report(sys, tol) if report is None else report
    pd = Definiteness.POSITIVE_DEFINITE

    if _is_zero_block(sys.A) and sys.m >= sys.n \
            and report.definiteness["D"] is pd and report.definiteness["E"] is pd:
        if report.ranks["B"] == sys.n:
            return _invertible("corollary_b_full_rank", report)
        x = kernel_basis(sys.B, tol).basis[:, 0]
        return _singular(sys, "corollary_b_full_rank", _embed(sys, x=x), report, tol)

    if _is_zero_block(sys.E) and sys.m >= sys.p \
            and report.definiteness["A"] is pd and report.definiteness["D"] is pd:
        if report.ranks["C"] == sys.p:
            return _invertible("corollary_c_full_rank", report)
        z = kernel_basis(sys.C.T, tol).basis[:, 0]
        return _singular(sys, "corollary_c_full_rank", _embed(sys, z=z), report, tol)

    if _is_zero_block(sys.D) \
            and report.definiteness["A"] is pd and report.definiteness["E"] is pd:
        middle = intersection_kernels([sys.B.T, sys.C], tol)
        if middle.is_trivial:
            return _invertible("corollary_middle_kernels", report)
        return _singular(sys, "corollary_middle_kernels",
                         _embed(sys, y=middle.basis[:, 0]), report, tol)

    return _undetermined(report)


def _split_along(vector, part_one: np.ndarray, part_two: np.ndarray):
    """Decompose vector = u1 + u2 with u_i in span(part_i) of a direct sum."""
    stacked = np.hstack([part_one, part_two])
    coeff = np.linalg.solve(stacked, vector)
    k = part_one.shape[1]
    return part_one @ coeff[:k], part_two @ coeff[k:]


def direct_sum_iff(sys: BlockSystem, tol: ToleranceConfig | None = None, *,
                   report: ConditionReport | None = None) -> Diagnosis:
    """Range-overlap test that becomes definitive under direct sums.

    Hypotheses: A, D, E positive semidefinite with N1, N3 and N2 holding.
    R then implies invertibility.  When R fails while both DS1 and DS2 hold,
    the system is singular: for a shared direction w = B x = C^T z, splitting
    x along ker(A) (+) ker(B) and z along ker(E) (+) ker(C^T) leaves
    w = B x1 = C^T z1, and [x1; 0; -z1] is a kernel vector.
    """
    tol = resolve(tol)
    report = condition_report(sys, tol) if report is None else report
    if not _all_psd(report, "A", "D", "E"):
        return _undetermined(report)
    if not (report.holds("N1") and report.holds("N3") and report.holds("N2")):
        return _undetermined(report)
    if report.holds("R"):
        return _invertible("direct_sum_iff", report)
    if not (report.holds("DS1") and report.holds("DS2")):
        return _undetermined(report)

    w = report.witness("R")
    x = np.linalg.lstsq(sys.B, w, rcond=None)[0]
    z = np.linalg.lstsq(sys.C.T, w, rcond=None)[0]
    x1, _ = _split_along(x, kernel_basis(sys.A, tol).basis, kernel_basis(sys.B, tol).basis)
    z1, _ = _split_along(z, kernel_basis(sys.E, tol).basis, kernel_basis(sys.C.T, tol).basis)
    return _singular(sys, "direct_sum_iff", _embed(sys, x=x1, z=-z1), report, tol)


def rank_b_iff(sys: BlockSystem, tol: ToleranceConfig | None = None, *,
               report: ConditionReport | None = None) -> Diagnosis:
    """Range-overlap rule for full-row-rank B, definitive when E = 0.

    Hypotheses: N3, n >= m, rank(B) = m, DS1, and A positive semidefinite.
    R implies invertibility.  When E is the zero block and R fails, the
    system is singular with witness [-x1; 0; z] built from a shared range
    direction w = B x = C^T z and the ker(A) component x1 of x.
    """
    tol = resolve(tol)
    report = condition_report(sys, tol) if report is None else report
    applicable = (report.holds("N3") and sys.n >= sys.m
                  and report.ranks["B"] == sys.m and report.holds("DS1")
                  and report.definiteness["A"].is_psd)
    if not applicable:
        return _undetermined(report)
    if report.holds("R"):
        return _invertible("rank_b_iff", report)
    if not _is_zero_block(sys.E):
        return _undetermined(report)
    w = report.witness("R")
    x = np.linalg.lstsq(sys.B, w, rcond=None)[0]
    z = np.linalg.lstsq(sys.C.T, w, rcond=None)[0]
    x1, _ = _split_along(x, kernel_basis(sys.A, tol).basis, kernel_basis(sys.B, tol).basis)
    return _singular(sys, "rank_b_iff", _embed(sys, x=-x1, z=z), report, tol)


def rank_c_iff(sys: BlockSystem, tol: ToleranceConfig | None = None, *,
               report: ConditionReport | None = None) -> Diagnosis:
    """Mirror of :func:`rank_b_iff` acting through the block reversal.

    Applies the full-row-rank rule to the reversed system (hypotheses become
    N1, p >= m, rank(C) = m, DS2, E positive semidefinite; the zero block is
    A) and maps the verdict back through the permutation.
    """
    tol = resolve(tol)
    reversed_sys = permute_similar(sys, tol)
    inner = rank_b_iff(reversed_sys, tol)
    report = condition_report(sys, tol) if report is None else report
    if inner.verdict is Verdict.INVERTIBLE:
        return _invertible("rank_c_iff", report)
    if inner.verdict is Verdict.SINGULAR:
        # K = Q^T K_s Q, so a kernel vector of K_s pulls back through Q^T.
        u = block_reversal_permutation(*sys.dims).T @ inner.witness
        return _singular(sys, "rank_c_iff", u, report, tol)
    return _undetermined(report)


def e_iff_rule(sys: BlockSystem, tol: ToleranceConfig | None = None, *,
               report: ConditionReport | None = None) -> Diagnosis:
    """For a maximally rank-deficient leading block, E decides.

    Hypotheses: A and D positive semidefinite, N1, N2, N3, null(A) = m and
    lambda_max(D) < 2.  The system is then invertible exactly when E is
    nonsingular.  Singular verdicts take their witness from the kernel of
    the assembled matrix.  When lambda_max(D) >= 2, rescale the system first
    (see :func:`dsaddle.core.rescale_middle`).
    """
    tol = resolve(tol)
    report = condition_report(sys, tol) if report is None else report
    hypotheses = (report.definiteness["A"].is_psd and report.definiteness["D"].is_psd
                  and report.holds("N1") and report.holds("N2") and report.holds("N3")
                  and kernel_basis(sys.A, tol).dim == sys.m
                  and lambda_max_sym(sys.D) < 2.0)
    if not hypotheses:
        return _undetermined(report)
    if is_nonsingular(sys.E, tol):
        return _invertible("e_iff", report)
    kernel = kernel_basis(assemble(sys).matrix, tol)
    if kernel.is_trivial:
        raise RuntimeError("E is numerically singular but the assembled matrix "
                           "has no kernel at this tolerance")
    return _singular(sys, "e_iff", kernel.basis[:, 0], report, tol)


def oracle_invertible(sys: BlockSystem, tol: ToleranceConfig | None = None) -> bool:
    """Ground truth by dense SVD of the assembled matrix."""
    return is_nonsingular(assemble(sys).matrix, tol)


_RULES = (schur_sufficient, e_iff_rule, corollary_rules, rank_b_iff,
          rank_c_iff, direct_sum_iff, psd_ladder)


def diagnose(sys: BlockSystem, tol: ToleranceConfig | None = None,
             with_oracle: bool = False) -> Diagnosis:
    """Run the whole ladder and return the first definitive verdict.

    Order: the necessary conditions (any failure short-circuits to
    singular), then schur_sufficient, e_iff_rule, corollary_rules,
    rank_b_iff, rank_c_iff, direct_sum_iff, psd_ladder.  The order is fixed
    so reports are reproducible.  With ``with_oracle`` the dense ground
    truth is attached to the diagnosis.
    """
    tol = resolve(tol)
    report = condition_report(sys, tol)
    result = _necessary_failure(sys, report, tol)
    if result is None:
        for rule in _RULES:
            candidate = rule(sys, tol, report=report)
            if candidate.verdict is not Verdict.UNDETERMINED:
                result = candidate
                break
        else:
            result = _undetermined(report)
    if with_oracle:
        result = Diagnosis(result.verdict, result.rule, result.report,
                           witness=result.witness,
                           oracle_check=oracle_invertible(sys, tol))
    return result
