"""Channel reconstruction from a PDM and the causal-structure decision rule.

A cause-effect PDM satisfies R = {rho (x) I, J} / 2 where rho is the slot-1
marginal and J is the Choi matrix partially transposed on slot 1. Solving
that anticommutator equation in the eigenbasis of rho (x) I and undoing the
partial transpose recovers the Choi matrix, whose positivity decides whether
the ordering t1 -> t2 is consistent with a physical channel.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import linalg
from .errors import NonPositiveMarginalError
from .pdm import PDM, ExpectationTable, build_pdm, marginal_at_time, negativity, time_reverse
from .tolerances import DEFAULT


class Verdict(str, Enum):
    COMMON_CAUSE = "CommonCause"
    A_TO_B = "AtoB"
    B_TO_A = "BtoA"
    EITHER_DIRECTION = "EitherDirection"
    MIXTURE = "Mixture"

    def __str__(self):
        return self.value


DESCRIPTIONS = {
    Verdict.COMMON_CAUSE: "compatible with a common cause (no temporal signature in R)",
    Verdict.A_TO_B: "compatible with A -> B (only the forward Choi matrix is positive)",
    Verdict.B_TO_A: "compatible with B -> A (only the reversed Choi matrix is positive)",
    Verdict.EITHER_DIRECTION: "compatible with A -> B or B -> A (both Choi matrices positive)",
    Verdict.MIXTURE: "compatible with a mixture of common cause and causal influence",
}

SUPPORT_NOTE = "support-restricted: verdict valid on the support of rho"


@dataclass(frozen=True)
class ChoiReconstruction:
    choi: np.ndarray
    anticommutator_solution: np.ndarray
    residual: float
    rank_deficiency_flag: bool


@dataclass(frozen=True)
class CausalVerdict:
    tag: Verdict
    f_R: float
    f_AB: float
    f_BA: float
    epsilon: float
    flags: tuple = field(default=())

    def to_record(self) -> str:
        """Flat ``key=value`` text record, one field per line."""
        lines = [
            f"tag={self.tag.value}",
            f"f_R={self.f_R!r}",
            f"f_AB={self.f_AB!r}",
            f"f_BA={self.f_BA!r}",
            f"epsilon={self.epsilon!r}",
            f"flags={';'.join(self.flags)}",
        ]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_record(cls, text: str) -> "CausalVerdict":
        fields = dict(line.split("=", 1) for line in text.splitlines() if line.strip())
        flags = tuple(f for f in fields.get("flags", "").split(";") if f)
        return cls(
            Verdict(fields["tag"]),
            float(fields["f_R"]),
            float(fields["f_AB"]),
            float(fields["f_BA"]),
            float(fields["epsilon"]),
            flags,
        )


def extract_choi(r: PDM, rank_tol=DEFAULT.rank, atol=DEFAULT.exact) -> ChoiReconstruction:
    """Recover the Choi matrix of the t1 -> t2 channel from ``r``.

    When the slot-1 marginal is rank deficient the equation says nothing about
    the channel outside its support; the solution is then compressed onto the
    support of rho and ``rank_deficiency_flag`` is set.
    """
    rho = marginal_at_time(r, 1, atol)
    d1, d2 = 2**r.n1, 2**r.n2
    p_rho, v_rho = np.linalg.eigh((rho + rho.conj().T) / 2)
    if np.all(p_rho <= rank_tol):
        raise NonPositiveMarginalError("slot-1 marginal has empty support")
    p = np.repeat(p_rho, d2)
    w = np.kron(v_rho, np.eye(d2))
    r_eig = w.conj().T @ r.matrix @ w
    in_support = p > rank_tol
    flag = not bool(np.all(in_support))
    denom = p[:, None] + p[None, :]
    mask = in_support[:, None] & in_support[None, :]
    x_eig = np.zeros_like(r_eig)
    x_eig[mask] = 2 * r_eig[mask] / denom[mask]
    x = w @ x_eig @ w.conj().T
    # compare on the same block the solution was computed on
    resid_eig = (p[:, None] + p[None, :]) * x_eig / 2 - r_eig
    residual = float(np.max(np.abs(resid_eig[mask]))) if flag else float(
        np.max(np.abs(linalg.anticommutator(np.kron(rho, np.eye(d2)), x) / 2 - r.matrix))
    )
    choi = linalg.partial_transpose(x, [d1, d2], [0])
    return ChoiReconstruction(choi, x, residual, flag)


def classify(f_R: float, f_AB: float, f_BA: float, eps: float = DEFAULT.verdict) -> Verdict:
    """Match thresholded negativities against the five-row decision table."""
    if f_R <= eps:
        return Verdict.COMMON_CAUSE
    ab, ba = f_AB > eps, f_BA > eps
    if not ab and ba:
        return Verdict.A_TO_B
    if ab and not ba:
        return Verdict.B_TO_A
    if not ab and not ba:
        return Verdict.EITHER_DIRECTION
    return Verdict.MIXTURE


@dataclass(frozen=True)
class Analysis:
    """Everything the pipeline computed for one table."""

    pdm: PDM
    reversed_pdm: PDM
    forward: ChoiReconstruction
    backward: ChoiReconstruction
    verdict: CausalVerdict


def analyze_pdm(r: PDM, eps: float = DEFAULT.verdict, atol=DEFAULT.exact) -> Analysis:
    r_rev = time_reverse(r)
    forward = extract_choi(r, atol=atol)
    backward = extract_choi(r_rev, atol=atol)
    f_r = negativity(r.matrix)
    f_ab = negativity(forward.choi)
    f_ba = negativity(backward.choi)
    flags = ()
    if forward.rank_deficiency_flag or backward.rank_deficiency_flag:
        flags = (SUPPORT_NOTE,)
    verdict = CausalVerdict(classify(f_r, f_ab, f_ba, eps), f_r, f_ab, f_ba, eps, flags)
    return Analysis(r, r_rev, forward, backward, verdict)


def infer_causal_structure(
    table: ExpectationTable, eps: float = DEFAULT.verdict, atol=DEFAULT.exact
) -> CausalVerdict:
    """Table -> PDM -> negativity and both Choi reconstructions -> verdict."""
    return analyze_pdm(build_pdm(table, atol), eps, atol).verdict
