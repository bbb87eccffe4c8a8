"""Analytic model of two cat-state cavity modes under independent photon loss.

Two cavity modes start in a weighted incoherent mixture of two entangled
coherent-state superpositions (weight ``p`` on the same-sign branch) and decay
independently at rate ``gamma``.  In the time-dependent even/odd cat basis per
mode the joint state is an X-shaped two-qubit density matrix whose six
independent entries have closed forms driven by two envelopes:

    alpha_t^2     = nbar * exp(-gt)        (surviving coherent energy)
    alpha_bar_t^2 = nbar * (1 - exp(-gt))  (energy lost to the reservoirs)

This module produces those envelopes, the X-state entries, the stationary
mid-time plateau, and the characteristic times of the dynamics (plateau
window, sudden basis-switch time).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError

__all__ = [
    "ModelParams",
    "EnvelopeFactors",
    "XStateMatrix",
    "RegimeTimes",
    "compute_envelopes",
    "build_xstate",
    "plateau_xstate",
    "characteristic_times",
]

TRACE_TOL = 1e-12
POSITIVITY_SLACK = 1e-12
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Physical scenario: mean photon number, mixture weight, decay rate.

    nbar   mean photon number per mode (> 0, need not be an integer)
    p      weight of the same-sign entangled branch in the initial mixture
    gamma  cavity energy decay rate (> 0); times scale as 1/gamma
    """

    nbar: float
    p: float
    gamma: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.nbar) and self.nbar > 0.0):
            raise ParameterError(f"nbar must be finite and > 0, got {self.nbar!r}")
        if not (math.isfinite(self.p) and 0.0 <= self.p <= 1.0):
            raise ParameterError(f"p must lie in [0, 1], got {self.p!r}")
        if not (math.isfinite(self.gamma) and self.gamma > 0.0):
            raise ParameterError(f"gamma must be finite and > 0, got {self.gamma!r}")


@dataclass(frozen=True)
class EnvelopeFactors:
    """All time-dependent scalars feeding the X-state entries at one instant.

    gt                   dimensionless time gamma*t
    alpha_t_sq           nbar * exp(-gt)
    alpha_bar_t_sq       nbar * (1 - exp(-gt))
    gamma_plus_sq        2*(1 + exp(-2*alpha_t_sq)), even-cat norm squared
    gamma_minus_sq       2*(1 - exp(-2*alpha_t_sq)), odd-cat norm squared
    lambda_plus_sq       2*(1 + exp(-4*nbar)), initial two-mode norm (constant)
    lambda_bar_plus_sq   2*(1 + exp(-4*alpha_bar_t_sq))
    lambda_bar_minus_sq  2*(1 - exp(-4*alpha_bar_t_sq)), exactly 0 at gt = 0
    """

    gt: float
    alpha_t_sq: float
    alpha_bar_t_sq: float
    gamma_plus_sq: float
    gamma_minus_sq: float
    lambda_plus_sq: float
    lambda_bar_plus_sq: float
    lambda_bar_minus_sq: float


@dataclass(frozen=True)
class XStateMatrix:
    """Six independent real entries of the two-qubit X-state density matrix.

    Basis ordering is |e e>, |e o>, |o e>, |o o| where e/o are the even/odd
    cat states of each mode; r14 couples |e e> with |o o>, r23 couples the
    inner pair.  The mirror entries r41 = r14 and r32 = r23 are implied.
    """

    r11: float
    r22: float
    r33: float
    r44: float
    r14: float
    r23: float

    def __post_init__(self) -> None:
        tr = self.r11 + self.r22 + self.r33 + self.r44
        if abs(tr - 1.0) > TRACE_TOL:
            raise ParameterError(f"X-state trace {tr!r} deviates from 1 beyond {TRACE_TOL}")
        if self.r14 * self.r14 > self.r11 * self.r44 + POSITIVITY_SLACK:
            raise ParameterError("X-state outer block violates positivity: r14^2 > r11*r44")
        if self.r23 * self.r23 > self.r22 * self.r33 + POSITIVITY_SLACK:
            raise ParameterError("X-state inner block violates positivity: r23^2 > r22*r33")
        if abs(self.r22 - self.r33) > SYMMETRY_TOL:
            raise ParameterError("inner populations must satisfy r22 == r33 for this family")

    @property
    def trace(self) -> float:
        return self.r11 + self.r22 + self.r33 + self.r44

    def entries(self) -> tuple[float, float, float, float, float, float]:
        """The six independent entries as (r11, r22, r33, r44, r14, r23)."""
        return (self.r11, self.r22, self.r33, self.r44, self.r14, self.r23)

    def as_matrix(self):
        """Dense 4x4 real matrix in the even/odd product basis."""
        import numpy as np

        return np.array(
            [
                [self.r11, 0.0, 0.0, self.r14],
                [0.0, self.r22, self.r23, 0.0],
                [0.0, self.r23, self.r33, 0.0],
                [self.r14, 0.0, 0.0, self.r44],
            ]
        )

    def max_abs_difference(self, other: "XStateMatrix") -> float:
        return max(abs(a - b) for a, b in zip(self.entries(), other.entries()))


@dataclass(frozen=True)
class RegimeTimes:
    """Characteristic times of the dynamics, in units of 1/gamma.

    t1, t2     plateau (frozen-matrix) window boundaries; t1 exists only for
               nbar > 1, and the window itself only when t1 < t2 (nbar > 2)
    ts         sudden switch of the optimal measurement basis; absent when the
               mixture is balanced (p = 1/2), pure (p in {0, 1}), or when the
               defining equation has no positive root
    dfs_span   t2 - t1 when the plateau window exists
    note       set when no plateau window exists ("no mesoscopic window")
    """

    t1: float | None
    t2: float
    ts: float | None
    dfs_span: float | None
    note: str | None = None


def compute_envelopes(params: ModelParams, gt: float) -> EnvelopeFactors:
    """Evaluate all decay envelopes at dimensionless time gt.

    Uses expm1 for every 1 - exp(-x) so that the vanishing factors
    (alpha_bar_t_sq, gamma_minus_sq, lambda_bar_minus_sq) keep full relative
    precision near gt = 0 and near alpha_t = 0.
    """
    if not (isinstance(gt, (int, float)) and math.isfinite(gt)) or gt < 0.0:
        raise ParameterError(f"gt must be finite and >= 0, got {gt!r}")
    gt = float(gt)
    nbar = params.nbar
    alpha_t_sq = nbar * math.exp(-gt)
    alpha_bar_t_sq = -nbar * math.expm1(-gt)
    return EnvelopeFactors(
        gt=gt,
        alpha_t_sq=alpha_t_sq,
        alpha_bar_t_sq=alpha_bar_t_sq,
        gamma_plus_sq=2.0 * (1.0 + math.exp(-2.0 * alpha_t_sq)),
        gamma_minus_sq=-2.0 * math.expm1(-2.0 * alpha_t_sq),
        lambda_plus_sq=2.0 * (1.0 + math.exp(-4.0 * nbar)),
        lambda_bar_plus_sq=2.0 * (1.0 + math.exp(-4.0 * alpha_bar_t_sq)),
        lambda_bar_minus_sq=-2.0 * math.expm1(-4.0 * alpha_bar_t_sq),
    )


def build_xstate(params: ModelParams, gt: float) -> XStateMatrix:
    """Analytic X-state of the two-mode system at dimensionless time gt.

    With gp = gamma_plus_sq, gm = gamma_minus_sq, lp = lambda_plus_sq and
    lbp/lbm the bar-lambda pair, the entries are

        r11 = gp^2 * lbp / (16 lp)      r44 = gm^2 * lbp / (16 lp)
        r22 = r33 = gp*gm*lbm / (16 lp)
        r14 = (2p-1) * gp*gm*lbp / (16 lp)
        r23 = (2p-1) * gp*gm*lbm / (16 lp)

    The trace is identically 1 because exp(-4*alpha_t_sq) *
    exp(-4*alpha_bar_t_sq) = exp(-4*nbar).
    """
    env = compute_envelopes(params, gt)
    gp = env.gamma_plus_sq
    gm = env.gamma_minus_sq
    scale = 1.0 / (16.0 * env.lambda_plus_sq)
    lbp = env.lambda_bar_plus_sq
    lbm = env.lambda_bar_minus_sq
    weight = 2.0 * params.p - 1.0
    return XStateMatrix(
        r11=scale * gp * gp * lbp,
        r22=scale * gp * gm * lbm,
        r33=scale * gp * gm * lbm,
        r44=scale * gm * gm * lbp,
        r14=weight * scale * gp * gm * lbp,
        r23=weight * scale * gp * gm * lbm,
    )


def plateau_xstate(p: float) -> XStateMatrix:
    """Stationary mid-time matrix: uniform populations, coherences (2p-1)/4."""
    if not (math.isfinite(p) and 0.0 <= p <= 1.0):
        raise ParameterError(f"p must lie in [0, 1], got {p!r}")
    coh = (2.0 * p - 1.0) / 4.0
    return XStateMatrix(r11=0.25, r22=0.25, r33=0.25, r44=0.25, r14=coh, r23=coh)


def characteristic_times(params: ModelParams) -> RegimeTimes:
    """Plateau window boundaries, its span, and the basis-switch time.

    t1 = ln(nbar/(nbar-1))/gamma, t2 = ln(nbar)/gamma and the switch time
    ts = -ln(1 + ln|2p-1| / (4 nbar))/gamma.  Undefined times are returned as
    None rather than NaN so downstream regime logic must branch explicitly.
    t2 is always reported (it may be <= 0 for nbar <= 1) but the plateau
    window is flagged absent unless 0 < t1 < t2.
    """
    nbar = params.nbar
    inv_gamma = 1.0 / params.gamma
    t2 = inv_gamma * math.log(nbar)
    t1 = inv_gamma * math.log(nbar / (nbar - 1.0)) if nbar > 1.0 else None

    note = None
    dfs_span = None
    if t1 is None or t2 <= t1:
        note = "no mesoscopic window"
    else:
        dfs_span = inv_gamma * math.log(nbar - 1.0)

    ts = None
    q = abs(2.0 * params.p - 1.0)
    if 0.0 < q < 1.0:
        arg = 1.0 + math.log(q) / (4.0 * nbar)
        if arg > 0.0:
            ts = -inv_gamma * math.log(arg)

    return RegimeTimes(t1=t1, t2=t2, ts=ts, dfs_span=dfs_span, note=note)
