"""Entropies, mutual information, classical correlations, discord, concurrence.

All entropies are in bits (log base 2) with the convention 0*log(0) = 0.
Measurements act on subsystem b with a pair of orthogonal rank-1 projectors;
for a real X-state the optimum is one of the two Pauli-style bases (z: the
cat basis itself, x: its balanced superpositions), selected by two closed
positivity conditions on the matrix entries.  A brute-force Bloch-sphere
optimizer in the oracle module validates that rule instead of trusting it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ParameterError, PositivityError
from .model import ModelParams, XStateMatrix, build_xstate

__all__ = [
    "SIGMA_Z",
    "SIGMA_X",
    "MeasurementBasis",
    "CorrelationRecord",
    "ClassicalCorrelations",
    "clamp_stats",
    "xstate_spectrum",
    "von_neumann_entropy",
    "marginals",
    "conditional_entropy",
    "mutual_information",
    "classical_correlations",
    "discord",
    "concurrence_xstate",
    "correlation_record",
    "detect_switch_time",
]

EIGENVALUE_FLOOR = -1e-9
BASIS_TIE_TOL = 1e-12


@dataclass(frozen=True)
class MeasurementBasis:
    """Projective measurement basis on subsystem b.

    tag is one of "sigma_z", "sigma_x", "general"; theta/phi are the Bloch
    angles of the projector pair and are only meaningful for "general"
    (sigma_z corresponds to theta=0, sigma_x to theta=pi/2, phi=0).
    """

    tag: str
    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self) -> None:
        if self.tag not in ("sigma_z", "sigma_x", "general"):
            raise ParameterError(f"unknown basis tag {self.tag!r}")
        if self.tag == "general":
            if not (0.0 <= self.theta <= math.pi):
                raise ParameterError("theta must lie in [0, pi]")
            if not (0.0 <= self.phi < 2.0 * math.pi):
                raise ParameterError("phi must lie in [0, 2*pi)")

    def canonical(self) -> "MeasurementBasis":
        """Collapse general angles onto the named bases they coincide with."""
        if self.tag == "general":
            if self.theta == 0.0:
                return SIGMA_Z
            if self.theta == math.pi / 2.0 and self.phi == 0.0:
                return SIGMA_X
        return self

    def angles(self) -> tuple[float, float]:
        if self.tag == "sigma_z":
            return 0.0, 0.0
        if self.tag == "sigma_x":
            return math.pi / 2.0, 0.0
        return self.theta, self.phi


SIGMA_Z = MeasurementBasis(tag="sigma_z")
SIGMA_X = MeasurementBasis(tag="sigma_x")


@dataclass
class ClampStats:
    """Counters for numerical clamps applied while assembling records."""

    negative_discord: int = 0
    negative_mutual_info: int = 0

    def reset(self) -> None:
        self.negative_discord = 0
        self.negative_mutual_info = 0


clamp_stats = ClampStats()


@dataclass(frozen=True)
class CorrelationRecord:
    """All correlation quantities at one time point.

    discord = mutual_info - classical holds exactly by construction (classical
    is clipped into [0, mutual_info] first; clips are counted and flagged).
    """

    gt: float
    mutual_info: float
    classical: float
    discord: float
    concurrence: float
    optimal_basis: MeasurementBasis
    s_joint: float
    s_a: float
    s_b: float
    xstate: XStateMatrix
    flags: tuple[str, ...] = ()


def _entropy_term(lam: float) -> float:
    return -lam * math.log2(lam) if lam > 0.0 else 0.0


def von_neumann_entropy(spectrum) -> float:
    """Shannon entropy (bits) of an eigenvalue list; 0*log(0) := 0.

    Entries in [-1e-9, 0) are treated as 0; anything more negative raises
    PositivityError.
    """
    total = 0.0
    for lam in spectrum:
        lam = float(lam)
        if lam < EIGENVALUE_FLOOR:
            raise PositivityError(f"eigenvalue {lam!r} below floor {EIGENVALUE_FLOOR}")
        total += _entropy_term(lam)
    return total


def xstate_spectrum(x: XStateMatrix) -> tuple[float, float, float, float]:
    """Joint eigenvalues (descending): the two 2x2 X blocks in closed form."""
    outer = math.sqrt((x.r11 - x.r44) ** 2 + 4.0 * x.r14 ** 2)
    inner = math.sqrt((x.r22 - x.r33) ** 2 + 4.0 * x.r23 ** 2)
    vals = [
        (x.r11 + x.r44 + outer) / 2.0,
        (x.r11 + x.r44 - outer) / 2.0,
        (x.r22 + x.r33 + inner) / 2.0,
        (x.r22 + x.r33 - inner) / 2.0,
    ]
    vals.sort(reverse=True)
    return tuple(vals)


def marginals(x: XStateMatrix) -> tuple[tuple[float, float], tuple[float, float]]:
    """Eigenvalues of the two reduced states (diagonal in the cat basis)."""
    spectrum_a = (x.r11 + x.r22, x.r33 + x.r44)
    spectrum_b = (x.r11 + x.r33, x.r22 + x.r44)
    return spectrum_a, spectrum_b


def _binary_block_entropy(a: float, d: float, coherence_sq: float) -> float:
    """p * S(rho) for the unnormalized conditional block [[a, c], [c*, d]]."""
    weight = a + d
    if weight <= 0.0:
        return 0.0
    half_gap = math.sqrt((a - d) ** 2 + 4.0 * coherence_sq) / 2.0
    mean = weight / 2.0
    lam1 = max((mean + half_gap) / weight, 0.0)
    lam2 = max((mean - half_gap) / weight, 0.0)
    return weight * (_entropy_term(lam1) + _entropy_term(lam2))


def conditional_entropy(x: XStateMatrix, basis: MeasurementBasis) -> float:
    """Average post-measurement entropy of a after measuring b in `basis`.

    sigma_z leaves diagonal conditional states; sigma_x mixes the X blocks and
    feels the combined coherence r14 + r23; a general Bloch pair (theta, phi)
    interpolates with coherence weight |e^{i phi} r14 + e^{-i phi} r23|.
    """
    if basis.tag == "sigma_z":
        out = 0.0
        for a, d in ((x.r11, x.r33), (x.r22, x.r44)):
            weight = a + d
            if weight > 0.0:
                out += weight * (_entropy_term(a / weight) + _entropy_term(d / weight))
        return out
    if basis.tag == "sigma_x":
        gap = math.sqrt((x.r11 + x.r22 - x.r33 - x.r44) ** 2 + 4.0 * (x.r14 + x.r23) ** 2)
        return von_neumann_entropy(((1.0 + gap) / 2.0, (1.0 - gap) / 2.0))

    theta, phi = basis.angles()
    c2 = math.cos(theta / 2.0) ** 2
    s2 = math.sin(theta / 2.0) ** 2
    cs_sq = c2 * s2
    coh_sq = cs_sq * (
        x.r14 ** 2 + x.r23 ** 2 + 2.0 * x.r14 * x.r23 * math.cos(2.0 * phi)
    )
    first = _binary_block_entropy(c2 * x.r11 + s2 * x.r22, c2 * x.r33 + s2 * x.r44, coh_sq)
    second = _binary_block_entropy(s2 * x.r11 + c2 * x.r22, s2 * x.r33 + c2 * x.r44, coh_sq)
    return first + second


def mutual_information(x: XStateMatrix) -> float:
    """S(a) + S(b) - S(ab) in bits, clamped at 0 against rounding."""
    s_a = von_neumann_entropy(marginals(x)[0])
    s_b = von_neumann_entropy(marginals(x)[1])
    s_joint = von_neumann_entropy(xstate_spectrum(x))
    value = s_a + s_b - s_joint
    if value < EIGENVALUE_FLOOR:
        raise PositivityError(f"mutual information {value!r} below floor")
    if value < 0.0:
        clamp_stats.negative_mutual_info += 1
        return 0.0
    return value


@dataclass(frozen=True)
class ClassicalCorrelations:
    """Measurement-optimized classical correlations and how they were picked.

    flags may contain "degenerate_measurement" (z/x conditional entropies tie
    within 1e-12; sigma_z reported), "both_conditions" or "neither_condition"
    (the closed selection conditions did not single out one basis; the
    smaller conditional entropy was used).
    """

    value: float
    basis: MeasurementBasis
    s_cond_z: float
    s_cond_x: float
    sigma_z_condition: bool
    sigma_x_condition: bool
    flags: tuple[str, ...] = ()


def classical_correlations(x: XStateMatrix) -> ClassicalCorrelations:
    """Classical correlations S(a) - min over {sigma_z, sigma_x} measurements.

    The closed selection conditions for a real X-state are evaluated and
    reported: sigma_z is optimal when (|r23|+|r14|)^2 <= (r11-r22)(r44-r33),
    sigma_x when |sqrt(r11 r44) - sqrt(r22 r33)| <= |r23|+|r14|.  The returned
    value always uses the smaller of the two conditional entropies; when the
    conditions disagree with that choice (or both/neither hold) the result is
    flagged rather than silently accepted.
    """
    s_cond_z = conditional_entropy(x, SIGMA_Z)
    s_cond_x = conditional_entropy(x, SIGMA_X)
    coh_sum = abs(x.r23) + abs(x.r14)
    cond_z = coh_sum ** 2 <= (x.r11 - x.r22) * (x.r44 - x.r33)
    cond_x = (
        abs(math.sqrt(max(x.r11 * x.r44, 0.0)) - math.sqrt(max(x.r22 * x.r33, 0.0)))
        <= coh_sum
    )

    flags: list[str] = []
    if cond_z and cond_x:
        flags.append("both_conditions")
    elif not cond_z and not cond_x:
        flags.append("neither_condition")

    if abs(s_cond_z - s_cond_x) <= BASIS_TIE_TOL:
        basis = SIGMA_Z
        s_min = min(s_cond_z, s_cond_x)
        flags.append("degenerate_measurement")
    elif s_cond_z < s_cond_x:
        basis, s_min = SIGMA_Z, s_cond_z
    else:
        basis, s_min = SIGMA_X, s_cond_x

    s_a = von_neumann_entropy(marginals(x)[0])
    value = s_a - s_min
    if value < EIGENVALUE_FLOOR:
        raise PositivityError(f"classical correlations {value!r} below floor")
    value = max(value, 0.0)
    return ClassicalCorrelations(
        value=value,
        basis=basis,
        s_cond_z=s_cond_z,
        s_cond_x=s_cond_x,
        sigma_z_condition=cond_z,
        sigma_x_condition=cond_x,
        flags=tuple(flags),
    )


def discord(x: XStateMatrix) -> float:
    """Quantum discord: mutual information minus classical correlations.

    Tiny negative results (rounding near classically correlated states) are
    clamped to 0 and counted in clamp_stats.negative_discord.
    """
    value = mutual_information(x) - classical_correlations(x).value
    if value < EIGENVALUE_FLOOR:
        raise PositivityError(f"discord {value!r} below floor")
    if value < 0.0:
        clamp_stats.negative_discord += 1
        return 0.0
    return value


def concurrence_xstate(x: XStateMatrix) -> float:
    """Closed-form two-qubit concurrence for an X-state.

    2 * max(0, |r14| - sqrt(r22 r33), |r23| - sqrt(r11 r44)); the spin-flip
    eigenvalue construction in the oracle module cross-checks this.
    """
    outer = abs(x.r14) - math.sqrt(max(x.r22 * x.r33, 0.0))
    inner = abs(x.r23) - math.sqrt(max(x.r11 * x.r44, 0.0))
    return 2.0 * max(0.0, outer, inner)


def correlation_record(
    x: XStateMatrix, gt: float, extra_flags: tuple[str, ...] = ()
) -> CorrelationRecord:
    """Assemble the full CorrelationRecord for one state.

    classical is clipped into [0, mutual_info] so that the identity
    discord = mutual_info - classical holds exactly; a clip is flagged as
    "classical_clamped_to_mutual" and counted.
    """
    s_a = von_neumann_entropy(marginals(x)[0])
    s_b = von_neumann_entropy(marginals(x)[1])
    s_joint = von_neumann_entropy(xstate_spectrum(x))
    mutual = s_a + s_b - s_joint
    if mutual < EIGENVALUE_FLOOR:
        raise PositivityError(f"mutual information {mutual!r} below floor")
    if mutual < 0.0:
        clamp_stats.negative_mutual_info += 1
        mutual = 0.0

    classical = classical_correlations(x)
    flags = list(extra_flags) + list(classical.flags)
    value = classical.value
    if value > mutual:
        if value - mutual > 1e-9:
            raise PositivityError(
                f"classical correlations {value!r} exceed mutual information {mutual!r}"
            )
        clamp_stats.negative_discord += 1
        flags.append("classical_clamped_to_mutual")
        value = mutual

    return CorrelationRecord(
        gt=gt,
        mutual_info=mutual,
        classical=value,
        discord=mutual - value,
        concurrence=concurrence_xstate(x),
        optimal_basis=classical.basis,
        s_joint=s_joint,
        s_a=s_a,
        s_b=s_b,
        xstate=x,
        flags=tuple(flags),
    )


def detect_switch_time(
    params: ModelParams, bracket: tuple[float, float]
) -> float | None:
    """Locate the crossing of the sigma_z and sigma_x conditional entropies.

    Bisection on gt of f(gt) = S_cond_z - S_cond_x over `bracket`.  Returns
    None when f has the same sign at both endpoints (no basis switch inside).
    The result is the dimensionless switch time gamma*t.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not (0.0 <= lo < hi) or not (math.isfinite(lo) and math.isfinite(hi)):
        raise ParameterError(f"invalid bracket {bracket!r}")

    def gap(gt: float) -> float:
        x = build_xstate(params, gt)
        return conditional_entropy(x, SIGMA_Z) - conditional_entropy(x, SIGMA_X)

    f_lo = gap(lo)
    f_hi = gap(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0.0) == (f_hi > 0.0):
        return None
    while hi - lo > 1e-13:
        mid = 0.5 * (lo + hi)
        f_mid = gap(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
