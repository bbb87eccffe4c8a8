"""Brute-force verifier in a truncated photon-number space.

Everything here is deliberately independent of the closed-form model: states
are built from raw coherent-state expansions, photon loss is applied through
explicit Kraus operators (one exact application at transmissivity
eta = exp(-gt), no time stepping), and the cat-qubit matrix is recovered by
projecting onto the numerically orthonormalized even/odd cat pair.  A grid
optimizer over all projective measurements plays the same role for the
classical-correlations basis rule, and the spin-flip construction does so for
the X-state concurrence formula.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

from .correlations import classical_correlations, correlation_record, xstate_spectrum
from .errors import ParameterError, PositivityError, SupportError, TruncationError
from .model import ModelParams, XStateMatrix, build_xstate

__all__ = [
    "FockVector",
    "DensityOperator",
    "ChannelSpec",
    "CatProjection",
    "default_truncation",
    "coherent_fock",
    "initial_density",
    "amplitude_damping_kraus",
    "apply_kraus",
    "apply_channel_both_modes",
    "cat_pair",
    "project_to_cat_basis",
    "fock_channel_xstate",
    "brute_force_classical",
    "wootters_concurrence",
    "random_xstate",
    "VerifyPoint",
    "VerifyReport",
    "verify_point",
    "verify_grid",
    "DEFAULT_GRID_NBARS",
    "DEFAULT_GRID_PS",
    "DEFAULT_GRID_GTS",
]

TAIL_TOL = 1e-12
COMPLETENESS_TOL = 1e-10
DEGENERATE_CAT_TOL = 1e-8
# Full eigenvalue validation of a DensityOperator is O(dim^3); above this
# dimension it only runs on request via validate_full().
EIG_CHECK_MAX_DIM = 1100

DEFAULT_GRID_NBARS = (0.5, 1.0, 3.0, 10.0)
DEFAULT_GRID_PS = (0.0, 0.3, 0.5, 1.0)
DEFAULT_GRID_GTS = (0.0, 0.1, 0.5, 1.0, 2.0, 5.0)


def default_truncation(nbar: float) -> int:
    """Photon-number cutoff: nbar + 10*sqrt(nbar) + 20, rounded up.

    Coherent tails decay super-exponentially past nbar + O(sqrt(nbar)), so
    this keeps the neglected mass far below TAIL_TOL; adequacy is also
    asserted per state and by truncation-doubling checks.
    """
    return int(math.ceil(nbar + 10.0 * math.sqrt(nbar) + 20.0))


@dataclass(frozen=True, eq=False)
class FockVector:
    """Photon-number amplitudes of a single-mode pure state.

    amplitudes    complex array of length truncation + 1, normalized
    truncation    highest retained photon number N
    norm_deficit  probability mass beyond N before renormalization
    """

    amplitudes: np.ndarray
    truncation: int
    norm_deficit: float = 0.0


def coherent_fock(alpha: complex, N: int) -> FockVector:
    """Coherent state |alpha> truncated at photon number N.

    Amplitudes exp(-|alpha|^2/2) * alpha^n / sqrt(n!), built by recurrence and
    renormalized.  Raises TruncationError (naming an adequate N) if the
    truncated tail mass is TAIL_TOL or more.
    """
    if N < 0:
        raise ParameterError(f"truncation must be >= 0, got {N}")
    amps = np.zeros(N + 1, dtype=complex)
    amps[0] = math.exp(-abs(alpha) ** 2 / 2.0)
    for n in range(1, N + 1):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n)
    norm_sq = float(np.vdot(amps, amps).real)
    deficit = 1.0 - norm_sq
    if deficit >= TAIL_TOL:
        needed = int(poisson.isf(TAIL_TOL / 10.0, abs(alpha) ** 2)) + 1
        raise TruncationError(
            f"tail mass {deficit:.3e} at N={N} for |alpha|^2={abs(alpha)**2:.4g}; "
            f"use N >= {max(needed, N + 1)}"
        )
    return FockVector(
        amplitudes=amps / math.sqrt(norm_sq), truncation=N, norm_deficit=deficit
    )


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Dense two-mode density matrix on the truncated Fock space.

    Validates hermiticity (1e-12) and unit trace (1e-10) on construction; the
    eigenvalue floor (-1e-9) is checked on construction only up to
    EIG_CHECK_MAX_DIM and always by validate_full().
    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ParameterError(f"density matrix must be square, got {m.shape}")
        herm_dev = float(np.max(np.abs(m - m.conj().T)))
        if herm_dev > 1e-12:
            raise PositivityError(f"matrix not Hermitian: deviation {herm_dev:.3e}")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > 1e-10:
            raise PositivityError(f"trace {tr!r} deviates from 1 beyond 1e-10")
        if self.dim <= EIG_CHECK_MAX_DIM:
            self.validate_full()

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def mode_dim(self) -> int:
        d = math.isqrt(self.dim)
        if d * d != self.dim:
            raise ParameterError(f"dimension {self.dim} is not a two-mode square")
        return d

    def validate_full(self) -> None:
        smallest = float(np.linalg.eigvalsh(self.matrix)[0])
        if smallest < -1e-9:
            raise PositivityError(f"smallest eigenvalue {smallest:.3e} below -1e-9")


@dataclass(frozen=True)
class ChannelSpec:
    """Photon-loss channel: transmissivity eta = exp(-gt) and cutoff N."""

    eta: float
    truncation: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.eta) and 0.0 <= self.eta <= 1.0):
            raise ParameterError(f"eta must lie in [0, 1], got {self.eta!r}")
        if self.truncation < 0:
            raise ParameterError(f"truncation must be >= 0, got {self.truncation}")


def amplitude_damping_kraus(spec: ChannelSpec) -> np.ndarray:
    """Kraus operators of single-mode photon loss on the truncated space.

    <n-k| K_k |n> = sqrt(C(n,k) (1-eta)^k eta^(n-k)), assembled in log space.
    Completeness sum(K_k^T K_k) = 1 holds exactly on the truncated space
    (loss only moves photon number down) and is asserted to COMPLETENESS_TOL.
    Returns an array of shape (num_ops, N+1, N+1); exactly-zero operators
    (eta = 1 leaves only the identity) are dropped.
    """
    N = spec.truncation
    d = N + 1
    eta = spec.eta
    if eta == 1.0:
        ops = np.eye(d)[np.newaxis, :, :]
    elif eta == 0.0:
        ops = np.zeros((d, d, d))
        for k in range(d):
            ops[k, 0, k] = 1.0
    else:
        ops = np.zeros((d, d, d))
        log_eta = math.log(eta)
        log_loss = math.log1p(-eta)
        lg = gammaln(np.arange(d + 1, dtype=float) + 1.0)
        for k in range(d):
            n = np.arange(k, d)
            log_amp = 0.5 * (
                lg[n] - lg[k] - lg[n - k] + k * log_loss + (n - k) * log_eta
            )
            ops[k, n - k, n] = np.exp(log_amp)
    completeness = np.einsum("kji,kjl->il", ops, ops)
    dev = float(np.max(np.abs(completeness - np.eye(d))))
    if dev > COMPLETENESS_TOL:
        raise PositivityError(f"Kraus completeness deviation {dev:.3e}")
    return ops


def apply_kraus(matrix: np.ndarray, kraus: Sequence[np.ndarray]) -> np.ndarray:
    """sum_k K_k rho K_k^dagger for a single-mode density matrix."""
    out = np.zeros_like(np.asarray(matrix, dtype=complex))
    for k in kraus:
        out += k @ matrix @ k.conj().T
    return out


def initial_density(params: ModelParams, N: int) -> DensityOperator:
    """Initial two-mode mixture in the truncated Fock space.

    Weight p on the same-sign entangled branch (|a,a> + |-a,-a>) and 1-p on
    the opposite-sign branch (|a,-a> + |-a,a>), both normalized by the exact
    two-mode overlap norm sqrt(2*(1 + exp(-4*nbar))).
    """
    alpha = math.sqrt(params.nbar)
    plus = coherent_fock(alpha, N).amplitudes
    minus = coherent_fock(-alpha, N).amplitudes
    norm = math.sqrt(2.0 * (1.0 + math.exp(-4.0 * params.nbar)))
    same = (np.kron(plus, plus) + np.kron(minus, minus)) / norm
    opposite = (np.kron(plus, minus) + np.kron(minus, plus)) / norm
    rho = params.p * np.outer(same, same.conj()) + (1.0 - params.p) * np.outer(
        opposite, opposite.conj()
    )
    return DensityOperator(matrix=rho)


def _mode_superoperator(kraus: np.ndarray) -> np.ndarray:
    """(d^2, d^2) matrix acting on the (row, column) index pair of one mode."""
    d = kraus.shape[1]
    return np.einsum("knm,kNM->nNmM", kraus, kraus.conj()).reshape(d * d, d * d)


def apply_channel_both_modes(rho: DensityOperator, spec: ChannelSpec) -> DensityOperator:
    """Apply the loss channel independently to both modes, in one shot.

    The full transmissivity eta(t) is applied at once (the channel family
    composes as eta1*eta2, so stepping would only add error).  Implemented by
    grouping each mode's (row, column) indices and applying the one-mode
    superoperator as a single matrix product per mode.
    """
    d = spec.truncation + 1
    if rho.dim != d * d:
        raise ParameterError(
            f"dimension mismatch: state dim {rho.dim}, channel expects {d * d}"
        )
    S = _mode_superoperator(amplitude_damping_kraus(spec))
    t = rho.matrix.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)
    t = (S @ t).reshape(d, d, d, d).transpose(0, 2, 1, 3)
    t = t.reshape(d, d, d, d).transpose(1, 3, 0, 2).reshape(d * d, d * d)
    t = (S @ t).reshape(d, d, d, d).transpose(2, 0, 3, 1).reshape(d * d, d * d)
    return DensityOperator(matrix=t)


def cat_pair(alpha_t: float, N: int) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal even/odd cat pair built from |alpha_t> and |-alpha_t>.

    The sum/difference of the two coherent expansions splits exactly into
    even/odd photon numbers, so the pair is orthogonal by construction; each
    is normalized numerically and the norms are cross-checked against the
    closed-form overlap exp(-2*alpha_t^2).  Rejects alpha_t^2 < 1e-8, where
    the odd cat degenerates.
    """
    a_sq = float(alpha_t) ** 2
    if a_sq < DEGENERATE_CAT_TOL:
        raise ParameterError(
            f"cat basis degenerate: alpha_t^2 = {a_sq:.3e} < {DEGENERATE_CAT_TOL}"
        )
    plus = coherent_fock(alpha_t, N).amplitudes.real
    minus = coherent_fock(-alpha_t, N).amplitudes.real
    even = plus + minus
    odd = plus - minus
    overlap = math.exp(-2.0 * a_sq)
    for vec, expected in ((even, 2.0 * (1.0 + overlap)), (odd, 2.0 * (1.0 - overlap))):
        norm_sq = float(vec @ vec)
        if abs(norm_sq - expected) > 1e-8 * max(expected, 1.0):
            raise TruncationError(
                f"cat norm {norm_sq!r} deviates from closed form {expected!r}; "
                "increase the truncation"
            )
    return even / np.linalg.norm(even), odd / np.linalg.norm(odd)


_NON_X_SLOTS = ((0, 1), (0, 2), (1, 0), (2, 0), (1, 3), (2, 3), (3, 1), (3, 2))


@dataclass(frozen=True, eq=False)
class CatProjection:
    """Projection of a two-mode state onto the 4-dim cat-qubit manifold.

    raw        the unnormalized 4x4 projected matrix
    xstate     X entries renormalized by the projected trace
    leakage    trace weight outside the cat manifold
    max_non_x  largest magnitude on the eight X-zero slots of raw
    """

    raw: np.ndarray
    xstate: XStateMatrix
    leakage: float
    max_non_x: float


def _assemble_projection(raw: np.ndarray, total_trace: float) -> CatProjection:
    projected_trace = float(np.trace(raw).real)
    leakage = total_trace - projected_trace
    max_non_x = max(abs(complex(raw[i, j])) for i, j in _NON_X_SLOTS)
    scale = 1.0 / projected_trace
    inner = 0.5 * (raw[1, 1].real + raw[2, 2].real) * scale
    x = XStateMatrix(
        r11=raw[0, 0].real * scale,
        r22=inner,
        r33=inner,
        r44=raw[3, 3].real * scale,
        r14=0.5 * (raw[0, 3] + raw[3, 0]).real * scale,
        r23=0.5 * (raw[1, 2] + raw[2, 1]).real * scale,
    )
    return CatProjection(raw=raw, xstate=x, leakage=leakage, max_non_x=max_non_x)


def project_to_cat_basis(
    rho: DensityOperator, alpha_t: float, max_leakage: float | None = None
) -> CatProjection:
    """All sixteen cat-basis matrix elements of a dense two-mode state.

    Returns the X entries (renormalized by the projected trace), the leakage
    1 - projected trace, and the largest non-X element.  When max_leakage is
    given, a larger leakage raises SupportError: the state left the cat
    manifold, which this family never does.
    """
    d = rho.mode_dim
    even, odd = cat_pair(alpha_t, d - 1)
    basis = np.stack(
        [np.kron(even, even), np.kron(even, odd), np.kron(odd, even), np.kron(odd, odd)],
        axis=1,
    )
    raw = basis.conj().T @ rho.matrix @ basis
    proj = _assemble_projection(raw, float(np.trace(rho.matrix).real))
    if max_leakage is not None and proj.leakage > max_leakage:
        raise SupportError(
            f"leakage {proj.leakage:.3e} above bound {max_leakage:.3e}"
        )
    return proj


def _pure_state_matrices(params: ModelParams, N: int) -> list[tuple[float, np.ndarray]]:
    """The two mixture branches as (weight, d x d coefficient matrix)."""
    alpha = math.sqrt(params.nbar)
    plus = coherent_fock(alpha, N).amplitudes.real
    minus = coherent_fock(-alpha, N).amplitudes.real
    norm = math.sqrt(2.0 * (1.0 + math.exp(-4.0 * params.nbar)))
    same = (np.outer(plus, plus) + np.outer(minus, minus)) / norm
    opposite = (np.outer(plus, minus) + np.outer(minus, plus)) / norm
    out = []
    if params.p > 0.0:
        out.append((params.p, same))
    if params.p < 1.0:
        out.append((1.0 - params.p, opposite))
    return out


def fock_channel_xstate(
    params: ModelParams, gt: float, truncation: int | None = None
) -> CatProjection:
    """Channel-evolved cat-basis matrix, computed per mixture branch.

    Mathematically identical to initial_density -> apply_channel_both_modes
    -> project_to_cat_basis (the Kraus sum is reorganized around the two pure
    branches so the full two-mode density matrix is never materialized),
    which keeps the whole verification grid fast; the equivalence of the two
    pipelines is itself under test.
    """
    if not (isinstance(gt, (int, float)) and math.isfinite(gt)) or gt < 0.0:
        raise ParameterError(f"gt must be finite and >= 0, got {gt!r}")
    N = default_truncation(params.nbar) if truncation is None else truncation
    eta = math.exp(-gt)
    alpha_t = math.sqrt(params.nbar * eta)
    kraus = amplitude_damping_kraus(ChannelSpec(eta=eta, truncation=N))
    even, odd = cat_pair(alpha_t, N)
    cats = np.stack([even, odd])
    # u[s, k, :] = eta_s^T K_k; q = sum_k K_k^T K_k (identity up to rounding,
    # kept explicit so the reported channel trace is measured, not assumed)
    u = np.einsum("kab,sa->skb", kraus, cats)
    q = np.einsum("kab,kac->bc", kraus, kraus)
    raw = np.zeros((4, 4))
    total_trace = 0.0
    for weight, mat in _pure_state_matrices(params, N):
        y = np.einsum("ska,ab->skb", u, mat)
        proj = np.einsum("skb,tlb->stkl", y, u).reshape(4, -1)
        raw += weight * (proj @ proj.T)
        total_trace += weight * float(np.einsum("ab,bc,dc,ad->", q, mat, q, mat))
    return _assemble_projection(raw.astype(complex), total_trace)


class BruteForceResult(NamedTuple):
    value: float
    theta: float
    phi: float


def _conditional_entropy_angles(
    rho_tensor: np.ndarray, theta: np.ndarray, phi: np.ndarray
) -> np.ndarray:
    """Post-measurement entropy of a for Bloch-angle projector pairs on b.

    Conditional blocks are obtained by explicit projector sandwiching and
    partial trace (no X-structure shortcuts), vectorized over angle arrays.
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    v = np.stack(
        [np.cos(theta / 2.0) + 0j, np.sin(theta / 2.0) * np.exp(1j * phi)], axis=-1
    )
    w = np.stack([v[..., 1].conj(), -v[..., 0].conj()], axis=-1)
    total = np.zeros(theta.shape)
    for proj in (v, w):
        block = np.einsum("xiyj,...i,...j->...xy", rho_tensor, proj.conj(), proj)
        weight = np.einsum("...xx->...", block).real
        a = block[..., 0, 0].real
        d = block[..., 1, 1].real
        off = block[..., 0, 1]
        gap = np.sqrt((a - d) ** 2 + 4.0 * (off.real ** 2 + off.imag ** 2))
        lam1 = np.clip((weight + gap) / 2.0, 0.0, None)
        lam2 = np.clip((weight - gap) / 2.0, 0.0, None)
        with np.errstate(divide="ignore", invalid="ignore"):
            ent = -np.where(lam1 > 0, lam1 * np.log2(np.where(lam1 > 0, lam1, 1.0)), 0.0)
            ent -= np.where(lam2 > 0, lam2 * np.log2(np.where(lam2 > 0, lam2, 1.0)), 0.0)
            ent += np.where(weight > 0, weight * np.log2(np.where(weight > 0, weight, 1.0)), 0.0)
        total += ent
    return total


def _golden_minimize(f, lo: float, hi: float, tol: float = 1e-8) -> tuple[float, float]:
    ratio = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - ratio * (hi - lo)
    d = lo + ratio * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - ratio * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + ratio * (hi - lo)
            fd = f(d)
    mid = 0.5 * (lo + hi)
    return mid, f(mid)


def brute_force_classical(
    x: XStateMatrix, coarse: int = 181, refine_iters: int = 6
) -> BruteForceResult:
    """Grid search over all projective measurements on b, then local refine.

    theta runs over [0, pi] and phi over [0, pi) (phi -> phi + pi maps a
    projector pair to itself), `coarse` points per axis, followed by
    alternating golden-section refinement of each angle to 1e-8.  Returns the
    classical-correlations value S(rho_a) - min conditional entropy together
    with the minimizing angles.
    """
    rho_tensor = x.as_matrix().reshape(2, 2, 2, 2)
    thetas = np.linspace(0.0, math.pi, coarse)
    phis = np.linspace(0.0, math.pi, coarse, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    surface = _conditional_entropy_angles(rho_tensor, tt, pp)
    i, j = np.unravel_index(int(np.argmin(surface)), surface.shape)
    theta, phi = float(thetas[i]), float(phis[j])
    best = float(surface[i, j])

    theta_step = math.pi / (coarse - 1)
    phi_step = math.pi / coarse
    for _ in range(refine_iters):
        lo = max(0.0, theta - theta_step)
        hi = min(math.pi, theta + theta_step)
        theta, best = _golden_minimize(
            lambda t: float(_conditional_entropy_angles(rho_tensor, np.array(t), np.array(phi))),
            lo,
            hi,
        )
        lo, hi = phi - phi_step, phi + phi_step
        phi, best = _golden_minimize(
            lambda q: float(
                _conditional_entropy_angles(rho_tensor, np.array(theta), np.array(q % math.pi))
            ),
            lo,
            hi,
        )
        phi %= math.pi

    rho_a = np.einsum("xiyi->xy", rho_tensor)
    eigs = np.clip(np.linalg.eigvalsh(rho_a), 0.0, None)
    s_a = float(-np.sum(eigs[eigs > 0] * np.log2(eigs[eigs > 0])))
    return BruteForceResult(value=s_a - best, theta=theta, phi=phi)


_SPIN_FLIP = np.array(
    [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ]
)


def wootters_concurrence(rho4: np.ndarray) -> float:
    """Two-qubit concurrence via the full spin-flip construction.

    max(0, l1 - l2 - l3 - l4) where l_i are the decreasing square roots of the
    eigenvalues of rho (sy x sy) rho* (sy x sy).  Oracle for the X-state
    closed form.
    """
    rho = np.asarray(rho4, dtype=complex)
    if rho.shape != (4, 4):
        raise ParameterError(f"expected a 4x4 matrix, got shape {rho.shape}")
    if float(np.max(np.abs(rho - rho.conj().T))) > 1e-10:
        raise PositivityError("density matrix not Hermitian")
    smallest = float(np.linalg.eigvalsh(rho)[0])
    if smallest < -1e-9:
        raise PositivityError(f"smallest eigenvalue {smallest:.3e} below -1e-9")
    flipped = rho @ _SPIN_FLIP @ rho.conj() @ _SPIN_FLIP
    roots = np.sqrt(np.clip(np.linalg.eigvals(flipped).real, 0.0, None))
    roots[::-1].sort()
    return float(max(0.0, roots[0] - roots[1] - roots[2] - roots[3]))


def random_xstate(rng: np.random.Generator) -> XStateMatrix:
    """Random valid real X-state of this family (r22 = r33, bounded coherences)."""
    diag = rng.dirichlet(np.ones(4))
    inner = 0.5 * (diag[1] + diag[2])
    r14 = (2.0 * rng.random() - 1.0) * math.sqrt(diag[0] * diag[3])
    r23 = (2.0 * rng.random() - 1.0) * inner
    return XStateMatrix(
        r11=float(diag[0]), r22=float(inner), r33=float(inner), r44=float(diag[3]),
        r14=float(r14), r23=float(r23),
    )


@dataclass(frozen=True)
class VerifyPoint:
    """One verification point: analytic matrix vs Fock-channel projection."""

    nbar: float
    p: float
    gt: float
    entry_error: float
    leakage: float
    max_non_x: float
    discord_gap: float
    doubling_dev: float
    trace_dev: float
    min_eigenvalue: float
    identity_dev: float
    channel_trace_dev: float


@dataclass(frozen=True)
class VerifyReport:
    """Aggregate of a verification sweep, with the spec'd tolerances applied."""

    points: tuple[VerifyPoint, ...]
    completeness_dev: float

    ENTRY_TOL = 1e-8
    LEAKAGE_TOL = 1e-10
    DISCORD_GAP_TOL = 1e-6
    DOUBLING_TOL = 1e-9
    TRACE_TOL = 1e-12
    EIGENVALUE_FLOOR = -1e-9
    IDENTITY_TOL = 1e-12
    CHANNEL_TRACE_TOL = 1e-10
    COMPLETENESS_TOL = 1e-10

    @property
    def max_entry_error(self) -> float:
        return max(pt.entry_error for pt in self.points)

    @property
    def max_leakage(self) -> float:
        return max(pt.leakage for pt in self.points)

    @property
    def max_non_x(self) -> float:
        return max(pt.max_non_x for pt in self.points)

    @property
    def max_discord_gap(self) -> float:
        return max(pt.discord_gap for pt in self.points)

    @property
    def max_doubling_dev(self) -> float:
        return max(pt.doubling_dev for pt in self.points)

    def failures(self) -> list[str]:
        problems = []
        for pt in self.points:
            where = f"(nbar={pt.nbar}, p={pt.p}, gt={pt.gt})"
            if pt.entry_error > self.ENTRY_TOL:
                problems.append(f"entry error {pt.entry_error:.3e} at {where}")
            if pt.leakage > self.LEAKAGE_TOL:
                problems.append(f"leakage {pt.leakage:.3e} at {where}")
            if pt.discord_gap > self.DISCORD_GAP_TOL:
                problems.append(f"discord gap {pt.discord_gap:.3e} at {where}")
            if pt.doubling_dev > self.DOUBLING_TOL:
                problems.append(f"doubling deviation {pt.doubling_dev:.3e} at {where}")
            if pt.trace_dev > self.TRACE_TOL:
                problems.append(f"trace deviation {pt.trace_dev:.3e} at {where}")
            if pt.min_eigenvalue < self.EIGENVALUE_FLOOR:
                problems.append(f"eigenvalue {pt.min_eigenvalue:.3e} at {where}")
            if pt.identity_dev > self.IDENTITY_TOL:
                problems.append(f"I=C+D deviation {pt.identity_dev:.3e} at {where}")
            if pt.channel_trace_dev > self.CHANNEL_TRACE_TOL:
                problems.append(f"channel trace dev {pt.channel_trace_dev:.3e} at {where}")
        if self.completeness_dev > self.COMPLETENESS_TOL:
            problems.append(f"Kraus completeness deviation {self.completeness_dev:.3e}")
        return problems

    @property
    def ok(self) -> bool:
        return not self.failures()


def verify_point(
    params: ModelParams,
    gt: float,
    truncation: int | None = None,
    check_doubling: bool = True,
    check_brute_force: bool = True,
) -> VerifyPoint:
    """Compare the analytic matrix against the Fock-channel oracle at one point."""
    N = default_truncation(params.nbar) if truncation is None else truncation
    analytic = build_xstate(params, gt)
    oracle = fock_channel_xstate(params, gt, N)
    entry_error = analytic.max_abs_difference(oracle.xstate)

    doubling_dev = 0.0
    if check_doubling:
        doubled = fock_channel_xstate(params, gt, 2 * N)
        doubling_dev = oracle.xstate.max_abs_difference(doubled.xstate)

    discord_gap = 0.0
    if check_brute_force:
        rule = classical_correlations(analytic)
        brute = brute_force_classical(analytic)
        discord_gap = brute.value - rule.value

    record = correlation_record(analytic, gt)
    eigenvalues = xstate_spectrum(analytic)
    return VerifyPoint(
        nbar=params.nbar,
        p=params.p,
        gt=gt,
        entry_error=entry_error,
        leakage=abs(oracle.leakage),
        max_non_x=oracle.max_non_x,
        discord_gap=discord_gap,
        doubling_dev=doubling_dev,
        trace_dev=abs(analytic.trace - 1.0),
        min_eigenvalue=min(eigenvalues),
        identity_dev=abs(record.mutual_info - record.classical - record.discord),
        channel_trace_dev=abs(
            (oracle.leakage + float(np.trace(oracle.raw).real)) - 1.0
        ),
    )


def _worker_count() -> int:
    raw = os.environ.get("CATCORR_WORKERS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def verify_grid(
    nbars: Sequence[float] = DEFAULT_GRID_NBARS,
    ps: Sequence[float] = DEFAULT_GRID_PS,
    gts: Sequence[float] = DEFAULT_GRID_GTS,
    truncation: int | None = None,
    check_doubling: bool = True,
    check_brute_force: bool = True,
) -> VerifyReport:
    """Run verify_point over a parameter grid (default: the standard sweep).

    Points are independent; CATCORR_WORKERS > 1 evaluates them in a thread
    pool (results keep grid order either way).
    """
    tasks = [
        (ModelParams(nbar=nb, p=p), gt) for nb in nbars for p in ps for gt in gts
    ]

    def run(task):
        prm, gt = task
        return verify_point(
            prm,
            gt,
            truncation=truncation,
            check_doubling=check_doubling,
            check_brute_force=check_brute_force,
        )

    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            points = tuple(pool.map(run, tasks))
    else:
        points = tuple(run(t) for t in tasks)

    completeness_dev = 0.0
    for nb in nbars:
        N = default_truncation(nb) if truncation is None else truncation
        for gt in gts:
            ops = amplitude_damping_kraus(ChannelSpec(eta=math.exp(-gt), truncation=N))
            d = ops.shape[1]
            dev = float(
                np.max(np.abs(np.einsum("kji,kjl->il", ops, ops) - np.eye(d)))
            )
            completeness_dev = max(completeness_dev, dev)
    return VerifyReport(points=points, completeness_dev=completeness_dev)
