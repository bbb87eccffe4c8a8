"""Time sweeps, regime segmentation, sudden death, and the plateau window.

A scan evaluates the full correlation record on a time grid.  Segmentation
then labels up to four dynamical regimes:

    I    discord frozen, classical correlations decaying
    II   classical frozen, discord decaying
    III  both frozen, discord below the freeze tolerance
    IV   classical decaying again (discord may show a small revival)

"Frozen" means the maximal deviation from the window median stays below
freeze_tol.  The I/II boundary is the measurement-basis switch, snapped to
the bisection result when available; the II/III and III/IV boundaries come
from the data (runs of small discord inside the frozen-classical run).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .correlations import CorrelationRecord, correlation_record, detect_switch_time
from .errors import ParameterError, ResolutionError
from .model import ModelParams, RegimeTimes, build_xstate, plateau_xstate

__all__ = [
    "ScanConfig",
    "RegimeSegmentation",
    "scan",
    "segment_regimes",
    "find_sudden_death",
    "PLATEAU_ENTRY_TOL",
]

# Matrix-entry tolerance for the stationary-window (plateau) detector.
PLATEAU_ENTRY_TOL = 1e-3
# A regime label is only reported when its window spans this many points.
MIN_REGIME_POINTS = 10
# Segmentation needs a few tens of points per candidate regime.
MIN_SEGMENT_POINTS = 200

CONCURRENCE_DEATH_TOL = 1e-10
MONOTONE_FLAG_TOL = 1e-9


@dataclass(frozen=True)
class ScanConfig:
    """Grid and tolerances for one scan."""

    params: ModelParams
    gt_min: float
    gt_max: float
    points: int
    spacing: str = "linear"
    freeze_tol: float = 2e-3
    derivative_window: int = 5

    def __post_init__(self) -> None:
        if not (math.isfinite(self.gt_min) and math.isfinite(self.gt_max)):
            raise ParameterError("gt_min and gt_max must be finite")
        if self.gt_min < 0.0 or self.gt_min >= self.gt_max:
            raise ParameterError("need 0 <= gt_min < gt_max")
        if self.points < 2:
            raise ParameterError(f"points must be >= 2, got {self.points}")
        if self.spacing not in ("linear", "log"):
            raise ParameterError(f"spacing must be 'linear' or 'log', got {self.spacing!r}")
        if self.spacing == "log" and self.gt_min <= 0.0:
            raise ParameterError("log spacing requires gt_min > 0")
        if not (self.freeze_tol > 0.0):
            raise ParameterError("freeze_tol must be > 0")
        if self.derivative_window < 1:
            raise ParameterError("derivative_window must be >= 1")

    def grid(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.gt_min, self.gt_max, self.points)
        return np.linspace(self.gt_min, self.gt_max, self.points)


@dataclass(frozen=True)
class RegimeSegmentation:
    """Detected regime boundaries and related features.

    boundaries       (start_gt, label) for each reported regime, in time order
    sudden_death_gt  first time concurrence reaches zero for good, if any
    dfs_window       span where every matrix entry sits within
                     PLATEAU_ENTRY_TOL of the plateau, clipped to [t1, t2]
    degenerate       True when there is no basis transition to segment around
    discord_revival_gt  location of an interior discord maximum in regime IV
    notes            human-readable remarks (dropped/indeterminate windows)
    """

    boundaries: tuple[tuple[float, str], ...]
    sudden_death_gt: float | None
    dfs_window: tuple[float, float] | None
    degenerate: bool = False
    discord_revival_gt: float | None = None
    notes: tuple[str, ...] = ()

    def labels(self) -> tuple[str, ...]:
        return tuple(label for _, label in self.boundaries)

    def label_for(self, gt: float) -> str:
        """Regime label covering time gt, or "" outside every window."""
        current = ""
        for start, label in self.boundaries:
            if gt >= start:
                current = label
            else:
                break
        return current


def scan(config: ScanConfig) -> list[CorrelationRecord]:
    """One correlation record per grid point, in increasing gt.

    The pipeline is pure and evaluated in a fixed order, so identical configs
    reproduce identical records bit for bit.  Mutual information is checked
    to be non-increasing after the first point; any rise beyond 1e-9 is
    flagged on the offending record ("mutual_info_increase"), not hidden.
    """
    records: list[CorrelationRecord] = []
    for gt in config.grid():
        records.append(correlation_record(build_xstate(config.params, float(gt)), float(gt)))
    for i in range(1, len(records)):
        if records[i].mutual_info > records[i - 1].mutual_info + MONOTONE_FLAG_TOL:
            records[i] = replace(
                records[i], flags=records[i].flags + ("mutual_info_increase",)
            )
    return records


def _median_deviation(values: np.ndarray) -> float:
    return float(np.max(np.abs(values - np.median(values)))) if len(values) else 0.0


def _dfs_window(
    records: list[CorrelationRecord], times: RegimeTimes, p: float
) -> tuple[float, float] | None:
    """Longest run where the matrix entries sit on the plateau, within [t1, t2]."""
    if times.t1 is None or times.t2 <= times.t1:
        return None
    plateau = plateau_xstate(p)
    on_plateau = np.array(
        [rec.xstate.max_abs_difference(plateau) < PLATEAU_ENTRY_TOL for rec in records]
    )
    best_lo, best_hi, run_lo = None, None, None
    for i, flag in enumerate(on_plateau):
        if flag and run_lo is None:
            run_lo = i
        if (not flag or i == len(on_plateau) - 1) and run_lo is not None:
            run_hi = i if flag else i - 1
            if best_lo is None or run_hi - run_lo > best_hi - best_lo:
                best_lo, best_hi = run_lo, run_hi
            run_lo = None
    if best_lo is None:
        return None
    lo = max(records[best_lo].gt, times.t1)
    hi = min(records[best_hi].gt, times.t2)
    return (lo, hi) if lo < hi else None


def segment_regimes(
    records: list[CorrelationRecord], times: RegimeTimes, config: ScanConfig
) -> RegimeSegmentation:
    """Label the dynamical regimes of a scanned trajectory.

    Requires a reasonably fine scan (ResolutionError otherwise).  Windows
    whose defining test fails or that span fewer than MIN_REGIME_POINTS grid
    points are dropped with a note instead of being reported.
    """
    n = len(records)
    if n < MIN_SEGMENT_POINTS:
        raise ResolutionError(
            f"{n} points is too coarse for regime segmentation "
            f"(need >= {MIN_SEGMENT_POINTS})"
        )
    gts = np.array([rec.gt for rec in records])
    discord = np.array([rec.discord for rec in records])
    classical = np.array([rec.classical for rec in records])
    ftol = config.freeze_tol
    notes: list[str] = []

    sudden_death = find_sudden_death(records, config.params)
    dfs_window = _dfs_window(records, times, config.params.p)

    switch_idx = None
    first_tag = records[0].optimal_basis.tag
    for i, rec in enumerate(records):
        if rec.optimal_basis.tag != first_tag:
            switch_idx = i
            break

    if switch_idx is None:
        notes.append("no basis transition in scan window")
        degenerate = abs(2.0 * config.params.p - 1.0) < 1e-12 or float(
            np.max(discord)
        ) < ftol
        return RegimeSegmentation(
            boundaries=(),
            sudden_death_gt=sudden_death,
            dfs_window=dfs_window,
            degenerate=degenerate,
            notes=tuple(notes),
        )

    # I/II boundary: snap to the conditional-entropy crossing when it brackets.
    boundary_gt = None
    if switch_idx > 0:
        boundary_gt = detect_switch_time(
            config.params, (gts[switch_idx - 1], gts[switch_idx])
        )
    if boundary_gt is None:
        boundary_gt = times.ts if times.ts is not None else float(gts[switch_idx])

    boundaries: list[tuple[float, str]] = []

    # Regime I: before the switch, discord frozen and classical decaying.
    pre = slice(0, switch_idx)
    if switch_idx >= MIN_REGIME_POINTS:
        discord_frozen = _median_deviation(discord[pre]) < ftol
        classical_decays = classical[0] - classical[switch_idx - 1] > ftol
        if discord_frozen and classical_decays:
            boundaries.append((float(gts[0]), "I"))
        else:
            notes.append("window before basis switch fails regime-I profile")
    else:
        notes.append("window before basis switch below resolution")

    # Frozen-classical run from the switch onward (covers regimes II and III).
    ref_width = max(MIN_REGIME_POINTS, n // 50)
    c_ref = float(np.median(classical[switch_idx : switch_idx + ref_width]))
    frozen_end = switch_idx - 1
    for i in range(switch_idx, n):
        if abs(classical[i] - c_ref) < ftol:
            frozen_end = i
        else:
            break

    frozen_len = frozen_end - switch_idx + 1
    start_iii = None
    if frozen_len >= MIN_REGIME_POINTS:
        # Regime III: tail of the frozen run where discord stays < ftol.
        last_large = None
        for i in range(frozen_end, switch_idx - 1, -1):
            if discord[i] >= ftol:
                last_large = i
                break
        start_iii = switch_idx if last_large is None else last_large + 1
        if switch_idx < start_iii:
            if start_iii - switch_idx >= MIN_REGIME_POINTS:
                boundaries.append((float(boundary_gt), "II"))
            else:
                notes.append("regime II window below resolution")
        if frozen_end - start_iii + 1 >= MIN_REGIME_POINTS:
            boundaries.append((float(gts[start_iii]), "III"))
        else:
            notes.append("regime III window below resolution")
            start_iii = None
    else:
        notes.append("no frozen-classical window after basis switch")

    # Regime IV: after the frozen run, classical decaying again.
    revival_gt = None
    post = slice(frozen_end + 1, n)
    post_len = n - (frozen_end + 1)
    if post_len >= MIN_REGIME_POINTS:
        if classical[frozen_end + 1] - classical[-1] > ftol:
            boundaries.append((float(gts[frozen_end + 1]), "IV"))
            seg = discord[post]
            peak = int(np.argmax(seg))
            if 0 < peak < len(seg) - 1 and seg[peak] > max(seg[0], seg[-1]):
                revival_gt = float(gts[frozen_end + 1 + peak])
        else:
            notes.append("window after frozen run fails regime-IV profile")
    elif post_len > 0:
        notes.append("regime IV window below resolution")

    boundaries.sort(key=lambda item: item[0])
    return RegimeSegmentation(
        boundaries=tuple(boundaries),
        sudden_death_gt=sudden_death,
        dfs_window=dfs_window,
        degenerate=False,
        discord_revival_gt=revival_gt,
        notes=tuple(notes),
    )


def find_sudden_death(
    records: list[CorrelationRecord], params: ModelParams | None = None
) -> float | None:
    """First time concurrence hits zero and stays there, refined by bisection.

    Returns None when concurrence is never positive in the window or never
    dies inside it.  With `params` given the bracketing grid interval is
    refined by bisection on the analytic concurrence; otherwise the first
    dead grid point is returned.
    """
    conc = np.array([rec.concurrence for rec in records])
    dead = conc <= CONCURRENCE_DEATH_TOL
    if dead[0] and dead.all():
        return None
    if not dead.any():
        return None
    # first index from which every later point is dead
    alive_idx = np.nonzero(~dead)[0]
    first_dead = int(alive_idx[-1]) + 1
    if first_dead >= len(records):
        return None
    lo = records[first_dead - 1].gt
    hi = records[first_dead].gt
    if params is None:
        return float(hi)

    from .correlations import concurrence_xstate

    def alive(gt: float) -> bool:
        return concurrence_xstate(build_xstate(params, gt)) > CONCURRENCE_DEATH_TOL

    if not alive(lo):
        return float(lo)
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if alive(mid):
            lo = mid
        else:
            hi = mid
    return float(hi)
