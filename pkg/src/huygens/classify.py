"""Synchronization diagnostics extracted from simulated trajectories.

Amplitudes and phases come from the quadrature pair ``(theta, dtheta)``,
which is exact for unit-frequency harmonic motion and accurate to O(mu) for
the clock models.  Regime detection works on one-cycle averages of these
signals so that the O(mu) wobble within a cycle does not matter.
"""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass

import numpy as np

from .dynamics import Trajectory
from .errors import InsufficientDataError, ShapeError

__all__ = [
    "SyncRegime",
    "SyncRegimeReport",
    "PeriodEstimate",
    "envelope",
    "phase_difference",
    "measure_period",
    "cycle_averages",
    "beat_depth",
    "detect_regime",
]

TWO_PI = 2 * math.pi
PHASE_FLOOR = 1e-8


class SyncRegime(str, enum.Enum):
    IN_PHASE = "InPhase"
    ANTI_PHASE = "AntiPhase"
    BEATS = "Beats"
    QUENCHED = "Quenched"
    UNSETTLED = "Unsettled"


@dataclass(frozen=True)
class PeriodEstimate:
    period: float
    stderr: float
    crossings: int

    def __float__(self):
        return self.period


@dataclass(frozen=True)
class SyncRegimeReport:
    """Classifier verdict.

    ``regime`` is the settled regime; ``beats`` flags that the envelopes
    dipped by more than the beat threshold before settling.  ``Beats`` as a
    regime is used only when the run ends while still beating.
    """

    regime: SyncRegime
    settle_time: float | None
    asymptotic_amplitude: tuple
    measured_period: float | None
    phase_difference_final: float
    beat_depth: float
    beats: bool
    period_stderr: float | None = None

    def to_dict(self):
        d = asdict(self)
        d["regime"] = self.regime.value
        d["asymptotic_amplitude"] = list(self.asymptotic_amplitude)
        return d


def _check_pair(traj):
    if traj.n_pendulums != 2:
        raise ShapeError("diagnostics are defined for two pendulums")


def envelope(traj: Trajectory, i: int) -> np.ndarray:
    """Instantaneous amplitude ``sqrt(theta_i^2 + dtheta_i^2)`` of pendulum ``i`` (0-based)."""
    return np.hypot(traj.theta(i), traj.dtheta(i))


def phase_difference(traj: Trajectory) -> np.ndarray:
    """Unwrapped ``phi_1 - phi_2`` with ``phi_i = atan2(-dtheta_i, theta_i)``.

    Samples where either amplitude is below ``1e-8`` are NaN; the remaining
    samples are unwrapped as one sequence.
    """
    _check_pair(traj)
    p1 = np.arctan2(-traj.dtheta(0), traj.theta(0))
    p2 = np.arctan2(-traj.dtheta(1), traj.theta(1))
    ok = (envelope(traj, 0) >= PHASE_FLOOR) & (envelope(traj, 1) >= PHASE_FLOOR)
    out = np.full(len(traj.times), np.nan)
    if ok.any():
        out[ok] = np.unwrap(p1[ok] - p2[ok])
    return out


def measure_period(traj: Trajectory, window=None, i: int = 0) -> PeriodEstimate:
    """Mean spacing of upward zero crossings of ``theta_i`` inside ``window = (t0, t1)``.

    Crossings are located by linear interpolation between samples.

    Raises
    ------
    InsufficientDataError
        Fewer than 10 crossings in the window.
    """
    t = traj.times
    th = traj.theta(i)
    if window is not None:
        t0, t1 = window
        mask = np.ones(len(t), dtype=bool)
        if t0 is not None:
            mask &= t >= t0
        if t1 is not None:
            mask &= t <= t1
        t, th = t[mask], th[mask]
    up = np.flatnonzero((th[:-1] < 0) & (th[1:] >= 0))
    if up.size < 10:
        raise InsufficientDataError(f"only {up.size} upward zero crossings in the window")
    frac = -th[up] / (th[up + 1] - th[up])
    tc = t[up] + frac * (t[up + 1] - t[up])
    gaps = np.diff(tc)
    period = (tc[-1] - tc[0]) / (tc.size - 1)
    stderr = float(np.std(gaps, ddof=1) / math.sqrt(gaps.size)) if gaps.size > 1 else 0.0
    return PeriodEstimate(float(period), stderr, int(tc.size))


def cycle_averages(traj: Trajectory, cycle: float = TWO_PI):
    """One-cycle block averages.

    Returns ``(t_end, env, dphi)``: the end time of each complete block, the
    mean envelopes (blocks x 2) and the circular mean phase difference in
    ``(-pi, pi]`` (NaN where undefined).
    """
    _check_pair(traj)
    t = traj.times
    block = np.floor((t - t[0]) / cycle * (1 + 1e-12)).astype(int)
    nblocks = int(block[-1])  # the last block is incomplete unless it holds one sample
    if nblocks < 1:
        raise InsufficientDataError("trajectory shorter than one cycle")
    keep = block < nblocks
    block = block[keep]
    env = np.stack([envelope(traj, 0)[keep], envelope(traj, 1)[keep]], axis=1)
    dphi = phase_difference(traj)[keep]
    counts = np.bincount(block, minlength=nblocks)
    env_mean = np.stack([np.bincount(block, env[:, j], nblocks) / counts for j in (0, 1)],
                        axis=1)
    ok = ~np.isnan(dphi)
    re = np.bincount(block[ok], np.cos(dphi[ok]), nblocks)
    im = np.bincount(block[ok], np.sin(dphi[ok]), nblocks)
    defined = np.bincount(block[ok], minlength=nblocks) > 0
    ang = np.where(defined, np.arctan2(im, re), np.nan)
    ang = np.where(ang == -math.pi, math.pi, ang)
    t_end = t[0] + cycle * (np.arange(nblocks) + 1)
    return t_end, env_mean, ang


def beat_depth(env_blocks) -> float:
    """Largest relative drop of a block envelope after an interior local maximum.

    Monotone transients score 0; an exchange of energy between the pendulums
    shows up as a peak followed by a deep trough.
    """
    env = np.asarray(env_blocks, dtype=float)
    if env.ndim == 1:
        env = env[:, None]
    depth = 0.0
    for e in env.T:
        if e.size < 3:
            continue
        peaks = np.flatnonzero((e[1:-1] > e[:-2]) & (e[1:-1] >= e[2:])) + 1
        if peaks.size == 0:
            continue
        # running minimum from the right gives the deepest later trough for each peak
        later_min = np.minimum.accumulate(e[::-1])[::-1]
        for pk in peaks:
            if e[pk] > 0 and pk + 1 < e.size:
                depth = max(depth, (e[pk] - later_min[pk + 1]) / e[pk])
    return float(depth)


def detect_regime(traj: Trajectory, phase_tol: float = 0.05, amp_tol: float = 0.02,
                  quench_tol: float = 1e-3, beat_threshold: float = 0.3,
                  min_settled_cycles: int = 5) -> SyncRegimeReport:
    """Classify the asymptotic synchronization regime of a two-pendulum trajectory.

    The run counts as settled from the first cycle after which the cycle-mean
    phase difference stays within ``phase_tol`` of its final target (0 or pi)
    and both cycle-mean envelopes stay within ``amp_tol`` (relative) of their
    final values, for at least ``min_settled_cycles`` cycles.  A pendulum whose
    final envelope is below ``quench_tol`` makes the regime Quenched.
    """
    t_end, env, dphi = cycle_averages(traj)
    nb = len(t_end)
    if nb < 2 * min_settled_cycles:
        raise InsufficientDataError(f"need at least {2 * min_settled_cycles} cycles, got {nb}")
    tail = env[-min_settled_cycles:]
    final_env = tail.mean(axis=0)
    tail_phase = dphi[-min_settled_cycles:]
    defined = ~np.isnan(tail_phase)
    final_phase = (float(np.angle(np.mean(np.exp(1j * tail_phase[defined]))))
                   if defined.any() else math.nan)
    if final_phase == -math.pi:
        final_phase = math.pi

    def settle_index(ok):
        bad = np.flatnonzero(~ok)
        first = 0 if bad.size == 0 else int(bad[-1]) + 1
        return first if nb - first >= min_settled_cycles else None

    period = stderr = None
    if np.any(final_env < quench_tol):
        ok = np.all((env < quench_tol) | (final_env >= quench_tol), axis=1)
        idx = settle_index(ok)
        depth = beat_depth(env if idx is None else env[:idx + 1])
        return SyncRegimeReport(SyncRegime.QUENCHED,
                                None if idx is None else float(t_end[idx] - TWO_PI),
                                tuple(float(v) for v in final_env), None, final_phase,
                                depth, depth > beat_threshold)
    if abs(final_phase) < phase_tol:
        target, regime = 0.0, SyncRegime.IN_PHASE
    elif abs(abs(final_phase) - math.pi) < phase_tol:
        target, regime = math.pi, SyncRegime.ANTI_PHASE
    else:
        target, regime = None, SyncRegime.UNSETTLED
    idx = None
    if target is not None:
        dev = np.abs(np.angle(np.exp(1j * (dphi - target))))
        ok = (dev < phase_tol) & np.all(np.abs(env - final_env) <= amp_tol * final_env, axis=1)
        idx = settle_index(ok)
        if idx is None:
            regime = SyncRegime.UNSETTLED
    if idx is not None:
        settle = float(t_end[idx] - TWO_PI)
        depth = beat_depth(env[:idx + 1])
        try:
            est = measure_period(traj, (settle, None))
            period, stderr = est.period, est.stderr
        except InsufficientDataError:
            pass
    else:
        settle = None
        depth = beat_depth(env)
        # still exchanging energy at the end of the run
        recent = beat_depth(env[nb // 2:])
        if recent > beat_threshold:
            regime = SyncRegime.BEATS
    return SyncRegimeReport(regime, settle, tuple(float(v) for v in final_env), period,
                            final_phase, depth, depth > beat_threshold, stderr)
