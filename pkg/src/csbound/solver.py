"""Fixed-point iteration that extracts certified feasible triplets.

Starting from d zero vectors, iterate v_i = F(v_{i-1}, ..., v_{i-d}).  Each
step measures the worst per-coordinate growth R = max(v_i - v_{i-1}) and
probes feasibility: W = v_i + d*R - F applied to v_i with per-slot offsets
(d-1)R, ..., R, 0, and E = max(0, max W).  The triplet (v_i, R, E) certifies
the lower bound d*(R - E); the best one seen is returned.  Memory holds only
the last d + 1 iterates plus the incumbent best.
"""

from __future__ import annotations

import time
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import IO

import numpy as np

from .errors import ResourceGuardError
from .operators import OperatorContext

DEFAULT_MEMORY_BUDGET = 4 * 1024**3  # bytes
ITERATION_CAP = 5000
ITERATION_FLOOR = 200

TRACE_STATE_LIMIT = 100_000
TRACE_LENGTH_LIMIT = 100


@dataclass
class SolverConfig:
    """Iteration parameters for one (sigma, d, l) run."""

    sigma: int
    d: int
    l: int
    max_iterations: int | None = None
    stagnation_window: int | None = None
    stagnation_tol: float = 1e-7
    memory_budget: int = DEFAULT_MEMORY_BUDGET

    def __post_init__(self) -> None:
        if self.sigma < 2 or self.d < 2 or self.l < 1:
            raise ValueError(f"invalid (sigma, d, l) = {(self.sigma, self.d, self.l)}")
        if self.max_iterations is not None and self.max_iterations < self.d:
            raise ValueError(f"max_iterations must be >= d = {self.d}")
        if self.stagnation_tol <= 0:
            raise ValueError("stagnation_tol must be positive")
        if self.stagnation_window is not None and self.stagnation_window < 1:
            raise ValueError("stagnation_window must be >= 1")

    @property
    def state_space(self) -> int:
        return self.sigma ** (self.l * self.d)

    def resolved_max_iterations(self) -> int:
        """Explicit budget, or min(5000, max(200, 4 * 2**(l*d))).

        The floor keeps tiny state spaces (which are nearly free per step)
        iterating long enough to reach table precision; the certificate is
        re-validated independently, so under-iterating can only weaken the
        bound, never invalidate it.
        """
        if self.max_iterations is not None:
            return self.max_iterations
        return min(ITERATION_CAP, max(ITERATION_FLOOR, 4 * 2 ** (self.l * self.d)))

    def resolved_stagnation_window(self) -> int:
        """Explicit window, or max(10, 30 * d).

        The probed R - E can stall for stretches that grow with d before the
        growth front settles (measured: ~174 flat iterations at d=14, l=1),
        so the default window scales with d.
        """
        if self.stagnation_window is not None:
            return self.stagnation_window
        return max(10, 30 * self.d)


def required_bytes(sigma: int, d: int, l: int) -> int:
    """Memory-guard estimate: the d+1 resident double vectors."""
    return 8 * (d + 1) * sigma ** (l * d)


def guard_memory(config: SolverConfig) -> None:
    """Refuse a run whose resident vectors would exceed the budget."""
    need = required_bytes(config.sigma, config.d, config.l)
    if need > config.memory_budget:
        raise ResourceGuardError(
            f"(sigma, d, l) = {(config.sigma, config.d, config.l)} needs "
            f"{need} bytes of iterate storage, over the {config.memory_budget} "
            f"byte budget"
        )


@dataclass
class TripletResult:
    """Best feasible triplet found, with its certified bound d*(r - epsilon)."""

    sigma: int
    d: int
    l: int
    u: np.ndarray
    r: float
    epsilon: float
    bound: float
    iterations_run: int
    history: list[tuple[int, float, float]] = field(repr=False)


def feasible_triplet(config: SolverConfig, progress: IO[str] | None = None) -> TripletResult:
    """Run the triplet search and return the best (u, r, epsilon) found.

    ``progress`` receives one diagnostic line per iteration (iteration index,
    R, E, candidate bound, wall time).  Early exit once the best R - E has
    improved by less than ``stagnation_tol`` over ``stagnation_window``
    consecutive iterations.
    """
    guard_memory(config)
    d = config.d
    ctx = OperatorContext(config.sigma, d, config.l)
    recent: list[np.ndarray] = [np.zeros(ctx.n) for _ in range(d)]  # newest first
    best_u = recent[0]
    best_r = 0.0
    best_e = 0.0
    history: list[tuple[int, float, float]] = []
    max_iterations = config.resolved_max_iterations()
    stagnation_window = config.resolved_stagnation_window()
    # the detector arms once R - E turns positive; before that the probe sits
    # on a flat burn-in plateau that must not count as stagnation
    armed = False
    mark = 0.0
    stale = 0
    iterations_run = 0
    started = time.perf_counter()

    for i in range(d, max_iterations + 1):
        vi = ctx.apply_f(recent)
        growth = float(np.max(vi - recent[0]))
        probe = ctx.apply_f(
            [vi] * d, arg_offsets=[(d - j) * growth for j in range(1, d + 1)]
        )
        slack_vec = vi + d * growth - probe
        excess = max(0.0, float(np.max(slack_vec)))
        history.append((i, growth, excess))
        if growth - excess >= best_r - best_e:
            best_u, best_r, best_e = vi, growth, excess
        iterations_run = i
        if progress is not None:
            print(
                f"iter={i} R={growth:.12f} E={excess:.6e} "
                f"bound={d * (growth - excess):.9f} "
                f"elapsed={time.perf_counter() - started:.2f}s",
                file=progress,
                flush=True,
            )
        value = best_r - best_e
        if not armed:
            if value > 0:
                armed = True
                mark = value
                stale = 0
        elif value >= mark + config.stagnation_tol:
            mark = value
            stale = 0
        else:
            stale += 1
            if stale >= stagnation_window:
                break
        recent = [vi] + recent[: d - 1]

    return TripletResult(
        sigma=config.sigma,
        d=d,
        l=config.l,
        u=best_u.copy(),
        r=best_r,
        epsilon=best_e,
        bound=d * (best_r - best_e),
        iterations_run=iterations_run,
        history=history,
    )


def check_convergence(
    window: Sequence[np.ndarray], r: float, epsilon: float, d: int
) -> bool:
    """Convergence detector: once d+1 consecutive iterates drift by r per step
    to within epsilon/(2d) in the sup norm, (window[0], r, epsilon) is a
    feasible triplet.
    """
    if len(window) != d + 1:
        raise ValueError(f"window must hold d+1 = {d + 1} iterates, got {len(window)}")
    tolerance = epsilon / (2 * d)
    for prev, nxt in zip(window, window[1:]):
        if float(np.max(np.abs(nxt - prev - r))) > tolerance:
            return False
    return True


def iterate_trace(config: SolverConfig, count: int) -> list[np.ndarray]:
    """Exact iterates v_0 .. v_count of the recurrence (small instances only)."""
    if config.state_space > TRACE_STATE_LIMIT:
        raise ResourceGuardError(
            f"trace limited to {TRACE_STATE_LIMIT} states, "
            f"got {config.state_space}"
        )
    if count > TRACE_LENGTH_LIMIT:
        raise ValueError(f"trace limited to {TRACE_LENGTH_LIMIT} iterates, got {count}")
    if count < 0:
        raise ValueError("count must be nonnegative")
    ctx = OperatorContext(config.sigma, config.d, config.l)
    trace = [np.zeros(ctx.n) for _ in range(min(config.d, count + 1))]
    while len(trace) <= count:
        args = trace[len(trace) - config.d : len(trace)][::-1]
        trace.append(ctx.apply_f(args))
    return trace
