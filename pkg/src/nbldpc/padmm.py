"""Proximal-ADMM decoder: iterate updates, stopping rules, hard decision.

One sweep updates, in order: the embedding vector v through a per-block
closed-form solve, the constraint slack e1 (projected to the nonnegative
orthant; block-sum rows of the constant-weight system are equalities and
stay pinned at zero), the box copy e2 (projected to [0,1]^N), then the
exponentially smoothed anchors p/z1/z2 and the scaled duals.  Iteration
stops when either squared residual ||A v + e1 - rhs||^2 or ||v - e2||^2
falls below the tolerance, or at the iteration cap.

All eight state vectors start at zero, so identical inputs and configuration
reproduce bit-identical trajectories on a given backend.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .embed import ConstraintSystem, EmbeddingKind


@dataclass(frozen=True)
class DecoderConfig:
    """Iteration parameters.

    ``rho > alpha`` keeps every v-subproblem strongly convex and is enforced;
    values of ``mu`` outside (0.3, 1) or ``alpha`` outside (0.2, 0.5) only
    draw a warning, since they degrade error-correction but stay valid.
    """

    mu: float = 0.6
    alpha: float = 0.5
    rho: float = 0.52
    beta: float = 0.9
    t_max: int = 500
    xi: float = 1e-5

    def __post_init__(self):
        if self.mu <= 0:
            raise ValueError(f"mu must be positive, got {self.mu}")
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.rho <= self.alpha:
            raise ValueError(f"rho must exceed alpha, got rho={self.rho}, alpha={self.alpha}")
        if not 0 < self.beta <= 1:
            raise ValueError(f"beta must lie in (0, 1], got {self.beta}")
        if self.t_max < 0:
            raise ValueError("t_max must be nonnegative")
        if self.xi < 0:
            raise ValueError("xi must be nonnegative")
        if not 0.3 < self.mu < 1.0:
            warnings.warn(f"mu={self.mu} is outside the empirically good range (0.3, 1)", stacklevel=2)
        if not 0.2 < self.alpha < 0.5 and self.alpha != 0.5:
            warnings.warn(
                f"alpha={self.alpha} is outside the empirically good range (0.2, 0.5]", stacklevel=2
            )


def proximal_epsilon(mu: float, alpha: float, rho: float) -> float:
    """Diagonal loading of the v-subproblem normal equations."""
    return 1.0 + rho / mu - alpha / mu


def mu_lower_bound(sys: ConstraintSystem, alpha: float) -> float:
    """Diagnostic: alpha / lambda_min(A^T A), the convergence theory's floor for mu.

    Reported for inspection only; configurations are chosen empirically and
    never gated on this interval.
    """
    return alpha / sys.min_eigenvalue_ata()


@dataclass
class DecodeResult:
    symbols: np.ndarray
    converged: bool
    stop_reason: str  # "residual1" | "residual2" | "t_max"
    iterations: int
    objective: float
    residual_primal1: float
    residual_primal2: float
    embedding_vector: np.ndarray | None = None
    iterate_trace: list | None = None


class PrecomputedDecoder:
    """Per-(system, config) constants staged ahead of the iteration loop."""

    def __init__(self, sys: ConstraintSystem, cfg: DecoderConfig):
        self.sys = sys
        self.cfg = cfg
        self.eps = proximal_epsilon(cfg.mu, cfg.alpha, cfg.rho)
        if self.eps <= 0:
            raise ValueError(f"configuration yields nonpositive diagonal loading eps={self.eps}")
        self.inv = sys.inverse_coefficients(self.eps)
        self.cw = sys.kind is EmbeddingKind.CONSTANT_WEIGHT
        self.active_m = sys.M_ineq if sys.sum_rows_are_equalities else sys.M
        self.rho_over_mu = cfg.rho / cfg.mu
        self.mu_over_rho_plus_mu = cfg.mu / (cfg.rho + cfg.mu)

        nb = sys.num_blocks
        self.tmw = np.ascontiguousarray(self.inv.diag_coeff - self.inv.off_coeff)
        self.omg = np.ascontiguousarray(self.inv.off_coeff)
        if self.cw:
            self.smk = np.ascontiguousarray(self.inv.corner_coeff - self.inv.border_coeff)
            self.kmo = np.ascontiguousarray(self.inv.border_coeff - self.inv.off_coeff)
            self.kap = np.ascontiguousarray(self.inv.border_coeff)
        else:
            self.smk = np.zeros(nb)
            self.kmo = np.zeros(nb)
            self.kap = np.zeros(nb)

    def lam_term(self, lam: np.ndarray) -> np.ndarray:
        return (lam + 0.5 * self.cfg.alpha) / self.cfg.mu


def precompute(sys: ConstraintSystem, cfg: DecoderConfig) -> PrecomputedDecoder:
    cache = getattr(sys, "_pre_cache", None)
    if cache is None:
        cache = {}
        sys._pre_cache = cache
    pre = cache.get(cfg)
    if pre is None:
        pre = PrecomputedDecoder(sys, cfg)
        cache[cfg] = pre
    return pre


class NumpyLoop:
    """Vectorized reference implementation of one decoding run.

    Used as the fallback backend and as the steppable path for tests that
    inspect iterates.  ``counter``, when given, is filled with per-update
    multiplication counts at the actual multiply sites.
    """

    def __init__(self, pre: PrecomputedDecoder, lam: np.ndarray, counter: dict | None = None):
        self.pre = pre
        sys = pre.sys
        self.lam_term = pre.lam_term(lam)
        self.v = np.zeros(sys.N)
        self.e1 = np.zeros(sys.M)
        self.e2 = np.zeros(sys.N)
        self.p = np.zeros(sys.N)
        self.z1 = np.zeros(sys.M)
        self.z2 = np.zeros(sys.N)
        self.y1s = np.zeros(sys.M)
        self.y2s = np.zeros(sys.N)
        self.residual1 = np.inf
        self.residual2 = np.inf
        self.iterations = 0
        self.counter = counter

    def _count(self, key: str, mults: int):
        if self.counter is not None:
            self.counter[key] = self.counter.get(key, 0) + mults

    def step(self):
        pre = self.pre
        sys = pre.sys
        nb, b = sys.num_blocks, sys.block_len
        a = pre.active_m

        phi = sys.apply_At(sys.rhs - self.e1 - self.y1s)
        phi += self.e2 - self.y2s - self.lam_term
        phi += pre.rho_over_mu * self.p
        self._count("v", sys.N)

        blocks = phi.reshape(nb, b)
        s = blocks.sum(axis=1)
        v2 = self.v.reshape(nb, b)
        if pre.cw:
            common = pre.omg * s + pre.kmo * blocks[:, 0]
            self._count("v", 2 * nb)
            v2[:, 1:] = pre.tmw[:, None] * blocks[:, 1:] + common[:, None]
            self._count("v", nb * (b - 1))
            v2[:, 0] = pre.smk * blocks[:, 0] + pre.kap * s
            self._count("v", 2 * nb)
        else:
            v2[:] = pre.tmw[:, None] * blocks + (pre.omg * s)[:, None]
            self._count("v", nb * b + nb)

        av = sys.apply_A(self.v)
        arg = pre.mu_over_rho_plus_mu * (
            sys.rhs[:a] - av[:a] - self.y1s[:a] + pre.rho_over_mu * self.z1[:a]
        )
        self._count("e1", 2 * a)
        np.maximum(arg, 0.0, out=self.e1[:a])

        arg2 = pre.mu_over_rho_plus_mu * (self.v + self.y2s + pre.rho_over_mu * self.z2)
        self._count("e2", 2 * sys.N)
        np.clip(arg2, 0.0, 1.0, out=self.e2)

        self.p += pre.cfg.beta * (self.v - self.p)
        self._count("p", sys.N)
        self.z1[:a] += pre.cfg.beta * (self.e1[:a] - self.z1[:a])
        self._count("z1", a)
        self.z2 += pre.cfg.beta * (self.e2 - self.z2)
        self._count("z2", sys.N)

        res1 = av + self.e1 - sys.rhs
        self.y1s += res1
        res2 = self.v - self.e2
        self.y2s += res2
        self._count("dual1", 0)
        self._count("dual2", 0)
        self.residual1 = float(res1 @ res1)
        self.residual2 = float(res2 @ res2)
        self.iterations += 1
        return self.residual1, self.residual2

    def run(self, record: list | None = None):
        cfg = self.pre.cfg
        stop = 0
        while self.iterations < cfg.t_max:
            r1, r2 = self.step()
            if record is not None:
                record.append(self.v.copy())
            if r1 <= cfg.xi:
                stop = 1
                break
            if r2 <= cfg.xi:
                stop = 2
                break
        return stop


def per_iteration_op_counts(sys: ConstraintSystem) -> dict:
    """Multiplication count of each update in one sweep (model operations).

    Matvecs with A contribute none (entries are signs), scaled-dual updates
    are multiplication-free, and stopping-rule norms are not part of the
    update equations and are excluded.
    """
    nb, b = sys.num_blocks, sys.block_len
    active = sys.M_ineq if sys.sum_rows_are_equalities else sys.M
    if sys.kind is EmbeddingKind.CONSTANT_WEIGHT:
        v = nb * b + 4 * nb + nb * (b - 1)
    else:
        v = nb * b + nb * b + nb
    counts = {
        "v": v,
        "e1": 2 * active,
        "e2": 2 * sys.N,
        "p": sys.N,
        "z1": active,
        "z2": sys.N,
        "dual1": 0,
        "dual2": 0,
    }
    counts["total"] = sum(counts.values())
    return counts


_STOP_REASONS = {0: "t_max", 1: "residual1", 2: "residual2"}


def hard_decision(kind: EmbeddingKind, v: np.ndarray, block_len: int) -> np.ndarray:
    """Per-block symbol decision; ties break toward the smaller symbol."""
    blocks = np.asarray(v, dtype=np.float64).reshape(-1, block_len)
    best = blocks.argmax(axis=1)
    if kind is EmbeddingKind.FLANAGAN:
        peak = blocks[np.arange(blocks.shape[0]), best]
        return np.where(peak < 0.5, 0, best + 1).astype(np.int64)
    return best.astype(np.int64)


def decode(
    sys: ConstraintSystem,
    cfg: DecoderConfig,
    llr,
    backend: str | None = None,
    record_iterates: bool = False,
) -> DecodeResult:
    """Run the proximal-ADMM iteration on one frame of channel costs.

    ``llr`` must cover the full embedding dimension N (auxiliary blocks are
    zero-cost).  ``record_iterates`` forces the numpy path and attaches the
    list of v iterates to the result as ``result.iterate_trace``.
    """
    lam = np.asarray(getattr(llr, "values", llr), dtype=np.float64)
    if lam.shape != (sys.N,):
        raise ValueError(f"cost vector must have length {sys.N}, got {lam.shape}")
    if not np.all(np.isfinite(lam)):
        raise ValueError("cost vector contains non-finite entries")
    pre = precompute(sys, cfg)
    chosen = backend or _kernels.backend_name()
    if record_iterates:
        chosen = "numpy"

    trace = [] if record_iterates else None
    if chosen == "numba":
        v, iters, stop, r1, r2 = _run_kernel(pre, lam)
    else:
        loop = NumpyLoop(pre, lam)
        stop = loop.run(record=trace)
        v, iters, r1, r2 = loop.v, loop.iterations, loop.residual1, loop.residual2

    symbols = hard_decision(sys.kind, v, sys.block_len)[: sys.code.n]
    objective = float(lam @ v - 0.5 * cfg.alpha * np.sum((v - 0.5) ** 2))
    return DecodeResult(
        symbols=symbols,
        converged=stop != 0,
        stop_reason=_STOP_REASONS[stop],
        iterations=iters,
        objective=objective,
        residual_primal1=r1,
        residual_primal2=r2,
        embedding_vector=v,
        iterate_trace=trace,
    )


def _run_kernel(pre: PrecomputedDecoder, lam: np.ndarray):
    sys = pre.sys
    cfg = pre.cfg
    v = np.zeros(sys.N)
    e1 = np.zeros(sys.M)
    e2 = np.zeros(sys.N)
    p = np.zeros(sys.N)
    z1 = np.zeros(sys.M)
    z2 = np.zeros(sys.N)
    y1s = np.zeros(sys.M)
    y2s = np.zeros(sys.N)
    phi = np.zeros(sys.N)
    av = np.zeros(sys.M)
    work_m = np.zeros(sys.M)
    iters, stop, r1, r2 = _kernels.decode_loop(
        pre.lam_term(lam),
        sys.rhs,
        sys._gidx,
        sys.M_ineq,
        sys.num_blocks,
        sys.block_len,
        pre.active_m,
        pre.cw,
        pre.tmw,
        pre.omg,
        pre.smk,
        pre.kmo,
        pre.kap,
        pre.rho_over_mu,
        pre.mu_over_rho_plus_mu,
        cfg.beta,
        cfg.xi,
        cfg.t_max,
        v,
        e1,
        e2,
        p,
        z1,
        z2,
        y1s,
        y2s,
        phi,
        av,
        work_m,
    )
    return v, iters, stop, float(r1), float(r2)
