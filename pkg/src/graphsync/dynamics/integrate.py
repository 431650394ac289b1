"""Fixed-step RK4, subspace projections and trajectory output."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..partitions import SubspaceDescriptor

DIVERGENCE_BOUND = 1e9


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray                 # (samples, ...) with the state shape trailing
    residuals: np.ndarray | None = None
    status: str = "ok"                 # ok | diverged
    steps: int = 0

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    @property
    def diverged(self) -> bool:
        return self.status == "diverged"

    @property
    def max_residual(self) -> float:
        if self.residuals is None or not len(self.residuals):
            return 0.0
        return float(np.max(self.residuals))


def rk4_step(F: Callable, x: np.ndarray, dt: float) -> np.ndarray:
    k1 = F(x)
    k2 = F(x + 0.5 * dt * k1)
    k3 = F(x + 0.5 * dt * k2)
    k4 = F(x + dt * k3)
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(F: Callable, x0, dt: float, steps: int, monitor: Callable | None = None,
              store: bool = True, every: int = 1) -> Trajectory:
    """Classical RK4 with a fixed step.

    ``monitor(x)`` is evaluated at every sample (returns a scalar or an array
    over leading batch axes), and its values are kept as residuals.  With
    ``store=False`` only the first and last states are kept, and residuals
    hold the running maximum.
    The run stops early, with status "diverged", once any |x| exceeds 1e9 or
    turns non-finite.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if steps < 0:
        raise ValueError("steps must be >= 0")
    x = np.array(x0, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("initial state is not finite")
    times = [0.0]
    states = [x.copy()]
    res = [] if monitor is not None else None
    running = None
    if monitor is not None:
        r0 = np.asarray(monitor(x), dtype=float)
        res.append(r0)
        running = r0.copy()
    status = "ok"
    done = 0
    for n in range(1, steps + 1):
        x = rk4_step(F, x, dt)
        done = n
        bad = not np.all(np.isfinite(x)) or np.max(np.abs(x), initial=0.0) > DIVERGENCE_BOUND
        if monitor is not None and not bad:
            r = np.asarray(monitor(x), dtype=float)
            running = np.maximum(running, r)
            if store and n % every == 0:
                res.append(r)
        if bad:
            status = "diverged"
            break
        if store and n % every == 0:
            times.append(n * dt)
            states.append(x.copy())
    if not store:
        times.append(done * dt)
        states.append(x.copy())
        if monitor is not None:
            res = [res[0], running]
    residuals = None if res is None else np.array(res)
    return Trajectory(np.array(times), np.array(states), residuals, status, done)


# --------------------------------------------------------------------------
# Projection onto polydiagonal subspaces


@dataclass
class SubspaceCoordinates:
    """Cell-level basis of a polydiagonal subspace: x_i = sign_i * y_{sym_i}."""

    W: SubspaceDescriptor
    sym: np.ndarray = field(init=False)
    sign: np.ndarray = field(init=False)

    def __post_init__(self):
        lab = np.array(self.W.labels)
        self.sign = np.sign(lab).astype(float)
        self.sym = np.where(lab != 0, np.abs(lab) - 1, 0)
        r = self.W.free_dim
        B = np.zeros((self.W.n, r))
        for i, v in enumerate(self.W.labels):
            if v:
                B[i, abs(v) - 1] = 1.0 if v > 0 else -1.0
        self.basis = B
        self.members = [np.nonzero(B[:, s])[0] for s in range(r)]
        self.first = np.array([m[0] for m in self.members], dtype=np.int64)

    def lift(self, y: np.ndarray) -> np.ndarray:
        """(..., r, k) -> (..., n, k)."""
        y = np.asarray(y, dtype=float)
        if y.shape[-2] != self.W.free_dim:
            raise ValueError(f"reduced state has {y.shape[-2]} symbols, expected {self.W.free_dim}")
        if self.W.free_dim == 0:
            return np.zeros(y.shape[:-2] + (self.W.n, y.shape[-1]))
        return y[..., self.sym, :] * self.sign[:, None]

    def project_to_reduced(self, x: np.ndarray) -> np.ndarray:
        """Signed mean over the cells of each symbol."""
        x = np.asarray(x, dtype=float)
        if x.shape[-2] != self.W.n:
            raise ValueError(f"state has {x.shape[-2]} cells, expected {self.W.n}")
        r = self.W.free_dim
        signed = x * self.sign[:, None]
        # mean as first value plus mean deviation: exact when all values agree
        ref = signed[..., self.first, :]
        out = np.empty(x.shape[:-2] + (r, x.shape[-1]))
        for s, m in enumerate(self.members):
            dev = signed[..., m, :] - ref[..., s:s + 1, :]
            out[..., s, :] = ref[..., s, :] + dev.mean(axis=-2)
        return out

    def project(self, x: np.ndarray) -> np.ndarray:
        return self.lift(self.project_to_reduced(x))

    def residual(self, x: np.ndarray) -> np.ndarray:
        """Euclidean distance to the subspace over the trailing (n, k) axes."""
        x = np.asarray(x, dtype=float)
        d = x - self.project(x)
        return np.sqrt(np.sum(d * d, axis=(-2, -1)))


def lift(W: SubspaceDescriptor, y) -> np.ndarray:
    return SubspaceCoordinates(W).lift(y)


def project_to_reduced(W: SubspaceDescriptor, x) -> np.ndarray:
    return SubspaceCoordinates(W).project_to_reduced(x)


def invariance_residual(W: SubspaceDescriptor, x) -> float:
    """Distance from x to the subspace; x is (n, k) or flat (n,) for k = 1."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        if x.size % W.n:
            raise ValueError("state size is not a multiple of the cell count")
        x = x.reshape(W.n, -1)
    return float(SubspaceCoordinates(W).residual(x))


def generic_reduced_state(r: int, k: int) -> np.ndarray:
    """Deterministic point with distinct, nonzero symbol values."""
    s = np.arange(1, r + 1)[:, None]
    c = np.arange(k)[None, :]
    return 0.9 * np.sin(1.3 * s + 0.7 * c + 0.4)


# --------------------------------------------------------------------------
# CSV


def trajectory_csv(traj: Trajectory, n: int, k: int, with_residual: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["t"] + [f"cell{i + 1}_{c + 1}" for i in range(n) for c in range(k)]
    has_res = with_residual and traj.residuals is not None and len(traj.residuals) == len(traj.times)
    if has_res:
        header.append("residual")
    w.writerow(header)
    for s, t in enumerate(traj.times):
        row = [repr(float(t))] + [repr(float(v)) for v in np.asarray(traj.states[s]).reshape(-1)]
        if has_res:
            row.append(repr(float(traj.residuals[s])))
        w.writerow(row)
    return buf.getvalue()
