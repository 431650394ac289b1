"""Numerical witnesses for invariance: random fields, escape controls, agreement checks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..graph import Graph, laplacian_matrix
from ..partitions import SubspaceDescriptor
from .fields import NetworkField, VectorFieldSpec, custom_poly, heat, vanderpol
from .integrate import SubspaceCoordinates, integrate
from .reduced import reduced_field


def random_field_coefficients(field_class: str, count: int, rng: np.random.Generator, k: int = 1):
    """Coefficient arrays (count, k, 6) for g and h in the given class.

    Mild by construction: g has a confining -c5 x^5 term and a small linear
    part, h has a positive linear part, so transverse growth stays moderate
    and roundoff is not amplified past tolerance.
    """
    D = 6
    gc = np.zeros((count, k, D))
    hc = np.zeros((count, k, D))
    gc[..., 1] = rng.uniform(-1.0, 0.3, (count, k))
    gc[..., 3] = rng.uniform(-0.5, 0.2, (count, k))
    gc[..., 5] = -rng.uniform(0.1, 0.3, (count, k))
    hc[..., 1] = rng.uniform(0.3, 1.0, (count, k))
    if field_class in ("DGodd", "DG0", "DG"):
        hc[..., 3] = rng.uniform(0.05, 0.3, (count, k))
    if field_class in ("DG0", "DG"):
        gc[..., 0] = rng.uniform(-0.3, 0.3, (count, k))
        gc[..., 2] = rng.uniform(-0.3, 0.3, (count, k))
        gc[..., 4] = rng.uniform(-0.05, 0.05, (count, k))
        hc[..., 2] = rng.uniform(-0.2, 0.2, (count, k))
    if field_class == "DG":
        hc[..., 0] = rng.choice([-1.0, 1.0], (count, k)) * rng.uniform(0.1, 0.5, (count, k))
    return gc, hc


def random_fields(field_class: str, count: int, seed: int, k: int = 1) -> VectorFieldSpec:
    """One batched custom_poly field holding ``count`` random members of the class."""
    gc, hc = random_field_coefficients(field_class, count, np.random.default_rng(seed), k)
    return custom_poly(gc, hc)


@dataclass
class InvarianceResult:
    subspace: SubspaceDescriptor
    worst_ratio: float        # max over fields of max residual / (1 + |x0|)
    diverged: int


def batched_invariance(G: Graph, field_class: str, subspaces: list[SubspaceDescriptor],
                       nfields: int = 20, seed: int = 0, T: float = 10.0, dt: float = 1e-3,
                       k: int = 1) -> list[InvarianceResult]:
    """Integrate every (random field, subspace) pair from a random point of the subspace.

    All pairs for one graph run as a single batch.  Field i of the class is
    shared across subspaces; initial points are drawn per pair.
    """
    rng = np.random.default_rng(seed)
    gc, hc = random_field_coefficients(field_class, nfields, rng, k)
    m = len(subspaces)
    B = nfields * m
    f = custom_poly(np.tile(gc, (m, 1, 1)), np.tile(hc, (m, 1, 1)))
    coords = [SubspaceCoordinates(W) for W in subspaces]
    x0 = np.empty((B, G.n, k))
    P = np.empty((B, G.n, G.n))
    for s, c in enumerate(coords):
        y = rng.uniform(-1.0, 1.0, (nfields, c.W.free_dim, k))
        x0[s * nfields:(s + 1) * nfields] = c.lift(y)
        Bm = c.basis
        if Bm.shape[1]:
            proj = Bm @ np.linalg.solve(Bm.T @ Bm, Bm.T)
        else:
            proj = np.zeros((G.n, G.n))
        P[s * nfields:(s + 1) * nfields] = proj
    F = NetworkField(G, f)

    def monitor(x):
        d = x - P @ x
        return np.sqrt(np.sum(d * d, axis=(-2, -1)))

    steps = int(round(T / dt))
    traj = integrate(F, x0, dt, steps, monitor=monitor, store=False)
    norms = np.sqrt(np.sum(x0 * x0, axis=(-2, -1)))
    ratio = traj.residuals[-1] / (1.0 + norms)
    if traj.diverged:
        ratio = np.full(B, np.inf)
    out = []
    for s, W in enumerate(subspaces):
        r = ratio[s * nfields:(s + 1) * nfields]
        out.append(InvarianceResult(W, float(np.max(r)), int(traj.diverged)))
    return out


def escape_residual(G: Graph, f: VectorFieldSpec, W: SubspaceDescriptor, T: float = 10.0,
                    dt: float = 1e-3, x0=None) -> float:
    """Max residual from a generic point of W under f (large means the flow leaves W)."""
    from .integrate import generic_reduced_state

    c = SubspaceCoordinates(W)
    if x0 is None:
        x0 = c.lift(generic_reduced_state(W.free_dim, f.k))
    traj = integrate(NetworkField(G, f), x0, dt, int(round(T / dt)), monitor=c.residual, store=False)
    return traj.max_residual


def reduced_full_gap(G: Graph, f: VectorFieldSpec, W: SubspaceDescriptor, T: float = 5.0,
                     dt: float = 1e-3, y0=None) -> float:
    """max_t |lift(reduced trajectory) - full trajectory| from the same start."""
    from .integrate import generic_reduced_state

    sys = reduced_field(G, W, f)
    c = SubspaceCoordinates(W)
    if y0 is None:
        y0 = generic_reduced_state(W.free_dim, f.k)
    steps = int(round(T / dt))
    full = integrate(NetworkField(G, f), c.lift(y0), dt, steps)
    red = integrate(lambda y: sys.evaluate(f, y), y0, dt, steps)
    if full.diverged or red.diverged:
        return float("inf")
    gap = c.lift(red.states) - full.states
    return float(np.max(np.sqrt(np.sum(gap * gap, axis=(-2, -1)))))


def reduced_full_gaps(G: Graph, field_class: str, subspaces: list[SubspaceDescriptor],
                      nfields: int = 5, seed: int = 0, T: float = 5.0, dt: float = 1e-3,
                      k: int = 1) -> list[float]:
    """Per subspace, max over random class fields of the reduced/full trajectory gap.

    The full system runs once for all (subspace, field) pairs.  The reduced
    systems are stacked block-diagonally and also run once; they share the
    tables used by ``ReducedSystem.evaluate``.
    """
    rng = np.random.default_rng(seed)
    gc, hc = random_field_coefficients(field_class, nfields, rng, k)
    f = custom_poly(gc, hc)
    m = len(subspaces)
    coords = [SubspaceCoordinates(W) for W in subspaces]
    y0s = [rng.uniform(-1.0, 1.0, (nfields, c.W.free_dim, k)) for c in coords]
    steps = int(round(T / dt))

    x0 = np.concatenate([c.lift(y) for c, y in zip(coords, y0s)])
    fbig = custom_poly(np.tile(gc, (m, 1, 1)), np.tile(hc, (m, 1, 1)))
    full = integrate(NetworkField(G, fbig), x0, dt, steps)

    tables = [reduced_field(G, W, field_class)._tables() for W in subspaces]
    rs = [W.free_dim for W in subspaces]
    ts = [F.shape[0] for F, _ in tables]
    R, Tn = sum(rs), sum(ts)
    Fb, Cb = np.zeros((Tn, R)), np.zeros((R, Tn))
    roff = toff = 0
    for (F, C), r, t in zip(tables, rs, ts):
        Fb[toff:toff + t, roff:roff + r] = F
        Cb[roff:roff + r, toff:toff + t] = C
        roff, toff = roff + r, toff + t

    def stacked(y):
        return f.g(y) + np.matmul(Cb, f.h(np.matmul(Fb, y)))

    red = integrate(stacked, np.concatenate(y0s, axis=1), dt, steps)
    if full.diverged or red.diverged:
        return [float("inf")] * m
    out = []
    roff = 0
    for s, (c, r) in enumerate(zip(coords, rs)):
        xs = full.states[:, s * nfields:(s + 1) * nfields]
        ys = red.states[:, :, roff:roff + r]
        roff += r
        gap = c.lift(ys) - xs
        out.append(float(np.max(np.sqrt(np.sum(gap * gap, axis=(-2, -1))))))
    return out


def rk4_order_ratio(G: Graph | None = None, dt: float = 0.02, T: float = 2.0) -> float:
    """err(dt) / err(dt/2) against a dt/8 reference on a van der Pol network (about 16)."""
    from ..graph import path
    from .integrate import generic_reduced_state

    G = G or path(3)
    f = vanderpol(alpha=1.0, delta=0.5, eps=0.1)
    F = NetworkField(G, f)
    x0 = generic_reduced_state(G.n, 2)

    def run(h):
        return integrate(F, x0, h, int(round(T / h)), store=False).final

    ref = run(dt / 8)
    e1 = np.linalg.norm(run(dt) - ref)
    e2 = np.linalg.norm(run(dt / 2) - ref)
    return float(e1 / e2)


def heat_mode_errors(G: Graph, s: float = 0.5, T: float = 1.0, dt: float = 1e-3):
    """Per Laplacian eigenmode: (lambda, max relative error of x(t)/x(0) vs exp(-(s+lambda)t))."""
    L = laplacian_matrix(G).astype(float)
    lam, vecs = np.linalg.eigh(L)
    F = NetworkField(G, heat(s))
    steps = int(round(T / dt))
    out = []
    for q in range(G.n):
        x0 = vecs[:, q][:, None]
        traj = integrate(F, x0, dt, steps)
        expect = np.exp(-(s + lam[q]) * traj.times)
        # component along the starting mode; the rest should stay zero
        amp = np.einsum("tnk,n->t", traj.states, vecs[:, q])
        leak = np.max(np.linalg.norm((traj.states[..., 0] - amp[:, None] * vecs[:, q][None, :]), axis=1))
        rel = np.max(np.abs(amp - expect) / expect)
        out.append((float(lam[q]), float(max(rel, leak / np.min(expect)))))
    return out
