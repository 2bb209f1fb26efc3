"""Dense primal-dual interior-point solver for small Hermitian SDPs.

Solves the pair

    (D)  maximize   b' y
         subject to Z_k = C_k - sum_i y_i A_ik >= 0     for every block k

    (P)  minimize   sum_k <C_k, X_k>
         subject to sum_k Re<A_ik, X_k> = b_i,  X_k >= 0

over complex Hermitian blocks, with Nesterov-Todd scaled directions and
Mehrotra-style adaptive centering (one Schur build, two solves per
iteration).  Intended problem sizes: a few hundred scalar variables and
blocks up to a few hundred rows; everything is dense eigen/Cholesky based.

The reported `value` is the dual objective b'y of the final iterate, whose
slack Z is kept positive definite throughout, so for the metric programs in
this package it is always the value of a feasible point.  `status` is
"optimal" only when the relative gap and both residuals meet their
tolerances; otherwise the best iterate found is returned with "max_iter".
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg


@dataclass
class SDPResult:
    y: np.ndarray
    value: float
    primal_value: float
    gap: float
    rel_gap: float
    primal_infeas: float
    dual_infeas: float
    iterations: int
    status: str                      # "optimal" | "max_iter"


def _eigh_sqrt_pair(m):
    """(m^{1/2}, m^{-1/2}) for Hermitian positive definite m."""
    lam, u = np.linalg.eigh(m)
    lam = np.maximum(lam, 1e-300)
    root = np.sqrt(lam)
    return (u * root) @ u.conj().T, (u / root) @ u.conj().T


def _nt_scaling(x, z):
    """W with W Z W = X, via W = Z^{-1/2} (Z^{1/2} X Z^{1/2})^{1/2} Z^{-1/2}."""
    e, einv = _eigh_sqrt_pair(z)
    t, _ = _eigh_sqrt_pair(e @ x @ e)
    w = einv @ t @ einv
    return 0.5 * (w + w.conj().T)


def _max_step(s, ds):
    """sup { a : s + a ds >= 0 } for Hermitian s > 0."""
    try:
        chol = np.linalg.cholesky(s)
    except np.linalg.LinAlgError:
        lam, u = np.linalg.eigh(s)
        lam = np.maximum(lam, 1e-14 * max(lam.max(), 1.0))
        chol = (u * np.sqrt(lam)) @ u.conj().T
    inner = scipy.linalg.solve_triangular(chol, ds, lower=True)
    inner = scipy.linalg.solve_triangular(
        chol, inner.conj().T, lower=True).conj().T
    lam_min = float(np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))[0])
    if lam_min >= -1e-14:
        return np.inf
    return -1.0 / lam_min


def _chol_psd(w):
    jitter = 0.0
    scale = max(float(np.abs(w).max(initial=0.0)), 1e-30)
    for _ in range(6):
        try:
            return np.linalg.cholesky(w + jitter * np.eye(w.shape[0]))
        except np.linalg.LinAlgError:
            jitter = max(jitter * 10, 1e-14 * scale)
    raise np.linalg.LinAlgError("scaling matrix not positive definite")


def solve_sdp(b, blocks, tol=1e-7, feas_tol=None, max_iter=200,
              step_frac=0.98) -> SDPResult:
    """Solve the block SDP; `blocks` is a list of (C, Astack) pairs with C of
    shape (n, n) and Astack of shape (m, n, n), all Hermitian."""
    b = np.asarray(b, dtype=float)
    m = b.shape[0]
    if feas_tol is None:
        feas_tol = max(10 * tol, 1e-8)
    cs = [np.asarray(c, dtype=complex) for c, _ in blocks]
    stacks = [np.asarray(a, dtype=complex) for _, a in blocks]
    sizes = [c.shape[0] for c in cs]
    ntot = sum(sizes)

    def a_apply(mats):
        """A(X)_i = sum_k Re tr(A_ik X_k)."""
        out = np.zeros(m)
        for stack, xk in zip(stacks, mats):
            out += (stack.reshape(m, -1) @ np.conj(xk).ravel()).real
        return out

    def a_adjoint(y):
        return [np.tensordot(y, stack, axes=1) for stack in stacks]

    # feasible-on-the-dual-side start: shift C into the cone if needed
    zs = []
    for c in cs:
        lam_min = float(np.linalg.eigvalsh(0.5 * (c + c.conj().T))[0])
        scale = max(1.0, float(np.abs(c).max(initial=0.0)))
        shift = max(0.0, 0.1 * scale - lam_min)
        zs.append(0.5 * (c + c.conj().T) + shift * np.eye(c.shape[0]))
    scale_x = max(1.0, float(np.abs(b).max(initial=0.0)))
    xs = [scale_x * np.eye(n, dtype=complex) for n in sizes]
    y = np.zeros(m)

    def diagnostics():
        rp = b - a_apply(xs)
        rds = [c - ay - z for c, ay, z in zip(cs, a_adjoint(y), zs)]
        gap = sum((np.vdot(x, z)).real for x, z in zip(xs, zs))
        obj_d = float(b @ y)
        obj_p = sum((np.vdot(c, x)).real for c, x in zip(cs, xs))
        rel_gap = abs(gap) / (1.0 + abs(obj_d) + abs(obj_p))
        pinf = float(np.linalg.norm(rp)) / (1.0 + float(np.linalg.norm(b)))
        dinf = max((np.linalg.norm(rd) / (1.0 + np.linalg.norm(c))
                    for rd, c in zip(rds, cs)), default=0.0)
        return rp, rds, gap, obj_d, obj_p, rel_gap, pinf, dinf

    best = None
    status = "max_iter"
    it = 0
    small_steps = 0
    stall = 0
    for it in range(1, max_iter + 1):
        rp, rds, gap, obj_d, obj_p, rel_gap, pinf, dinf = diagnostics()
        if not np.isfinite(gap) or not np.isfinite(obj_d):
            break
        merit = max(rel_gap, pinf, dinf)
        if best is None or merit < best[0]:
            best = (merit, y.copy(), obj_d, obj_p, abs(obj_p - obj_d),
                    rel_gap, pinf, dinf, it)
            stall = 0
        else:
            stall += 1
        if rel_gap <= tol and pinf <= feas_tol and dinf <= feas_tol:
            status = "optimal"
            break
        if stall >= 8:
            break
        # iterates at the numerical floor: further steps only inject noise
        z_floor = min(float(np.linalg.eigvalsh(z)[0]) /
                      max(1.0, float(np.abs(z).max())) for z in zs)
        if gap <= 1e-13 * (1.0 + abs(obj_d)) or z_floor < 1e-14:
            break

        # NT scaling and Schur complement
        ws, ls, zinvs = [], [], []
        schur = np.zeros((m, m))
        try:
            for x, z, stack in zip(xs, zs, stacks):
                w = _nt_scaling(x, z)
                lw = _chol_psd(w)
                ws.append(w)
                ls.append(lw)
                lam, u = np.linalg.eigh(z)
                lam = np.maximum(lam, 1e-250)
                zinvs.append((u / lam) @ u.conj().T)
                g = np.matmul(lw.conj().T[None], np.matmul(stack, lw[None]))
                gmat = g.reshape(m, -1)
                schur += (gmat @ gmat.conj().T).real
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(schur)):
            break
        schur = 0.5 * (schur + schur.T)
        jitter = 1e-13 * max(schur.diagonal().max(initial=0.0), 1.0)
        schur_f = None
        for _ in range(8):
            try:
                schur_f = scipy.linalg.cho_factor(
                    schur + jitter * np.eye(m), lower=True)
                break
            except np.linalg.LinAlgError:
                jitter *= 100
        if schur_f is None:
            break

        def schur_solve(rhs):
            dy = scipy.linalg.cho_solve(schur_f, rhs)
            resid = rhs - schur @ dy
            dy += scipy.linalg.cho_solve(schur_f, resid)
            return dy

        def solve_direction(sigma_mu):
            raux = []
            for x, z, w, rd, zinv in zip(xs, zs, ws, rds, zinvs):
                rc = sigma_mu * zinv - x
                raux.append(rc - w @ rd @ w)
            rhs = rp - a_apply(raux)
            dy = schur_solve(rhs)
            adys = a_adjoint(dy)
            dzs = [rd - ady for rd, ady in zip(rds, adys)]
            dxs = [ra + w @ ady @ w for ra, w, ady in zip(raux, ws, adys)]
            dxs = [0.5 * (d + d.conj().T) for d in dxs]
            dzs = [0.5 * (d + d.conj().T) for d in dzs]
            return dy, dxs, dzs

        mu = gap / ntot
        # predictor: pure affine step fixes the centering weight
        dy_a, dxs_a, dzs_a = solve_direction(0.0)
        ap = min(1.0, step_frac * min((_max_step(x, dx) for x, dx in zip(xs, dxs_a)),
                                      default=np.inf))
        ad = min(1.0, step_frac * min((_max_step(z, dz) for z, dz in zip(zs, dzs_a)),
                                      default=np.inf))
        gap_aff = sum((np.vdot(x + ap * dx, z + ad * dz)).real
                      for x, dx, z, dz in zip(xs, dxs_a, zs, dzs_a))
        ratio = max(gap_aff, 0.0) / max(gap, 1e-300)
        sigma = float(np.clip(min(ratio, 1.0) ** 3, 1e-8, 0.9))

        dy, dxs, dzs = solve_direction(sigma * mu)
        ap = min(1.0, step_frac * min((_max_step(x, dx) for x, dx in zip(xs, dxs)),
                                      default=np.inf))
        ad = min(1.0, step_frac * min((_max_step(z, dz) for z, dz in zip(zs, dzs)),
                                      default=np.inf))
        xs = [0.5 * ((x + ap * dx) + (x + ap * dx).conj().T) for x, dx in zip(xs, dxs)]
        zs = [0.5 * ((z + ad * dz) + (z + ad * dz).conj().T) for z, dz in zip(zs, dzs)]
        y = y + ad * dy

        if max(ap, ad) < 1e-5:
            small_steps += 1
            if small_steps >= 3:
                break
        else:
            small_steps = 0

    if status != "optimal":
        # re-check the final iterate, then fall back to the best one
        rp, rds, gap, obj_d, obj_p, rel_gap, pinf, dinf = diagnostics()
        if np.isfinite(gap):
            merit = max(rel_gap, pinf, dinf)
            if best is None or merit < best[0]:
                best = (merit, y.copy(), obj_d, obj_p, abs(obj_p - obj_d),
                        rel_gap, pinf, dinf, it)
        _, y, obj_d, obj_p, gap_abs, rel_gap, pinf, dinf, it_best = best
        if rel_gap <= tol and pinf <= feas_tol and dinf <= feas_tol:
            status = "optimal"
        return SDPResult(y=y, value=obj_d, primal_value=obj_p, gap=gap_abs,
                         rel_gap=rel_gap, primal_infeas=pinf, dual_infeas=dinf,
                         iterations=it, status=status)

    rp, rds, gap, obj_d, obj_p, rel_gap, pinf, dinf = diagnostics()
    return SDPResult(y=y, value=obj_d, primal_value=obj_p,
                     gap=abs(obj_p - obj_d), rel_gap=rel_gap,
                     primal_infeas=pinf, dual_infeas=dinf,
                     iterations=it, status=status)
