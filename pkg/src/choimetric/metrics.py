"""Monge-Kantorovich distances as semidefinite programs.

The distance mk_L(phi, psi) = sup { |phi(a) - psi(a)| : a self-adjoint,
L(a) <= 1 } is solved with the operator-norm constraint written as the
linear matrix inequality [[I, C(a)], [C(a)*, I]] >= 0, after a kernel
pre-pass that either certifies the value is infinite or eliminates the
kernel directions.  The constraint matrices are split into independent
blocks along the connected components of their joint support, which the
interior-point solver exploits directly.

Restricting the optimization to self-adjoint elements loses nothing: the
seminorms are *-invariant and the functional differences Hermitian, so the
Hermitian part of any feasible point is feasible with the same objective.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import sdp
from .algebra import (
    AlgebraElement,
    ConcreteAlgebra,
    LinearFunctional,
    TraceFunctional,
    selfadjoint_basis,
)
from .channels import (
    ChannelMap,
    check_trace_channel,
    cp_oracle_npositivity,
    is_unital,
    omega_tau,
    pullback_state,
)
from .errors import AlgebraMismatch, Infeasible, SeminormNotCommutatorForm
from .geometry import AmbientNormSeminorm, Seminorm, SumSeminorm
from .linalg import hermitian_part


@dataclass
class MKProblem:
    phi: LinearFunctional
    psi: LinearFunctional
    seminorm: Seminorm
    tolerance: float = 1e-7
    max_iter: int = 200
    restrict_to: np.ndarray | None = None   # columns spanning a *-closed subspace
    warn_on_nonstates: bool = True


@dataclass
class MKResult:
    value: float                             # math.inf when the metric is infinite
    optimizer: AlgebraElement | None
    dual_gap: float
    status: str                              # "optimal" | "infinite" | "max_iter"
    kernel_witness: AlgebraElement | None = None
    iterations: int = 0

    @property
    def finite(self) -> bool:
        return self.status != "infinite"


# ---------------------------------------------------------------------------
# seminorm encodings
# ---------------------------------------------------------------------------

def _norm_families(seminorm: Seminorm, rows: np.ndarray) -> list[np.ndarray]:
    """Commutator images of the self-adjoint basis directions, one stack per
    norm summand (sums of seminorms get one family per member)."""
    if isinstance(seminorm, SumSeminorm):
        stacks = []
        for member in seminorm.members():
            mats = member.linear_matrices()
            if mats is None:
                raise SeminormNotCommutatorForm(
                    f"{type(member).__name__} exposes no linear matrix form")
            stacks.append(np.einsum("rb,bxy->rxy", rows, mats))
        return stacks
    mats = seminorm.linear_matrices()
    if mats is None:
        raise SeminormNotCommutatorForm(
            f"{type(seminorm).__name__} exposes no linear matrix form")
    return [np.einsum("rb,bxy->rxy", rows, mats)]


def _split_components(kstack: np.ndarray, rel_tol: float = 1e-12):
    """Connected components of the joint row/column support of a stack of
    matrices; each component yields an independent operator-norm block."""
    r, h, w = kstack.shape
    scale = float(np.abs(kstack).max(initial=0.0))
    if scale == 0.0:
        return []
    support = (np.abs(kstack) > rel_tol * scale).any(axis=0)
    parent = list(range(h + w))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    rows_nz, cols_nz = np.nonzero(support)
    for a, b in zip(rows_nz, cols_nz):
        union(a, h + b)
    groups = {}
    for a, b in zip(rows_nz, cols_nz):
        groups.setdefault(find(a), [set(), set()])
    for a, b in zip(rows_nz, cols_nz):
        root = find(a)
        groups[root][0].add(a)
        groups[root][1].add(b)
    comps = []
    for rows_set, cols_set in groups.values():
        comps.append((np.array(sorted(rows_set)), np.array(sorted(cols_set))))
    return comps


def _norm_block(kslice: np.ndarray) -> np.ndarray:
    """Hermitian LMI matrices [[0, K], [K*, 0]] for a stack of K slices."""
    r, nr, nc = kslice.shape
    out = np.zeros((r, nr + nc, nr + nc), dtype=complex)
    out[:, :nr, nr:] = kslice
    out[:, nr:, :nr] = kslice.conj().transpose(0, 2, 1)
    return out


def _assemble_blocks(families: list[np.ndarray], nvars: int):
    """Blocks for { L <= 1 } with L a norm or a sum of norms.

    A single family uses unit right-hand sides; k families introduce k - 1
    split-level variables s_i with levels (s_1, ..., s_{k-1}, 1 - sum s_i).
    """
    naux = max(0, len(families) - 1)
    total = nvars + naux
    blocks = []
    for fam_idx, fam in enumerate(families):
        comps = _split_components(fam)
        if not comps and naux:
            comps = [(np.array([], dtype=int), np.array([], dtype=int))]
        for rows_idx, cols_idx in comps:
            nr, nc = len(rows_idx), len(cols_idx)
            size = max(nr + nc, 1)
            astack = np.zeros((total, size, size), dtype=complex)
            if nr + nc:
                kslice = fam[:, rows_idx][:, :, cols_idx]
                astack[:nvars] = -_norm_block(kslice)
            if naux == 0:
                cmat = np.eye(size, dtype=complex)
            elif fam_idx < len(families) - 1:
                cmat = np.zeros((size, size), dtype=complex)
                astack[nvars + fam_idx] += -np.eye(size)
            else:
                cmat = np.eye(size, dtype=complex)
                for i in range(naux):
                    astack[nvars + i] += np.eye(size)
            blocks.append((cmat, astack))
    return blocks, naux


# ---------------------------------------------------------------------------
# the ball maximization core
# ---------------------------------------------------------------------------

@dataclass
class _BallSetup:
    """Cached reduction of a (seminorm, subspace) pair for repeated solves."""
    algebra: ConcreteAlgebra
    rows: np.ndarray                 # (r, d) self-adjoint coordinate basis
    families: list[np.ndarray]
    null_basis: np.ndarray           # (r, n0)
    range_basis: np.ndarray          # (r, q)
    reduced: list[np.ndarray]
    projector: np.ndarray | None


def prepare_ball(seminorm: Seminorm,
                 restrict_to: np.ndarray | None = None) -> _BallSetup:
    alg = seminorm.algebra
    rows = selfadjoint_basis(alg, restrict_to)
    families = _norm_families(seminorm, rows)
    flat = np.hstack([np.hstack([f.reshape(f.shape[0], -1).real,
                                 f.reshape(f.shape[0], -1).imag])
                      for f in families])
    from .linalg import null_space_real, row_space_real
    null = null_space_real(flat.T)
    rng_basis = row_space_real(flat.T)
    reduced = [np.einsum("iq,ixy->qxy", rng_basis, f) for f in families]
    projector = None
    if restrict_to is not None:
        s = np.asarray(restrict_to, dtype=complex)
        gram = s.conj().T @ s
        projector = s @ np.linalg.solve(gram, s.conj().T)
    return _BallSetup(alg, rows, families, null, rng_basis, reduced, projector)


def _maximize_linear(setup: _BallSetup, values: np.ndarray, tol: float,
                     max_iter: int) -> MKResult:
    """sup { Re f(a) : a self-adjoint, L(a) <= 1 } for f given by `values`."""
    alg = setup.algebra
    if setup.projector is not None:
        resid = float(np.abs(values - setup.projector.T @ values).max())
        if resid > 1e-8 * (1.0 + float(np.abs(values).max(initial=0.0))):
            raise AlgebraMismatch(
                "objective not supported on the restriction subspace "
                f"(residual {resid:.2e})")
    g = (setup.rows @ values).real
    # kernel pre-pass
    if setup.null_basis.shape[1]:
        along = setup.null_basis.T @ g
        if float(np.abs(along).max(initial=0.0)) > 1e-9 * max(1.0, float(np.abs(g).max())):
            pick = int(np.argmax(np.abs(along)))
            wit = setup.rows.T @ setup.null_basis[:, pick]
            return MKResult(math.inf, None, 0.0, "infinite",
                            kernel_witness=AlgebraElement(alg, wit))
    gred = setup.range_basis.T @ g
    scale = float(np.linalg.norm(gred))
    if scale <= 1e-14 * max(1.0, float(np.abs(values).max(initial=0.0))):
        return MKResult(0.0, alg.zero(), 0.0, "optimal")
    # canonical sign so that mk(phi, psi) and mk(psi, phi) solve one program
    flip = -1.0 if gred[int(np.argmax(np.abs(gred)))] < 0 else 1.0
    b_obj = flip * gred / scale
    q = gred.shape[0]
    blocks, naux = _assemble_blocks(setup.reduced, q)
    b_full = np.concatenate([b_obj, np.zeros(naux)])
    res = sdp.solve_sdp(b_full, blocks, tol=tol, max_iter=max_iter)
    coords = setup.rows.T @ (setup.range_basis @ (flip * res.y[:q]))
    status = "optimal" if res.status == "optimal" else "max_iter"
    return MKResult(res.value * scale, AlgebraElement(alg, coords),
                    res.gap * scale, status, iterations=res.iterations)


def mk_distance(problem: MKProblem) -> MKResult:
    """The Monge-Kantorovich extended metric between two functionals."""
    phi, psi = problem.phi, problem.psi
    if not phi.algebra.same_as(problem.seminorm.algebra):
        raise AlgebraMismatch("seminorm not defined over the functionals' algebra")
    if problem.warn_on_nonstates and not (phi.is_state() and psi.is_state()):
        warnings.warn("mk_distance applied to non-state functionals; "
                      "proceeding on the difference", stacklevel=2)
    diff = np.asarray(phi.values - psi.values, dtype=complex)
    try:
        setup = prepare_ball(problem.seminorm, problem.restrict_to)
    except SeminormNotCommutatorForm:
        return _mk_hyperplane(problem, diff)
    return _maximize_linear(setup, diff, problem.tolerance, problem.max_iter)


def mk_between(phi, psi, seminorm, **kw) -> MKResult:
    return mk_distance(MKProblem(phi, psi, seminorm, **kw))


# ---------------------------------------------------------------------------
# generic fallback: supporting hyperplanes over the unit ball
# ---------------------------------------------------------------------------

def _mk_hyperplane(problem: MKProblem, diff: np.ndarray,
                   box: float = 1e4, max_cuts: int = 400) -> MKResult:
    """Kelley-style cutting planes using only seminorm evaluations; the
    documented slower path for seminorms without a linear matrix form."""
    from scipy.optimize import linprog
    lip = problem.seminorm
    alg = lip.algebra
    rows = selfadjoint_basis(alg, problem.restrict_to)
    g = (rows @ diff).real
    r = g.shape[0]
    if float(np.linalg.norm(g)) < 1e-14:
        return MKResult(0.0, alg.zero(), 0.0, "optimal")

    def eval_l(t):
        return lip.eval_coords(rows.T @ t)

    def subgrad(t, f0, h=1e-6):
        out = np.zeros(r)
        for i in range(r):
            e = np.zeros(r)
            e[i] = h
            out[i] = (eval_l(t + e) - eval_l(t - e)) / (2 * h)
        return out

    cuts_a, cuts_b = [], []
    best_val, best_t = 0.0, np.zeros(r)
    upper = math.inf
    tol = max(problem.tolerance, 1e-5)
    for _ in range(max_cuts):
        res = linprog(-g, A_ub=np.array(cuts_a) if cuts_a else None,
                      b_ub=np.array(cuts_b) if cuts_b else None,
                      bounds=[(-box, box)] * r, method="highs")
        if not res.success:
            break
        t = res.x
        upper = float(g @ t)
        lt = eval_l(t)
        if lt <= 1 + 1e-9:
            if g @ t > best_val:
                best_val, best_t = float(g @ t), t
        elif lt > 0:
            scaled = t / lt
            if g @ scaled > best_val:
                best_val, best_t = float(g @ scaled), scaled
        if upper - best_val <= tol * max(1.0, abs(upper)):
            coords = rows.T @ best_t
            return MKResult(best_val, AlgebraElement(alg, coords),
                            upper - best_val, "optimal")
        if best_val > 0.01 * box:
            raise Infeasible("unit ball appears unbounded along the objective; "
                             "the distance is infinite or the box is too small")
        h = subgrad(t, lt)
        cuts_a.append(h)
        cuts_b.append(1.0 - lt + float(h @ t))
    coords = rows.T @ best_t
    return MKResult(best_val, AlgebraElement(alg, coords),
                    max(0.0, upper - best_val), "max_iter")


# ---------------------------------------------------------------------------
# the Delta metric on trace channels
# ---------------------------------------------------------------------------

def delta_distance(f: ChannelMap, g: ChannelMap, tau: TraceFunctional,
                   seminorm: Seminorm, tolerance: float = 1e-7,
                   restrict_to: np.ndarray | None = None,
                   setup: _BallSetup | None = None,
                   enforce: bool = True) -> MKResult:
    """Delta(F, G) = mk_L(omega(F), omega(G)) on trace channels."""
    if enforce:
        check_trace_channel(f, tau, label="first argument")
        check_trace_channel(g, tau, label="second argument")
    carrier = seminorm.algebra
    om_f = omega_tau(f, tau, carrier=carrier)
    om_g = omega_tau(g, tau, carrier=carrier)
    if setup is None:
        setup = prepare_ball(seminorm, restrict_to)
    diff = np.asarray(om_f.values - om_g.values, dtype=complex)
    return _maximize_linear(setup, diff, tolerance, 200)


# ---------------------------------------------------------------------------
# trace-norm dual (matricial Wasserstein-1)
# ---------------------------------------------------------------------------

@dataclass
class WassersteinResult:
    value: float
    u: list[np.ndarray]
    gap: float
    status: str
    iterations: int


def _herm_param_basis(n: int) -> np.ndarray:
    mats = []
    for a in range(n):
        m = np.zeros((n, n), dtype=complex)
        m[a, a] = 1.0
        mats.append(m)
    for a in range(n):
        for b in range(a + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[a, b] = m[b, a] = 1.0
            mats.append(m)
            m = np.zeros((n, n), dtype=complex)
            m[a, b] = 1j
            m[b, a] = -1j
            mats.append(m)
    return np.array(mats)


def wasserstein_dual(rho1: np.ndarray, rho2: np.ndarray, l_mats,
                     tol: float = 1e-7, max_iter: int = 200) -> WassersteinResult:
    """Trace-norm minimization dual to the Monge-Kantorovich program over
    self-adjoint elements with the stacked-commutator constraint norm:

        min { Tr sqrt(U^* U) : herm( sum_i [L_i, u_i] ) = rho1 - rho2 }

    with U the column stack of the u_i^*.  Constraining the Hermitian part
    is what the Lagrangian of the self-adjoint primal produces; restricting
    to anti-Hermitian u_i recovers the exact commutator equation.  Raises
    Infeasible when the difference is outside the range of the constraint
    map, which is exactly when the primal distance is infinite.
    """
    l_mats = [np.asarray(l, dtype=complex) for l in l_mats]
    n = l_mats[0].shape[0]
    nn = len(l_mats)
    target = np.asarray(rho1, dtype=complex) - np.asarray(rho2, dtype=complex)

    def vec_herm(mat):
        h = 0.5 * (mat + mat.conj().T)
        parts = [h[a, a].real for a in range(n)]
        for a in range(n):
            for c in range(a + 1, n):
                parts.extend([h[a, c].real, h[a, c].imag])
        return np.array(parts)

    # real-linear constraint map u -> herm(sum [L_i, u_i])
    cols = []
    for i in range(nn):
        for a in range(n):
            for c in range(n):
                e = np.zeros((n, n), dtype=complex)
                e[a, c] = 1.0
                k = l_mats[i] @ e - e @ l_mats[i]
                cols.append(vec_herm(k))
                cols.append(vec_herm(1j * k))
    tmat = np.array(cols).T
    rhs = vec_herm(target)
    sol, *_ = np.linalg.lstsq(tmat, rhs, rcond=None)
    resid = float(np.linalg.norm(tmat @ sol - rhs))
    if resid > 1e-8 * (1.0 + float(np.linalg.norm(rhs))):
        raise Infeasible(
            f"rho1 - rho2 outside the commutator range (residual {resid:.2e})")

    from .linalg import null_space_real
    null = null_space_real(tmat)

    def unpack(realvec):
        out = []
        for i in range(nn):
            block = realvec[2 * i * n * n:2 * (i + 1) * n * n]
            re = block[0::2].reshape(n, n)
            im = block[1::2].reshape(n, n)
            out.append(re + 1j * im)
        return out

    u0 = unpack(sol)
    null_mats = [unpack(null[:, k]) for k in range(null.shape[1])]

    def stack(mats):
        # the pairing tr(U^dagger stack([L_i, a])) = sum_i tr(u_i [L_i, a])
        # aligns the operator-norm constraint with || stack(u_i^dagger) ||_1
        return np.vstack([m.conj().T for m in mats])

    u0_stack = stack(u0)
    herm_p = _herm_param_basis(nn * n)
    herm_q = _herm_param_basis(n)
    npar, qpar, spar = len(herm_p), len(herm_q), len(null_mats)
    m = npar + qpar + spar
    size = nn * n + n
    cmat = np.zeros((size, size), dtype=complex)
    cmat[:nn * n, nn * n:] = u0_stack
    cmat[nn * n:, :nn * n] = u0_stack.conj().T
    astack = np.zeros((m, size, size), dtype=complex)
    for a, hp in enumerate(herm_p):
        astack[a, :nn * n, :nn * n] = -hp
    for bq, hq in enumerate(herm_q):
        astack[npar + bq, nn * n:, nn * n:] = -hq
    for s, mats in enumerate(null_mats):
        blockm = stack(mats)
        astack[npar + qpar + s, :nn * n, nn * n:] = -blockm
        astack[npar + qpar + s, nn * n:, :nn * n] = -blockm.conj().T
    b = np.zeros(m)
    for a, hp in enumerate(herm_p):
        b[a] = -0.5 * float(np.trace(hp).real)
    for bq, hq in enumerate(herm_q):
        b[npar + bq] = -0.5 * float(np.trace(hq).real)
    res = sdp.solve_sdp(b, [(cmat, astack)], tol=tol, max_iter=max_iter)
    coeff = res.y[npar + qpar:]
    u_final = [u0[i] + sum(c * mats[i] for c, mats in zip(coeff, null_mats))
               for i in range(nn)]
    status = "optimal" if res.status == "optimal" else "max_iter"
    return WassersteinResult(-res.value, u_final, res.gap, status, res.iterations)


# ---------------------------------------------------------------------------
# the D_L metric on unital CP maps
# ---------------------------------------------------------------------------

@dataclass
class DLResult:
    value: float
    converged: bool
    status: str
    per_start: list[float] = field(default_factory=list)
    optimizer: AlgebraElement | None = None


def dl_distance(f: ChannelMap, g: ChannelMap, seminorm: Seminorm,
                starts: int = 8, seed: int = 0, tolerance: float = 1e-7,
                max_rounds: int = 40, validate: bool = True) -> DLResult:
    """D_L(F, G) = sup_psi mk_L(F* psi, G* psi), reduced to the norm ascent
    sup { ||(F - G)(a)|| : L(a) <= 1 } and solved by alternating between the
    inner linear SDP (fixed unit vector) and re-extremizing the vector.

    The result is a certified lower bound; `converged` reports whether every
    start stalled before the round cap.
    """
    if validate:
        for name, ch in (("first", f), ("second", g)):
            if not is_unital(ch):
                raise AlgebraMismatch(f"{name} argument is not unital")
            if not cp_oracle_npositivity(ch):
                raise AlgebraMismatch(f"{name} argument is not completely positive")
    if not f.source.same_as(seminorm.algebra):
        raise AlgebraMismatch("seminorm not over the channels' source")
    setup = prepare_ball(seminorm)
    diffmat = f.matrix - g.matrix
    target = f.target
    nb = target.ambient_dim
    # ambient images of the self-adjoint directions under F - G
    imgs = np.einsum("rb,mb,mxy->rxy", setup.rows, diffmat, target.basis)

    rng = np.random.default_rng(seed)
    best = 0.0
    best_opt = None
    per_start = []
    all_converged = True
    for _ in range(max(1, starts)):
        xi = rng.standard_normal(nb) + 1j * rng.standard_normal(nb)
        xi /= np.linalg.norm(xi)
        val = 0.0
        converged = False
        opt_coords = None
        for _ in range(max_rounds):
            gvec = np.einsum("x,rxy,y->r", xi.conj(), imgs, xi).real
            # kernel directions with visible objective make D_L infinite
            if setup.null_basis.shape[1]:
                along = setup.null_basis.T @ gvec
                if float(np.abs(along).max(initial=0.0)) > 1e-9 * max(
                        1.0, float(np.abs(gvec).max(initial=0.0))):
                    wit = setup.rows.T @ setup.null_basis[:, int(np.argmax(np.abs(along)))]
                    return DLResult(math.inf, True, "infinite",
                                    optimizer=AlgebraElement(setup.algebra, wit))
            gred = setup.range_basis.T @ gvec
            scale = float(np.linalg.norm(gred))
            if scale < 1e-13:
                converged = True
                break
            blocks, naux = _assemble_blocks(setup.reduced, gred.shape[0])
            res = sdp.solve_sdp(np.concatenate([gred / scale, np.zeros(naux)]),
                                blocks, tol=tolerance)
            t = setup.range_basis @ res.y[:gred.shape[0]]
            big = np.tensordot(t, imgs, axes=1)
            lam, vecs = np.linalg.eigh(hermitian_part(big))
            idx = int(np.argmax(np.abs(lam)))
            new_val = float(np.abs(lam[idx]))
            xi = vecs[:, idx]
            if new_val <= val * (1 + 1e-9) + tolerance:
                val = max(val, new_val)
                opt_coords = setup.rows.T @ t
                converged = True
                break
            val = new_val
            opt_coords = setup.rows.T @ t
        per_start.append(val)
        all_converged = all_converged and converged
        if val > best:
            best = val
            best_opt = opt_coords
    if not all_converged:
        warnings.warn("D_L ascent hit the round cap; value is a lower bound",
                      stacklevel=2)
    optimizer = AlgebraElement(setup.algebra, best_opt) if best_opt is not None else None
    return DLResult(best, all_converged,
                    "optimal" if all_converged else "heuristic_nonconvergence",
                    per_start, optimizer)


def commutative_pure_states(alg: ConcreteAlgebra, tries: int = 5):
    """Characters of a commutative concrete algebra, as state functionals."""
    if not alg.is_commutative():
        raise AlgebraMismatch("pure-state enumeration needs a commutative algebra")
    rng = np.random.default_rng(7)
    rows = selfadjoint_basis(alg)
    for _ in range(tries):
        generic = alg.realize(rows.T @ rng.standard_normal(rows.shape[0]))
        lam, u = np.linalg.eigh(hermitian_part(generic))
        splits = [0]
        for i in range(1, len(lam)):
            if lam[i] - lam[i - 1] > 1e-6 * max(1.0, float(np.abs(lam).max())):
                splits.append(i)
        splits.append(len(lam))
        chars = []
        ok = True
        for s, e in zip(splits, splits[1:]):
            block = u[:, s:e]
            vals = np.einsum("xk,bxy,yk->b", block.conj(), alg.basis, block) / (e - s)
            phi = LinearFunctional(alg, vals)
            if abs(phi.unit_value()) < 1e-8:
                continue          # eigenspace outside the algebra's support
            # multiplicativity check
            prod_vals = np.einsum("ijk,k->ij", alg.structure, vals)
            if float(np.abs(prod_vals - np.outer(vals, vals)).max()) > 1e-7:
                ok = False
                break
            chars.append(phi)
        if ok and chars:
            unique = []
            for phi in chars:
                if not any(np.abs(phi.values - o.values).max() < 1e-8 for o in unique):
                    unique.append(phi)
            return unique
    raise AlgebraMismatch("failed to separate the characters numerically")


def dl_distance_pure_states(f: ChannelMap, g: ChannelMap,
                            seminorm: Seminorm, tolerance: float = 1e-7):
    """Exact D_L for commutative targets: the outer supremum is attained at
    an extreme point of the state space, so enumerate the characters."""
    chars = commutative_pure_states(f.target)
    setup = prepare_ball(seminorm)
    best = 0.0
    best_res = None
    for chi in chars:
        diff = pullback_state(f, chi).values - pullback_state(g, chi).values
        res = _maximize_linear(setup, np.asarray(diff, complex), tolerance, 200)
        if res.status == "infinite":
            return res
        if res.value > best:
            best = res.value
            best_res = res
    return best_res if best_res is not None else MKResult(0.0, None, 0.0, "optimal")


def dl_stabilized(f: ChannelMap, g: ChannelMap, m_max: int,
                  seminorm_family=None, **kw):
    """Truncated stabilization: max over m = 1..m_max of D on the m-fold
    amplifications, with the operator norm as the seminorm on each level."""
    from .channels import amplify
    values = []
    for m in range(1, m_max + 1):
        fm, gm = amplify(m, f), amplify(m, g)
        if seminorm_family is not None:
            lm = seminorm_family(m, fm.source)
        else:
            lm = AmbientNormSeminorm(fm.source)
        values.append(dl_distance(fm, gm, lm, **kw).value)
    return max(values), values
