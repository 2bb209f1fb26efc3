"""Spectral triples, commutator seminorms, and Kasparov exterior products.

At finite dimension every commutator is bounded and the compact-resolvent
condition is vacuous, so a triple is a faithful unital *-representation
together with a Hermitian Dirac matrix and an optional grading.  Seminorm
domains are the whole algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .algebra import (
    AlgebraElement,
    ConcreteAlgebra,
    opposite_algebra,
    tensor_algebra,
)
from .errors import AlgebraMismatch, InvalidSpectralTriple
from .linalg import EPS_STRUCT, operator_norm


@dataclass(frozen=True)
class SpectralTriple:
    algebra: ConcreteAlgebra
    rep: np.ndarray                  # (d, H, H)
    dirac: np.ndarray                # (H, H) Hermitian
    grading: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "rep", np.asarray(self.rep, dtype=complex))
        object.__setattr__(self, "dirac", np.asarray(self.dirac, dtype=complex))
        if self.grading is not None:
            object.__setattr__(self, "grading", np.asarray(self.grading, dtype=complex))

    @property
    def hilbert_dim(self) -> int:
        return self.dirac.shape[0]

    @property
    def even(self) -> bool:
        return self.grading is not None

    def rep_of(self, x) -> np.ndarray:
        coords = x.coords if isinstance(x, AlgebraElement) else np.asarray(x, complex)
        return np.tensordot(coords, self.rep, axes=1)

    def commutator_matrices(self) -> np.ndarray:
        """[D, pi(B_i)] stacked; the coordinate-linear commutator map."""
        return self.dirac @ self.rep - self.rep @ self.dirac

    def validate(self, tol: float = EPS_STRUCT):
        alg, rep, dirac = self.algebra, self.rep, self.dirac
        d, h, _ = rep.shape
        if d != alg.dim or dirac.shape != (h, h):
            raise InvalidSpectralTriple("shape mismatch between rep and dirac")
        scale = max(1.0, float(np.abs(dirac).max(initial=0.0)))
        if linalg.frobenius(dirac - linalg.dagger(dirac)) > tol * scale * h:
            raise InvalidSpectralTriple("Dirac matrix is not Hermitian")
        # unital
        unit_img = np.tensordot(alg.unit_coords, rep, axes=1)
        if linalg.frobenius(unit_img - np.eye(h)) > tol * h:
            raise InvalidSpectralTriple("representation is not unital")
        # multiplicative: exhaustive on basis pairs while affordable, random
        # coordinate pairs beyond that (linearity makes sampling decisive)
        rscale = max(1.0, float(np.abs(rep).max(initial=0.0)) ** 2)
        if d * d * h ** 3 <= 5e8:
            for i in range(d):
                prods = rep[i] @ rep
                recon = np.tensordot(alg.structure[i], rep, axes=1)
                if float(np.abs(prods - recon).max()) > 1e3 * tol * rscale:
                    raise InvalidSpectralTriple("representation fails the product law")
        else:
            rng = np.random.default_rng(0)
            for _ in range(8):
                u = rng.standard_normal(d) + 1j * rng.standard_normal(d)
                v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
                lhs = np.tensordot(u, rep, axes=1) @ np.tensordot(v, rep, axes=1)
                rhs = np.tensordot(alg.multiply_coords(u, v), rep, axes=1)
                sc = rscale * float(np.linalg.norm(u) * np.linalg.norm(v))
                if float(np.abs(lhs - rhs).max()) > 1e3 * tol * sc:
                    raise InvalidSpectralTriple("representation fails the product law")
        # star
        adj = np.einsum("ik,kxy->ixy", alg.adjoint_coords, rep)
        if float(np.abs(rep.conj().transpose(0, 2, 1) - adj).max()) > 1e3 * tol * rscale:
            raise InvalidSpectralTriple("representation fails the adjoint law")
        # faithful
        flat = rep.reshape(d, h * h)
        if np.linalg.matrix_rank(flat, tol=1e-10 * max(1.0, rscale)) < d:
            raise InvalidSpectralTriple("representation is not faithful")
        if self.grading is not None:
            g = self.grading
            if linalg.frobenius(g - linalg.dagger(g)) > tol * h:
                raise InvalidSpectralTriple("grading is not Hermitian")
            if linalg.frobenius(g @ g - np.eye(h)) > tol * h:
                raise InvalidSpectralTriple("grading does not square to one")
            if float(np.abs(g @ rep - rep @ g).max()) > 1e3 * tol * rscale:
                raise InvalidSpectralTriple("grading does not commute with the representation")
            if float(np.abs(g @ dirac + dirac @ g).max()) > 1e3 * tol * scale:
                raise InvalidSpectralTriple("grading does not anticommute with the Dirac matrix")
        return self


# ---------------------------------------------------------------------------
# seminorms
# ---------------------------------------------------------------------------

class Seminorm:
    """Base for seminorm evaluators over a fixed algebra.

    Subclasses either expose `linear_matrices()` -- complex matrices C_i per
    basis coordinate with L(x) = || sum_i coords_i C_i || -- or only pointwise
    evaluation, in which case the Monge-Kantorovich solver is restricted to
    its generic fallback path.
    """

    algebra: ConcreteAlgebra

    def __call__(self, x: AlgebraElement) -> float:
        if x.algebra is not self.algebra and not x.algebra.same_as(self.algebra):
            raise AlgebraMismatch("seminorm applied outside its algebra")
        return self.eval_coords(x.coords)

    def eval_coords(self, coords: np.ndarray) -> float:
        raise NotImplementedError

    def linear_matrices(self):
        return None


class CommutatorSeminorm(Seminorm):
    """L(a) = || [D, pi(a)] || from a spectral triple."""

    def __init__(self, triple: SpectralTriple):
        self.triple = triple
        self.algebra = triple.algebra
        self._mats = triple.commutator_matrices()

    def eval_coords(self, coords):
        return operator_norm(np.tensordot(coords, self._mats, axes=1))

    def linear_matrices(self):
        return self._mats


class AmbientNormSeminorm(Seminorm):
    """The ambient operator norm (not Lipschitz: the unit is not in the
    kernel); used by the stabilized metric on matrix amplifications."""

    def __init__(self, algebra: ConcreteAlgebra):
        self.algebra = algebra

    def eval_coords(self, coords):
        return operator_norm(self.algebra.realize(coords))

    def linear_matrices(self):
        return self.algebra.basis


class PullbackSeminorm(Seminorm):
    """L(T x) for a coordinate-linear map T into the base seminorm's algebra."""

    def __init__(self, base: Seminorm, coord_map: np.ndarray,
                 algebra: ConcreteAlgebra):
        self.base = base
        self.coord_map = np.asarray(coord_map, dtype=complex)
        self.algebra = algebra

    def eval_coords(self, coords):
        return self.base.eval_coords(self.coord_map @ coords)

    def linear_matrices(self):
        inner = self.base.linear_matrices()
        if inner is None:
            return None
        return np.einsum("bd,bxy->dxy", self.coord_map, inner)


class SumSeminorm(Seminorm):
    """Pointwise sum of two seminorms on the same algebra."""

    def __init__(self, left: Seminorm, right: Seminorm):
        if not left.algebra.same_as(right.algebra):
            raise AlgebraMismatch("sum of seminorms over different algebras")
        self.left = left
        self.right = right
        self.algebra = left.algebra

    def eval_coords(self, coords):
        return self.left.eval_coords(coords) + self.right.eval_coords(coords)

    def members(self):
        out = []
        for part in (self.left, self.right):
            if isinstance(part, SumSeminorm):
                out.extend(part.members())
            else:
                out.append(part)
        return out


def opposite_seminorm(lip: Seminorm) -> Seminorm:
    """L_{A^op}(a^op) = L_A(a); the identity on coordinates."""
    op = opposite_algebra(lip.algebra)
    return PullbackSeminorm(lip, np.eye(lip.algebra.dim, dtype=complex), op)


def pullback_seminorm(lip: Seminorm, coord_map: np.ndarray,
                      algebra: ConcreteAlgebra) -> Seminorm:
    return PullbackSeminorm(lip, coord_map, algebra)


def left_tensor_seminorm(triple_a: SpectralTriple, algebra_b: ConcreteAlgebra,
                         rep_b: np.ndarray | None = None,
                         carrier: ConcreteAlgebra | None = None) -> CommutatorSeminorm:
    """(L_A (x) 1) on A (x) B, evaluated as the commutator seminorm of the
    Dirac D_A (x) 1 on the tensor representation (the two agree as Lipschitz
    seminorms)."""
    if rep_b is None:
        rep_b = algebra_b.basis
    if carrier is None:
        carrier = tensor_algebra(triple_a.algebra, algebra_b)
    hb = rep_b.shape[1]
    rep = _tensor_rep(triple_a.rep, rep_b)
    dirac = np.kron(triple_a.dirac, np.eye(hb))
    return CommutatorSeminorm(SpectralTriple(carrier, rep, dirac))


def right_tensor_seminorm(algebra_a: ConcreteAlgebra, triple_b: SpectralTriple,
                          rep_a: np.ndarray | None = None,
                          carrier: ConcreteAlgebra | None = None) -> CommutatorSeminorm:
    if rep_a is None:
        rep_a = algebra_a.basis
    if carrier is None:
        carrier = tensor_algebra(algebra_a, triple_b.algebra)
    ha = rep_a.shape[1]
    rep = _tensor_rep(rep_a, triple_b.rep)
    dirac = np.kron(np.eye(ha), triple_b.dirac)
    return CommutatorSeminorm(SpectralTriple(carrier, rep, dirac))


def tensor_sum_seminorm(triple_a: SpectralTriple, triple_b: SpectralTriple,
                        carrier: ConcreteAlgebra | None = None) -> SumSeminorm:
    """L_{A (x) B} = L_A (x) 1 + 1 (x) L_B with both parts in commutator form."""
    if carrier is None:
        carrier = tensor_algebra(triple_a.algebra, triple_b.algebra)
    left = left_tensor_seminorm(triple_a, triple_b.algebra, rep_b=triple_b.rep,
                                carrier=carrier)
    right = right_tensor_seminorm(triple_a.algebra, triple_b, rep_a=triple_a.rep,
                                  carrier=carrier)
    return SumSeminorm(left, right)


def state_sup_lower_bound(tensor_coords: np.ndarray, side: str,
                          lip: Seminorm, other: ConcreteAlgebra,
                          samples: int = 200,
                          rng: np.random.Generator | None = None) -> float:
    """Sampling lower bound for the state-supremum form of a tensor seminorm.

    For side='left' this estimates (L_A (x) 1)(z) = sup_psi L_A((id (x) psi) z)
    by sampling states psi on the other factor; always a lower bound of the
    commutator-form value.
    """
    rng = rng or np.random.default_rng(0)
    da = lip.algebra.dim
    db = other.dim
    z = np.asarray(tensor_coords, complex)
    if side == "left":
        block = z.reshape(da, db)
    else:
        block = z.reshape(db, da).T
    best = 0.0
    n = other.ambient_dim
    unit = other.realize(other.unit_coords)
    for _ in range(samples):
        c = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        rho = c @ c.conj().T
        vals = np.einsum("xy,byx->b", rho, other.basis)
        mass = complex(np.trace(rho @ unit))
        if abs(mass) < 1e-12:
            continue
        sliced = block @ (vals / mass)
        best = max(best, lip.eval_coords(sliced))
    return best


# ---------------------------------------------------------------------------
# Kasparov exterior products
# ---------------------------------------------------------------------------

def _tensor_rep(rep_a: np.ndarray, rep_b: np.ndarray) -> np.ndarray:
    da, ha, _ = rep_a.shape
    db, hb, _ = rep_b.shape
    out = np.einsum("aij,bkl->abikjl", rep_a, rep_b)
    return out.reshape(da * db, ha * hb, ha * hb)


def kasparov_product(ta: SpectralTriple, tb: SpectralTriple,
                     carrier: ConcreteAlgebra | None = None,
                     validate: bool = True) -> SpectralTriple:
    """Exterior Kasparov product over the tensor algebra, in all four parity
    combinations.

    even x even : D_A (x) 1 + gamma_A (x) D_B, grading gamma_A (x) gamma_B
    odd  x odd  : doubled space, off-diagonal blocks D_A (x) 1 +- i 1 (x) D_B,
                  grading diag(1, -1)
    odd  x even : D_A (x) gamma_B + 1 (x) D_B, no grading
    even x odd  : D_A (x) 1 + gamma_A (x) D_B, no grading
    """
    if carrier is None:
        carrier = tensor_algebra(ta.algebra, tb.algebra)
    ha, hb = ta.hilbert_dim, tb.hilbert_dim
    ia, ib = np.eye(ha), np.eye(hb)
    rep0 = _tensor_rep(ta.rep, tb.rep)

    if ta.even and tb.even:
        dirac = np.kron(ta.dirac, ib) + np.kron(ta.grading, tb.dirac)
        grading = np.kron(ta.grading, tb.grading)
        out = SpectralTriple(carrier, rep0, dirac, grading)
    elif not ta.even and not tb.even:
        h0 = ha * hb
        d = carrier.dim
        rep = np.zeros((d, 2 * h0, 2 * h0), dtype=complex)
        rep[:, :h0, :h0] = rep0
        rep[:, h0:, h0:] = rep0
        dplus = np.kron(ta.dirac, ib) + 1j * np.kron(ia, tb.dirac)
        dminus = np.kron(ta.dirac, ib) - 1j * np.kron(ia, tb.dirac)
        dirac = np.zeros((2 * h0, 2 * h0), dtype=complex)
        dirac[:h0, h0:] = dplus
        dirac[h0:, :h0] = dminus
        grading = np.kron(np.diag([1.0, -1.0]), np.eye(h0)).astype(complex)
        out = SpectralTriple(carrier, rep, dirac, grading)
    elif not ta.even and tb.even:
        dirac = np.kron(ta.dirac, tb.grading) + np.kron(ia, tb.dirac)
        out = SpectralTriple(carrier, rep0, dirac, None)
    else:
        dirac = np.kron(ta.dirac, ib) + np.kron(ta.grading, tb.dirac)
        out = SpectralTriple(carrier, rep0, dirac, None)

    if validate:
        out.validate()
    return out


def gradient_dirac_triple(l_mats, algebra: ConcreteAlgebra | None = None) -> SpectralTriple:
    """Odd triple over M_n whose seminorm is the stacked-commutator norm
    || ( [L_1, a]; ...; [L_N, a] ) ||, the constraint norm dual to the
    trace-norm minimization of the matricial Wasserstein-1 distance.

    H = C^n (+) (C^n (x) C^N) with the Dirac [[0, V*], [V, 0]] for the
    column map V = sum_i L_i (x) |i>.  For N = 1 this has the same seminorm
    as the diagonal Dirac L_1 (x) e_11.
    """
    l_mats = [np.asarray(l, dtype=complex) for l in l_mats]
    n = l_mats[0].shape[0]
    nn = len(l_mats)
    if algebra is None:
        from .algebra import matrix_algebra
        algebra = matrix_algebra(n)
    h = n + n * nn
    v = np.zeros((n * nn, n), dtype=complex)
    for i, l in enumerate(l_mats):
        v[i * n:(i + 1) * n, :] = l
    dirac = np.zeros((h, h), dtype=complex)
    dirac[n:, :n] = v
    dirac[:n, n:] = v.conj().T
    rep = np.array([np.kron(np.eye(1 + nn), b) for b in algebra.basis])
    # reorder: our H is C^n (+) (C^N (x) C^n); kron(I_{N+1}, b) matches that
    return SpectralTriple(algebra, rep, dirac).validate()


def diagonal_matrix_dirac_triple(l_mats, algebra: ConcreteAlgebra | None = None) -> SpectralTriple:
    """Odd triple over M_n with the block-diagonal Dirac sum_i L_i (x) e_ii;
    its seminorm is max_i || [L_i, a] ||."""
    l_mats = [np.asarray(l, dtype=complex) for l in l_mats]
    n = l_mats[0].shape[0]
    nn = len(l_mats)
    if algebra is None:
        from .algebra import matrix_algebra
        algebra = matrix_algebra(n)
    dirac = np.zeros((n * nn, n * nn), dtype=complex)
    for i, l in enumerate(l_mats):
        dirac[i * n:(i + 1) * n, i * n:(i + 1) * n] = l
    rep = np.array([np.kron(np.eye(nn), b) for b in algebra.basis])
    return SpectralTriple(algebra, rep, dirac).validate()


@dataclass(frozen=True)
class DominationReport:
    samples: int
    violations: int
    max_violation: float


def seminorm_domination_check(ta: SpectralTriple, tb: SpectralTriple,
                              samples: int = 100,
                              rng: np.random.Generator | None = None,
                              slack: float = EPS_STRUCT) -> DominationReport:
    """Check (1 (x) L_B) <= L_{A x B} and (L_A (x) 1) <= L_{A x B} on random
    elements of the tensor algebra."""
    rng = rng or np.random.default_rng(0)
    carrier = tensor_algebra(ta.algebra, tb.algebra)
    product = kasparov_product(ta, tb, carrier=carrier)
    big = CommutatorSeminorm(product)
    left = left_tensor_seminorm(ta, tb.algebra, rep_b=tb.rep, carrier=carrier)
    right = right_tensor_seminorm(ta.algebra, tb, rep_a=ta.rep, carrier=carrier)
    violations = 0
    worst = 0.0
    for _ in range(samples):
        coords = rng.standard_normal(carrier.dim) + 1j * rng.standard_normal(carrier.dim)
        lprod = big.eval_coords(coords)
        tolerance = slack * max(1.0, lprod)
        for part in (left, right):
            gap = part.eval_coords(coords) - lprod
            worst = max(worst, gap)
            if gap > tolerance:
                violations += 1
    return DominationReport(samples, violations, worst)
