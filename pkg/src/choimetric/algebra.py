"""Finite-dimensional concrete C*-algebras given as matrix spans.

An algebra is an ordered basis of ambient N x N complex matrices whose span
is closed under products and adjoints, together with derived data: structure
constants, adjoint coordinates, and the coordinates of the two-sided unit.
Elements and linear functionals are coordinate vectors over that basis.
Everything is immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from . import linalg
from .errors import (
    AlgebraMismatch,
    FactorMismatch,
    LinearlyDependentBasis,
    NoUnit,
    NotATensorAlgebra,
    NotATrace,
    NotClosedUnderAdjoint,
    NotClosedUnderProduct,
    NotFaithful,
)
from .linalg import EPS_PSD, EPS_STRUCT


class ConcreteAlgebra:
    """A *-closed span of complex matrices with cached structure data.

    Attributes
    ----------
    basis : (d, N, N) array; the ordered basis.
    structure : (d, d, d) array; B_i B_j = sum_k structure[i, j, k] B_k.
    adjoint_coords : (d, d) array; row i holds the coordinates of B_i^*.
    unit_coords : (d,) array; coordinates of the two-sided identity.
    factors : tuple of atomic tensor factors when built by tensor_algebra.
    op_of : the underlying algebra when built by opposite_algebra.
    """

    def __init__(self, basis, structure, adjoint_coords, unit_coords,
                 name="", factors=(), op_of=None):
        self.basis = np.asarray(basis, dtype=complex)
        self.structure = np.asarray(structure, dtype=complex)
        self.adjoint_coords = np.asarray(adjoint_coords, dtype=complex)
        self.unit_coords = np.asarray(unit_coords, dtype=complex)
        self.name = name
        self.factors = tuple(factors)
        self.op_of = op_of
        d, n, _ = self.basis.shape
        self._flat = self.basis.reshape(d, n * n)
        self._pinv = np.linalg.pinv(self._flat.T)
        self._swap_cache = {}

    # -- basic shape -----------------------------------------------------

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[1]

    def __repr__(self):
        label = self.name or "algebra"
        return f"<{label}: dim {self.dim} in M_{self.ambient_dim}>"

    # -- coordinates <-> ambient matrices ---------------------------------

    def realize(self, coords: np.ndarray) -> np.ndarray:
        return np.tensordot(np.asarray(coords, dtype=complex), self.basis, axes=1)

    def coords_of(self, mat: np.ndarray) -> np.ndarray:
        return self._pinv @ np.asarray(mat, dtype=complex).ravel()

    def projection_residual(self, mat: np.ndarray) -> float:
        """Relative distance from mat to the span of the basis."""
        mat = np.asarray(mat, dtype=complex)
        coords = self.coords_of(mat)
        back = self.realize(coords)
        return linalg.frobenius(back - mat) / max(1.0, linalg.frobenius(mat))

    def element(self, coords) -> "AlgebraElement":
        coords = np.asarray(coords, dtype=complex)
        if coords.shape != (self.dim,):
            raise AlgebraMismatch(
                f"coordinate vector of length {coords.shape} for dim-{self.dim} algebra")
        return AlgebraElement(self, coords)

    def element_from_matrix(self, mat, tol=1e-8) -> "AlgebraElement":
        resid = self.projection_residual(mat)
        if resid > tol:
            raise AlgebraMismatch(f"matrix outside the span (residual {resid:.2e})")
        return self.element(self.coords_of(mat))

    def basis_element(self, i: int) -> "AlgebraElement":
        coords = np.zeros(self.dim, dtype=complex)
        coords[i] = 1.0
        return AlgebraElement(self, coords)

    def unit(self) -> "AlgebraElement":
        return AlgebraElement(self, self.unit_coords.copy())

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, np.zeros(self.dim, dtype=complex))

    # -- coordinate arithmetic ---------------------------------------------

    def multiply_coords(self, c1: np.ndarray, c2: np.ndarray) -> np.ndarray:
        return np.einsum("i,j,ijk->k", c1, c2, self.structure)

    def adjoint_of_coords(self, c: np.ndarray) -> np.ndarray:
        return self.adjoint_coords.T @ np.conj(c)

    def is_commutative(self, tol=EPS_STRUCT) -> bool:
        return float(np.abs(self.structure - self.structure.transpose(1, 0, 2)).max()) <= tol

    def same_as(self, other: "ConcreteAlgebra", tol=1e-10) -> bool:
        """Structural equality: identical ambient basis and unit."""
        if self is other:
            return True
        if self.basis.shape != other.basis.shape:
            return False
        return (np.abs(self.basis - other.basis).max() <= tol
                and np.abs(self.unit_coords - other.unit_coords).max() <= tol)

    def factor_dims(self) -> tuple[int, ...]:
        if not self.factors:
            raise NotATensorAlgebra(f"{self!r} records no tensor factor structure")
        return tuple(f.dim for f in self.factors)


@dataclass(frozen=True)
class AlgebraElement:
    algebra: ConcreteAlgebra
    coords: np.ndarray

    def ambient(self) -> np.ndarray:
        return self.algebra.realize(self.coords)

    def adjoint(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, self.algebra.adjoint_of_coords(self.coords))

    def is_selfadjoint(self, tol=EPS_STRUCT) -> bool:
        amb = self.ambient()
        return linalg.is_hermitian(amb, tol)

    def is_positive(self, tol=EPS_PSD) -> bool:
        """Positivity of the ambient realization (equivalently, positivity in
        the algebra, since the span is a C*-subalgebra)."""
        return linalg.is_psd(self.ambient(), tol)

    def norm(self) -> float:
        return linalg.operator_norm(self.ambient())

    def __add__(self, other):
        _require_same_algebra(self, other)
        return AlgebraElement(self.algebra, self.coords + other.coords)

    def __sub__(self, other):
        _require_same_algebra(self, other)
        return AlgebraElement(self.algebra, self.coords - other.coords)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            _require_same_algebra(self, other)
            return AlgebraElement(
                self.algebra, self.algebra.multiply_coords(self.coords, other.coords))
        return AlgebraElement(self.algebra, self.coords * complex(other))

    def __rmul__(self, scalar):
        return AlgebraElement(self.algebra, self.coords * complex(scalar))

    def __neg__(self):
        return AlgebraElement(self.algebra, -self.coords)


def _require_same_algebra(a, b):
    if a.algebra is not b.algebra and not a.algebra.same_as(b.algebra):
        raise AlgebraMismatch("elements of different algebras")


@dataclass(frozen=True)
class LinearFunctional:
    """A functional stored by its values on the basis elements."""

    algebra: ConcreteAlgebra
    values: np.ndarray

    def __call__(self, x) -> complex:
        if isinstance(x, AlgebraElement):
            if x.algebra is not self.algebra and not x.algebra.same_as(self.algebra):
                raise AlgebraMismatch("functional applied to element of another algebra")
            coords = x.coords
        else:
            coords = np.asarray(x, dtype=complex)
        return complex(self.values @ coords)

    def gns_gram(self) -> np.ndarray:
        """The matrix [phi(B_i^* B_j)]_{ij}; PSD exactly when phi is positive."""
        cached = getattr(self, "_gns_cache", None)
        if cached is not None:
            return cached
        alg = self.algebra
        prod_vals = np.einsum("mjr,r->mj", alg.structure, self.values)
        gram = alg.adjoint_coords @ prod_vals
        object.__setattr__(self, "_gns_cache", gram)
        return gram

    def is_hermitian(self, tol=EPS_STRUCT) -> bool:
        star_vals = self.algebra.adjoint_coords @ self.values
        scale = max(1.0, float(np.abs(self.values).max(initial=0.0)))
        return float(np.abs(star_vals - np.conj(self.values)).max()) <= tol * scale

    def is_positive(self, tol=EPS_PSD) -> bool:
        gram = self.gns_gram()
        scale = max(1.0, float(np.abs(gram).max(initial=0.0)))
        if linalg.frobenius(gram - linalg.dagger(gram)) > 1e3 * tol * scale:
            return False
        lam = np.linalg.eigvalsh(linalg.hermitian_part(gram))
        mag = max(float(np.abs(lam).max(initial=0.0)), 1.0)
        return float(lam[0]) >= -tol * mag

    def positivity_witness(self):
        """Most negative Gram eigenvalue and the coordinates of an element
        x (of the algebra) with phi(x^* x) equal to that eigenvalue."""
        gram = linalg.hermitian_part(self.gns_gram())
        lam, vec = np.linalg.eigh(gram)
        return float(lam[0]), vec[:, 0]

    def unit_value(self) -> complex:
        return complex(self.values @ self.algebra.unit_coords)

    def is_state(self, tol=EPS_STRUCT) -> bool:
        return self.is_positive() and abs(self.unit_value() - 1.0) <= tol

    def __add__(self, other):
        return LinearFunctional(self.algebra, self.values + other.values)

    def __sub__(self, other):
        return LinearFunctional(self.algebra, self.values - other.values)

    def __mul__(self, scalar):
        return LinearFunctional(self.algebra, self.values * complex(scalar))

    __rmul__ = __mul__

    def pullback(self, coord_map: np.ndarray, source: ConcreteAlgebra) -> "LinearFunctional":
        """phi o T where T has coordinate matrix coord_map (d_target x d_source)."""
        return LinearFunctional(source, coord_map.T @ self.values)


class TraceFunctional(LinearFunctional):
    """A positive tracial functional; construct via as_trace()."""

    def bilinear_gram(self) -> np.ndarray:
        """The matrix [tau(B_i B_j)]_{ij} (no adjoints)."""
        cached = getattr(self, "_bilinear_cache", None)
        if cached is None:
            cached = np.einsum("ijr,r->ij", self.algebra.structure, self.values)
            object.__setattr__(self, "_bilinear_cache", cached)
        return cached

    @property
    def faithful(self) -> bool:
        gram = linalg.hermitian_part(self.gns_gram())
        return linalg.is_positive_definite(gram, EPS_PSD)


def as_trace(phi: LinearFunctional, tol=EPS_STRUCT) -> TraceFunctional:
    """Validate traciality and positivity, returning a TraceFunctional."""
    alg = phi.algebra
    prods = np.einsum("ijr,r->ij", alg.structure, phi.values)
    scale = max(1.0, float(np.abs(prods).max(initial=0.0)))
    if float(np.abs(prods - prods.T).max()) > tol * scale:
        raise NotATrace("values do not vanish on commutators")
    tau = TraceFunctional(alg, np.asarray(phi.values, dtype=complex))
    if float(np.abs(phi.values).max(initial=0.0)) == 0.0:
        raise NotATrace("zero functional")
    if not tau.is_positive():
        raise NotATrace("GNS Gram matrix is not PSD")
    return tau


def require_faithful(tau: TraceFunctional):
    if not isinstance(tau, TraceFunctional):
        raise NotATrace("expected a TraceFunctional")
    if not tau.faithful:
        raise NotFaithful("trace has a singular GNS Gram matrix")


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def build_algebra(basis, name="", tol=EPS_STRUCT) -> ConcreteAlgebra:
    """Validate a matrix span and derive its structure data.

    Raises LinearlyDependentBasis, NotClosedUnderProduct,
    NotClosedUnderAdjoint or NoUnit when the span fails to be a unital
    *-closed algebra.
    """
    basis = np.asarray(basis, dtype=complex)
    if basis.ndim != 3 or basis.shape[1] != basis.shape[2]:
        raise ValueError("basis must be a list of square matrices of equal size")
    d, n, _ = basis.shape
    if d == 0:
        raise ValueError("empty basis: the zero algebra is rejected")

    flat = basis.reshape(d, n * n)
    svals = np.linalg.svd(flat, compute_uv=False)
    if svals[-1] <= tol * max(svals[0], 1.0):
        raise LinearlyDependentBasis(
            f"smallest singular value {svals[-1]:.2e} of the basis Gram system")
    pinv = np.linalg.pinv(flat.T)

    def project(mat, err, what):
        coords = pinv @ mat.ravel()
        resid = np.linalg.norm(flat.T @ coords - mat.ravel())
        if resid > tol * max(1.0, np.linalg.norm(mat)):
            raise err(f"{what} lies outside the span (residual {resid:.2e})")
        return coords

    structure = np.empty((d, d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            structure[i, j] = project(basis[i] @ basis[j],
                                      NotClosedUnderProduct, f"B_{i} B_{j}")

    adjoint_coords = np.empty((d, d), dtype=complex)
    for i in range(d):
        adjoint_coords[i] = project(basis[i].conj().T,
                                    NotClosedUnderAdjoint, f"B_{i}^*")

    unit_coords = _solve_unit(structure, tol)
    return ConcreteAlgebra(basis, structure, adjoint_coords, unit_coords, name=name)


def _solve_unit(structure, tol):
    d = structure.shape[0]
    # e with e . B_j = B_j and B_j . e = B_j for all j, solved jointly.
    left = structure.transpose(1, 2, 0).reshape(d * d, d)    # rows (j, r), cols k
    right = structure.transpose(0, 2, 1).reshape(d * d, d)
    target = np.eye(d, dtype=complex).reshape(d * d)          # delta_{jr}
    big = np.vstack([left, right])
    rhs = np.concatenate([target, target])
    e, *_ = np.linalg.lstsq(big, rhs, rcond=None)
    resid = np.linalg.norm(big @ e - rhs)
    if resid > tol * d:
        raise NoUnit(f"no two-sided identity in the span (residual {resid:.2e})")
    return e


def matrix_algebra(n: int, name=None) -> ConcreteAlgebra:
    """Full matrix algebra M_n with the standard matrix-unit basis, ordered
    row-major: e_11, e_12, ..., e_nn."""
    basis = np.zeros((n * n, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            basis[i * n + j, i, j] = 1.0
    alg = build_algebra(basis, name=name or f"M{n}")
    return alg


def diagonal_algebra(n: int, name=None) -> ConcreteAlgebra:
    """Commutative algebra of diagonal n x n matrices (functions on n points)."""
    basis = np.zeros((n, n, n), dtype=complex)
    for i in range(n):
        basis[i, i, i] = 1.0
    return build_algebra(basis, name=name or f"diag{n}")


def scalar_algebra() -> ConcreteAlgebra:
    """The one-dimensional algebra C, the identity object of the tensor."""
    return build_algebra(np.ones((1, 1, 1), dtype=complex), name="C")


def standard_matrix_trace(alg: ConcreteAlgebra, normalized=False) -> TraceFunctional:
    """Ambient matrix trace restricted to the algebra, optionally divided by
    the ambient dimension."""
    vals = np.trace(alg.basis, axis1=1, axis2=2)
    if normalized:
        vals = vals / alg.ambient_dim
    return as_trace(LinearFunctional(alg, vals))


# ---------------------------------------------------------------------------
# tensor products, opposites, swaps
# ---------------------------------------------------------------------------

def tensor_algebra(a: ConcreteAlgebra, b: ConcreteAlgebra, name=None) -> ConcreteAlgebra:
    """Kronecker realization of a (x) b with basis pairs in row-major order.

    Structure data is assembled exactly from the factors; at finite dimension
    the C*-norm on the algebraic tensor product is unique, so the Kronecker
    realization is the tensor product.
    """
    da, db = a.dim, b.dim
    basis = np.einsum("aij,bkl->abikjl", a.basis, b.basis).reshape(
        da * db, a.ambient_dim * b.ambient_dim, a.ambient_dim * b.ambient_dim)
    structure = np.einsum("ace,bdf->abcdef", a.structure, b.structure).reshape(
        da * db, da * db, da * db)
    adjoint = np.einsum("ac,bd->abcd", a.adjoint_coords, b.adjoint_coords).reshape(
        da * db, da * db)
    unit = np.outer(a.unit_coords, b.unit_coords).reshape(da * db)
    factors = (a.factors or (a,)) + (b.factors or (b,))
    label = name or f"({a.name})@({b.name})"
    return ConcreteAlgebra(basis, structure, adjoint, unit,
                           name=label, factors=factors)


def tensor_many(algebras, name=None) -> ConcreteAlgebra:
    out = reduce(tensor_algebra, algebras)
    if name:
        out.name = name
    return out


def opposite_algebra(a: ConcreteAlgebra) -> ConcreteAlgebra:
    """Opposite algebra realized by entrywise transposition of the basis.

    The coordinate map b -> b^op is the identity; products reverse through
    the structure constants.  Applying it twice returns the original object.
    """
    if a.op_of is not None:
        return a.op_of
    basis = a.basis.transpose(0, 2, 1)
    structure = a.structure.transpose(1, 0, 2)
    factors = tuple(opposite_algebra(f) for f in a.factors) if a.factors else ()
    out = ConcreteAlgebra(basis, structure, a.adjoint_coords.copy(),
                          a.unit_coords.copy(), name=f"{a.name}^op",
                          factors=factors, op_of=a)
    return out


def op_element(x: AlgebraElement) -> AlgebraElement:
    """The element x^op of the opposite algebra (identity on coordinates)."""
    return AlgebraElement(opposite_algebra(x.algebra), x.coords.copy())


def _swap_axes(k: int, i: int, j: int):
    axes = list(range(k))
    axes[i], axes[j] = axes[j], axes[i]
    return axes


def swap_algebra(a: ConcreteAlgebra, i: int, j: int) -> ConcreteAlgebra:
    """Target algebra of the flip of tensor factors i and j (0-based)."""
    key = ("swap", i, j)
    if key in a._swap_cache:
        return a._swap_cache[key]
    factors = list(a.factors)
    if not factors:
        raise NotATensorAlgebra("swap requires a tensor algebra")
    if not (0 <= i < len(factors) and 0 <= j < len(factors)):
        raise FactorMismatch(f"factor indices ({i}, {j}) out of range")
    factors[i], factors[j] = factors[j], factors[i]
    out = tensor_many(factors)
    a._swap_cache[key] = out
    return out


def swap_element(x: AlgebraElement, i: int, j: int) -> AlgebraElement:
    """Sigma_[ij] applied to an element of a tensor algebra."""
    a = x.algebra
    target = swap_algebra(a, i, j)
    dims = a.factor_dims()
    axes = _swap_axes(len(dims), i, j)
    coords = x.coords.reshape(dims).transpose(axes).reshape(-1)
    return AlgebraElement(target, coords)


def swap_functional(phi: LinearFunctional, i: int, j: int) -> LinearFunctional:
    """Pushforward of a functional under Sigma_[ij]; since the flip is an
    involution this also computes pullbacks (apply it to a functional living
    on the swapped algebra)."""
    a = phi.algebra
    target = swap_algebra(a, i, j)
    dims = a.factor_dims()
    axes = _swap_axes(len(dims), i, j)
    values = phi.values.reshape(dims).transpose(axes).reshape(-1)
    return LinearFunctional(target, values)


def swap_op_algebra(a: ConcreteAlgebra, i: int, j: int) -> ConcreteAlgebra:
    """Target of Sigma^op_[ij]: factor i must be plain and factor j an
    opposite algebra; they trade places and op-ness."""
    key = ("swap_op", i, j)
    if key in a._swap_cache:
        return a._swap_cache[key]
    factors = list(a.factors)
    if not factors:
        raise NotATensorAlgebra("swap requires a tensor algebra")
    fi, fj = factors[i], factors[j]
    if fi.op_of is not None or fj.op_of is None:
        raise FactorMismatch(
            "Sigma^op needs a plain algebra in position i and an opposite algebra in position j")
    factors[i] = fj.op_of
    factors[j] = opposite_algebra(fi)
    out = tensor_many(factors)
    a._swap_cache[key] = out
    return out


def swap_op_element(x: AlgebraElement, i: int, j: int) -> AlgebraElement:
    """Sigma^op_[ij](... a ... b^op ...) = ... b ... a^op ... on coordinates."""
    a = x.algebra
    target = swap_op_algebra(a, i, j)
    dims = a.factor_dims()
    axes = _swap_axes(len(dims), i, j)
    coords = x.coords.reshape(dims).transpose(axes).reshape(-1)
    return AlgebraElement(target, coords)


def swap_op_functional(phi: LinearFunctional, i: int, j: int) -> LinearFunctional:
    a = phi.algebra
    target = swap_op_algebra(a, i, j)
    dims = a.factor_dims()
    axes = _swap_axes(len(dims), i, j)
    values = phi.values.reshape(dims).transpose(axes).reshape(-1)
    return LinearFunctional(target, values)


# operation-style aliases
swap_factors = swap_element
swap_op_factors = swap_op_element


def tensor_functional(phi: LinearFunctional, psi: LinearFunctional,
                      target: ConcreteAlgebra | None = None) -> LinearFunctional:
    """(phi (x) psi) on the tensor algebra of the two carriers."""
    if target is None:
        target = tensor_algebra(phi.algebra, psi.algebra)
    values = np.outer(phi.values, psi.values).reshape(-1)
    return LinearFunctional(target, values)


def tensor_trace(tau: TraceFunctional, sigma: TraceFunctional,
                 target: ConcreteAlgebra | None = None) -> TraceFunctional:
    phi = tensor_functional(tau, sigma, target)
    return TraceFunctional(phi.algebra, phi.values)


# ---------------------------------------------------------------------------
# mu_tau and densities
# ---------------------------------------------------------------------------

def evaluate_mu_tau(b: ConcreteAlgebra, tau: TraceFunctional,
                    carrier: ConcreteAlgebra | None = None) -> LinearFunctional:
    """The multiplication functional mu_tau(b1 (x) b2^op) = tau(b1 b2) on
    B (x) B^op; positive for every trace tau."""
    if not isinstance(tau, TraceFunctional):
        raise NotATrace("mu_tau requires a validated trace")
    if tau.algebra is not b and not tau.algebra.same_as(b):
        raise AlgebraMismatch("trace lives on a different algebra")
    if carrier is None:
        carrier = tensor_algebra(b, opposite_algebra(b))
    values = tau.bilinear_gram().reshape(-1)
    return LinearFunctional(carrier, values)


def density_from_functional(phi: LinearFunctional, tau: TraceFunctional):
    """Solve phi(x) = tau(b x) for b; returns (b, in_D_tau).

    in_D_tau reports whether b has positive ambient realization and
    tau(b) = 1, i.e. whether phi is a tau-density state.
    """
    require_faithful(tau)
    alg = phi.algebra
    if tau.algebra is not alg and not tau.algebra.same_as(alg):
        raise AlgebraMismatch("functional and trace live on different algebras")
    gram = tau.bilinear_gram()            # gram[k, j] = tau(B_k B_j)
    coords = np.linalg.solve(gram.T, phi.values)
    b = AlgebraElement(alg, coords)
    trace_of_b = complex(tau.values @ coords)
    member = b.is_positive() and abs(trace_of_b - 1.0) <= 1e-8
    return b, member


def functional_from_element(x: AlgebraElement, tau: TraceFunctional) -> LinearFunctional:
    """The pairing functional y -> tau(x y)."""
    gram = tau.bilinear_gram()
    return LinearFunctional(x.algebra, x.coords @ gram)


def selfadjoint_basis(alg: ConcreteAlgebra,
                      subspace: np.ndarray | None = None) -> np.ndarray:
    """Real basis of the self-adjoint part, as rows of complex coordinates.

    With `subspace` (a d x k complex matrix of coordinate columns spanning a
    *-closed subspace) the basis parametrizes only self-adjoint elements of
    that subspace.
    """
    d = alg.dim
    if subspace is None:
        subspace = np.eye(d, dtype=complex)
    k = subspace.shape[1]
    # element c = subspace @ w, w in C^k ~ R^{2k}; require adjoint(c) = c.
    adj = alg.adjoint_coords.T      # coords(x^*) = adj @ conj(coords(x))
    # map w -> adjoint(Sw) - Sw as a real-linear map on (Re w, Im w)
    s_mat = subspace
    a_on_s = adj @ np.conj(s_mat)   # image of conj-part
    # c(w) = S (u + iv); c* = adj conj(S) (u - iv)
    # condition: adj conj(S) u - i adj conj(S) v - S u - i S v = 0
    top = np.hstack([a_on_s - s_mat, -1j * (a_on_s + s_mat)])
    big = linalg.real_from_complex_columns(top)
    null = linalg.null_space_real(big)     # columns (2k,)
    cols = []
    for c in null.T:
        w = c[:k] + 1j * c[k:]
        cols.append(s_mat @ w)
    if not cols:
        return np.zeros((0, d), dtype=complex)
    rows = np.asarray(cols)
    # orthonormalize over R (real combinations preserve self-adjointness)
    emb = np.hstack([rows.real, rows.imag]).T        # (2d, r)
    q, _ = np.linalg.qr(emb)
    return (q[:d, :] + 1j * q[d:, :]).T
