"""Linear and completely positive maps between concrete algebras.

A channel is stored as its action on coordinates.  Complete positivity is
decided through positivity of the associated functional on A (x) B^op; the
classical Choi matrix is available for full matrix-algebra sources and an
independent block-Gram oracle cross-checks the verdict.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .algebra import (
    AlgebraElement,
    ConcreteAlgebra,
    LinearFunctional,
    TraceFunctional,
    opposite_algebra,
    require_faithful,
    swap_op_functional,
    tensor_algebra,
)
from .errors import (
    AlgebraMismatch,
    NotMatrixUnitsBasis,
    NotTraceChannel,
    TraceMismatch,
)
from .linalg import EPS_PSD, EPS_STRUCT


@dataclass(frozen=True)
class ChannelMap:
    """A linear map between algebras given by its coordinate matrix.

    matrix has shape (target.dim, source.dim): coords(F(a)) = matrix @ coords(a).
    """

    source: ConcreteAlgebra
    target: ConcreteAlgebra
    matrix: np.ndarray
    name: str = ""

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.target.dim, self.source.dim):
            raise AlgebraMismatch(
                f"coordinate matrix {m.shape} incompatible with "
                f"{self.source.dim} -> {self.target.dim}")
        object.__setattr__(self, "matrix", m)

    def __call__(self, x: AlgebraElement) -> AlgebraElement:
        if x.algebra is not self.source and not x.algebra.same_as(self.source):
            raise AlgebraMismatch("element not in the channel's source algebra")
        return AlgebraElement(self.target, self.matrix @ x.coords)

    def apply_coords(self, coords: np.ndarray) -> np.ndarray:
        return self.matrix @ coords

    def __add__(self, other):
        _check_parallel(self, other)
        return ChannelMap(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other):
        _check_parallel(self, other)
        return ChannelMap(self.source, self.target, self.matrix - other.matrix)

    def __mul__(self, scalar):
        return ChannelMap(self.source, self.target, self.matrix * complex(scalar))

    __rmul__ = __mul__


def _check_parallel(f, g):
    if not (f.source.same_as(g.source) and f.target.same_as(g.target)):
        raise AlgebraMismatch("channels with different source or target")


def identity_channel(alg: ConcreteAlgebra) -> ChannelMap:
    return ChannelMap(alg, alg, np.eye(alg.dim, dtype=complex), name="id")


def zero_channel(src: ConcreteAlgebra, tgt: ConcreteAlgebra) -> ChannelMap:
    return ChannelMap(src, tgt, np.zeros((tgt.dim, src.dim), dtype=complex))


@dataclass(frozen=True)
class OmegaFunctional(LinearFunctional):
    """The functional a (x) b^op -> tau(F(a) b), tagged with its origin."""

    channel: ChannelMap = None
    trace: TraceFunctional = None


def _omega_value_matrix(f: ChannelMap, tau: TraceFunctional) -> np.ndarray:
    """Matrix W[i, j] = tau(F(A_i) B_j)."""
    tb = tau.bilinear_gram()
    return f.matrix.T @ tb


def omega_tau(f: ChannelMap, tau: TraceFunctional,
              carrier: ConcreteAlgebra | None = None) -> OmegaFunctional:
    """Choi-Jamiolkowski functional of a channel with respect to a trace on
    its target."""
    if not isinstance(tau, TraceFunctional):
        raise TraceMismatch("omega_tau requires a validated trace")
    if tau.algebra is not f.target and not tau.algebra.same_as(f.target):
        raise TraceMismatch("trace does not live on the channel target")
    if carrier is None:
        carrier = tensor_algebra(f.source, opposite_algebra(f.target))
    values = _omega_value_matrix(f, tau).reshape(-1)
    return OmegaFunctional(carrier, values, channel=f, trace=tau)


def channel_from_omega(values, source: ConcreteAlgebra, target: ConcreteAlgebra,
                       tau: TraceFunctional) -> ChannelMap:
    """Invert the embedding: recover F from the values tau(F(A_i) B_j)."""
    require_faithful(tau)
    w = np.asarray(values, dtype=complex).reshape(source.dim, target.dim)
    tb = tau.bilinear_gram()
    # F.matrix.T @ tb = w  =>  tb.T @ F.matrix = w.T
    mat = np.linalg.solve(tb.T, w.T)
    return ChannelMap(source, target, mat)


# ---------------------------------------------------------------------------
# classification predicates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CPVerdict:
    is_cp: bool
    min_eigenvalue: float
    witness: AlgebraElement | None
    functional: OmegaFunctional


def is_completely_positive(f: ChannelMap, tau: TraceFunctional,
                           tol: float = EPS_PSD,
                           carrier: ConcreteAlgebra | None = None) -> CPVerdict:
    """Complete positivity via positivity of the associated functional.

    Returns the verdict together with the most negative eigenvalue of the
    GNS Gram matrix and, on failure, a witness x with omega(x^* x) < 0.
    """
    require_faithful(tau)
    om = omega_tau(f, tau, carrier=carrier)
    eig, vec = om.positivity_witness()
    gram_scale = max(1.0, float(np.abs(om.gns_gram()).max(initial=0.0)))
    ok = eig >= -tol * gram_scale
    witness = None if ok else AlgebraElement(om.algebra, vec)
    return CPVerdict(ok, eig, witness, om)


def cp_oracle_npositivity(f: ChannelMap, tol: float = EPS_PSD) -> bool:
    """Independent complete-positivity oracle.

    Tests positivity of the block matrix [F(b_i^* b_j)]_{ij} realized
    ambiently; arbitrary k-tuples reduce to the basis tuple, so at finite
    dimension this single PSD test decides complete positivity.  It never
    consults a trace or the associated functional.
    """
    return _block_gram_min_eig(f) >= -tol * max(1.0, _block_gram_scale(f))


def _block_gram(f: ChannelMap) -> np.ndarray:
    src, tgt = f.source, f.target
    d = src.dim
    prod = np.einsum("im,mjk->ijk", src.adjoint_coords, src.structure)
    fp = np.einsum("ijk,bk->ijb", prod, f.matrix)
    amb = np.einsum("ijb,bxy->ixjy", fp, tgt.basis)
    n = tgt.ambient_dim
    return amb.reshape(d * n, d * n)


def _block_gram_min_eig(f: ChannelMap) -> float:
    g = _block_gram(f)
    return float(np.linalg.eigvalsh(linalg.hermitian_part(g))[0])


def _block_gram_scale(f: ChannelMap) -> float:
    return float(np.abs(_block_gram(f)).max(initial=0.0))


def is_k_positive_sampled(f: ChannelMap, k: int, trials: int = 20,
                          rng: np.random.Generator | None = None,
                          tol: float = EPS_PSD) -> bool:
    """Necessary condition for k-positivity on random k-tuples."""
    rng = rng or np.random.default_rng(0)
    src, tgt = f.source, f.target
    n = tgt.ambient_dim
    for _ in range(trials):
        tuples = rng.standard_normal((k, src.dim)) + 1j * rng.standard_normal((k, src.dim))
        block = np.empty((k * n, k * n), dtype=complex)
        for i in range(k):
            ai_star = src.adjoint_of_coords(tuples[i])
            for j in range(k):
                prod = src.multiply_coords(ai_star, tuples[j])
                block[i * n:(i + 1) * n, j * n:(j + 1) * n] = tgt.realize(f.matrix @ prod)
        if not linalg.is_psd(block, tol):
            return False
    return True


def trace_of_unit_image(f: ChannelMap, tau: TraceFunctional) -> complex:
    return complex(tau.values @ (f.matrix @ f.source.unit_coords))


def is_trace_channel(f: ChannelMap, tau: TraceFunctional,
                     tol: float = EPS_STRUCT) -> bool:
    """CP and tau(F(1)) = 1."""
    if not is_completely_positive(f, tau).is_cp:
        return False
    return abs(trace_of_unit_image(f, tau) - 1.0) <= tol


def check_trace_channel(f: ChannelMap, tau: TraceFunctional, label="channel"):
    """Raise NotTraceChannel naming the failed predicate."""
    failures = []
    if not is_completely_positive(f, tau).is_cp:
        failures.append("not completely positive")
    normal = trace_of_unit_image(f, tau)
    if abs(normal - 1.0) > EPS_STRUCT:
        failures.append(f"tau(F(1)) = {normal:.6g} != 1")
    if failures:
        raise NotTraceChannel(f"{label}: " + "; ".join(failures))


def is_unital(f: ChannelMap, tol: float = EPS_STRUCT) -> bool:
    image = f.matrix @ f.source.unit_coords
    return float(np.abs(image - f.target.unit_coords).max()) <= tol


def is_trace_preserving(f: ChannelMap, tau_src: TraceFunctional,
                        tau_tgt: TraceFunctional, tol: float = EPS_STRUCT) -> bool:
    lhs = f.matrix.T @ tau_tgt.values
    return float(np.abs(lhs - tau_src.values).max()) <= tol


# ---------------------------------------------------------------------------
# composition, tensoring, amplification, adjoints
# ---------------------------------------------------------------------------

def compose(g: ChannelMap, f: ChannelMap) -> ChannelMap:
    """g o f."""
    if not f.target.same_as(g.source):
        raise AlgebraMismatch("compose: target of F is not the source of G")
    return ChannelMap(f.source, g.target, g.matrix @ f.matrix)


def tensor_channel(f: ChannelMap, g: ChannelMap,
                   source: ConcreteAlgebra | None = None,
                   target: ConcreteAlgebra | None = None) -> ChannelMap:
    if source is None:
        source = tensor_algebra(f.source, g.source)
    if target is None:
        target = tensor_algebra(f.target, g.target)
    return ChannelMap(source, target, np.kron(f.matrix, g.matrix))


def amplify(n: int, f: ChannelMap, **kw) -> ChannelMap:
    """id_n (x) F on M_n (x) A; amplify(1, F) is F itself."""
    if n < 1:
        raise ValueError("amplification order must be >= 1")
    if n == 1:
        return f
    from .algebra import matrix_algebra
    mn = matrix_algebra(n)
    return tensor_channel(identity_channel(mn), f, **kw)


def trace_adjoint(f: ChannelMap, tau_src: TraceFunctional,
                  tau_tgt: TraceFunctional) -> ChannelMap:
    """The map F# with tau_tgt(F(a) b) = tau_src(a F#(b))."""
    require_faithful(tau_src)
    require_faithful(tau_tgt)
    if tau_src.algebra is not f.source and not tau_src.algebra.same_as(f.source):
        raise TraceMismatch("source trace lives elsewhere")
    if tau_tgt.algebra is not f.target and not tau_tgt.algebra.same_as(f.target):
        raise TraceMismatch("target trace lives elsewhere")
    ta = tau_src.bilinear_gram()
    w = _omega_value_matrix(f, tau_tgt)          # w[i, j] = tau_tgt(F(A_i) B_j)
    sharp = np.linalg.solve(ta, w)               # (d_A, d_B)
    return ChannelMap(f.target, f.source, sharp, name=f"{f.name}#" if f.name else "")


def omega_of_adjoint(f: ChannelMap, tau_src: TraceFunctional,
                     tau_tgt: TraceFunctional) -> LinearFunctional:
    """omega_{tau_A}(F#) computed as omega_{tau_B}(F) o Sigma^op, without
    constructing F# (used to cross-check trace_adjoint)."""
    om = omega_tau(f, tau_tgt)
    return swap_op_functional(om, 0, 1)


# ---------------------------------------------------------------------------
# Choi matrices
# ---------------------------------------------------------------------------

def _check_matrix_units(alg: ConcreteAlgebra):
    n2 = alg.dim
    n = int(round(np.sqrt(n2)))
    if n * n != n2 or alg.ambient_dim != n:
        raise NotMatrixUnitsBasis("source is not a full matrix algebra")
    units = np.zeros_like(alg.basis)
    for i in range(n):
        for j in range(n):
            units[i * n + j, i, j] = 1.0
    if float(np.abs(alg.basis - units).max()) > 1e-12:
        raise NotMatrixUnitsBasis("source basis is not the standard matrix units")
    return n


def choi_matrix(f: ChannelMap) -> np.ndarray:
    """C_F = sum_ij e_ij (x) F(e_ij), for matrix-unit sources."""
    n = _check_matrix_units(f.source)
    m = f.target.ambient_dim
    out = np.zeros((n * m, n * m), dtype=complex)
    for i in range(n):
        for j in range(n):
            img = f.target.realize(f.matrix[:, i * n + j])
            out[i * m:(i + 1) * m, j * m:(j + 1) * m] = img
    return out


def kms_orthonormal_basis(alg: ConcreteAlgebra, tau: TraceFunctional) -> np.ndarray:
    """Rows are coordinates of a basis orthonormal for <x, y> = tau(x^* y)."""
    require_faithful(tau)
    gram = linalg.hermitian_part(tau.gns_gram())
    chol = np.linalg.cholesky(gram)
    return np.conj(np.linalg.inv(chol))


def kms_choi_element(f: ChannelMap, tau: TraceFunctional,
                     carrier: ConcreteAlgebra | None = None) -> AlgebraElement:
    """The element sum_i F(b_i) (x) (b_i^*)^op of A (x) A^op for a
    KMS-orthonormal basis {b_i}; positive exactly when F is CP."""
    if not f.source.same_as(f.target):
        raise AlgebraMismatch("the KMS Choi element needs an endomorphism")
    alg = f.source
    w = kms_orthonormal_basis(alg, tau)
    if carrier is None:
        carrier = tensor_algebra(alg, opposite_algebra(alg))
    coords = np.zeros((alg.dim, alg.dim), dtype=complex)
    for r in range(alg.dim):
        u = f.matrix @ w[r]
        v = alg.adjoint_of_coords(w[r])
        coords += np.outer(u, v)
    return AlgebraElement(carrier, coords.reshape(-1))


# ---------------------------------------------------------------------------
# state pullback
# ---------------------------------------------------------------------------

def pullback_state(f: ChannelMap, psi: LinearFunctional) -> LinearFunctional:
    """F^* psi = psi o F on the source algebra."""
    if psi.algebra is not f.target and not psi.algebra.same_as(f.target):
        raise AlgebraMismatch("functional not on the channel target")
    return LinearFunctional(f.source, f.matrix.T @ psi.values)
