"""Finite groups, 2-cocycles, length functions, and twisted group algebras.

Groups are multiplication tables over element indices 0..n-1.  The twisted
group algebra is realized concretely by the twisted left regular
representation; the right regular representation is carried alongside for
spectral triples over the opposite algebra.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass

import numpy as np

from .algebra import (
    ConcreteAlgebra,
    LinearFunctional,
    TraceFunctional,
    as_trace,
    build_algebra,
)
from .channels import ChannelMap
from .errors import (
    InvalidCocycle,
    InvalidGroup,
    InvalidLength,
    NotPositiveDefinite,
)
from .linalg import EPS_PSD, EPS_STRUCT, hermitian_part


@dataclass(frozen=True)
class FiniteGroup:
    order: int
    mult: np.ndarray                 # (n, n) index table
    identity: int
    name: str = ""
    generators: tuple = ()           # canonical generating set, may be empty

    def __post_init__(self):
        object.__setattr__(self, "mult", np.asarray(self.mult, dtype=int))
        _validate_group(self)
        inv = np.empty(self.order, dtype=int)
        for a in range(self.order):
            hits = np.nonzero(self.mult[a] == self.identity)[0]
            if len(hits) != 1:
                raise InvalidGroup(f"element {a} has {len(hits)} inverses")
            inv[a] = hits[0]
        object.__setattr__(self, "inverse", inv)

    def mul(self, a: int, b: int) -> int:
        return int(self.mult[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mult, self.mult.T))

    def same_as(self, other: "FiniteGroup") -> bool:
        return (self is other
                or (self.order == other.order
                    and self.identity == other.identity
                    and np.array_equal(self.mult, other.mult)))

    def elements(self):
        return range(self.order)


def _validate_group(g: FiniteGroup):
    n = g.order
    t = g.mult
    if t.shape != (n, n):
        raise InvalidGroup("multiplication table shape mismatch")
    if t.min() < 0 or t.max() >= n:
        raise InvalidGroup("table entries out of range")
    e = g.identity
    if not (np.array_equal(t[e], np.arange(n)) and np.array_equal(t[:, e], np.arange(n))):
        raise InvalidGroup("identity law fails")
    # associativity over the full table
    left = t[t, :]                  # left[a, b, c] = (ab)c
    right = t[:, t]                 # right[a, b, c] = a(bc)
    if not np.array_equal(left, right):
        raise InvalidGroup("associativity fails")
    for a in range(n):
        if len(set(t[a])) != n:
            raise InvalidGroup(f"row {a} is not a permutation")


# -- constructors ------------------------------------------------------------

def cyclic_group(n: int) -> FiniteGroup:
    idx = np.arange(n)
    table = (idx[:, None] + idx[None, :]) % n
    gens = (1,) if n > 1 else ()
    return FiniteGroup(n, table, 0, name=f"Z{n}", generators=gens)


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    n, m = g.order, h.order
    table = np.empty((n * m, n * m), dtype=int)
    for a1, a2 in itertools.product(range(n), range(m)):
        for b1, b2 in itertools.product(range(n), range(m)):
            table[a1 * m + a2, b1 * m + b2] = g.mul(a1, b1) * m + h.mul(a2, b2)
    gens = tuple(a * m + h.identity for a in g.generators) + \
        tuple(g.identity * m + b for b in h.generators)
    return FiniteGroup(n * m, table, g.identity * m + h.identity,
                       name=f"{g.name}x{h.name}", generators=gens)


def dihedral_group(n: int) -> FiniteGroup:
    """Dihedral group of order 2n; elements r^k (0..n-1) then s r^k (n..2n-1)."""
    order = 2 * n

    def mul(a, b):
        # elements written s^f r^k with s r^k s = r^-k
        fa, ka = divmod(a, n)
        fb, kb = divmod(b, n)
        if fb == 0:
            return fa * n + (ka + kb) % n
        return (1 - fa) * n + (kb - ka) % n

    table = np.array([[mul(a, b) for b in range(order)] for a in range(order)])
    return FiniteGroup(order, table, 0, name=f"D{n}", generators=(1, n))


def symmetric_group_3() -> FiniteGroup:
    perms = list(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}

    def compose(p, q):
        return tuple(p[q[i]] for i in range(3))

    table = np.array([[index[compose(p, q)] for q in perms] for p in perms])
    e = index[(0, 1, 2)]
    transpositions = tuple(index[p] for p in perms
                           if sum(p[i] != i for i in range(3)) == 2)
    return FiniteGroup(6, table, e, name="S3", generators=transpositions)


def group_from_table(table, identity: int, name="G",
                     generators=()) -> FiniteGroup:
    return FiniteGroup(len(table), np.asarray(table, int), identity,
                       name=name, generators=tuple(generators))


# -- structure ----------------------------------------------------------------

def commutator_subgroup(g: FiniteGroup) -> set[int]:
    gens = {g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b)))
            for a in g.elements() for b in g.elements()}
    closure = {g.identity} | gens
    frontier = list(closure)
    while frontier:
        a = frontier.pop()
        for b in list(closure):
            for c in (g.mul(a, b), g.mul(b, a)):
                if c not in closure:
                    closure.add(c)
                    frontier.append(c)
    return closure


def one_dim_characters(g: FiniteGroup) -> np.ndarray:
    """All multiplicative characters G -> T, as rows of a (k, |G|) array.

    Computed through the abelianization: characters of the quotient by the
    commutator subgroup, found by joint diagonalization of its regular
    representation, lifted back to G.
    """
    comm = sorted(commutator_subgroup(g))
    # left cosets of the commutator subgroup
    coset_of = {}
    reps = []
    for a in g.elements():
        if a in coset_of:
            continue
        reps.append(a)
        for k in comm:
            coset_of[g.mul(a, k)] = len(reps) - 1
    q = len(reps)
    qtable = np.array([[coset_of[g.mul(reps[i], reps[j])] for j in range(q)]
                       for i in range(q)])
    quotient = FiniteGroup(q, qtable, coset_of[g.identity], name="ab")
    # regular representation of the abelian quotient commutes; a generic
    # combination has simple joint eigenvectors
    rng = np.random.default_rng(12345)
    perms = np.zeros((q, q, q))
    for a in range(q):
        for x in range(q):
            perms[a, quotient.mul(a, x), x] = 1.0
    generic = np.tensordot(rng.standard_normal(q), perms, axes=1)
    _, vecs = np.linalg.eig(generic)
    chars = []
    for c in range(q):
        v = vecs[:, c]
        pivot = int(np.argmax(np.abs(v)))
        vals = np.empty(q, dtype=complex)
        good = True
        for a in range(q):
            w = perms[a] @ v
            lam = w[pivot] / v[pivot]
            if np.abs(w - lam * v).max() > 1e-8:
                good = False
                break
            vals[a] = lam
        if good:
            chars.append(vals / vals[quotient.identity])
    # dedupe and lift
    unique = []
    for vals in chars:
        if not any(np.abs(vals - u).max() < 1e-8 for u in unique):
            unique.append(vals)
    if len(unique) != q:
        raise InvalidGroup("character extraction failed on the abelianization")
    lifted = np.array([[u[coset_of[a]] for a in g.elements()] for u in unique])
    # exact multiplicativity check
    for chi in lifted:
        for a in g.elements():
            for b in g.elements():
                if abs(chi[a] * chi[b] - chi[g.mul(a, b)]) > 1e-10:
                    raise InvalidGroup("non-multiplicative character")
    return lifted


# -- length functions ----------------------------------------------------------

@dataclass(frozen=True)
class LengthFunction:
    group: FiniteGroup
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        g = self.group
        if vals.shape != (g.order,):
            raise InvalidLength("length vector size mismatch")
        if vals.min() < 0:
            raise InvalidLength("negative length")
        if abs(vals[g.identity]) > EPS_STRUCT:
            raise InvalidLength("l(e) != 0")
        for a in g.elements():
            if abs(vals[a] - vals[g.inv(a)]) > EPS_STRUCT:
                raise InvalidLength(f"l({a}) != l({a}^-1)")
        prod = g.mult
        bound = vals[:, None] + vals[None, :]
        if (vals[prod] - bound).max() > EPS_STRUCT:
            a, b = np.unravel_index(int(np.argmax(vals[prod] - bound)), prod.shape)
            raise InvalidLength(
                f"subadditivity fails: l({a}{b}) = {vals[prod[a, b]]} > "
                f"{vals[a]} + {vals[b]}")


def word_length(g: FiniteGroup, generators=None, weights=None) -> LengthFunction:
    """Weighted word length by Dijkstra from the identity over a symmetric
    generating set."""
    gens = list(generators if generators is not None else g.generators)
    if not gens:
        gens = [a for a in g.elements() if a != g.identity]
    gens = sorted({*gens, *(g.inv(a) for a in gens)})
    if weights is None:
        wmap = {a: 1.0 for a in gens}
    else:
        wmap = dict(zip(gens, weights))
        for a in list(wmap):
            wmap[g.inv(a)] = min(wmap.get(g.inv(a), wmap[a]), wmap[a])
    dist = np.full(g.order, np.inf)
    dist[g.identity] = 0.0
    heap = [(0.0, g.identity)]
    while heap:
        d, x = heapq.heappop(heap)
        if d > dist[x]:
            continue
        for a in gens:
            y = g.mul(a, x)
            nd = d + wmap[a]
            if nd < dist[y] - 1e-15:
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    if np.isinf(dist).any():
        raise InvalidLength("the given set does not generate the group")
    return LengthFunction(g, dist)


# -- cocycles -------------------------------------------------------------------

@dataclass(frozen=True)
class Cocycle:
    group: FiniteGroup
    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=complex)
        object.__setattr__(self, "table", t)
        g = self.group
        n = g.order
        if t.shape != (n, n):
            raise InvalidCocycle("cocycle table shape mismatch")
        if np.abs(np.abs(t) - 1.0).max() > EPS_STRUCT:
            raise InvalidCocycle("cocycle values must have unit modulus")
        e = g.identity
        if np.abs(t[e, :] - 1.0).max() > EPS_STRUCT or np.abs(t[:, e] - 1.0).max() > EPS_STRUCT:
            raise InvalidCocycle("cocycle is not normalized")
        prod = g.mult
        lhs = t[:, :, None] * t[prod, :]                 # sigma(g,h) sigma(gh,k)
        rhs = t[:, prod] * t[None, :, :]                 # sigma(g,hk) sigma(h,k)
        if np.abs(lhs - rhs).max() > 1e-10:
            raise InvalidCocycle("cocycle identity fails")

    def __call__(self, a: int, b: int) -> complex:
        return complex(self.table[a, b])


def trivial_cocycle(g: FiniteGroup) -> Cocycle:
    return Cocycle(g, np.ones((g.order, g.order), dtype=complex))


def klein_twist_cocycle(g: FiniteGroup) -> Cocycle:
    """The bilinear twist sigma((a1,a2),(b1,b2)) = (-1)^(a2 b1) on Z2 x Z2,
    using the direct-product element coding (a1, a2) -> 2 a1 + a2."""
    if g.order != 4:
        raise InvalidCocycle("the Klein twist needs a group of order 4")
    table = np.ones((4, 4), dtype=complex)
    for a in range(4):
        for b in range(4):
            a2, b1 = a % 2, b // 2
            table[a, b] = (-1.0) ** (a2 * b1)
    return Cocycle(g, table)


# -- the twisted algebra ---------------------------------------------------------

@dataclass
class GroupAlgebra:
    """Twisted group algebra with its left and right regular representations."""

    group: FiniteGroup
    cocycle: Cocycle
    algebra: ConcreteAlgebra
    right_rep: np.ndarray            # (n, n, n); rho_g matrices

    @property
    def left_rep(self) -> np.ndarray:
        return self.algebra.basis


def twisted_group_algebra(g: FiniteGroup, sigma: Cocycle | None = None) -> GroupAlgebra:
    """Span of the twisted left translations lambda^sigma_g on l2(G).

    (lambda_g)[x, y] = sigma(g, y) [x = g y];  (rho_g)[x, y] = sigma(y, g) [x = y g].
    The product law lambda_g lambda_h = sigma(g, h) lambda_{gh} holds exactly.
    """
    if sigma is None:
        sigma = trivial_cocycle(g)
    if sigma.group is not g:
        raise InvalidCocycle("cocycle defined over another group")
    n = g.order
    left = np.zeros((n, n, n), dtype=complex)
    right = np.zeros((n, n, n), dtype=complex)
    for a in range(n):
        for y in range(n):
            left[a, g.mul(a, y), y] = sigma(a, y)
            right[a, g.mul(y, a), y] = sigma(y, a)
    tag = "" if np.abs(sigma.table - 1.0).max() < 1e-14 else ",sigma"
    alg = build_algebra(left, name=f"C*({g.name}{tag})")
    return GroupAlgebra(g, sigma, alg, right)


def canonical_trace(ga: GroupAlgebra) -> TraceFunctional:
    """tau_sigma(lambda(f)) = f(e): 1 on lambda_e, 0 elsewhere; faithful."""
    vals = np.zeros(ga.group.order, dtype=complex)
    vals[ga.group.identity] = 1.0
    return as_trace(LinearFunctional(ga.algebra, vals))


# -- positive definite functions and multipliers ----------------------------------

@dataclass(frozen=True)
class PositiveDefiniteFunction:
    group: FiniteGroup
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "values", vals)
        mat = self.test_matrix()
        lam = np.linalg.eigvalsh(hermitian_part(mat))
        scale = max(1.0, float(np.abs(lam).max(initial=0.0)))
        herm_dev = float(np.abs(mat - mat.conj().T).max())
        if herm_dev > 1e-8 * scale or lam[0] < -EPS_PSD * scale:
            raise NotPositiveDefinite(
                f"positivity test matrix has eigenvalue {lam[0]:.3e}",
                witness_eigenvalue=float(lam[0]))

    def test_matrix(self) -> np.ndarray:
        g = self.group
        n = g.order
        mat = np.empty((n, n), dtype=complex)
        for i in range(n):
            for j in range(n):
                mat[i, j] = self.values[g.mul(g.inv(j), i)]
        return mat

    def is_normalized(self, tol=EPS_STRUCT) -> bool:
        return abs(self.values[self.group.identity] - 1.0) <= tol

    def circ(self) -> "PositiveDefiniteFunction":
        """phi°(g) = phi(g^-1); positive definite together with phi."""
        vals = self.values[self.group.inverse]
        return PositiveDefiniteFunction(self.group, vals)


def multiplier_channel(phi: PositiveDefiniteFunction, ga: GroupAlgebra) -> ChannelMap:
    """M_phi(lambda_g) = phi(g) lambda_g; completely positive, unital iff
    phi(e) = 1."""
    if not phi.group.same_as(ga.group):
        raise InvalidGroup("positive definite function on another group")
    return ChannelMap(ga.algebra, ga.algebra, np.diag(phi.values),
                      name="M_phi")


@dataclass(frozen=True)
class ContractionReport:
    samples: int
    violations: int
    max_ratio: float
    max_excess: float


def multiplier_contraction_check(phi: PositiveDefiniteFunction, triple,
                                 samples: int = 200,
                                 rng: np.random.Generator | None = None,
                                 slack: float = EPS_STRUCT) -> ContractionReport:
    """Check L(M_phi(x)) <= L(x) on random elements for a normalized phi."""
    if not phi.is_normalized():
        raise NotPositiveDefinite("contraction check needs phi(e) = 1")
    rng = rng or np.random.default_rng(0)
    alg = triple.algebra
    from .geometry import CommutatorSeminorm
    lip = CommutatorSeminorm(triple)
    mult = np.diag(phi.values)
    violations = 0
    max_ratio = 0.0
    max_excess = -np.inf
    for _ in range(samples):
        coords = rng.standard_normal(alg.dim) + 1j * rng.standard_normal(alg.dim)
        lx = lip.eval_coords(coords)
        lmx = lip.eval_coords(mult @ coords)
        excess = lmx - lx
        max_excess = max(max_excess, excess)
        if lx > 1e-12:
            max_ratio = max(max_ratio, lmx / lx)
        if excess > slack * max(1.0, lx):
            violations += 1
    return ContractionReport(samples, violations, max_ratio, max_excess)
