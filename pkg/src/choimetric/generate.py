"""Seeded random instance generation for tests and experiment suites.

Everything is driven by an explicit numpy Generator so that experiment
records are reproducible from (config, seed) alone.
"""

from __future__ import annotations

import numpy as np

from .algebra import (
    AlgebraElement,
    ConcreteAlgebra,
    LinearFunctional,
    TraceFunctional,
    opposite_algebra,
    tensor_algebra,
)
from .channels import ChannelMap, channel_from_omega, trace_of_unit_image
from .groups import FiniteGroup, PositiveDefiniteFunction, word_length


def child_rngs(seed: int, count: int) -> list[np.random.Generator]:
    seq = np.random.SeedSequence(seed)
    return [np.random.default_rng(s) for s in seq.spawn(count)]


def random_complex(rng, *shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_hermitian(rng, n: int) -> np.ndarray:
    m = random_complex(rng, n, n)
    return 0.5 * (m + m.conj().T)


def random_psd(rng, n: int, rank: int | None = None) -> np.ndarray:
    k = rank or n
    c = random_complex(rng, n, k)
    return c @ c.conj().T


def random_density(rng, n: int, rank: int | None = None) -> np.ndarray:
    p = random_psd(rng, n, rank)
    return p / np.trace(p).real


def random_unitary(rng, n: int) -> np.ndarray:
    q, r = np.linalg.qr(random_complex(rng, n, n))
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_element(rng, alg: ConcreteAlgebra) -> AlgebraElement:
    return alg.element(random_complex(rng, alg.dim))


def random_selfadjoint_element(rng, alg: ConcreteAlgebra) -> AlgebraElement:
    x = random_element(rng, alg)
    return 0.5 * (x + x.adjoint())


def random_positive_functional(rng, alg: ConcreteAlgebra) -> LinearFunctional:
    """phi(x) = tr(R x) with a random ambient PSD weight R; always positive."""
    r = random_psd(rng, alg.ambient_dim)
    vals = np.einsum("xy,byx->b", r, alg.basis)
    return LinearFunctional(alg, vals)


def random_state(rng, alg: ConcreteAlgebra) -> LinearFunctional:
    phi = random_positive_functional(rng, alg)
    mass = phi.unit_value()
    return LinearFunctional(alg, phi.values / mass)


def random_linear_map(rng, src: ConcreteAlgebra, tgt: ConcreteAlgebra) -> ChannelMap:
    return ChannelMap(src, tgt, random_complex(rng, tgt.dim, src.dim))


def random_cp_channel(rng, src: ConcreteAlgebra, tgt: ConcreteAlgebra,
                      tau: TraceFunctional,
                      carrier: ConcreteAlgebra | None = None,
                      normalize: str | None = None) -> ChannelMap:
    """Random completely positive map obtained by inverting the functional
    embedding on a random positive functional of A (x) B^op."""
    if carrier is None:
        carrier = tensor_algebra(src, opposite_algebra(tgt))
    phi = random_positive_functional(rng, carrier)
    f = channel_from_omega(phi.values, src, tgt, tau)
    if normalize == "trace_channel":
        mass = trace_of_unit_image(f, tau)
        f = ChannelMap(src, tgt, f.matrix / mass)
    return f


def random_trace_channel(rng, src, tgt, tau, carrier=None) -> ChannelMap:
    return random_cp_channel(rng, src, tgt, tau, carrier, normalize="trace_channel")


def random_kraus_channel(rng, src: ConcreteAlgebra, tgt: ConcreteAlgebra,
                         kraus_rank: int = 2) -> ChannelMap:
    """F(a) = sum_i V_i a V_i^* between concretely realized algebras (the
    images must land back in the target span, so this targets full matrix
    algebras)."""
    n, m = src.ambient_dim, tgt.ambient_dim
    vs = [random_complex(rng, m, n) for _ in range(kraus_rank)]
    cols = []
    for b in range(src.dim):
        amb = src.basis[b]
        img = sum(v @ amb @ v.conj().T for v in vs)
        cols.append(tgt.coords_of(img))
    return ChannelMap(src, tgt, np.array(cols).T)


def random_pdf(rng, group: FiniteGroup, terms: int = 3,
               normalized: bool = True) -> PositiveDefiniteFunction:
    """phi(g) = sum_j w_j <xi_j, lambda_g xi_j> over the untwisted regular
    representation; positive definite by construction."""
    n = group.order
    vals = np.zeros(n, dtype=complex)
    weights = rng.random(terms) + 0.1
    if normalized:
        weights = weights / weights.sum()
    for w in weights:
        xi = random_complex(rng, n)
        xi = xi / np.linalg.norm(xi)
        for g in group.elements():
            shifted = np.zeros(n, dtype=complex)
            for x in group.elements():
                shifted[group.mul(g, x)] = xi[x]
            vals[g] += w * np.vdot(xi, shifted)
    if normalized:
        vals[group.identity] = 1.0
    return PositiveDefiniteFunction(group, vals)


def random_length(rng, group: FiniteGroup):
    """Weighted word length over the group's canonical generators."""
    gens = list(group.generators) or [a for a in group.elements()
                                      if a != group.identity]
    weights = 0.5 + rng.random(len(gens)) * 1.5
    return word_length(group, gens, weights)
