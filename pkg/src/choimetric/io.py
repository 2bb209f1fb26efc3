"""JSON file formats for algebras, functionals, channels, triples, groups,
and positive definite functions.

Complex numbers are two-element arrays [re, im]; matrices are nested lists
of rows.  Loading always re-validates: a corrupt file fails before any
computation starts.
"""

from __future__ import annotations

import json

import numpy as np

from .algebra import (
    ConcreteAlgebra,
    LinearFunctional,
    TraceFunctional,
    as_trace,
    build_algebra,
)
from .channels import ChannelMap
from .errors import ChoimetricError
from .geometry import SpectralTriple
from .groups import (
    Cocycle,
    FiniteGroup,
    LengthFunction,
    PositiveDefiniteFunction,
    group_from_table,
)


def complex_to_json(z: complex):
    return [float(np.real(z)), float(np.imag(z))]


def matrix_to_json(m: np.ndarray):
    return [[complex_to_json(z) for z in row] for row in np.asarray(m, complex)]


def vector_to_json(v: np.ndarray):
    return [complex_to_json(z) for z in np.asarray(v, complex)]


def _as_complex(pair, where):
    if (not isinstance(pair, (list, tuple))) or len(pair) != 2:
        raise ValueError(f"{where}: complex numbers are [re, im] pairs")
    return complex(float(pair[0]), float(pair[1]))


def matrix_from_json(rows, where="matrix") -> np.ndarray:
    return np.array([[_as_complex(z, where) for z in row] for row in rows],
                    dtype=complex)


def vector_from_json(entries, where="vector") -> np.ndarray:
    return np.array([_as_complex(z, where) for z in entries], dtype=complex)


# -- algebras ---------------------------------------------------------------

def algebra_to_dict(alg: ConcreteAlgebra) -> dict:
    return {
        "ambient_dim": alg.ambient_dim,
        "basis": [matrix_to_json(b) for b in alg.basis],
        "name": alg.name,
    }


def algebra_from_dict(data: dict) -> ConcreteAlgebra:
    n = int(data["ambient_dim"])
    basis = np.array([matrix_from_json(b, "basis") for b in data["basis"]])
    if basis.shape[1:] != (n, n):
        raise ValueError(f"basis matrices are not {n}x{n}")
    return build_algebra(basis, name=str(data.get("name", "")))


# -- functionals ---------------------------------------------------------------

def functional_to_dict(phi: LinearFunctional) -> dict:
    return {"algebra": phi.algebra.name, "values": vector_to_json(phi.values)}


def functional_from_dict(data: dict, registry: dict) -> LinearFunctional:
    name = data["algebra"]
    if name not in registry:
        raise ValueError(f"unknown algebra reference {name!r}")
    alg = registry[name]
    values = vector_from_json(data["values"], "values")
    if values.shape != (alg.dim,):
        raise ValueError("functional length does not match the algebra dimension")
    return LinearFunctional(alg, values)


def trace_from_dict(data: dict, registry: dict) -> TraceFunctional:
    return as_trace(functional_from_dict(data, registry))


# -- channels --------------------------------------------------------------------

def channel_to_dict(ch: ChannelMap) -> dict:
    return {
        "source": ch.source.name,
        "target": ch.target.name,
        "matrix": matrix_to_json(ch.matrix),
    }


def channel_from_dict(data: dict, registry: dict) -> ChannelMap:
    for key in ("source", "target"):
        if data[key] not in registry:
            raise ValueError(f"unknown algebra reference {data[key]!r}")
    src, tgt = registry[data["source"]], registry[data["target"]]
    mat = matrix_from_json(data["matrix"], "matrix")
    return ChannelMap(src, tgt, mat)


# -- spectral triples ---------------------------------------------------------------

def triple_to_dict(t: SpectralTriple) -> dict:
    return {
        "algebra": t.algebra.name,
        "hilbert_dim": t.hilbert_dim,
        "rep": [matrix_to_json(r) for r in t.rep],
        "dirac": matrix_to_json(t.dirac),
        "grading": matrix_to_json(t.grading) if t.grading is not None else None,
    }


def triple_from_dict(data: dict, registry: dict) -> SpectralTriple:
    if data["algebra"] not in registry:
        raise ValueError(f"unknown algebra reference {data['algebra']!r}")
    alg = registry[data["algebra"]]
    h = int(data["hilbert_dim"])
    rep = np.array([matrix_from_json(r, "rep") for r in data["rep"]])
    dirac = matrix_from_json(data["dirac"], "dirac")
    grading = (matrix_from_json(data["grading"], "grading")
               if data.get("grading") is not None else None)
    if rep.shape != (alg.dim, h, h) or dirac.shape != (h, h):
        raise ValueError("triple shapes are inconsistent with hilbert_dim")
    return SpectralTriple(alg, rep, dirac, grading).validate()


# -- groups ------------------------------------------------------------------------

def group_to_dict(g: FiniteGroup, cocycle: Cocycle | None = None,
                  length: LengthFunction | None = None) -> dict:
    return {
        "order": g.order,
        "mult_table": g.mult.tolist(),
        "identity": g.identity,
        "name": g.name,
        "generators": list(g.generators),
        "cocycle": matrix_to_json(cocycle.table) if cocycle is not None else None,
        "length": [float(v) for v in length.values] if length is not None else None,
    }


def group_from_dict(data: dict):
    g = group_from_table(data["mult_table"], int(data["identity"]),
                         name=str(data.get("name", "G")),
                         generators=data.get("generators", ()))
    cocycle = None
    if data.get("cocycle") is not None:
        cocycle = Cocycle(g, matrix_from_json(data["cocycle"], "cocycle"))
    length = None
    if data.get("length") is not None:
        length = LengthFunction(g, np.array(data["length"], dtype=float))
    return g, cocycle, length


def pdf_to_dict(phi: PositiveDefiniteFunction) -> dict:
    return {"group": "", "values": vector_to_json(phi.values)}


def pdf_from_dict(data: dict, group: FiniteGroup) -> PositiveDefiniteFunction:
    values = vector_from_json(data["values"], "values")
    if values.shape != (group.order,):
        raise ValueError("positive definite function length mismatch")
    return PositiveDefiniteFunction(group, values)


# -- files -----------------------------------------------------------------------

def save_json(obj: dict, path: str):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1)
        fh.write("\n")


def load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ChoimetricError(f"{path}: malformed JSON ({exc})") from exc
