"""Finite-dimensional C*-algebra workbench.

Thin wrappers over the C++ core. Elements are lists of square complex numpy
arrays, one per block; structured results come back as dicts.
"""

import json

import numpy as np

from . import _core
from ._core import (  # noqa: F401
    Shape,
    ValidationError,
    canonical,
    center_valued_trace,
    corpus_names,
    corpus_text,
    enumerate_shapes,
    homotopy_path,
    minimal_projection_under,
    mvn_compare,
    trace_estimate,
    unitary_log,
)

__all__ = [
    "Shape",
    "ValidationError",
    "archbold",
    "canonical",
    "center_valued_trace",
    "corpus_names",
    "corpus_text",
    "decompose",
    "dixmier",
    "element_from_json",
    "enumerate_shapes",
    "eval_along",
    "evaluate",
    "finite_model_search",
    "homotopy_path",
    "k0",
    "k0_demo",
    "minimal_projection_under",
    "mod_d_invariant",
    "mvn_compare",
    "trace_estimate",
    "unitary_log",
]


def _blocks(x):
    return [np.asarray(b, dtype=np.complex128) for b in x]


def element_from_json(j):
    """Element JSON ({"shape", "blocks"}) to a list of numpy blocks."""
    out = []
    for n, block in zip(j["shape"], j["blocks"]):
        flat = np.array([complex(re, im) for re, im in block], dtype=np.complex128)
        out.append(flat.reshape(n, n))
    return out


def evaluate(formula, algebra, mode="auto", seed=1, restarts=32, inner_restarts=16, local_steps=200):
    """Value of a sentence (DSL text or corpus name) on a shape such as "M2+M3"."""
    return json.loads(_core.evaluate(formula, str(algebra), mode, seed, restarts, inner_restarts, local_steps))


def decompose(algebra, d):
    return json.loads(_core.decompose(str(algebra), d))


def k0(algebra):
    return json.loads(_core.k0(str(algebra)))


def dixmier(x, mode="exact"):
    return json.loads(_core.dixmier(_blocks(x), mode))


def archbold(a, seed=1, restarts=32):
    """(dist_to_center, derivation_norm)."""
    return _core.archbold(_blocks(a), seed, restarts)


def eval_along(formula, rule, modulus=1, seed=1):
    return json.loads(_core.eval_along(formula, rule, modulus, seed))


def finite_model_search(formula, eps, max_dim, seed=1):
    return json.loads(_core.finite_model_search(formula, eps, max_dim, seed))


def k0_demo(s, lam, ns):
    return json.loads(_core.k0_demo(s, lam, list(ns)))


def mod_d_invariant(rule, d, subsequence=None):
    return json.loads(_core.mod_d_invariant(rule, d, subsequence))
