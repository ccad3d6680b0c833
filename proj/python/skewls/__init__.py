"""Python access to the skewls solvers and circuit tools.

Circuits cross the boundary as JSON text in the same schema the command line
tool reads; solver reports come back as dictionaries.
"""
import json

import numpy as np

from . import _core
from ._core import ContractError, DomainError, ResourceError, copy_circuit, derive_seed

__all__ = [
    "ContractError",
    "DomainError",
    "ResourceError",
    "circuit",
    "circuit_depth",
    "controlled",
    "copy_circuit",
    "depth_report",
    "derive_seed",
    "estimate_overlap",
    "solve_factorized",
    "solve_overdetermined",
    "solve_underdetermined",
]


def _text(c):
    return c if isinstance(c, str) else json.dumps(c)


def circuit(width, gates):
    """Build circuit JSON from (kind, qubits[, params]) tuples, one gate per layer."""
    layers = []
    for g in gates:
        kind, qubits = g[0], list(g[1])
        params = list(g[2]) if len(g) > 2 else []
        layers.append([{"kind": kind, "qubits": qubits, "params": params}])
    return {"width": width, "layers": layers}


def circuit_depth(c):
    return _core.circuit_depth(_text(c))


def controlled(c, construction="naive", ancillas=1, l1=0, l2=0):
    return json.loads(_core.controlled(_text(c), construction, ancillas, l1, l2))


def depth_report(c, construction="naive", ancillas=1, l1=0, l2=0):
    return json.loads(_core.depth_report(_text(c), construction, ancillas, l1, l2))


def estimate_overlap(a, b, shots=0, seed=0, construction="naive", ancillas=1, l1=0, l2=0):
    """Returns (value, standard_error) for <0|A^dag B|0>."""
    return _core.estimate_overlap(_text(a), _text(b), shots, seed, construction, ancillas, l1, l2)


def _report(text):
    r = json.loads(text)
    r["coefficients"] = np.array([complex(re, im) for re, im in r["coefficients"]])
    return r


def solve_overdetermined(a, b, epsilon=0.1, mode="exact", shots=None, seed=0, budget_scale=1.0):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return _report(_core.solve_overdetermined(a, b, epsilon, mode, shots, seed, budget_scale))


def solve_underdetermined(a, c, epsilon=0.1, mode="exact", shots=None, seed=0, budget_scale=1.0):
    a = np.asarray(a, dtype=complex)
    c = np.asarray(c, dtype=complex)
    return _report(_core.solve_underdetermined(a, c, epsilon, mode, shots, seed, budget_scale))


def solve_factorized(a1, a2, b, relaxed=False, epsilon=0.1, mode="exact", shots=None, seed=0, budget_scale=1.0):
    a1 = np.asarray(a1, dtype=complex)
    a2 = np.asarray(a2, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return _report(_core.solve_factorized(a1, a2, b, relaxed, epsilon, mode, shots, seed, budget_scale))
