import cmath
import math

import numpy as np
import pytest

import skewls


def test_overlap_examples():
    h = skewls.circuit(1, [("H", [0])])
    value, se = skewls.estimate_overlap(h, h)
    assert value == 1 and se == 0
    x = skewls.circuit(1, [("X", [0])])
    assert abs(skewls.estimate_overlap(skewls.circuit(1, []), x)[0]) < 1e-15
    value, se = skewls.estimate_overlap(skewls.circuit(1, []), h, shots=100000, seed=3)
    assert abs(value - 1 / math.sqrt(2)) < 4 * se + 1e-3


def test_overlap_is_seeded():
    h = skewls.circuit(1, [("H", [0])])
    a = skewls.estimate_overlap(skewls.circuit(1, []), h, shots=500, seed=9)
    b = skewls.estimate_overlap(skewls.circuit(1, []), h, shots=500, seed=9)
    assert a == b


def test_copy_circuit_depth():
    for n in (2, 5, 16, 33):
        assert skewls.circuit_depth(skewls.copy_circuit(n)) == 2 * math.ceil(math.log2(n)) - 1


def test_constructions_and_reports():
    c = skewls.circuit(3, [("CNOT", [0, 2]), ("H", [1]), ("R", [2], [0.3, 0, 1, 0, 0.1])])
    ctrl = skewls.controlled(c, "lattice", l1=2, l2=2)
    assert ctrl["width"] == 4
    rep = skewls.depth_report(c, "ancilla", ancillas=2)
    assert rep["lower_bound"] <= rep["measured_depth"] <= rep["bound_value"]
    assert skewls.depth_report(c)["bound_value"] is None


def test_solvers_exact():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(16, 3)) + 1j * rng.normal(size=(16, 3))
    b = rng.normal(size=16) + 1j * rng.normal(size=16)
    r = skewls.solve_overdetermined(a, b, epsilon=0.05)
    assert r["residual_gap"] <= 0.05
    x_star = np.linalg.lstsq(a, b, rcond=None)[0]
    assert np.linalg.norm(r["coefficients"] - x_star) < 0.05

    c = rng.normal(size=3)
    assert skewls.solve_underdetermined(a, c)["residual_gap"] <= 0.1

    a1 = rng.normal(size=(8, 2))
    a2 = rng.normal(size=(2, 4))
    assert skewls.solve_factorized(a1, a2, rng.normal(size=8))["residual_gap"] <= 0.1
    assert skewls.solve_factorized(a1, a2, rng.normal(size=8), relaxed=True)["residual_gap"] <= 0.1


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        skewls.solve_overdetermined(np.ones((4, 2)), np.ones(3))
    with pytest.raises(ValueError):
        skewls.circuit_depth('{"width": 1, "layers": [')
    with pytest.raises(MemoryError):
        skewls.solve_overdetermined(np.eye(4)[:, :2], np.ones(4), epsilon=1e-7, mode="sampled")
    assert skewls.derive_seed(1, "a") != skewls.derive_seed(1, "b")
    assert cmath.isclose(skewls._core.overlap_exact(skewls.copy_circuit(2)), 1)
