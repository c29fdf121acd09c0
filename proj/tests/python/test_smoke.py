import math

import numpy as np
import pytest

import cstar_workbench as cw


def test_shape():
    s = cw.Shape.parse("M2+M3")
    assert s.blocks == [2, 3]
    assert s.dimension == 13
    assert str(s) == "M2+M3"


def test_corpus_and_exact():
    names = cw.corpus_names()
    assert "phi_c" in names
    r = cw.evaluate("phi_c", "M2", mode="exact")
    assert r["exact"]
    assert r["value"] == 2.0
    assert cw.evaluate("phi_c", "C^3", mode="exact")["value"] == 0.0


def test_numeric_and_config_recorded():
    r = cw.evaluate("sup x:ball . norm(x*x)", "M2", mode="numeric", restarts=4, inner_restarts=2, local_steps=30)
    assert not r["exact"]
    assert 0.9 <= r["value"] <= 1.0 + 1e-9
    assert r["seed"] == 1


def test_validation_error():
    with pytest.raises(ValueError):
        cw.evaluate("phi_c", "M0")
    with pytest.raises(ValueError):
        cw.evaluate("sup x:ball . norm(", "M2")


def test_decompose():
    j = cw.decompose("M7", 3)
    assert len(j["parts"]) == 3
    assert len(j["remainder_abelians"]) == 1


def test_dixmier_center():
    x = [np.diag([1.0, 3.0]).astype(complex)]
    j = cw.dixmier(x, mode="exact")
    c = cw.element_from_json(j["center"])
    assert np.allclose(c[0], 2.0 * np.eye(2))
    ct = cw.center_valued_trace(x)
    assert np.allclose(ct[0], 2.0 * np.eye(2))


def test_archbold_e11():
    e11 = [np.array([[1, 0], [0, 0]], dtype=complex)]
    dist, dnorm = cw.archbold(e11)
    assert abs(dist - 0.5) < 1e-9
    assert abs(dnorm - 1.0) < 1e-6


def test_unitary_log_round_trip():
    theta = 0.7
    u = [np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]], dtype=complex)]
    h = cw.unitary_log(u)
    assert np.allclose(h[0], h[0].conj().T)
    assert np.allclose(cw.homotopy_path(h, 1.0)[0], u[0])
    assert np.allclose(cw.homotopy_path(h, 0.0)[0], np.eye(2))


def test_mvn_and_trace():
    p = [np.diag([1.0, 0.0, 0.0]).astype(complex)]
    q = [np.diag([1.0, 1.0, 0.0]).astype(complex)]
    assert cw.mvn_compare(p, q) == "p<q"
    assert cw.mvn_compare(q, p) == "q<p"
    assert cw.mvn_compare(p, p) == "equivalent"
    assert cw.trace_estimate("M3", [2], 8) == (2, 3)


def test_k0_and_limits():
    k = cw.k0("M4")
    assert k["totally_ordered"] and k["group_rank"] == 1
    shapes = sorted(tuple(sorted(s.blocks)) for s in cw.enumerate_shapes(3))
    # every partition of 1, 2 and 3
    assert shapes == sorted([(1,), (2,), (1, 1), (3,), (1, 2), (1, 1, 1)])
    rows = cw.k0_demo(0.5, 0.5, [4, 16])
    assert [r["n"] for r in rows] == [4, 16]
    assert rows[1]["rank_s"] == 4 and rows[1]["rank_lambda"] == 8
